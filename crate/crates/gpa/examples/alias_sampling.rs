//! Build an alias table for a skewed distribution and check the empirical
//! frequencies against it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gpa::AliasTable;

fn main() -> gpa::Result<()> {
    let probs = [0.5, 0.25, 0.125, 0.0625, 0.0625];
    let table = AliasTable::build(&probs)?;

    println!("element  target   implied");
    for (i, &p) in probs.iter().enumerate() {
        println!("{i:>7}  {p:>6.4}  {:>8.4}", table.implied_probability(i));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let draws = 1_000_000;
    let mut counts = vec![0usize; probs.len()];
    for _ in 0..draws {
        counts[table.sample(&mut rng)] += 1;
    }

    println!("\nelement  target   empirical ({draws} draws)");
    for (i, &p) in probs.iter().enumerate() {
        println!("{i:>7}  {p:>6.4}  {:>9.4}", counts[i] as f64 / draws as f64);
    }
    Ok(())
}
