//! Alias tables for O(1) weighted sampling.

use rand::Rng;

use crate::error::{GpaError, Result};

/// Alias table over `size` elements. Built in O(size), sampled in O(1).
#[derive(Debug, Clone)]
pub struct AliasTable {
    alias_prob: Vec<f64>,
    alias: Vec<usize>,
}

impl AliasTable {
    /// Build from a probability vector. Probabilities must be positive;
    /// if their sum deviates from 1 beyond 1e-9 they are renormalized.
    ///
    /// Donor selection is by smallest index from each of the small/large
    /// worklists, so the table layout is reproducible.
    pub fn build(probs: &[f64]) -> Result<Self> {
        if probs.is_empty() {
            return Err(GpaError::domain("alias table needs at least one element"));
        }
        let sum: f64 = probs.iter().sum();
        if probs.iter().any(|&p| p <= 0.0 || !p.is_finite()) || sum <= 0.0 {
            return Err(GpaError::domain("alias probabilities must be positive and finite"));
        }
        let n = probs.len();
        let scale = n as f64 / sum;
        let mut alias_prob: Vec<f64> = probs.iter().map(|&p| p * scale).collect();
        let mut alias: Vec<usize> = (0..n).collect();

        // Index-ordered worklists, consumed smallest-first.
        let mut small: Vec<usize> = (0..n).filter(|&i| alias_prob[i] < 1.0).collect();
        let mut large: Vec<usize> = (0..n).filter(|&i| alias_prob[i] > 1.0).collect();
        small.reverse();
        large.reverse();

        while let Some(&y) = large.last() {
            let Some(x) = small.pop() else { break };
            alias[x] = y;
            alias_prob[y] -= 1.0 - alias_prob[x];
            if alias_prob[y] <= 1.0 {
                large.pop();
                if alias_prob[y] < 1.0 {
                    // Keep the worklist ordered by index.
                    let pos = small.iter().rposition(|&s| s > y).map_or(0, |p| p + 1);
                    small.insert(pos, y);
                }
            }
        }
        // Residual entries are off 1 only by accumulated rounding.
        for p in &mut alias_prob {
            if (*p - 1.0).abs() < 1e-9 || *p > 1.0 {
                *p = 1.0;
            }
        }
        Ok(AliasTable { alias_prob, alias })
    }

    pub fn size(&self) -> usize {
        self.alias_prob.len()
    }

    pub fn alias_prob(&self) -> &[f64] {
        &self.alias_prob
    }

    pub fn alias(&self) -> &[usize] {
        &self.alias
    }

    /// Draw one element index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let i = rng.gen_range(0..self.alias_prob.len());
        if rng.gen::<f64>() < self.alias_prob[i] {
            i
        } else {
            self.alias[i]
        }
    }

    /// The probability the table actually encodes for element `e`:
    /// (1/n)·(P_a(e) + Σ_{x: A(x)=e} (1 − P_a(x))).
    pub fn implied_probability(&self, e: usize) -> f64 {
        let n = self.alias_prob.len() as f64;
        let mut mass = self.alias_prob[e];
        for x in 0..self.alias.len() {
            if self.alias[x] == e && x != e {
                mass += 1.0 - self.alias_prob[x];
            }
        }
        mass / n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn uniform_distribution_needs_no_aliases() {
        let t = AliasTable::build(&[1.0 / 3.0; 3]).unwrap();
        assert_eq!(t.alias_prob(), &[1.0, 1.0, 1.0]);
        assert_eq!(t.alias(), &[0, 1, 2]);
    }

    #[test]
    fn hand_traced_half_quarter_quarter() {
        // Scaled probs (1.5, 0.75, 0.75); smallest-index selection pairs
        // x=1 with y=0 (P_a(0) -> 1.25), then x=2 with y=0 (P_a(0) -> 1.0).
        let t = AliasTable::build(&[0.5, 0.25, 0.25]).unwrap();
        assert_eq!(t.alias_prob(), &[1.0, 0.75, 0.75]);
        assert_eq!(t.alias(), &[0, 0, 0]);
    }

    #[test]
    fn implied_distribution_is_exact_on_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..64 {
            let n = rng.gen_range(1..=64);
            let raw: Vec<f64> = (0..n).map(|_| rng.gen::<f64>() + 1e-3).collect();
            let sum: f64 = raw.iter().sum();
            let probs: Vec<f64> = raw.iter().map(|&p| p / sum).collect();
            let t = AliasTable::build(&probs).unwrap();
            for (e, &p) in probs.iter().enumerate() {
                assert!(
                    (t.implied_probability(e) - p).abs() < 1e-9,
                    "element {e}: implied {} vs target {p}",
                    t.implied_probability(e)
                );
            }
        }
    }

    #[test]
    fn single_element_always_sampled() {
        let t = AliasTable::build(&[1.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(t.sample(&mut rng), 0);
        }
    }

    #[test]
    fn empirical_frequencies_match_target() {
        let probs = [0.5, 0.25, 0.25];
        let t = AliasTable::build(&probs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let draws = 1_000_000;
        let mut counts = [0usize; 3];
        for _ in 0..draws {
            counts[t.sample(&mut rng)] += 1;
        }
        let tv: f64 = counts
            .iter()
            .zip(probs.iter())
            .map(|(&c, &p)| (c as f64 / draws as f64 - p).abs())
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.005, "total variation {tv}");
    }

    #[test]
    fn uniform_100_chi_squared() {
        let probs = vec![0.01; 100];
        let t = AliasTable::build(&probs).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let draws = 1_000_000usize;
        let mut counts = vec![0usize; 100];
        for _ in 0..draws {
            counts[t.sample(&mut rng)] += 1;
        }
        let expected = draws as f64 / 100.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // 99 degrees of freedom, critical value at significance 0.001.
        assert!(chi2 < 148.23, "chi-squared {chi2}");
    }

    #[test]
    fn fixed_seed_gives_fixed_draws() {
        let t = AliasTable::build(&[0.2, 0.3, 0.5]).unwrap();
        let a: Vec<usize> =
            (0..50).scan(ChaCha8Rng::seed_from_u64(9), |r, _| Some(t.sample(r))).collect();
        let b: Vec<usize> =
            (0..50).scan(ChaCha8Rng::seed_from_u64(9), |r, _| Some(t.sample(r))).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(AliasTable::build(&[]).is_err());
    }

    #[test]
    fn sample_never_out_of_range() {
        let t = AliasTable::build(&[0.7, 0.1, 0.1, 0.1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10_000 {
            assert!(t.sample(&mut rng) < t.size());
        }
    }
}
