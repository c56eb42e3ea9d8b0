//! Embed a two-community graph with weighted random walks and skip-gram,
//! then show that communities separate in cosine similarity.

use gpa::embedding::cosine;
use gpa::gen;
use gpa::{generate_walks, train_skipgram, SkipGramParams, WalkParams};

fn main() -> gpa::Result<()> {
    let (g, blocks) = gen::planted_partition(200, 2, 12.0, 1.0, 3);
    let g = gen::connect(&g, 3);

    let wp = WalkParams { walks_per_node: 10, walk_length: 40 };
    let corpus = generate_walks(&g, &wp, 3)?;
    println!("corpus: {} walks, {} tokens", corpus.walks.len(), corpus.token_count());

    let sp = SkipGramParams { dim: 32, ..Default::default() };
    let emb = train_skipgram(&corpus, g.node_count(), &sp, None, 3)?;

    let mut intra = (0.0, 0usize);
    let mut inter = (0.0, 0usize);
    for a in 0..g.node_count() {
        for b in (a + 1)..g.node_count() {
            let s = cosine(emb.row(a), emb.row(b));
            if blocks[a] == blocks[b] {
                intra = (intra.0 + s, intra.1 + 1);
            } else {
                inter = (inter.0 + s, inter.1 + 1);
            }
        }
    }
    println!("mean intra-community cosine: {:.4}", intra.0 / intra.1 as f64);
    println!("mean inter-community cosine: {:.4}", inter.0 / inter.1 as f64);
    Ok(())
}
