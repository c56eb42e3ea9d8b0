//! Graph-embedding toolkit built around a partition-based initialization
//! pipeline.
//!
//! The core idea: instead of starting skip-gram embeddings from random
//! vectors, partition the graph into balanced blocks, embed the much
//! smaller weighted abstract graph of blocks, copy each block's vector to
//! its members, and smooth with neighbor averaging. The result is a warm
//! start that speeds up and often improves downstream embedding quality on
//! link prediction and node classification.
//!
//! Modules follow the pipeline order:
//!
//! * [`graph`]: edge-list graphs, labels, components, I/O
//! * [`partition`]: balanced multilevel k-way partitioning
//! * [`abstract_graph`]: weighted block-level quotient graph
//! * [`alias`], [`walk`]: alias-method sampling and weighted random walks
//! * [`skipgram`]: skip-gram with negative sampling over walk corpora
//! * [`propagate`]: embedding propagation and the end-to-end init
//! * [`stats`], [`hyperopt`]: graph features and learned walk-parameter
//!   selection
//! * [`eval`]: link-prediction / classification harness
//! * [`gen`]: seeded random graph generators for tests and experiments

pub mod abstract_graph;
pub mod alias;
pub mod embedding;
pub mod error;
pub mod eval;
pub mod gen;
pub mod graph;
pub mod hyperopt;
pub mod partition;
pub mod propagate;
pub mod skipgram;
pub mod stats;
pub mod walk;

pub use abstract_graph::{build_abstract, AbstractGraph};
pub use alias::AliasTable;
pub use embedding::EmbeddingMatrix;
pub use error::{GpaError, Result};
pub use graph::{load_edge_list, load_labels, Graph, LabelSet};
pub use partition::{default_k, partition, Partitioning};
pub use propagate::{init_for_graph, propagate, PropagationConfig, PropagationTrace};
pub use skipgram::{embed_abstract, train_skipgram, SkipGramParams};
pub use stats::{compute_stats, GraphStats};
pub use walk::{generate_walks, WalkCorpus, WalkParams};
