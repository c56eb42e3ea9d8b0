//! Downstream evaluation: link prediction, node classification, and the
//! init-comparison harness.

pub mod classify;
pub mod linkpred;
pub mod report;

pub use classify::{f1_scores, make_classification_split, train_ovr_logreg, OvrLogReg};
pub use linkpred::{link_precision, link_precision_detailed, make_link_split, LinkPredSplit, Metric};
pub use report::{run_comparison, ComparisonReport, InitMode, Task};
