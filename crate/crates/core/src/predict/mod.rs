//! Prediction tasks: dataset construction, a from-scratch random forest,
//! chronological walk-forward evaluation, ROC-AUC, window sweeps, and
//! feature ablations.

pub mod auc;
pub mod dataset;
pub mod forest;
pub mod report;
pub mod walkforward;

pub use auc::roc_auc;
pub use dataset::{build_task1, build_task2, Dataset, PredictSources, TaskConfig, TaskDatasets};
pub use forest::{train_forest, ForestHyper, ForestModel};
pub use report::{evaluate_variant, feature_ablation, window_sweep, CoinResult, EvalReport, SweepRow};
pub use walkforward::walk_forward;
