//! Precomputed-kernel C-SVC and the split/selection/evaluation protocol.

mod experiment;
mod smo;
mod split;

pub use experiment::{
    binary_labels, default_c_grid, default_seeds, evaluate, model_select, run_experiment,
    run_with_features, run_with_gram, EvalReport, SeedResult, Selection, DEFAULT_H_GRID,
};
pub use smo::{
    dual_objective, svm_predict, svm_train, svm_train_with, DenseKernel, GramView, KernelAccess,
    SvmModel, SvmParams, DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};
pub use split::{make_splits, split_sizes, SplitPlan};
