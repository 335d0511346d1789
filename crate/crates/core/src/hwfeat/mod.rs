//! Measurement-count features and a logistic classifier for circuit jobs.
//!
//! Each job is a histogram of SWAP-test readouts. Two features are taken
//! from it: the frequency of the reference outcome and the Shannon entropy
//! of the empirical distribution.

mod jobs;
mod logistic;

pub use jobs::{
    entropy_feature, extract_features, fidelity_feature, load_jobs, save_jobs, synthesize_jobs,
    FeaturePair, JobRecord, JobSynthesis,
};
pub use logistic::{
    evaluate_jobs, fit_logistic, fit_logistic_traced, youden_threshold, LogisticConfig,
    LogisticModel,
};
