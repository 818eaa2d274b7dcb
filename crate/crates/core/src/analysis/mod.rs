//! Storage accounting, statistics, classification and significance tests.

mod classify;
mod mcnemar;
mod metrics;
mod stats;

pub use classify::{
    evaluate, extract_features, features, normalize_counts, train_centroids, train_centroids_for, CentroidModel,
    FeatureConfig, DEFAULT_RESOLUTION,
};
pub use mcnemar::{mcnemar_from_counts, mcnemar_p_exact, mcnemar_test, McNemarResult};
pub use metrics::{Averages, ClassMetrics, EvalReport};
pub use stats::{
    ceil_log2, char_distribution, entropy, entropy_floor_bits, storage_bits, storage_report, CharDistribution,
    StorageBits, StorageReport,
};
