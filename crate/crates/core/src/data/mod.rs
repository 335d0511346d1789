//! Transaction tables: CSV ingestion, robust scaling, correlation-based
//! feature selection and the legitimate-only training split.

mod scale;
mod select;
mod split;
pub mod synthetic;
mod table;

pub use scale::{quantile, robust_scale, ScaledColumn};
pub use select::{
    pearson_correlation, select_features, Correlation, FeatureScore, SelectionReport,
};
pub use split::{encode_rows, make_splits, prepare, PreparedData, SplitRow, SplitSpec, Splits};
pub use synthetic::{generate as generate_synthetic, SyntheticConfig};
pub use table::{load_csv, TransactionTable, LABEL_COLUMN};
