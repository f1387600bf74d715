//! Statistical data wrangling.
//!
//! Modules, roughly in dependency order:
//!
//! * [`univariate`]: aggregates, type-7 quantiles, scaling, ranks, ECDF,
//!   histograms.
//! * [`categorical`]: factors, one-hot encoding, binning, contingency tables.
//! * [`tabular`]: CSV ingestion, missing values, group splitting, imputation.
//! * [`distributions`]: parametric families, fitting, inverse-transform
//!   sampling.
//! * [`hypothesis`]: Kolmogorov-Smirnov and Pearson chi-squared tests.
//! * [`linalg`]: dense matrices, Jacobi SVD, PCA.
//! * [`regression`]: correlation, least squares, fit diagnostics.
//! * [`spatial`]: distances, K-d trees, nearest-neighbour models, k-means,
//!   outlier detection.
//! * [`timeseries`]: epoch dates, moving windows, gap filling, detrending.
//! * [`cli`]: the `wrangle` command-line front end.

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod categorical;
pub mod cli;
pub mod datasets;
pub mod distributions;
pub mod error;
pub mod hypothesis;
pub mod linalg;
pub mod regression;
pub mod rng;
pub mod spatial;
pub mod special;
pub mod tabular;
pub mod timeseries;
pub mod univariate;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use rng::Rng;
