//! Learning primitives shared by the extraction pipeline: a soft-margin SVM
//! trained by SMO with one-vs-one multiclass voting, a linear-chain CRF,
//! k-means, feature selection and cross-validated grid search.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar to `f64`, which is what the pipeline uses.

pub mod crf;
pub mod error;
pub mod grid;
pub mod kernel;
pub mod kmeans;
pub mod lbfgs;
pub mod metrics;
pub mod multiclass;
pub mod real;
pub mod scale;
pub mod select;
pub mod svm;

pub use error::{LearnError, Result};
pub use grid::{GridSearchSpec, KernelFamily};
pub use metrics::{ClassScores, ConfusionMatrix};
pub use multiclass::MulticlassOptions;
pub use real::Real;

pub type Kernel = kernel::Kernel<f64>;
pub type BinaryMachine = svm::BinaryMachine<f64>;
pub type SvmModel = multiclass::SvmModel<f64>;
pub type CrfModel = crf::CrfModel<f64>;
pub type MinMaxScaler = scale::MinMaxScaler<f64>;
pub type GridReport = grid::GridReport<f64>;

pub type SvmModel32 = multiclass::SvmModel<f32>;
pub type CrfModel32 = crf::CrfModel<f32>;
