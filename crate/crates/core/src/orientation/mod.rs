//! Polar-angle distribution models and their fitting.

mod fit;
mod model;

pub use fit::{fit_mle, fit_mle_bounded, ksd_vs_model, FitReport};
pub use model::{
    sample, trunc_cdf, trunc_pdf, Family, Normalization, OrientationModel, UniformAzimuth,
};

/// Sitting users, Laplace fit: location (degrees).
pub const SITTING_MU_DEG: f64 = 41.39;
/// Sitting users, Laplace fit: standard deviation (degrees).
pub const SITTING_SIGMA_DEG: f64 = 7.68;
/// Walking users, Gaussian fit: mean (degrees).
pub const WALKING_MU_DEG: f64 = 29.67;
/// Walking users, Gaussian fit: standard deviation (degrees).
pub const WALKING_SIGMA_DEG: f64 = 7.78;
