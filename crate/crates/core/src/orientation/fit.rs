use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::model::{Family, OrientationModel};
use crate::stats::{self, SampleSeries};
use crate::{Error, Result};

/// Fitted model together with the diagnostics used to compare families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub model: OrientationModel,
    /// Kolmogorov–Smirnov distance between the data and the fitted model.
    pub ksd: f64,
    /// `None` when fewer than three samples were given.
    pub skewness: Option<f64>,
    /// `None` when fewer than four samples were given.
    pub kurtosis: Option<f64>,
}

/// `sup_x |F̂(x) − F_model(x)|` over the sample points.
pub fn ksd_vs_model(a: &SampleSeries, m: &OrientationModel) -> Result<f64> {
    stats::ksd_vs_cdf(a.values(), |x| m.cdf(x))
}

/// Maximum-likelihood fit on the default support `[0, π/2]`.
pub fn fit_mle(a: &SampleSeries, family: Family) -> Result<FitReport> {
    fit_mle_bounded(a, family, 0.0, FRAC_PI_2)
}

/// Maximum-likelihood fit of the untruncated family; the returned model is
/// truncated to `[lower, upper]`.
///
/// Laplace: location is the sample median (lower middle for even `n`) and
/// scale the mean absolute deviation from it. Gaussian: sample mean and
/// population standard deviation.
pub fn fit_mle_bounded(
    a: &SampleSeries,
    family: Family,
    lower: f64,
    upper: f64,
) -> Result<FitReport> {
    let xs = a.values();
    if xs.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: xs.len(),
        });
    }
    let (mu, scale) = match family {
        Family::Laplace => {
            let med = stats::median(xs)?;
            let b = xs.iter().map(|x| (x - med).abs()).sum::<f64>() / xs.len() as f64;
            (med, b)
        }
        Family::Gaussian => (stats::mean(xs), stats::variance(xs).sqrt()),
    };
    if scale <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let model = OrientationModel::new(family, mu, scale, lower, upper)?;
    Ok(FitReport {
        ksd: ksd_vs_model(a, &model)?,
        skewness: stats::skewness(xs).ok(),
        kurtosis: stats::kurtosis(xs).ok(),
        model,
    })
}
