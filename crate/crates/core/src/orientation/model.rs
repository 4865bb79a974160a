use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use super::{SITTING_MU_DEG, SITTING_SIGMA_DEG, WALKING_MU_DEG, WALKING_SIGMA_DEG};
use crate::rng;
use crate::stats::SampleSeries;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Laplace,
    Gaussian,
}

/// How the density is normalised over the truncation interval.
///
/// `Simplified` drops the truncation normaliser (and, for the CDF, uses the
/// untruncated two-branch Laplace form). It is accurate only when almost
/// all mass of the untruncated law already lies inside the bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    #[default]
    Exact,
    Simplified,
}

/// Truncated Laplace or Gaussian law of the polar angle θ (radians).
///
/// `scale` is the Laplace scale `b_θ` or the Gaussian standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationModel {
    pub family: Family,
    pub mu: f64,
    pub scale: f64,
    pub lower: f64,
    pub upper: f64,
    #[serde(default)]
    pub normalization: Normalization,
}

impl OrientationModel {
    pub fn new(family: Family, mu: f64, scale: f64, lower: f64, upper: f64) -> Result<Self> {
        let m = Self {
            family,
            mu,
            scale,
            lower,
            upper,
            normalization: Normalization::Exact,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidModel(format!(
                "scale must be > 0, got {}",
                self.scale
            )));
        }
        if !self.mu.is_finite() {
            return Err(Error::InvalidModel("location must be finite".into()));
        }
        if !(self.lower >= 0.0 && self.lower < self.upper && self.upper <= FRAC_PI_2) {
            return Err(Error::InvalidModel(format!(
                "bounds must satisfy 0 <= lower < upper <= pi/2, got [{}, {}]",
                self.lower, self.upper
            )));
        }
        Ok(())
    }

    /// Laplace law on `[0, π/2]` with scale `b_θ = sqrt(σ²/2)` derived from
    /// the standard deviation `sigma`.
    pub fn laplace_from_std(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(
            Family::Laplace,
            mu,
            (sigma * sigma / 2.0).sqrt(),
            0.0,
            FRAC_PI_2,
        )
    }

    pub fn gaussian(mu: f64, sigma: f64) -> Result<Self> {
        Self::new(Family::Gaussian, mu, sigma, 0.0, FRAC_PI_2)
    }

    /// Sitting activities: Laplace, μ = 41.39°, σ = 7.68°.
    pub fn sitting() -> Self {
        Self::laplace_from_std(SITTING_MU_DEG.to_radians(), SITTING_SIGMA_DEG.to_radians())
            .expect("valid constants")
    }

    /// Walking activities: Gaussian, μ = 29.67°, σ = 7.78°.
    pub fn walking() -> Self {
        Self::gaussian(WALKING_MU_DEG.to_radians(), WALKING_SIGMA_DEG.to_radians())
            .expect("valid constants")
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }

    /// Standard deviation of the untruncated law (`√2·b` for Laplace).
    pub fn std_dev(&self) -> f64 {
        match self.family {
            Family::Laplace => SQRT_2 * self.scale,
            Family::Gaussian => self.scale,
        }
    }

    pub fn base_pdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Laplace => (-(x - self.mu).abs() / self.scale).exp() / (2.0 * self.scale),
            Family::Gaussian => {
                let z = (x - self.mu) / self.scale;
                (-0.5 * z * z).exp() / (self.scale * (TAU).sqrt())
            }
        }
    }

    /// CDF of the untruncated law (`G` for Laplace).
    pub fn base_cdf(&self, x: f64) -> f64 {
        match self.family {
            Family::Laplace => {
                let z = (x - self.mu) / self.scale;
                if z < 0.0 {
                    0.5 * z.exp()
                } else {
                    1.0 - 0.5 * (-z).exp()
                }
            }
            Family::Gaussian => 0.5 * erfc(-(x - self.mu) / (self.scale * SQRT_2)),
        }
    }

    fn base_quantile(&self, p: f64) -> f64 {
        match self.family {
            Family::Laplace => {
                if p < 0.5 {
                    self.mu + self.scale * (2.0 * p).ln()
                } else {
                    self.mu - self.scale * (2.0 * (1.0 - p)).ln()
                }
            }
            Family::Gaussian => {
                let std = Normal::standard();
                self.mu + self.scale * std.inverse_cdf(p)
            }
        }
    }

    /// Probability mass of the untruncated law inside `[lower, upper]`.
    pub fn mass(&self) -> f64 {
        self.base_cdf(self.upper) - self.base_cdf(self.lower)
    }

    pub fn pdf(&self, theta: f64) -> f64 {
        if theta < self.lower || theta > self.upper {
            return 0.0;
        }
        match self.normalization {
            Normalization::Exact => self.base_pdf(theta) / self.mass(),
            Normalization::Simplified => self.base_pdf(theta),
        }
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        if theta <= self.lower {
            return 0.0;
        }
        if theta >= self.upper {
            return 1.0;
        }
        let v = match self.normalization {
            Normalization::Exact => {
                (self.base_cdf(theta) - self.base_cdf(self.lower)) / self.mass()
            }
            Normalization::Simplified => self.base_cdf(theta),
        };
        v.clamp(0.0, 1.0)
    }

    /// Inverse of the exactly normalised truncated CDF.
    pub fn quantile(&self, u: f64) -> f64 {
        let lo = self.base_cdf(self.lower);
        let hi = self.base_cdf(self.upper);
        let p = lo + u.clamp(0.0, 1.0) * (hi - lo);
        self.base_quantile(p).clamp(self.lower, self.upper)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.quantile(rng.random::<f64>())).collect()
    }
}

pub fn trunc_pdf(m: &OrientationModel, theta: f64) -> f64 {
    m.pdf(theta)
}

pub fn trunc_cdf(m: &OrientationModel, theta: f64) -> f64 {
    m.cdf(theta)
}

/// `n` i.i.d. draws by inverse-CDF sampling, deterministic in `seed`.
pub fn sample(m: &OrientationModel, n: usize, seed: u64) -> Result<SampleSeries> {
    let mut r = rng::seeded(seed);
    SampleSeries::new(m.sample_with(n, &mut r))
}

/// Azimuth law `ω ~ U[−π, π)`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct UniformAzimuth;

impl UniformAzimuth {
    pub fn pdf(&self, omega: f64) -> f64 {
        if (-PI..PI).contains(&omega) {
            1.0 / TAU
        } else {
            0.0
        }
    }

    pub fn cdf(&self, omega: f64) -> f64 {
        ((omega + PI) / TAU).clamp(0.0, 1.0)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| -PI + TAU * rng.random::<f64>()).collect()
    }
}
