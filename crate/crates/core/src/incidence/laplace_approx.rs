use serde::{Deserialize, Serialize};

use super::IncidenceCoeffs;
use crate::orientation::{Family, OrientationModel};
use crate::{Error, Result};

/// Truncated-Laplace approximation of the `cos ψ` law, obtained by
/// linearising `g` around the orientation mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub mu_hat: f64,
    pub b_hat: f64,
    pub tau_min: f64,
    pub tau_max: f64,
}

impl ApproxParams {
    fn check_scale(&self) -> Result<()> {
        if !(self.b_hat > 0.0) {
            return Err(Error::DegenerateScale {
                location: self.mu_hat,
            });
        }
        Ok(())
    }

    /// Normaliser `Δ` of the truncated law.
    pub fn normalizer(&self) -> Result<f64> {
        self.check_scale()?;
        let bh = self.b_hat;
        Ok(2.0
            * bh
            * (1.0
                - 0.5 * ((self.mu_hat - self.tau_max) / bh).exp()
                - 0.5 * ((self.tau_min - self.mu_hat) / bh).exp()))
    }

    pub fn pdf(&self, tau: f64) -> Result<f64> {
        let delta = self.normalizer()?;
        if !(tau >= self.tau_min && tau <= self.tau_max) {
            return Err(Error::OutOfSupport {
                value: tau,
                lo: self.tau_min,
                hi: self.tau_max,
            });
        }
        Ok((-(tau - self.mu_hat).abs() / self.b_hat).exp() / delta)
    }

    pub fn cdf(&self, tau: f64) -> f64 {
        let Ok(delta) = self.normalizer() else {
            return if tau >= self.mu_hat { 1.0 } else { 0.0 };
        };
        if tau <= self.tau_min {
            return 0.0;
        }
        if tau >= self.tau_max {
            return 1.0;
        }
        let bh = self.b_hat;
        let low = ((self.tau_min - self.mu_hat) / bh).exp();
        let v = if tau < self.mu_hat {
            bh / delta * (((tau - self.mu_hat) / bh).exp() - low)
        } else {
            bh / delta * (2.0 - ((self.mu_hat - tau) / bh).exp() - low)
        };
        v.clamp(0.0, 1.0)
    }
}

/// `μ̂ = a sin μ + b cos μ`, `b̂ = b_θ |a cos μ − b sin μ|`, support
/// `[−1, b]` for `a < 0` and `[−1, √(a²+b²)]` otherwise.
pub fn approx_params(c: &IncidenceCoeffs, m: &OrientationModel) -> Result<ApproxParams> {
    if m.family != Family::Laplace {
        return Err(Error::InvalidModel(
            "the truncated-Laplace approximation needs a Laplace orientation model".into(),
        ));
    }
    let (s, co) = m.mu.sin_cos();
    Ok(ApproxParams {
        mu_hat: c.a * s + c.b * co,
        b_hat: m.scale * (c.a * co - c.b * s).abs(),
        tau_min: -1.0,
        tau_max: if c.a < 0.0 { c.b } else { c.amplitude() },
    })
}

pub fn approx_pdf(c: &IncidenceCoeffs, m: &OrientationModel, tau: f64) -> Result<f64> {
    approx_params(c, m)?.pdf(tau)
}

pub fn approx_cdf(c: &IncidenceCoeffs, m: &OrientationModel, tau: f64) -> Result<f64> {
    let p = approx_params(c, m)?;
    p.normalizer()?;
    Ok(p.cdf(tau))
}
