use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::laplace_approx::{self, ApproxParams};
use super::IncidenceCoeffs;
use crate::orientation::{Normalization, OrientationModel};
use crate::quadrature::{self, Estimate};
use crate::{Error, Result};

const PEAK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CosPsiKind {
    /// Exact law with `a < 0`.
    ExactCase1,
    /// Exact law with `a >= 0`.
    ExactCase2,
    /// Truncated-Laplace approximation.
    ApproxTruncLaplace,
}

/// Distribution of `cos ψ` induced by a random polar angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CosPsiDistribution {
    pub coeffs: IncidenceCoeffs,
    pub theta_model: OrientationModel,
    pub kind: CosPsiKind,
    pub support: (f64, f64),
    pub tau_star: Option<f64>,
    /// Upper end of the support.
    pub ss_f: f64,
    approx: Option<ApproxParams>,
}

impl CosPsiDistribution {
    pub fn exact(coeffs: IncidenceCoeffs, theta_model: OrientationModel) -> Result<Self> {
        theta_model.validate()?;
        let (lo, hi) = exact_support(&coeffs, &theta_model);
        let kind = if coeffs.a < 0.0 {
            CosPsiKind::ExactCase1
        } else {
            CosPsiKind::ExactCase2
        };
        Ok(Self {
            coeffs,
            theta_model,
            kind,
            support: (lo, hi),
            tau_star: tau_star(&coeffs, &theta_model),
            ss_f: hi,
            approx: None,
        })
    }

    pub fn approximate(coeffs: IncidenceCoeffs, theta_model: OrientationModel) -> Result<Self> {
        let p = laplace_approx::approx_params(&coeffs, &theta_model)?;
        let tau_star = (p.mu_hat > p.tau_min && p.mu_hat < p.tau_max).then_some(p.mu_hat);
        Ok(Self {
            coeffs,
            theta_model,
            kind: CosPsiKind::ApproxTruncLaplace,
            support: (p.tau_min, p.tau_max),
            tau_star,
            ss_f: p.tau_max,
            approx: Some(p),
        })
    }

    pub fn approx_params(&self) -> Option<&ApproxParams> {
        self.approx.as_ref()
    }

    /// Density at `tau`, an error when `tau` is outside the open support.
    pub fn pdf(&self, tau: f64) -> Result<f64> {
        let (lo, hi) = self.support;
        if !(tau > lo && tau < hi) {
            return Err(Error::OutOfSupport { value: tau, lo, hi });
        }
        match &self.approx {
            Some(p) => p.pdf(tau),
            None => Ok(self.density(tau)),
        }
    }

    /// Density at `tau`, zero outside the support.
    pub fn density(&self, tau: f64) -> f64 {
        let (lo, hi) = self.support;
        if !(tau > lo && tau < hi) {
            return 0.0;
        }
        match &self.approx {
            Some(p) => p.pdf(tau).unwrap_or(0.0),
            None => {
                let r = self.coeffs.amplitude();
                let jac = (r * r - tau * tau).sqrt();
                if !(jac > 0.0) {
                    return 0.0;
                }
                self.preimages(tau)
                    .into_iter()
                    .flatten()
                    .map(|t| self.theta_model.pdf(t))
                    .sum::<f64>()
                    / jac
            }
        }
    }

    pub fn cdf(&self, tau: f64) -> f64 {
        let (lo, hi) = self.support;
        if tau <= lo {
            return 0.0;
        }
        if tau >= hi {
            return 1.0;
        }
        if let Some(p) = &self.approx {
            return p.cdf(tau);
        }
        let m = &self.theta_model;
        let r = self.coeffs.amplitude();
        let phi = self.coeffs.phase();
        let u = (tau / r).clamp(-1.0, 1.0).asin();
        let peak = self.theta_star_clamped();
        let xl = (u - phi).clamp(m.lower, peak);
        let xr = (PI - u - phi).clamp(peak, m.upper);
        (segment_mass(m, m.lower, xl) + segment_mass(m, xr, m.upper)).clamp(0.0, 1.0)
    }

    /// Polar angles mapping to `tau`: the preimage on the rising part of `g`
    /// and the one on the falling part, when they lie inside the bounds.
    pub fn preimages(&self, tau: f64) -> [Option<f64>; 2] {
        let m = &self.theta_model;
        let r = self.coeffs.amplitude();
        let phi = self.coeffs.phase();
        let u = (tau / r).clamp(-1.0, 1.0).asin();
        let peak = self.theta_star_clamped();
        let rising = u - phi;
        let falling = PI - u - phi;
        let a = (u > 0.0 && rising >= m.lower && rising <= peak).then_some(rising);
        let b = (falling >= peak && falling <= m.upper && falling >= m.lower).then_some(falling);
        match (a, b) {
            (Some(x), Some(y)) if x == y => [Some(x), None],
            _ => [a, b],
        }
    }

    fn theta_star_clamped(&self) -> f64 {
        let m = &self.theta_model;
        self.coeffs.theta_star().clamp(m.lower, m.upper)
    }

    /// Total probability mass, integrated after substituting
    /// `tau = R sin v` so that the inverse-square-root edges disappear.
    pub fn total_mass(&self, tol: f64) -> Result<Estimate> {
        let (lo, hi) = self.support;
        if let Some(p) = &self.approx {
            let pts = [lo, p.mu_hat.clamp(lo, hi), hi];
            return quadrature::integrate_pieces(|t| self.density(t), &pts, tol);
        }
        let m = &self.theta_model;
        let r = self.coeffs.amplitude();
        let phi = self.coeffs.phase();
        let peak = self.theta_star_clamped();
        let v_of = |t: f64| (t / r).clamp(-1.0, 1.0).asin();
        let mut pts = vec![v_of(lo), v_of(hi)];
        for t in [
            self.coeffs.g(m.lower),
            self.coeffs.g(m.upper),
            self.coeffs.g(m.mu),
        ] {
            if t > lo && t < hi {
                pts.push(v_of(t));
            }
        }
        let f = |v: f64| {
            let rising = v - phi;
            let falling = PI - v - phi;
            let mut s = 0.0;
            if v > 0.0 && rising >= m.lower && rising <= peak {
                s += m.pdf(rising);
            }
            if falling >= peak && falling <= m.upper && falling >= m.lower {
                s += m.pdf(falling);
            }
            s
        };
        quadrature::integrate_pieces(f, &pts, tol)
    }
}

fn segment_mass(m: &OrientationModel, x0: f64, x1: f64) -> f64 {
    if x1 <= x0 {
        return 0.0;
    }
    let norm = match m.normalization {
        Normalization::Exact => m.mass(),
        Normalization::Simplified => 1.0,
    };
    (m.base_cdf(x1) - m.base_cdf(x0)) / norm
}

fn exact_support(c: &IncidenceCoeffs, m: &OrientationModel) -> (f64, f64) {
    let g_lo = c.g(m.lower);
    let g_hi = c.g(m.upper);
    let ts = c.theta_star();
    let top = if ts > m.lower && ts < m.upper {
        c.amplitude()
    } else {
        g_lo.max(g_hi)
    };
    (g_lo.min(g_hi), top)
}

/// Image of the orientation mean, where the exact density has its interior
/// kink. `None` when it coincides with the upper end of the support.
pub fn tau_star(c: &IncidenceCoeffs, m: &OrientationModel) -> Option<f64> {
    if !(m.mu > m.lower && m.mu < m.upper) {
        return None;
    }
    let (lo, hi) = exact_support(c, m);
    let t = c.g(m.mu);
    (t > lo && hi - t > PEAK_TOL).then_some(t)
}

/// Kolmogorov–Smirnov distance between the exact and approximate `cos ψ`
/// laws, evaluated on `n_grid` points over the union of their supports.
pub fn approximation_ksd(c: &IncidenceCoeffs, m: &OrientationModel, n_grid: usize) -> Result<f64> {
    let exact = CosPsiDistribution::exact(*c, *m)?;
    let approx = CosPsiDistribution::approximate(*c, *m)?;
    if let Some(p) = approx.approx_params() {
        p.normalizer()?;
    }
    let lo = exact.support.0.min(approx.support.0);
    let hi = exact.support.1.max(approx.support.1);
    let n = n_grid.max(2);
    let mut pts: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    pts.extend([exact.support.0, exact.support.1, approx.support.1]);
    pts.extend(exact.tau_star);
    Ok(pts
        .into_iter()
        .map(|t| (exact.cdf(t) - approx.cdf(t)).abs())
        .fold(0.0, f64::max))
}

pub fn exact_pdf(c: &IncidenceCoeffs, m: &OrientationModel, tau: f64) -> Result<f64> {
    CosPsiDistribution::exact(*c, *m)?.pdf(tau)
}

pub fn exact_cdf(c: &IncidenceCoeffs, m: &OrientationModel, tau: f64) -> Result<f64> {
    Ok(CosPsiDistribution::exact(*c, *m)?.cdf(tau))
}
