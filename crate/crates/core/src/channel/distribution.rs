use serde::{Deserialize, Serialize};

use super::ChannelParams;
use crate::incidence::{coefficients, CosPsiDistribution, LinkGeometry};
use crate::orientation::OrientationModel;
use crate::quadrature::{self, Estimate};
use crate::{Error, Result};

/// Distribution of the LOS gain `H = h_n cos ψ · rect(ψ/Ψ_c)` at a fixed UE
/// position and facing direction. The probability of `H = 0` is carried in
/// `dirac_mass` and never shows up in the pointwise density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainDistribution {
    pub h_min: f64,
    pub h_max: f64,
    pub mu_h: f64,
    pub b_h: f64,
    pub dirac_mass: f64,
    pub h_n: f64,
    pub s0: f64,
    pub cos_psi: CosPsiDistribution,
    fov_cos: f64,
}

impl GainDistribution {
    fn build(cos_psi: CosPsiDistribution, h_n: f64, p: &ChannelParams) -> Self {
        let fov_cos = p.fov_cos();
        let (lo, hi) = cos_psi.support;
        let (mu_hat, b_hat) = match cos_psi.approx_params() {
            Some(a) => (a.mu_hat, a.b_hat),
            None => {
                let c = cos_psi.coeffs;
                let m = &cos_psi.theta_model;
                let (s, co) = m.mu.sin_cos();
                (c.a * s + c.b * co, m.scale * (c.a * co - c.b * s).abs())
            }
        };
        Self {
            h_min: h_n * fov_cos.max(lo),
            h_max: h_n * hi,
            mu_h: h_n * mu_hat,
            b_h: h_n * b_hat,
            dirac_mass: cos_psi.cdf(fov_cos),
            h_n,
            s0: p.s0(),
            cos_psi,
            fov_cos,
        }
    }

    /// Continuous part of the gain density.
    pub fn pdf(&self, h: f64) -> Result<f64> {
        if !(h >= 0.0 && h <= self.h_max) {
            return Err(Error::OutOfSupport {
                value: h,
                lo: 0.0,
                hi: self.h_max,
            });
        }
        if let Some(a) = self.cos_psi.approx_params() {
            a.normalizer()?;
        }
        let t = h / self.h_n;
        if t <= self.fov_cos {
            return Ok(0.0);
        }
        Ok(self.cos_psi.density(t) / self.h_n)
    }

    /// Gain CDF, including the step of height `dirac_mass` at zero.
    pub fn cdf(&self, h: f64) -> f64 {
        if h < 0.0 {
            return 0.0;
        }
        if h >= self.h_max {
            return 1.0;
        }
        self.dirac_mass.max(self.cos_psi.cdf(h / self.h_n))
    }

    pub fn snr_support(&self) -> (f64, f64) {
        (
            self.s0 * self.h_min * self.h_min,
            self.s0 * self.h_max * self.h_max,
        )
    }

    /// Continuous part of the SNR density, `f_H(√(s/S_0)) / (2 S_0 √(s/S_0))`.
    pub fn snr_pdf(&self, s: f64) -> Result<f64> {
        let (lo, hi) = self.snr_support();
        if !(s > lo && s < hi) {
            return Err(Error::OutOfSupport { value: s, lo, hi });
        }
        let h = (s / self.s0).sqrt();
        Ok(self.pdf(h)? / (2.0 * self.s0 * h))
    }

    pub fn snr_cdf(&self, s: f64) -> f64 {
        if s < 0.0 {
            return 0.0;
        }
        self.cdf((s / self.s0).sqrt())
    }

    /// Gains at which the continuous density has kinks or edges.
    pub fn breakpoints(&self) -> Vec<f64> {
        let c = self.cos_psi.coeffs;
        let mut pts = vec![self.h_min, self.h_max];
        let inner = [c.a, c.b, self.cos_psi.tau_star.unwrap_or(f64::NAN)];
        for t in inner {
            let h = self.h_n * t;
            if h > self.h_min && h < self.h_max {
                pts.push(h);
            }
        }
        pts.sort_by(|x, y| x.total_cmp(y));
        pts.dedup();
        pts
    }

    /// Integral of the continuous gain density plus the Dirac mass.
    pub fn total_mass(&self, tol: f64) -> Result<Estimate> {
        let pts = self.breakpoints();
        let mut sum = Estimate {
            value: self.dirac_mass,
            error: 0.0,
        };
        for w in pts.windows(2) {
            let e = quadrature::tanh_sinh(|h| self.pdf(h).unwrap_or(0.0), w[0], w[1], tol)?;
            sum.value += e.value;
            sum.error += e.error;
        }
        Ok(sum)
    }

    /// Integral of the continuous SNR density plus the Dirac mass.
    pub fn snr_total_mass(&self, tol: f64) -> Result<Estimate> {
        let pts: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .map(|h| self.s0 * h * h)
            .collect();
        let scale = self.s0 * self.h_max * self.h_max;
        let mut sum = Estimate {
            value: self.dirac_mass,
            error: 0.0,
        };
        for w in pts.windows(2) {
            let e = quadrature::tanh_sinh(
                |x| self.snr_pdf(x * scale).unwrap_or(0.0) * scale,
                w[0] / scale,
                w[1] / scale,
                tol,
            )?;
            sum.value += e.value;
            sum.error += e.error;
        }
        Ok(sum)
    }

    /// Total probability implied by the closed-form truncated-Laplace gain
    /// density whose normaliser is `b_H (2 − e^{−(h_max−μ_H)/b_H})`, i.e.
    /// one that ignores truncation below `μ_H`. Adds the Dirac mass so a
    /// well-normalised law would give exactly 1.
    pub fn closed_form_total(&self) -> Option<f64> {
        let b = self.b_h;
        if !(b > 0.0) {
            return None;
        }
        let norm = b * (2.0 - (-(self.h_max - self.mu_h) / b).exp());
        let part = |x: f64| {
            // antiderivative of exp(-|h - mu|/b)
            if x < self.mu_h {
                b * ((x - self.mu_h) / b).exp()
            } else {
                b * (2.0 - (-(x - self.mu_h) / b).exp())
            }
        };
        Some((part(self.h_max) - part(self.h_min)) / norm + self.dirac_mass)
    }
}

/// Gain law backed by the truncated-Laplace approximation of `cos ψ`.
pub fn gain_distribution(
    g: &LinkGeometry,
    p: &ChannelParams,
    m: &OrientationModel,
) -> Result<GainDistribution> {
    p.validate()?;
    let c = coefficients(g)?;
    let cos_psi = CosPsiDistribution::approximate(c, *m)?;
    Ok(GainDistribution::build(cos_psi, p.normalizing_gain(g), p))
}

/// Gain law backed by the exact `cos ψ` distribution.
pub fn gain_distribution_exact(
    g: &LinkGeometry,
    p: &ChannelParams,
    m: &OrientationModel,
) -> Result<GainDistribution> {
    p.validate()?;
    let c = coefficients(g)?;
    let cos_psi = CosPsiDistribution::exact(c, *m)?;
    Ok(GainDistribution::build(cos_psi, p.normalizing_gain(g), p))
}

pub fn gain_pdf(dist: &GainDistribution, h: f64) -> Result<f64> {
    dist.pdf(h)
}

pub fn gain_cdf(dist: &GainDistribution, h: f64) -> Result<f64> {
    if !(h >= 0.0 && h <= dist.h_max) {
        return Err(Error::OutOfSupport {
            value: h,
            lo: 0.0,
            hi: dist.h_max,
        });
    }
    Ok(dist.cdf(h))
}

pub fn snr_support(dist: &GainDistribution, p: &ChannelParams) -> (f64, f64) {
    let s0 = p.s0();
    (s0 * dist.h_min * dist.h_min, s0 * dist.h_max * dist.h_max)
}

pub fn snr_pdf(dist: &GainDistribution, p: &ChannelParams, s: f64) -> Result<f64> {
    let d = GainDistribution {
        s0: p.s0(),
        ..*dist
    };
    d.snr_pdf(s)
}

pub fn snr_cdf(dist: &GainDistribution, p: &ChannelParams, s: f64) -> f64 {
    let d = GainDistribution {
        s0: p.s0(),
        ..*dist
    };
    d.snr_cdf(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::los_gain;
    use crate::incidence::Point3;
    use crate::orientation::OrientationModel;
    use crate::rng;
    use crate::stats::ksd_sorted;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_PI_4;

    const AP: Point3 = Point3::new(0.0, 0.0, 2.0);

    fn geom(x: f64, y: f64) -> LinkGeometry {
        LinkGeometry::new(AP, Point3::new(x, y, 0.0), FRAC_PI_4).unwrap()
    }

    #[test]
    fn masses_sum_to_one() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        for (x, y) in [
            (0.0, 0.0),
            (-1.0, -1.0),
            (3.0, 3.0),
            (-2.5, 0.5),
            (1.0, -2.0),
        ] {
            for d in [
                gain_distribution(&geom(x, y), &p, &m).unwrap(),
                gain_distribution_exact(&geom(x, y), &p, &m).unwrap(),
            ] {
                assert_abs_diff_eq!(d.total_mass(1e-10).unwrap().value, 1.0, epsilon = 1e-6);
                assert_abs_diff_eq!(d.snr_total_mass(1e-10).unwrap().value, 1.0, epsilon = 1e-6);
            }
        }
    }

    #[test]
    fn narrow_fov_moves_mass_to_zero() {
        let p = ChannelParams {
            fov: 40f64.to_radians(),
            ..Default::default()
        };
        let m = OrientationModel::sitting();
        let d = gain_distribution_exact(&geom(-1.0, -1.0), &p, &m).unwrap();
        let wide =
            gain_distribution_exact(&geom(-1.0, -1.0), &ChannelParams::default(), &m).unwrap();
        assert!(d.dirac_mass > wide.dirac_mass);
        assert_abs_diff_eq!(d.h_min, d.h_n * 40f64.to_radians().cos(), epsilon = 1e-18);
        assert_abs_diff_eq!(d.total_mass(1e-10).unwrap().value, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn cdf_step_and_limits() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        let d = gain_distribution(&geom(-1.0, -1.0), &p, &m).unwrap();
        assert!(d.dirac_mass > 0.005);
        assert_eq!(d.cdf(-1e-30), 0.0);
        assert_eq!(d.cdf(0.0), d.dirac_mass);
        assert_eq!(d.cdf(d.h_max), 1.0);
        assert!(gain_cdf(&d, -1.0).is_err());
        assert!(gain_pdf(&d, d.h_max * 1.01).is_err());
        let mut prev = 0.0;
        for k in 0..=200 {
            let v = d.cdf(d.h_max * k as f64 / 200.0);
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn snr_cdf_is_gain_cdf_pushed_forward() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        for (x, y) in [(-1.0, -1.0), (3.0, 3.0), (0.0, 0.0)] {
            let d = gain_distribution(&geom(x, y), &p, &m).unwrap();
            for k in 1..100 {
                let h = d.h_max * k as f64 / 100.0;
                assert_abs_diff_eq!(d.cdf(h), snr_cdf(&d, &p, p.s0() * h * h), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn under_ap_has_negligible_dirac() {
        let d = gain_distribution(
            &geom(0.0, 0.0),
            &ChannelParams::default(),
            &OrientationModel::sitting(),
        )
        .unwrap();
        assert!(d.dirac_mass < 1e-3);
        assert_abs_diff_eq!(d.h_max, d.h_n, epsilon = 1e-20);
    }

    #[test]
    fn shape_near_the_top() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        let d = gain_distribution_exact(&geom(3.0, 3.0), &p, &m).unwrap();
        let h1 = d.h_max * 0.995;
        let h2 = d.h_max * 0.999;
        assert!(d.pdf(h2).unwrap() > d.pdf(h1).unwrap());
        let d = gain_distribution(&geom(-1.0, -1.0), &p, &m).unwrap();
        assert!(d.mu_h > d.h_min && d.mu_h < d.h_max);
    }

    #[test]
    fn closed_form_total_is_close_to_one() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        for (x, y) in [(-1.0, -1.0), (3.0, 3.0), (0.0, 0.0), (-2.0, 1.0)] {
            let d = gain_distribution(&geom(x, y), &p, &m).unwrap();
            let total = d.closed_form_total().unwrap();
            assert!((total - 1.0).abs() < 1e-4, "{x} {y}: {total}");
        }
    }

    #[test]
    fn monte_carlo_gain_and_snr() {
        let p = ChannelParams::default();
        let m = OrientationModel::sitting();
        let thetas = m.sample_with(200_000, &mut rng::seeded(5));
        for (x, y) in [(-1.0, -1.0), (3.0, 3.0), (0.0, 0.0)] {
            let g = geom(x, y);
            let d = gain_distribution_exact(&g, &p, &m).unwrap();
            let mut hs: Vec<f64> = thetas
                .iter()
                .map(|&t| los_gain(&g, &p, t).unwrap())
                .collect();
            hs.sort_by(|a, b| a.total_cmp(b));
            assert!(ksd_sorted(&hs, |h| d.cdf(h)) < 0.006);
            let ss: Vec<f64> = hs.iter().map(|h| p.s0() * h * h).collect();
            assert!(ksd_sorted(&ss, |s| d.snr_cdf(s)) < 0.006);
        }
    }

    #[test]
    fn degenerate_scale_on_locus() {
        let m = OrientationModel::sitting();
        let ue = crate::incidence::cw_locus(AP, 0.0, FRAC_PI_4, 0.0, 0.0, &m);
        let g = LinkGeometry::new(AP, ue, FRAC_PI_4).unwrap();
        let d = gain_distribution(&g, &ChannelParams::default(), &m).unwrap();
        assert!(d.b_h < 1e-15 * d.h_n.max(1.0));
        assert!(matches!(
            d.pdf(0.5 * d.h_max),
            Err(Error::DegenerateScale { .. })
        ));
        assert_eq!(d.cdf(0.999 * d.h_max), 0.0);
        assert_eq!(d.cdf(d.h_max), 1.0);
    }
}
