use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{CosPsiDistribution, IncidenceCoeffs};
use crate::orientation::{Family, OrientationModel};
use crate::{Error, Result};

/// Shape of the exact density when `a < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop1Report {
    /// `b_θ < min{−b/a, −a/b}`; the shape claims only apply when true.
    pub condition_met: bool,
    pub tau_star: f64,
    pub increasing_below: bool,
    pub decreasing_above: bool,
    pub continuous_at_peak: bool,
    /// Closed-form log-slope signs agree with finite differences.
    pub slope_signs_agree: bool,
}

impl Prop1Report {
    pub fn holds(&self) -> bool {
        self.increasing_below
            && self.decreasing_above
            && self.continuous_at_peak
            && self.slope_signs_agree
    }
}

/// Shape of the exact density when `a >= 0`, checked on
/// the branch of `g` that contains the orientation mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prop2Report {
    pub tau_star: Option<f64>,
    /// Turning point `R/√(1+b_θ²)` where the density stops decreasing.
    pub tau_d: f64,
    pub increasing_below: bool,
    /// `None` when `τ* >= τ_d` and the density never decreases.
    pub decreasing_to_turning: Option<bool>,
    pub increasing_to_end: bool,
    pub measured_turning: Option<f64>,
    pub turning_matches: bool,
    pub continuous_at_peak: bool,
    /// Set on the peak locus, where the full density should only grow.
    pub monotone_on_locus: Option<bool>,
}

impl Prop2Report {
    pub fn holds(&self) -> bool {
        self.increasing_below
            && self.decreasing_to_turning.unwrap_or(true)
            && self.increasing_to_end
            && self.turning_matches
            && self.continuous_at_peak
            && self.monotone_on_locus.unwrap_or(true)
    }
}

fn laplace_scale(m: &OrientationModel) -> Result<f64> {
    if m.family != Family::Laplace {
        return Err(Error::InvalidModel(
            "shape analysis needs a Laplace orientation model".into(),
        ));
    }
    Ok(m.scale)
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64)
        .collect()
}

fn monotone_on<F: Fn(f64) -> f64>(f: &F, pts: &[f64], lo: f64, hi: f64, rising: bool) -> bool {
    let inside: Vec<f64> = pts.iter().copied().filter(|t| *t > lo && *t < hi).collect();
    inside.windows(2).all(|w| {
        let (f0, f1) = (f(w[0]), f(w[1]));
        if rising {
            f1 > f0
        } else {
            f1 < f0
        }
    })
}

fn continuous_at(d: &CosPsiDistribution, t: f64) -> bool {
    let (lo, hi) = d.support;
    let r = d.coeffs.amplitude();
    let eps = 1e-7 * (hi - lo).min(hi - t).min(t - lo);
    // compare with the 1/sqrt(R² − τ²) factor removed so the check is not
    // swamped by the edge singularity
    let smooth = |x: f64| d.density(x) * (r * r - x * x).sqrt();
    let (l, rt) = (smooth(t - eps), smooth(t + eps));
    l > 0.0 && ((l - rt) / l).abs() < 1e-5
}

pub fn verify_proposition1(
    c: &IncidenceCoeffs,
    m: &OrientationModel,
    n_grid: usize,
) -> Result<Prop1Report> {
    if !(c.a < 0.0) {
        return Err(Error::InvalidConfig(format!(
            "needs a < 0, got a = {}",
            c.a
        )));
    }
    let bt = laplace_scale(m)?;
    let d = CosPsiDistribution::exact(*c, *m)?;
    let ts = d.tau_star.ok_or_else(|| {
        Error::InvalidConfig("orientation mean lies on the support boundary".into())
    })?;
    let (lo, hi) = d.support;
    let r = c.amplitude();
    let f = |t: f64| d.density(t);
    let pts = grid(lo, hi, n_grid.max(4));

    let h = 1e-6 * (hi - lo);
    let slope_signs_agree = pts
        .iter()
        .filter(|t| (**t - ts).abs() > 2.0 * h && **t - h > lo && **t + h < hi)
        .all(|&t| {
            let root = (r * r - t * t).sqrt();
            let analytic = if t < ts { root + bt * t } else { bt * t - root };
            let numeric = (f(t + h).ln() - f(t - h).ln()) / (2.0 * h);
            analytic.signum() == numeric.signum() || analytic.abs() < 1e-9
        });

    Ok(Prop1Report {
        condition_met: bt < (-c.b / c.a).min(-c.a / c.b),
        tau_star: ts,
        increasing_below: monotone_on(&f, &pts, lo, ts, true),
        decreasing_above: monotone_on(&f, &pts, ts, hi, false),
        continuous_at_peak: continuous_at(&d, ts),
        slope_signs_agree,
    })
}

pub fn verify_proposition2(
    c: &IncidenceCoeffs,
    m: &OrientationModel,
    n_grid: usize,
) -> Result<Prop2Report> {
    if !(c.a >= 0.0) {
        return Err(Error::InvalidConfig(format!(
            "needs a >= 0, got a = {}",
            c.a
        )));
    }
    let bt = laplace_scale(m)?;
    let d = CosPsiDistribution::exact(*c, *m)?;
    let r = c.amplitude();
    let phi = c.phase();
    let tau_d = r / (1.0 + bt * bt).sqrt();
    let n = n_grid.max(4);

    // branch of g through the mean: falling when the mean is past the peak
    let falling = m.mu >= c.theta_star();
    let start = if falling { c.g(m.upper) } else { c.g(m.lower) };
    let principal = |t: f64| {
        let u = (t / r).clamp(-1.0, 1.0).asin();
        let theta = if falling { PI - u - phi } else { u - phi };
        m.pdf(theta) / (r * r - t * t).sqrt()
    };
    let pts = grid(start, r, n);
    let spacing = (r - start) / n as f64;

    let Some(ts) = d.tau_star else {
        let (lo, hi) = d.support;
        let all = grid(lo, hi, n);
        let monotone = all.windows(2).all(|w| d.density(w[1]) >= d.density(w[0]));
        return Ok(Prop2Report {
            tau_star: None,
            tau_d,
            increasing_below: monotone_on(&principal, &pts, start, r, true),
            decreasing_to_turning: None,
            increasing_to_end: true,
            measured_turning: None,
            turning_matches: true,
            continuous_at_peak: true,
            monotone_on_locus: Some(monotone),
        });
    };

    let (decreasing_to_turning, increasing_to_end, measured_turning, turning_matches) =
        if ts < tau_d {
            let tail: Vec<f64> = pts.iter().copied().filter(|t| *t > ts).collect();
            let argmin = tail
                .iter()
                .copied()
                .min_by(|x, y| principal(*x).total_cmp(&principal(*y)));
            let matches = argmin.is_some_and(|t| (t - tau_d).abs() <= 2.0 * spacing);
            (
                Some(monotone_on(&principal, &pts, ts, tau_d, false)),
                monotone_on(&principal, &pts, tau_d, r, true),
                argmin,
                matches,
            )
        } else {
            (None, monotone_on(&principal, &pts, ts, r, true), None, true)
        };

    Ok(Prop2Report {
        tau_star: Some(ts),
        tau_d,
        increasing_below: monotone_on(&principal, &pts, start, ts, true),
        decreasing_to_turning,
        increasing_to_end,
        measured_turning,
        turning_matches,
        continuous_at_peak: continuous_at(&d, ts),
        monotone_on_locus: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{coefficients, cw_locus, LinkGeometry, Point3};

    const AP: Point3 = Point3::new(0.0, 0.0, 2.0);

    fn coeffs_at(x: f64, y: f64, omega: f64) -> IncidenceCoeffs {
        coefficients(&LinkGeometry::new(AP, Point3::new(x, y, 0.0), omega).unwrap()).unwrap()
    }

    #[test]
    fn negative_a_shape() {
        let m = OrientationModel::sitting();
        for (x, y, o) in [(-1.0, -1.0, PI / 4.0), (-2.0, -0.5, 0.3), (-0.5, -3.0, 1.2)] {
            let c = coeffs_at(x, y, o);
            let rep = verify_proposition1(&c, &m, 400).unwrap();
            assert!(rep.condition_met);
            assert!(rep.holds(), "{rep:?}");
        }
    }

    #[test]
    fn condition_unmet_is_reported() {
        let m = OrientationModel::sitting();
        // nearly under the AP: -a/b tiny
        let c = coeffs_at(-0.02, 0.0, 0.0);
        let rep = verify_proposition1(&c, &m, 200).unwrap();
        assert!(!rep.condition_met);
    }

    #[test]
    fn wrong_sign_rejected() {
        let m = OrientationModel::sitting();
        assert!(verify_proposition1(&coeffs_at(1.0, 0.0, 0.0), &m, 100).is_err());
        assert!(verify_proposition2(&coeffs_at(-1.0, 0.0, 0.0), &m, 100).is_err());
    }

    #[test]
    fn non_negative_a_shape() {
        let m = OrientationModel::sitting();
        for (x, y, o) in [
            (1.0, 1.0, PI / 4.0),
            (0.3, 0.0, 0.0),
            (4.0, 0.0, 0.0),
            (0.0, 0.0, 1.0),
        ] {
            let c = coeffs_at(x, y, o);
            let rep = verify_proposition2(&c, &m, 2000).unwrap();
            assert!(rep.holds(), "{x} {y}: {rep:?}");
        }
    }

    #[test]
    fn on_locus_grows_monotonically() {
        let m = OrientationModel::sitting();
        let ue = cw_locus(AP, 0.0, 0.4, 0.0, 0.0, &m);
        let c = coefficients(&LinkGeometry::new(AP, ue, 0.4).unwrap()).unwrap();
        let rep = verify_proposition2(&c, &m, 1000).unwrap();
        assert!(rep.tau_star.is_none());
        assert_eq!(rep.monotone_on_locus, Some(true));
        assert!(rep.holds());
    }
}
