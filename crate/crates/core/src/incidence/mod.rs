//! Statistics of the incidence-angle cosine `cos ψ = a sin θ + b cos θ`
//! for a UE at a fixed position and facing direction.

mod cw;
mod exact;
mod laplace_approx;
mod propositions;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use cw::{cw_locus, near_cw, DEFAULT_CW_EPS};
pub use exact::{
    approximation_ksd, exact_cdf, exact_pdf, tau_star, CosPsiDistribution, CosPsiKind,
};
pub use laplace_approx::{approx_cdf, approx_params, approx_pdf, ApproxParams};
pub use propositions::{verify_proposition1, verify_proposition2, Prop1Report, Prop2Report};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2) + (self.z - other.z).powi(2))
            .sqrt()
    }
}

/// AP and UE positions (metres) plus the UE facing angle `omega` (Ω).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGeometry {
    pub ap: Point3,
    pub ue: Point3,
    pub omega: f64,
}

impl LinkGeometry {
    pub fn new(ap: Point3, ue: Point3, omega: f64) -> Result<Self> {
        let g = Self { ap, ue, omega };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.ap.z > self.ue.z) {
            return Err(Error::DegenerateGeometry(format!(
                "AP height {} must exceed UE height {}",
                self.ap.z, self.ue.z
            )));
        }
        Ok(())
    }

    /// Euclidean AP–UE distance `d`.
    pub fn distance(&self) -> f64 {
        self.ap.distance(&self.ue)
    }

    /// Vertical separation `h = z_a − z_u`.
    pub fn height(&self) -> f64 {
        self.ap.z - self.ue.z
    }
}

/// Weights of `cos ψ = a sin θ + b cos θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncidenceCoeffs {
    pub a: f64,
    pub b: f64,
}

impl IncidenceCoeffs {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let c = Self { a, b };
        let r = c.amplitude();
        if !(a > -1.0 && a < 1.0 && b > 0.0 && b <= 1.0 && r <= 1.0 + 1e-12) {
            return Err(Error::DegenerateGeometry(format!(
                "coefficients violate -1 < a < 1, 0 < b <= 1, sqrt(a^2+b^2) <= 1: a={a}, b={b}"
            )));
        }
        Ok(c)
    }

    /// `sqrt(a² + b²)`.
    pub fn amplitude(&self) -> f64 {
        self.a.hypot(self.b)
    }

    /// Phase `atan2(b, a)` in `(0, π)`, so that `g(θ) = R sin(θ + phase)`.
    pub fn phase(&self) -> f64 {
        self.b.atan2(self.a)
    }

    /// Unconstrained maximiser of `g`, `atan(a/b)`; negative when `a < 0`.
    pub fn theta_star(&self) -> f64 {
        self.a.atan2(self.b)
    }

    pub fn g(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.a * s + self.b * c
    }
}

pub fn coefficients(g: &LinkGeometry) -> Result<IncidenceCoeffs> {
    g.validate()?;
    let d = g.distance();
    if !(d > 0.0) {
        return Err(Error::DegenerateGeometry("AP and UE coincide".into()));
    }
    let (so, co) = g.omega.sin_cos();
    let a = -((g.ap.x - g.ue.x) / d) * co - ((g.ap.y - g.ue.y) / d) * so;
    let b = (g.ap.z - g.ue.z) / d;
    IncidenceCoeffs::new(a, b)
}

/// `cos ψ = a sin θ + b cos θ`, i.e. with the azimuth approximated by
/// `Ω − π`.
pub fn cos_psi(g: &LinkGeometry, theta: f64) -> Result<f64> {
    Ok(coefficients(g)?.g(theta))
}

/// `cos ψ` from the full dot product of the UE normal (polar `theta`,
/// azimuth `omega`) with the unit UE→AP vector.
pub fn cos_psi_full(g: &LinkGeometry, theta: f64, omega: f64) -> Result<f64> {
    let d = g.distance();
    if !(d > 0.0) {
        return Err(Error::DegenerateGeometry("AP and UE coincide".into()));
    }
    let n = crate::geometry::UnitVector3::from_spherical(theta, omega);
    Ok(n.x * (g.ap.x - g.ue.x) / d + n.y * (g.ap.y - g.ue.y) / d + n.z * (g.ap.z - g.ue.z) / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const AP: Point3 = Point3::new(0.0, 0.0, 2.0);

    #[test]
    fn coefficient_examples() {
        for omega in [0.0, 1.0, 4.0] {
            let c =
                coefficients(&LinkGeometry::new(AP, Point3::new(0.0, 0.0, 0.0), omega).unwrap())
                    .unwrap();
            assert_abs_diff_eq!(c.a, 0.0, epsilon = 1e-15);
            assert_abs_diff_eq!(c.b, 1.0, epsilon = 1e-15);
        }
        let ue = Point3::new(-1.0, 0.0, 0.0);
        let c = coefficients(&LinkGeometry::new(AP, ue, 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(c.a, -1.0 / 5f64.sqrt(), epsilon = 1e-15);
        assert_abs_diff_eq!(c.b, 2.0 / 5f64.sqrt(), epsilon = 1e-15);
        let c = coefficients(&LinkGeometry::new(AP, ue, PI).unwrap()).unwrap();
        assert_abs_diff_eq!(c.a, 1.0 / 5f64.sqrt(), epsilon = 1e-15);
        // a < 0 whenever the UE faces the AP
        for i in 1..20 {
            let omega = -FRAC_PI_2 + PI * i as f64 / 20.0;
            let c = coefficients(&LinkGeometry::new(AP, ue, omega).unwrap()).unwrap();
            assert!(c.a < 0.0);
        }
    }

    #[test]
    fn degenerate_geometry() {
        assert!(LinkGeometry::new(AP, Point3::new(0.0, 0.0, 2.0), 0.0).is_err());
        assert!(LinkGeometry::new(AP, Point3::new(1.0, 0.0, 3.0), 0.0).is_err());
    }

    #[test]
    fn cos_psi_examples() {
        let g = LinkGeometry::new(AP, Point3::new(1.3, -0.4, 0.0), 0.7).unwrap();
        let c = coefficients(&g).unwrap();
        assert_abs_diff_eq!(cos_psi(&g, 0.0).unwrap(), c.b, epsilon = 1e-15);
        let g = LinkGeometry::new(AP, Point3::new(1.3, -0.4, 0.0), 0.2).unwrap();
        let c = coefficients(&g).unwrap();
        assert!(c.a >= 0.0);
        let ts = (c.a / c.b).atan();
        assert_abs_diff_eq!(c.g(ts), c.amplitude(), epsilon = 1e-15);
    }

    proptest! {
        #[test]
        fn coefficient_inequalities(
            xu in -10.0..10.0f64, yu in -10.0..10.0f64, zu in -1.0..1.9f64,
            xa in -3.0..3.0f64, ya in -3.0..3.0f64, omega in 0.0..(2.0 * PI),
        ) {
            let g = LinkGeometry::new(Point3::new(xa, ya, 2.0), Point3::new(xu, yu, zu), omega).unwrap();
            let c = coefficients(&g).unwrap();
            prop_assert!(c.a > -1.0 && c.a < 1.0);
            prop_assert!(c.b > 0.0 && c.b <= 1.0);
            prop_assert!(c.b <= c.amplitude() && c.amplitude() <= 1.0 + 1e-12);
        }

        #[test]
        fn cos_psi_identity_and_dot_product(
            xu in -5.0..5.0f64, yu in -5.0..5.0f64, omega in 0.0..(2.0 * PI),
            theta in 0.0..FRAC_PI_2,
        ) {
            let g = LinkGeometry::new(AP, Point3::new(xu, yu, 0.0), omega).unwrap();
            let c = coefficients(&g).unwrap();
            let v = cos_psi(&g, theta).unwrap();
            prop_assert!((v - c.amplitude() * (theta + c.b.atan2(c.a)).sin()).abs() < 1e-12);
            let full = cos_psi_full(&g, theta, omega - PI).unwrap();
            prop_assert!((v - full).abs() < 1e-12);
        }
    }
}
