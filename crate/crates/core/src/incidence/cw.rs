use super::{laplace_approx, IncidenceCoeffs, Point3};
use crate::orientation::OrientationModel;
use crate::Result;

/// Default half-width of the band around the peak locus, expressed as a
/// bound on the approximate scale `b̂`.
pub const DEFAULT_CW_EPS: f64 = 1e-3;

/// UE position on the locus where the mean orientation points straight at
/// the AP, shifted by `(x_delta, y_delta)`.
pub fn cw_locus(
    ap: Point3,
    z_u: f64,
    omega: f64,
    x_delta: f64,
    y_delta: f64,
    m: &OrientationModel,
) -> Point3 {
    let reach = (ap.z - z_u) * m.mu.tan();
    Point3::new(
        ap.x + reach * omega.cos() + x_delta,
        ap.y + reach * omega.sin() + y_delta,
        z_u,
    )
}

/// Whether the coefficients lie within the `eps` band around the locus.
pub fn near_cw(c: &IncidenceCoeffs, m: &OrientationModel, eps: f64) -> Result<bool> {
    Ok(laplace_approx::approx_params(c, m)?.b_hat < eps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{coefficients, LinkGeometry};
    use approx::assert_abs_diff_eq;

    #[test]
    fn locus_aligns_mean_with_ap() {
        let m = OrientationModel::sitting();
        let ap = Point3::new(0.5, -0.2, 2.5);
        for omega in [0.0, 0.7, 2.5, 4.0] {
            let ue = cw_locus(ap, 0.3, omega, 0.0, 0.0, &m);
            let c = coefficients(&LinkGeometry::new(ap, ue, omega).unwrap()).unwrap();
            assert_abs_diff_eq!(c.a, m.mu.sin(), epsilon = 1e-12);
            assert_abs_diff_eq!(c.b, m.mu.cos(), epsilon = 1e-12);
            assert!(near_cw(&c, &m, DEFAULT_CW_EPS).unwrap());
        }
        let ue = cw_locus(ap, 0.3, 0.7, 0.4, 0.0, &m);
        let c = coefficients(&LinkGeometry::new(ap, ue, 0.7).unwrap()).unwrap();
        assert!(!near_cw(&c, &m, DEFAULT_CW_EPS).unwrap());
    }
}
