//! Euler rotation algebra for a handheld device.
//!
//! Angles follow the W3C device-orientation convention: intrinsic
//! rotations z → x′ → y″ by yaw `alpha`, pitch `beta` and roll `gamma`.
//! Everything is in radians.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Maps any real angle to `[0, 2π)`.
pub fn wrap_two_pi(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Maps any real angle to `(−π, π]`. `−π` maps to `+π`.
pub fn wrap_pi(x: f64) -> f64 {
    let r = wrap_two_pi(x);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Yaw/pitch/roll triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl EulerAngles {
    /// Checked constructor: `alpha ∈ [0, 2π)`, `beta ∈ [−π, π)`,
    /// `gamma ∈ [−π/2, π/2)`.
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let ok = (0.0..TAU).contains(&alpha)
            && (-PI..PI).contains(&beta)
            && (-FRAC_PI_2..FRAC_PI_2).contains(&gamma);
        if !ok {
            return Err(Error::InvalidModel(format!(
                "Euler angles out of range: alpha={alpha}, beta={beta}, gamma={gamma}"
            )));
        }
        Ok(Self { alpha, beta, gamma })
    }

    pub fn from_degrees(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        Self::new(alpha.to_radians(), beta.to_radians(), gamma.to_radians())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVector3 {
    /// Normalises `(x, y, z)`. Returns `None` for the zero vector.
    pub fn normalize(x: f64, y: f64, z: f64) -> Option<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if n == 0.0 || !n.is_finite() {
            return None;
        }
        Some(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn dot(&self, other: &UnitVector3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Unit normal with polar angle `theta` and azimuth `omega`.
    pub fn from_spherical(theta: f64, omega: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (so, co) = omega.sin_cos();
        Self {
            x: st * co,
            y: st * so,
            z: ct,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceMode {
    Portrait,
    Landscape,
}

/// `R_α R_β R_γ [0, 0, 1]ᵀ`.
pub fn rotated_normal(angles: &EulerAngles) -> UnitVector3 {
    let (sa, ca) = angles.alpha.sin_cos();
    let (sb, cb) = angles.beta.sin_cos();
    let (sg, cg) = angles.gamma.sin_cos();
    UnitVector3 {
        x: cg * sa * sb + ca * sg,
        y: sa * sg - ca * cg * sb,
        z: cb * cg,
    }
}

/// Angle between the rotated normal and the vertical, in `[0, π]`.
/// Does not depend on yaw.
pub fn polar_angle(angles: &EulerAngles) -> f64 {
    // acos(cos β cos γ), evaluated through atan2 so it stays accurate near 0 and π
    let (sb, cb) = angles.beta.sin_cos();
    let (sg, cg) = angles.gamma.sin_cos();
    let horizontal = (sb * sb + cb * cb * sg * sg).sqrt();
    horizontal.atan2(cb * cg)
}

/// Azimuth of the rotated normal's horizontal projection, in `(−π, π]`.
pub fn azimuth_angle(angles: &EulerAngles) -> Result<f64> {
    let n = rotated_normal(angles);
    if n.x.hypot(n.y) <= 1e-15 {
        return Err(Error::DegeneratePose);
    }
    Ok(wrap_pi(n.y.atan2(n.x)))
}

/// Approximate azimuth obtained by neglecting roll (portrait) or pitch
/// (landscape). Result in `(−π, π]`; `alpha = 0` takes the first branch.
pub fn omega_hat(alpha: f64, mode: DeviceMode) -> f64 {
    let a = wrap_two_pi(alpha);
    let raw = match mode {
        DeviceMode::Portrait => {
            if a <= 1.5 * PI {
                a - FRAC_PI_2
            } else {
                a - 2.5 * PI
            }
        }
        DeviceMode::Landscape => {
            if a <= PI {
                a
            } else {
                a - TAU
            }
        }
    };
    wrap_pi(raw)
}

/// Direction the user faces (and moves towards), in `[0, 2π)`.
pub fn facing_angle(alpha: f64, mode: DeviceMode) -> f64 {
    let a = wrap_two_pi(alpha);
    let raw = match mode {
        DeviceMode::Portrait => {
            if a <= 1.5 * PI {
                a + FRAC_PI_2
            } else {
                a - 1.5 * PI
            }
        }
        DeviceMode::Landscape => {
            if a <= PI {
                a + PI
            } else {
                a - PI
            }
        }
    };
    wrap_two_pi(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    // Independent oracle: intrinsic z → x′ → y″ rotation of the device
    // frame via Rodrigues' formula, then read off the device z axis.
    fn rodrigues(v: [f64; 3], k: [f64; 3], ang: f64) -> [f64; 3] {
        let (s, c) = ang.sin_cos();
        let dot = v[0] * k[0] + v[1] * k[1] + v[2] * k[2];
        let cross = [
            k[1] * v[2] - k[2] * v[1],
            k[2] * v[0] - k[0] * v[2],
            k[0] * v[1] - k[1] * v[0],
        ];
        [
            v[0] * c + cross[0] * s + k[0] * dot * (1.0 - c),
            v[1] * c + cross[1] * s + k[1] * dot * (1.0 - c),
            v[2] * c + cross[2] * s + k[2] * dot * (1.0 - c),
        ]
    }

    fn intrinsic_normal(a: &EulerAngles) -> [f64; 3] {
        let mut ex = [1.0, 0.0, 0.0];
        let mut ey = [0.0, 1.0, 0.0];
        let mut ez = [0.0, 0.0, 1.0];
        let axis = ez;
        ex = rodrigues(ex, axis, a.alpha);
        ey = rodrigues(ey, axis, a.alpha);
        let axis = ex;
        ey = rodrigues(ey, axis, a.beta);
        ez = rodrigues(ez, axis, a.beta);
        let axis = ey;
        ez = rodrigues(ez, axis, a.gamma);
        let _ = ex;
        ez
    }

    fn matmul(m: [[f64; 3]; 3], n: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
        let mut out = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = (0..3).map(|k| m[i][k] * n[k][j]).sum();
            }
        }
        out
    }

    fn matrix_normal(a: &EulerAngles) -> [f64; 3] {
        let (sa, ca) = a.alpha.sin_cos();
        let (sb, cb) = a.beta.sin_cos();
        let (sg, cg) = a.gamma.sin_cos();
        let rz = [[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]];
        let rx = [[1.0, 0.0, 0.0], [0.0, cb, -sb], [0.0, sb, cb]];
        let ry = [[cg, 0.0, sg], [0.0, 1.0, 0.0], [-sg, 0.0, cg]];
        let r = matmul(matmul(rz, rx), ry);
        [r[0][2], r[1][2], r[2][2]]
    }

    fn angles() -> impl Strategy<Value = EulerAngles> {
        (0.0..TAU, -PI..PI, -FRAC_PI_2..FRAC_PI_2)
            .prop_map(|(a, b, g)| EulerAngles::new(a, b, g).unwrap())
    }

    #[test]
    fn identity_rotation() {
        let n = rotated_normal(&EulerAngles::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!((n.x, n.y, n.z), (0.0, 0.0, 1.0));
    }

    #[test]
    fn quarter_pitch() {
        let n = rotated_normal(&EulerAngles::new(0.0, FRAC_PI_2, 0.0).unwrap());
        assert_abs_diff_eq!(n.x, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.y, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(n.z, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn polar_angle_examples() {
        let a = EulerAngles::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(polar_angle(&a), 0.0);
        let mu = 41.39_f64.to_radians();
        let a = EulerAngles::new(0.3, mu, 0.0).unwrap();
        assert_abs_diff_eq!(polar_angle(&a), mu, epsilon = 1e-12);
    }

    #[test]
    fn azimuth_examples() {
        let a = EulerAngles::new(FRAC_PI_2, PI / 4.0, 0.0).unwrap();
        assert_abs_diff_eq!(azimuth_angle(&a).unwrap(), 0.0, epsilon = 1e-12);
        let a = EulerAngles::new(0.0, 0.0, 0.0).unwrap();
        assert_eq!(azimuth_angle(&a), Err(Error::DegeneratePose));
    }

    #[test]
    fn angle_range_is_checked() {
        assert!(EulerAngles::new(TAU, 0.0, 0.0).is_err());
        assert!(EulerAngles::new(0.0, PI, 0.0).is_err());
        assert!(EulerAngles::new(0.0, 0.0, FRAC_PI_2).is_err());
        assert!(EulerAngles::new(0.0, -PI, -FRAC_PI_2).is_ok());
    }

    #[test]
    fn wrap_ties() {
        assert_eq!(wrap_pi(-PI), PI);
        assert_eq!(wrap_pi(PI), PI);
        assert_eq!(wrap_two_pi(TAU), 0.0);
        assert_abs_diff_eq!(wrap_two_pi(-FRAC_PI_2), 1.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn omega_hat_and_facing_examples() {
        assert_abs_diff_eq!(
            omega_hat(FRAC_PI_2, DeviceMode::Portrait),
            0.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            omega_hat(1.5 * PI, DeviceMode::Landscape),
            -FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            facing_angle(PI, DeviceMode::Portrait),
            1.5 * PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            facing_angle(FRAC_PI_2, DeviceMode::Landscape),
            1.5 * PI,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            facing_angle(1.75 * PI, DeviceMode::Portrait),
            PI / 4.0,
            epsilon = 1e-15
        );
        // alpha = 0 takes the first branch
        assert_abs_diff_eq!(
            omega_hat(0.0, DeviceMode::Portrait),
            -FRAC_PI_2,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            facing_angle(0.0, DeviceMode::Landscape),
            PI,
            epsilon = 1e-15
        );
    }

    #[test]
    fn omega_hat_matches_zero_roll_azimuth() {
        // portrait with gamma = 0 and positive pitch: omega_hat is the exact azimuth
        for i in 1..64 {
            let alpha = i as f64 * TAU / 64.0;
            let a = EulerAngles::new(alpha, 0.6, 0.0).unwrap();
            let w = azimuth_angle(&a).unwrap();
            let d = wrap_pi(w - omega_hat(alpha, DeviceMode::Portrait));
            assert!(d.abs() < 1e-12, "alpha={alpha} w={w}");
        }
    }

    proptest! {
        #[test]
        fn normal_is_unit(a in angles()) {
            prop_assert!((rotated_normal(&a).norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn normal_matches_matrix_product(a in angles()) {
            let n = rotated_normal(&a);
            let m = matrix_normal(&a);
            prop_assert!((n.x - m[0]).abs() < 1e-12);
            prop_assert!((n.y - m[1]).abs() < 1e-12);
            prop_assert!((n.z - m[2]).abs() < 1e-12);
        }

        #[test]
        fn normal_matches_intrinsic_rotation(a in angles()) {
            let n = rotated_normal(&a);
            let m = intrinsic_normal(&a);
            prop_assert!((n.x - m[0]).abs() < 1e-12);
            prop_assert!((n.y - m[1]).abs() < 1e-12);
            prop_assert!((n.z - m[2]).abs() < 1e-12);
        }

        #[test]
        fn polar_angle_is_angle_to_vertical(a in angles()) {
            let n = rotated_normal(&a);
            let z = UnitVector3 { x: 0.0, y: 0.0, z: 1.0 };
            let theta = n.x.hypot(n.y).atan2(n.dot(&z));
            prop_assert!((polar_angle(&a) - theta).abs() < 1e-12);
            prop_assert!((polar_angle(&a).cos() - a.beta.cos() * a.gamma.cos()).abs() < 1e-12);
        }

        #[test]
        fn polar_angle_ignores_yaw(b in -PI..PI, g in -FRAC_PI_2..FRAC_PI_2) {
            let base = polar_angle(&EulerAngles::new(0.0, b, g).unwrap());
            for i in 0..16 {
                let a = EulerAngles::new(i as f64 * TAU / 16.0, b, g).unwrap();
                prop_assert_eq!(polar_angle(&a), base);
            }
        }

        #[test]
        fn azimuth_matches_atan2(a in angles()) {
            let n = rotated_normal(&a);
            prop_assume!(n.x.hypot(n.y) > 1e-9);
            let w = azimuth_angle(&a).unwrap();
            prop_assert!(w > -PI && w <= PI);
            prop_assert!((wrap_pi(w - n.y.atan2(n.x))).abs() < 1e-12);
        }

        #[test]
        fn facing_is_omega_hat_plus_pi(alpha in 0.0..TAU, portrait in any::<bool>()) {
            let mode = if portrait { DeviceMode::Portrait } else { DeviceMode::Landscape };
            let d = wrap_pi(facing_angle(alpha, mode) - omega_hat(alpha, mode) - PI);
            prop_assert!(d.abs() < 1e-12);
        }
    }
}
