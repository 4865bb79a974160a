//! Line-of-sight channel gain and SNR for a randomly oriented receiver
//! under a downward-facing Lambertian AP.

mod distribution;
mod process;

use serde::{Deserialize, Serialize};

use crate::incidence::{coefficients, cos_psi_full, LinkGeometry};
use crate::{Error, Result};

pub use distribution::{
    gain_cdf, gain_distribution, gain_distribution_exact, gain_pdf, snr_cdf, snr_pdf, snr_support,
    GainDistribution,
};
pub use process::{gain_coherence_time, gain_series, GainProcessStats};

/// Front-end and link-budget constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChannelParams {
    /// Photodiode area in m².
    pub area: f64,
    /// LED half-power semi-angle in radians.
    pub half_angle: f64,
    /// Receiver field of view in radians.
    pub fov: f64,
    /// A/W.
    pub responsivity: f64,
    /// Transmitted optical power in W.
    pub p_opt: f64,
    /// A²/Hz.
    pub noise_psd: f64,
    /// Hz.
    pub bandwidth: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            area: 1e-4,
            half_angle: 60f64.to_radians(),
            fov: 90f64.to_radians(),
            responsivity: 1.0,
            p_opt: 1.0,
            noise_psd: 1e-21,
            bandwidth: 1e7,
        }
    }
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("area", self.area),
            ("responsivity", self.responsivity),
            ("p_opt", self.p_opt),
            ("noise_psd", self.noise_psd),
            ("bandwidth", self.bandwidth),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidChannel(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if !(self.half_angle > 0.0 && self.half_angle < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidChannel(format!(
                "half_angle must lie in (0, pi/2), got {}",
                self.half_angle
            )));
        }
        if !(self.fov > 0.0 && self.fov <= std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidChannel(format!(
                "fov must lie in (0, pi/2], got {}",
                self.fov
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> f64 {
        lambertian_order(self.half_angle)
    }

    /// `S_0 = R² P² / (N_0 B)`, so that `SNR = S_0 H²`.
    pub fn s0(&self) -> f64 {
        (self.responsivity * self.p_opt).powi(2) / (self.noise_psd * self.bandwidth)
    }

    /// `H_0 = (m+1) A hᵐ / (2π)` for vertical separation `h`.
    pub fn h0(&self, height: f64) -> f64 {
        let m = self.order();
        (m + 1.0) * self.area * height.powf(m) / (2.0 * std::f64::consts::PI)
    }

    /// Cosine of the FOV, clamped so that 90° gives exactly zero.
    pub(crate) fn fov_cos(&self) -> f64 {
        self.fov.cos().max(0.0)
    }

    pub(crate) fn normalizing_gain(&self, g: &LinkGeometry) -> f64 {
        self.h0(g.height()) / g.distance().powf(self.order() + 2.0)
    }
}

/// Lambertian order `m = −ln 2 / ln cos Φ½`. Orders within rounding of an
/// integer are snapped to it, so 60° gives exactly 1.
pub fn lambertian_order(half_angle: f64) -> f64 {
    let m = -std::f64::consts::LN_2 / half_angle.cos().ln();
    let r = m.round();
    if (m - r).abs() <= 8.0 * f64::EPSILON * r.abs() {
        r
    } else {
        m
    }
}

/// LOS gain for polar angle `theta`, with the UE normal's azimuth taken as
/// `Ω − π`.
pub fn los_gain(g: &LinkGeometry, p: &ChannelParams, theta: f64) -> Result<f64> {
    los_gain_with_azimuth(g, p, theta, g.omega - std::f64::consts::PI)
}

/// LOS gain for a UE normal with polar angle `theta` and azimuth `omega`.
pub fn los_gain_with_azimuth(
    g: &LinkGeometry,
    p: &ChannelParams,
    theta: f64,
    omega: f64,
) -> Result<f64> {
    coefficients(g)?;
    let d = g.distance();
    let cos_psi = cos_psi_full(g, theta, omega)?;
    if cos_psi <= 0.0 || cos_psi < p.fov_cos() {
        return Ok(0.0);
    }
    let m = p.order();
    let cos_phi = g.height() / d;
    Ok((m + 1.0) * p.area / (2.0 * std::f64::consts::PI * d * d) * cos_phi.powf(m) * cos_psi)
}
