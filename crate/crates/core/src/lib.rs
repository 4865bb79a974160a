//! Statistical model of mobile-device orientation and its effect on
//! line-of-sight optical wireless (LiFi) channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: Euler rotation algebra (yaw/pitch/roll to polar angle,
//!   azimuth and facing direction).
//! - [`orientation`]: truncated Laplace / Gaussian polar-angle models, MLE
//!   fitting and the diagnostics used to choose between them.
//! - [`incidence`]: distribution of the incidence-angle cosine for a fixed
//!   link geometry, exact and truncated-Laplace approximation.
//! - [`channel`]: LOS channel gain and SNR distributions.
//! - [`mobility`]: AR(1) polar-angle process, orientation-aware random
//!   waypoint trajectories and handover-rate Monte Carlo.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod geometry;
pub mod incidence;
pub mod mobility;
pub mod orientation;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};

/// Degrees to radians.
#[inline]
pub fn deg(x: f64) -> f64 {
    x.to_radians()
}
