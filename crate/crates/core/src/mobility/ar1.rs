use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::{Error, Result};

/// `θ[n] = c0 + c1 θ[n−1] + w[n]` with `w ~ N(0, σ_w²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ar1Params {
    pub c0: f64,
    pub c1: f64,
    pub sigma_w: f64,
}

impl Ar1Params {
    pub fn validate(&self) -> Result<()> {
        if !(self.c1.abs() < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "|c1| must be < 1, got {}",
                self.c1
            )));
        }
        if !(self.sigma_w > 0.0) {
            return Err(Error::InvalidConfig("sigma_w must be positive".into()));
        }
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.c0 / (1.0 - self.c1)
    }

    pub fn std_dev(&self) -> f64 {
        self.sigma_w / (1.0 - self.c1 * self.c1).sqrt()
    }
}

/// Parameters matching a stationary mean and standard deviation, with the
/// autocorrelation falling to 0.05 after `tc / ts` samples.
pub fn ar1_from_stats(mean: f64, std: f64, ts: f64, tc: f64) -> Result<Ar1Params> {
    if !(ts > 0.0 && tc > 0.0 && ts <= tc) {
        return Err(Error::InvalidTiming(format!(
            "need 0 < ts <= tc, got ts = {ts}, tc = {tc}"
        )));
    }
    if !(std > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "std must be positive, got {std}"
        )));
    }
    let c1 = 0.05f64.powf(ts / tc);
    Ok(Ar1Params {
        c0: (1.0 - c1) * mean,
        c1,
        sigma_w: (1.0 - c1 * c1).sqrt() * std,
    })
}

/// One AR(1) step, clamped to `[0, π/2]`.
pub fn ar1_step<R: Rng + ?Sized>(p: &Ar1Params, prev: f64, rng: &mut R) -> f64 {
    let w: f64 = rng.sample(StandardNormal);
    (p.c0 + p.c1 * prev + p.sigma_w * w).clamp(0.0, FRAC_PI_2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Process {
    pub params: Ar1Params,
    pub state: f64,
}

impl Ar1Process {
    pub fn new(params: Ar1Params, state: f64) -> Self {
        Self { params, state }
    }

    /// Starts from a draw of the stationary law.
    pub fn stationary<R: Rng + ?Sized>(params: Ar1Params, rng: &mut R) -> Self {
        let z: f64 = rng.sample(StandardNormal);
        let state = (params.mean() + params.std_dev() * z).clamp(0.0, FRAC_PI_2);
        Self { params, state }
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> f64 {
        self.state = ar1_step(&self.params, self.state, rng);
        self.state
    }

    pub fn advance<R: Rng + ?Sized>(&mut self, steps: usize, rng: &mut R) -> f64 {
        for _ in 0..steps {
            self.step(rng);
        }
        self.state
    }

    pub fn run<R: Rng + ?Sized>(&mut self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.step(rng)).collect()
    }
}
