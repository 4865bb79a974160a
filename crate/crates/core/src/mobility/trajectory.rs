use serde::{Deserialize, Serialize};

use super::ar1::{ar1_from_stats, Ar1Process};
use super::waypoint::{draw_waypoint, transition_length, Point2};
use crate::channel::{los_gain, ChannelParams};
use crate::incidence::{LinkGeometry, Point3};
use crate::orientation::{WALKING_MU_DEG, WALKING_SIGMA_DEG};
use crate::rng::{self, SimRng};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialServing {
    /// Strongest AP at the start position, given the initial orientation.
    #[default]
    ArgmaxGain,
    /// Strongest AP for an upright device, i.e. the nearest one.
    Nearest,
}

/// How many AR(1) updates separate consecutive trajectory samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArStepping {
    /// `round(Δt / T_s)` updates, so the polar angle decorrelates on its
    /// own coherence time regardless of the trajectory step.
    #[default]
    SampleTime,
    /// One update per trajectory sample.
    PerSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OrwpConfig {
    pub room_length: f64,
    pub speed: f64,
    /// AR(1) sample time in seconds.
    pub ts: f64,
    /// Polar-angle coherence time in seconds; also the trajectory step.
    pub tc_theta: f64,
    pub theta_mean: f64,
    pub theta_std: f64,
    pub ap_positions: Vec<Point3>,
    pub ue_height: f64,
    pub channel: ChannelParams,
    pub initial_serving: InitialServing,
    pub ar_stepping: ArStepping,
    pub seed: u64,
}

impl Default for OrwpConfig {
    fn default() -> Self {
        Self::quadrant(8.0, 1.0)
    }
}

/// Four APs at the quadrant centres `(±L/4, ±L/4, height)`.
pub fn quadrant_aps(room_length: f64, height: f64) -> Vec<Point3> {
    let q = room_length / 4.0;
    vec![
        Point3::new(q, q, height),
        Point3::new(-q, q, height),
        Point3::new(-q, -q, height),
        Point3::new(q, -q, height),
    ]
}

impl OrwpConfig {
    pub fn quadrant(room_length: f64, speed: f64) -> Self {
        Self {
            room_length,
            speed,
            ts: 0.013,
            tc_theta: 0.130,
            theta_mean: WALKING_MU_DEG.to_radians(),
            theta_std: WALKING_SIGMA_DEG.to_radians(),
            ap_positions: quadrant_aps(room_length, 2.0),
            ue_height: 0.0,
            channel: ChannelParams::default(),
            initial_serving: InitialServing::ArgmaxGain,
            ar_stepping: ArStepping::SampleTime,
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("room_length", self.room_length),
            ("speed", self.speed),
            ("ts", self.ts),
            ("tc_theta", self.tc_theta),
            ("theta_std", self.theta_std),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        if self.ts > self.tc_theta {
            return Err(Error::InvalidConfig(format!(
                "ts ({}) must not exceed tc_theta ({})",
                self.ts, self.tc_theta
            )));
        }
        if !(self.theta_mean > 0.0 && self.theta_mean < std::f64::consts::FRAC_PI_2) {
            return Err(Error::InvalidConfig(format!(
                "theta_mean must lie in (0, pi/2), got {}",
                self.theta_mean
            )));
        }
        if self.ap_positions.is_empty() {
            return Err(Error::InvalidConfig("at least one AP is required".into()));
        }
        if let Some(ap) = self.ap_positions.iter().find(|ap| !(ap.z > self.ue_height)) {
            return Err(Error::InvalidConfig(format!(
                "AP at height {} is not above the UE plane {}",
                ap.z, self.ue_height
            )));
        }
        self.channel
            .validate()
            .map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// AR(1) sub-steps per trajectory step of length `dt`.
    pub(crate) fn substeps(&self, dt: f64) -> usize {
        match self.ar_stepping {
            ArStepping::SampleTime => ((dt / self.ts).round() as usize).max(1),
            ArStepping::PerSample => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub omega: f64,
    pub theta: f64,
    pub serving_ap: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn handovers(&self) -> usize {
        self.samples
            .windows(2)
            .filter(|w| w[0].serving_ap != w[1].serving_ap)
            .count()
    }

    pub fn duration(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

/// Index of the AP with the largest instantaneous LOS gain. Ties go to the
/// lowest index; when every gain is zero the previous AP is kept.
pub fn serving_ap(
    position: Point3,
    theta: f64,
    omega: f64,
    aps: &[Point3],
    params: &ChannelParams,
    previous: Option<usize>,
) -> Result<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, ap) in aps.iter().enumerate() {
        let g = LinkGeometry::new(*ap, position, omega)?;
        let h = los_gain(&g, params, theta)?;
        if h > 0.0 && best.is_none_or(|(_, b)| h > b) {
            best = Some((i, h));
        }
    }
    Ok(best.map_or(previous.unwrap_or(0), |(i, _)| i))
}

/// Walks one leg from `from` to `to`, appending a sample per step. Positions
/// advance by `v·T_c` per step; the last step lands on `to`.
pub(crate) struct LegWalker<'a> {
    pub cfg: &'a OrwpConfig,
    pub theta: Option<Ar1Process>,
}

impl LegWalker<'_> {
    pub fn theta(&self) -> f64 {
        self.theta.map_or(0.0, |p| p.state)
    }

    pub fn walk(
        &mut self,
        from: Point2,
        to: Point2,
        t0: f64,
        serving: usize,
        rng: &mut SimRng,
        out: &mut Vec<TrajectorySample>,
    ) -> Result<(f64, usize)> {
        let cfg = self.cfg;
        let dist = transition_length(from, to);
        if dist == 0.0 {
            return Ok((t0, serving));
        }
        let omega = (to.y - from.y).atan2(to.x - from.x);
        let (c, s) = (omega.cos(), omega.sin());
        let stride = cfg.speed * cfg.tc_theta;
        let full = ((dist / stride).ceil() as usize).saturating_sub(1);
        let mut t = t0;
        let mut serving = serving;
        for j in 1..=full + 1 {
            let (x, y, dt) = if j <= full {
                let r = stride * j as f64;
                (from.x + r * c, from.y + r * s, cfg.tc_theta)
            } else {
                (to.x, to.y, (dist - stride * full as f64) / cfg.speed)
            };
            t += dt;
            let steps = cfg.substeps(dt);
            if let Some(p) = self.theta.as_mut() {
                p.advance(steps, rng);
            }
            let theta = self.theta();
            let pos = Point3::new(x, y, cfg.ue_height);
            serving = serving_ap(
                pos,
                theta,
                omega,
                &cfg.ap_positions,
                &cfg.channel,
                Some(serving),
            )?;
            out.push(TrajectorySample {
                t,
                x,
                y,
                omega,
                theta,
                serving_ap: serving,
            });
        }
        Ok((t, serving))
    }
}

pub(crate) fn initial_serving(
    cfg: &OrwpConfig,
    p0: Point2,
    theta: f64,
    omega: f64,
) -> Result<usize> {
    let theta = match cfg.initial_serving {
        InitialServing::ArgmaxGain => theta,
        InitialServing::Nearest => 0.0,
    };
    serving_ap(
        Point3::new(p0.x, p0.y, cfg.ue_height),
        theta,
        omega,
        &cfg.ap_positions,
        &cfg.channel,
        None,
    )
}

/// Chains `n_runs` random-waypoint legs starting from a uniform position,
/// with the polar angle following the AR(1) process.
pub fn generate_trajectory(cfg: &OrwpConfig, n_runs: usize) -> Result<Trajectory> {
    cfg.validate()?;
    let params = ar1_from_stats(cfg.theta_mean, cfg.theta_std, cfg.ts, cfg.tc_theta)?;
    let mut pos_rng = rng::stream(cfg.seed, 0);
    let mut theta_rng = rng::stream(cfg.seed, 1);
    let mut walker = LegWalker {
        cfg,
        theta: Some(Ar1Process::stationary(params, &mut theta_rng)),
    };

    let mut from = draw_waypoint(cfg.room_length, &mut pos_rng);
    let mut targets: Vec<Point2> = Vec::with_capacity(n_runs);
    for _ in 0..n_runs {
        targets.push(draw_waypoint(cfg.room_length, &mut pos_rng));
    }
    let omega0 = targets
        .first()
        .map_or(0.0, |p| (p.y - from.y).atan2(p.x - from.x));
    let mut serving = initial_serving(cfg, from, walker.theta(), omega0)?;
    let mut samples = vec![TrajectorySample {
        t: 0.0,
        x: from.x,
        y: from.y,
        omega: omega0,
        theta: walker.theta(),
        serving_ap: serving,
    }];
    let mut t = 0.0;
    for to in targets {
        (t, serving) = walker.walk(from, to, t, serving, &mut theta_rng, &mut samples)?;
        from = to;
    }
    Ok(Trajectory { samples })
}
