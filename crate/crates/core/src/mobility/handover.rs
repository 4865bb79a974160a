use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ar1::{ar1_from_stats, Ar1Process};
use super::trajectory::{initial_serving, LegWalker, OrwpConfig};
use super::waypoint::{draw_waypoint, transition_length};
use crate::rng;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HandoverMode {
    /// Device held flat, `θ ≡ 0`.
    VerticalUpward,
    /// Polar angle follows the correlated Gaussian AR(1) process.
    OrwpGaussian,
}

impl HandoverMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            HandoverMode::VerticalUpward => "vertical_upward",
            HandoverMode::OrwpGaussian => "orwp_gaussian",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandoverEstimate {
    pub rate_hz: f64,
    pub n_handovers: u64,
    pub sim_seconds: f64,
    pub runs: usize,
}

/// Monte-Carlo handover rate over `n_runs` independent legs between
/// uniformly drawn start and end points: total handovers divided by total
/// travel time.
///
/// Run `k` draws its waypoints and its orientation noise from separate
/// streams keyed on `(seed, k)`, so results do not depend on thread count
/// and the two modes see the same legs.
pub fn handover_rate(
    cfg: &OrwpConfig,
    mode: HandoverMode,
    n_runs: usize,
) -> Result<HandoverEstimate> {
    cfg.validate()?;
    let params = ar1_from_stats(cfg.theta_mean, cfg.theta_std, cfg.ts, cfg.tc_theta)?;
    let per_run: Vec<Result<(u64, f64)>> = (0..n_runs as u64)
        .into_par_iter()
        .map(|k| {
            let mut pos_rng = rng::stream(cfg.seed, 2 * k);
            let mut theta_rng = rng::stream(cfg.seed, 2 * k + 1);
            let p0 = draw_waypoint(cfg.room_length, &mut pos_rng);
            let p1 = draw_waypoint(cfg.room_length, &mut pos_rng);
            let theta = match mode {
                HandoverMode::VerticalUpward => None,
                HandoverMode::OrwpGaussian => Some(Ar1Process::stationary(params, &mut theta_rng)),
            };
            let mut walker = LegWalker { cfg, theta };
            let omega = (p1.y - p0.y).atan2(p1.x - p0.x);
            let start = initial_serving(cfg, p0, walker.theta(), omega)?;
            let mut samples = Vec::new();
            walker.walk(p0, p1, 0.0, start, &mut theta_rng, &mut samples)?;
            let mut prev = start;
            let mut n = 0u64;
            for s in &samples {
                if s.serving_ap != prev {
                    n += 1;
                    prev = s.serving_ap;
                }
            }
            Ok((n, transition_length(p0, p1) / cfg.speed))
        })
        .collect();
    let mut n_handovers = 0u64;
    let mut sim_seconds = 0.0;
    for r in per_run {
        let (n, t) = r?;
        n_handovers += n;
        sim_seconds += t;
    }
    let rate_hz = if sim_seconds > 0.0 {
        n_handovers as f64 / sim_seconds
    } else {
        0.0
    };
    Ok(HandoverEstimate {
        rate_hz,
        n_handovers,
        sim_seconds,
        runs: n_runs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::Point3;
    use crate::mobility::{Point2, Trajectory, TrajectorySample};

    #[test]
    fn single_ap_never_hands_over() {
        let cfg = OrwpConfig {
            ap_positions: vec![Point3::new(0.0, 0.0, 2.0)],
            ..OrwpConfig::quadrant(6.0, 1.0)
        };
        for mode in [HandoverMode::VerticalUpward, HandoverMode::OrwpGaussian] {
            let e = handover_rate(&cfg, mode, 500).unwrap();
            assert_eq!(e.n_handovers, 0);
            assert_eq!(e.rate_hz, 0.0);
        }
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let cfg = OrwpConfig::quadrant(6.0, 1.4);
        let a = handover_rate(&cfg, HandoverMode::OrwpGaussian, 2000).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool
            .install(|| handover_rate(&cfg, HandoverMode::OrwpGaussian, 2000))
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rate_hz.to_bits(), b.rate_hz.to_bits());
    }

    fn quadrant(x: f64, y: f64) -> (bool, bool) {
        (x >= 0.0, y >= 0.0)
    }

    #[test]
    fn upright_handovers_only_at_quadrant_crossings() {
        let cfg = OrwpConfig::quadrant(8.0, 1.0);
        let mut matched = 0;
        let n = 1000u64;
        for k in 0..n {
            let mut pos_rng = rng::stream(99, k);
            let p0 = draw_waypoint(cfg.room_length, &mut pos_rng);
            let p1 = draw_waypoint(cfg.room_length, &mut pos_rng);
            let mut walker = LegWalker {
                cfg: &cfg,
                theta: None,
            };
            let omega = (p1.y - p0.y).atan2(p1.x - p0.x);
            let start = initial_serving(&cfg, p0, 0.0, omega).unwrap();
            let mut samples = vec![TrajectorySample {
                t: 0.0,
                x: p0.x,
                y: p0.y,
                omega,
                theta: 0.0,
                serving_ap: start,
            }];
            walker
                .walk(p0, p1, 0.0, start, &mut rng::seeded(0), &mut samples)
                .unwrap();
            let tr = Trajectory { samples };
            // every handover coincides with a change of quadrant
            for w in tr.samples.windows(2) {
                if w[0].serving_ap != w[1].serving_ap {
                    assert_ne!(quadrant(w[0].x, w[0].y), quadrant(w[1].x, w[1].y));
                }
            }
            let crossings = segment_crossings(p0, p1);
            assert!(tr.handovers() <= crossings);
            if tr.handovers() == crossings {
                matched += 1;
            }
        }
        // two axes crossed inside one step count as a single handover
        assert!(matched as f64 > 0.98 * n as f64, "{matched}");
    }

    fn segment_crossings(p0: Point2, p1: Point2) -> usize {
        usize::from((p0.x >= 0.0) != (p1.x >= 0.0)) + usize::from((p0.y >= 0.0) != (p1.y >= 0.0))
    }

    #[test]
    fn orientation_raises_rate() {
        let cfg = OrwpConfig::quadrant(6.0, 1.0);
        let up = handover_rate(&cfg, HandoverMode::VerticalUpward, 3000).unwrap();
        let tilted = handover_rate(&cfg, HandoverMode::OrwpGaussian, 3000).unwrap();
        assert!(tilted.rate_hz > up.rate_hz);
        assert_eq!(up.sim_seconds, tilted.sim_seconds);
    }
}
