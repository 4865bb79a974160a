//! Orientation-aware random waypoint mobility: an AR(1) polar-angle
//! process, trajectory generation and handover-rate Monte Carlo.

mod ar1;
mod handover;
mod trajectory;
mod waypoint;

pub use ar1::{ar1_from_stats, ar1_step, Ar1Params, Ar1Process};
pub use handover::{handover_rate, HandoverEstimate, HandoverMode};
pub use trajectory::{
    generate_trajectory, quadrant_aps, serving_ap, ArStepping, InitialServing, OrwpConfig,
    Trajectory, TrajectorySample,
};
pub use waypoint::{draw_waypoint, transition_length, Point2, RWP_MEAN_LENGTH};
