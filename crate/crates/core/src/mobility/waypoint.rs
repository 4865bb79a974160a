use rand::Rng;
use serde::{Deserialize, Serialize};

/// Mean leg length of the random waypoint model in a unit square.
pub const RWP_MEAN_LENGTH: f64 = 0.5214;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Uniform point in `[−L/2, L/2]²`.
pub fn draw_waypoint<R: Rng + ?Sized>(room_length: f64, rng: &mut R) -> Point2 {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    Point2::new((u - 0.5) * room_length, (v - 0.5) * room_length)
}

pub fn transition_length(p0: Point2, p1: Point2) -> f64 {
    (p1.x - p0.x).hypot(p1.y - p0.y)
}
