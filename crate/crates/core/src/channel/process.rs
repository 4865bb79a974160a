use serde::{Deserialize, Serialize};

use super::{los_gain, ChannelParams};
use crate::incidence::LinkGeometry;
use crate::stats;
use crate::{Error, Result};

/// Gain time series for a UE held at `g` while its polar angle follows
/// `thetas`.
pub fn gain_series(g: &LinkGeometry, p: &ChannelParams, thetas: &[f64]) -> Result<Vec<f64>> {
    thetas.iter().map(|&t| los_gain(g, p, t)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GainProcessStats {
    pub acf: Vec<f64>,
    pub coherence_lag: Option<usize>,
    /// `coherence_lag · sample_time` in seconds.
    pub coherence_time: Option<f64>,
}

/// Empirical ACF of a sampled gain process and the first lag at which it
/// falls to `level` of its zero-lag value.
pub fn gain_coherence_time(
    series: &[f64],
    sample_time: f64,
    level: f64,
    max_lag: usize,
) -> Result<GainProcessStats> {
    if !(sample_time > 0.0) {
        return Err(Error::InvalidTiming(format!(
            "sample time must be positive, got {sample_time}"
        )));
    }
    let acf = stats::autocorrelation(series, max_lag)?;
    let lag = acf.iter().position(|&r| r <= level);
    Ok(GainProcessStats {
        coherence_time: lag.map(|l| l as f64 * sample_time),
        coherence_lag: lag,
        acf,
    })
}
