//! Sample statistics: moments, Kolmogorov–Smirnov distances and
//! autocorrelation.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A non-empty series of observations with optional, strictly increasing
/// timestamps (seconds).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSeries {
    values: Vec<f64>,
    timestamps: Option<Vec<f64>>,
}

impl SampleSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        Ok(Self {
            values,
            timestamps: None,
        })
    }

    pub fn with_timestamps(values: Vec<f64>, timestamps: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if timestamps.len() != values.len() {
            return Err(Error::InvalidConfig(format!(
                "{} timestamps for {} values",
                timestamps.len(),
                values.len()
            )));
        }
        if let Some(i) = timestamps.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::NonMonotonicTimestamps { index: i + 1 });
        }
        Ok(Self {
            values,
            timestamps: Some(timestamps),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn timestamps(&self) -> Option<&[f64]> {
        self.timestamps.as_deref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sorted(&self) -> Vec<f64> {
        sorted(&self.values)
    }
}

pub(crate) fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    v
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divides by `n`).
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / xs.len() as f64
}

/// Lower-middle order statistic for even lengths.
pub fn median(xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySeries);
    }
    let s = sorted(xs);
    Ok(s[(s.len() - 1) / 2])
}

/// Central moments `(m2, m3, m4)` about the sample mean.
fn central_moments(xs: &[f64]) -> Result<(f64, f64, f64)> {
    let m = mean(xs);
    let n = xs.len() as f64;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in xs {
        let d = x - m;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (m2, m3, m4) = (m2 / n, m3 / n, m4 / n);
    let scale = xs.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()));
    if m2 <= (1e-14 * scale).powi(2) {
        return Err(Error::DegenerateVariance);
    }
    Ok((m2, m3, m4))
}

/// `E[(x − μ)³] / σ³` with population moments.
pub fn skewness(xs: &[f64]) -> Result<f64> {
    if xs.len() < 3 {
        return Err(Error::TooFewSamples {
            needed: 3,
            got: xs.len(),
        });
    }
    let (m2, m3, _) = central_moments(xs)?;
    Ok(m3 / m2.powf(1.5))
}

/// `E[(x − μ)⁴] / σ⁴` (not excess kurtosis: a Gaussian gives 3).
pub fn kurtosis(xs: &[f64]) -> Result<f64> {
    if xs.len() < 4 {
        return Err(Error::TooFewSamples {
            needed: 4,
            got: xs.len(),
        });
    }
    let (m2, _, m4) = central_moments(xs)?;
    Ok(m4 / (m2 * m2))
}

/// Two-sample Kolmogorov–Smirnov distance `max_x |F̂₁(x) − F̂₂(x)|`.
pub fn ksd_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySeries);
    }
    let a = sorted(a);
    let b = sorted(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample Kolmogorov–Smirnov distance against a CDF. Atoms in the CDF
/// are handled by comparing against its left limit below each tie group.
pub fn ksd_vs_cdf<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> Result<f64> {
    if xs.is_empty() {
        return Err(Error::EmptySeries);
    }
    let s = sorted(xs);
    Ok(ksd_sorted(&s, cdf))
}

/// As [`ksd_vs_cdf`] for data that is already sorted ascending.
pub fn ksd_sorted<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let f = cdf(x);
        let f_left = cdf(x.next_down());
        d = d.max(j as f64 / n - f).max(f_left - i as f64 / n);
        i = j;
    }
    d
}

/// Normalised sample autocorrelation `R(ℓ) / R(0)` for lags `0..=max_lag`.
pub fn autocorrelation(xs: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    if xs.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: xs.len(),
        });
    }
    let m = mean(xs);
    let centred: Vec<f64> = xs.iter().map(|x| x - m).collect();
    let r0: f64 = centred.iter().map(|d| d * d).sum();
    if r0 == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    Ok((0..=max_lag.min(xs.len() - 1))
        .map(|lag| {
            centred
                .iter()
                .zip(&centred[lag..])
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / r0
        })
        .collect())
}

/// First lag at which the normalised autocorrelation drops to `level`
/// (0.05 for the usual coherence criterion).
pub fn coherence_lag(xs: &[f64], level: f64, max_lag: usize) -> Result<Option<usize>> {
    let acf = autocorrelation(xs, max_lag)?;
    Ok(acf.iter().position(|&r| r <= level))
}
