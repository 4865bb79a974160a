//! Orientation datasets: CSV with `t_seconds,alpha_deg,beta_deg,gamma_deg`.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use lifi_orient::geometry::{polar_angle, EulerAngles};
use lifi_orient::stats::SampleSeries;

use crate::error::{Context, HarnessError, Result};

pub const COLUMNS: [&str; 4] = ["t_seconds", "alpha_deg", "beta_deg", "gamma_deg"];

/// Euler angles in radians plus the derived polar angle, all sharing the
/// file's timestamps.
#[derive(Debug, Clone)]
pub struct OrientationSeries {
    pub alpha: SampleSeries,
    pub beta: SampleSeries,
    pub gamma: SampleSeries,
    pub theta: SampleSeries,
}

impl OrientationSeries {
    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }
}

pub fn ingest_orientation_csv(path: &Path) -> Result<OrientationSeries> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    read_orientation_csv(file, path)
}

/// Same as [`ingest_orientation_csv`] for an arbitrary reader; `path` is
/// only used in error messages.
pub fn read_orientation_csv<R: Read>(reader: R, path: &Path) -> Result<OrientationSeries> {
    let parse_err = |line: usize, field: &str, message: String| HarnessError::Parse {
        path: path.to_path_buf(),
        line,
        column: 0,
        field: field.to_string(),
        message,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut idx = [0usize; 4];
    for (slot, name) in idx.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| parse_err(1, name, format!("missing column `{name}`")))?;
    }

    let mut cols: [Vec<f64>; 4] = Default::default();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for ((col, &i), name) in cols.iter_mut().zip(&idx).zip(COLUMNS) {
            let raw = rec.get(i).unwrap_or("");
            let v: f64 = raw
                .parse()
                .map_err(|_| parse_err(line, name, format!("not a number: {raw:?}")))?;
            col.push(v);
        }
    }
    let [t, alpha, beta, gamma] = cols;
    if t.is_empty() {
        return Err(parse_err(2, COLUMNS[0], "no data rows".into()));
    }

    let mut theta = Vec::with_capacity(t.len());
    for (k, ((a, b), g)) in alpha.iter().zip(&beta).zip(&gamma).enumerate() {
        let e = EulerAngles::from_degrees(*a, *b, *g)
            .map_err(|e| parse_err(k + 2, "alpha_deg", e.to_string()))?;
        theta.push(polar_angle(&e));
    }
    let series = |xs: Vec<f64>| {
        SampleSeries::with_timestamps(xs, t.clone()).context(|| format!("{}", path.display()))
    };
    let rad = |xs: Vec<f64>| xs.into_iter().map(f64::to_radians).collect::<Vec<_>>();
    Ok(OrientationSeries {
        theta: series(theta)?,
        alpha: series(rad(alpha))?,
        beta: series(rad(beta))?,
        gamma: series(rad(gamma))?,
    })
}
