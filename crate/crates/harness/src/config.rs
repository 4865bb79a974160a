//! JSON run configuration. Angles are given in degrees and converted to
//! radians when the module-level types are built.

use std::fs;
use std::path::{Path, PathBuf};

use lifi_orient::channel::ChannelParams;
use lifi_orient::incidence::{LinkGeometry, Point3};
use lifi_orient::mobility::{quadrant_aps, ArStepping, InitialServing, OrwpConfig};
use lifi_orient::orientation::{
    Family, Normalization, OrientationModel, SITTING_MU_DEG, SITTING_SIGMA_DEG, WALKING_MU_DEG,
    WALKING_SIGMA_DEG,
};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    FitDataset,
    #[default]
    TabulateCosPsi,
    TabulateGain,
    TabulateSnr,
    OrwpSweep,
    Validate,
}

impl Scenario {
    pub fn is_stochastic(&self) -> bool {
        matches!(self, Scenario::OrwpSweep | Scenario::Validate)
    }

    /// Base file name of the scenario's table.
    pub fn table_name(&self) -> &'static str {
        match self {
            Scenario::FitDataset => "fit",
            Scenario::TabulateCosPsi => "cospsi",
            Scenario::TabulateGain => "gain",
            Scenario::TabulateSnr => "snr",
            Scenario::OrwpSweep => "orwp_sweep",
            Scenario::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    /// Required by the stochastic scenarios.
    pub seed: Option<u64>,
    /// Output directory; the CLI flag and environment variable take precedence.
    pub output: Option<PathBuf>,
    pub geometry: GeometryConfig,
    pub channel: ChannelConfig,
    pub orientation: OrientationConfig,
    pub orwp: OrwpSection,
    pub validate: ValidateConfig,
    pub fit: FitConfig,
}

/// Which `cos ψ` law backs the gain and SNR tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    #[default]
    Exact,
    Approximate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    /// AP position `[x, y, z]` in metres.
    pub ap: [f64; 3],
    /// UE positions, one table block each.
    pub ues: Vec<[f64; 3]>,
    pub omega_deg: f64,
    /// Grid points per UE.
    pub points: usize,
    pub law: Law,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            ap: [0.0, 0.0, 2.0],
            ues: vec![
                [-2.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [2.0, 0.0, 0.0],
            ],
            omega_deg: 180.0,
            points: 200,
            law: Law::Exact,
        }
    }
}

impl GeometryConfig {
    pub fn links(&self) -> Result<Vec<LinkGeometry>> {
        let ap = Point3::new(self.ap[0], self.ap[1], self.ap[2]);
        self.ues
            .iter()
            .map(|u| {
                LinkGeometry::new(
                    ap,
                    Point3::new(u[0], u[1], u[2]),
                    self.omega_deg.to_radians(),
                )
                .map_err(|e| HarnessError::Validation(format!("geometry: {e}")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub area_m2: f64,
    pub half_angle_deg: f64,
    pub fov_deg: f64,
    pub responsivity: f64,
    pub p_opt_w: f64,
    pub noise_psd: f64,
    pub bandwidth_hz: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        let p = ChannelParams::default();
        Self {
            area_m2: p.area,
            half_angle_deg: 60.0,
            fov_deg: 90.0,
            responsivity: p.responsivity,
            p_opt_w: p.p_opt,
            noise_psd: p.noise_psd,
            bandwidth_hz: p.bandwidth,
        }
    }
}

impl ChannelConfig {
    pub fn params(&self) -> Result<ChannelParams> {
        let p = ChannelParams {
            area: self.area_m2,
            half_angle: self.half_angle_deg.to_radians(),
            fov: self.fov_deg.to_radians(),
            responsivity: self.responsivity,
            p_opt: self.p_opt_w,
            noise_psd: self.noise_psd,
            bandwidth: self.bandwidth_hz,
        };
        p.validate()
            .map_err(|e| HarnessError::Validation(format!("channel: {e}")))?;
        Ok(p)
    }
}

/// Whether `sigma_deg` is a standard deviation (degrees) or a variance
/// (degrees squared).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spread {
    #[default]
    StdDev,
    Variance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub family: Family,
    pub mu_deg: f64,
    pub sigma_deg: f64,
    pub spread: Spread,
    pub lower_deg: f64,
    pub upper_deg: f64,
    pub normalization: Normalization,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self::sitting()
    }
}

impl ModelConfig {
    pub fn sitting() -> Self {
        Self {
            family: Family::Laplace,
            mu_deg: SITTING_MU_DEG,
            sigma_deg: SITTING_SIGMA_DEG,
            spread: Spread::StdDev,
            lower_deg: 0.0,
            upper_deg: 90.0,
            normalization: Normalization::Exact,
        }
    }

    pub fn walking() -> Self {
        Self {
            family: Family::Gaussian,
            mu_deg: WALKING_MU_DEG,
            sigma_deg: WALKING_SIGMA_DEG,
            ..Self::sitting()
        }
    }

    /// Standard deviation in radians.
    pub fn std_rad(&self) -> f64 {
        match self.spread {
            Spread::StdDev => self.sigma_deg.to_radians(),
            Spread::Variance => self.sigma_deg.sqrt().to_radians(),
        }
    }

    pub fn model(&self) -> Result<OrientationModel> {
        let sd = self.std_rad();
        let scale = match self.family {
            Family::Laplace => sd / std::f64::consts::SQRT_2,
            Family::Gaussian => sd,
        };
        OrientationModel::new(
            self.family,
            self.mu_deg.to_radians(),
            scale,
            self.lower_deg.to_radians(),
            self.upper_deg.to_radians(),
        )
        .map(|m| m.with_normalization(self.normalization))
        .map_err(|e| HarnessError::Validation(format!("orientation: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrientationConfig {
    /// Static user; drives the `cos ψ`, gain and SNR tables.
    pub sitting: ModelConfig,
    /// Moving user; drives the AR(1) polar-angle process.
    pub walking: ModelConfig,
}

impl Default for OrientationConfig {
    fn default() -> Self {
        Self {
            sitting: ModelConfig::sitting(),
            walking: ModelConfig::walking(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrwpSection {
    pub room_lengths: Vec<f64>,
    pub speeds: Vec<f64>,
    /// Legs per `(L, v)` point.
    pub runs: usize,
    pub ts_s: f64,
    pub tc_theta_s: f64,
    pub ap_height: f64,
    pub ue_height: f64,
    pub ar_stepping: ArStepping,
    pub initial_serving: InitialServing,
}

impl Default for OrwpSection {
    fn default() -> Self {
        Self {
            room_lengths: vec![4.0, 8.0, 12.0, 16.0],
            speeds: vec![1.0, 1.4, 2.0],
            runs: 10_000,
            ts_s: 0.013,
            tc_theta_s: 0.130,
            ap_height: 2.0,
            ue_height: 0.0,
            ar_stepping: ArStepping::SampleTime,
            initial_serving: InitialServing::ArgmaxGain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    /// Largest accepted Kolmogorov–Smirnov distance against Monte Carlo.
    pub ksd: f64,
    /// Largest accepted deviation of a quadrature total from 1.
    pub quadrature: f64,
    /// Moment checks pass within this many standard errors.
    pub moment_sigmas: f64,
    pub mc_samples: usize,
    pub ar_steps: usize,
    pub rwp_pairs: usize,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            ksd: 0.01,
            quadrature: 1e-6,
            moment_sigmas: 3.0,
            mc_samples: 200_000,
            ar_steps: 1_000_000,
            rwp_pairs: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Orientation CSV to fit.
    pub dataset: Option<PathBuf>,
    /// Fit only this family; both when absent.
    pub family: Option<Family>,
}

impl RunConfig {
    pub fn for_scenario(scenario: Scenario) -> Self {
        Self {
            scenario,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |s: String| Err(HarnessError::Validation(s));
        if self.scenario.is_stochastic() && self.seed.is_none() {
            return invalid(format!(
                "scenario {:?} needs a seed",
                self.scenario.table_name()
            ));
        }
        if self.scenario == Scenario::FitDataset && self.fit.dataset.is_none() {
            return invalid("fit.dataset is required for fit_dataset".into());
        }
        self.channel.params()?;
        self.orientation.sitting.model()?;
        self.orientation.walking.model()?;
        let g = &self.geometry;
        if g.ues.is_empty() {
            return invalid("geometry.ues must not be empty".into());
        }
        if g.points < 2 {
            return invalid(format!(
                "geometry.points must be at least 2, got {}",
                g.points
            ));
        }
        g.links()?;
        let o = &self.orwp;
        if o.room_lengths.is_empty() || o.speeds.is_empty() {
            return invalid("orwp.room_lengths and orwp.speeds must not be empty".into());
        }
        if o.runs == 0 {
            return invalid("orwp.runs must be positive".into());
        }
        for &l in &o.room_lengths {
            for &v in &o.speeds {
                self.orwp_config(l, v)?
                    .validate()
                    .map_err(|e| HarnessError::Validation(format!("orwp: {e}")))?;
            }
        }
        let v = &self.validate;
        for (name, x) in [
            ("validate.ksd", v.ksd),
            ("validate.quadrature", v.quadrature),
            ("validate.moment_sigmas", v.moment_sigmas),
        ] {
            if !(x > 0.0 && x.is_finite()) {
                return invalid(format!("{name} must be positive, got {x}"));
            }
        }
        if v.mc_samples < 2 || v.ar_steps < 2 || v.rwp_pairs < 2 {
            return invalid("validate sample counts must be at least 2".into());
        }
        Ok(())
    }

    /// Mobility config for one sweep point.
    pub fn orwp_config(&self, room_length: f64, speed: f64) -> Result<OrwpConfig> {
        let o = &self.orwp;
        let w = &self.orientation.walking;
        Ok(OrwpConfig {
            room_length,
            speed,
            ts: o.ts_s,
            tc_theta: o.tc_theta_s,
            theta_mean: w.mu_deg.to_radians(),
            theta_std: w.std_rad(),
            ap_positions: quadrant_aps(room_length, o.ap_height),
            ue_height: o.ue_height,
            channel: self.channel.params()?,
            initial_serving: o.initial_serving,
            ar_stepping: o.ar_stepping,
            seed: self.seed.unwrap_or_default(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// SHA-256 of the canonical JSON form, hex encoded.
    pub fn hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let json = serde_json::to_vec(self).expect("config serialises");
        Sha256::digest(&json)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Parses a config from JSON text. `path` is only used in error messages.
pub fn parse_config(text: &str, path: &Path) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        HarnessError::Parse {
            path: path.to_path_buf(),
            line: inner.line(),
            column: inner.column(),
            field,
            message,
        }
    })?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    parse_config(&text, path)
}

pub fn save_config(cfg: &RunConfig, path: &Path) -> Result<()> {
    fs::write(path, cfg.to_json() + "\n").map_err(|e| HarnessError::io(path, e))
}
