//! Scenario dispatch: each scenario turns a validated config into a table.

use std::path::Path;

use lifi_orient::channel::{
    gain_distribution, gain_distribution_exact, los_gain, GainDistribution,
};
use lifi_orient::incidence::{coefficients, cos_psi, CosPsiDistribution, LinkGeometry};
use lifi_orient::mobility::{
    ar1_from_stats, draw_waypoint, handover_rate, transition_length, Ar1Process, HandoverMode,
    RWP_MEAN_LENGTH,
};
use lifi_orient::orientation::{fit_mle, Family, OrientationModel};
use lifi_orient::rng;
use lifi_orient::stats::{autocorrelation, ksd_vs_cdf, mean, variance};

use crate::artifact::{git_describe, Provenance, TableArtifact, Value};
use crate::config::{Law, RunConfig, Scenario};
use crate::error::{Context, Result};
use crate::ingest::ingest_orientation_csv;

const LINK_COLUMNS: [&str; 4] = ["ue_x", "ue_y", "ue_z", "omega_deg"];

pub fn run(cfg: &RunConfig) -> Result<TableArtifact> {
    cfg.validate()?;
    let provenance = Provenance {
        scenario: cfg.scenario.table_name().to_string(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        git_describe: git_describe().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    match cfg.scenario {
        Scenario::FitDataset => fit_dataset(cfg, provenance),
        Scenario::TabulateCosPsi => tabulate_cos_psi(cfg, provenance),
        Scenario::TabulateGain => tabulate_gain(cfg, provenance, false),
        Scenario::TabulateSnr => tabulate_gain(cfg, provenance, true),
        Scenario::OrwpSweep => orwp_sweep(cfg, provenance),
        Scenario::Validate => validate(cfg, provenance),
    }
}

fn columns<'a>(extra: &[&'a str]) -> Vec<&'a str> {
    LINK_COLUMNS
        .iter()
        .copied()
        .chain(extra.iter().copied())
        .collect()
}

fn link_cells(g: &LinkGeometry) -> Vec<Value> {
    vec![
        g.ue.x.into(),
        g.ue.y.into(),
        g.ue.z.into(),
        g.omega.to_degrees().into(),
    ]
}

/// `n` cell midpoints of `[lo, hi]`, so singular endpoints are never hit.
fn midpoints(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let w = (hi - lo) / n as f64;
    (0..n).map(move |i| lo + w * (i as f64 + 0.5))
}

fn describe(g: &LinkGeometry) -> String {
    format!("UE ({}, {}, {})", g.ue.x, g.ue.y, g.ue.z)
}

fn tabulate_cos_psi(cfg: &RunConfig, provenance: Provenance) -> Result<TableArtifact> {
    let m = cfg.orientation.sitting.model()?;
    let mut t = TableArtifact::new(
        "cospsi",
        &columns(&[
            "a",
            "b",
            "tau",
            "exact_pdf",
            "exact_cdf",
            "approx_pdf",
            "approx_cdf",
        ]),
        provenance,
    );
    for g in cfg.geometry.links()? {
        let c = coefficients(&g).context(|| describe(&g))?;
        let exact = CosPsiDistribution::exact(c, m).context(|| describe(&g))?;
        let approx = match m.family {
            Family::Laplace => {
                Some(CosPsiDistribution::approximate(c, m).context(|| describe(&g))?)
            }
            Family::Gaussian => None,
        };
        let (lo, hi) = exact.support;
        for tau in midpoints(lo, hi, cfg.geometry.points) {
            let mut row = link_cells(&g);
            row.extend([
                c.a.into(),
                c.b.into(),
                tau.into(),
                exact.density(tau).into(),
                exact.cdf(tau).into(),
                approx.as_ref().map(|d| d.density(tau)).into(),
                approx.as_ref().map(|d| d.cdf(tau)).into(),
            ]);
            t.push(row);
        }
    }
    Ok(t)
}

fn gain_law(cfg: &RunConfig, g: &LinkGeometry, m: &OrientationModel) -> Result<GainDistribution> {
    let p = cfg.channel.params()?;
    match cfg.geometry.law {
        Law::Exact => gain_distribution_exact(g, &p, m),
        Law::Approximate => gain_distribution(g, &p, m),
    }
    .context(|| describe(g))
}

fn tabulate_gain(cfg: &RunConfig, provenance: Provenance, snr: bool) -> Result<TableArtifact> {
    let m = cfg.orientation.sitting.model()?;
    let (name, cols) = if snr {
        (
            "snr",
            ["snr", "snr_db", "pdf", "cdf", "dirac_mass"].as_slice(),
        )
    } else {
        ("gain", ["h", "pdf", "cdf", "dirac_mass"].as_slice())
    };
    let mut t = TableArtifact::new(name, &columns(cols), provenance);
    for g in cfg.geometry.links()? {
        let d = gain_law(cfg, &g, &m)?;
        if !(d.h_max > d.h_min) {
            continue;
        }
        let (lo, hi) = if snr {
            d.snr_support()
        } else {
            (d.h_min, d.h_max)
        };
        for x in midpoints(lo, hi, cfg.geometry.points) {
            let mut row = link_cells(&g);
            if snr {
                let pdf = d.snr_pdf(x).context(|| describe(&g))?;
                row.extend([
                    x.into(),
                    (10.0 * x.log10()).into(),
                    pdf.into(),
                    d.snr_cdf(x).into(),
                    d.dirac_mass.into(),
                ]);
            } else {
                let pdf = d.pdf(x).context(|| describe(&g))?;
                row.extend([x.into(), pdf.into(), d.cdf(x).into(), d.dirac_mass.into()]);
            }
            t.push(row);
        }
    }
    Ok(t)
}

fn orwp_sweep(cfg: &RunConfig, provenance: Provenance) -> Result<TableArtifact> {
    let seed = cfg.seed.expect("validated");
    let mut t = TableArtifact::new(
        "orwp_sweep",
        &[
            "L",
            "v",
            "mode",
            "rate_hz",
            "n_handovers",
            "sim_seconds",
            "seed",
        ],
        provenance,
    );
    for &l in &cfg.orwp.room_lengths {
        for &v in &cfg.orwp.speeds {
            let oc = cfg.orwp_config(l, v)?;
            for mode in [HandoverMode::VerticalUpward, HandoverMode::OrwpGaussian] {
                let est = handover_rate(&oc, mode, cfg.orwp.runs)
                    .context(|| format!("L = {l}, v = {v}, {}", mode.as_str()))?;
                t.push(vec![
                    l.into(),
                    v.into(),
                    mode.as_str().into(),
                    est.rate_hz.into(),
                    est.n_handovers.into(),
                    est.sim_seconds.into(),
                    seed.into(),
                ]);
            }
        }
    }
    Ok(t)
}

fn fit_dataset(cfg: &RunConfig, provenance: Provenance) -> Result<TableArtifact> {
    let path = cfg.fit.dataset.as_deref().expect("validated");
    fit_table(path, cfg.fit.family, provenance)
}

fn fit_table(path: &Path, family: Option<Family>, provenance: Provenance) -> Result<TableArtifact> {
    let data = ingest_orientation_csv(path)?;
    let families = match family {
        Some(f) => vec![f],
        None => vec![Family::Laplace, Family::Gaussian],
    };
    let mut t = TableArtifact::new(
        "fit",
        &[
            "family",
            "n",
            "mu_deg",
            "sigma_deg",
            "scale_deg",
            "ksd",
            "skewness",
            "kurtosis",
        ],
        provenance,
    );
    for f in families {
        let r = fit_mle(&data.theta, f).context(|| format!("fitting {}", path.display()))?;
        let name = match f {
            Family::Laplace => "laplace",
            Family::Gaussian => "gaussian",
        };
        t.push(vec![
            name.into(),
            data.len().into(),
            r.model.mu.to_degrees().into(),
            r.model.std_dev().to_degrees().into(),
            r.model.scale.to_degrees().into(),
            r.ksd.into(),
            r.skewness.into(),
            r.kurtosis.into(),
        ]);
    }
    Ok(t)
}

struct Check {
    name: String,
    statistic: f64,
    threshold: f64,
    passed: bool,
    detail: String,
}

impl Check {
    fn below(name: impl Into<String>, statistic: f64, threshold: f64, detail: String) -> Self {
        Self {
            name: name.into(),
            statistic,
            threshold,
            passed: statistic.abs() <= threshold,
            detail,
        }
    }
}

fn validate(cfg: &RunConfig, provenance: Provenance) -> Result<TableArtifact> {
    let seed = cfg.seed.expect("validated");
    let v = &cfg.validate;
    let quad = 0.1 * v.quadrature;
    let m = cfg.orientation.sitting.model()?;
    let p = cfg.channel.params()?;
    let mut checks = Vec::new();

    for (k, g) in cfg.geometry.links()?.iter().enumerate() {
        let tag = format!("ue{k}");
        let where_ = describe(g);
        let c = coefficients(g).context(|| where_.clone())?;
        let exact = CosPsiDistribution::exact(c, m).context(|| where_.clone())?;
        let d = gain_law(cfg, g, &m)?;

        let mass = exact.total_mass(quad).context(|| where_.clone())?.value;
        checks.push(Check::below(
            format!("{tag}_cospsi_mass"),
            mass - 1.0,
            v.quadrature,
            format!("{where_}: integral of exact cos psi density = {mass:.12}"),
        ));
        if m.family == Family::Laplace {
            let approx = CosPsiDistribution::approximate(c, m).context(|| where_.clone())?;
            let mass = approx.total_mass(quad).context(|| where_.clone())?.value;
            checks.push(Check::below(
                format!("{tag}_approx_mass"),
                mass - 1.0,
                v.quadrature,
                format!("{where_}: integral of approximate cos psi density = {mass:.12}"),
            ));
        }
        let mass = d.total_mass(quad).context(|| where_.clone())?.value;
        checks.push(Check::below(
            format!("{tag}_gain_mass"),
            mass - 1.0,
            v.quadrature,
            format!("{where_}: gain density plus Dirac mass = {mass:.12}"),
        ));
        let mass = d.snr_total_mass(quad).context(|| where_.clone())?.value;
        checks.push(Check::below(
            format!("{tag}_snr_mass"),
            mass - 1.0,
            v.quadrature,
            format!("{where_}: SNR density plus Dirac mass = {mass:.12}"),
        ));

        let thetas = m.sample_with(v.mc_samples, &mut rng::stream(seed, 16 + k as u64));
        let taus: Vec<f64> = thetas
            .iter()
            .map(|&th| cos_psi(g, th))
            .collect::<lifi_orient::Result<_>>()
            .context(|| where_.clone())?;
        let gains: Vec<f64> = thetas
            .iter()
            .map(|&th| los_gain(g, &p, th))
            .collect::<lifi_orient::Result<_>>()
            .context(|| where_.clone())?;
        let snrs: Vec<f64> = gains.iter().map(|h| d.s0 * h * h).collect();
        let n = v.mc_samples;
        let ks = |xs: &[f64], f: &dyn Fn(f64) -> f64| ksd_vs_cdf(xs, f).context(|| where_.clone());
        let cos_law = &exact;
        checks.push(Check::below(
            format!("{tag}_cospsi_ksd"),
            ks(&taus, &|x| cos_law.cdf(x))?,
            v.ksd,
            format!("{where_}: {n} Monte Carlo samples vs exact CDF"),
        ));
        checks.push(Check::below(
            format!("{tag}_gain_ksd"),
            ks(&gains, &|x| d.cdf(x))?,
            v.ksd,
            format!("{where_}: {n} Monte Carlo samples vs gain CDF"),
        ));
        checks.push(Check::below(
            format!("{tag}_snr_ksd"),
            ks(&snrs, &|x| d.snr_cdf(x))?,
            v.ksd,
            format!("{where_}: {n} Monte Carlo samples vs SNR CDF"),
        ));
    }

    let w = &cfg.orientation.walking;
    let (mu, sd) = (w.mu_deg.to_radians(), w.std_rad());
    let (ts, tc) = (cfg.orwp.ts_s, cfg.orwp.tc_theta_s);
    let params = ar1_from_stats(mu, sd, ts, tc).context(|| "AR(1) parameters".into())?;
    let mut r = rng::stream(seed, 1);
    let xs = Ar1Process::stationary(params, &mut r).run(v.ar_steps, &mut r);
    let nf = v.ar_steps as f64;
    let c1 = params.c1;
    let se_mean = sd * ((1.0 + c1) / (1.0 - c1) / nf).sqrt();
    let se_var = sd * sd * (2.0 * (1.0 + c1 * c1) / (1.0 - c1 * c1) / nf).sqrt();
    let z_mean = (mean(&xs) - mu) / se_mean;
    let z_var = (variance(&xs) - sd * sd) / se_var;
    checks.push(Check::below(
        "ar1_mean",
        z_mean,
        v.moment_sigmas,
        format!("{} steps, deviation in standard errors", v.ar_steps),
    ));
    checks.push(Check::below(
        "ar1_variance",
        z_var,
        v.moment_sigmas,
        format!("{} steps, deviation in standard errors", v.ar_steps),
    ));
    let lag = ((tc / ts).round() as usize).max(1);
    let acf = autocorrelation(&xs, lag).context(|| "AR(1) autocorrelation".into())?[lag];
    checks.push(Check::below(
        "ar1_acf_at_coherence",
        acf - 0.05,
        0.02,
        format!("ACF at lag {lag} = {acf:.5}, target 0.05"),
    ));

    let mut r = rng::stream(seed, 2);
    let ratios: Vec<f64> = (0..v.rwp_pairs)
        .map(|_| transition_length(draw_waypoint(1.0, &mut r), draw_waypoint(1.0, &mut r)))
        .collect();
    let rm = mean(&ratios);
    let se = (variance(&ratios) / v.rwp_pairs as f64).sqrt();
    checks.push(Check::below(
        "rwp_mean_length",
        (rm - RWP_MEAN_LENGTH) / se,
        v.moment_sigmas,
        format!(
            "{} pairs, E[D]/L = {rm:.5} vs {RWP_MEAN_LENGTH}, deviation in standard errors",
            v.rwp_pairs
        ),
    ));

    let mut t = TableArtifact::new(
        "validate",
        &["check", "statistic", "threshold", "passed", "detail"],
        provenance,
    );
    let all = checks.iter().all(|c| c.passed);
    for c in checks {
        t.push(vec![
            c.name.into(),
            c.statistic.into(),
            c.threshold.into(),
            c.passed.into(),
            c.detail.into(),
        ]);
    }
    t.passed = Some(all);
    Ok(t)
}

/// Fits a dataset outside a full config; used by the `fit` command.
pub fn fit_file(path: &Path, family: Option<Family>, cfg: &RunConfig) -> Result<TableArtifact> {
    let mut c = cfg.clone();
    c.scenario = Scenario::FitDataset;
    c.fit.dataset = Some(path.to_path_buf());
    c.fit.family = family.or(c.fit.family);
    run(&c)
}
