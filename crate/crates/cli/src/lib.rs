//! Subcommands of the `roughwet` binary.

pub mod config;

use config::RunConfig;
use roughwet::certificate::{certify_explicit, Verdict};
use roughwet::experiment::{emit_outputs, epsilon_sweep, ExperimentConfig};
use roughwet::geometry::{build_rough_boundary, rasterize, trace_weights, DEFAULT_SAMPLES_PER_PERIOD, GAMMA_OTHER_WALLS};
use roughwet::output::{csv, pgm};
use roughwet::solver::{minimize_from, touches_other_walls, EnergyReport, VolumeOptions};
use roughwet::wetting::{effective_gamma, EffectiveWetting};
use roughwet::{CertificateError, ExperimentError, GeometryError, SolverError, WettingError};
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONSTRAINT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subcommand {
    Analyze,
    Certify,
    Minimize,
    Converge,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: m.into() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(format!("i/o error: {e}"))
    }
}

impl From<WettingError> for Failure {
    fn from(e: WettingError) -> Self {
        let code = match e {
            WettingError::AngleUndefined(_) => EXIT_NUMERIC,
            WettingError::GammaRange(_) => EXIT_USAGE,
            _ => EXIT_CONSTRAINT,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<CertificateError> for Failure {
    fn from(e: CertificateError) -> Self {
        let code = if matches!(e, CertificateError::Numeric(_)) { EXIT_NUMERIC } else { EXIT_CONSTRAINT };
        Self { code, message: e.to_string() }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Self { code: EXIT_CONSTRAINT, message: e.to_string() }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let code = match e {
            SolverError::Constraint { .. } => EXIT_CONSTRAINT,
            SolverError::Measurement(_) => EXIT_NUMERIC,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        match e {
            ExperimentError::Wetting(w) => w.into(),
            ExperimentError::Geometry(g) => g.into(),
            ExperimentError::Solver(s) => s.into(),
            ExperimentError::Io(io) => io.into(),
            ExperimentError::EmptyTable => Self { code: EXIT_NUMERIC, message: "empty table".into() },
            ExperimentError::Invalid(m) => Failure::usage(m),
        }
    }
}

/// Runs one subcommand; text for stdout is appended to `out`.
pub fn run(cmd: Subcommand, cfg: &RunConfig, out: &mut String) -> Result<(), Failure> {
    std::fs::create_dir_all(&cfg.outdir)?;
    std::fs::write(cfg.outdir.join("config.toml"), toml::to_string(&cfg.document).unwrap_or_default())?;
    match cmd {
        Subcommand::Analyze => analyze(cfg, out),
        Subcommand::Certify => certify(cfg, out),
        Subcommand::Minimize => minimize(cfg, out),
        Subcommand::Converge => converge(cfg, out),
    }
}

fn need_gamma(cfg: &RunConfig) -> Result<f64, Failure> {
    cfg.gamma().ok_or_else(|| Failure::usage("wetting.gamma: missing key"))
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "none".into(), |x| format!("{x:.10}"))
}

pub fn analysis_report(ew: &EffectiveWetting) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k} = {v}");
    };
    kv("gamma", format!("{:.10}", ew.gamma));
    kv("gamma_c", format!("{:.10}", ew.gamma_c));
    kv("r", format!("{:.10}", ew.roughness));
    kv("regime", ew.regime.name().into());
    kv("gamma_eff", format!("{:.10}", ew.gamma_eff));
    kv("y0", opt(ew.y0));
    kv("s0", opt(ew.s0));
    kv("f", format!("{:.10}", ew.cassie_f));
    kv("rho", format!("{:.10}", ew.cassie_rho));
    kv("theta_Y_deg", format!("{:.6}", ew.theta_y.to_degrees()));
    kv("theta_W_deg", ew.theta_w.map_or_else(|| "undefined".into(), |t| format!("{:.6}", t.to_degrees())));
    kv("theta_eff_deg", format!("{:.6}", ew.theta_eff.to_degrees()));
    s
}

fn analyze(cfg: &RunConfig, out: &mut String) -> Result<(), Failure> {
    let gamma = need_gamma(cfg)?;
    let ew = effective_gamma(&cfg.profile, gamma)?;
    out.push_str(&analysis_report(&ew));
    if cfg.gamma_sweep > 0 {
        let n = cfg.gamma_sweep;
        let mut rows = Vec::with_capacity(n);
        for k in 0..n {
            let g = k as f64 / n as f64;
            let e = effective_gamma(&cfg.profile, g)?;
            rows.push(vec![
                format!("{g:.10e}"),
                e.regime.name().to_string(),
                format!("{:.10e}", e.gamma_eff),
                format!("{:.10e}", e.theta_eff.to_degrees()),
                e.theta_w.map_or_else(String::new, |t| format!("{:.10e}", t.to_degrees())),
            ]);
        }
        let text = csv(&["gamma", "regime", "gamma_eff", "theta_eff_deg", "theta_W_deg"], &rows);
        std::fs::write(cfg.outdir.join("gamma_sweep.csv"), text)?;
    }
    Ok(())
}

fn certify(cfg: &RunConfig, out: &mut String) -> Result<(), Failure> {
    let gamma = need_gamma(cfg)?;
    if !cfg.profile.has_flat_ends() {
        return Err(CertificateError::EndSlope.into());
    }
    let ew = effective_gamma(&cfg.profile, gamma)?;
    let y0 = ew.y0.unwrap_or(cfg.profile.max_height());
    let res = certify_explicit(&cfg.profile, gamma, y0)?;
    let verdict = match res.verdict {
        Verdict::Certified => "Certified",
        Verdict::NotCertified => "NotCertified",
    };
    if res.is_vacuous() {
        let _ = writeln!(out, "{verdict}: groove domain is empty (y0 = {y0:.10}), gamma = {gamma}");
    } else {
        let (_, wy) = res.witness.unwrap_or((f64::NAN, f64::NAN));
        let _ = writeln!(
            out,
            "{verdict}: gamma = {gamma}, y0 = {y0:.10}, y1 = {:.10}, worst margin {:.6e} at y = {wy:.10}",
            res.y1, res.worst_margin
        );
    }
    let rows: Vec<Vec<String>> = res.margins.iter().map(|(y, m)| vec![format!("{y:.10e}"), format!("{m:.10e}")]).collect();
    std::fs::write(cfg.outdir.join("certify_margins.csv"), csv(&["y", "margin"], &rows))?;
    Ok(())
}

fn minimize(cfg: &RunConfig, out: &mut String) -> Result<(), Failure> {
    let gamma = need_gamma(cfg)?;
    let q = cfg.q.ok_or_else(|| Failure::usage("experiment.q: missing key"))?;
    let epsilon = match cfg.domain_epsilons.last() {
        Some(&e) => e,
        None if cfg.profile.is_flat() => 1.0,
        None => return Err(Failure::usage("domain.epsilon_list: missing key")),
    };
    let dom = build_rough_boundary(cfg.base, &cfg.profile, epsilon, DEFAULT_SAMPLES_PER_PERIOD)?;
    let mut grid = rasterize(&dom, cfg.resolution)?;
    let weights = trace_weights(&dom, &mut grid, gamma, GAMMA_OTHER_WALLS);
    let opts = VolumeOptions { slack: cfg.slack, ..VolumeOptions::default() };
    let (field, report) = minimize_from(&grid, &weights, q, opts, Some(&dom), &[])?;
    if touches_other_walls(&grid, &field, &dom) {
        eprintln!("warning: the droplet wets a side or top wall; enlarge the domain");
    }
    std::fs::write(cfg.outdir.join("occupancy.pgm"), pgm(&grid, &field))?;
    std::fs::write(cfg.outdir.join("energy_report.txt"), report.to_key_values())?;
    let row = format!("{}\r\n{}\r\n", EnergyReport::CSV_HEADER, report.csv_row());
    std::fs::write(cfg.outdir.join("energy_report.csv"), row)?;
    out.push_str(&report.to_key_values());
    Ok(())
}

fn converge(cfg: &RunConfig, out: &mut String) -> Result<(), Failure> {
    let gamma = cfg.experiment_gamma.ok_or_else(|| Failure::usage("experiment.gamma: missing key"))?;
    let q = cfg.q.ok_or_else(|| Failure::usage("experiment.q: missing key"))?;
    if cfg.experiment_epsilons.is_empty() {
        return Err(Failure::usage("experiment.epsilon_list: missing key"));
    }
    let exp = ExperimentConfig {
        profile: cfg.profile.clone(),
        base: cfg.base,
        gamma,
        q,
        epsilons: cfg.experiment_epsilons.clone(),
        resolution: cfg.resolution,
        slack: cfg.slack,
    };
    let sweep = epsilon_sweep(&exp)?;
    let dir = match &cfg.experiment_outdir {
        Some(d) => cfg.outdir.join(d),
        None => cfg.outdir.clone(),
    };
    emit_outputs(&sweep, &dir)?;
    out.push_str(&sweep.csv().replace("\r\n", "\n"));
    for run in &sweep.runs {
        if let Some(e) = &run.row.error {
            eprintln!("epsilon = {}: {e}", run.row.epsilon);
        }
    }
    if !sweep.l1_monotone() {
        eprintln!("warning: l1_distance is not monotone over the last two halvings of epsilon");
    }
    if !sweep.sandwich_holds() {
        eprintln!("warning: F_eps exceeds the recovery energy on some row");
    }
    let _ = writeln!(out, "outputs written to {}", display(&dir));
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}
