//! ε-sweeps: minimisers on rough channels against the flat-wall model with the
//! effective interaction coefficient.

use crate::error::ExperimentError;
use crate::geometry::{build_rough_boundary, epsilon_index, rasterize, trace_weights, Base, Grid, RoughDomain};
use crate::geometry::{DEFAULT_SAMPLES_PER_PERIOD, GAMMA_OTHER_WALLS, MIN_CELLS_PER_PERIOD};
use crate::output::{csv, pgm, svg_plot, Series};
use crate::profile::Profile;
use crate::solver::{discrete_energy, measure_apparent_angle, minimize_from, DropletField, EnergyReport, VolumeOptions};
use crate::wetting::{effective_gamma, EffectiveWetting, Regime};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

pub const CSV_HEADER: [&str; 7] =
    ["epsilon", "F_eps", "F_eff", "recovery_energy", "l1_distance", "angle_measured_deg", "angle_predicted_deg"];
pub const CSV_NAME: &str = "convergence.csv";
pub const SVG_NAME: &str = "convergence.svg";

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub profile: Profile,
    pub base: Base,
    pub gamma: f64,
    pub q: f64,
    /// Strictly decreasing, each of the form `1/j`.
    pub epsilons: Vec<f64>,
    /// Cells per unit length; raised to `8/ε` where needed.
    pub resolution: usize,
    pub slack: f64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if !matches!(self.base, Base::Channel { .. }) {
            return Err(ExperimentError::Invalid("sweeps need a channel base".into()));
        }
        if !(0.0..1.0).contains(&self.gamma) {
            return Err(ExperimentError::Invalid(format!("gamma = {} must lie in [0, 1)", self.gamma)));
        }
        if !(self.q > 0.0) {
            return Err(ExperimentError::Invalid(format!("volume q = {} must be positive", self.q)));
        }
        for &e in &self.epsilons {
            epsilon_index(e)?;
        }
        if self.epsilons.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ExperimentError::Invalid("epsilon_list must be strictly decreasing".into()));
        }
        Ok(())
    }

    pub fn cells_per_unit(&self, epsilon: f64) -> usize {
        self.resolution.max((MIN_CELLS_PER_PERIOD as f64 / epsilon).ceil() as usize)
    }

    fn options(&self) -> VolumeOptions {
        VolumeOptions { slack: self.slack, ..VolumeOptions::default() }
    }
}

/// Minimiser `E₀` of the flat-wall problem.
#[derive(Debug, Clone)]
pub struct Reference {
    pub wetting: EffectiveWetting,
    /// Coefficient on the flat wall: `rγ` or `γ_eff`.
    pub gamma_wall: f64,
    pub domain: RoughDomain,
    pub grid: Grid,
    pub field: DropletField,
    pub report: EnergyReport,
    /// `γ_eff ≥ 1`: the reference is a disk off the wall.
    pub detached: bool,
}

pub fn effective_reference(cfg: &ExperimentConfig) -> Result<Reference, ExperimentError> {
    cfg.validate()?;
    let wetting = effective_gamma(&cfg.profile, cfg.gamma)?;
    let gamma_wall = match wetting.regime {
        Regime::FullWetting => wetting.roughness * cfg.gamma,
        _ => wetting.gamma_eff,
    };
    let domain = build_rough_boundary(cfg.base, &Profile::flat(), 1.0, DEFAULT_SAMPLES_PER_PERIOD)?;
    let finest = cfg.epsilons.iter().map(|&e| cfg.cells_per_unit(e)).max().unwrap_or(cfg.resolution);
    let mut grid = rasterize(&domain, finest)?;
    let weights = trace_weights(&domain, &mut grid, gamma_wall.min(1.0), GAMMA_OTHER_WALLS);
    if gamma_wall >= 1.0 {
        let Base::Channel { width, height } = cfg.base else { unreachable!() };
        let r = (cfg.q / std::f64::consts::PI).sqrt();
        let lift = r + 4.0 * grid.spacing;
        if 2.0 * lift > height || 2.0 * lift > width {
            return Err(ExperimentError::Invalid("channel too small for a detached droplet".into()));
        }
        let field = DropletField::from_predicate(&grid, |p| (p[0] - 0.5 * width).hypot(p[1] - lift) <= r);
        let mut report = discrete_energy(&grid, &field, &weights);
        report.target_volume = cfg.q;
        return Ok(Reference { wetting, gamma_wall, domain, grid, field, report, detached: true });
    }
    let (field, report) = minimize_from(&grid, &weights, cfg.q, cfg.options(), Some(&domain), &[])?;
    Ok(Reference { wetting, gamma_wall, domain, grid, field, report, detached: false })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub epsilon: f64,
    pub f_eps: f64,
    pub f_eff: f64,
    /// Energy of `E₀ ∩ Ω_ε` with a ball restoring the volume.
    pub recovery_energy: f64,
    /// Area of `E_ε Δ E₀` after matching centroids along the wall.
    pub l1_distance: f64,
    pub angle_measured: f64,
    pub angle_predicted: f64,
    /// Per-ε failure; the affected fields are NaN.
    pub error: Option<String>,
}

impl ConvergenceRow {
    pub fn csv_fields(&self) -> Vec<String> {
        [
            self.epsilon,
            self.f_eps,
            self.f_eff,
            self.recovery_energy,
            self.l1_distance,
            self.angle_measured.to_degrees(),
            self.angle_predicted.to_degrees(),
        ]
        .iter()
        .map(|&v| if v.is_finite() { format!("{v:.10e}") } else { String::new() })
        .collect()
    }
}

#[derive(Debug, Clone)]
pub struct EpsilonRun {
    pub row: ConvergenceRow,
    pub domain: Option<RoughDomain>,
    pub grid: Option<Grid>,
    pub field: Option<DropletField>,
    pub report: Option<EnergyReport>,
    /// The recovery set had lower energy than the solver's set and replaced it.
    pub recovery_won: bool,
}

#[derive(Debug, Clone)]
pub struct Sweep {
    pub reference: Reference,
    pub runs: Vec<EpsilonRun>,
}

impl Sweep {
    pub fn rows(&self) -> Vec<&ConvergenceRow> {
        self.runs.iter().map(|r| &r.row).collect()
    }

    /// `l1_distance` non-increasing over the last two halvings of ε.
    pub fn l1_monotone(&self) -> bool {
        let l1: Vec<f64> = self.runs.iter().map(|r| r.row.l1_distance).collect();
        let tail = &l1[l1.len().saturating_sub(3)..];
        tail.windows(2).all(|w| w[1] <= w[0])
    }

    /// `|F_eps - F_eff|` strictly decreasing along the sweep.
    pub fn gap_decreasing(&self) -> bool {
        let gaps: Vec<f64> = self.runs.iter().map(|r| (r.row.f_eps - r.row.f_eff).abs()).collect();
        gaps.iter().all(|g| g.is_finite()) && gaps.windows(2).all(|w| w[1] < w[0])
    }

    /// `F_eps ≤ recovery_energy` on every row.
    pub fn sandwich_holds(&self) -> bool {
        self.runs.iter().all(|r| r.row.f_eps <= r.row.recovery_energy)
    }

    pub fn csv(&self) -> String {
        let rows: Vec<Vec<String>> = self.runs.iter().map(|r| r.row.csv_fields()).collect();
        csv(&CSV_HEADER, &rows)
    }
}

/// Solves on `Ω_ε` for every ε, rows in the order of `cfg.epsilons`.
pub fn epsilon_sweep(cfg: &ExperimentConfig) -> Result<Sweep, ExperimentError> {
    let reference = effective_reference(cfg)?;
    let runs = cfg.epsilons.par_iter().map(|&e| run_epsilon(cfg, &reference, e)).collect();
    Ok(Sweep { reference, runs })
}

fn run_epsilon(cfg: &ExperimentConfig, reference: &Reference, epsilon: f64) -> EpsilonRun {
    let mut row = ConvergenceRow {
        epsilon,
        f_eps: f64::NAN,
        f_eff: reference.report.total,
        recovery_energy: f64::NAN,
        l1_distance: f64::NAN,
        angle_measured: f64::NAN,
        angle_predicted: reference.wetting.theta_eff,
        error: None,
    };
    let mut run = EpsilonRun { row: row.clone(), domain: None, grid: None, field: None, report: None, recovery_won: false };
    let built = build_rough_boundary(cfg.base, &cfg.profile, epsilon, DEFAULT_SAMPLES_PER_PERIOD)
        .and_then(|d| rasterize(&d, cfg.cells_per_unit(epsilon)).map(|g| (d, g)));
    let (domain, mut grid) = match built {
        Ok(x) => x,
        Err(e) => {
            row.error = Some(e.to_string());
            run.row = row;
            return run;
        }
    };
    let weights = trace_weights(&domain, &mut grid, cfg.gamma, GAMMA_OTHER_WALLS);
    let recovery = recovery_set(reference, &grid, cfg.q);
    let rec = discrete_energy(&grid, &recovery, &weights);
    row.recovery_energy = rec.total;
    let (mut field, mut report) = match minimize_from(&grid, &weights, cfg.q, cfg.options(), Some(&domain), std::slice::from_ref(&recovery)) {
        Ok(x) => x,
        Err(e) => {
            row.error = Some(e.to_string());
            run.row = row;
            return run;
        }
    };
    if rec.total <= report.total && (recovery.volume - cfg.q).abs() <= cfg.slack * cfg.q {
        let mut r = rec;
        r.target_volume = cfg.q;
        r.iterations = report.iterations;
        r.bracket = report.bracket;
        r.continuation_steps = report.continuation_steps;
        field = recovery;
        report = r;
        run.recovery_won = true;
    }
    row.f_eps = report.total;
    row.l1_distance = l1_distance(&reference.grid, &reference.field, &grid, &field);
    match measure_apparent_angle(&grid, &field, &domain) {
        Ok(m) => row.angle_measured = m.angle,
        Err(e) => row.error = Some(e.to_string()),
    }
    run.row = row;
    run.domain = Some(domain);
    run.grid = Some(grid);
    run.field = Some(field);
    run.report = Some(report);
    run
}

/// `E₀ ∩ Ω_ε` on `grid`, topped up with a ball at the droplet's apex when volume was lost.
pub fn recovery_set(reference: &Reference, grid: &Grid, q: f64) -> DropletField {
    let occupancy = (0..grid.nx * grid.ny)
        .map(|c| reference.grid.cell_of(grid.center(c)).map_or(0, |k| reference.field.occupancy[k]))
        .collect();
    let base = DropletField::from_occupancy(grid, occupancy);
    if base.volume >= q {
        return base;
    }
    let Some(centroid) = base.centroid(grid) else { return base };
    let apex = (0..grid.nx * grid.ny)
        .filter(|&c| base.is_occupied(c))
        .map(|c| grid.center(c))
        .filter(|p| (p[0] - centroid[0]).abs() <= 0.5 * grid.spacing + 1e-12)
        .max_by(|a, b| a[1].total_cmp(&b[1]))
        .unwrap_or(centroid);
    let with_ball = |r: f64| {
        let occ = (0..grid.nx * grid.ny)
            .map(|c| {
                let p = grid.center(c);
                (base.is_occupied(c) || (p[0] - apex[0]).hypot(p[1] - apex[1]) <= r) as u8
            })
            .collect();
        DropletField::from_occupancy(grid, occ)
    };
    let (mut lo, mut hi) = (0.0, 2.0 * (q / std::f64::consts::PI).sqrt());
    if with_ball(hi).volume < q {
        return with_ball(hi);
    }
    for _ in 0..50 {
        let mid = 0.5 * (lo + hi);
        if with_ball(mid).volume >= q {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    with_ball(hi)
}

/// Area of the symmetric difference, both sets resampled to the finer grid by nearest
/// cell and `b` shifted along the wall so the centroids' abscissae agree.
pub fn l1_distance(ga: &Grid, a: &DropletField, gb: &Grid, b: &DropletField) -> f64 {
    let shift = match (a.centroid(ga), b.centroid(gb)) {
        (Some(ca), Some(cb)) => cb[0] - ca[0],
        _ => 0.0,
    };
    let fine = if ga.spacing <= gb.spacing { ga } else { gb };
    let at = |g: &Grid, f: &DropletField, p: [f64; 2]| g.cell_of(p).is_some_and(|c| f.is_occupied(c));
    let mismatched = (0..fine.nx * fine.ny)
        .filter(|&c| {
            let p = fine.center(c);
            at(ga, a, p) != at(gb, b, [p[0] + shift, p[1]])
        })
        .count();
    mismatched as f64 * fine.cell_area()
}

/// Writes the CSV, the SVG plot of `F_eps` and `F_eff`, and a PGM per solved ε plus one of `E₀`.
pub fn emit_outputs(sweep: &Sweep, outdir: &Path) -> Result<Vec<PathBuf>, ExperimentError> {
    if sweep.runs.is_empty() {
        return Err(ExperimentError::EmptyTable);
    }
    std::fs::create_dir_all(outdir)?;
    let mut written = Vec::new();
    let mut put = |name: String, text: String| -> Result<(), ExperimentError> {
        let p = outdir.join(name);
        std::fs::write(&p, text)?;
        written.push(p);
        Ok(())
    };
    put(CSV_NAME.into(), sweep.csv())?;
    let series = |label: &str, colour: &str, f: &dyn Fn(&ConvergenceRow) -> f64| Series {
        label: label.into(),
        colour: colour.into(),
        points: sweep.runs.iter().map(|r| (r.row.epsilon, f(&r.row))).collect(),
    };
    let plot = svg_plot(
        "Minimum energy against roughness scale",
        "epsilon",
        "energy",
        &[
            series("F_eps", "#1f77b4", &|r| r.f_eps),
            series("F_eff", "#d62728", &|r| r.f_eff),
            series("recovery", "#2ca02c", &|r| r.recovery_energy),
        ],
    );
    put(SVG_NAME.into(), plot)?;
    for run in &sweep.runs {
        if let (Some(g), Some(f)) = (&run.grid, &run.field) {
            let j = epsilon_index(run.row.epsilon).unwrap_or(0);
            put(format!("E_eps_{j}.pgm"), pgm(g, f))?;
        }
    }
    put("E_0.pgm".into(), pgm(&sweep.reference.grid, &sweep.reference.field))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(profile: Profile, gamma: f64, eps: Vec<f64>) -> ExperimentConfig {
        ExperimentConfig {
            profile,
            base: Base::Channel { width: 1.0, height: 0.5 },
            gamma,
            q: 0.02,
            epsilons: eps,
            resolution: 64,
            slack: 0.005,
        }
    }

    #[test]
    fn validation() {
        let mut c = config(Profile::flat(), 0.3, vec![0.25, 0.3]);
        assert!(c.validate().is_err());
        c.epsilons = vec![0.125, 0.25];
        assert!(c.validate().is_err());
        c.epsilons = vec![0.25, 0.125];
        assert!(c.validate().is_ok());
        c.gamma = 1.2;
        assert!(c.validate().is_err());
    }

    #[test]
    fn full_wetting_uses_wenzel_coefficient() {
        let p = Profile::sinusoid(0.5).unwrap();
        let c = config(p.clone(), 0.3, vec![0.25]);
        let r = effective_reference(&c).unwrap();
        assert!((r.gamma_wall - 0.3 * p.roughness()).abs() < 1e-12);
        assert!(!r.detached);
    }

    #[test]
    fn flat_sweep_is_constant() {
        let c = config(Profile::flat(), 0.3, vec![0.5, 0.25]);
        let s = epsilon_sweep(&c).unwrap();
        for run in &s.runs {
            assert!(run.row.error.is_none(), "{:?}", run.row.error);
            assert!((run.row.f_eps - run.row.f_eff).abs() < 1e-12, "{:?}", run.row);
            assert!(run.row.f_eps <= run.row.recovery_energy);
        }
    }

    #[test]
    fn l1_ignores_translation() {
        let c = config(Profile::flat(), 0.0, vec![0.25]);
        let d = build_rough_boundary(c.base, &Profile::flat(), 1.0, 64).unwrap();
        let g = rasterize(&d, 64).unwrap();
        let a = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1]) <= 0.2);
        let b = DropletField::from_predicate(&g, |p| (p[0] - 0.5 - 4.0 / 64.0).hypot(p[1]) <= 0.2);
        assert_eq!(l1_distance(&g, &a, &g, &b), 0.0);
        let e = DropletField::empty(&g);
        assert!((l1_distance(&g, &a, &g, &e) - a.volume).abs() < 0.02);
    }

    #[test]
    fn empty_table_is_an_error() {
        let c = config(Profile::flat(), 0.3, vec![0.5]);
        let mut s = epsilon_sweep(&c).unwrap();
        s.runs.clear();
        assert!(matches!(emit_outputs(&s, Path::new("/nonexistent")), Err(ExperimentError::EmptyTable)));
    }

    #[test]
    fn outputs_written() {
        let c = config(Profile::flat(), 0.3, vec![0.5, 0.25, 0.125]);
        let s = epsilon_sweep(&c).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = emit_outputs(&s, dir.path()).unwrap();
        let text = std::fs::read_to_string(dir.path().join(CSV_NAME)).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert!(text.starts_with("epsilon,F_eps,F_eff,recovery_energy,l1_distance,angle_measured_deg,angle_predicted_deg\r\n"));
        assert_eq!(files.len(), 2 + 3 + 1);
    }
}
