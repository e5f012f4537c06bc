//! Discrete droplet energy, min-cut minimization and contact angle measurement.
//!
//! `F(E) = Σ_pairs w|φ_c - φ_d| + Σ_c trace_c φ_c`, minimized against `λ·vol(E)`
//! as an s-t cut with the source side liquid.

use crate::error::SolverError;
use crate::geometry::{Base, Grid, RoughDomain, WallKind};
use crate::maxflow::Graph;
use std::collections::BTreeSet;

pub const DEFAULT_VOLUME_SLACK: f64 = 0.005;
pub const MAX_BISECTIONS: usize = 60;
const CONTINUATION_SOLVES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct DropletField {
    pub nx: usize,
    pub ny: usize,
    pub occupancy: Vec<u8>,
    pub volume: f64,
}

impl DropletField {
    pub fn empty(grid: &Grid) -> Self {
        Self { nx: grid.nx, ny: grid.ny, occupancy: vec![0; grid.nx * grid.ny], volume: 0.0 }
    }

    /// Occupies node cells whose centre satisfies `pred`.
    pub fn from_predicate(grid: &Grid, pred: impl Fn([f64; 2]) -> bool) -> Self {
        let occupancy = (0..grid.nx * grid.ny).map(|c| (grid.is_node(c) && pred(grid.center(c))) as u8).collect();
        Self::from_occupancy(grid, occupancy)
    }

    pub fn from_occupancy(grid: &Grid, mut occupancy: Vec<u8>) -> Self {
        assert_eq!(occupancy.len(), grid.nx * grid.ny);
        for (c, o) in occupancy.iter_mut().enumerate() {
            if !grid.is_node(c) {
                *o = 0;
            }
        }
        let mut f = Self { nx: grid.nx, ny: grid.ny, occupancy, volume: 0.0 };
        f.volume = volume_of(grid, &f.occupancy);
        f
    }

    pub fn is_occupied(&self, c: usize) -> bool {
        self.occupancy[c] != 0
    }

    pub fn count(&self) -> usize {
        self.occupancy.iter().filter(|&&o| o != 0).count()
    }

    /// Area-weighted centroid of the occupied cells.
    pub fn centroid(&self, grid: &Grid) -> Option<[f64; 2]> {
        let mut m = 0.0;
        let mut s = [0.0; 2];
        for c in 0..self.occupancy.len() {
            if self.is_occupied(c) {
                let w = grid.inside_fraction[c];
                let p = grid.center(c);
                m += w;
                s[0] += w * p[0];
                s[1] += w * p[1];
            }
        }
        (m > 0.0).then(|| [s[0] / m, s[1] / m])
    }
}

fn volume_of(grid: &Grid, occ: &[u8]) -> f64 {
    occ.iter().zip(&grid.inside_fraction).filter(|(o, _)| **o != 0).map(|(_, f)| f).sum::<f64>() * grid.cell_area()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub perimeter_term: f64,
    pub trace_term: f64,
    pub total: f64,
    pub lambda: f64,
    pub achieved_volume: f64,
    /// Capacity of the s-t cut induced by the set at `lambda`.
    pub cut_value: f64,
    pub target_volume: f64,
    pub iterations: usize,
    /// Volumes and energies of the cut solutions bracketing the target.
    pub bracket: Option<Bracket>,
    pub repaired_cells: usize,
    /// Energy change caused by the volume repair.
    pub repair_delta: f64,
    /// The set minimizes `F - λ vol` globally.
    pub exact_lagrangian: bool,
    pub continuation_steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lambda_lo: f64,
    pub volume_lo: f64,
    pub energy_lo: f64,
    pub lambda_hi: f64,
    pub volume_hi: f64,
    pub energy_hi: f64,
}

impl Bracket {
    pub fn energy_gap(&self) -> f64 {
        (self.energy_hi - self.energy_lo).abs()
    }
}

impl EnergyReport {
    fn plain(perimeter: f64, trace: f64, volume: f64) -> Self {
        Self {
            perimeter_term: perimeter,
            trace_term: trace,
            total: perimeter + trace,
            lambda: 0.0,
            achieved_volume: volume,
            cut_value: 0.0,
            target_volume: volume,
            iterations: 0,
            bracket: None,
            repaired_cells: 0,
            repair_delta: 0.0,
            exact_lagrangian: false,
            continuation_steps: 0,
        }
    }

    /// `key = value` lines in a fixed order.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        kv("perimeter_term", fmt(self.perimeter_term));
        kv("trace_term", fmt(self.trace_term));
        kv("total", fmt(self.total));
        kv("lambda", fmt(self.lambda));
        kv("achieved_volume", fmt(self.achieved_volume));
        kv("target_volume", fmt(self.target_volume));
        kv("cut_value", fmt(self.cut_value));
        kv("iterations", self.iterations.to_string());
        kv("repaired_cells", self.repaired_cells.to_string());
        kv("repair_delta", fmt(self.repair_delta));
        kv("exact_lagrangian", self.exact_lagrangian.to_string());
        kv("continuation_steps", self.continuation_steps.to_string());
        match &self.bracket {
            Some(b) => kv("bracket_energy_gap", fmt(b.energy_gap())),
            None => kv("bracket_energy_gap", "nan".into()),
        }
        s
    }

    pub const CSV_HEADER: &'static str =
        "perimeter_term,trace_term,total,lambda,achieved_volume,target_volume,cut_value,iterations,repaired_cells,exact_lagrangian,continuation_steps,bracket_energy_gap";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt(self.perimeter_term),
            fmt(self.trace_term),
            fmt(self.total),
            fmt(self.lambda),
            fmt(self.achieved_volume),
            fmt(self.target_volume),
            fmt(self.cut_value),
            self.iterations,
            self.repaired_cells,
            self.exact_lagrangian,
            self.continuation_steps,
            self.bracket.map(|b| fmt(b.energy_gap())).unwrap_or_else(|| "nan".into()),
        )
    }
}

pub(crate) fn fmt(v: f64) -> String {
    format!("{v:.10e}")
}

/// Relaxed perimeter `Σ_c Σ_o w_o |φ_c - φ_{c+o}|` over active stencil edges.
pub fn relaxed_perimeter(grid: &Grid, phi: &[f64]) -> f64 {
    grid.edges().iter().map(|&(c, d, w)| w * (phi[c] - phi[d]).abs()).sum()
}

/// Perimeter and trace terms of a binary field.
pub fn discrete_energy(grid: &Grid, field: &DropletField, weights: &[f64]) -> EnergyReport {
    let (p, t) = energy_terms(grid, &grid.edges(), field, weights);
    EnergyReport::plain(p, t, field.volume)
}

fn energy_terms(grid: &Grid, edges: &[(usize, usize, f64)], field: &DropletField, weights: &[f64]) -> (f64, f64) {
    let _ = grid;
    let p = edges
        .iter()
        .filter(|&&(c, d, _)| field.occupancy[c] != field.occupancy[d])
        .map(|e| e.2)
        .sum();
    let t = field.occupancy.iter().zip(weights).filter(|(o, _)| **o != 0).map(|(_, w)| w).sum();
    (p, t)
}

/// Cut capacity of the partition given by `field` at multiplier `lambda`.
pub fn cut_capacity(grid: &Grid, edges: &[(usize, usize, f64)], field: &DropletField, weights: &[f64], lambda: f64) -> f64 {
    let (p, _) = energy_terms(grid, edges, field, weights);
    let area = grid.cell_area();
    let mut v = p;
    for c in 0..grid.nx * grid.ny {
        if !grid.is_node(c) {
            continue;
        }
        let u = weights[c] - lambda * area * grid.inside_fraction[c];
        let occ = field.is_occupied(c);
        if u > 0.0 && occ {
            v += u;
        } else if u < 0.0 && !occ {
            v -= u;
        }
    }
    v
}

/// Grid graph data shared between solves on the same grid.
pub struct CutProblem<'a> {
    grid: &'a Grid,
    weights: &'a [f64],
    nodes: Vec<usize>,
    node_of: Vec<u32>,
    edges: Vec<(usize, usize, f64)>,
}

impl<'a> CutProblem<'a> {
    pub fn new(grid: &'a Grid, weights: &'a [f64]) -> Self {
        assert_eq!(weights.len(), grid.nx * grid.ny);
        let mut nodes = Vec::new();
        let mut node_of = vec![u32::MAX; grid.nx * grid.ny];
        for c in 0..grid.nx * grid.ny {
            if grid.is_node(c) {
                node_of[c] = nodes.len() as u32;
                nodes.push(c);
            }
        }
        Self { grid, weights, nodes, node_of, edges: grid.edges() }
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Global minimizer of `F(E) - λ vol(E)`, smallest among ties.
    pub fn solve(&self, lambda: f64) -> (DropletField, EnergyReport) {
        self.solve_with(lambda, None)
    }

    /// As [`solve`](Self::solve) with an extra per-cell cost for occupying a cell.
    pub fn solve_with(&self, lambda: f64, extra: Option<&[f64]>) -> (DropletField, EnergyReport) {
        let grid = self.grid;
        let area = grid.cell_area();
        let mut g = Graph::with_capacity(self.nodes.len(), self.edges.len());
        for (k, &c) in self.nodes.iter().enumerate() {
            let mut u = self.weights[c] - lambda * area * grid.inside_fraction[c];
            if let Some(x) = extra {
                u += x[c];
            }
            if u > 0.0 {
                g.add_tweights(k, 0.0, u);
            } else if u < 0.0 {
                g.add_tweights(k, -u, 0.0);
            }
        }
        for &(c, d, w) in &self.edges {
            g.add_edge(self.node_of[c] as usize, self.node_of[d] as usize, w, w);
        }
        let flow = g.maxflow();
        let mut occ = vec![0u8; grid.nx * grid.ny];
        for (k, &c) in self.nodes.iter().enumerate() {
            if g.in_source(k) {
                occ[c] = 1;
            }
        }
        let field = DropletField::from_occupancy(grid, occ);
        if extra.is_some() {
            let rep = self.report(&field, lambda);
            return (field, rep);
        }
        let (p, t) = energy_terms(grid, &self.edges, &field, self.weights);
        let mut rep = EnergyReport::plain(p, t, field.volume);
        rep.lambda = lambda;
        rep.cut_value = flow;
        (field, rep)
    }

    pub fn energy(&self, field: &DropletField) -> f64 {
        let (p, t) = energy_terms(self.grid, &self.edges, field, self.weights);
        p + t
    }

    pub fn report(&self, field: &DropletField, lambda: f64) -> EnergyReport {
        let (p, t) = energy_terms(self.grid, &self.edges, field, self.weights);
        let mut rep = EnergyReport::plain(p, t, field.volume);
        rep.lambda = lambda;
        rep.cut_value = cut_capacity(self.grid, &self.edges, field, self.weights, lambda);
        rep
    }

    fn flip_delta(&self, field: &DropletField, c: usize) -> f64 {
        let grid = self.grid;
        let now = field.occupancy[c];
        let mut dp = 0.0;
        for (k, &o) in grid.stencil.offsets.iter().enumerate() {
            if let Some(d) = grid.edge_active(c, o) {
                let w = 2.0 * grid.stencil.weights[k];
                let od = field.occupancy[d];
                let before = (now != od) as u8 as f64;
                let after = (now == od) as u8 as f64;
                dp += w * (after - before);
            }
        }
        let dt = if now == 0 { self.weights[c] } else { -self.weights[c] };
        dp + dt
    }

    /// Greedy volume repair: flips frontier cells with the lowest energy change per unit volume
    /// while that moves the volume closer to `q`.
    pub fn repair(&self, field: &mut DropletField, q: f64) -> (usize, f64) {
        let grid = self.grid;
        let area = grid.cell_area();
        let mut cand: BTreeSet<usize> = BTreeSet::new();
        let frontier = |c: usize, field: &DropletField, cand: &mut BTreeSet<usize>| {
            for &o in &grid.stencil.offsets {
                if let Some(d) = grid.edge_active(c, o) {
                    if field.occupancy[d] != field.occupancy[c] {
                        cand.insert(c);
                        cand.insert(d);
                    }
                }
            }
        };
        for c in 0..grid.nx * grid.ny {
            if grid.is_node(c) && field.is_occupied(c) {
                frontier(c, field, &mut cand);
            }
        }
        let mut flips = 0;
        let mut delta = 0.0;
        loop {
            let adding = field.volume < q;
            let mut best: Option<(f64, usize)> = None;
            for &c in &cand {
                if field.is_occupied(c) == adding {
                    continue;
                }
                let dv = grid.inside_fraction[c] * area;
                if dv <= 0.0 {
                    continue;
                }
                let r = self.flip_delta(field, c) / dv;
                if best.is_none_or(|(b, _)| r < b) {
                    best = Some((r, c));
                }
            }
            let Some((_, c)) = best else { break };
            let dv = grid.inside_fraction[c] * area;
            let next = if adding { field.volume + dv } else { field.volume - dv };
            if (next - q).abs() >= (field.volume - q).abs() {
                break;
            }
            delta += self.flip_delta(field, c);
            field.occupancy[c] ^= 1;
            field.volume = next;
            flips += 1;
            frontier(c, field, &mut cand);
        }
        field.volume = volume_of(grid, &field.occupancy);
        (flips, delta)
    }
}

/// Global minimizer of `F(E) - λ vol(E)` on the grid.
pub fn min_cut_solve(grid: &Grid, weights: &[f64], lambda: f64) -> DropletField {
    CutProblem::new(grid, weights).solve(lambda).0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VolumeOptions {
    /// Relative volume tolerance.
    pub slack: f64,
    /// Cut solves per bisection.
    pub max_iterations: usize,
    /// Cut solves spent on the unregularized multiplier search.
    pub global_probe: usize,
    /// Continue with proximal steps when the multiplier search jumps over `q`.
    pub continuation: bool,
    pub max_steps: usize,
    /// Interface displacement per proximal step, in cells, at unit curvature mismatch.
    pub step_cells: f64,
    /// Greedy repair of the closest cut solution when continuation is off.
    pub repair: bool,
}

impl Default for VolumeOptions {
    fn default() -> Self {
        Self {
            slack: DEFAULT_VOLUME_SLACK,
            max_iterations: MAX_BISECTIONS,
            global_probe: 4,
            continuation: true,
            max_steps: 200,
            step_cells: 8.0,
            repair: true,
        }
    }
}

type Solution = (DropletField, EnergyReport);

struct Bisection {
    best: Solution,
    lo: Option<Solution>,
    hi: Option<Solution>,
    solves: usize,
}

impl Bisection {
    fn bracket(&self) -> Option<Bracket> {
        match (&self.lo, &self.hi) {
            (Some(l), Some(h)) => Some(Bracket {
                lambda_lo: l.1.lambda,
                volume_lo: l.0.volume,
                energy_lo: l.1.total,
                lambda_hi: h.1.lambda,
                volume_hi: h.0.volume,
                energy_hi: h.1.total,
            }),
            _ => None,
        }
    }
}

impl<'a> CutProblem<'a> {
    /// Bisection on `λ` for volume `q`, starting from `[lam_lo, lam_hi]` and widening as needed.
    fn bisect(&self, q: f64, tol: f64, extra: Option<&[f64]>, mut lam_lo: f64, mut lam_hi: f64, max_solves: usize) -> Bisection {
        let mut solves = 0;
        let mut best: Option<Solution> = None;
        let mut lo: Option<Solution> = None;
        let mut hi: Option<Solution> = None;
        let run = |lam: f64, best: &mut Option<Solution>, lo: &mut Option<Solution>, hi: &mut Option<Solution>| -> f64 {
            let sol = self.solve_with(lam, extra);
            let v = sol.0.volume;
            if best.as_ref().is_none_or(|b| (v - q).abs() < (b.0.volume - q).abs()) {
                *best = Some(sol.clone());
            }
            if v < q {
                if lo.as_ref().is_none_or(|l| v >= l.0.volume) {
                    *lo = Some(sol);
                }
            } else if hi.as_ref().is_none_or(|h| v <= h.0.volume) {
                *hi = Some(sol);
            }
            v
        };
        let within = |best: &Option<Solution>| best.as_ref().is_some_and(|b| (b.0.volume - q).abs() <= tol);
        // upper end
        loop {
            let v = run(lam_hi, &mut best, &mut lo, &mut hi);
            solves += 1;
            if v >= q || within(&best) || solves >= max_solves {
                break;
            }
            let w = lam_hi - lam_lo;
            lam_lo = lam_hi;
            lam_hi += 2.0 * w.max(1e-3);
        }
        // lower end
        while !within(&best) && solves < max_solves {
            let v = run(lam_lo, &mut best, &mut lo, &mut hi);
            solves += 1;
            if v <= q {
                break;
            }
            let w = lam_hi - lam_lo;
            lam_hi = lam_lo;
            lam_lo -= 2.0 * w.max(1e-3);
        }
        while !within(&best) && solves < max_solves {
            let mid = 0.5 * (lam_lo + lam_hi);
            if mid <= lam_lo || mid >= lam_hi {
                break;
            }
            let v = run(mid, &mut best, &mut lo, &mut hi);
            solves += 1;
            if v < q {
                lam_lo = mid;
            } else {
                lam_hi = mid;
            }
        }
        Bisection { best: best.expect("at least one solve"), lo, hi, solves }
    }

    /// Unsigned distance, in cells, from each node cell centre to the nearest node cell on
    /// the other side of `s`.
    fn interface_distance(&self, s: &DropletField) -> Vec<f64> {
        let grid = self.grid;
        let n = grid.nx * grid.ny;
        let inside: Vec<bool> = (0..n).map(|c| s.is_occupied(c)).collect();
        let outside: Vec<bool> = (0..n).map(|c| grid.is_node(c) && !s.is_occupied(c)).collect();
        let d_in = edt_squared(grid.nx, grid.ny, &inside);
        let d_out = edt_squared(grid.nx, grid.ny, &outside);
        (0..n).map(|c| if inside[c] { d_out[c].sqrt() } else { d_in[c].sqrt() }).collect()
    }

    /// Free cells within `width` cells of the interface; the others keep their state in `s`.
    fn band(&self, s: &DropletField, dist: &[f64], width: f64) -> Band {
        let grid = self.grid;
        let n = grid.nx * grid.ny;
        let mut local = vec![u32::MAX; n];
        let mut cells = Vec::new();
        for c in 0..n {
            if grid.is_node(c) && dist[c] - 0.5 <= width {
                local[c] = cells.len() as u32;
                cells.push(c);
            }
        }
        let mut src = vec![0.0; cells.len()];
        let mut snk = vec![0.0; cells.len()];
        let mut rim = vec![false; cells.len()];
        let mut edges = Vec::new();
        for &(c, d, w) in &self.edges {
            let (lc, ld) = (local[c], local[d]);
            match (lc != u32::MAX, ld != u32::MAX) {
                (true, true) => edges.push((lc, ld, w)),
                (true, false) => {
                    rim[lc as usize] = true;
                    if s.is_occupied(d) {
                        src[lc as usize] += w;
                    } else {
                        snk[lc as usize] += w;
                    }
                }
                (false, true) => {
                    rim[ld as usize] = true;
                    if s.is_occupied(c) {
                        src[ld as usize] += w;
                    } else {
                        snk[ld as usize] += w;
                    }
                }
                (false, false) => {}
            }
        }
        Band { cells, edges, src, snk, rim }
    }

    /// Minimizer of `F - λ vol + Σ extra φ` over sets agreeing with `s` off the band.
    /// Also reports whether a rim cell changed.
    fn solve_band(&self, band: &Band, s: &DropletField, lambda: f64, extra: &[f64]) -> (DropletField, bool) {
        let grid = self.grid;
        let area = grid.cell_area();
        let mut g = Graph::with_capacity(band.cells.len(), band.edges.len());
        for (k, &c) in band.cells.iter().enumerate() {
            let u = self.weights[c] - lambda * area * grid.inside_fraction[c] + extra[c];
            let (mut cs, mut ct) = (band.src[k], band.snk[k]);
            if u > 0.0 {
                ct += u;
            } else {
                cs -= u;
            }
            g.add_tweights(k, cs, ct);
        }
        for &(a, b, w) in &band.edges {
            g.add_edge(a as usize, b as usize, w, w);
        }
        g.maxflow();
        let mut occ = s.occupancy.clone();
        let mut touched = false;
        for (k, &c) in band.cells.iter().enumerate() {
            let v = g.in_source(k) as u8;
            if v != occ[c] && band.rim[k] {
                touched = true;
            }
            occ[c] = v;
        }
        (DropletField::from_occupancy(grid, occ), touched)
    }

    /// Regula falsi (Illinois) on `λ` for the banded problem.
    #[allow(clippy::too_many_arguments)]
    fn falsi(
        &self,
        band: &Band,
        s: &DropletField,
        extra: &[f64],
        q: f64,
        tol: f64,
        lam0: f64,
        max_solves: usize,
    ) -> (DropletField, f64, usize, bool) {
        let mut solves = 0;
        let mut touched = false;
        let mut best: Option<(DropletField, f64)> = None;
        let mut eval = |lam: f64, best: &mut Option<(DropletField, f64)>| -> f64 {
            let (f, t) = self.solve_band(band, s, lam, extra);
            touched |= t;
            let v = f.volume;
            if best.as_ref().is_none_or(|b| (v - q).abs() < (b.0.volume - q).abs()) {
                *best = Some((f, lam));
            }
            v - q
        };
        let done = |best: &Option<(DropletField, f64)>| best.as_ref().is_some_and(|b| (b.0.volume - q).abs() <= tol);
        let f0 = eval(lam0, &mut best);
        solves += 1;
        if !done(&best) {
            let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
            let mut step = 0.05 * lam0.abs().max(1.0);
            let mut a = (lam0, f0);
            let mut b = None;
            while solves < max_solves {
                let lam = a.0 + dir * step;
                let fv = eval(lam, &mut best);
                solves += 1;
                if done(&best) {
                    break;
                }
                if (fv < 0.0) != (a.1 < 0.0) {
                    b = Some((lam, fv));
                    break;
                }
                a = (lam, fv);
                step *= 2.0;
            }
            if let (Some(b), false) = (b, done(&best)) {
                let (mut lo, mut hi) = if a.1 < 0.0 { (a, b) } else { (b, a) };
                let mut side = 0;
                while solves < max_solves && !done(&best) {
                    let mut lam = if hi.1 > lo.1 { lo.0 - lo.1 * (hi.0 - lo.0) / (hi.1 - lo.1) } else { 0.5 * (lo.0 + hi.0) };
                    let (l, h) = (lo.0.min(hi.0), lo.0.max(hi.0));
                    if !(lam > l && lam < h) {
                        lam = 0.5 * (l + h);
                    }
                    if (h - l) <= 1e-12 * h.abs().max(1.0) {
                        break;
                    }
                    let fv = eval(lam, &mut best);
                    solves += 1;
                    if fv < 0.0 {
                        lo = (lam, fv);
                        if side == -1 {
                            hi.1 *= 0.5;
                        }
                        side = -1;
                    } else {
                        hi = (lam, fv);
                        if side == 1 {
                            lo.1 *= 0.5;
                        }
                        side = 1;
                    }
                }
            }
        }
        let (f, lam) = best.expect("at least one solve");
        (f, lam, solves, touched)
    }

    /// Proximal descent at fixed volume from `seed`.
    fn continuation(&self, seed: &DropletField, q: f64, tol: f64, lam0: f64, opts: &VolumeOptions) -> Run {
        let grid = self.grid;
        let h = grid.spacing;
        let rq = (q / std::f64::consts::PI).sqrt();
        let mut s = seed.clone();
        if (s.volume - q).abs() > tol {
            self.repair(&mut s, q);
        }
        let mut lam = lam0;
        // growth of the whole droplet stays stable while τ < R²/2
        let m_max = (0.5 * rq / h).max(1.0);
        let m_min = (opts.step_cells / 64.0).min(m_max);
        let mut m = opts.step_cells.min(m_max);
        let mut stalled = 0.0f64;
        let mut failed = f64::INFINITY;
        let mut accepted_in_row = 0;
        let mut steps = 0;
        let mut solves = 0;
        let n = grid.nx * grid.ny;
        while steps < opts.max_steps {
            steps += 1;
            let tau = m * h * rq;
            let dist = self.interface_distance(&s);
            let scale = h * h * h / tau;
            let extra: Vec<f64> = (0..n)
                .map(|c| {
                    let d = (dist[c] - 0.5).max(0.0) * scale;
                    if s.is_occupied(c) { -d } else { d }
                })
                .collect();
            let mut width = (4.0 + 0.5 * m).ceil();
            let (mut e, lam_e) = loop {
                let band = self.band(&s, &dist, width);
                let (e, lam_e, k, touched) = self.falsi(&band, &s, &extra, q, tol, lam, CONTINUATION_SOLVES);
                solves += k;
                if touched && band.cells.len() < grid.nx * grid.ny && width < 4096.0 {
                    width *= 2.0;
                    continue;
                }
                break (e, lam_e);
            };
            if (e.volume - q).abs() > tol {
                self.repair(&mut e, q);
            }
            let merit = |f: &DropletField| self.energy(f) - lam_e * (f.volume - q);
            let stall = e.occupancy == s.occupancy;
            let improved = !stall && merit(&e) < merit(&s) - 1e-13 * merit(&s).abs().max(1.0);
            if improved {
                s = e;
                lam = lam_e;
                stalled = 0.0;
                failed = f64::INFINITY;
                accepted_in_row += 1;
                if accepted_in_row >= 2 && m < m_max {
                    m = (2.0 * m).min(m_max);
                    accepted_in_row = 0;
                }
            } else if stall {
                accepted_in_row = 0;
                stalled = stalled.max(m);
                let next = (2.0 * m).min(m_max);
                if next <= m || next >= failed {
                    break;
                }
                m = next;
            } else {
                accepted_in_row = 0;
                failed = failed.min(m);
                let next = 0.5 * m;
                if next < m_min || next <= stalled {
                    break;
                }
                m = next;
            }
        }
        let energy = self.energy(&s);
        Run { merit: energy - lam * (s.volume - q), field: s, lambda: lam, steps, solves }
    }

    /// Circular cap of area `q` over the flat base meeting it at `theta`, centred `shift`
    /// to the right of the wall's midpoint, with its Laplace pressure. A disk base gets a
    /// ball on its boundary.
    pub fn cap_seed(&self, dom: &RoughDomain, q: f64, theta: f64, shift: f64) -> (DropletField, f64) {
        let (centre, r) = match dom.base {
            Base::Channel { width, .. } => {
                let r = (q / (theta - theta.sin() * theta.cos())).sqrt();
                ([0.5 * width + shift, -r * theta.cos()], r)
            }
            Base::Disk { radius } => {
                let r = (q / std::f64::consts::PI).sqrt();
                ([radius, 0.0], r)
            }
        };
        let f = DropletField::from_predicate(self.grid, |p| (p[0] - centre[0]).hypot(p[1] - centre[1]) <= r);
        (f, 1.0 / r)
    }
}

struct Band {
    cells: Vec<usize>,
    edges: Vec<(u32, u32, f64)>,
    src: Vec<f64>,
    snk: Vec<f64>,
    rim: Vec<bool>,
}

struct Run {
    field: DropletField,
    merit: f64,
    lambda: f64,
    steps: usize,
    solves: usize,
}

/// Contact angles scanned for seed caps, in degrees.
pub const SEED_ANGLE_STEP_DEG: f64 = 5.0;
/// Seed caps kept for continuation.
pub const SEED_KEEP: usize = 2;

/// Squared Euclidean distance, in cells, from every cell centre to the nearest target cell.
pub fn edt_squared(nx: usize, ny: usize, target: &[bool]) -> Vec<f64> {
    const INF: f64 = 1e20;
    let mut g: Vec<f64> = target.iter().map(|&t| if t { 0.0 } else { INF }).collect();
    let n = nx.max(ny);
    let mut f = vec![0.0; n];
    let mut out = vec![0.0; n];
    let mut v = vec![0usize; n];
    let mut z = vec![0.0; n + 1];
    for i in 0..nx {
        for j in 0..ny {
            f[j] = g[j * nx + i];
        }
        dt1d(&f[..ny], &mut out[..ny], &mut v, &mut z);
        for j in 0..ny {
            g[j * nx + i] = out[j];
        }
    }
    for j in 0..ny {
        f[..nx].copy_from_slice(&g[j * nx..(j + 1) * nx]);
        dt1d(&f[..nx], &mut out[..nx], &mut v, &mut z);
        g[j * nx..(j + 1) * nx].copy_from_slice(&out[..nx]);
    }
    g
}

fn dt1d(f: &[f64], d: &mut [f64], v: &mut [usize], z: &mut [f64]) {
    let n = f.len();
    if n == 0 {
        return;
    }
    let mut k = 0;
    v[0] = 0;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    for q in 1..n {
        loop {
            let p = v[k];
            let s = ((f[q] + (q * q) as f64) - (f[p] + (p * p) as f64)) / (2.0 * (q as f64 - p as f64));
            if s <= z[k] && k > 0 {
                k -= 1;
                continue;
            }
            if s <= z[k] {
                // k == 0 and the new parabola dominates everywhere
                v[0] = q;
                z[0] = f64::NEG_INFINITY;
                z[1] = f64::INFINITY;
                break;
            }
            k += 1;
            v[k] = q;
            z[k] = s;
            z[k + 1] = f64::INFINITY;
            break;
        }
    }
    k = 0;
    for (q, dq) in d.iter_mut().enumerate() {
        while z[k + 1] < q as f64 {
            k += 1;
        }
        let p = v[k];
        let dx = q as f64 - p as f64;
        *dq = dx * dx + f[p];
    }
}

/// Minimizes `F` over sets of volume `q`.
///
/// A bisection on `λ` of the global cut problem runs first. When the volume
/// jumps over `q`, proximal steps at fixed volume continue from seed sets.
pub fn minimize_with_volume(
    grid: &Grid,
    weights: &[f64],
    q: f64,
    opts: VolumeOptions,
) -> Result<(DropletField, EnergyReport), SolverError> {
    minimize_from(grid, weights, q, opts, None, &[])
}

/// As [`minimize_with_volume`], seeding the continuation with caps on the domain's rough
/// wall and with `seeds`; keeps the lowest volume-corrected energy.
pub fn minimize_from(
    grid: &Grid,
    weights: &[f64],
    q: f64,
    opts: VolumeOptions,
    dom: Option<&RoughDomain>,
    seeds: &[DropletField],
) -> Result<(DropletField, EnergyReport), SolverError> {
    let available = grid.inside_area();
    if !(q > 0.0 && q <= available * (1.0 + 1e-12)) {
        return Err(SolverError::Constraint { q, available });
    }
    let prob = CutProblem::new(grid, weights);
    let tol = opts.slack * q;
    let lam_hi = 4.0 / (q / std::f64::consts::PI).sqrt();
    let probe = prob.bisect(q, tol, None, 0.0, lam_hi, opts.global_probe.max(2).min(opts.max_iterations));
    let bracket = probe.bracket();
    let (best_field, best_rep) = probe.best.clone();
    if (best_field.volume - q).abs() <= tol {
        let mut rep = best_rep;
        rep.iterations = probe.solves;
        rep.target_volume = q;
        rep.bracket = bracket;
        rep.exact_lagrangian = true;
        return Ok((best_field, rep));
    }
    let finish = |field: &DropletField, lam: f64, solves: usize, steps: usize| {
        let mut rep = prob.report(field, lam);
        rep.iterations = solves;
        rep.target_volume = q;
        rep.bracket = bracket;
        rep.continuation_steps = steps;
        rep
    };
    if !opts.continuation {
        let mut field = best_field;
        let mut rep = finish(&field, best_rep.lambda, probe.solves, 0);
        rep.exact_lagrangian = true;
        if opts.repair {
            let (flips, delta) = prob.repair(&mut field, q);
            rep = finish(&field, best_rep.lambda, probe.solves, 0);
            rep.repaired_cells = flips;
            rep.repair_delta = delta;
        }
        return Ok((field, rep));
    }
    let mut starts: Vec<DropletField> = seeds.to_vec();
    if best_field.volume >= 0.5 * q && best_field.volume <= 2.0 * q {
        starts.push(best_field);
    }
    match dom {
        Some(d) if matches!(d.base, Base::Channel { .. }) => {
            let mut caps: Vec<(f64, DropletField)> = Vec::new();
            // over a peak and over a valley of the roughness
            let shifts: &[f64] = if d.profile.is_flat() { &[0.0] } else { &[0.0, 0.5 * d.epsilon] };
            for &shift in shifts {
                let mut a = SEED_ANGLE_STEP_DEG;
                while a < 180.0 - 1e-9 {
                    let (mut f, lam) = prob.cap_seed(d, q, a.to_radians(), shift);
                    if f.volume > 0.0 {
                        prob.repair(&mut f, q);
                        caps.push((prob.energy(&f) - lam * (f.volume - q), f));
                    }
                    a += SEED_ANGLE_STEP_DEG;
                }
            }
            caps.sort_by(|x, y| x.0.total_cmp(&y.0));
            starts.extend(caps.into_iter().take(SEED_KEEP).map(|c| c.1));
        }
        Some(d) => starts.push(prob.cap_seed(d, q, 0.0, 0.0).0),
        None => {
            let centre = grid_wall_midpoint(grid);
            let ball = |r: f64| DropletField::from_predicate(grid, |p| (p[0] - centre[0]).hypot(p[1] - centre[1]) <= r);
            let (mut lo, mut hi) = (0.0, 4.0 * (2.0 * q / std::f64::consts::PI).sqrt());
            for _ in 0..50 {
                let mid = 0.5 * (lo + hi);
                if ball(mid).volume < q {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            starts.push(ball(hi));
        }
    }
    // the curvature of a half disk of area q is a neutral first guess
    let lam0 = 1.0 / (2.0 * q / std::f64::consts::PI).sqrt();
    let mut result: Option<Run> = None;
    let mut steps = 0;
    let mut solves = probe.solves;
    for seed in &starts {
        let r = prob.continuation(seed, q, tol, lam0, &opts);
        steps += r.steps;
        solves += r.solves;
        if result.as_ref().is_none_or(|b| r.merit < b.merit) {
            result = Some(r);
        }
    }
    let run = result.expect("at least one seed");
    let rep = finish(&run.field, run.lambda, solves, steps);
    Ok((run.field, rep))
}

/// Midpoint of the wall cells' bounding box bottom, used when no domain is given.
fn grid_wall_midpoint(grid: &Grid) -> [f64; 2] {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for &(c, _, _) in &grid.wall_pieces {
        let p = grid.center(c);
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    [0.5 * (lo[0] + hi[0]), lo[1].max(0.0)]
}

#[derive(Debug, Clone, PartialEq)]
pub struct AngleMeasurement {
    /// Interior angle of the liquid at the base wall, radians.
    pub angle: f64,
    pub center: [f64; 2],
    pub radius: f64,
    /// RMS distance of the fitted points from the circle.
    pub residual: f64,
    pub n_points: usize,
}

/// Interface points: midpoints of marching-squares segments of the occupancy
/// sampled at cell centres. Squares touching exterior cells are skipped.
pub fn interface_points(grid: &Grid, field: &DropletField) -> Vec<[f64; 2]> {
    let mut pts = Vec::new();
    let h = grid.spacing;
    for j in 0..grid.ny.saturating_sub(1) {
        for i in 0..grid.nx.saturating_sub(1) {
            let c = [grid.index(i, j), grid.index(i + 1, j), grid.index(i + 1, j + 1), grid.index(i, j + 1)];
            if c.iter().any(|&k| !grid.is_node(k)) {
                continue;
            }
            let v: Vec<u8> = c.iter().map(|&k| field.occupancy[k]).collect();
            let o = grid.center(c[0]);
            // edge midpoints in local coordinates: bottom, right, top, left
            let mids = [[0.5, 0.0], [1.0, 0.5], [0.5, 1.0], [0.0, 0.5]];
            let crossing: Vec<usize> = (0..4).filter(|&e| v[e] != v[(e + 1) % 4]).collect();
            let to_world = |p: [f64; 2]| [o[0] + p[0] * h, o[1] + p[1] * h];
            match crossing.len() {
                2 => {
                    let (a, b) = (mids[crossing[0]], mids[crossing[1]]);
                    pts.push(to_world([0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]));
                }
                4 => {
                    // saddle: pair each edge with its neighbour around the occupied corners
                    for (a, b) in [(0, 1), (2, 3)] {
                        let (p, q) = (mids[a], mids[b]);
                        pts.push(to_world([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]));
                    }
                }
                _ => {}
            }
        }
    }
    pts
}

fn solve3(m: [[f64; 3]; 3], r: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    if d.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut mk = m;
        for row in 0..3 {
            mk[row][k] = r[row];
        }
        out[k] = det(mk) / d;
    }
    Some(out)
}

/// Algebraic least-squares circle refined by Gauss–Newton on geometric distance.
pub fn fit_circle(pts: &[[f64; 2]]) -> Option<([f64; 2], f64, f64)> {
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mean = pts.iter().fold([0.0, 0.0], |a, p| [a[0] + p[0] / n, a[1] + p[1] / n]);
    let mut m = [[0.0; 3]; 3];
    let mut r = [0.0; 3];
    for p in pts {
        let (x, y) = (p[0] - mean[0], p[1] - mean[1]);
        let z = x * x + y * y;
        let row = [x, y, 1.0];
        for a in 0..3 {
            for b in 0..3 {
                m[a][b] += row[a] * row[b];
            }
            r[a] -= row[a] * z;
        }
    }
    let s = solve3(m, r)?;
    let mut c = [-s[0] / 2.0, -s[1] / 2.0];
    let rad2 = c[0] * c[0] + c[1] * c[1] - s[2];
    if !(rad2 > 0.0) {
        return None;
    }
    let mut rad = rad2.sqrt();
    for _ in 0..50 {
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for p in pts {
            let (dx, dy) = (p[0] - mean[0] - c[0], p[1] - mean[1] - c[1]);
            let d = dx.hypot(dy);
            if d == 0.0 {
                continue;
            }
            let res = d - rad;
            let jrow = [-dx / d, -dy / d, -1.0];
            for a in 0..3 {
                for b in 0..3 {
                    jtj[a][b] += jrow[a] * jrow[b];
                }
                jtr[a] -= jrow[a] * res;
            }
        }
        let Some(step) = solve3(jtj, jtr) else { break };
        c[0] += step[0];
        c[1] += step[1];
        rad += step[2];
        if step.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-14 * rad.max(1.0) {
            break;
        }
    }
    let res = (pts
        .iter()
        .map(|p| {
            let d = (p[0] - mean[0] - c[0]).hypot(p[1] - mean[1] - c[1]) - rad;
            d * d
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Some(([c[0] + mean[0], c[1] + mean[1]], rad.abs(), res))
}

/// Whether the droplet wets a wall other than the rough one.
pub fn touches_other_walls(grid: &Grid, field: &DropletField, dom: &RoughDomain) -> bool {
    grid.wall_pieces.iter().any(|&(c, s, _)| dom.wall_kind[s] == WallKind::Other && field.is_occupied(c))
}

/// Apparent contact angle of a channel droplet: a circle fitted to the interface away from
/// the wall, cut with the midline `y = εY/2` of the rough wall.
pub fn measure_apparent_angle(grid: &Grid, field: &DropletField, dom: &RoughDomain) -> Result<AngleMeasurement, SolverError> {
    let Base::Channel { width, height } = dom.base else {
        return Err(SolverError::Measurement("angle measurement needs a channel base".into()));
    };
    if field.count() == 0 {
        return Err(SolverError::Measurement("no interface: empty droplet".into()));
    }
    // a droplet resting on peaks over dry grooves touches the wall only through neighbours
    let touches = grid.wall_pieces.iter().any(|&(c, s, _)| {
        dom.wall_kind[s] == WallKind::Rough
            && (field.is_occupied(c)
                || [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (-1, 1), (1, -1), (-1, -1)]
                    .iter()
                    .any(|&o| grid.neighbor(c, o).is_some_and(|d| field.is_occupied(d))))
    });
    if !touches {
        return Err(SolverError::Measurement("no wall contact".into()));
    }
    let eps = if dom.profile.is_flat() { 0.0 } else { dom.epsilon };
    let cut = 2.0 * eps + 2.0 * grid.spacing;
    let side = 2.0 * grid.spacing;
    let pts: Vec<[f64; 2]> = interface_points(grid, field)
        .into_iter()
        .filter(|p| p[1] > cut && p[0] > side && p[0] < width - side && p[1] < height - side)
        .collect();
    if pts.len() < 3 {
        return Err(SolverError::Measurement("no interface away from the wall".into()));
    }
    let (center, radius, residual) =
        fit_circle(&pts).ok_or_else(|| SolverError::Measurement("circle fit failed".into()))?;
    // midline of the rough wall
    let base = 0.5 * eps * dom.profile.max_height();
    // a circle clear of the midline but in contact through the peaks is tangent: 180°
    let ratio = ((center[1] - base) / radius).clamp(-1.0, 1.0);
    Ok(AngleMeasurement { angle: (-ratio).acos(), center, radius, residual, n_points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_rough_boundary, rasterize, trace_weights};
    use crate::profile::Profile;
    use std::f64::consts::PI;

    fn flat_channel(res: usize, gamma: f64) -> (RoughDomain, Grid) {
        let d = build_rough_boundary(Base::Channel { width: 1.0, height: 0.6 }, &Profile::flat(), 1.0, 64).unwrap();
        let mut g = rasterize(&d, res).unwrap();
        trace_weights(&d, &mut g, gamma, 0.999);
        (d, g)
    }

    #[test]
    fn empty_field_zero_energy() {
        let (_, g) = flat_channel(32, 0.3);
        let f = DropletField::empty(&g);
        let r = discrete_energy(&g, &f, &g.trace_weight);
        assert_eq!((r.perimeter_term, r.trace_term, r.total), (0.0, 0.0, 0.0));
    }

    #[test]
    fn full_channel_is_all_trace() {
        let (_, g) = flat_channel(40, 0.3);
        let f = DropletField::from_predicate(&g, |_| true);
        let r = discrete_energy(&g, &f, &g.trace_weight);
        assert_eq!(r.perimeter_term, 0.0);
        assert!((r.trace_term - g.trace_weight.iter().sum::<f64>()).abs() < 1e-12);
        assert!((f.volume - 0.6).abs() < 1e-12);
    }

    #[test]
    fn half_disk_energy_is_arc() {
        let (_, g) = flat_channel(256, 0.0);
        let radius = 0.2;
        let f = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1]) <= radius);
        let r = discrete_energy(&g, &f, &g.trace_weight);
        assert!((r.total - PI * radius).abs() < 0.02 * PI * radius, "{}", r.total);
    }

    #[test]
    fn extreme_lambdas() {
        let (_, g) = flat_channel(32, 0.3);
        let f = min_cut_solve(&g, &g.trace_weight, -100.0);
        assert_eq!(f.count(), 0);
        let f = min_cut_solve(&g, &g.trace_weight, 1e6);
        assert_eq!(f.count(), (0..g.nx * g.ny).filter(|&c| g.is_node(c)).count());
    }

    #[test]
    fn cut_value_bookkeeping() {
        let (_, g) = flat_channel(64, 0.4);
        let prob = CutProblem::new(&g, &g.trace_weight);
        for lam in [5.0, 12.0, 30.0] {
            let (f, rep) = prob.solve(lam);
            let cap = cut_capacity(&g, prob.edges(), &f, &g.trace_weight, lam);
            assert!((cap - rep.cut_value).abs() < 1e-9 * cap.max(1.0), "{cap} {}", rep.cut_value);
            let offset: f64 = (0..g.nx * g.ny)
                .filter(|&c| g.is_node(c))
                .map(|c| (g.trace_weight[c] - lam * g.cell_area() * g.inside_fraction[c]).min(0.0))
                .sum();
            let ident = rep.total - lam * rep.achieved_volume - offset;
            assert!((ident - rep.cut_value).abs() < 1e-9 * cap.max(1.0));
            assert!((rep.total - rep.perimeter_term - rep.trace_term).abs() < 1e-9);
        }
    }

    #[test]
    fn lagrangian_skips_small_caps() {
        // P - λ vol is concave in the cap radius: the half disk with R = 1/λ is a maximum
        let (_, g) = flat_channel(128, 0.0);
        for lam in [1.0 / 0.15, 1.0 / 0.3, 12.0] {
            let f = min_cut_solve(&g, &g.trace_weight, lam);
            assert!(f.volume == 0.0 || f.volume > 0.5 * g.inside_area(), "{lam} {}", f.volume);
        }
    }

    #[test]
    fn half_disk_volume_target() {
        let (d, g) = flat_channel(256, 0.0);
        let radius: f64 = 0.15;
        let q = PI * radius * radius / 2.0;
        let (f, rep) = minimize_with_volume(&g, &g.trace_weight, q, VolumeOptions::default()).unwrap();
        assert!((rep.achieved_volume - q).abs() <= 0.005 * q + g.cell_area());
        let m = measure_apparent_angle(&g, &f, &d).unwrap();
        assert!((m.angle - PI / 2.0).abs() < 4f64.to_radians(), "{}", m.angle.to_degrees());
    }

    #[test]
    fn constraint_error() {
        let (_, g) = flat_channel(32, 0.0);
        assert!(matches!(minimize_with_volume(&g, &g.trace_weight, 0.0, VolumeOptions::default()), Err(SolverError::Constraint { .. })));
        assert!(matches!(minimize_with_volume(&g, &g.trace_weight, 5.0, VolumeOptions::default()), Err(SolverError::Constraint { .. })));
    }

    #[test]
    fn full_volume_is_full_set() {
        let (_, g) = flat_channel(32, 0.3);
        let q = g.inside_area();
        let (f, _) = minimize_with_volume(&g, &g.trace_weight, q, VolumeOptions::default()).unwrap();
        assert!((f.volume - q).abs() <= 0.005 * q);
    }

    #[test]
    fn analytic_masks() {
        let (d, g) = flat_channel(256, 0.0);
        let f = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1]) <= 0.2);
        let m = measure_apparent_angle(&g, &f, &d).unwrap();
        assert!((m.angle - PI / 2.0).abs() < 0.02, "{}", m.angle);
        // 120° cap: centre above the wall at R cos 60°
        let r = 0.2;
        let cy = r * 0.5;
        let f = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1] - cy) <= r);
        let m = measure_apparent_angle(&g, &f, &d).unwrap();
        assert!((m.angle - 2.0 * PI / 3.0).abs() < 0.02, "{}", m.angle);
        assert!(m.residual < g.spacing);
    }

    #[test]
    fn detached_disk_has_no_contact() {
        let (d, g) = flat_channel(128, 0.0);
        let f = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1] - 0.3) <= 0.1);
        match measure_apparent_angle(&g, &f, &d) {
            Err(SolverError::Measurement(m)) => assert!(m.contains("no wall contact")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn circle_fit_exact_points() {
        let pts: Vec<[f64; 2]> = (0..40).map(|k| {
            let t = 0.1 + 2.0 * k as f64 / 40.0;
            [1.0 + 0.3 * t.cos(), -0.2 + 0.3 * t.sin()]
        }).collect();
        let (c, r, res) = fit_circle(&pts).unwrap();
        assert!((c[0] - 1.0).abs() < 1e-10 && (c[1] + 0.2).abs() < 1e-10 && (r - 0.3).abs() < 1e-10);
        assert!(res < 1e-10);
    }

    #[test]
    fn repair_moves_toward_target() {
        let (_, g) = flat_channel(64, 0.2);
        let prob = CutProblem::new(&g, &g.trace_weight);
        let mut f = DropletField::from_predicate(&g, |p| (p[0] - 0.5).hypot(p[1]) <= 0.15);
        let q = f.volume * 1.1;
        let (flips, _) = prob.repair(&mut f, q);
        assert!(flips > 0);
        assert!((f.volume - q).abs() <= g.cell_area());
    }
}
