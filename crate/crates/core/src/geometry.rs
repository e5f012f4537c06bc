//! Rough domains and their rasterization.
//!
//! The rough boundary is `k(s) - ε ζ(s/ε) n(s)` with `n` the outward normal
//! of the base curve. For a channel the roughness sits on the bottom wall,
//! which becomes `y = ε ζ(x/ε)`; the other walls are straight.
//!
//! Grid cells are offset by half a cell so that straight walls on integer
//! multiples of the spacing run through cell centres.

use crate::error::GeometryError;
use crate::profile::Profile;
use rayon::prelude::*;
use std::f64::consts::PI;

pub const DEFAULT_SAMPLES_PER_PERIOD: usize = 64;
const SUBSAMPLES: usize = 4;
/// Minimum number of cells per roughness period.
pub const MIN_CELLS_PER_PERIOD: usize = 8;
/// Interaction coefficient of the side and top walls: close to drying, so droplets stay on the rough wall.
pub const GAMMA_OTHER_WALLS: f64 = 0.999;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Base {
    /// `[0, width] x [0, height]`, rough bottom wall.
    Channel { width: f64, height: f64 },
    /// Disk of the given radius centred at the origin, rough all around.
    Disk { radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WallKind {
    Rough,
    Other,
}

/// Checks `epsilon = 1/j` and returns `j`.
pub fn epsilon_index(epsilon: f64) -> Result<usize, GeometryError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(GeometryError::Epsilon(epsilon));
    }
    let j = (1.0 / epsilon).round();
    if ((1.0 / epsilon) - j).abs() > 1e-9 * j.max(1.0) {
        return Err(GeometryError::Epsilon(epsilon));
    }
    Ok(j as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoughDomain {
    pub base: Base,
    pub profile: Profile,
    pub epsilon: f64,
    /// Closed counter-clockwise polygon; segment `i` joins vertex `i` to `i + 1`.
    pub vertices: Vec<[f64; 2]>,
    pub wall_kind: Vec<WallKind>,
}

impl RoughDomain {
    pub fn segment(&self, i: usize) -> ([f64; 2], [f64; 2]) {
        (self.vertices[i], self.vertices[(i + 1) % self.vertices.len()])
    }

    pub fn n_segments(&self) -> usize {
        self.vertices.len()
    }

    pub fn segment_length(&self, i: usize) -> f64 {
        let (a, b) = self.segment(i);
        (b[0] - a[0]).hypot(b[1] - a[1])
    }

    pub fn wall_length(&self, kind: WallKind) -> f64 {
        (0..self.n_segments())
            .filter(|&i| self.wall_kind[i] == kind)
            .map(|i| self.segment_length(i))
            .sum()
    }

    pub fn total_length(&self) -> f64 {
        (0..self.n_segments()).map(|i| self.segment_length(i)).sum()
    }

    /// Length of the smooth base wall that carries roughness.
    pub fn base_rough_length(&self) -> f64 {
        match self.base {
            Base::Channel { width, .. } => width,
            Base::Disk { radius } => 2.0 * PI * radius,
        }
    }

    /// Shoelace area.
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        0.5 * (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a[0] * b[1] - b[0] * a[1]
            })
            .sum::<f64>()
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for c in 0..2 {
                lo[c] = lo[c].min(v[c]);
                hi[c] = hi[c].max(v[c]);
            }
        }
        (lo, hi)
    }

    /// Distance from a point to the base curve.
    pub fn distance_to_base(&self, p: [f64; 2]) -> f64 {
        match self.base {
            Base::Channel { width, height } => {
                let dx = if p[0] < 0.0 { -p[0] } else if p[0] > width { p[0] - width } else { 0.0 };
                let dy = if p[1] < 0.0 { -p[1] } else if p[1] > height { p[1] - height } else { 0.0 };
                if dx > 0.0 || dy > 0.0 {
                    dx.hypot(dy)
                } else {
                    p[0].min(width - p[0]).min(p[1]).min(height - p[1])
                }
            }
            Base::Disk { radius } => (p[0].hypot(p[1]) - radius).abs(),
        }
    }

    /// One-sided Hausdorff distance from the rough polyline vertices to the base curve.
    pub fn hausdorff_to_base(&self) -> f64 {
        self.vertices.iter().map(|&v| self.distance_to_base(v)).fold(0.0, f64::max)
    }
}

/// Builds `Γ_ε` with `samples_per_period` polyline points per roughness period.
pub fn build_rough_boundary(
    base: Base,
    profile: &Profile,
    epsilon: f64,
    samples_per_period: usize,
) -> Result<RoughDomain, GeometryError> {
    epsilon_index(epsilon)?;
    if samples_per_period < 4 {
        return Err(GeometryError::Invalid("need at least 4 samples per period".into()));
    }
    let mut vertices = Vec::new();
    let mut wall_kind = Vec::new();
    match base {
        Base::Channel { width, height } => {
            if !(width > 0.0 && height > 0.0) {
                return Err(GeometryError::Invalid("channel sides must be positive".into()));
            }
            if height <= epsilon * profile.max_height() {
                return Err(GeometryError::Invalid("channel lower than roughness".into()));
            }
            if profile.is_flat() {
                vertices.push([0.0, 0.0]);
                wall_kind.push(WallKind::Rough);
                vertices.push([width, 0.0]);
            } else {
                let periods = width / epsilon;
                if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) || periods.round() < 1.0 {
                    return Err(GeometryError::Invalid(format!(
                        "channel width {width} is not an integer multiple of epsilon {epsilon}"
                    )));
                }
                let n = periods.round() as usize * samples_per_period;
                for k in 0..=n {
                    let x = width * k as f64 / n as f64;
                    vertices.push([x, epsilon * profile.eval(x / epsilon)]);
                    if k < n {
                        wall_kind.push(WallKind::Rough);
                    }
                }
            }
            // right, top, left
            wall_kind.push(WallKind::Other);
            vertices.push([width, height]);
            wall_kind.push(WallKind::Other);
            vertices.push([0.0, height]);
            wall_kind.push(WallKind::Other);
        }
        Base::Disk { radius } => {
            if !(radius > 0.0) {
                return Err(GeometryError::Invalid("disk radius must be positive".into()));
            }
            let perimeter = 2.0 * PI * radius;
            let n = if profile.is_flat() {
                (samples_per_period * 16).max(256)
            } else {
                let periods = perimeter / epsilon;
                if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) || periods.round() < 1.0 {
                    return Err(GeometryError::Invalid(format!(
                        "disk perimeter {perimeter} is not an integer multiple of epsilon {epsilon}"
                    )));
                }
                periods.round() as usize * samples_per_period
            };
            for k in 0..n {
                let s = perimeter * k as f64 / n as f64;
                let theta = s / radius;
                let rho = radius - epsilon * profile.eval(s / epsilon);
                vertices.push([rho * theta.cos(), rho * theta.sin()]);
                wall_kind.push(WallKind::Rough);
            }
        }
    }
    let dom = RoughDomain { base, profile: profile.clone(), epsilon, vertices, wall_kind };
    if let Some((a, b)) = find_self_intersection(&dom.vertices) {
        return Err(GeometryError::SelfIntersection(a, b));
    }
    Ok(dom)
}

fn segments_cross(p1: [f64; 2], p2: [f64; 2], q1: [f64; 2], q2: [f64; 2]) -> bool {
    let orient = |a: [f64; 2], b: [f64; 2], c: [f64; 2]| (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    (d1 * d2 < 0.0) && (d3 * d4 < 0.0)
}

/// Sweep over segments sorted by their left end; returns the first crossing pair.
pub fn find_self_intersection(vertices: &[[f64; 2]]) -> Option<(usize, usize)> {
    let n = vertices.len();
    let seg = |i: usize| (vertices[i], vertices[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let xmin = |i: usize| seg(i).0[0].min(seg(i).1[0]);
    let xmax = |i: usize| seg(i).0[0].max(seg(i).1[0]);
    order.sort_by(|&a, &b| xmin(a).partial_cmp(&xmin(b)).unwrap().then(a.cmp(&b)));
    for (k, &i) in order.iter().enumerate() {
        let right = xmax(i);
        for &j in &order[k + 1..] {
            if xmin(j) > right {
                break;
            }
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (a, b) = seg(i);
            let (c, d) = seg(j);
            if segments_cross(a, b, c, d) {
                return Some((i.min(j), i.max(j)));
            }
        }
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellClass {
    Interior,
    Boundary,
    Exterior,
}

/// Neighbourhood offsets with Cauchy–Crofton weights.
///
/// The discrete perimeter of a cell set is `Σ_cells Σ_offsets weight·|φ(c) - φ(c+o)|`;
/// every unordered pair appears twice, so each weight is half the pair weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    pub offsets: Vec<(i32, i32)>,
    pub weights: Vec<f64>,
}

impl Stencil {
    /// Weights `Δφ_k δ / (2|e_k|)` for edge directions `e_k` sorted by angle, where
    /// `Δφ_k` is the angular sector each direction represents.
    pub fn cauchy_crofton(spacing: f64, sixteen: bool) -> Self {
        let mut dirs: Vec<(i32, i32)> = if sixteen {
            vec![(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1)]
        } else {
            vec![(1, 0), (1, 1), (0, 1), (-1, 1)]
        };
        let angle = |d: &(i32, i32)| (d.1 as f64).atan2(d.0 as f64);
        dirs.sort_by(|a, b| angle(a).partial_cmp(&angle(b)).unwrap());
        let n = dirs.len();
        let mut offsets = Vec::with_capacity(2 * n);
        let mut weights = Vec::with_capacity(2 * n);
        for k in 0..n {
            let prev = if k == 0 { angle(&dirs[n - 1]) - PI } else { angle(&dirs[k - 1]) };
            let next = if k == n - 1 { angle(&dirs[0]) + PI } else { angle(&dirs[k + 1]) };
            let dphi = 0.5 * (next - prev);
            let len = (dirs[k].0 as f64).hypot(dirs[k].1 as f64);
            let pair = spacing * dphi / (2.0 * len);
            offsets.push(dirs[k]);
            weights.push(0.5 * pair);
            offsets.push((-dirs[k].0, -dirs[k].1));
            weights.push(0.5 * pair);
        }
        Self { offsets, weights }
    }

    /// Offsets with positive angle in `[0, π)` together with full pair weights.
    pub fn forward(&self) -> impl Iterator<Item = ((i32, i32), f64)> + '_ {
        self.offsets
            .iter()
            .zip(&self.weights)
            .filter(|(o, _)| o.1 > 0 || (o.1 == 0 && o.0 > 0))
            .map(|(&o, &w)| (o, 2.0 * w))
    }

    /// Cells an edge passes between; the edge is kept only if one of them lies in the domain.
    pub(crate) fn straddle(o: (i32, i32)) -> Option<[(i32, i32); 2]> {
        let (a, b) = o;
        if a == 0 || b == 0 {
            return None;
        }
        let (sa, sb) = (a.signum(), b.signum());
        Some(match (a.abs(), b.abs()) {
            (1, 1) => [(sa, 0), (0, sb)],
            (2, 1) => [(sa, 0), (sa, sb)],
            (1, 2) => [(0, sb), (sa, sb)],
            _ => [(sa, 0), (0, sb)],
        })
    }
}

/// Rasterized domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    /// Lower-left corner of cell `(0, 0)`.
    pub origin: [f64; 2],
    pub inside_fraction: Vec<f64>,
    pub cell_class: Vec<CellClass>,
    /// Per-cell `γ × wall length`; set by [`trace_weights`].
    pub trace_weight: Vec<f64>,
    pub stencil: Stencil,
    /// `(cell, segment, length)` pieces of the polyline clipped to cells.
    pub wall_pieces: Vec<(usize, usize, f64)>,
}

impl Grid {
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn cell_area(&self) -> f64 {
        self.spacing * self.spacing
    }

    pub fn center(&self, c: usize) -> [f64; 2] {
        let (i, j) = (c % self.nx, c / self.nx);
        [
            self.origin[0] + (i as f64 + 0.5) * self.spacing,
            self.origin[1] + (j as f64 + 0.5) * self.spacing,
        ]
    }

    pub fn cell_of(&self, p: [f64; 2]) -> Option<usize> {
        let fi = ((p[0] - self.origin[0]) / self.spacing).floor();
        let fj = ((p[1] - self.origin[1]) / self.spacing).floor();
        if fi < 0.0 || fj < 0.0 || fi >= self.nx as f64 || fj >= self.ny as f64 {
            return None;
        }
        Some(self.index(fi as usize, fj as usize))
    }

    pub fn is_node(&self, c: usize) -> bool {
        self.cell_class[c] != CellClass::Exterior
    }

    pub fn neighbor(&self, c: usize, o: (i32, i32)) -> Option<usize> {
        let i = (c % self.nx) as i64 + o.0 as i64;
        let j = (c / self.nx) as i64 + o.1 as i64;
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            None
        } else {
            Some(self.index(i as usize, j as usize))
        }
    }

    /// Whether the stencil edge from `c` along `o` is part of the discrete perimeter.
    pub fn edge_active(&self, c: usize, o: (i32, i32)) -> Option<usize> {
        let d = self.neighbor(c, o)?;
        if !self.is_node(c) || !self.is_node(d) {
            return None;
        }
        if let Some(st) = Stencil::straddle(o) {
            let ok = st.iter().any(|&s| self.neighbor(c, s).map(|n| self.is_node(n)).unwrap_or(false));
            if !ok {
                return None;
            }
        }
        Some(d)
    }

    /// Usable area `Σ inside_fraction × cell area`.
    pub fn inside_area(&self) -> f64 {
        self.inside_fraction.iter().sum::<f64>() * self.cell_area()
    }

    /// Unordered active stencil pairs `(c, d, weight)`.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let forward: Vec<_> = self.stencil.forward().collect();
        let mut out = Vec::new();
        for c in 0..self.nx * self.ny {
            if !self.is_node(c) {
                continue;
            }
            for &(o, w) in &forward {
                if let Some(d) = self.edge_active(c, o) {
                    out.push((c, d, w));
                }
            }
        }
        out
    }
}

/// Rasterizes the domain at `cells_per_unit` cells per unit length.
pub fn rasterize(dom: &RoughDomain, cells_per_unit: usize) -> Result<Grid, GeometryError> {
    rasterize_with(dom, cells_per_unit, true)
}

pub fn rasterize_with(dom: &RoughDomain, cells_per_unit: usize, sixteen: bool) -> Result<Grid, GeometryError> {
    if !dom.profile.is_flat() {
        let required = (MIN_CELLS_PER_PERIOD as f64 / dom.epsilon).ceil() as usize;
        if cells_per_unit < required {
            return Err(GeometryError::Resolution { got: cells_per_unit, required, epsilon: dom.epsilon });
        }
    }
    if cells_per_unit == 0 {
        return Err(GeometryError::Invalid("zero resolution".into()));
    }
    let h = 1.0 / cells_per_unit as f64;
    let (lo, hi) = dom.bounding_box();
    // Cells centred on multiples of h, one spare cell around the box.
    let i_lo = (lo[0] / h).round() as i64 - 1;
    let j_lo = (lo[1] / h).round() as i64 - 1;
    let i_hi = (hi[0] / h).round() as i64 + 1;
    let j_hi = (hi[1] / h).round() as i64 + 1;
    let nx = (i_hi - i_lo + 1) as usize;
    let ny = (j_hi - j_lo + 1) as usize;
    let origin = [(i_lo as f64 - 0.5) * h, (j_lo as f64 - 0.5) * h];

    let n_seg = dom.n_segments();
    let segs: Vec<([f64; 2], [f64; 2])> = (0..n_seg).map(|i| dom.segment(i)).collect();

    // Inside fractions by scanline parity on a 4x4 subsample lattice.
    let inside_fraction: Vec<f64> = (0..ny)
        .into_par_iter()
        .flat_map_iter(|j| {
            let mut counts = vec![0u32; nx];
            let mut xs = Vec::new();
            for sj in 0..SUBSAMPLES {
                let y = origin[1] + (j as f64 + (sj as f64 + 0.5) / SUBSAMPLES as f64) * h;
                xs.clear();
                for &(a, b) in &segs {
                    if (a[1] <= y && y < b[1]) || (b[1] <= y && y < a[1]) {
                        xs.push(a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]));
                    }
                }
                xs.sort_by(|p, q| p.partial_cmp(q).unwrap());
                let mut k = 0;
                for i in 0..nx {
                    for si in 0..SUBSAMPLES {
                        let x = origin[0] + (i as f64 + (si as f64 + 0.5) / SUBSAMPLES as f64) * h;
                        while k < xs.len() && xs[k] < x {
                            k += 1;
                        }
                        if k % 2 == 1 {
                            counts[i] += 1;
                        }
                    }
                }
            }
            counts.into_iter().map(|c| c as f64 / (SUBSAMPLES * SUBSAMPLES) as f64)
        })
        .collect();

    let mut grid = Grid {
        nx,
        ny,
        spacing: h,
        origin,
        cell_class: vec![CellClass::Exterior; nx * ny],
        trace_weight: vec![0.0; nx * ny],
        inside_fraction,
        stencil: Stencil::cauchy_crofton(h, sixteen),
        wall_pieces: Vec::new(),
    };
    grid.wall_pieces = clip_polyline(&grid, &segs);

    let mut on_wall = vec![false; nx * ny];
    for &(c, _, _) in &grid.wall_pieces {
        on_wall[c] = true;
    }
    for c in 0..nx * ny {
        let f = grid.inside_fraction[c];
        grid.cell_class[c] = if on_wall[c] || (f > 0.0 && f < 1.0) {
            CellClass::Boundary
        } else if f >= 1.0 {
            CellClass::Interior
        } else {
            CellClass::Exterior
        };
    }
    Ok(grid)
}

/// Splits each segment at grid lines and assigns the pieces to cells by midpoint.
fn clip_polyline(grid: &Grid, segs: &[([f64; 2], [f64; 2])]) -> Vec<(usize, usize, f64)> {
    let h = grid.spacing;
    let mut out = Vec::new();
    let mut ts = Vec::new();
    for (si, &(a, b)) in segs.iter().enumerate() {
        ts.clear();
        ts.push(0.0);
        ts.push(1.0);
        for c in 0..2 {
            let (p, q) = (a[c], b[c]);
            if (q - p).abs() < 1e-300 {
                continue;
            }
            let (lo, hi) = (p.min(q), p.max(q));
            let k0 = ((lo - grid.origin[c]) / h).ceil() as i64;
            let k1 = ((hi - grid.origin[c]) / h).floor() as i64;
            for k in k0..=k1 {
                let line = grid.origin[c] + k as f64 * h;
                let t = (line - p) / (q - p);
                if t > 0.0 && t < 1.0 {
                    ts.push(t);
                }
            }
        }
        ts.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        for w in ts.windows(2) {
            let dt = w[1] - w[0];
            if dt <= 0.0 {
                continue;
            }
            let tm = 0.5 * (w[0] + w[1]);
            let m = [a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1])];
            if let Some(cell) = grid.cell_of(m) {
                out.push((cell, si, dt * len));
            }
        }
    }
    out
}

/// Per-cell `γ(segment) × clipped length`; also stored in `grid.trace_weight`.
pub fn trace_weights(dom: &RoughDomain, grid: &mut Grid, gamma_rough: f64, gamma_other: f64) -> Vec<f64> {
    let mut w = vec![0.0; grid.nx * grid.ny];
    for &(c, s, len) in &grid.wall_pieces {
        let g = match dom.wall_kind[s] {
            WallKind::Rough => gamma_rough,
            WallKind::Other => gamma_other,
        };
        w[c] += g * len;
    }
    grid.trace_weight = w.clone();
    w
}

/// Sum of clipped wall lengths per wall kind.
pub fn clipped_length(dom: &RoughDomain, grid: &Grid, kind: WallKind) -> f64 {
    grid.wall_pieces.iter().filter(|p| dom.wall_kind[p.1] == kind).map(|p| p.2).sum()
}
