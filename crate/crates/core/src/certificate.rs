//! Sufficient conditions for the groove region
//!
//! ```text
//! D = {(x, y) : y0 ≤ y ≤ Y, |x| ≤ h(y)}
//! ```
//!
//! to be unreachable, i.e. `∫_D |∇φ| - ∫_Γ1 φ + γ ∫_Γ2 φ ≥ 0` for every
//! liquid set in `D`. `Γ1` is the flat lid at `y = y0`, `Γ2` the groove wall.
//!
//! Three checkers are provided: the explicit inequality, the `(σ, β)`
//! family, and a discrete calibration field `w` on a rectangular grid. All
//! are sufficient only; a negative outcome never asserts reachability.
//!
//! Quantities that blow up with `h' → -∞` are multiplied by `|ζ'(s)|`
//! (`s = h(y)`), which keeps every margin finite and leaves its sign intact.

use crate::error::CertificateError;
use crate::profile::Profile;
use crate::quad;

pub const EXPLICIT_GRID: usize = 4096;
pub const EXPLICIT_SLACK: f64 = 1e-12;
pub const SIGMA_BETA_SLACK: f64 = 1e-9;
pub const MIN_TABLE_LEN: usize = 256;
pub const MIN_FIELD_RES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    NotCertified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    ExplicitLemma,
    SigmaBeta,
    DiscreteField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateResult {
    pub verdict: Verdict,
    pub method: Method,
    pub y1: f64,
    /// Minimum over checked points of (right-hand side - left-hand side).
    /// `+∞` when `D` is empty.
    pub worst_margin: f64,
    /// Point `(x, y)` where the worst margin occurs.
    pub witness: Option<(f64, f64)>,
    /// Which condition produced the worst margin (`"a"`..`"d"`, or `"explicit"`).
    pub binding: &'static str,
    pub slack: f64,
    /// `(y, margin)` along the groove, for plotting.
    pub margins: Vec<(f64, f64)>,
}

impl CertificateResult {
    fn vacuous(method: Method, y1: f64) -> Self {
        Self {
            verdict: Verdict::Certified,
            method,
            y1,
            worst_margin: f64::INFINITY,
            witness: None,
            binding: "empty",
            slack: 0.0,
            margins: Vec::new(),
        }
    }

    pub fn is_vacuous(&self) -> bool {
        self.worst_margin == f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrooveDomain {
    pub profile: Profile,
    pub y0: f64,
    pub y_top: f64,
}

impl GrooveDomain {
    pub fn new(profile: &Profile, y0: f64) -> Self {
        Self { profile: profile.clone(), y0, y_top: profile.max_height() }
    }

    pub fn is_empty(&self) -> bool {
        self.profile.is_flat() || self.y0 >= self.y_top
    }

    /// Half-width of the lid `Γ1`.
    pub fn lid_half_width(&self) -> f64 {
        if self.is_empty() {
            0.0
        } else {
            self.profile.inverse_height(self.y0).unwrap_or(0.0)
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        !self.is_empty() && x.abs() <= 0.5 && y >= self.y0 && y <= self.profile.eval(x)
    }
}

/// `∫ |ζ'(t)|/t dt` over `[a, b]`, i.e. `∫ 1/h dy` between the matching heights.
fn inv_h_integral(p: &Profile, a: f64, b: f64) -> f64 {
    quad::integrate(|t| p.half_slope(t).abs() / t, a, b, quad::DEFAULT_TOL).value
}

/// Height `y1` where `∫_{y0}^{y1} 1/h = 1`, or `Y` when the full integral is at most 1.
pub fn compute_y1(p: &Profile, y0: f64) -> Result<f64, CertificateError> {
    let top = p.max_height();
    if p.is_flat() || y0 >= top {
        return Ok(top);
    }
    let s0 = p.inverse_height(y0)?;
    if inv_h_integral(p, 0.0, s0) <= 1.0 {
        return Ok(top);
    }
    // J(s) = ∫_s^{s0} is decreasing in s; find J(s1) = 1.
    let (mut lo, mut hi) = (0.0, s0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if inv_h_integral(p, mid, s0) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s1 = 0.5 * (lo + hi);
    let j = inv_h_integral(p, s1, s0);
    if !j.is_finite() || (j - 1.0).abs() > 1e-8 {
        return Err(CertificateError::Numeric(format!("y1 bisection did not converge (J = {j})")));
    }
    Ok(p.half_value(s1))
}

/// Checks the explicit pair of inequalities on `[y0, y1]` and `[y1, Y]`.
pub fn certify_explicit(p: &Profile, gamma: f64, y0: f64) -> Result<CertificateResult, CertificateError> {
    if !p.has_flat_ends() {
        return Err(CertificateError::EndSlope);
    }
    let groove = GrooveDomain::new(p, y0);
    if groove.is_empty() {
        return Ok(CertificateResult::vacuous(Method::ExplicitLemma, groove.y_top));
    }
    let y1 = compute_y1(p, y0)?;
    let s0 = p.inverse_height(y0)?;
    let n = EXPLICIT_GRID;
    let mut margins = Vec::with_capacity(n);
    let mut integral = 0.0;
    let mut prev_s = s0;
    let mut worst = (f64::INFINITY, 0.0, y0);
    for k in 0..n {
        let s = s0 * (1.0 - k as f64 / (n - 1) as f64);
        if k > 0 {
            integral += inv_h_integral(p, s, prev_s);
        }
        prev_s = s;
        let d = p.half_slope(s).abs();
        let lhs = (1.0 - integral * integral).max(0.0).sqrt() + integral.min(1.0) * d;
        let margin = gamma * (1.0 + d * d).sqrt() - lhs;
        let y = p.half_value(s);
        margins.push((y, margin));
        if margin < worst.0 {
            worst = (margin, s, y);
        }
    }
    margins.reverse();
    Ok(CertificateResult {
        verdict: if worst.0 >= -EXPLICIT_SLACK { Verdict::Certified } else { Verdict::NotCertified },
        method: Method::ExplicitLemma,
        y1,
        worst_margin: worst.0,
        witness: Some((worst.1, worst.2)),
        binding: "explicit",
        slack: EXPLICIT_SLACK,
        margins,
    })
}

/// The `σ` used by the explicit inequality, `σ = √([1 - (∫_{y0}^y 1/h)²]₊)`,
/// together with `β = h⁻¹√(1 - σ²)`, tabulated on `ys`.
pub fn explicit_sigma_beta(p: &Profile, y0: f64, ys: &[f64]) -> Result<(Vec<f64>, Vec<f64>), CertificateError> {
    let s0 = p.inverse_height(y0)?;
    let mut sigma = Vec::with_capacity(ys.len());
    let mut beta = Vec::with_capacity(ys.len());
    let mut integral = 0.0;
    let mut prev_s = s0;
    for &y in ys {
        let s = p.inverse_height(y)?;
        integral += inv_h_integral(p, s, prev_s);
        prev_s = s;
        let sg = (1.0 - integral * integral).max(0.0).sqrt();
        sigma.push(sg);
        beta.push(if s > 0.0 { (1.0 - sg * sg).max(0.0).sqrt() / s } else { 0.0 });
    }
    Ok((sigma, beta))
}

struct Worst {
    margin: f64,
    at: (f64, f64),
    binding: &'static str,
}

impl Worst {
    fn new() -> Self {
        Self { margin: f64::INFINITY, at: (0.0, 0.0), binding: "" }
    }

    fn see(&mut self, margin: f64, at: (f64, f64), binding: &'static str) {
        if margin < self.margin {
            *self = Self { margin, at, binding };
        }
    }
}

/// Checks conditions (a)-(d) of the `(σ, β)` family on a common table.
pub fn certify_sigma_beta(
    p: &Profile,
    gamma: f64,
    y0: f64,
    ys: &[f64],
    sigma: &[f64],
    beta: &[f64],
) -> Result<CertificateResult, CertificateError> {
    let groove = GrooveDomain::new(p, y0);
    if groove.is_empty() {
        return Ok(CertificateResult::vacuous(Method::SigmaBeta, groove.y_top));
    }
    let n = ys.len();
    if sigma.len() != n || beta.len() != n {
        return Err(CertificateError::Shape(format!(
            "grid has {n} points, sigma {}, beta {}",
            sigma.len(),
            beta.len()
        )));
    }
    if n < MIN_TABLE_LEN {
        return Err(CertificateError::Shape(format!("need at least {MIN_TABLE_LEN} points, got {n}")));
    }
    if (ys[0] - y0).abs() > 1e-9 || (ys[n - 1] - groove.y_top).abs() > 1e-9 {
        return Err(CertificateError::Shape("table must span [y0, Y]".into()));
    }
    if ys.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CertificateError::Shape("grid must be strictly increasing".into()));
    }
    let slack = SIGMA_BETA_SLACK;
    let mut worst = Worst::new();
    let mut margins = Vec::with_capacity(n);
    for k in 0..n {
        let y = ys[k];
        let h = p.inverse_height(y)?;
        let d = p.half_slope(h).abs();
        let a = 1.0 - sigma[k] * sigma[k] - h * h * beta[k] * beta[k];
        let dsigma = if k == 0 {
            (sigma[1] - sigma[0]) / (ys[1] - ys[0])
        } else if k == n - 1 {
            (sigma[n - 1] - sigma[n - 2]) / (ys[n - 1] - ys[n - 2])
        } else {
            (sigma[k + 1] - sigma[k - 1]) / (ys[k + 1] - ys[k - 1])
        };
        let b = dsigma + beta[k];
        let c = gamma * (1.0 + d * d).sqrt() - sigma[k] - h * beta[k] * d;
        worst.see(a, (h, y), "a");
        worst.see(b, (h, y), "b");
        worst.see(c, (h, y), "c");
        margins.push((y, a.min(b).min(c)));
    }
    worst.see(-(sigma[0] - 1.0).abs(), (0.0, y0), "d");
    Ok(CertificateResult {
        verdict: if worst.margin >= -slack { Verdict::Certified } else { Verdict::NotCertified },
        method: Method::SigmaBeta,
        y1: compute_y1(p, y0)?,
        worst_margin: worst.margin,
        witness: Some(worst.at),
        binding: worst.binding,
        slack,
        margins,
    })
}

/// A vector field sampled on the nodes of a rectangular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub x_min: f64,
    pub y_min: f64,
    pub dx: f64,
    pub dy: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `data[j * nx + i]` at `(x_min + i dx, y_min + j dy)`.
    pub data: Vec<[f64; 2]>,
}

impl VectorField {
    pub fn from_fn<F: Fn(f64, f64) -> [f64; 2]>(
        x_range: (f64, f64),
        y_range: (f64, f64),
        nx: usize,
        ny: usize,
        f: F,
    ) -> Self {
        let dx = (x_range.1 - x_range.0) / (nx - 1) as f64;
        let dy = (y_range.1 - y_range.0) / (ny - 1) as f64;
        let mut data = Vec::with_capacity(nx * ny);
        for j in 0..ny {
            for i in 0..nx {
                data.push(f(x_range.0 + i as f64 * dx, y_range.0 + j as f64 * dy));
            }
        }
        Self { x_min: x_range.0, y_min: y_range.0, dx, dy, nx, ny, data }
    }

    fn x_max(&self) -> f64 {
        self.x_min + (self.nx - 1) as f64 * self.dx
    }

    fn y_max(&self) -> f64 {
        self.y_min + (self.ny - 1) as f64 * self.dy
    }

    fn at(&self, i: usize, j: usize) -> [f64; 2] {
        self.data[j * self.nx + i]
    }

    /// Bilinear interpolation, clamped to the grid.
    pub fn sample(&self, x: f64, y: f64) -> [f64; 2] {
        let fx = ((x - self.x_min) / self.dx).clamp(0.0, (self.nx - 1) as f64);
        let fy = ((y - self.y_min) / self.dy).clamp(0.0, (self.ny - 1) as f64);
        let i = (fx.floor() as usize).min(self.nx - 2);
        let j = (fy.floor() as usize).min(self.ny - 2);
        let (u, v) = (fx - i as f64, fy - j as f64);
        let mut out = [0.0; 2];
        for c in 0..2 {
            out[c] = (1.0 - u) * (1.0 - v) * self.at(i, j)[c]
                + u * (1.0 - v) * self.at(i + 1, j)[c]
                + (1.0 - u) * v * self.at(i, j + 1)[c]
                + u * v * self.at(i + 1, j + 1)[c];
        }
        out
    }
}

/// Builds `w = x β(y) e_x + σ(y) e_y` on a grid covering `D`, interpolating
/// the tables linearly in `y`.
pub fn field_from_sigma_beta(
    groove: &GrooveDomain,
    ys: &[f64],
    sigma: &[f64],
    beta: &[f64],
    res: usize,
) -> VectorField {
    let hw = groove.lid_half_width().max(1e-12);
    let lerp = |table: &[f64], y: f64| -> f64 {
        let k = ys.partition_point(|&v| v < y).clamp(1, ys.len() - 1);
        let t = ((y - ys[k - 1]) / (ys[k] - ys[k - 1])).clamp(0.0, 1.0);
        table[k - 1] + t * (table[k] - table[k - 1])
    };
    VectorField::from_fn((-hw, hw), (groove.y0, groove.y_top), res, res, |x, y| {
        [x * lerp(beta, y), lerp(sigma, y)]
    })
}

/// Checks the calibration-field conditions: (a) `|w| ≤ 1` in `D`,
/// (b) `∇·w ≥ 0` in `D`, (c) `w·ν ≤ γ` on the wall `Γ2`, (d) `w·ν = -1` on the
/// lid `Γ1` (outward normal `-e_y`).
///
/// `slack_factor` multiplies the grid spacing to give the tolerance; the
/// default is `1e-6`.
pub fn certify_discrete_field(
    groove: &GrooveDomain,
    gamma: f64,
    field: &VectorField,
    slack_factor: f64,
) -> Result<CertificateResult, CertificateError> {
    if groove.is_empty() {
        return Ok(CertificateResult::vacuous(Method::DiscreteField, groove.y_top));
    }
    if field.nx < MIN_FIELD_RES || field.ny < MIN_FIELD_RES || field.data.len() != field.nx * field.ny {
        return Err(CertificateError::Shape(format!(
            "field must be at least {MIN_FIELD_RES}x{MIN_FIELD_RES} with nx*ny entries"
        )));
    }
    let p = &groove.profile;
    let hw = groove.lid_half_width();
    let tol = 1e-9;
    if field.x_min > -hw + tol || field.x_max() < hw - tol || field.y_min > groove.y0 + tol || field.y_max() < groove.y_top - tol {
        return Err(CertificateError::Coverage(format!(
            "grid [{}, {}]x[{}, {}] vs D bounding box [{}, {}]x[{}, {}]",
            field.x_min,
            field.x_max(),
            field.y_min,
            field.y_max(),
            -hw,
            hw,
            groove.y0,
            groove.y_top
        )));
    }
    let slack = slack_factor * field.dx.max(field.dy);
    let mut worst = Worst::new();

    for j in 0..field.ny {
        let y = field.y_min + j as f64 * field.dy;
        for i in 0..field.nx {
            let x = field.x_min + i as f64 * field.dx;
            if !groove.contains(x, y) {
                continue;
            }
            let w = field.at(i, j);
            worst.see(1.0 - (w[0] * w[0] + w[1] * w[1]).sqrt(), (x, y), "a");
            if i > 0 && j > 0 && i + 1 < field.nx && j + 1 < field.ny {
                let div = (field.at(i + 1, j)[0] - field.at(i - 1, j)[0]) / (2.0 * field.dx)
                    + (field.at(i, j + 1)[1] - field.at(i, j - 1)[1]) / (2.0 * field.dy);
                worst.see(div, (x, y), "b");
            }
        }
    }

    // Γ2: the two walls x = ±h(y), walked in s ∈ [0, h(y0)].
    let n_wall = 4 * field.nx.max(field.ny);
    let mut margins = Vec::with_capacity(n_wall);
    for k in 0..n_wall {
        let s = hw * k as f64 / (n_wall - 1) as f64;
        let y = p.half_value(s);
        let d = p.half_slope(s).abs();
        let norm = (1.0 + d * d).sqrt();
        let mut m = f64::INFINITY;
        for side in [-1.0, 1.0] {
            let w = field.sample(side * s, y);
            let dot = (side * d * w[0] + w[1]) / norm;
            m = m.min(gamma - dot);
            worst.see(gamma - dot, (side * s, y), "c");
        }
        margins.push((y, m));
    }
    margins.reverse();

    // Γ1: lid.
    let n_lid = 2 * field.nx;
    for k in 0..n_lid {
        let x = -hw + 2.0 * hw * k as f64 / (n_lid - 1) as f64;
        let w = field.sample(x, groove.y0);
        worst.see(-(w[1] - 1.0).abs(), (x, groove.y0), "d");
    }

    Ok(CertificateResult {
        verdict: if worst.margin >= -slack { Verdict::Certified } else { Verdict::NotCertified },
        method: Method::DiscreteField,
        y1: compute_y1(p, groove.y0)?,
        worst_margin: worst.margin,
        witness: Some(worst.at),
        binding: worst.binding,
        slack,
        margins,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wetting::effective_gamma;

    fn sin05() -> Profile {
        Profile::sinusoid(0.5).unwrap()
    }

    fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn y1_log_closed_form() {
        // h(y) = 1/2 - y
        let p = Profile::triangle(1.0).unwrap();
        let y1 = compute_y1(&p, 0.0).unwrap();
        let expect = 0.5 * (1.0 - (-1.0f64).exp());
        assert!((y1 - expect).abs() < 1e-9, "{y1} vs {expect}");
    }

    #[test]
    fn y1_near_top_is_top() {
        let p = sin05();
        assert_eq!(compute_y1(&p, 0.5 - 1e-9).unwrap(), 0.5);
    }

    #[test]
    fn explicit_rejects_triangle() {
        let p = Profile::triangle(2.0).unwrap();
        assert_eq!(certify_explicit(&p, 0.6, 0.0), Err(CertificateError::EndSlope));
    }

    #[test]
    fn explicit_vacuous_when_empty() {
        let p = sin05();
        let r = certify_explicit(&p, 0.7, 0.5).unwrap();
        assert_eq!(r.verdict, Verdict::Certified);
        assert!(r.is_vacuous());
    }

    #[test]
    fn explicit_fails_on_nonempty_groove() {
        // The explicit σ always crosses I = 1/√(1+h'²), where the margin is (γ-1)√(1+h'²).
        let p = sin05();
        for gamma in [0.8, 0.95] {
            let ew = effective_gamma(&p, gamma).unwrap();
            let r = certify_explicit(&p, gamma, ew.y0.unwrap()).unwrap();
            assert_eq!(r.verdict, Verdict::NotCertified);
            let (s, _) = r.witness.unwrap();
            let d = p.half_slope(s).abs();
            let bound = (gamma - 1.0) * (1.0 + d * d).sqrt();
            assert!(r.worst_margin <= bound + 1e-3, "{} vs {}", r.worst_margin, bound);
        }
    }

    #[test]
    fn sigma_one_certifies_steep_triangle() {
        let p = Profile::triangle(2.0).unwrap();
        let ys = uniform(0.0, 1.0, 512);
        let ones = vec![1.0; 512];
        let zeros = vec![0.0; 512];
        let r = certify_sigma_beta(&p, 0.6, 0.0, &ys, &ones, &zeros).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
        let r = certify_sigma_beta(&p, 0.4, 0.0, &ys, &ones, &zeros).unwrap();
        assert_eq!(r.verdict, Verdict::NotCertified);
        assert_eq!(r.binding, "c");
    }

    #[test]
    fn sigma_at_lid_must_be_one() {
        let p = Profile::triangle(2.0).unwrap();
        let ys = uniform(0.0, 1.0, 512);
        let mut sigma = vec![1.0; 512];
        sigma[0] = 0.5;
        let r = certify_sigma_beta(&p, 0.9, 0.0, &ys, &sigma, &vec![0.0; 512]).unwrap();
        assert_eq!(r.verdict, Verdict::NotCertified);
    }

    #[test]
    fn sigma_beta_shape_errors() {
        let p = sin05();
        let ys = uniform(0.1, 0.5, 300);
        assert!(matches!(
            certify_sigma_beta(&p, 0.8, 0.1, &ys, &vec![1.0; 299], &vec![0.0; 300]),
            Err(CertificateError::Shape(_))
        ));
        let short = uniform(0.1, 0.5, 100);
        assert!(matches!(
            certify_sigma_beta(&p, 0.8, 0.1, &short, &vec![1.0; 100], &vec![0.0; 100]),
            Err(CertificateError::Shape(_))
        ));
    }

    #[test]
    fn explicit_sigma_reproduces_explicit_verdict() {
        let p = sin05();
        let ew = effective_gamma(&p, 0.8).unwrap();
        let y0 = ew.y0.unwrap();
        let ys = uniform(y0, 0.5, 1024);
        let (sigma, beta) = explicit_sigma_beta(&p, y0, &ys).unwrap();
        let a = certify_explicit(&p, 0.8, y0).unwrap();
        let b = certify_sigma_beta(&p, 0.8, y0, &ys, &sigma, &beta).unwrap();
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn discrete_field_matches_sigma_beta_on_triangle() {
        let p = Profile::triangle(2.0).unwrap();
        let groove = GrooveDomain::new(&p, 0.0);
        let ys = uniform(0.0, 1.0, 512);
        let field = field_from_sigma_beta(&groove, &ys, &vec![1.0; 512], &vec![0.0; 512], 256);
        let r = certify_discrete_field(&groove, 0.6, &field, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::Certified, "{r:?}");
    }

    #[test]
    fn vertical_field_satisfies_lid_condition() {
        // w = e_y has w·ν = -1 on the lid; the verdict is decided by the wall condition.
        let p = Profile::triangle(8.0).unwrap();
        let groove = GrooveDomain::new(&p, 0.0);
        let field = VectorField::from_fn((-0.5, 0.5), (0.0, 4.0), 128, 128, |_, _| [0.0, 1.0]);
        let ok = certify_discrete_field(&groove, 0.2, &field, 1e-6).unwrap();
        assert_eq!(ok.verdict, Verdict::Certified);
        let bad = certify_discrete_field(&groove, 0.1, &field, 1e-6).unwrap();
        assert_eq!(bad.verdict, Verdict::NotCertified);
        assert_eq!(bad.binding, "c");
    }

    #[test]
    fn oversized_field_fails_a() {
        let p = Profile::triangle(2.0).unwrap();
        let groove = GrooveDomain::new(&p, 0.0);
        let field = VectorField::from_fn((-0.5, 0.5), (0.0, 1.0), 128, 128, |_, _| [0.6633, 1.0]);
        let r = certify_discrete_field(&groove, 0.9, &field, 1e-6).unwrap();
        assert_eq!(r.verdict, Verdict::NotCertified);
        assert_eq!(r.binding, "a");
    }

    #[test]
    fn field_coverage_and_resolution() {
        let p = Profile::triangle(2.0).unwrap();
        let groove = GrooveDomain::new(&p, 0.0);
        let small = VectorField::from_fn((-0.1, 0.1), (0.0, 1.0), 128, 128, |_, _| [0.0, 1.0]);
        assert!(matches!(certify_discrete_field(&groove, 0.6, &small, 1e-6), Err(CertificateError::Coverage(_))));
        let coarse = VectorField::from_fn((-0.5, 0.5), (0.0, 1.0), 64, 64, |_, _| [0.0, 1.0]);
        assert!(matches!(certify_discrete_field(&groove, 0.6, &coarse, 1e-6), Err(CertificateError::Shape(_))));
    }

    #[test]
    fn monotone_in_gamma() {
        let p = Profile::triangle(2.0).unwrap();
        let ys = uniform(0.0, 1.0, 512);
        let mut seen = false;
        for k in 0..10 {
            let gamma = 0.3 + 0.065 * k as f64;
            let r = certify_sigma_beta(&p, gamma, 0.0, &ys, &vec![1.0; 512], &vec![0.0; 512]).unwrap();
            if seen {
                assert_eq!(r.verdict, Verdict::Certified);
            }
            seen |= r.verdict == Verdict::Certified;
        }
        assert!(seen);
    }
}
