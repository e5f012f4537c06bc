//! Periodic groove profiles ζ on one unit period.
//!
//! Every profile is even, 1-periodic and non-increasing on `[0, 1/2]`, so it
//! is fully described by its restriction to the half period. The inverse
//! branch `h(y)` maps heights `[0, Y]` back to `[0, 1/2]` with `h(0) = 1/2`
//! and `h(Y) = 0`.

use crate::error::ProfileError;
use crate::quad;
use std::f64::consts::PI;

const KINK_TOL: f64 = 1e-12;
const CRITICAL_SAMPLES: usize = 1 << 14;

/// Monotone (Fritsch–Carlson) cubic interpolant through decreasing samples.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    s: Vec<f64>,
    z: Vec<f64>,
    d: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(samples: &[(f64, f64)]) -> Result<Self, ProfileError> {
        if samples.len() < 4 {
            return Err(ProfileError::Invalid(format!(
                "tabulated profile needs at least 4 samples, got {}",
                samples.len()
            )));
        }
        let s: Vec<f64> = samples.iter().map(|p| p.0).collect();
        let z: Vec<f64> = samples.iter().map(|p| p.1).collect();
        if s.iter().chain(z.iter()).any(|v| !v.is_finite()) {
            return Err(ProfileError::Invalid("non-finite sample".into()));
        }
        if s[0].abs() > 1e-12 || (s[s.len() - 1] - 0.5).abs() > 1e-12 {
            return Err(ProfileError::Invalid("samples must span s in [0, 1/2]".into()));
        }
        if z[z.len() - 1].abs() > 1e-12 {
            return Err(ProfileError::Invalid("height at s = 1/2 must be 0".into()));
        }
        for w in s.windows(2) {
            if w[1] <= w[0] {
                return Err(ProfileError::Invalid("sample abscissae must be strictly increasing".into()));
            }
        }
        for w in z.windows(2) {
            if w[1] >= w[0] {
                return Err(ProfileError::Invalid("sample heights must be strictly decreasing".into()));
            }
        }
        let n = s.len();
        let h: Vec<f64> = s.windows(2).map(|w| w[1] - w[0]).collect();
        let del: Vec<f64> = (0..n - 1).map(|k| (z[k + 1] - z[k]) / h[k]).collect();
        let mut d = vec![0.0; n];
        for k in 1..n - 1 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
        d[0] = end_derivative(h[0], h[1], del[0], del[1]);
        d[n - 1] = end_derivative(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
        Ok(Self { s, z, d })
    }

    fn segment(&self, t: f64) -> usize {
        match self.s.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(self.s.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.s.len() - 2),
        }
    }

    fn value(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.s[k + 1] - self.s[k];
        let u = (t - self.s[k]) / h;
        let (h00, h10, h01, h11) = (
            (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u),
            u * (1.0 - u) * (1.0 - u),
            u * u * (3.0 - 2.0 * u),
            u * u * (u - 1.0),
        );
        h00 * self.z[k] + h10 * h * self.d[k] + h01 * self.z[k + 1] + h11 * h * self.d[k + 1]
    }

    fn derivative(&self, t: f64) -> f64 {
        let k = self.segment(t);
        let h = self.s[k + 1] - self.s[k];
        let u = (t - self.s[k]) / h;
        let dh00 = 6.0 * u * u - 6.0 * u;
        let dh10 = 3.0 * u * u - 4.0 * u + 1.0;
        let dh01 = -dh00;
        let dh11 = 3.0 * u * u - 2.0 * u;
        (dh00 * self.z[k] + dh01 * self.z[k + 1]) / h + dh10 * self.d[k] + dh11 * self.d[k + 1]
    }

    pub fn knots(&self) -> &[f64] {
        &self.s
    }
}

fn end_derivative(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        0.0
    } else if del0.signum() != del1.signum() && d.abs() > (3.0 * del0).abs() {
        3.0 * del0
    } else {
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    Flat,
    /// `ζ(s) = m (1/2 - |s|)`.
    Triangle { slope: f64 },
    /// `ζ(s) = (a/2)(1 + cos 2πs)`.
    Sinusoid { amplitude: f64 },
    Tabulated(MonotoneCubic),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    kind: ProfileKind,
}

impl Profile {
    pub fn flat() -> Self {
        Self { kind: ProfileKind::Flat }
    }

    pub fn triangle(slope: f64) -> Result<Self, ProfileError> {
        if !(slope.is_finite() && slope > 0.0) {
            return Err(ProfileError::Invalid(format!("triangle slope must be positive, got {slope}")));
        }
        Ok(Self { kind: ProfileKind::Triangle { slope } })
    }

    pub fn sinusoid(amplitude: f64) -> Result<Self, ProfileError> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(ProfileError::Invalid(format!(
                "sinusoid amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self { kind: ProfileKind::Sinusoid { amplitude } })
    }

    pub fn tabulated(samples: &[(f64, f64)]) -> Result<Self, ProfileError> {
        Ok(Self { kind: ProfileKind::Tabulated(MonotoneCubic::new(samples)?) })
    }

    /// Parses a CSV with header `s,zeta`.
    pub fn from_csv(text: &str) -> Result<Self, ProfileError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| ProfileError::Invalid("empty csv".into()))?;
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != ["s", "zeta"] {
            return Err(ProfileError::Invalid(format!("expected header `s,zeta`, got `{header}`")));
        }
        let mut samples = Vec::new();
        for (i, line) in lines.enumerate() {
            let mut it = line.split(',').map(|v| v.trim().parse::<f64>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(s)), Some(Ok(z)), None) => samples.push((s, z)),
                _ => {
                    return Err(ProfileError::Invalid(format!("bad csv row {}: `{line}`", i + 2)));
                }
            }
        }
        Self::tabulated(&samples)
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.kind, ProfileKind::Flat)
    }

    /// Height on the half period, `t ∈ [0, 1/2]`.
    pub(crate) fn half_value(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Flat => 0.0,
            ProfileKind::Triangle { slope } => slope * (0.5 - t),
            ProfileKind::Sinusoid { amplitude } => 0.5 * amplitude * (1.0 + (2.0 * PI * t).cos()),
            ProfileKind::Tabulated(c) => c.value(t),
        }
    }

    /// Derivative on the open half period (one-sided at the ends).
    pub(crate) fn half_slope(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Flat => 0.0,
            ProfileKind::Triangle { slope } => -slope,
            ProfileKind::Sinusoid { amplitude } => -amplitude * PI * (2.0 * PI * t).sin(),
            ProfileKind::Tabulated(c) => c.derivative(t),
        }
    }

    /// `Y = max ζ = ζ(0)`.
    pub fn max_height(&self) -> f64 {
        self.half_value(0.0)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.half_value(reduce(s))
    }

    /// `ζ'(s)`; errors at kinks with both one-sided values.
    pub fn slope(&self, s: f64) -> Result<f64, ProfileError> {
        let t = s.rem_euclid(1.0);
        let at_zero = t < 1e-14 || 1.0 - t < 1e-14;
        let at_half = (t - 0.5).abs() < 1e-14;
        if at_zero {
            let right = self.half_slope(0.0);
            let left = -right;
            if (left - right).abs() > KINK_TOL {
                return Err(ProfileError::Kink { s, left, right });
            }
            return Ok(0.0);
        }
        if at_half {
            let left = self.half_slope(0.5);
            let right = -left;
            if (left - right).abs() > KINK_TOL {
                return Err(ProfileError::Kink { s, left, right });
            }
            return Ok(0.0);
        }
        if t < 0.5 {
            Ok(self.half_slope(t))
        } else {
            Ok(-self.half_slope(1.0 - t))
        }
    }

    /// True when the even extension is differentiable at `s = 0` and `s = 1/2`,
    /// i.e. `h'(0) = h'(Y) = -∞`.
    pub fn has_flat_ends(&self) -> bool {
        self.half_slope(0.0).abs() <= 1e-9 && self.half_slope(0.5).abs() <= 1e-9
    }

    /// `h(y)`: the `s ∈ [0, 1/2]` with `ζ(s) = y`, by bisection.
    pub fn inverse_height(&self, y: f64) -> Result<f64, ProfileError> {
        if self.is_flat() {
            return Err(ProfileError::NoInverse);
        }
        let top = self.max_height();
        let slack = 1e-14 * top.max(1.0);
        if !(y >= -slack && y <= top + slack) {
            return Err(ProfileError::Domain { y, max: top });
        }
        if y >= top {
            return Ok(0.0);
        }
        if y <= 0.0 {
            return Ok(0.5);
        }
        let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.half_value(mid) > y {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let (zl, zh) = (self.half_value(lo) - y, self.half_value(hi) - y);
        Ok(if zl.abs() <= zh.abs() { lo } else { hi })
    }

    /// `h'(y) = 1/ζ'(h(y))`, `-∞` where the profile is flat.
    pub fn inverse_slope(&self, y: f64) -> Result<f64, ProfileError> {
        let s = self.inverse_height(y)?;
        let d = self.half_slope(s);
        Ok(if d == 0.0 { f64::NEG_INFINITY } else { 1.0 / d })
    }

    fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        let mut v = vec![a];
        if let ProfileKind::Tabulated(c) = &self.kind {
            v.extend(c.knots().iter().copied().filter(|&k| k > a && k < b));
        }
        v.push(b);
        v
    }

    /// `∫_a^b √(1 + ζ'²) ds` on `0 ≤ a ≤ b ≤ 1/2`.
    pub fn arc_length(&self, a: f64, b: f64) -> Result<f64, ProfileError> {
        let tol = 1e-15;
        if !(a >= -tol && a <= b && b <= 0.5 + tol) {
            return Err(ProfileError::Range { a, b });
        }
        let (a, b) = (a.max(0.0), b.min(0.5));
        Ok(match &self.kind {
            ProfileKind::Flat => b - a,
            ProfileKind::Triangle { slope } => (b - a) * (1.0 + slope * slope).sqrt(),
            _ => {
                let f = |t: f64| {
                    let d = self.half_slope(t);
                    (1.0 + d * d).sqrt()
                };
                quad::integrate_pieces(f, &self.breakpoints(a, b), quad::DEFAULT_TOL).value
            }
        })
    }

    /// `r = 2 ∫_0^{1/2} √(1 + ζ'²) ds`.
    pub fn roughness(&self) -> f64 {
        2.0 * self.arc_length(0.0, 0.5).expect("full half period is in range")
    }

    /// `max |ζ'|` by dense sampling plus golden-section refinement.
    pub fn max_slope(&self) -> f64 {
        match &self.kind {
            ProfileKind::Flat => 0.0,
            ProfileKind::Triangle { slope } => *slope,
            _ => {
                let n = CRITICAL_SAMPLES;
                let dt = 0.5 / n as f64;
                let g = |t: f64| self.half_slope(t).abs();
                let (mut best_i, mut best) = (0usize, g(0.0));
                for i in 1..=n {
                    let v = g(i as f64 * dt);
                    if v > best {
                        best = v;
                        best_i = i;
                    }
                }
                let lo = (best_i.saturating_sub(1)) as f64 * dt;
                let hi = ((best_i + 1).min(n)) as f64 * dt;
                let (_, v) = golden_max(g, lo, hi, 1e-14);
                v.max(best)
            }
        }
    }

    /// `γ_c = 1/√(1 + max |ζ'|²)`.
    pub fn critical_gamma(&self) -> f64 {
        let m = self.max_slope();
        1.0 / (1.0 + m * m).sqrt()
    }
}

/// Reduces `s` mod 1 and reflects it into `[0, 1/2]`.
pub fn reduce(s: f64) -> f64 {
    let t = s.rem_euclid(1.0);
    if t > 0.5 {
        1.0 - t
    } else {
        t
    }
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (x, v) = golden_min(|t| -f(t), lo, hi, tol);
    (x, -v)
}

/// Golden-section minimisation of a unimodal function on `[lo, hi]`.
pub(crate) fn golden_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let invphi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - invphi * (hi - lo);
    let mut d = lo + invphi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - invphi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + invphi * (hi - lo);
            fd = f(d);
        }
    }
    let candidates = [(lo, f(lo)), (c, fc), (d, fd), (hi, f(hi))];
    candidates
        .into_iter()
        .fold((lo, f64::INFINITY), |acc, p| if p.1 < acc.1 { p } else { acc })
}
