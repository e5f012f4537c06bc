//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every exported function has a plain Rust counterpart returning
//! `Result<_, String>` so the logic can be exercised natively.

use roughwet::certificate::{certify_explicit, Verdict};
use roughwet::geometry::{build_rough_boundary, rasterize, trace_weights, Base, DEFAULT_SAMPLES_PER_PERIOD, GAMMA_OTHER_WALLS};
use roughwet::profile::Profile;
use roughwet::solver::{measure_apparent_angle, minimize_from, VolumeOptions};
use roughwet::wetting::effective_gamma;
use wasm_bindgen::prelude::*;

pub fn profile(kind: &str, param: f64) -> Result<Profile, String> {
    match kind {
        "flat" => Ok(Profile::flat()),
        "triangle" => Profile::triangle(param).map_err(|e| e.to_string()),
        "sinusoid" => Profile::sinusoid(param).map_err(|e| e.to_string()),
        other => Err(format!("unknown profile `{other}`")),
    }
}

pub fn analyze_text(kind: &str, param: f64, gamma: f64) -> Result<String, String> {
    let p = profile(kind, param)?;
    let ew = effective_gamma(&p, gamma).map_err(|e| e.to_string())?;
    let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| format!("{x:.6}"));
    let mut s = String::new();
    for (k, v) in [
        ("regime", ew.regime.name().to_string()),
        ("r", format!("{:.6}", ew.roughness)),
        ("gamma_c", format!("{:.6}", ew.gamma_c)),
        ("gamma_eff", format!("{:.6}", ew.gamma_eff)),
        ("y0", opt(ew.y0)),
        ("s0", opt(ew.s0)),
        ("theta_Y_deg", format!("{:.3}", ew.theta_y.to_degrees())),
        ("theta_W_deg", ew.theta_w.map_or_else(|| "undefined".into(), |t| format!("{:.3}", t.to_degrees()))),
        ("theta_eff_deg", format!("{:.3}", ew.theta_eff.to_degrees())),
    ] {
        s.push_str(&format!("{k} = {v}\n"));
    }
    Ok(s)
}

/// Effective wetting report as `key = value` lines.
#[wasm_bindgen]
pub fn analyze(kind: &str, param: f64, gamma: f64) -> Result<String, JsError> {
    analyze_text(kind, param, gamma).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub struct Certification {
    certified: bool,
    y0: f64,
    worst_margin: f64,
    ys: Vec<f64>,
    margins: Vec<f64>,
}

#[wasm_bindgen]
impl Certification {
    #[wasm_bindgen(getter)]
    pub fn certified(&self) -> bool {
        self.certified
    }

    #[wasm_bindgen(getter)]
    pub fn y0(&self) -> f64 {
        self.y0
    }

    /// `Infinity` when the groove domain is empty.
    #[wasm_bindgen(getter)]
    pub fn worst_margin(&self) -> f64 {
        self.worst_margin
    }

    pub fn ys(&self) -> Vec<f64> {
        self.ys.clone()
    }

    pub fn margins(&self) -> Vec<f64> {
        self.margins.clone()
    }
}

pub fn certification(kind: &str, param: f64, gamma: f64) -> Result<Certification, String> {
    let p = profile(kind, param)?;
    let ew = effective_gamma(&p, gamma).map_err(|e| e.to_string())?;
    let y0 = ew.y0.unwrap_or(p.max_height());
    let res = certify_explicit(&p, gamma, y0).map_err(|e| e.to_string())?;
    Ok(Certification {
        certified: res.verdict == Verdict::Certified,
        y0,
        worst_margin: res.worst_margin,
        ys: res.margins.iter().map(|m| m.0).collect(),
        margins: res.margins.iter().map(|m| m.1).collect(),
    })
}

/// Explicit unreachability check at the minimiser of `g_γ`.
#[wasm_bindgen]
pub fn certify(kind: &str, param: f64, gamma: f64) -> Result<Certification, JsError> {
    certification(kind, param, gamma).map_err(|e| JsError::new(&e))
}

/// A solved droplet; `cells` holds 0 outside the domain, 1 vapour, 2 liquid, bottom row first.
#[wasm_bindgen]
pub struct Droplet {
    nx: usize,
    ny: usize,
    cells: Vec<u8>,
    energy: f64,
    volume: f64,
    angle_deg: f64,
}

#[wasm_bindgen]
impl Droplet {
    #[wasm_bindgen(getter)]
    pub fn nx(&self) -> usize {
        self.nx
    }

    #[wasm_bindgen(getter)]
    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cells(&self) -> Vec<u8> {
        self.cells.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn energy(&self) -> f64 {
        self.energy
    }

    #[wasm_bindgen(getter)]
    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `NaN` when no angle could be fitted.
    #[wasm_bindgen(getter)]
    pub fn angle_deg(&self) -> f64 {
        self.angle_deg
    }
}

pub const MAX_DEMO_RESOLUTION: usize = 160;

pub fn droplet(kind: &str, param: f64, gamma: f64, q: f64, periods: usize, resolution: usize) -> Result<Droplet, String> {
    if resolution == 0 || resolution > MAX_DEMO_RESOLUTION {
        return Err(format!("resolution must lie in 1..={MAX_DEMO_RESOLUTION}"));
    }
    if periods == 0 {
        return Err("need at least one roughness period".into());
    }
    let p = profile(kind, param)?;
    let base = Base::Channel { width: 1.0, height: 0.5 };
    let dom = build_rough_boundary(base, &p, 1.0 / periods as f64, DEFAULT_SAMPLES_PER_PERIOD).map_err(|e| e.to_string())?;
    let mut grid = rasterize(&dom, resolution).map_err(|e| e.to_string())?;
    let w = trace_weights(&dom, &mut grid, gamma, GAMMA_OTHER_WALLS);
    let (field, report) = minimize_from(&grid, &w, q, VolumeOptions::default(), Some(&dom), &[]).map_err(|e| e.to_string())?;
    let cells = (0..grid.nx * grid.ny)
        .map(|c| if field.is_occupied(c) { 2 } else { grid.is_node(c) as u8 })
        .collect();
    let angle_deg = measure_apparent_angle(&grid, &field, &dom).map_or(f64::NAN, |m| m.angle.to_degrees());
    Ok(Droplet { nx: grid.nx, ny: grid.ny, cells, energy: report.total, volume: field.volume, angle_deg })
}

/// Minimal-energy droplet of area `q` on a 1 x 0.5 channel with `periods` grooves.
#[wasm_bindgen]
pub fn minimize(kind: &str, param: f64, gamma: f64, q: f64, periods: usize, resolution: usize) -> Result<Droplet, JsError> {
    droplet(kind, param, gamma, q, periods, resolution).map_err(|e| JsError::new(&e))
}
