//! Run configuration: a TOML file with dotted sections, plus `--set` overrides.

use roughwet::geometry::{epsilon_index, Base};
use roughwet::profile::Profile;
use roughwet::solver::DEFAULT_VOLUME_SLACK;
use std::fmt;
use std::path::{Path, PathBuf};
use toml::{Table, Value};

pub const DEFAULT_RESOLUTION: usize = 256;
pub const DEFAULT_OUTDIR: &str = "out";
pub const DEFAULT_GAMMA_SWEEP: usize = 0;

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub key: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.key, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub profile: Profile,
    pub wetting_gamma: Option<f64>,
    pub base: Base,
    pub domain_epsilons: Vec<f64>,
    pub experiment_gamma: Option<f64>,
    pub q: Option<f64>,
    pub experiment_epsilons: Vec<f64>,
    pub experiment_outdir: Option<PathBuf>,
    pub resolution: usize,
    pub slack: f64,
    /// Points of the optional γ sweep written by `analyze`; 0 disables it.
    pub gamma_sweep: usize,
    pub outdir: PathBuf,
    /// The merged document, written next to the outputs.
    pub document: Table,
}

impl RunConfig {
    /// `wetting.gamma`, else `experiment.gamma`.
    pub fn gamma(&self) -> Option<f64> {
        self.wetting_gamma.or(self.experiment_gamma)
    }
}

pub fn parse_config(path: &Path, overrides: &[String]) -> Result<RunConfig, Vec<Violation>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| vec![Violation { key: "<file>".into(), message: format!("{}: {e}", path.display()) }])?;
    let mut doc: Table = text
        .parse()
        .map_err(|e: toml::de::Error| vec![Violation { key: "<file>".into(), message: e.message().to_string() }])?;
    let mut errs = Vec::new();
    for o in overrides {
        if let Err(v) = apply_override(&mut doc, o) {
            errs.push(v);
        }
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let cfg = validate(&doc, dir, &mut errs);
    if errs.is_empty() {
        Ok(cfg.expect("validated"))
    } else {
        Err(errs)
    }
}

/// `key.path=value`; the value is read as TOML and falls back to a bare string.
pub fn apply_override(doc: &mut Table, spec: &str) -> Result<(), Violation> {
    let Some((key, raw)) = spec.split_once('=') else {
        return Err(Violation { key: spec.into(), message: "override must look like key=value".into() });
    };
    let key = key.trim();
    let raw = raw.trim();
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Violation { key: key.into(), message: "empty key segment".into() });
    }
    let mut table = doc;
    for p in &parts[..parts.len() - 1] {
        let entry = table.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        table = match entry {
            Value::Table(t) => t,
            _ => return Err(Violation { key: key.into(), message: format!("`{p}` is not a section") }),
        };
    }
    table.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

struct Reader<'a> {
    doc: &'a Table,
    errs: &'a mut Vec<Violation>,
}

impl Reader<'_> {
    fn get(&self, key: &str) -> Option<&Value> {
        let mut parts = key.split('.');
        let mut v = self.doc.get(parts.next()?)?;
        for p in parts {
            v = v.as_table()?.get(p)?;
        }
        Some(v)
    }

    fn fail(&mut self, key: &str, message: impl Into<String>) {
        self.errs.push(Violation { key: key.into(), message: message.into() });
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        match self.get(key) {
            None => None,
            Some(Value::Float(x)) => Some(*x),
            Some(Value::Integer(i)) => Some(*i as f64),
            Some(v) => {
                let t = v.type_str();
                self.fail(key, format!("expected a number, found {t}"));
                None
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<String> {
        match self.get(key) {
            None => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(v) => {
                let t = v.type_str();
                self.fail(key, format!("expected a string, found {t}"));
                None
            }
        }
    }

    fn uint(&mut self, key: &str) -> Option<usize> {
        match self.get(key) {
            None => None,
            Some(Value::Integer(i)) if *i >= 0 => Some(*i as usize),
            Some(v) => {
                let t = v.type_str();
                self.fail(key, format!("expected a non-negative integer, found {t}"));
                None
            }
        }
    }

    fn floats(&mut self, key: &str) -> Option<Vec<f64>> {
        match self.get(key) {
            None => None,
            Some(Value::Array(a)) => {
                let mut out = Vec::new();
                for v in a {
                    match v {
                        Value::Float(x) => out.push(*x),
                        Value::Integer(i) => out.push(*i as f64),
                        _ => {
                            self.fail(key, "expected an array of numbers");
                            return None;
                        }
                    }
                }
                Some(out)
            }
            Some(v) => {
                let t = v.type_str();
                self.fail(key, format!("expected an array, found {t}"));
                None
            }
        }
    }

    fn gamma(&mut self, key: &str) -> Option<f64> {
        let g = self.float(key)?;
        if !(0.0..1.0).contains(&g) {
            self.fail(key, format!("gamma = {g} must satisfy 0 <= gamma < 1"));
            return None;
        }
        Some(g)
    }

    fn epsilons(&mut self, key: &str) -> Vec<f64> {
        let Some(list) = self.floats(key) else { return Vec::new() };
        if list.is_empty() {
            self.fail(key, "empty list");
        }
        let mut ok = true;
        for &e in &list {
            if epsilon_index(e).is_err() {
                self.fail(key, format!("epsilon must equal 1/j (got {e})"));
                ok = false;
            }
        }
        if ok && list.windows(2).any(|w| w[1] >= w[0]) {
            self.fail(key, "epsilon values must be strictly decreasing");
        }
        list
    }

    fn positive(&mut self, key: &str, default: f64) -> f64 {
        match self.float(key) {
            Some(x) if x > 0.0 => x,
            Some(x) => {
                self.fail(key, format!("must be positive (got {x})"));
                default
            }
            None => default,
        }
    }
}

fn validate(doc: &Table, dir: &Path, errs: &mut Vec<Violation>) -> Option<RunConfig> {
    let mut r = Reader { doc, errs };
    let profile = read_profile(&mut r, dir);
    let wetting_gamma = r.gamma("wetting.gamma");
    let base = match r.string("domain.base").as_deref().unwrap_or("channel") {
        "channel" => Some(Base::Channel { width: r.positive("domain.width", 1.0), height: r.positive("domain.height", 0.6) }),
        "disk" => Some(Base::Disk { radius: r.positive("domain.radius", 0.5) }),
        other => {
            r.fail("domain.base", format!("unknown base `{other}` (channel or disk)"));
            None
        }
    };
    let domain_epsilons = r.epsilons("domain.epsilon_list");
    let experiment_gamma = r.gamma("experiment.gamma");
    let q = match r.float("experiment.q") {
        Some(q) if q > 0.0 => Some(q),
        Some(q) => {
            r.fail("experiment.q", format!("volume must be positive (got {q})"));
            None
        }
        None => None,
    };
    let experiment_epsilons = r.epsilons("experiment.epsilon_list");
    let experiment_outdir = r.string("experiment.outdir").map(PathBuf::from);
    let resolution = match r.uint("solver.resolution") {
        Some(0) => {
            r.fail("solver.resolution", "must be positive");
            DEFAULT_RESOLUTION
        }
        Some(n) => n,
        None => DEFAULT_RESOLUTION,
    };
    let slack = match r.float("solver.slack") {
        Some(s) if s > 0.0 && s < 1.0 => s,
        Some(s) => {
            r.fail("solver.slack", format!("relative slack must lie in (0, 1) (got {s})"));
            DEFAULT_VOLUME_SLACK
        }
        None => DEFAULT_VOLUME_SLACK,
    };
    let gamma_sweep = r.uint("output.gamma_sweep").unwrap_or(DEFAULT_GAMMA_SWEEP);
    let outdir = PathBuf::from(r.string("output.outdir").unwrap_or_else(|| DEFAULT_OUTDIR.into()));
    if !errs.is_empty() {
        return None;
    }
    Some(RunConfig {
        profile: profile?,
        wetting_gamma,
        base: base?,
        domain_epsilons,
        experiment_gamma,
        q,
        experiment_epsilons,
        experiment_outdir,
        resolution,
        slack,
        gamma_sweep,
        outdir,
        document: doc.clone(),
    })
}

fn read_profile(r: &mut Reader, dir: &Path) -> Option<Profile> {
    let Some(kind) = r.string("profile.kind") else {
        if r.get("profile.kind").is_none() {
            r.fail("profile.kind", "missing key");
        }
        return None;
    };
    let need = |r: &mut Reader, key: &str| {
        let v = r.float(key);
        if v.is_none() && r.get(key).is_none() {
            r.fail(key, "missing key");
        }
        v
    };
    let built = match kind.as_str() {
        "flat" => Ok(Profile::flat()),
        "triangle" => {
            let m = need(r, "profile.m")?;
            Profile::triangle(m)
        },
        "sinusoid" => {
            let a = need(r, "profile.a")?;
            Profile::sinusoid(a)
        },
        "tabulated" => {
            let Some(file) = r.string("profile.samples") else {
                if r.get("profile.samples").is_none() {
                    r.fail("profile.samples", "missing key");
                }
                return None;
            };
            let path = dir.join(&file);
            match std::fs::read_to_string(&path) {
                Ok(text) => Profile::from_csv(&text),
                Err(e) => {
                    r.fail("profile.samples", format!("{}: {e}", path.display()));
                    return None;
                }
            }
        }
        other => {
            r.fail("profile.kind", format!("unknown profile `{other}` (flat, triangle, sinusoid, tabulated)"));
            return None;
        }
    };
    match built {
        Ok(p) => Some(p),
        Err(e) => {
            r.fail("profile", e.to_string());
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, overrides: &[&str]) -> Result<RunConfig, Vec<Violation>> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, text).unwrap();
        let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
        parse_config(&p, &o)
    }

    #[test]
    fn defaults_filled() {
        let c = parse("[profile]\nkind = \"flat\"\n", &[]).unwrap();
        assert_eq!(c.resolution, 256);
        assert_eq!(c.slack, 0.005);
        assert_eq!(c.outdir, PathBuf::from("out"));
    }

    #[test]
    fn gamma_out_of_range_names_key() {
        let e = parse("[profile]\nkind = \"flat\"\n[wetting]\ngamma = 1.2\n", &[]).unwrap_err();
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].key, "wetting.gamma");
    }

    #[test]
    fn epsilon_must_be_reciprocal() {
        let e = parse("[profile]\nkind = \"flat\"\n[domain]\nepsilon_list = [0.3]\n", &[]).unwrap_err();
        assert!(e[0].message.contains("epsilon must equal 1/j"), "{e:?}");
    }

    #[test]
    fn all_violations_reported() {
        let e = parse(
            "[profile]\nkind = \"sinusoid\"\n[wetting]\ngamma = 2\n[experiment]\nq = \"big\"\nepsilon_list = [0.3, 0.25]\n",
            &[],
        )
        .unwrap_err();
        let keys: Vec<&str> = e.iter().map(|v| v.key.as_str()).collect();
        assert_eq!(keys, ["profile.a", "wetting.gamma", "experiment.q", "experiment.epsilon_list"]);
    }

    #[test]
    fn overrides() {
        let c = parse("[profile]\nkind = \"flat\"\n", &["wetting.gamma=0.25", "output.outdir=elsewhere", "solver.resolution=64"]).unwrap();
        assert_eq!(c.gamma(), Some(0.25));
        assert_eq!(c.outdir, PathBuf::from("elsewhere"));
        assert_eq!(c.resolution, 64);
        let e = parse("[profile]\nkind = \"flat\"\n", &["nonsense"]).unwrap_err();
        assert_eq!(e[0].key, "nonsense");
    }
}
