use roughwet::experiment::{epsilon_sweep, ExperimentConfig};
use roughwet::geometry::Base;
use roughwet::profile::Profile;
use std::path::PathBuf;

fn check(name: &str, text: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    match std::fs::read_to_string(&path) {
        Ok(frozen) => assert_eq!(text, frozen, "{} changed; delete it to refreeze", path.display()),
        Err(_) => std::fs::write(&path, text).unwrap(),
    }
}

#[test]
fn small_sinusoid_sweep() {
    let cfg = ExperimentConfig {
        profile: Profile::sinusoid(0.5).unwrap(),
        base: Base::Channel { width: 1.0, height: 0.5 },
        gamma: 0.3,
        q: 0.05,
        epsilons: vec![0.25, 0.125],
        resolution: 64,
        slack: 0.005,
    };
    check("small_sinusoid.csv", &epsilon_sweep(&cfg).unwrap().csv());
}

#[test]
fn flat_sweep() {
    let cfg = ExperimentConfig {
        profile: Profile::flat(),
        base: Base::Channel { width: 1.0, height: 0.5 },
        gamma: 0.5,
        q: 0.03,
        epsilons: vec![0.5, 0.25],
        resolution: 96,
        slack: 0.005,
    };
    check("flat.csv", &epsilon_sweep(&cfg).unwrap().csv());
}
