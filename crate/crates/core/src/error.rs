use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("invalid profile: {0}")]
    Invalid(String),
    #[error("profile has a kink at s = {s}: one-sided slopes {left} (left) and {right} (right)")]
    Kink { s: f64, left: f64, right: f64 },
    #[error("height {y} outside [0, {max}]")]
    Domain { y: f64, max: f64 },
    #[error("arc-length range [{a}, {b}] not inside [0, 1/2]")]
    Range { a: f64, b: f64 },
    #[error("flat profile has no inverse height branch")]
    NoInverse,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WettingError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("gamma = {0} >= 1: degenerate regime, effective interaction undefined")]
    Degenerate(f64),
    #[error("gamma = {0} must lie in [0, 1)")]
    GammaRange(f64),
    #[error("angle undefined - coefficient {0} out of range [-1, 1]")]
    AngleUndefined(f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertificateError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("profile violates end-slope hypothesis (h'(0) = h'(Y) = -inf requires zero slope at s = 0 and s = 1/2)")]
    EndSlope,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("field does not cover the groove domain: {0}")]
    Coverage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("epsilon = {0} is not of the form 1/j")]
    Epsilon(f64),
    #[error("rough boundary self-intersects (segments {0} and {1})")]
    SelfIntersection(usize, usize),
    #[error("resolution too coarse: {got} cells per unit, at least {required} needed for epsilon = {epsilon}")]
    Resolution { got: usize, required: usize, epsilon: f64 },
    #[error("invalid domain: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("volume {q} outside (0, {available})")]
    Constraint { q: f64, available: f64 },
    #[error("measurement failed: {0}")]
    Measurement(String),
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Wetting(#[from] WettingError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error("empty table")]
    EmptyTable,
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
