use alloc::string::String;

/// Errors raised by the geometry, solvers and verifiers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("curvature must be -1, 0 or 1, got {0}")]
    InvalidCurvature(i32),
    #[error("chart {chart} is not valid for curvature {delta}")]
    ChartCurvatureMismatch { chart: &'static str, delta: i32 },
    #[error("points live in different charts ({0} vs {1})")]
    ChartMismatch(&'static str, &'static str),
    #[error("point ({0}, {1}) lies outside the chart domain")]
    OutOfChart(f64, f64),
    #[error("chart {0} is not conformal")]
    NotConformal(&'static str),
    #[error("antipodal points have no unique geodesic")]
    Antipodal,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid body: {0}")]
    InvalidBody(String),
    #[error("support functions are not comparable: {0}")]
    GridMismatch(String),
    #[error("convexity lost: {0}")]
    ConvexityLost(String),
    #[error("generator failed: {0}")]
    Degenerate(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("eigenvalue {lambda} is below the spectral infimum {infimum} of geodesic balls")]
    BelowSpectralInfimum { lambda: f64, infimum: f64 },
    #[error("mesh error: {0}")]
    Mesh(String),
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("need at least 3 mesh levels, got {0}")]
    TooFewLevels(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
