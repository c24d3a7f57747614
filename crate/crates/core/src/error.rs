//! Crate-wide error type. Every fallible operation returns [`Result`].

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A point (or a finite-difference stencil around it) left the chart box
    /// along a non-periodic axis.
    #[error("point outside chart on axis {axis}: {value} not in [{lo}, {hi}]")]
    OutsideChart { axis: usize, value: f64, lo: f64, hi: f64 },

    /// Metric failed the positive-definiteness check at an evaluation point.
    #[error("metric not positive definite at evaluation point: {detail}")]
    DegenerateMetric { detail: String },

    /// Metric condition number exceeds the tolerated bound; derived tensors
    /// would be numerically meaningless.
    #[error("metric too ill-conditioned (cond {cond:.3e} > {limit:.1e})")]
    IllConditioned { cond: f64, limit: f64 },

    /// Chart-Jacobian of a map is rank-deficient where full rank was required.
    #[error("map is not a submersion here (min singular value {min_sv:.3e})")]
    NotASubmersion { min_sv: f64 },

    /// An integration trajectory left the chart along a non-periodic axis.
    #[error("trajectory escaped the chart at t = {time:.6}")]
    Escape { time: f64 },

    /// Iterative solver (geodesic shooting, root finding) failed to converge.
    #[error("{what} did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },

    /// Requested endpoint lies outside the configured trust radius.
    #[error("target at distance {distance:.6} exceeds trust radius {trust_radius:.6}")]
    TrustRadius { distance: f64, trust_radius: f64 },

    /// A documented precondition was violated by the caller.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Scenario registry has no entry under this name.
    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),

    /// Scenario parameter outside its schema.
    #[error("bad parameter {name:?}: {detail}")]
    BadParameter { name: String, detail: String },

    /// Config file failed to parse or violated the schema.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for contract violations.
    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
