use thiserror::Error;

/// Errors raised by the scissor-lift model, force engine, oracle and search.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid lift spec: {0}")]
    InvalidSpec(String),

    #[error("invalid actuator placement: {0}")]
    InvalidPlacement(String),

    #[error("theta out of open range (0, pi/2): {0} rad")]
    ThetaOutOfRange(f64),

    #[error("invalid theta domain [{lo}, {hi}]: need 0 < lo <= hi < pi/2")]
    InvalidDomain { lo: f64, hi: f64 },

    #[error("height {height} m outside (0, {max}) m")]
    HeightOutOfRange { height: f64, max: f64 },

    #[error("unsupported placement: {0}")]
    UnsupportedPlacement(String),

    #[error("degenerate placement: actuator length {length} m at theta = {theta} rad")]
    DegeneratePlacement { theta: f64, length: f64 },

    #[error("internal consistency: negative length radicand {radicand} at theta = {theta} rad")]
    InconsistentGeometry { theta: f64, radicand: f64 },

    #[error(
        "singular velocity ratio in range at theta = {theta} rad (dh/dl denominator {denominator})"
    )]
    SingularInRange { theta: f64, denominator: f64 },

    #[error("stationary actuator length at theta = {theta} rad (zero length change)")]
    StationaryLength { theta: f64 },

    #[error("energy residual undefined: reference work L_E * (h2 - h1) is zero")]
    UndefinedResidual,

    #[error("refine seed is infeasible")]
    InfeasibleSeed,

    #[error("invalid sample count {0}: need at least {1}")]
    TooFewSamples(usize, usize),

    #[error("invalid search problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;
