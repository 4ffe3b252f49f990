use thiserror::Error;

/// Error type shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid argument or parameter value.
    #[error("domain error: {0}")]
    Domain(String),

    /// A field does not satisfy the edge-decay (windowing) requirement of the
    /// spectral kernels.
    #[error("windowing error: {0}")]
    Windowing(String),

    /// Grid shape or resolution problem.
    #[error("grid error: {0}")]
    Grid(String),

    /// A probe frequency fell on a one-photon resonance of the level table.
    #[error("one-photon resonance: {0}")]
    Resonance(String),

    /// Adaptive step-size underflow in the density-matrix integrator.
    #[error("stiffness error: {0}")]
    Stiffness(String),

    /// The remapped input time leaves the sampled input field.
    #[error("coverage error: {0}")]
    Coverage(String),

    /// Spectral grid is not commensurate with the Raman frequency.
    #[error("alignment error: {0}")]
    Alignment(String),

    /// Power reached the edge of the sideband comb.
    #[error("comb overflow: {0}")]
    CombOverflow(String),

    /// The adiabatic mixing angle is undefined (zero drive and zero detuning).
    #[error("degenerate state: {0}")]
    Degenerate(String),

    /// Explicit z-stepper would be unstable at the requested step.
    #[error("step-size error: {0}")]
    StepSize(String),

    /// Scenario / configuration validation failure (path-qualified).
    #[error("validation error: {0}")]
    Validation(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
