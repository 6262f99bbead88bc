use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("unphysical state: det(sigma) = {det} < 1")]
    UnphysicalState { det: f64 },

    /// The mixed-state formula was asked to evaluate a (numerically) pure state.
    #[error("state is in the pure region (lambda - 1 = {gap:e}); use the pure-point or pure-limit form")]
    PureStateRegion { gap: f64 },

    #[error("not at a pure point (lambda - 1 = {gap:e})")]
    NotAtPurePoint { gap: f64 },

    #[error("Fock truncation: tail mass {tail_mass:e} exceeds threshold {threshold:e}")]
    Truncation { tail_mass: f64, threshold: f64 },

    #[error("ill-conditioned Fisher sum: {coarse} vs {fine} (cut-off sensitivity)")]
    IllConditioned { coarse: f64, fine: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
