//! Quantum limits of phase estimation in a Mach-Zehnder interferometer fed
//! with coherent light and squeezed vacuum, read out through a single output
//! mode.
//!
//! - [`interferometer`]: configuration and photon-number statistics of mode `b`.
//! - [`gaussian`]: reduced Gaussian state and its Williamson decomposition.
//! - [`qfim`]: quantum Fisher information matrix on `(phi, theta)`.
//! - [`precision`]: photon-counting (error propagation) precision.
//! - [`fock`]: truncated Fock-space oracle for all of the above.
//! - [`certify`]: oracle-vs-closed-form equivalence checks.

pub mod certify;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod interferometer;
pub mod precision;
pub mod qfim;

pub use error::{Error, Result};
pub use interferometer::InterferometerConfig;
pub use num_complex::Complex64;
