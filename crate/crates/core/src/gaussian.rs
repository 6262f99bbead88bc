//! Reduced Gaussian state of the output mode `b` and its Williamson
//! decomposition.
//!
//! The covariance matrix uses the complex (annihilation/creation ordered)
//! convention in which the vacuum has `sigma = I`:
//!
//! ```text
//! sigma = | 1 + 2 C_N    2 C_A    |
//!         | 2 C_A^*      1 + 2 C_N |
//! ```
//!
//! with `C_N = <db^dag db>` and `C_A = <db db>` the central moments. For a
//! single mode the purity is `1 / lambda` with `lambda = sqrt(det sigma)`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::interferometer::InterferometerConfig;

/// `|lambda - 1|` below which a state counts as pure.
pub const PURE_TOL: f64 = 1e-9;

/// Slack allowed on the uncertainty bound `det sigma >= 1`.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleModeGaussian {
    /// Mean field `<b>`.
    pub d: Complex64,
    /// Normal central moment `<db^dag db>`.
    pub c_n: f64,
    /// Anomalous central moment `<db db>`.
    pub c_a: Complex64,
}

impl SingleModeGaussian {
    pub fn new(d: Complex64, c_n: f64, c_a: Complex64) -> Self {
        Self { d, c_n, c_a }
    }

    pub fn sigma(&self) -> Matrix2<Complex64> {
        let diag = Complex64::new(1.0 + 2.0 * self.c_n, 0.0);
        Matrix2::new(diag, 2.0 * self.c_a, 2.0 * self.c_a.conj(), diag)
    }

    pub fn det_sigma(&self) -> f64 {
        (1.0 + 2.0 * self.c_n).powi(2) - 4.0 * self.c_a.norm_sqr()
    }

    /// `(d, d^*)`
    pub fn mean_vector(&self) -> [Complex64; 2] {
        [self.d, self.d.conj()]
    }
}

/// Mean field and central moments of `b_out`.
///
/// For the conventional amplitude `alpha = -i|alpha|` the mean field is
/// `|alpha| e^{i phi/2} sin(theta/2)`; for general `alpha` it is
/// `i alpha e^{i phi/2} sin(theta/2)`. The second moments do not depend on
/// `alpha`.
pub fn reduce_to_mode_b(cfg: &InterferometerConfig) -> SingleModeGaussian {
    let r = cfg.r();
    let half_phi = Complex64::from_polar(1.0, 0.5 * cfg.phi());
    let one_plus_cos = 1.0 + cfg.theta().cos();
    SingleModeGaussian {
        d: Complex64::i() * cfg.alpha() * half_phi * cfg.s(),
        c_n: 0.5 * one_plus_cos * r.sinh().powi(2),
        c_a: Complex64::from_polar(-0.5 * one_plus_cos * r.cosh() * r.sinh(), cfg.phi()),
    }
}

/// `sqrt(det sigma)`, clamped to 1 when rounding pushes a pure state below it.
pub fn symplectic_eigenvalue(state: &SingleModeGaussian) -> Result<f64> {
    let det = state.det_sigma();
    if !(det >= 1.0 - PHYSICALITY_TOL) {
        return Err(Error::UnphysicalState { det });
    }
    Ok(det.max(1.0).sqrt())
}

/// `sqrt(1 + sin^2(theta) sinh^2(r))`
pub fn symplectic_eigenvalue_of(cfg: &InterferometerConfig) -> f64 {
    (1.0 + (cfg.theta().sin() * cfg.r().sinh()).powi(2)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Purity {
    pub value: f64,
    pub is_pure: bool,
}

pub fn purity(state: &SingleModeGaussian) -> Result<Purity> {
    let lambda = symplectic_eigenvalue(state)?;
    Ok(Purity { value: 1.0 / lambda, is_pure: (lambda - 1.0).abs() < PURE_TOL })
}

/// `sigma = lambda * S * S^dag` with `S = [[cosh r_out, -e^{i phi} sinh r_out],
/// [-e^{-i phi} sinh r_out, cosh r_out]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilliamsonDecomp {
    pub lambda: f64,
    pub s_matrix: Matrix2<Complex64>,
    pub r_out: f64,
    pub phi: f64,
}

impl WilliamsonDecomp {
    fn from_parts(lambda: f64, r_out: f64, phi: f64) -> Self {
        Self { lambda, s_matrix: symplectic_matrix(r_out, phi), r_out, phi }
    }

    pub fn reconstruct(&self) -> Matrix2<Complex64> {
        self.s_matrix * self.s_matrix.adjoint() * Complex64::new(self.lambda, 0.0)
    }
}

pub(crate) fn symplectic_matrix(r_out: f64, phi: f64) -> Matrix2<Complex64> {
    let ch = Complex64::new(r_out.cosh(), 0.0);
    let sh = r_out.sinh();
    Matrix2::new(ch, Complex64::from_polar(-sh, phi), Complex64::from_polar(-sh, -phi), ch)
}

/// `diag(1, -1)`
pub fn symplectic_form() -> Matrix2<Complex64> {
    Matrix2::new(
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(-1.0, 0.0),
    )
}

/// Output squeezing `r_out = 1/2 ln[(sin^2(theta/2) + e^{2r} cos^2(theta/2)) / lambda]`.
pub fn output_squeezing(cfg: &InterferometerConfig) -> f64 {
    let (s, c) = (cfg.s(), cfg.c());
    let f = s * s + (2.0 * cfg.r()).exp() * c * c;
    0.5 * (f / symplectic_eigenvalue_of(cfg)).ln()
}

/// Closed-form Williamson decomposition of the mode-`b` covariance.
pub fn williamson(cfg: &InterferometerConfig) -> WilliamsonDecomp {
    WilliamsonDecomp::from_parts(symplectic_eigenvalue_of(cfg), output_squeezing(cfg), cfg.phi())
}

/// Williamson decomposition of an arbitrary single-mode covariance of the
/// `[[a, b], [b^*, a]]` form, e.g. one extracted from a Fock-space state.
///
/// A state without second-moment excess (`c_n = c_a = 0`) yields the
/// identity symplectic matrix and `r_out = 0`.
pub fn williamson_generic(state: &SingleModeGaussian) -> Result<WilliamsonDecomp> {
    let lambda = symplectic_eigenvalue(state)?;
    let b = state.c_a.norm();
    if b == 0.0 {
        return Ok(WilliamsonDecomp::from_parts(lambda, 0.0, 0.0));
    }
    // sigma_12 = -lambda e^{i phi} sinh(2 r_out)
    let phi = (-state.c_a).arg();
    let r_out = 0.5 * (2.0 * b / lambda).asinh();
    Ok(WilliamsonDecomp::from_parts(lambda, r_out, phi))
}
