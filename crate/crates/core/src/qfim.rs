//! Quantum Fisher information matrix of the output mode `b` on the
//! parameters `(phi, theta)`.
//!
//! Between the fringes the state is mixed and the QFIM follows from the
//! Williamson decomposition `sigma = lambda S S^dag`:
//!
//! ```text
//! Q^{kl} = 4 lambda^2 / (lambda^2 + 1) Re(J_k^* J_l)
//!        + d_k lambda d_l lambda / (lambda^2 - 1)
//!        + 2 Re(d_k dvec^dag sigma^{-1} d_l dvec)
//! ```
//!
//! with `J_k = S11^* d_k S12 - S12 d_k S11^*`. At the fringes (`theta = 0, pi`)
//! the state is pure and the QFIM jumps: the value at the point and the limit
//! towards it differ by `d_k d_l lambda`, which is `sinh^2 r` for `theta theta`.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::{self, PURE_TOL};
use crate::interferometer::InterferometerConfig;

/// Below this gap `lambda - 1` the mixed-state formula loses precision and the
/// dispatcher switches to the pure-limit form.
pub const SWITCH_TOL: f64 = 1e-7;

/// Distance to a multiple of `pi` within which `theta` counts as sitting
/// exactly on a fringe.
pub const FRINGE_ANGLE_TOL: f64 = 1e-14;

pub const PHI: usize = 0;
pub const THETA: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Mixed,
    PurePoint,
    PureLimit,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Mixed => "Mixed",
            Regime::PurePoint => "PurePoint",
            Regime::PureLimit => "PureLimit",
        })
    }
}

/// Symmetric 2x2 QFIM on `(phi, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfimMatrix {
    pub phi_phi: f64,
    pub phi_theta: f64,
    pub theta_theta: f64,
}

impl QfimMatrix {
    fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        Self { phi_phi: f(PHI, PHI), phi_theta: f(PHI, THETA), theta_theta: f(THETA, THETA) }
    }

    pub fn det(&self) -> f64 {
        self.phi_phi * self.theta_theta - self.phi_theta * self.phi_theta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfimResult {
    pub matrix: QfimMatrix,
    pub regime: Regime,
    /// At an exact fringe: the limiting value approached from the mixed side.
    pub fringe_limit: Option<QfimMatrix>,
}

impl QfimResult {
    pub fn q_phi_phi(&self) -> f64 {
        self.matrix.phi_phi
    }

    pub fn q_phi_theta(&self) -> f64 {
        self.matrix.phi_theta
    }

    pub fn q_theta_theta(&self) -> f64 {
        self.matrix.theta_theta
    }
}

/// Closed-form derivatives of the Gaussian data with respect to `(phi, theta)`.
/// Index 0 is `phi`, index 1 is `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamDerivatives {
    pub sigma: Matrix2<Complex64>,
    pub lambda: f64,
    /// `lambda^2 - 1`, evaluated without cancellation.
    pub lambda_sq_minus_one: f64,
    pub mean: [Complex64; 2],
    pub d_sigma: [Matrix2<Complex64>; 2],
    pub d2_sigma: [[Matrix2<Complex64>; 2]; 2],
    pub d_lambda: [f64; 2],
    pub d2_lambda_theta: f64,
    pub d_mean: [[Complex64; 2]; 2],
    pub s_matrix: Matrix2<Complex64>,
    pub d_s_matrix: [Matrix2<Complex64>; 2],
    pub j: [Complex64; 2],
}

fn hermitian_pair(diag: f64, off: Complex64) -> Matrix2<Complex64> {
    let dg = Complex64::new(diag, 0.0);
    Matrix2::new(dg, off, off.conj(), dg)
}

pub fn param_derivatives(cfg: &InterferometerConfig) -> ParamDerivatives {
    let r = cfg.r();
    let (ch, sh) = (r.cosh(), r.sinh());
    let sh2 = sh * sh;
    let (sin_t, cos_t) = cfg.theta().sin_cos();
    let (s, c) = (cfg.s(), cfg.c());
    let e_phi = Complex64::from_polar(1.0, cfg.phi());
    let i = Complex64::i();

    let state = gaussian::reduce_to_mode_b(cfg);
    let sigma = state.sigma();

    // mean field d = i alpha e^{i phi/2} sin(theta/2)
    let half_phase = Complex64::from_polar(1.0, 0.5 * cfg.phi());
    let d = state.d;
    let dd_phi = 0.5 * i * d;
    let dd_theta = i * cfg.alpha() * half_phase * (0.5 * c);

    // C_N = (1 + cos t) sh^2 / 2,  C_A = e^{i phi} g(t),  g = -(1 + cos t) ch sh / 2
    let cn_t = -0.5 * sin_t * sh2;
    let cn_tt = -0.5 * cos_t * sh2;
    let g = -0.5 * (1.0 + cos_t) * ch * sh;
    let g_t = 0.5 * sin_t * ch * sh;
    let g_tt = 0.5 * cos_t * ch * sh;

    let d_sigma_phi = hermitian_pair(0.0, 2.0 * i * e_phi * g);
    let d_sigma_theta = hermitian_pair(2.0 * cn_t, 2.0 * e_phi * g_t);
    let d2_phi_phi = hermitian_pair(0.0, -2.0 * e_phi * g);
    let d2_phi_theta = hermitian_pair(0.0, 2.0 * i * e_phi * g_t);
    let d2_theta_theta = hermitian_pair(2.0 * cn_tt, 2.0 * e_phi * g_tt);

    let lambda_sq_minus_one = (sin_t * sh).powi(2);
    let lambda = (1.0 + lambda_sq_minus_one).sqrt();
    let lambda_t = sin_t * cos_t * sh2 / lambda;
    let lambda_tt = ((2.0 * cfg.theta()).cos() * sh2 - lambda_t * lambda_t) / lambda;

    // r_out = [ln f - ln lambda] / 2,  f = s^2 + e^{2r} c^2
    let e2r = (2.0 * r).exp();
    let f = s * s + e2r * c * c;
    let f_t = 0.5 * sin_t * (1.0 - e2r);
    let r_out = 0.5 * (f / lambda).ln();
    let r_out_t = 0.5 * (f_t / f - lambda_t / lambda);

    let s_matrix = gaussian::symplectic_matrix(r_out, cfg.phi());
    let s11 = s_matrix[(0, 0)];
    let s12 = s_matrix[(0, 1)];
    let ds11 = [Complex64::new(0.0, 0.0), Complex64::new(r_out.sinh() * r_out_t, 0.0)];
    let ds12 = [i * s12, -e_phi * (r_out.cosh() * r_out_t)];
    let d_s = |k: usize| Matrix2::new(ds11[k], ds12[k], ds12[k].conj(), ds11[k].conj());
    let j = [0, 1].map(|k| s11.conj() * ds12[k] - s12 * ds11[k].conj());

    ParamDerivatives {
        sigma,
        lambda,
        lambda_sq_minus_one,
        mean: state.mean_vector(),
        d_sigma: [d_sigma_phi, d_sigma_theta],
        d2_sigma: [[d2_phi_phi, d2_phi_theta], [d2_phi_theta, d2_theta_theta]],
        d_lambda: [0.0, lambda_t],
        d2_lambda_theta: lambda_tt,
        d_mean: [[dd_phi, dd_phi.conj()], [dd_theta, dd_theta.conj()]],
        s_matrix,
        d_s_matrix: [d_s(0), d_s(1)],
        j,
    }
}

fn inverse(m: &Matrix2<Complex64>) -> Matrix2<Complex64> {
    // sigma is Hermitian positive definite with det >= 1.
    m.try_inverse().expect("covariance matrix is invertible")
}

/// `2 Re(d_k dvec^dag sigma^{-1} d_l dvec)`
fn mean_term(der: &ParamDerivatives, sigma_inv: &Matrix2<Complex64>, k: usize, l: usize) -> f64 {
    let u = der.d_mean[k];
    let v = der.d_mean[l];
    let mut acc = Complex64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            acc += u[a].conj() * sigma_inv[(a, b)] * v[b];
        }
    }
    2.0 * acc.re
}

fn gap(der: &ParamDerivatives) -> f64 {
    der.lambda_sq_minus_one / (der.lambda + 1.0)
}

/// Mixed-state QFIM; valid strictly between the fringes.
pub fn qfim_mixed(cfg: &InterferometerConfig) -> Result<QfimResult> {
    let der = param_derivatives(cfg);
    let gap = gap(&der);
    if gap <= SWITCH_TOL {
        return Err(Error::PureStateRegion { gap });
    }
    let sigma_inv = inverse(&der.sigma);
    let l2 = der.lambda * der.lambda;
    let coeff = 4.0 * l2 / (l2 + 1.0);
    let matrix = QfimMatrix::from_fn(|k, l| {
        coeff * (der.j[k].conj() * der.j[l]).re
            + der.d_lambda[k] * der.d_lambda[l] / der.lambda_sq_minus_one
            + mean_term(&der, &sigma_inv, k, l)
    });
    Ok(QfimResult { matrix, regime: Regime::Mixed, fringe_limit: None })
}

fn trace_term(der: &ParamDerivatives, sigma_inv: &Matrix2<Complex64>, k: usize, l: usize) -> f64 {
    (sigma_inv * der.d_sigma[k] * sigma_inv * der.d_sigma[l]).trace().re
}

fn pure_point_matrix(der: &ParamDerivatives) -> QfimMatrix {
    let sigma_inv = inverse(&der.sigma);
    QfimMatrix::from_fn(|k, l| 0.25 * trace_term(der, &sigma_inv, k, l) + mean_term(der, &sigma_inv, k, l))
}

fn pure_limit_matrix(der: &ParamDerivatives) -> QfimMatrix {
    let sigma_inv = inverse(&der.sigma);
    QfimMatrix::from_fn(|k, l| {
        let second = (sigma_inv * der.d2_sigma[k][l]).trace().re;
        0.25 * (2.0 * second - trace_term(der, &sigma_inv, k, l)) + mean_term(der, &sigma_inv, k, l)
    })
}

/// QFIM of the exactly pure state at a fringe.
pub fn qfim_pure_point(cfg: &InterferometerConfig) -> Result<QfimResult> {
    let der = param_derivatives(cfg);
    let gap = gap(&der);
    if gap.abs() > PURE_TOL {
        return Err(Error::NotAtPurePoint { gap });
    }
    Ok(QfimResult { matrix: pure_point_matrix(&der), regime: Regime::PurePoint, fringe_limit: None })
}

/// Limit of the QFIM as `theta` approaches a fringe from the mixed side.
pub fn qfim_pure_limit(cfg: &InterferometerConfig) -> Result<QfimResult> {
    let der = param_derivatives(cfg);
    let gap = gap(&der);
    if gap.abs() > SWITCH_TOL {
        return Err(Error::NotAtPurePoint { gap });
    }
    Ok(QfimResult { matrix: pure_limit_matrix(&der), regime: Regime::PureLimit, fringe_limit: None })
}

/// True when `theta` is within [`FRINGE_ANGLE_TOL`] of a multiple of `pi`.
pub fn at_fringe(theta: f64) -> bool {
    let pi = std::f64::consts::PI;
    (theta - (theta / pi).round() * pi).abs() <= FRINGE_ANGLE_TOL
}

/// QFIM with regime dispatch.
///
/// At an exact fringe the primary value is the pure-point QFIM and the
/// limiting value is attached as `fringe_limit`.
pub fn qfim(cfg: &InterferometerConfig) -> QfimResult {
    let der = param_derivatives(cfg);
    if gap(&der) > SWITCH_TOL {
        return qfim_mixed(cfg).expect("gap checked above");
    }
    if at_fringe(cfg.theta()) {
        return QfimResult {
            matrix: pure_point_matrix(&der),
            regime: Regime::PurePoint,
            fringe_limit: Some(pure_limit_matrix(&der)),
        };
    }
    QfimResult { matrix: pure_limit_matrix(&der), regime: Regime::PureLimit, fringe_limit: None }
}

/// The continuous branch of the `theta theta` QFI: the mixed-state value
/// between fringes and the limiting value at them.
pub fn qfi_theta_continuous(cfg: &InterferometerConfig) -> f64 {
    let q = qfim(cfg);
    q.fringe_limit.unwrap_or(q.matrix).theta_theta
}

/// Two-mode readout QFI on `theta`: `|alpha|^2 e^{2r} + sinh^2 r`.
pub fn two_mode_qfi(alpha_sq: f64, r: f64) -> f64 {
    alpha_sq * (2.0 * r).exp() + r.sinh().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg(alpha_abs: f64, r: f64, theta: f64, phi: f64) -> InterferometerConfig {
        InterferometerConfig::with_imaginary_alpha(alpha_abs, r, theta, phi).unwrap()
    }

    /// Central differences of the closed-form Gaussian data, step 1e-5.
    mod fd {
        use super::*;
        pub const H: f64 = 1e-5;

        pub fn shift(c: &InterferometerConfig, k: usize, h: f64) -> InterferometerConfig {
            if k == PHI {
                c.with_phi(c.phi() + h).unwrap()
            } else {
                c.with_theta(c.theta() + h).unwrap()
            }
        }

        pub fn diff<T, F>(c: &InterferometerConfig, k: usize, f: F) -> T
        where
            F: Fn(&InterferometerConfig) -> T,
            T: std::ops::Sub<Output = T> + std::ops::Mul<Complex64, Output = T>,
        {
            (f(&shift(c, k, H)) - f(&shift(c, k, -H))) * Complex64::new(0.5 / H, 0.0)
        }
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn matrix_rel(a: &Matrix2<Complex64>, b: &Matrix2<Complex64>) -> f64 {
        let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let c = cfg(1.2, 0.5, 0.8, 0.3);
        let der = param_derivatives(&c);
        for k in [PHI, THETA] {
            let sigma_fd = fd::diff(&c, k, |x| gaussian::reduce_to_mode_b(x).sigma());
            assert!(matrix_rel(&der.d_sigma[k], &sigma_fd) < 1e-6, "d_sigma[{k}]");

            let d_fd = fd::diff(&c, k, |x| gaussian::reduce_to_mode_b(x).d);
            assert!(rel(der.d_mean[k][0], d_fd) < 1e-6, "d_mean[{k}]");

            let s_fd = fd::diff(&c, k, |x| gaussian::williamson(x).s_matrix);
            assert!(matrix_rel(&der.d_s_matrix[k], &s_fd) < 1e-6, "d_S[{k}]");

            for l in [PHI, THETA] {
                let d2_fd = fd::diff(&c, l, |x| param_derivatives(x).d_sigma[k]);
                assert!(matrix_rel(&der.d2_sigma[k][l], &d2_fd) < 1e-6, "d2_sigma[{k}][{l}]");
            }
        }
        let lam_fd = fd::diff(&c, THETA, |x| Complex64::new(gaussian::symplectic_eigenvalue_of(x), 0.0)).re;
        assert_relative_eq!(der.d_lambda[THETA], lam_fd, max_relative = 1e-6);
        let lam_tt_fd = fd::diff(&c, THETA, |x| Complex64::new(param_derivatives(x).d_lambda[THETA], 0.0)).re;
        assert_relative_eq!(der.d2_lambda_theta, lam_tt_fd, max_relative = 1e-6);
        assert_eq!(der.d_lambda[PHI], 0.0);

        let j_fd = |k: usize| {
            let ds = fd::diff(&c, k, |x| gaussian::williamson(x).s_matrix);
            der.s_matrix[(0, 0)].conj() * ds[(0, 1)] - der.s_matrix[(0, 1)] * ds[(0, 0)].conj()
        };
        for k in [PHI, THETA] {
            assert!(rel(der.j[k], j_fd(k)) < 1e-6, "J[{k}]");
        }
    }

    #[test]
    fn stationary_lambda_at_quarter_turn() {
        let der = param_derivatives(&cfg(1.0, 1.0, PI / 2.0, 0.0));
        assert!(der.d_lambda[THETA].abs() < 1e-15);
        assert_eq!(der.d_lambda[PHI], 0.0);
    }

    #[test]
    fn second_derivative_of_lambda_at_fringes() {
        for theta in [0.0, PI] {
            let der = param_derivatives(&cfg(1.0, 0.7, theta, 0.0));
            assert_relative_eq!(der.d2_lambda_theta, 0.7_f64.sinh().powi(2), max_relative = 1e-14);
        }
    }

    #[test]
    fn black_fringe_values() {
        for (alpha_sq, r) in [(100.0_f64, 1.0_f64), (1e3, 0.5), (2.0, 0.0)] {
            let c = cfg(alpha_sq.sqrt(), r, 0.0, 0.0);
            let q0 = qfim_pure_point(&c).unwrap().q_theta_theta();
            let q0p = qfim_pure_limit(&c).unwrap().q_theta_theta();
            assert_relative_eq!(q0, alpha_sq * (2.0 * r).exp(), max_relative = 1e-12);
            assert_relative_eq!(q0p, alpha_sq * (2.0 * r).exp() + r.sinh().powi(2), max_relative = 1e-12);
        }
        let c = cfg(10.0, 1.0, 0.0, 0.0);
        assert_relative_eq!(qfim_pure_point(&c).unwrap().q_theta_theta(), 738.905_609_893_065, max_relative = 1e-12);
        assert_relative_eq!(qfim_pure_limit(&c).unwrap().q_theta_theta(), 740.2867077386068, max_relative = 1e-12);
    }

    #[test]
    fn squeezed_vacuum_phase_sensitivity_at_black_fringe() {
        // Rotating squeezed vacuum by phi/2: QFI = 4 Var(n) / 4 = sinh^2(2r) / 2.
        let r = 0.6_f64;
        let q = qfim_pure_point(&cfg(1.0, r, 0.0, 0.2)).unwrap();
        assert_relative_eq!(q.q_phi_phi(), 0.5 * (2.0 * r).sinh().powi(2), max_relative = 1e-12);
    }

    #[test]
    fn sql_without_squeezing() {
        for theta in [0.3, 1.0, 2.0] {
            let c = cfg(10.0, 0.0, theta, 0.0);
            let q = qfim(&c);
            assert_eq!(q.regime, Regime::PureLimit);
            assert_relative_eq!(q.q_theta_theta(), 100.0 * (0.5 * theta).cos().powi(2), max_relative = 1e-12);
        }
    }

    #[test]
    fn mixed_rejects_pure_region() {
        assert!(matches!(qfim_mixed(&cfg(1.0, 0.5, 0.0, 0.0)), Err(Error::PureStateRegion { .. })));
        assert!(matches!(qfim_mixed(&cfg(1.0, 0.0, 0.8, 0.0)), Err(Error::PureStateRegion { .. })));
        assert!(matches!(qfim_pure_point(&cfg(1.0, 0.5, 0.8, 0.0)), Err(Error::NotAtPurePoint { .. })));
        assert!(matches!(qfim_pure_limit(&cfg(1.0, 0.5, 0.8, 0.0)), Err(Error::NotAtPurePoint { .. })));
    }

    #[test]
    #[allow(clippy::approx_constant)] // the CLI-style literal, deliberately short of pi
    fn dispatch() {
        let c = cfg(10.0, 1.0, 0.0, 0.0);
        let q = qfim(&c);
        assert_eq!(q.regime, Regime::PurePoint);
        assert_relative_eq!(q.q_theta_theta(), 100.0 * 2.0_f64.exp(), max_relative = 1e-12);
        assert_relative_eq!(q.fringe_limit.unwrap().theta_theta, two_mode_qfi(100.0, 1.0), max_relative = 1e-12);

        assert_eq!(qfim(&cfg(1.0, 0.5, 0.5, 0.0)).regime, Regime::Mixed);

        let near = qfim(&cfg(1.2, 0.5, 1e-12, 0.0));
        assert_eq!(near.regime, Regime::PureLimit);
        assert_relative_eq!(near.q_theta_theta(), two_mode_qfi(1.44, 0.5), max_relative = 1e-6);

        let white = qfim(&cfg(10.0, 1.0, 3.14159265358979, 0.0));
        assert_eq!(white.regime, Regime::PurePoint);
        assert!(at_fringe(-PI) && at_fringe(2.0 * PI) && !at_fringe(1e-12));
    }

    #[test]
    fn white_fringe_limit() {
        let r = 0.8_f64;
        let q = qfim(&cfg(3.0, r, PI, 0.0));
        assert!(q.q_theta_theta().abs() < 1e-12);
        assert_relative_eq!(q.fringe_limit.unwrap().theta_theta, r.sinh().powi(2), max_relative = 1e-12);
    }

    #[test]
    fn two_mode_examples() {
        assert_relative_eq!(two_mode_qfi(0.0, 0.7), 0.7_f64.sinh().powi(2), max_relative = 1e-15);
        assert_eq!(two_mode_qfi(5.0, 0.0), 5.0);
    }

    #[test]
    fn mixed_converges_to_limit() {
        // Q(theta) = Q_0+ + a theta^2 + O(theta^4); two Richardson levels.
        let (alpha_sq, r) = (100.0_f64, 1.0_f64);
        let q = |t: f64| qfim_mixed(&cfg(alpha_sq.sqrt(), r, t, 0.0)).unwrap().q_theta_theta();
        let (h0, h1, h2) = (q(1e-2), q(5e-3), q(2.5e-3));
        let r1 = (4.0 * h1 - h0) / 3.0;
        let r2 = (4.0 * h2 - h1) / 3.0;
        let extrapolated = (16.0 * r2 - r1) / 15.0;
        assert_relative_eq!(extrapolated, two_mode_qfi(alpha_sq, r), max_relative = 1e-6);
    }

    proptest! {
        #[test]
        fn decoupled_and_psd(r in 0.0..1.5f64, theta in -3.2..3.2f64, phi in -3.2..3.2f64, a in 0.1..30.0f64) {
            let q = qfim(&cfg(a, r, theta, phi));
            prop_assert!(q.q_phi_theta().abs() < 1e-10);
            prop_assert!(q.q_phi_phi() >= -1e-12);
            prop_assert!(q.q_theta_theta() >= -1e-12);
            prop_assert!(q.matrix.det() >= -1e-9);
        }

        #[test]
        fn bounded_by_two_mode(r in 0.0..1.5f64, theta in 0.01..3.13f64, a in 0.1..30.0f64) {
            let q = qfim(&cfg(a, r, theta, 0.0)).q_theta_theta();
            prop_assert!(q <= two_mode_qfi(a * a, r) * (1.0 + 1e-12) + 1e-9);
        }

        #[test]
        fn jump_is_sinh_squared(r in 0.0..1.5f64, a in 0.1..30.0f64, phi in -3.0..3.0f64) {
            let c = cfg(a, r, 0.0, phi);
            let q0 = qfim_pure_point(&c).unwrap().q_theta_theta();
            let q0p = qfim_pure_limit(&c).unwrap().q_theta_theta();
            prop_assert!((q0p - q0 - r.sinh().powi(2)).abs() < 1e-9);
            prop_assert!((q0p - two_mode_qfi(a * a, r)).abs() <= 1e-12 * q0p);
        }
    }
}
