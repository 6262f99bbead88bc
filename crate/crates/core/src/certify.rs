//! Closed-form vs Fock-oracle certification at desk-scale parameters.

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{
    self, classical_fisher_from_density, pure_two_mode_qfi, reduce_density, reduce_derivative, sld_qfim,
    FockCutoff, FockWorkspace, PhaseParam, SingleModeDensity, SLD_EPS_CUT, TAIL_THRESHOLD,
};
use crate::gaussian::{self, SingleModeGaussian};
use crate::interferometer::{self, InterferometerConfig};
use crate::precision;
use crate::qfim;

/// Largest `|alpha|` at which the oracle is certified.
pub const DESK_ALPHA_MAX: f64 = 2.0;
/// Largest `r` at which the oracle is certified.
pub const DESK_R_MAX: f64 = 0.8;

pub const MOMENT_RTOL: f64 = 1e-8;
pub const PURITY_RTOL: f64 = 1e-6;
pub const QFI_RTOL: f64 = 1e-3;
pub const TWO_MODE_RTOL: f64 = 1e-6;
pub const CROSS_QFIM_RTOL: f64 = 1e-4;
pub const CHAIN_SLACK: f64 = 1e-6;

/// Everything the oracle computes at one working point.
#[derive(Debug, Clone)]
pub struct OraclePoint {
    pub theta: f64,
    pub tail_mass: f64,
    pub density: SingleModeDensity,
    pub mean_photon_number: f64,
    pub photon_number_variance: f64,
    pub moments: SingleModeGaussian,
    pub purity: f64,
    pub qfi_theta: f64,
    pub qfi_phi: f64,
    pub qfi_cross: f64,
    pub cfi: f64,
    pub two_mode_qfi: f64,
}

/// Evaluates the oracle at `(theta, phi)` without the truncation check; the
/// tail mass is reported alongside.
pub fn oracle_point(ws: &FockWorkspace, theta: f64, phi: f64) -> Result<OraclePoint> {
    let state = ws.output_state(theta, phi);
    let d_theta = ws.derivative_state(theta, phi, PhaseParam::Theta);
    let d_phi = ws.derivative_state(theta, phi, PhaseParam::Phi);
    let density = reduce_density(&state);
    let drho_theta = reduce_derivative(&state, &d_theta);
    let drho_phi = reduce_derivative(&state, &d_phi);

    let qfi_theta = fock::sld_qfi(&density, &drho_theta)?;
    let qfim = sld_qfim(&density, &[drho_phi, drho_theta.clone()], SLD_EPS_CUT);
    let cfi = classical_fisher_from_density(&density, &drho_theta)?;

    Ok(OraclePoint {
        theta,
        tail_mass: fock::tail_mass(&state),
        mean_photon_number: density.mean_photon_number(),
        photon_number_variance: density.photon_number_variance(),
        moments: density.gaussian_moments(),
        purity: density.purity(),
        qfi_theta,
        qfi_phi: qfim[(0, 0)],
        qfi_cross: qfim[(0, 1)],
        cfi,
        two_mode_qfi: pure_two_mode_qfi(&state, &d_theta),
        density,
    })
}

/// Relative error, falling back to absolute when the reference vanishes.
pub fn rel_err(value: f64, reference: f64) -> f64 {
    let diff = (value - reference).abs();
    if reference.abs() < 1e-12 {
        diff
    } else {
        diff / reference.abs()
    }
}

fn rel_err_c(value: Complex64, reference: Complex64) -> f64 {
    let diff = (value - reference).norm();
    if reference.norm() < 1e-12 {
        diff
    } else {
        diff / reference.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub theta: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, theta: f64, closed_form: f64, oracle: f64, error: f64, tolerance: f64) -> Self {
        Self { name: name.into(), theta, closed_form, oracle, error, tolerance, passed: error <= tolerance }
    }
}

#[derive(Debug, Clone)]
pub struct CertificationReport {
    pub alpha: Complex64,
    pub r: f64,
    pub phi: f64,
    pub cutoff: FockCutoff,
    pub desk_scale: bool,
    pub checks: Vec<Check>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every oracle-equivalence check at each `theta` in the grid.
pub fn certify(alpha: Complex64, r: f64, phi: f64, cutoff: FockCutoff, thetas: &[f64]) -> Result<CertificationReport> {
    let ws = FockWorkspace::new(alpha, r, cutoff);
    let two_mode = qfim::two_mode_qfi(alpha.norm_sqr(), r);
    let mut checks = Vec::new();
    for &theta in thetas {
        let cfg = InterferometerConfig::new(alpha, r, theta, phi)?;
        let o = oracle_point(&ws, theta, phi)?;
        let closed = gaussian::reduce_to_mode_b(&cfg);
        let lambda = gaussian::symplectic_eigenvalue_of(&cfg);
        let q = qfim::qfim(&cfg);

        checks.push(Check::new("tail_mass", theta, 0.0, o.tail_mass, o.tail_mass, TAIL_THRESHOLD));

        let mean = interferometer::mean_photon_number(&cfg);
        checks.push(Check::new("mean_n", theta, mean, o.mean_photon_number, rel_err(o.mean_photon_number, mean), MOMENT_RTOL));
        let var = interferometer::photon_number_variance(&cfg);
        checks.push(Check::new("var_n", theta, var, o.photon_number_variance, rel_err(o.photon_number_variance, var), MOMENT_RTOL));
        checks.push(Check::new("d", theta, closed.d.norm(), o.moments.d.norm(), rel_err_c(o.moments.d, closed.d), MOMENT_RTOL));
        checks.push(Check::new("c_n", theta, closed.c_n, o.moments.c_n, rel_err(o.moments.c_n, closed.c_n), MOMENT_RTOL));
        checks.push(Check::new("c_a", theta, closed.c_a.norm(), o.moments.c_a.norm(), rel_err_c(o.moments.c_a, closed.c_a), MOMENT_RTOL));
        checks.push(Check::new("purity", theta, 1.0 / lambda, o.purity, rel_err(o.purity, 1.0 / lambda), PURITY_RTOL));

        let q_tt = q.q_theta_theta();
        checks.push(Check::new("qfi_theta", theta, q_tt, o.qfi_theta, rel_err(o.qfi_theta, q_tt), QFI_RTOL));
        let cross_scale = q_tt.max(1e-12);
        checks.push(Check::new("qfi_cross", theta, q.q_phi_theta(), o.qfi_cross, o.qfi_cross.abs() / cross_scale, CROSS_QFIM_RTOL));
        checks.push(Check::new("two_mode_qfi", theta, two_mode, o.two_mode_qfi, rel_err(o.two_mode_qfi, two_mode), TWO_MODE_RTOL));

        // P <= CFI <= QFI <= F0; the reported error is the largest violation.
        let p = if alpha.norm() > 0.0 { precision::error_propagation_precision(&cfg) } else { 0.0 };
        let violation = [p - o.cfi, o.cfi - o.qfi_theta, o.qfi_theta - o.two_mode_qfi].into_iter().fold(0.0, f64::max);
        checks.push(Check::new("chain", theta, p, o.cfi, violation, CHAIN_SLACK));
    }
    Ok(CertificationReport {
        alpha,
        r,
        phi,
        cutoff,
        desk_scale: alpha.norm() <= DESK_ALPHA_MAX && r <= DESK_R_MAX,
        checks,
    })
}
