//! Numerical Fisher information from Fock-space states.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{reduce_density, reduce_derivative, FockCutoff, FockWorkspace, PhaseParam, SingleModeDensity, TwoModeState};
use crate::error::{Error, Result};
use crate::interferometer::InterferometerConfig;

/// Pairs of eigenvalues with `p_i + p_j` below this are dropped from the SLD sum.
/// A coarser cut (1e-12) biases the sum by ~1e-11 relative, which swamps the
/// truncation error at adequate cutoffs.
pub const SLD_EPS_CUT: f64 = 1e-14;

/// Outcomes with probability below this are dropped from the classical Fisher sum.
pub const CFI_EPS: f64 = 1e-14;

const SENSITIVITY_RTOL: f64 = 1e-4;

fn sensitivity_checked(coarse: f64, fine: f64) -> Result<f64> {
    let scale = coarse.abs().max(fine.abs());
    if scale > 0.0 && (coarse - fine).abs() > SENSITIVITY_RTOL * scale {
        return Err(Error::IllConditioned { coarse, fine });
    }
    Ok(coarse)
}

/// SLD quantum Fisher matrix `F_kl = sum 2 Re(<i|d_k rho|j><j|d_l rho|i>) / (p_i + p_j)`
/// over eigenpairs with `p_i + p_j > eps_cut`.
pub fn sld_qfim(rho: &SingleModeDensity, drhos: &[DMatrix<Complex64>], eps_cut: f64) -> DMatrix<f64> {
    let eig = SymmetricEigen::new(rho.rho.clone());
    let v = &eig.eigenvectors;
    let p = &eig.eigenvalues;
    let rotated: Vec<DMatrix<Complex64>> = drhos.iter().map(|d| v.adjoint() * d * v).collect();
    let n = p.len();
    let mut out = DMatrix::zeros(drhos.len(), drhos.len());
    for i in 0..n {
        for j in 0..n {
            let denom = p[i] + p[j];
            if denom <= eps_cut {
                continue;
            }
            for k in 0..drhos.len() {
                for l in k..drhos.len() {
                    let term = 2.0 * (rotated[k][(i, j)] * rotated[l][(i, j)].conj()).re / denom;
                    out[(k, l)] += term;
                }
            }
        }
    }
    for k in 0..drhos.len() {
        for l in 0..k {
            out[(k, l)] = out[(l, k)];
        }
    }
    out
}

/// Single-parameter SLD QFI, re-run at `SLD_EPS_CUT / 10` to detect
/// sensitivity to the eigenvalue cut.
pub fn sld_qfi(rho: &SingleModeDensity, drho: &DMatrix<Complex64>) -> Result<f64> {
    let drhos = std::slice::from_ref(drho);
    let coarse = sld_qfim(rho, drhos, SLD_EPS_CUT)[(0, 0)];
    let fine = sld_qfim(rho, drhos, 0.1 * SLD_EPS_CUT)[(0, 0)];
    sensitivity_checked(coarse, fine)
}

fn cfi_sum(rho: &SingleModeDensity, drho: &DMatrix<Complex64>, eps: f64) -> f64 {
    (0..rho.dim())
        .filter_map(|n| {
            let p = rho.rho[(n, n)].re;
            (p > eps).then(|| drho[(n, n)].re.powi(2) / p)
        })
        .sum()
}

/// Photon-counting Fisher information of a single-mode density and its derivative.
pub fn classical_fisher_from_density(rho: &SingleModeDensity, drho: &DMatrix<Complex64>) -> Result<f64> {
    sensitivity_checked(cfi_sum(rho, drho, CFI_EPS), cfi_sum(rho, drho, 0.1 * CFI_EPS))
}

/// Fisher information on `theta` of photon counting in output mode `b`.
pub fn classical_fisher_number(cfg: &InterferometerConfig, cutoff: FockCutoff) -> Result<f64> {
    let ws = FockWorkspace::for_config(cfg, cutoff);
    let st = super::check_tail(ws.output_state(cfg.theta(), cfg.phi()))?;
    let dst = ws.derivative_state(cfg.theta(), cfg.phi(), PhaseParam::Theta);
    classical_fisher_from_density(&reduce_density(&st), &reduce_derivative(&st, &dst))
}

/// Pure-state QFI `4(<dPsi|dPsi> - |<Psi|dPsi>|^2)`.
pub fn pure_two_mode_qfi(state: &TwoModeState, dstate: &TwoModeState) -> f64 {
    4.0 * (dstate.norm_sqr() - state.inner(dstate).norm_sqr())
}
