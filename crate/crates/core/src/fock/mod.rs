//! Brute-force oracle in a truncated two-mode Fock space.
//!
//! The output state is built by applying displacement, squeezing, beam
//! splitter, arm phases and the inverse beam splitter to `|0,0>`, each as the
//! matrix exponential of its truncated generator. Nothing here uses the
//! Gaussian closed forms, so the results serve as an independent check of them.
//!
//! Amplitudes are stored as a `D x D` matrix indexed `[n_a, n_b]`.

mod fisher;

pub use fisher::{
    classical_fisher_from_density, classical_fisher_number, pure_two_mode_qfi, sld_qfi, sld_qfim, CFI_EPS,
    SLD_EPS_CUT,
};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::SingleModeGaussian;
use crate::interferometer::InterferometerConfig;

/// Tail mass above which a state is reported as truncated.
pub const TAIL_THRESHOLD: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct FockCutoff(usize);

impl FockCutoff {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig(format!("Fock cutoff must be >= 2, got {dim}")));
        }
        Ok(Self(dim))
    }

    /// `ceil(|alpha|^2 + 6|alpha| + 10 sinh^2 r + 15)`
    pub fn heuristic(alpha_abs: f64, r: f64) -> Self {
        let d = alpha_abs * alpha_abs + 6.0 * alpha_abs + 10.0 * r.sinh().powi(2) + 15.0;
        Self(d.ceil() as usize)
    }

    pub fn dim(&self) -> usize {
        self.0
    }
}

/// Which phase a derivative is taken with respect to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseParam {
    Phi,
    Theta,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    pub amplitudes: DMatrix<Complex64>,
}

impl TwoModeState {
    pub fn dim(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        self.amplitudes.iter().zip(other.amplitudes.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn tail_mass(&self) -> f64 {
        tail_mass(self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleModeDensity {
    pub rho: DMatrix<Complex64>,
}

impl SingleModeDensity {
    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `Tr(rho^2)`
    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    pub fn expect(&self, op: &DMatrix<Complex64>) -> Complex64 {
        (&self.rho * op).trace()
    }

    /// Mean field and central second moments `<db^dag db>`, `<db db>`.
    pub fn gaussian_moments(&self) -> SingleModeGaussian {
        let b = annihilation(self.dim());
        let d = self.expect(&b);
        let n = self.expect(&(b.adjoint() * &b)).re;
        let bb = self.expect(&(&b * &b));
        SingleModeGaussian::new(d, n - d.norm_sqr(), bb - d * d)
    }

    pub fn mean_photon_number(&self) -> f64 {
        (0..self.dim()).map(|n| n as f64 * self.rho[(n, n)].re).sum()
    }

    pub fn photon_number_variance(&self) -> f64 {
        let mean = self.mean_photon_number();
        (0..self.dim()).map(|n| (n as f64 - mean).powi(2) * self.rho[(n, n)].re).sum()
    }
}

/// Truncated annihilation operator, `b|n> = sqrt(n)|n-1>`.
pub fn annihilation(dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |m, n| if n == m + 1 { Complex64::new((n as f64).sqrt(), 0.0) } else { ZERO })
}

/// One total-photon-number sector of the beam splitter.
#[derive(Debug, Clone)]
struct BeamSplitterBlock {
    /// `(n_a, n_b)` pairs spanning the sector, ordered by `n_a`.
    basis: Vec<(usize, usize)>,
    unitary: DMatrix<Complex64>,
}

fn beam_splitter_blocks(dim: usize) -> Vec<BeamSplitterBlock> {
    (0..=2 * (dim - 1))
        .map(|total| {
            let lo = total.saturating_sub(dim - 1);
            let hi = total.min(dim - 1);
            let basis: Vec<(usize, usize)> = (lo..=hi).map(|na| (na, total - na)).collect();
            let size = basis.len();
            // generator (pi/4)(a^dag b - a b^dag) restricted to the sector
            let mut gen = DMatrix::from_element(size, size, ZERO);
            for j in 0..size.saturating_sub(1) {
                let (na, nb) = basis[j];
                let amp = ((na + 1) as f64 * nb as f64).sqrt() * std::f64::consts::FRAC_PI_4;
                gen[(j + 1, j)] = Complex64::new(amp, 0.0);
                gen[(j, j + 1)] = Complex64::new(-amp, 0.0);
            }
            BeamSplitterBlock { basis, unitary: gen.exp() }
        })
        .collect()
}

/// Cached operators for fixed `(cutoff, alpha, r)`; the phases vary per call.
#[derive(Debug, Clone)]
pub struct FockWorkspace {
    cutoff: FockCutoff,
    alpha: Complex64,
    r: f64,
    /// `S D |0,0>`
    prepared: DMatrix<Complex64>,
    blocks: Vec<BeamSplitterBlock>,
}

impl FockWorkspace {
    pub fn new(alpha: Complex64, r: f64, cutoff: FockCutoff) -> Self {
        let dim = cutoff.dim();
        let a = annihilation(dim);
        let adag = a.adjoint();
        let displacement = (&adag * alpha - &a * alpha.conj()).exp();
        let squeeze = ((&a * &a - &adag * &adag) * Complex64::new(0.5 * r, 0.0)).exp();
        let mode_a = displacement.column(0).into_owned();
        let mode_b = squeeze.column(0).into_owned();
        let prepared = &mode_a * mode_b.transpose();
        Self { cutoff, alpha, r, prepared, blocks: beam_splitter_blocks(dim) }
    }

    pub fn for_config(cfg: &InterferometerConfig, cutoff: FockCutoff) -> Self {
        Self::new(cfg.alpha(), cfg.r(), cutoff)
    }

    pub fn cutoff(&self) -> FockCutoff {
        self.cutoff
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// The input state `S D |0,0>` before the interferometer.
    pub fn input_state(&self) -> TwoModeState {
        TwoModeState { amplitudes: self.prepared.clone() }
    }

    fn apply_beam_splitter(&self, amps: &DMatrix<Complex64>, adjoint: bool) -> DMatrix<Complex64> {
        let mut out = DMatrix::from_element(amps.nrows(), amps.ncols(), ZERO);
        for block in &self.blocks {
            for (row, &(na, nb)) in block.basis.iter().enumerate() {
                let mut acc = ZERO;
                for (col, &(ma, mb)) in block.basis.iter().enumerate() {
                    let u = if adjoint { block.unitary[(col, row)].conj() } else { block.unitary[(row, col)] };
                    acc += u * amps[(ma, mb)];
                }
                out[(na, nb)] = acc;
            }
        }
        out
    }

    /// `e^{iG} T S D |0,0>`, the state inside the interferometer after the arm phases.
    fn inside(&self, theta: f64, phi: f64) -> DMatrix<Complex64> {
        let (theta_a, theta_b) = (0.5 * (phi + theta), 0.5 * (phi - theta));
        let mut amps = self.apply_beam_splitter(&self.prepared, false);
        for ((na, nb), z) in indexed_mut(&mut amps) {
            *z *= Complex64::from_polar(1.0, theta_a * na as f64 + theta_b * nb as f64);
        }
        amps
    }

    /// Output state without the truncation check.
    pub fn output_state(&self, theta: f64, phi: f64) -> TwoModeState {
        let inside = self.inside(theta, phi);
        TwoModeState { amplitudes: self.apply_beam_splitter(&inside, true) }
    }

    /// `d|Psi>/d theta` or `d|Psi>/d phi`, from the phase generator
    /// `(i/2)(n_a -/+ n_b)` inserted between the arm phases and the second beam splitter.
    pub fn derivative_state(&self, theta: f64, phi: f64, param: PhaseParam) -> TwoModeState {
        let mut inside = self.inside(theta, phi);
        for ((na, nb), z) in indexed_mut(&mut inside) {
            let weight = match param {
                PhaseParam::Theta => na as f64 - nb as f64,
                PhaseParam::Phi => na as f64 + nb as f64,
            };
            *z *= Complex64::new(0.0, 0.5 * weight);
        }
        TwoModeState { amplitudes: self.apply_beam_splitter(&inside, true) }
    }
}

fn indexed_mut(m: &mut DMatrix<Complex64>) -> impl Iterator<Item = ((usize, usize), &mut Complex64)> {
    let nrows = m.nrows();
    // column-major storage
    m.iter_mut().enumerate().map(move |(k, z)| ((k % nrows, k / nrows), z))
}

fn check_tail(state: TwoModeState) -> Result<TwoModeState> {
    let tail_mass = tail_mass(&state);
    if tail_mass > TAIL_THRESHOLD {
        return Err(Error::Truncation { tail_mass, threshold: TAIL_THRESHOLD });
    }
    Ok(state)
}

/// Output state `T^dag e^{iG} T S D |0,0>`; fails when the tail mass exceeds
/// [`TAIL_THRESHOLD`].
pub fn build_output_state(cfg: &InterferometerConfig, cutoff: FockCutoff) -> Result<TwoModeState> {
    check_tail(FockWorkspace::for_config(cfg, cutoff).output_state(cfg.theta(), cfg.phi()))
}

pub fn derivative_state_theta(cfg: &InterferometerConfig, cutoff: FockCutoff) -> Result<TwoModeState> {
    let ws = FockWorkspace::for_config(cfg, cutoff);
    check_tail(ws.output_state(cfg.theta(), cfg.phi()))?;
    Ok(ws.derivative_state(cfg.theta(), cfg.phi(), PhaseParam::Theta))
}

/// Partial trace over mode `a`: `rho_b[m, n] = sum_k A[k, m] A[k, n]^*`.
pub fn reduce_density(state: &TwoModeState) -> SingleModeDensity {
    let a = &state.amplitudes;
    SingleModeDensity { rho: a.transpose() * a.conjugate() }
}

/// `Tr_a(|dPsi><Psi| + |Psi><dPsi|)`
pub fn reduce_derivative(state: &TwoModeState, dstate: &TwoModeState) -> DMatrix<Complex64> {
    let a = &state.amplitudes;
    let da = &dstate.amplitudes;
    let half = da.transpose() * a.conjugate();
    &half + half.adjoint()
}

/// `1 - <Psi|Psi>` plus the probability in the top two Fock levels of either mode.
pub fn tail_mass(state: &TwoModeState) -> f64 {
    let dim = state.dim();
    let edge = dim.saturating_sub(2);
    let lost = (1.0 - state.norm_sqr()).max(0.0);
    let top: f64 = state
        .amplitudes
        .iter()
        .enumerate()
        .filter(|(k, _)| k % dim >= edge || k / dim >= edge)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    lost + top
}
