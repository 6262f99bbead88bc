//! Interferometer configuration and Heisenberg-picture statistics of the
//! output mode `b`.
//!
//! The interferometer mixes a coherent beam (mode `a`, amplitude `alpha`) with
//! squeezed vacuum (mode `b`, squeezing `r`) on a balanced beam splitter,
//! applies arm phases `theta_a`, `theta_b` and recombines. Everything here is
//! expressed through the sum phase `phi = theta_a + theta_b` and the
//! difference phase `theta = theta_a - theta_b`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Converts a squeezing level in decibels to the squeezing parameter,
/// `r = dB * ln(10) / 20`.
pub fn squeezing_from_db(db: f64) -> f64 {
    db * std::f64::consts::LN_10 / 20.0
}

/// Inverse of [`squeezing_from_db`].
pub fn squeezing_to_db(r: f64) -> f64 {
    20.0 * r / std::f64::consts::LN_10
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig {
    alpha: Complex64,
    r: f64,
    theta: f64,
    phi: f64,
}

impl InterferometerConfig {
    pub fn new(alpha: Complex64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !(alpha.re.is_finite() && alpha.im.is_finite()) {
            return Err(Error::InvalidConfig(format!("alpha must be finite, got {alpha}")));
        }
        if !r.is_finite() || r < 0.0 {
            return Err(Error::InvalidConfig(format!("r must be finite and >= 0, got {r}")));
        }
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "phases must be finite, got theta={theta}, phi={phi}"
            )));
        }
        Ok(Self { alpha, r, theta, phi })
    }

    /// Configuration with the variance-minimizing amplitude `alpha = -i|alpha|`.
    /// All N-precision formulas assume this phase.
    pub fn with_imaginary_alpha(alpha_abs: f64, r: f64, theta: f64, phi: f64) -> Result<Self> {
        if !alpha_abs.is_finite() || alpha_abs < 0.0 {
            return Err(Error::InvalidConfig(format!("|alpha| must be finite and >= 0, got {alpha_abs}")));
        }
        Self::new(Complex64::new(0.0, -alpha_abs), r, theta, phi)
    }

    /// Builds a configuration from the individual arm phases.
    pub fn from_arm_phases(alpha: Complex64, r: f64, theta_a: f64, theta_b: f64) -> Result<Self> {
        Self::new(alpha, r, theta_a - theta_b, theta_a + theta_b)
    }

    pub fn with_theta(self, theta: f64) -> Result<Self> {
        Self::new(self.alpha, self.r, theta, self.phi)
    }

    pub fn with_phi(self, phi: f64) -> Result<Self> {
        Self::new(self.alpha, self.r, self.theta, phi)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn alpha_abs(&self) -> f64 {
        self.alpha.norm()
    }

    pub fn alpha_sq(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn theta_a(&self) -> f64 {
        0.5 * (self.phi + self.theta)
    }

    pub fn theta_b(&self) -> f64 {
        0.5 * (self.phi - self.theta)
    }

    /// `cos(theta / 2)`
    pub fn c(&self) -> f64 {
        (0.5 * self.theta).cos()
    }

    /// `sin(theta / 2)`
    pub fn s(&self) -> f64 {
        (0.5 * self.theta).sin()
    }
}

/// `b_out = coeff_b * b + coeff_bdag * b^dag + coeff_a * a + displacement`,
/// written in terms of the input vacuum operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeTransform {
    pub coeff_b: Complex64,
    pub coeff_bdag: Complex64,
    pub coeff_a: Complex64,
    pub displacement: Complex64,
}

impl ModeTransform {
    /// `|coeff_b|^2 - |coeff_bdag|^2 + |coeff_a|^2`; equals 1 for a valid transform.
    pub fn commutator(&self) -> f64 {
        self.coeff_b.norm_sqr() - self.coeff_bdag.norm_sqr() + self.coeff_a.norm_sqr()
    }
}

pub fn output_mode_transform(cfg: &InterferometerConfig) -> ModeTransform {
    let global = Complex64::from_polar(1.0, 0.5 * cfg.phi);
    let (c, s) = (cfg.c(), cfg.s());
    let i_s = Complex64::new(0.0, s);
    ModeTransform {
        coeff_b: global * (c * cfg.r.cosh()),
        coeff_bdag: global * (-c * cfg.r.sinh()),
        coeff_a: global * i_s,
        displacement: global * i_s * cfg.alpha,
    }
}

/// Mean photon number in the output mode `b`.
pub fn mean_photon_number(cfg: &InterferometerConfig) -> f64 {
    let (c, s) = (cfg.c(), cfg.s());
    let sh = cfg.r.sinh();
    c * c * sh * sh + s * s * cfg.alpha_sq()
}

/// Photon-number variance in the output mode `b` for arbitrary complex `alpha`.
pub fn photon_number_variance(cfg: &InterferometerConfig) -> f64 {
    let (c, s) = (cfg.c(), cfg.s());
    let (s2, c2) = (s * s, c * c);
    let (ch, sh) = (cfg.r.cosh(), cfg.r.sinh());
    let mixed = (cfg.alpha * ch + cfg.alpha.conj() * sh).norm_sqr();
    s2 * s2 * cfg.alpha_sq() + s2 * c2 * sh * sh + 2.0 * c2 * c2 * ch * ch * sh * sh + s2 * c2 * mixed
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioScalars {
    /// Ratio of squeezed to coherent photon numbers, `sinh^2 r / |alpha|^2`.
    pub epsilon: f64,
    pub h: f64,
    /// Mean total photon number inside the interferometer.
    pub n_total: f64,
}

pub fn scenario_scalars(cfg: &InterferometerConfig) -> Result<ScenarioScalars> {
    let alpha_sq = cfg.alpha_sq();
    if alpha_sq == 0.0 {
        return Err(Error::DegenerateInput("epsilon is undefined for alpha = 0".into()));
    }
    let sh2 = cfg.r.sinh().powi(2);
    Ok(ScenarioScalars {
        epsilon: sh2 / alpha_sq,
        h: h_factor(cfg.theta, cfg.r),
        n_total: alpha_sq + sh2,
    })
}

/// `sin^2(theta/2) cos^2(theta/2) + 2 cosh^2 r cos^4(theta/2)`
pub(crate) fn h_factor(theta: f64, r: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let c2 = c * c;
    s * s * c2 + 2.0 * r.cosh().powi(2) * c2 * c2
}
