//! Photon-counting (N-precision) figures of merit.
//!
//! The precision of inferring `theta` from the mean photon number of mode `b`
//! follows from error propagation. Closed forms here assume the amplitude
//! phase `alpha = -i|alpha|`, which minimizes the photon-number variance; use
//! [`error_propagation_precision`] for other phases.

use crate::error::{Error, Result};
use crate::interferometer::{self, h_factor, InterferometerConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionPoint {
    pub theta: f64,
    /// Inverse phase variance.
    pub p_theta: f64,
    /// `p_theta / |alpha|^2`
    pub p_normalized: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalPoint {
    pub theta_opt: f64,
    pub p_opt: f64,
}

/// Result of [`optimal_theta`]. Without squeezing the maximum of
/// `cos^2(theta/2)` sits at the fringe itself and `degenerate` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalTheta {
    pub theta: f64,
    pub degenerate: bool,
}

fn precision_value(alpha_sq: f64, r: f64, theta: f64) -> f64 {
    let eps = r.sinh().powi(2) / alpha_sq;
    let (s, c) = (0.5 * theta).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let num = (1.0 - eps).powi(2) * s2 * c2;
    if num == 0.0 {
        return 0.0;
    }
    let den = s2 * s2 + (-2.0 * r).exp() * s2 * c2 + eps * h_factor(theta, r);
    alpha_sq * num / den
}

/// Error-propagation precision for the `alpha = -i|alpha|` convention.
pub fn n_precision(cfg: &InterferometerConfig) -> Result<PrecisionPoint> {
    let alpha_sq = cfg.alpha_sq();
    if alpha_sq == 0.0 {
        return Err(Error::DegenerateInput("N-precision needs |alpha| > 0".into()));
    }
    let p = precision_value(alpha_sq, cfg.r(), cfg.theta());
    Ok(PrecisionPoint { theta: cfg.theta(), p_theta: p, p_normalized: p / alpha_sq })
}

/// `(d<N_b>/d theta)^2 / Var(N_b)` from the photon-number moments, valid for
/// any phase of `alpha`.
pub fn error_propagation_precision(cfg: &InterferometerConfig) -> f64 {
    let (s, c) = (cfg.s(), cfg.c());
    let slope = s * c * (cfg.alpha_sq() - cfg.r().sinh().powi(2));
    let var = interferometer::photon_number_variance(cfg);
    if slope == 0.0 {
        return 0.0;
    }
    slope * slope / var
}

/// Standard quantum limit `|alpha|^2 cos^2(theta/2)`.
pub fn sql(alpha_sq: f64, theta: f64) -> f64 {
    alpha_sq * (0.5 * theta).cos().powi(2)
}

/// Positive optimal difference phase `2 atan(sqrt(sinh 2r / (sqrt 2 |alpha|)))`.
pub fn optimal_theta(alpha_abs: f64, r: f64) -> Result<OptimalTheta> {
    if !(alpha_abs > 0.0) {
        return Err(Error::DegenerateInput("optimal theta needs |alpha| > 0".into()));
    }
    if r == 0.0 {
        return Ok(OptimalTheta { theta: 0.0, degenerate: true });
    }
    let t = (2.0 * r).sinh() / (std::f64::consts::SQRT_2 * alpha_abs);
    Ok(OptimalTheta { theta: 2.0 * t.sqrt().atan(), degenerate: false })
}

/// Maximum N-precision `|alpha|^2 e^{2r} (1-eps)^2 / (1 + e^{2r}(eps + 2 sqrt(2 eps cosh^2 r)))`.
///
/// Rejects `eps >= 1`, where squeezed photons dominate.
pub fn optimal_precision(alpha_sq: f64, r: f64) -> Result<f64> {
    if !(alpha_sq > 0.0) {
        return Err(Error::DegenerateInput("optimal precision needs |alpha|^2 > 0".into()));
    }
    let eps = r.sinh().powi(2) / alpha_sq;
    if eps >= 1.0 {
        return Err(Error::DegenerateInput(format!("epsilon = {eps} >= 1")));
    }
    let e2r = (2.0 * r).exp();
    let root = (2.0 * eps * r.cosh().powi(2)).sqrt();
    Ok(alpha_sq * e2r * (1.0 - eps).powi(2) / (1.0 + e2r * (eps + 2.0 * root)))
}

pub fn optimal_point(alpha_sq: f64, r: f64) -> Result<OptimalPoint> {
    let theta = optimal_theta(alpha_sq.sqrt(), r)?;
    Ok(OptimalPoint { theta_opt: theta.theta, p_opt: optimal_precision(alpha_sq, r)? })
}

/// One row of a precision curve: the N-precision and the SQL companion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub point: PrecisionPoint,
    pub sql: f64,
    pub sql_normalized: f64,
}

/// Evaluates the N-precision along `thetas`, keeping the grid order.
pub fn precision_curve(template: &InterferometerConfig, thetas: &[f64]) -> Result<Vec<CurvePoint>> {
    let alpha_sq = template.alpha_sq();
    thetas
        .iter()
        .map(|&theta| {
            let point = n_precision(&template.with_theta(theta)?)?;
            let sql = sql(alpha_sq, theta);
            Ok(CurvePoint { point, sql, sql_normalized: sql / alpha_sq })
        })
        .collect()
}

/// `n` evenly spaced points on `[lo, hi]`, both ends included.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            // convex-combination form: endpoints are exact and symmetric
            // ranges hit zero exactly at the midpoint
            let last = (n - 1) as f64;
            (0..n)
                .map(|k| {
                    let t = k as f64 / last;
                    lo * (1.0 - t) + hi * t
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interferometer::squeezing_from_db;
    use crate::qfim;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn cfg(alpha_sq: f64, r: f64, theta: f64) -> InterferometerConfig {
        InterferometerConfig::with_imaginary_alpha(alpha_sq.sqrt(), r, theta, 0.0).unwrap()
    }

    #[test]
    fn reduces_to_sql_without_squeezing() {
        for theta in [0.1, 0.7, 1.9, 3.0] {
            let p = n_precision(&cfg(50.0, 0.0, theta)).unwrap();
            assert_relative_eq!(p.p_theta, sql(50.0, theta), max_relative = 1e-13);
        }
    }

    #[test]
    fn zero_at_black_fringe() {
        for r in [0.0, 0.5, 1.439] {
            assert_eq!(n_precision(&cfg(1e6, r, 0.0)).unwrap().p_theta, 0.0);
        }
    }

    #[test]
    fn degenerate_inputs() {
        assert!(n_precision(&cfg(0.0, 0.5, 0.3)).is_err());
        assert!(optimal_theta(0.0, 0.5).is_err());
        assert_eq!(optimal_theta(3.0, 0.0).unwrap(), OptimalTheta { theta: 0.0, degenerate: true });
        // sinh^2(1) > 1 = |alpha|^2
        assert!(matches!(optimal_precision(1.0, 1.0), Err(Error::DegenerateInput(_))));
    }

    #[test]
    fn optimal_theta_example() {
        assert_relative_eq!(optimal_theta(10.0, 1.0).unwrap().theta, 0.9375353836069311, max_relative = 1e-14);
    }

    #[test]
    fn optimal_precision_limits() {
        assert_eq!(optimal_precision(7.0, 0.0).unwrap(), 7.0);
        let r = 1.0_f64;
        let big = optimal_precision(1e14, r).unwrap() / 1e14;
        assert_relative_eq!(big, (2.0 * r).exp(), max_relative = 1e-5);
        let p = optimal_precision(1e3, 1.439).unwrap();
        assert!(p < 1e3 * (2.0_f64 * 1.439).exp());
    }

    #[test]
    fn strong_field_peak() {
        let r = squeezing_from_db(12.5);
        let p = optimal_precision(1e6, r).unwrap() / 1e6;
        assert!((14.0..15.5).contains(&p), "{p}");
        assert_relative_eq!(p, 14.5, max_relative = 5e-3);
    }

    #[test]
    fn curve_keeps_grid_order() {
        let grid = linspace(-0.2, 0.2, 9);
        let curve = precision_curve(&cfg(1e3, 0.5, 0.0), &grid).unwrap();
        assert_eq!(curve.len(), 9);
        for (row, theta) in curve.iter().zip(&grid) {
            assert_eq!(row.point.theta, *theta);
            assert_relative_eq!(row.sql_normalized, (0.5 * theta).cos().powi(2), max_relative = 1e-15);
        }
        let single = precision_curve(&cfg(1e3, 0.5, 0.0), &[0.0]).unwrap();
        assert_eq!(single[0].point.p_theta, 0.0);
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn weak_field_curve_below_qfi() {
        let template = cfg(1e3, squeezing_from_db(12.5), 0.0);
        for theta in linspace(-0.2, 0.2, 201) {
            let c = template.with_theta(theta).unwrap();
            let p = n_precision(&c).unwrap().p_theta;
            assert!(p <= qfim::qfim(&c).q_theta_theta() + 1e-9);
        }
    }

    /// Best optimal precision over the coherent/squeezed split of `n` photons.
    fn best_split_precision(n: f64) -> f64 {
        (1..400)
            .map(|k| (n / 2.0).powf(k as f64 / 400.0))
            .filter_map(|sh2: f64| optimal_precision(n - sh2, sh2.sqrt().asinh()).ok())
            .fold(0.0, f64::max)
    }

    #[test]
    fn scaling_with_total_photon_number() {
        // Balanced split for the QFI: sinh^2 r = |alpha|^2 = N/2, Q_0+ / N^2 -> 1 from above.
        let ns = [1e2_f64, 1e3, 1e4];
        let q_ratio: Vec<f64> = ns
            .iter()
            .map(|&n| qfim::two_mode_qfi(n / 2.0, (n / 2.0).sqrt().asinh()) / (n * n))
            .collect();
        assert!(q_ratio.windows(2).all(|w| w[1] < w[0]), "{q_ratio:?}");
        assert!(q_ratio.iter().all(|q| (1.0..=1.1).contains(q)), "{q_ratio:?}");

        // Photon counting grows much more slowly: P_opt / N^{3/2} stays bounded
        // and falls further behind the QFI.
        let p: Vec<f64> = ns.iter().map(|&n| best_split_precision(n)).collect();
        let p_ratio: Vec<f64> = p.iter().zip(ns).map(|(p, n)| p / n.powf(1.5)).collect();
        assert!(p_ratio.iter().all(|r| *r < 1.0), "{p_ratio:?}");
        assert!(p_ratio.windows(2).all(|w| w[1] <= w[0]), "{p_ratio:?}");
        let gap: Vec<f64> = p.iter().zip(ns).map(|(p, n)| qfim::two_mode_qfi(n / 2.0, (n / 2.0).sqrt().asinh()) / p).collect();
        assert!(gap.windows(2).all(|w| w[1] > w[0]), "{gap:?}");
    }

    proptest! {
        #[test]
        fn parity(theta in -PI..PI, r in 0.0..1.5f64, a in 10.0..1e6f64) {
            let p = |t: f64| n_precision(&cfg(a, r, t)).unwrap().p_theta;
            prop_assert!((p(theta) - p(-theta)).abs() <= 1e-12 * p(theta).max(1.0));
        }

        #[test]
        fn matches_error_propagation(theta in -3.1..3.1f64, r in 0.0..1.5f64, a in 1.0..1e6f64) {
            let c = cfg(a, r, theta);
            let closed = n_precision(&c).unwrap().p_theta;
            let moments = error_propagation_precision(&c);
            prop_assert!((closed - moments).abs() <= 1e-10 * closed.abs().max(1e-300));
        }
    }
}
