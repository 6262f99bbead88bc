//! Plain-text reports for `point` and `certify`.

use std::io::{self, Write};

use mzi_qfi::certify::{CertificationReport, DESK_ALPHA_MAX, DESK_R_MAX};
use mzi_qfi::fock::TAIL_THRESHOLD;
use mzi_qfi::interferometer::{mean_photon_number, photon_number_variance, squeezing_to_db};
use mzi_qfi::qfim::{self, QfimMatrix};
use mzi_qfi::{gaussian, precision, InterferometerConfig};

fn matrix<W: Write>(w: &mut W, m: &QfimMatrix) -> io::Result<()> {
    writeln!(w, "  Q_phi_phi      {:.12e}", m.phi_phi)?;
    writeln!(w, "  Q_phi_theta    {:.12e}", m.phi_theta)?;
    writeln!(w, "  Q_theta_theta  {:.12e}", m.theta_theta)
}

pub fn point<W: Write>(w: &mut W, cfg: &InterferometerConfig) -> io::Result<()> {
    let alpha_sq = cfg.alpha_sq();
    let p = precision::n_precision(cfg).expect("alpha_sq validated positive");
    let will = gaussian::williamson(cfg);
    let q = qfim::qfim(cfg);
    let f0 = qfim::two_mode_qfi(alpha_sq, cfg.r());

    writeln!(
        w,
        "|alpha|^2 = {alpha_sq}  r = {} ({:.4} dB)  theta = {}  phi = {}",
        cfg.r(),
        squeezing_to_db(cfg.r()),
        cfg.theta(),
        cfg.phi()
    )?;
    writeln!(w, "<N_b>            {:.12e}", mean_photon_number(cfg))?;
    writeln!(w, "Var N_b          {:.12e}", photon_number_variance(cfg))?;
    writeln!(w, "P_theta          {:.12e}  (/|alpha|^2: {:.12e})", p.p_theta, p.p_normalized)?;
    writeln!(w, "SQL              {:.12e}", precision::sql(alpha_sq, cfg.theta()))?;
    writeln!(w, "lambda           {:.12e}", will.lambda)?;
    writeln!(w, "r_out            {:.12e}", will.r_out)?;
    writeln!(w, "QFIM [{}]", q.regime)?;
    matrix(w, &q.matrix)?;
    writeln!(w, "F0 (two-mode)    {:.12e}", f0)?;
    if let Some(limit) = &q.fringe_limit {
        writeln!(w, "fringe: Q0 = {:.12e}  Q0+ = {:.12e}", q.matrix.theta_theta, limit.theta_theta)?;
        writeln!(w, "QFIM limit towards the fringe")?;
        matrix(w, limit)?;
    }
    Ok(())
}

pub fn certification<W: Write>(w: &mut W, rep: &CertificationReport) -> io::Result<()> {
    writeln!(
        w,
        "certify: alpha = {}{:+}i  r = {}  phi = {}  cutoff = {}",
        rep.alpha.re,
        rep.alpha.im,
        rep.r,
        rep.phi,
        rep.cutoff.dim()
    )?;
    writeln!(
        w,
        "scope: the Fock oracle is certified at desk scale only (|alpha| <= {DESK_ALPHA_MAX}, r <= {DESK_R_MAX}); \
         larger parameters rely on the closed forms"
    )?;
    if !rep.desk_scale {
        writeln!(w, "note: these parameters lie outside the desk-scale region")?;
    }
    writeln!(w, "{:<13} {:>5} {:>22} {:>22} {:>10} {:>8}  status", "check", "theta", "closed form", "oracle", "error", "tol")?;
    for c in &rep.checks {
        writeln!(
            w,
            "{:<13} {:>5} {:>22.14e} {:>22.14e} {:>10.2e} {:>8.0e}  {}",
            c.name,
            c.theta,
            c.closed_form,
            c.oracle,
            c.error,
            c.tolerance,
            if c.passed { "ok" } else { "FAIL" }
        )?;
    }
    let worst_tail = rep.checks.iter().filter(|c| c.name == "tail_mass").map(|c| c.oracle).fold(0.0, f64::max);
    if worst_tail > TAIL_THRESHOLD {
        writeln!(
            w,
            "truncation: tail mass {worst_tail:.3e} exceeds {TAIL_THRESHOLD:.0e} at cutoff {}; raise --cutoff (heuristic suggests {})",
            rep.cutoff.dim(),
            mzi_qfi::fock::FockCutoff::heuristic(rep.alpha.norm(), rep.r).dim()
        )?;
    }
    let failed = rep.failures().count();
    if failed == 0 {
        writeln!(w, "PASS: all {} checks within tolerance", rep.checks.len())
    } else {
        writeln!(w, "FAIL: {failed} of {} checks out of tolerance", rep.checks.len())
    }
}
