//! Theta sweeps emitted as CSV.

use std::io::{self, Write};
use std::str::FromStr;

use mzi_qfi::certify::oracle_point;
use mzi_qfi::fock::{FockCutoff, FockWorkspace};
use mzi_qfi::precision::{self, linspace};
use mzi_qfi::{gaussian, qfim, Complex64, InterferometerConfig, Result};
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    NPrecision,
    Sql,
    Qfi,
    QfiPureLimit,
    CfiOracle,
    QfiOracle,
    Lambda,
    ROut,
}

impl Column {
    pub fn is_oracle(self) -> bool {
        matches!(self, Column::CfiOracle | Column::QfiOracle)
    }

    /// Fisher-type columns are divided by `|alpha|^2`.
    fn normalized(self) -> bool {
        !matches!(self, Column::Lambda | Column::ROut)
    }

    fn name(self) -> &'static str {
        match self {
            Column::NPrecision => "n_precision",
            Column::Sql => "sql",
            Column::Qfi => "qfi",
            Column::QfiPureLimit => "qfi_pure_limit",
            Column::CfiOracle => "cfi_oracle",
            Column::QfiOracle => "qfi_oracle",
            Column::Lambda => "lambda",
            Column::ROut => "r_out",
        }
    }

    pub fn header(self) -> String {
        if self.normalized() {
            format!("{}_norm", self.name())
        } else {
            self.name().to_string()
        }
    }
}

impl FromStr for Column {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s.trim() {
            "n_precision" => Column::NPrecision,
            "sql" => Column::Sql,
            "qfi" => Column::Qfi,
            "qfi_pure_limit" => Column::QfiPureLimit,
            "cfi_oracle" => Column::CfiOracle,
            "qfi_oracle" => Column::QfiOracle,
            "lambda" => Column::Lambda,
            "r_out" => Column::ROut,
            other => return Err(format!("unknown column `{other}`")),
        })
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub alpha_sq: f64,
    pub r: f64,
    pub phi: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub points: usize,
    pub columns: Vec<Column>,
    /// Set iff an oracle column is requested.
    pub cutoff: Option<FockCutoff>,
}

pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Largest tail mass over the rows, when the oracle ran.
    pub worst_tail: Option<f64>,
}

impl Table {
    pub fn write_csv<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let mut first = true;
            for v in row {
                if !first {
                    w.write_all(b",")?;
                }
                first = false;
                // 17 significant digits: round-trips every f64
                write!(w, "{v:.16e}")?;
            }
            w.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn row(spec: &SweepSpec, ws: Option<&FockWorkspace>, theta: f64) -> Result<(Vec<f64>, Option<f64>)> {
    let cfg = InterferometerConfig::with_imaginary_alpha(spec.alpha_sq.sqrt(), spec.r, theta, spec.phi)?;
    let oracle = ws.map(|ws| oracle_point(ws, theta, spec.phi)).transpose()?;
    let mut out = vec![theta];
    for &col in &spec.columns {
        let raw = match col {
            Column::NPrecision => precision::n_precision(&cfg)?.p_theta,
            Column::Sql => precision::sql(spec.alpha_sq, theta),
            Column::Qfi => qfim::qfim(&cfg).q_theta_theta(),
            Column::QfiPureLimit => qfim::qfi_theta_continuous(&cfg),
            Column::CfiOracle => oracle.as_ref().map_or(f64::NAN, |o| o.cfi),
            Column::QfiOracle => oracle.as_ref().map_or(f64::NAN, |o| o.qfi_theta),
            Column::Lambda => gaussian::symplectic_eigenvalue_of(&cfg),
            Column::ROut => gaussian::output_squeezing(&cfg),
        };
        out.push(if col.normalized() { raw / spec.alpha_sq } else { raw });
    }
    let tail = oracle.map(|o| o.tail_mass);
    if let Some(t) = tail {
        out.push(t);
    }
    Ok((out, tail))
}

/// Evaluates every row in parallel; rows come back in grid order.
pub fn run(spec: &SweepSpec) -> Result<Table> {
    let grid = linspace(spec.theta_min, spec.theta_max, spec.points);
    let alpha = Complex64::new(0.0, -spec.alpha_sq.sqrt());
    let results: Vec<(Vec<f64>, Option<f64>)> = grid
        .par_iter()
        .map_init(
            || spec.cutoff.map(|d| FockWorkspace::new(alpha, spec.r, d)),
            |ws, &theta| row(spec, ws.as_ref(), theta),
        )
        .collect::<Result<_>>()?;

    let mut header = vec!["theta".to_string()];
    header.extend(spec.columns.iter().map(|c| c.header()));
    if spec.cutoff.is_some() {
        header.push("tail_mass".into());
    }
    let worst_tail = spec.cutoff.map(|_| results.iter().filter_map(|r| r.1).fold(0.0, f64::max));
    Ok(Table { header, rows: results.into_iter().map(|r| r.0).collect(), worst_tail })
}
