use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mzi_qfi::fock::FockCutoff;
use mzi_qfi::interferometer::squeezing_from_db;

mod report;
mod sweep;

use sweep::Column;

#[derive(Parser)]
#[command(name = "mzi-qfi", version, about = "Phase-estimation limits of a squeezed-light Mach-Zehnder interferometer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate precision and Fisher information over a theta grid as CSV.
    Sweep(SweepArgs),
    /// Report every quantity at a single working point.
    Point(PointArgs),
    /// Check the closed forms against the truncated Fock-space oracle.
    Certify(CertifyArgs),
}

#[derive(Args, Clone, Copy)]
#[group(required = true, multiple = false)]
struct Squeezing {
    /// Squeezing parameter r.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<f64>,
    /// Squeezing in dB (r = dB ln10 / 20).
    #[arg(long)]
    db: Option<f64>,
}

impl Squeezing {
    fn r(self) -> f64 {
        match (self.r, self.db) {
            (Some(r), _) => r,
            (None, Some(db)) => squeezing_from_db(db),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Coherent-beam mean photon number |alpha|^2.
    #[arg(long)]
    alpha_sq: f64,
    #[command(flatten)]
    squeezing: Squeezing,
    /// Sum phase Phi.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    /// Theta range `min..max`.
    #[arg(long = "theta-range", visible_alias = "theta", allow_hyphen_values = true)]
    theta_range: String,
    #[arg(long, default_value_t = 401)]
    points: usize,
    /// Comma-separated subset of: n_precision, sql, qfi, qfi_pure_limit,
    /// cfi_oracle, qfi_oracle, lambda, r_out.
    #[arg(long, value_delimiter = ',', default_value = "n_precision,sql,qfi")]
    columns: Vec<String>,
    /// Fock cutoff per mode; required for oracle columns.
    #[arg(long)]
    cutoff: Option<usize>,
    /// Read the theta range in degrees.
    #[arg(long)]
    degrees: bool,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    alpha_sq: f64,
    #[command(flatten)]
    squeezing: Squeezing,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long)]
    degrees: bool,
}

#[derive(Args)]
struct CertifyArgs {
    /// Imaginary part of alpha (alpha = i * alpha_im).
    #[arg(long, allow_hyphen_values = true)]
    alpha_im: f64,
    #[arg(long)]
    r: f64,
    /// Fock cutoff per mode (defaults to a heuristic from alpha and r).
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.4,0.8,1.6,2.4")]
    theta: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi: f64,
}

/// Failure with the exit status it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Check(String),
}

impl From<mzi_qfi::Error> for Failure {
    fn from(e: mzi_qfi::Error) -> Self {
        match e {
            mzi_qfi::Error::InvalidConfig(_) | mzi_qfi::Error::DegenerateInput(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Check(format!("i/o: {e}"))
    }
}

fn parse_range(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::Usage(format!("theta range must look like `min..max`, got `{s}`"));
    let (lo, hi) = s.split_once("..").ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    Ok((lo, hi))
}

fn check_alpha_sq(alpha_sq: f64) -> Result<(), Failure> {
    if alpha_sq.is_finite() && alpha_sq > 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--alpha-sq must be positive, got {alpha_sq}")))
    }
}

fn cutoff(dim: usize) -> Result<FockCutoff, Failure> {
    FockCutoff::new(dim).map_err(|e| Failure::Usage(e.to_string()))
}

fn run_sweep(args: SweepArgs) -> Result<(), Failure> {
    check_alpha_sq(args.alpha_sq)?;
    let (mut lo, mut hi) = parse_range(&args.theta_range)?;
    if args.degrees {
        lo = lo.to_radians();
        hi = hi.to_radians();
    }
    if !(lo < hi) {
        return Err(Failure::Usage(format!("theta range needs min < max, got {lo}..{hi}")));
    }
    if args.points < 2 {
        return Err(Failure::Usage("--points must be at least 2".into()));
    }
    let columns = args
        .columns
        .iter()
        .map(|c| c.parse::<Column>().map_err(Failure::Usage))
        .collect::<Result<Vec<_>, _>>()?;
    let oracle = columns.iter().any(|c| c.is_oracle());
    let cutoff = match (oracle, args.cutoff) {
        (true, None) => return Err(Failure::Usage("oracle columns need an explicit --cutoff".into())),
        (true, Some(d)) => Some(cutoff(d)?),
        (false, _) => None,
    };
    let spec = sweep::SweepSpec {
        alpha_sq: args.alpha_sq,
        r: args.squeezing.r(),
        phi: args.phi,
        theta_min: lo,
        theta_max: hi,
        points: args.points,
        columns,
        cutoff,
    };
    let table = sweep::run(&spec)?;
    if let Some(worst) = table.worst_tail {
        if worst > mzi_qfi::fock::TAIL_THRESHOLD {
            eprintln!(
                "warning: Fock truncation tail mass up to {worst:.3e} exceeds {:.0e}; increase --cutoff",
                mzi_qfi::fock::TAIL_THRESHOLD
            );
        }
    }
    match args.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(&path)?);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => {
            let mut w = BufWriter::new(io::stdout().lock());
            table.write_csv(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn run_point(args: PointArgs) -> Result<(), Failure> {
    check_alpha_sq(args.alpha_sq)?;
    let theta = if args.degrees { args.theta.to_radians() } else { args.theta };
    let cfg =
        mzi_qfi::InterferometerConfig::with_imaginary_alpha(args.alpha_sq.sqrt(), args.squeezing.r(), theta, args.phi)?;
    let mut out = io::stdout().lock();
    report::point(&mut out, &cfg)?;
    Ok(())
}

fn run_certify(args: CertifyArgs) -> Result<(), Failure> {
    let alpha = mzi_qfi::Complex64::new(0.0, args.alpha_im);
    let dim = args.cutoff.map(cutoff).transpose()?.unwrap_or_else(|| FockCutoff::heuristic(alpha.norm(), args.r));
    if args.theta.is_empty() {
        return Err(Failure::Usage("--theta needs at least one value".into()));
    }
    let rep = mzi_qfi::certify::certify(alpha, args.r, args.phi, dim, &args.theta)?;
    let mut out = io::stdout().lock();
    report::certification(&mut out, &rep)?;
    if rep.passed() {
        Ok(())
    } else {
        Err(Failure::Check(format!("{} check(s) failed", rep.failures().count())))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => run_sweep(a),
        Command::Point(a) => run_point(a),
        Command::Certify(a) => run_certify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
