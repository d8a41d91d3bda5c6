//! Command-line front end. One subcommand per capability, flags only,
//! machine-readable stdout (CSV, JSON, or key=value lines), diagnostics
//! on stderr. Exit codes: 0 success, 1 failed verification, 2 usage
//! error, 3 guard or runtime limit.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::experiment::{
    bad_edge_experiment, run_sweep, ModelKind, SweepConfig,
};
use crate::lemmas;
use crate::models::{sample_bernoulli, sample_multi, sample_uniform, Hypergraph, Seed};
use crate::moments::{asymptotic_z2_ln, expected_z, expected_z2, laplace_constants, ExactMoment};
use crate::threshold::c_threshold;

#[derive(Debug, Parser)]
#[command(
    name = "hyperchroma",
    version,
    about = "Chromatic thresholds of random uniform hypergraphs",
    subcommand_required = true,
    arg_required_else_help = true
)]
pub struct Cli {
    /// Cap the worker thread count (default: hardware parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Uniform,
    Multi,
    Bernoulli,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Uniform => ModelKind::Uniform,
            ModelArg::Multi => ModelKind::Multi,
            ModelArg::Bernoulli => ModelKind::Bernoulli,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// RNG key.
    #[arg(long)]
    pub seed: u64,
    /// RNG substream index.
    #[arg(long, default_value_t = 0)]
    pub stream: u64,
}

impl SeedArgs {
    fn seed(&self) -> Seed {
        Seed::new(self.seed, self.stream)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Two-point window table: u_{r,k-1}, c_{r,k}, u_{r,k} over ranges.
    Thresholds {
        /// Inclusive range of edge sizes, e.g. 3..5 (within 2..64).
        #[arg(long, value_name = "A..B")]
        r_range: String,
        /// Inclusive range of color counts, e.g. 3..3 (within 2..64).
        #[arg(long, value_name = "A..B")]
        k_range: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Include the refined t=2 column.
        #[arg(long)]
        refined: bool,
    },
    /// Exact and asymptotic moments of the balanced-coloring count.
    Moments {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        /// Also compute the exact second moment.
        #[arg(long)]
        exact_z2: bool,
        /// Also print asymptotic values and ratio diagnostics.
        #[arg(long)]
        asymptotic: bool,
    },
    /// Sample a hypergraph and print its edge list.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Edge count (multi and uniform models).
        #[arg(long)]
        m: Option<usize>,
        /// Inclusion probability (bernoulli model).
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        seed: SeedArgs,
    },
    /// Monte Carlo colorability sweep over an edge-density grid.
    Sweep {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Comma-separated strictly increasing densities, e.g. 0.5,1,2.
        #[arg(long, value_delimiter = ',', required = true)]
        c_grid: Vec<f64>,
        #[arg(long)]
        trials: u32,
        #[arg(long, value_enum, default_value_t = ModelArg::Uniform)]
        model: ModelArg,
        #[command(flatten)]
        seed: SeedArgs,
        /// Write a JSON run-metadata sidecar (volatile: includes wall time).
        #[arg(long)]
        meta: Option<PathBuf>,
    },
    /// Run the analytic inequality checks and print the margin table.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifyFormat::Text)]
        format: VerifyFormat,
        /// Run a single check by id instead of the whole suite.
        #[arg(long)]
        lemma: Option<String>,
    },
    /// Empirical bad-edge statistics for the multiset model.
    Badedges {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: u32,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn guard(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

/// Default mapping from library errors to exit codes: bad parameters are
/// usage errors (2), guards and runtime limits are 3.
fn map_err(e: Error) -> Failure {
    match e {
        Error::InvalidParameter(_) | Error::UnknownLemma(_) => Failure::usage(e.to_string()),
        Error::GuardExceeded(_) | Error::AlphaNotPositive { .. } => Failure::guard(e.to_string()),
    }
}

/// Entry point used by the thin binary.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits 0 for --help/--version, 2 for usage errors.
            e.exit();
        }
    };
    if let Some(threads) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Thresholds { r_range, k_range, format, refined } => {
            cmd_thresholds(&r_range, &k_range, format, refined)
        }
        Command::Moments { n, r, k, m, exact_z2, asymptotic } => {
            cmd_moments(n, r, k, m, exact_z2, asymptotic)
        }
        Command::Sample { n, r, model, m, p, seed } => cmd_sample(n, r, model, m, p, seed.seed()),
        Command::Sweep { r, k, n, c_grid, trials, model, seed, meta } => {
            cmd_sweep(r, k, n, c_grid, trials, model.into(), seed.seed(), meta)
        }
        Command::Verify { format, lemma } => cmd_verify(format, lemma),
        Command::Badedges { r, c, n, trials, seed } => cmd_badedges(r, c, n, trials, seed.seed()),
    }
}

/// Fixed decimal below 1e6, scientific above; locale-independent.
fn fmt_real(v: f64) -> String {
    if v.abs() < 1e6 {
        format!("{v:.6}")
    } else {
        format!("{v:.6e}")
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), Failure> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| Failure::usage(format!("range '{text}' must look like A..B")))?;
    let lo: usize =
        lo.trim().parse().map_err(|_| Failure::usage(format!("bad range start '{lo}'")))?;
    let hi: usize =
        hi.trim().parse().map_err(|_| Failure::usage(format!("bad range end '{hi}'")))?;
    if lo < 2 || hi > 64 || lo > hi {
        return Err(Failure::usage(format!(
            "range {lo}..{hi} must satisfy 2 <= A <= B <= 64"
        )));
    }
    Ok((lo, hi))
}

fn cmd_thresholds(
    r_range: &str,
    k_range: &str,
    format: TableFormat,
    refined: bool,
) -> Result<ExitCode, Failure> {
    let (r_lo, r_hi) = parse_range(r_range)?;
    let (k_lo, k_hi) = parse_range(k_range)?;
    let mut reports = Vec::new();
    for r in r_lo..=r_hi {
        for k in k_lo..=k_hi {
            reports.push(c_threshold(r, k).map_err(map_err)?);
        }
    }
    let mut stdout = std::io::stdout().lock();
    match format {
        TableFormat::Csv => {
            let header = if refined {
                "r,k,u_low,c_rk,c_refined,u_high,classification"
            } else {
                "r,k,u_low,c_rk,u_high,classification"
            };
            writeln!(stdout, "{header}").unwrap();
            for rep in &reports {
                if refined {
                    writeln!(
                        stdout,
                        "{},{},{},{},{},{},{}",
                        rep.r,
                        rep.k,
                        fmt_real(rep.u_low),
                        fmt_real(rep.c_rk),
                        fmt_real(rep.c_refined),
                        fmt_real(rep.u_high),
                        rep.classification.as_str()
                    )
                    .unwrap();
                } else {
                    writeln!(
                        stdout,
                        "{},{},{},{},{},{}",
                        rep.r,
                        rep.k,
                        fmt_real(rep.u_low),
                        fmt_real(rep.c_rk),
                        fmt_real(rep.u_high),
                        rep.classification.as_str()
                    )
                    .unwrap();
                }
            }
        }
        TableFormat::Json => {
            writeln!(stdout, "{}", serde_json::to_string_pretty(&reports).unwrap()).unwrap();
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Exact values are printed verbatim when short, otherwise in scientific
/// notation derived from the log value.
fn fmt_exact(exact: &ExactMoment) -> String {
    match exact {
        ExactMoment::Rational(x) => {
            let digits = x.numer().to_string();
            if x.denom() == &num::BigInt::from(1) && digits.len() <= 40 {
                digits
            } else if digits.len() + x.denom().to_string().len() <= 60 {
                format!("{}/{}", x.numer(), x.denom())
            } else {
                fmt_from_ln(exact.ln())
            }
        }
        ExactMoment::LogValue(l) => fmt_from_ln(*l),
    }
}

fn fmt_from_ln(ln: f64) -> String {
    if ln == f64::NEG_INFINITY {
        return "0".to_string();
    }
    let log10 = ln / std::f64::consts::LN_10;
    let exp10 = log10.floor();
    let mantissa = 10f64.powf(log10 - exp10);
    format!("{mantissa:.6}e{}", exp10 as i64)
}

fn cmd_moments(
    n: usize,
    r: usize,
    k: usize,
    m: usize,
    exact_z2: bool,
    asymptotic: bool,
) -> Result<ExitCode, Failure> {
    // Per-operation contract: guard violations here are usage errors.
    let to_usage = |e: Error| Failure::usage(e.to_string());
    let z = expected_z(n, r, k, m).map_err(to_usage)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "n={n}").unwrap();
    writeln!(stdout, "r={r}").unwrap();
    writeln!(stdout, "k={k}").unwrap();
    writeln!(stdout, "m={m}").unwrap();
    writeln!(stdout, "E_Z={}", fmt_exact(&z.exact)).unwrap();
    writeln!(stdout, "E_Z_ln={:.12e}", z.exact_ln()).unwrap();
    let c = m as f64 / n as f64;
    if exact_z2 {
        let z2 = expected_z2(n, r, k, m).map_err(to_usage)?;
        writeln!(stdout, "E_Z2={}", fmt_exact(&z2.exact)).unwrap();
        writeln!(stdout, "E_Z2_ln={:.12e}", z2.exact_ln()).unwrap();
        // Second-moment ratio E[Z]^2 / E[Z^2], the colorability witness.
        let ratio = (2.0 * z.exact_ln() - z2.exact_ln()).exp();
        writeln!(stdout, "second_moment_ratio={ratio:.12e}").unwrap();
        if asymptotic {
            match asymptotic_z2_ln(n, r, k, c) {
                Ok(asym_ln) => {
                    writeln!(stdout, "E_Z2_asymptotic={}", fmt_from_ln(asym_ln)).unwrap();
                    writeln!(stdout, "E_Z2_asymptotic_ln={asym_ln:.12e}").unwrap();
                    writeln!(
                        stdout,
                        "ratio_exact_over_asymptotic={:.12e}",
                        (z2.exact_ln() - asym_ln).exp()
                    )
                    .unwrap();
                }
                Err(e) => writeln!(stdout, "E_Z2_asymptotic_error={e}").unwrap(),
            }
        }
    }
    if asymptotic {
        writeln!(stdout, "E_Z_asymptotic_ln={:.12e}", z.asymptotic_ln.unwrap()).unwrap();
        match laplace_constants(r, k, c) {
            Ok(consts) => {
                writeln!(stdout, "alpha={:.12e}", consts.alpha).unwrap();
                writeln!(stdout, "ratio_limit={:.12e}", consts.ratio_limit).unwrap();
            }
            Err(e) => writeln!(stdout, "laplace_error={e}").unwrap(),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(
    n: usize,
    r: usize,
    model: ModelArg,
    m: Option<usize>,
    p: Option<f64>,
    seed: Seed,
) -> Result<ExitCode, Failure> {
    let h: Hypergraph = match model {
        ModelArg::Multi | ModelArg::Uniform => {
            let m = m.ok_or_else(|| Failure::usage("--m is required for this model"))?;
            if p.is_some() {
                return Err(Failure::usage("--p only applies to the bernoulli model"));
            }
            match model {
                ModelArg::Multi => sample_multi(n, r, m, seed).map_err(map_err)?,
                _ => sample_uniform(n, r, m, seed).map_err(map_err)?,
            }
        }
        ModelArg::Bernoulli => {
            let p = p.ok_or_else(|| Failure::usage("--p is required for the bernoulli model"))?;
            if m.is_some() {
                return Err(Failure::usage("--m does not apply to the bernoulli model"));
            }
            sample_bernoulli(n, r, p, seed).map_err(map_err)?
        }
    };
    let mut stdout = std::io::stdout().lock();
    let model_name = match model {
        ModelArg::Multi => "multi",
        ModelArg::Uniform => "uniform",
        ModelArg::Bernoulli => "bernoulli",
    };
    writeln!(
        stdout,
        "# n={} r={} m={} model={} seed={} stream={}",
        h.n(),
        h.r(),
        h.m(),
        model_name,
        seed.value,
        seed.stream
    )
    .unwrap();
    for edge in h.edges() {
        let labels: Vec<String> = edge.iter().map(|v| v.to_string()).collect();
        writeln!(stdout, "{}", labels.join(" ")).unwrap();
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    r: usize,
    k: usize,
    n: usize,
    c_grid: Vec<f64>,
    trials: u32,
    model: ModelKind,
    seed: Seed,
    meta: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let config = SweepConfig { r, k, n, c_grid, trials, model, seed };
    config.validate().map_err(|e| match e {
        // Invariant violations in the flags are usage errors; size guards
        // are runtime limits.
        Error::InvalidParameter(_) => Failure::usage(e.to_string()),
        other => Failure::guard(other.to_string()),
    })?;
    let started_unix = SystemTime::now().duration_since(UNIX_EPOCH).unwrap().as_secs_f64();
    let t0 = Instant::now();
    let result = run_sweep(&config).map_err(map_err)?;
    print!("{}", result.to_csv());
    if let Some(path) = meta {
        let sidecar = serde_json::json!({
            "config": &result.config,
            "version": env!("CARGO_PKG_VERSION"),
            "started_unix_s": started_unix,
            "wall_ms": t0.elapsed().as_millis() as u64,
            "note": "desk-scale n cannot exhibit the sharp threshold; \
                     interpret sweeps through monotonicity and window \
                     bracketing, not threshold location",
        });
        std::fs::write(&path, serde_json::to_string_pretty(&sidecar).unwrap())
            .map_err(|e| Failure::guard(format!("cannot write {}: {e}", path.display())))?;
    }
    if result.points.iter().any(|p| p.censored) {
        eprintln!("warning: some grid points were censored by the per-instance timeout");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(format: VerifyFormat, lemma: Option<String>) -> Result<ExitCode, Failure> {
    let checks = match lemma {
        Some(id) => vec![lemmas::run_check(&id).map_err(map_err)?],
        None => lemmas::run_all(),
    };
    match format {
        VerifyFormat::Text => print!("{}", lemmas::to_text_table(&checks)),
        VerifyFormat::Csv => print!("{}", lemmas::to_csv(&checks)),
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.lemma_id.as_str()).collect();
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("failed checks: {}", failed.join(", "));
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_badedges(r: usize, c: f64, n: usize, trials: u32, seed: Seed) -> Result<ExitCode, Failure> {
    if r < 2 {
        return Err(Failure::usage(format!("r={r} must be >= 2")));
    }
    if c <= 0.0 || !c.is_finite() {
        return Err(Failure::usage(format!("density c={c} must be positive")));
    }
    let summary = bad_edge_experiment(r, c, n, trials, seed).map_err(map_err)?;
    println!("{}", serde_json::to_string_pretty(&summary).unwrap());
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("3..5").unwrap(), (3, 5));
        assert_eq!(parse_range("2..2").unwrap(), (2, 2));
        assert!(parse_range("5..3").is_err());
        assert!(parse_range("1..4").is_err());
        assert!(parse_range("2..65").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn real_formatting() {
        assert_eq!(fmt_real(1.5), "1.500000");
        assert_eq!(fmt_real(513.696), "513.696000");
        assert!(fmt_real(2.3e7).contains('e'));
    }

    #[test]
    fn ln_formatting() {
        assert_eq!(fmt_from_ln(f64::NEG_INFINITY), "0");
        let s = fmt_from_ln(810.0);
        assert!(s.ends_with("e351"), "{s}");
    }
}
