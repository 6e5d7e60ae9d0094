use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use itercert::certify::{certify_reich, certify_spectral, ConvergenceCertificate, Verdict};
use itercert::error::Error;
use itercert::iterative::{iterate, IterateOptions, Splitting, TraceStatus, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use itercert::linalg::{DenseMatrix, DenseVector};
use itercert::mtx::{load_matrix_market, load_vector};
use itercert::poisson::{run_demo_with, Method};
use itercert::report::{ErrorInfo, Report, SpectrumSummary, TraceSummary, ValidationSummary};
use itercert::sampling;
use itercert::spectral::eigenvalues_qr;

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_DIVERGES: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "itercert", version, about = "Certify and run Jacobi / Gauss-Seidel iterations on dense systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide convergence of the iteration before running it.
    Certify(CertifyArgs),
    /// Certify, then iterate on A x = b from x0 = 0.
    Solve(SolveArgs),
    /// Eigenvalues of the iteration matrix (or of A itself with --method none).
    Spectrum(SpectrumArgs),
    /// Certified run on the 1-D central-difference Poisson system.
    Poisson(PoissonArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Jacobi,
    GaussSeidel,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Jacobi => Method::Jacobi,
            MethodArg::GaussSeidel => Method::GaussSeidel,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpectrumOf {
    Jacobi,
    GaussSeidel,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Spectral,
    Reich,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Args, Debug)]
struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    output: Output,
    /// Error reduction used for the predicted iteration count.
    #[arg(long, default_value_t = 1e-10)]
    target_reduction: f64,
}

#[derive(Args, Debug)]
struct Sampling {
    /// Seed for the random starting vectors of the validation runs.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random starting vectors to validate the certificate with.
    #[arg(long, default_value_t = 4)]
    samples: usize,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: MethodArg,
    /// Reich applies to Gauss-Seidel on real symmetric matrices only.
    #[arg(long, value_enum, default_value = "spectral")]
    criterion: CriterionArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[command(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    /// Iterate even when the certificate says the method diverges.
    #[arg(long)]
    force: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: SpectrumOf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PoissonArgs {
    /// Number of interior grid points.
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "jacobi")]
    method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_MAX_ITERS)]
    max_iters: usize,
    #[command(flatten)]
    sampling: Sampling,
    #[command(flatten)]
    common: Common,
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    err: Error,
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::SingularMatrix { .. }
            | Error::ZeroDiagonal(_)
            | Error::DivisionByZero(_)
            | Error::ConvergenceFailure { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self { code, err }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, err: Error::Domain(msg.into()) }
}

fn check_run_options(tol: f64, max_iters: usize, target: f64) -> Result<(), Failure> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(usage(format!("--tol must be in (0, 1), got {tol}")));
    }
    if max_iters == 0 {
        return Err(usage("--max-iters must be at least 1"));
    }
    check_target(target)
}

fn check_target(target: f64) -> Result<(), Failure> {
    if !(target > 0.0 && target < 1.0) {
        return Err(usage(format!("--target-reduction must be in (0, 1), got {target}")));
    }
    Ok(())
}

fn load_square(path: &Path) -> Result<DenseMatrix, Failure> {
    let m = load_matrix_market(path)?.matrix;
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{}: expected a square matrix, found {}x{}",
            path.display(),
            m.rows(),
            m.cols()
        ))
        .into());
    }
    Ok(m)
}

/// Iterates `S e` from seeded random starts with `b = 0`, so the iterate is
/// itself the error.
fn validate(splitting: &Splitting, opts: &IterateOptions, sampling: &Sampling) -> Result<ValidationSummary, Failure> {
    let n = splitting.dim();
    let mut rng = sampling::rng(sampling.seed);
    let zero = DenseVector::zeros(n);
    let mut summary = ValidationSummary {
        seed: sampling.seed,
        samples: sampling.samples,
        reached_tol: 0,
        diverged: 0,
        max_iters: 0,
        observed_rates: Vec::with_capacity(sampling.samples),
        iterations: Vec::with_capacity(sampling.samples),
    };
    for _ in 0..sampling.samples {
        let x0 = sampling::random_vector(&mut rng, n);
        let trace = iterate(splitting, &zero, &x0, opts, Some(&zero))?;
        match trace.status {
            TraceStatus::ReachedTol => summary.reached_tol += 1,
            TraceStatus::Diverged => summary.diverged += 1,
            TraceStatus::MaxIters => summary.max_iters += 1,
        }
        summary.observed_rates.push(itercert::iterative::observed_rate(&trace).ok());
        summary.iterations.push(trace.iterations);
    }
    Ok(summary)
}

fn certify_with(
    a: &DenseMatrix,
    splitting: &Splitting,
    criterion: CriterionArg,
    target: f64,
) -> Result<ConvergenceCertificate, Failure> {
    match criterion {
        CriterionArg::Spectral => Ok(certify_spectral(splitting, target)?),
        CriterionArg::Reich => {
            if !a.is_real() {
                return Err(usage("Reich's criterion needs a real matrix"));
            }
            Ok(certify_reich(&a.real_part(), target)?)
        }
    }
}

fn run_certify(args: &CertifyArgs) -> Result<Report, Failure> {
    check_run_options(args.tol, args.max_iters, args.common.target_reduction)?;
    if args.criterion == CriterionArg::Reich && matches!(args.method, MethodArg::Jacobi) {
        return Err(usage("Reich's criterion certifies Gauss-Seidel; pass --method gauss-seidel"));
    }
    let a = load_square(&args.matrix)?;
    let method = Method::from(args.method);
    let mut report = Report::new("certify", Some(method.name()), a.rows(), &args.matrix.display().to_string());
    let splitting = method.splitting(&a)?;
    report.certificate = Some(certify_with(&a, &splitting, args.criterion, args.common.target_reduction)?);
    let opts = IterateOptions { max_iters: args.max_iters, tol: args.tol, divergence_threshold: None };
    if args.sampling.samples > 0 {
        report.validation = Some(validate(&splitting, &opts, &args.sampling)?);
    }
    Ok(report)
}

fn run_solve(args: &SolveArgs) -> Result<(Report, Option<u8>), Failure> {
    check_run_options(args.tol, args.max_iters, args.common.target_reduction)?;
    let a = load_square(&args.matrix)?;
    let b = load_vector(&args.rhs)?;
    if b.dim() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix is {}x{}",
            b.dim(),
            a.rows(),
            a.cols()
        ))
        .into());
    }
    let method = Method::from(args.method);
    let mut report = Report::new("solve", Some(method.name()), a.rows(), &args.matrix.display().to_string());
    let splitting = method.splitting(&a)?;
    let cert = certify_spectral(&splitting, args.common.target_reduction)?;
    let diverges = cert.verdict == Verdict::Diverges;
    report.certificate = Some(cert);
    if diverges && !args.force {
        return Ok((report, Some(EXIT_DIVERGES)));
    }
    let exact = a.lu_solve(&b)?;
    let opts = IterateOptions { max_iters: args.max_iters, tol: args.tol, divergence_threshold: None };
    let trace = iterate(&splitting, &b, &DenseVector::zeros(a.rows()), &opts, Some(&exact))?;
    report.trace = Some(TraceSummary::from_trace(&trace, Some(exact.norm2())));
    Ok((report, None))
}

fn run_spectrum(args: &SpectrumArgs) -> Result<Report, Failure> {
    check_target(args.common.target_reduction)?;
    let a = load_square(&args.matrix)?;
    let source = args.matrix.display().to_string();
    let method = match args.method {
        SpectrumOf::Jacobi => Some(Method::Jacobi),
        SpectrumOf::GaussSeidel => Some(Method::GaussSeidel),
        SpectrumOf::None => None,
    };
    let mut report = Report::new("spectrum", method.map(Method::name), a.rows(), &source);
    match method {
        Some(method) => {
            let splitting = method.splitting(&a)?;
            let cert = certify_spectral(&splitting, args.common.target_reduction)?;
            if cert.verdict == Verdict::Unknown && cert.spectral_radius.is_none() {
                return Err(Error::ConvergenceFailure { what: "shifted QR iteration", iterations: 0 }.into());
            }
            report.certificate = Some(cert);
        }
        None => {
            let spec = eigenvalues_qr(&a)?;
            report.spectrum = Some(SpectrumSummary::from(&spec));
        }
    }
    Ok(report)
}

fn run_poisson(args: &PoissonArgs) -> Result<Report, Failure> {
    check_run_options(args.tol, args.max_iters, args.common.target_reduction)?;
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let method = Method::from(args.method);
    let opts = IterateOptions { max_iters: args.max_iters, tol: args.tol, divergence_threshold: None };
    let demo = run_demo_with(args.n, method, &opts, args.common.target_reduction)?;
    let mut report = Report::new("poisson", Some(method.name()), args.n, &format!("poisson(n={})", args.n));
    report.certificate = demo.certificate.clone();
    report.trace = demo.trace.as_ref().map(|t| TraceSummary::from_trace(t, Some(demo.exact.norm2())));
    report.error = demo.error.as_ref().map(ErrorInfo::from);
    if args.sampling.samples > 0 && demo.error.is_none() {
        let splitting = method.splitting(&demo.system.a.embed())?;
        report.validation = Some(validate(&splitting, &opts, &args.sampling)?);
    }
    Ok(report)
}

fn emit(report: &mut Report, output: Output, started: Instant) {
    report.timing_ms = started.elapsed().as_secs_f64() * 1e3;
    match output {
        Output::Json => println!("{}", report.to_json()),
        Output::Table => print!("{}", report.to_table()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    let (output, result) = match &cli.command {
        Command::Certify(args) => (args.common.output, run_certify(args).map(|r| (r, None))),
        Command::Solve(args) => (args.common.output, run_solve(args)),
        Command::Spectrum(args) => (args.common.output, run_spectrum(args).map(|r| (r, None))),
        Command::Poisson(args) => (args.common.output, run_poisson(args).map(|r| (r, None))),
    };
    match result {
        Ok((mut report, exit)) => {
            emit(&mut report, output, started);
            if let Some(code) = exit {
                eprintln!("E_USAGE: the certificate says the iteration diverges; pass --force to iterate anyway");
                return ExitCode::from(code);
            }
            if let Some(err) = &report.error {
                eprintln!("{}: {}", err.code, err.message);
                return ExitCode::from(EXIT_NUMERICAL);
            }
            ExitCode::SUCCESS
        }
        Err(Failure { code, err }) => {
            eprintln!("{}: {err}", err.code());
            ExitCode::from(code)
        }
    }
}
