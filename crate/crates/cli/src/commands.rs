use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qgame::game::observable_from_images;
use qgame::{equilibrium_gap, random, solve, solve_psdp, PayoffObservable, SolverParams, SuperOpSdp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::format::{
    digest, parse_claim, parse_instance, FormatError, Instance, PsdpResultFile, ResultFile,
    SuperopFile, MAX_DIM,
};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VERIFY_FAILED: i32 = 1;
    pub const INVALID_INPUT: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const VALUE_TOO_SMALL: i32 = 4;
}

/// Absolute slack when comparing a recomputed accuracy against a claim.
pub const VERIFY_SLACK: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Format { path: PathBuf, source: FormatError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Solver(#[from] qgame::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(qgame::Error::Numerical { .. }) => exit::NUMERICAL,
            CliError::Solver(qgame::Error::ValueTooSmall { .. }) => exit::VALUE_TOO_SMALL,
            _ => exit::INVALID_INPUT,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qgame-cli", version, about = "Approximate equilibria of zero-sum quantum games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute an approximate equilibrium and write a result file.
    Solve(SolveArgs),
    /// Recompute the certificate of a candidate or result file.
    Verify(VerifyArgs),
    /// Convert between an observable and its super-operator.
    Cj(CjArgs),
    /// Approximate a positive semidefinite program in super-operator form.
    Psdp(PsdpArgs),
    /// Write a seeded random instance.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Override the step size (default ε/8).
    #[arg(long)]
    pub mu: Option<f64>,
    /// Override the iteration count.
    #[arg(long)]
    pub iters: Option<usize>,
    /// Record per-iteration payoffs and the regret bounds.
    #[arg(long)]
    pub trace: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub input: PathBuf,
    /// Candidate file, or a result file written by `solve`.
    pub candidate: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    ToSuperop,
    ToObservable,
}

#[derive(Debug, Args)]
pub struct CjArgs {
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub direction: Direction,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PsdpArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    pub epsilon: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Observable,
    PsdObservable,
    Measurement,
    Psdp,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_DIM))]
    pub n: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=MAX_DIM))]
    pub m: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of outcomes for `--kind measurement`.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=64))]
    pub outcomes: u64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command line. Summaries go to `out`, diagnostics to
/// `err`; the return value is the process exit code.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args, out),
        Command::Verify(args) => cmd_verify(&args, out),
        Command::Cj(args) => cmd_cj(&args, out),
        Command::Psdp(args) => cmd_psdp(&args, out),
        Command::Gen(args) => cmd_gen(&args, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_instance(path: &Path) -> Result<(Instance, Vec<u8>), CliError> {
    let bytes = read(path)?;
    let inst = parse_instance(&bytes).map_err(|source| CliError::Format {
        path: path.to_path_buf(),
        source,
    })?;
    Ok((inst, bytes))
}

fn game_of(inst: Instance, command: &str) -> Result<PayoffObservable, CliError> {
    match inst {
        Instance::Observable(obs) => Ok(obs),
        Instance::Measurement(meas) => Ok(PayoffObservable::from_measurement(&meas)?),
        other => Err(CliError::Usage(format!(
            "{command} expects an observable or measurement instance, found kind `{}`",
            other.kind()
        ))),
    }
}

fn emit(out: &mut dyn Write, line: &str) {
    // a closed stdout must not turn a finished solve into a failure
    let _ = writeln!(out, "{line}");
}

pub fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (inst, bytes) = load_instance(&args.input)?;
    let obs = game_of(inst, "solve")?;
    let mut params = SolverParams::new(args.epsilon);
    params.mu_override = args.mu;
    params.iter_override = args.iters;
    params.record_trace = args.trace;

    let start = Instant::now();
    let res = solve(&obs, &params)?;
    let elapsed = start.elapsed().as_secs_f64();

    let file = ResultFile::from_solve(digest(&bytes), &res, &params, elapsed);
    write(&args.out, &file.to_canonical())?;
    emit(
        out,
        &format!(
            "value ∈ [{:.6}, {:.6}], certified ε = {:.3e}",
            res.value_lo, res.value_hi, res.certified_epsilon
        ),
    );
    Ok(exit::OK)
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (inst, _) = load_instance(&args.input)?;
    let obs = game_of(inst, "verify")?;
    let bytes = read(&args.candidate)?;
    let claim = parse_claim(&bytes).map_err(|source| CliError::Format {
        path: args.candidate.clone(),
        source,
    })?;
    let cert = equilibrium_gap(&obs, claim.rho(), claim.sigma())?;
    emit(out, &format!("value_lo = {:.16e}", cert.value_lo));
    emit(out, &format!("value_hi = {:.16e}", cert.value_hi));
    emit(out, &format!("gap = {:.16e}", cert.gap));
    emit(out, &format!("certified_epsilon = {:.16e}", cert.certified_epsilon));
    let claimed = claim.epsilon();
    if cert.certified_epsilon <= claimed + VERIFY_SLACK {
        emit(out, &format!("verified: certified ε ≤ claimed {claimed:e}"));
        Ok(exit::OK)
    } else {
        emit(out, &format!("rejected: certified ε exceeds claimed {claimed:e}"));
        Ok(exit::VERIFY_FAILED)
    }
}

pub fn cmd_cj(args: &CjArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (inst, _) = load_instance(&args.input)?;
    let converted = match (args.direction, inst) {
        (Direction::ToSuperop, Instance::Observable(obs)) => Instance::Superop(SuperopFile {
            n: obs.n(),
            m: obs.m(),
            images: obs.superop().matrix_unit_images(),
        }),
        (Direction::ToObservable, Instance::Superop(s)) => {
            let r = observable_from_images(s.n, s.m, &s.images)?;
            Instance::Observable(PayoffObservable::new(s.n, s.m, r)?)
        }
        (dir, other) => {
            let wanted = match dir {
                Direction::ToSuperop => "observable",
                Direction::ToObservable => "superop",
            };
            return Err(CliError::Usage(format!(
                "this direction expects a `{wanted}` file, found kind `{}`",
                other.kind()
            )));
        }
    };
    write(&args.out, &converted.to_canonical())?;
    emit(out, &format!("wrote {} to {}", converted.kind(), args.out.display()));
    Ok(exit::OK)
}

pub fn cmd_psdp(args: &PsdpArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (inst, bytes) = load_instance(&args.input)?;
    let sdp = match inst {
        Instance::Psdp(sdp) => sdp,
        other => {
            return Err(CliError::Usage(format!(
                "psdp expects a psdp instance, found kind `{}`",
                other.kind()
            )))
        }
    };
    let start = Instant::now();
    let res = solve_psdp(&sdp, args.epsilon)?;
    let elapsed = start.elapsed().as_secs_f64();
    let file = PsdpResultFile::from_solve(digest(&bytes), args.epsilon, &res, elapsed);
    write(&args.out, &file.to_canonical())?;
    emit(out, &format!("opt ∈ [{:.6}, {:.6}]", res.opt_lo, res.opt_hi));
    Ok(exit::OK)
}

/// The instance `gen` writes for the given arguments.
pub fn generate(kind: GenKind, n: usize, m: usize, seed: u64, outcomes: usize) -> Result<Instance, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let inst = match kind {
        GenKind::Observable => Instance::Observable(random::observable(&mut rng, n, m)?),
        GenKind::PsdObservable => Instance::Observable(random::unit_psd_observable(&mut rng, n, m)?),
        GenKind::Measurement => Instance::Measurement(random::measurement(&mut rng, n, m, outcomes)?),
        GenKind::Psdp => {
            let a = random::psd(&mut rng, n).shift(0.5);
            let b = random::psd(&mut rng, m).shift(0.5);
            let choi = random::psd(&mut rng, n * m).shift(0.1);
            Instance::Psdp(SuperOpSdp::new(a, b, choi)?)
        }
    };
    Ok(inst)
}

pub fn cmd_gen(args: &GenArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let (n, m) = (args.n as usize, args.m as usize);
    if n * m > MAX_DIM as usize {
        return Err(CliError::Usage(format!("n·m must not exceed {MAX_DIM}")));
    }
    let inst = generate(args.kind, n, m, args.seed, args.outcomes as usize)?;
    write(&args.out, &inst.to_canonical())?;
    emit(out, &format!("wrote {} to {}", inst.kind(), args.out.display()));
    Ok(exit::OK)
}
