//! The `omega` command line. Commands return their output and exit code
//! instead of printing, so they can be exercised in-process.

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::canon::{is_lrrf, is_qhf, verify_row_equivalence, FormReport};
use crate::engine::{run_with, EliminationState, Strategy};
use crate::error::Error;
use crate::matrix::{Builtin, RowFiniteMatrix};
use crate::oneshot::one_shot;
use crate::reorder::extended_run;
use crate::snapshot::{
    reorder_tsv, state_tsv, Emit, SolveSnapshot, StabilitySnapshot, StateSnapshot,
};
use crate::solver::{column_reach, general_solution, verify_solution, Rhs};
use crate::spec::{MatrixSpec, RhsSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CERTIFICATE: i32 = 3;

pub const SEED_VAR: &str = "OMEGA_SEED";
const DEFAULT_SEED: u64 = 0x0005_eed0;

#[derive(Debug, Parser)]
#[command(name = "omega", version, about = "Infinite Gauss-Jordan elimination with rightmost pivots")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the staged elimination and emit the reduced rows.
    Reduce(ReduceArgs),
    /// Run the elimination with reordering and emit the quasi-Hermite prefix.
    Qhf(QhfArgs),
    /// Solve A x = c symbolically.
    Solve(SolveArgs),
    /// Run a named check; exit 0 if it passes and 1 if not.
    Verify(VerifyArgs),
    /// Report when each row last changed and whether it is certified.
    Stability(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyArg {
    Rps,
    Lps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Lrrf,
    Qhf,
    Roweq,
    Oracle,
    Solution,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Spec file, `builtin:NAME`, or a bare builtin name.
    #[arg(long)]
    pub matrix: String,
    /// Index of the last input row to process.
    #[arg(long, default_value_t = 9)]
    pub stages: usize,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
    /// Seed the run with the one-shot reduction of the whole truncation.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = StrategyArg::Rps)]
    pub strategy: StrategyArg,
    /// Comma-separated subset of rows,passage,pivots,pivot_history,last_changed.
    #[arg(long, default_value = "all")]
    pub emit: String,
}

#[derive(Debug, Args)]
pub struct QhfArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Largest prefix to report a stability index for; defaults to --stages.
    #[arg(long)]
    pub prefix: Option<usize>,
    #[arg(long, default_value = "all")]
    pub emit: String,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Spec file or `symbolic:NAME`.
    #[arg(long, default_value = "symbolic:c")]
    pub rhs: String,
    /// Last solution column to realize; defaults to --stages.
    #[arg(long)]
    pub horizon: Option<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }
}

fn failure(e: Error) -> Outcome {
    let code = match e {
        Error::CertificateViolation { .. } => EXIT_CERTIFICATE,
        _ => EXIT_PARSE,
    };
    Outcome {
        code,
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
    }
}

pub fn load_matrix(arg: &str) -> Result<RowFiniteMatrix, Error> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return MatrixSpec::builtin(name.parse()?).build();
    }
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| Error::parse(0, format!("{arg}: {e}")))?;
        return MatrixSpec::parse(&text)?.build();
    }
    match arg.parse::<Builtin>() {
        Ok(b) => MatrixSpec::builtin(b).build(),
        Err(_) => Err(Error::parse(0, format!("no such file or builtin: {arg}"))),
    }
}

pub fn load_rhs(arg: &str) -> Result<RhsSpec, Error> {
    if let Some(name) = arg.strip_prefix("symbolic:") {
        return RhsSpec::parse(&format!("field rational\nrhs symbolic {name}"));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| Error::parse(0, format!("{arg}: {e}")))?;
    RhsSpec::parse(&text)
}

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn reduced_state(m: &RowFiniteMatrix, common: &CommonArgs) -> Result<EliminationState, Error> {
    if common.oracle {
        Ok(one_shot(m, common.stages)?.state)
    } else {
        run_with(m, common.stages, Strategy::Rps)
    }
}

fn cmd_reduce(args: &ReduceArgs) -> Result<Outcome, Error> {
    let m = load_matrix(&args.common.matrix)?;
    let emit = Emit::parse_list(&args.emit)?;
    let strategy = match args.strategy {
        StrategyArg::Rps => Strategy::Rps,
        StrategyArg::Lps => Strategy::Lps,
    };
    let mut stderr = String::new();
    let state = match strategy {
        Strategy::Rps => reduced_state(&m, &args.common)?,
        Strategy::Lps => {
            if args.common.oracle {
                return Err(Error::parse(0, "--oracle applies to rightmost pivots only"));
            }
            let mut state = EliminationState::new(m.field(), Strategy::Lps);
            let mut born = Vec::new();
            for k in 0..=args.common.stages {
                state.step_lps(&m.row_at(k)?)?;
                born.push(state.rows()[k].maxs());
            }
            let drifted: Vec<String> = (0..state.len())
                .filter(|&i| state.rows()[i].maxs() != born[i])
                .map(|i| {
                    format!(
                        "row {i} length {} -> {}",
                        born[i].map_or(-1, |c| c as i64),
                        state.rows()[i].maxs().map_or(-1, |c| c as i64)
                    )
                })
                .collect();
            if !drifted.is_empty() {
                stderr = format!(
                    "warning: leftmost pivots moved row lengths: {}\n",
                    drifted.join(", ")
                );
            }
            state
        }
    };
    let stdout = match args.common.format {
        Format::Json => json(&StateSnapshot::from_state(&state, &emit)),
        Format::Tsv => state_tsv(&state, &emit),
    };
    Ok(Outcome {
        code: EXIT_OK,
        stdout,
        stderr,
    })
}

fn cmd_qhf(args: &QhfArgs) -> Result<Outcome, Error> {
    let m = load_matrix(&args.common.matrix)?;
    let emit = Emit::parse_list(&args.emit)?;
    let n = args.common.stages;
    let prefix = args.prefix.unwrap_or(n);
    if prefix > n {
        return Err(Error::IndexOutOfRange {
            index: prefix,
            limit: n + 1,
        });
    }
    let (state, reorder) = extended_run(&m, n, args.common.oracle.then_some(n))?;
    Ok(Outcome::ok(match args.common.format {
        Format::Json => json(&StateSnapshot::from_reorder(&state, &reorder, prefix, &emit)?),
        Format::Tsv => reorder_tsv(&state, &reorder, prefix, &emit)?,
    }))
}

fn cmd_solve(args: &SolveArgs) -> Result<Outcome, Error> {
    let m = load_matrix(&args.common.matrix)?;
    let rhs = load_rhs(&args.rhs)?;
    let rhs_field = match &rhs.rhs {
        Rhs::Symbolic(_) => m.field(),
        Rhs::Explicit(_) => rhs.field,
    };
    if rhs_field != m.field() {
        return Err(Error::FieldMismatch {
            left: m.field().to_string(),
            right: rhs.field.to_string(),
        });
    }
    let state = reduced_state(&m, &args.common)?;
    let horizon = args.horizon.unwrap_or(args.common.stages);
    let res = general_solution(&state, &rhs.rhs, horizon)?;
    let snap = SolveSnapshot::new(&res);
    Ok(Outcome::ok(match args.common.format {
        Format::Json => json(&snap),
        Format::Tsv => snap.to_tsv(),
    }))
}

#[derive(Debug, Serialize)]
struct CheckReport {
    check: String,
    holds: bool,
    detail: serde_json::Value,
}

fn cmd_verify(args: &VerifyArgs) -> Result<Outcome, Error> {
    let m = load_matrix(&args.common.matrix)?;
    let n = args.common.stages;
    let (holds, detail) = match args.check {
        Check::Lrrf => {
            let state = reduced_state(&m, &args.common)?;
            let rep: FormReport = is_lrrf(state.rows());
            (rep.holds, serde_json::to_value(rep).expect("serializable"))
        }
        Check::Qhf => {
            let (_, reorder) = extended_run(&m, n, args.common.oracle.then_some(n))?;
            let rep = is_qhf(reorder.q_rows());
            (rep.holds, serde_json::to_value(rep).expect("serializable"))
        }
        Check::Roweq => {
            let (state, reorder) = extended_run(&m, n, args.common.oracle.then_some(n))?;
            let eq = verify_row_equivalence(&reorder.q_passage(&state), &m, reorder.q_rows(), n)?;
            (eq.holds, serde_json::to_value(eq).expect("serializable"))
        }
        Check::Oracle => {
            let shot = one_shot(&m, n)?;
            let staged = run_with(&m, n, Strategy::Rps)?;
            let first = (0..=n).find(|&i| shot.state.rows()[i] != staged.rows()[i]
                || shot.state.passage()[i] != staged.passage()[i]);
            let holds = shot.state == staged;
            (holds, serde_json::json!({ "first_mismatch": first }))
        }
        Check::Solution => {
            let state = reduced_state(&m, &args.common)?;
            let reach = column_reach(&m, n)?;
            let c = Rhs::Symbolic("c".into());
            let res = general_solution(&state, &c, reach)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed_from_env());
            let check = verify_solution(&m, &res.general, &c, &res.constraints, n, 5, &mut rng)?;
            (
                check.holds,
                serde_json::json!({ "witness": check.witness }),
            )
        }
    };
    let name = format!("{:?}", args.check).to_lowercase();
    let stdout = match args.common.format {
        Format::Json => json(&CheckReport {
            check: name,
            holds,
            detail,
        }),
        Format::Tsv => format!(
            "{name}\t{}\t{}\n",
            if holds { "pass" } else { "fail" },
            detail
        ),
    };
    Ok(Outcome {
        code: if holds { EXIT_OK } else { EXIT_CHECK_FAILED },
        stdout,
        stderr: String::new(),
    })
}

fn cmd_stability(args: &CommonArgs) -> Result<Outcome, Error> {
    let m = load_matrix(&args.matrix)?;
    let state = reduced_state(&m, args)?;
    let snap = StabilitySnapshot::new(&state)?;
    Ok(Outcome::ok(match args.format {
        Format::Json => json(&snap),
        Format::Tsv => snap.to_tsv(),
    }))
}

pub fn execute(cli: &Cli) -> Outcome {
    let result = match &cli.command {
        Command::Reduce(a) => cmd_reduce(a),
        Command::Qhf(a) => cmd_qhf(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Stability(a) => cmd_stability(a),
    };
    result.unwrap_or_else(failure)
}

/// Parses arguments (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome::ok(text)
            }
        }
    }
}
