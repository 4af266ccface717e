//! The `cghz` command line: `distill`, `sweep`, `iterate` and `state`.
//!
//! Options may come from flags or from a JSON file given with `--config`
//! (same keys, `F` for the fidelity); flags win. Output goes to `--out`, or
//! to stdout when no path is given. `CGHZ_OUTPUT_DIR` redirects relative
//! paths and supplies a default file name when `--out` is absent.
//!
//! Exit codes: 0 success, 2 invalid configuration, 3 internal invariant violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{fidelity_map, iterate, success_probability};
use crate::channels::{make_mixture, ErrorKind};
use crate::error::Error;
use crate::protocols::{
    correct_physical_bitflip, distill_round, ExecMode, PolicyKind, RoundResult, SelectionPolicy, Strategy,
};
use crate::state::{default_modes, BellKind, LogicKind, PureState, Sign, StateKind};

pub const OUTPUT_DIR_ENV: &str = "CGHZ_OUTPUT_DIR";
pub const SWEEP_HEADER: &str = "F_in,F_out,p_success,kind,policy,m,mode";
pub const DISTILL_HEADER: &str =
    "F_in,F_out_exact,F_out_formula,p_success_exact,p_success_formula,policy,m,kind,mode,trials,seed";

const DEFAULT_TRIALS: u64 = 100_000;
const VERIFY_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "cghz", version, about = "Logic-qubit entanglement distillation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one round (or a physical correction) at F or at every grid point.
    Distill(RunArgs),
    /// Output fidelity and yield over a grid of F, as CSV.
    Sweep(RunArgs),
    /// Iterate the fidelity map from F0, optionally checking each round by simulation.
    Iterate(RunArgs),
    /// Print a canonical state.
    State(StateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum KindArg {
    LogicBit,
    LogicPhase,
    PhysicalBit,
    PhysicalPhase,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum PolicyArg {
    Canonical,
    Extended,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum ModeArg {
    Exact,
    Montecarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum StrategyArg {
    Known,
    Localize,
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunArgs {
    /// JSON file with any of these options; flags override it.
    #[arg(long)]
    #[serde(skip)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Photons per logic qubit.
    #[arg(long)]
    m: Option<usize>,
    /// Input fidelity.
    #[arg(long = "F", visible_alias = "f", allow_negative_numbers = true)]
    #[serde(rename = "F")]
    f: Option<f64>,
    /// start:stop:step, both ends inclusive.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    rounds: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Physical bit-flip correction strategy.
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// 1-based photon of logic qubit A hit by a physical error.
    #[arg(long)]
    flip: Option<usize>,
    /// Check each iterated round against an exact simulation.
    #[arg(long)]
    #[serde(default)]
    verify_exact: bool,
}

#[derive(Args, Debug)]
struct StateArgs {
    /// phi+|phi-|psi+|psi- (two photons), Phi+|Phi-|Psi+|Psi- (logic), ghz+|ghz-, upsilon.
    which: String,
    #[arg(long, default_value_t = 2)]
    m: usize,
    #[arg(long, default_value_t = 1)]
    flip: usize,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Invalid(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) | Error::CorrectionIncomplete(_) | Error::TagOverflow { .. } => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn invalid<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Invalid(msg.into()))
}

/// Resolved options, after merging the config file and the flags.
#[derive(Clone, Debug)]
struct RunConfig {
    kind: KindArg,
    m: usize,
    f: Option<f64>,
    grid: Option<Vec<f64>>,
    policy: PolicyKind,
    mode: ModeArg,
    trials: u64,
    seed: Option<u64>,
    rounds: usize,
    format: Option<FormatArg>,
    out: Option<PathBuf>,
    strategy: StrategyArg,
    flip: usize,
    verify_exact: bool,
}

impl RunConfig {
    fn resolve(flags: RunArgs) -> CliResult<Self> {
        let file: RunArgs = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .or_else(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
                serde_json::from_str(&text)
                    .or_else(|e| invalid(format!("bad config {}: {e}", path.display())))?
            }
            None => RunArgs::default(),
        };
        let grid = flags.grid.or(file.grid).map(|g| parse_grid(&g)).transpose()?;
        let cfg = RunConfig {
            kind: flags.kind.or(file.kind).unwrap_or(KindArg::LogicBit),
            m: flags.m.or(file.m).unwrap_or(2),
            f: flags.f.or(file.f),
            grid,
            policy: match flags.policy.or(file.policy).unwrap_or(PolicyArg::Canonical) {
                PolicyArg::Canonical => PolicyKind::Canonical,
                PolicyArg::Extended => PolicyKind::Extended,
            },
            mode: flags.mode.or(file.mode).unwrap_or(ModeArg::Exact),
            trials: flags.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS),
            seed: flags.seed.or(file.seed),
            rounds: flags.rounds.or(file.rounds).unwrap_or(1),
            format: flags.format.or(file.format),
            out: flags.out.or(file.out),
            strategy: flags.strategy.or(file.strategy).unwrap_or(StrategyArg::Known),
            flip: flags.flip.or(file.flip).unwrap_or(1),
            verify_exact: flags.verify_exact || file.verify_exact,
        };
        if cfg.m < 2 {
            return invalid(format!("m must be at least 2, got {}", cfg.m));
        }
        if cfg.mode == ModeArg::Montecarlo {
            if cfg.trials == 0 {
                return invalid("trials must be at least 1");
            }
            if cfg.seed.is_none() {
                return invalid("montecarlo mode needs --seed");
            }
            if cfg.kind == KindArg::PhysicalBit {
                return invalid("physical bit-flip correction is deterministic; use --mode exact");
            }
        }
        Ok(cfg)
    }

    fn error_kind(&self) -> ErrorKind {
        match self.kind {
            KindArg::LogicBit => ErrorKind::LogicBitFlip,
            KindArg::LogicPhase => ErrorKind::LogicPhaseFlip,
            KindArg::PhysicalBit => ErrorKind::PhysicalBitFlip(self.flip),
            KindArg::PhysicalPhase => ErrorKind::PhysicalPhaseFlip(self.flip),
        }
    }

    fn exec_mode(&self) -> ExecMode {
        match self.mode {
            ModeArg::Exact => ExecMode::Exact,
            ModeArg::Montecarlo => ExecMode::MonteCarlo { trials: self.trials, seed: self.seed.unwrap_or(0) },
        }
    }

    fn kind_name(&self) -> &'static str {
        match self.kind {
            KindArg::LogicBit => "logic-bit",
            KindArg::LogicPhase => "logic-phase",
            KindArg::PhysicalBit => "physical-bit",
            KindArg::PhysicalPhase => "physical-phase",
        }
    }

    fn mode_name(&self) -> &'static str {
        match self.mode {
            ModeArg::Exact => "exact",
            ModeArg::Montecarlo => "montecarlo",
        }
    }

    fn policy_name(&self) -> String {
        match (self.kind, self.strategy) {
            (KindArg::PhysicalBit, StrategyArg::Known) => "known".into(),
            (KindArg::PhysicalBit, StrategyArg::Localize) => "localize".into(),
            _ => self.policy.to_string(),
        }
    }

    fn points(&self) -> CliResult<Vec<f64>> {
        match (&self.grid, self.f) {
            (Some(g), _) => Ok(g.clone()),
            (None, Some(f)) => Ok(vec![f]),
            (None, None) => invalid("give --F or --grid"),
        }
    }
}

/// `start:stop:step` with both ends inclusive; points are rounded to 12 decimals.
fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return invalid(format!("grid {text:?} is not start:stop:step"));
    };
    let num = |s: &str| s.trim().parse::<f64>().or_else(|_| invalid(format!("bad number {s:?} in grid")));
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if step <= 0.0 || !step.is_finite() {
        return invalid(format!("grid step must be > 0, got {step}"));
    }
    if stop < start {
        return invalid(format!("grid stop {stop} is below start {start}"));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| ((start + i as f64 * step) * 1e12).round() / 1e12).collect())
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Point {
    f_in: f64,
    f_out: f64,
    f_out_formula: f64,
    p: f64,
    p_formula: f64,
}

fn simulate(cfg: &RunConfig, f: f64) -> CliResult<Point> {
    let kind = cfg.error_kind();
    let input = make_mixture(kind, f, cfg.m)?;
    let (r, f_out_formula, p_formula): (RoundResult, f64, f64) = match cfg.kind {
        KindArg::PhysicalBit => {
            let strategy = match cfg.strategy {
                StrategyArg::Known => Strategy::KnownLocation(cfg.flip),
                StrategyArg::Localize => Strategy::Localize,
            };
            (correct_physical_bitflip(&input, cfg.m, strategy)?, 1.0, 1.0)
        }
        _ => {
            let policy = SelectionPolicy::of_kind(cfg.policy, cfg.m)?;
            let r = distill_round(&input, kind, cfg.m, &policy, cfg.exec_mode())?;
            (r, fidelity_map(f)?, success_probability(f, cfg.m, kind, cfg.policy)?)
        }
    };
    Ok(Point { f_in: f, f_out: r.output_fidelity, f_out_formula, p: r.success_probability, p_formula })
}

fn simulate_all(cfg: &RunConfig, points: &[f64]) -> CliResult<Vec<Point>> {
    points.par_iter().map(|&f| simulate(cfg, f)).collect()
}

fn csv_bytes(header: &str, rows: &[Vec<String>]) -> CliResult<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let internal = |e: csv::Error| CliError::Internal(e.to_string());
    w.write_record(header.split(',')).map_err(internal)?;
    for row in rows {
        w.write_record(row).map_err(internal)?;
    }
    w.into_inner().map_err(|e| CliError::Internal(e.to_string()))
}

fn json_bytes<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
struct DistillRecord {
    #[serde(rename = "F_in")]
    f_in: f64,
    #[serde(rename = "F_out_exact")]
    f_out_exact: f64,
    #[serde(rename = "F_out_formula")]
    f_out_formula: f64,
    p_success_exact: f64,
    p_success_formula: f64,
    policy: String,
    m: usize,
    kind: &'static str,
    mode: &'static str,
    trials: Option<u64>,
    seed: Option<u64>,
}

fn cmd_distill(cfg: &RunConfig) -> CliResult<Vec<u8>> {
    let points = simulate_all(cfg, &cfg.points()?)?;
    let (trials, seed) = match cfg.mode {
        ModeArg::Exact => (None, None),
        ModeArg::Montecarlo => (Some(cfg.trials), cfg.seed),
    };
    let records: Vec<DistillRecord> = points
        .iter()
        .map(|p| DistillRecord {
            f_in: p.f_in,
            f_out_exact: p.f_out,
            f_out_formula: p.f_out_formula,
            p_success_exact: p.p,
            p_success_formula: p.p_formula,
            policy: cfg.policy_name(),
            m: cfg.m,
            kind: cfg.kind_name(),
            mode: cfg.mode_name(),
            trials,
            seed,
        })
        .collect();
    match cfg.format.unwrap_or(FormatArg::Csv) {
        FormatArg::Json => json_bytes(&records),
        FormatArg::Csv => {
            let opt = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
            let rows: Vec<Vec<String>> = records
                .iter()
                .map(|r| {
                    vec![
                        num(r.f_in),
                        num(r.f_out_exact),
                        num(r.f_out_formula),
                        num(r.p_success_exact),
                        num(r.p_success_formula),
                        r.policy.clone(),
                        r.m.to_string(),
                        r.kind.to_string(),
                        r.mode.to_string(),
                        opt(r.trials),
                        opt(r.seed),
                    ]
                })
                .collect();
            csv_bytes(DISTILL_HEADER, &rows)
        }
    }
}

fn cmd_sweep(cfg: &RunConfig) -> CliResult<Vec<u8>> {
    let Some(grid) = &cfg.grid else {
        return invalid("sweep needs --grid start:stop:step");
    };
    if cfg.format == Some(FormatArg::Json) {
        return invalid("sweep writes CSV only");
    }
    let mut grid = grid.clone();
    grid.sort_by(f64::total_cmp);
    let rows: Vec<Vec<String>> = simulate_all(cfg, &grid)?
        .iter()
        .map(|p| {
            vec![
                num(p.f_in),
                num(p.f_out),
                num(p.p),
                cfg.kind_name().to_string(),
                cfg.policy_name(),
                cfg.m.to_string(),
                cfg.mode_name().to_string(),
            ]
        })
        .collect();
    csv_bytes(SWEEP_HEADER, &rows)
}

#[derive(Serialize)]
struct IterateRecord {
    f_sequence: Vec<f64>,
    success_probs: Vec<f64>,
    expected_yield: f64,
    verified: bool,
}

fn cmd_iterate(cfg: &RunConfig) -> CliResult<Vec<u8>> {
    if cfg.format == Some(FormatArg::Csv) {
        return invalid("iterate writes JSON only");
    }
    if cfg.kind == KindArg::PhysicalBit {
        return invalid("physical bit flips are corrected in one step; nothing to iterate");
    }
    let Some(f0) = cfg.f else {
        return invalid("iterate needs --F");
    };
    let kind = cfg.error_kind();
    let trace = iterate(f0, cfg.rounds, cfg.m, kind, cfg.policy)?;
    let verified = cfg.verify_exact && {
        let policy = SelectionPolicy::of_kind(cfg.policy, cfg.m)?;
        let mut ok = true;
        for (i, f) in trace.f_sequence[..cfg.rounds].iter().enumerate() {
            let r = distill_round(&make_mixture(kind, *f, cfg.m)?, kind, cfg.m, &policy, ExecMode::Exact)?;
            ok &= (r.output_fidelity - trace.f_sequence[i + 1]).abs() <= VERIFY_TOL
                && (r.success_probability - trace.success_probs[i]).abs() <= VERIFY_TOL;
        }
        ok
    };
    json_bytes(&IterateRecord {
        f_sequence: trace.f_sequence,
        success_probs: trace.success_probs,
        expected_yield: trace.expected_yield,
        verified,
    })
}

fn build_state(args: &StateArgs) -> CliResult<PureState> {
    let m = args.m;
    let bell = |k| PureState::bell(k, &default_modes('a', 2));
    let logic = |k| StateKind::Logic(k).build(m);
    let state = match args.which.as_str() {
        "phi+" => bell(BellKind::PhiPlus),
        "phi-" => bell(BellKind::PhiMinus),
        "psi+" => bell(BellKind::PsiPlus),
        "psi-" => bell(BellKind::PsiMinus),
        "Phi+" => logic(LogicKind::PhiPlus),
        "Phi-" => logic(LogicKind::PhiMinus),
        "Psi+" => logic(LogicKind::PsiPlus),
        "Psi-" => logic(LogicKind::PsiMinus),
        "ghz+" => StateKind::Ghz(Sign::Plus).build(m),
        "ghz-" => StateKind::Ghz(Sign::Minus).build(m),
        "upsilon" => PureState::upsilon(m, args.flip),
        other => return invalid(format!("unknown state {other:?}")),
    }?;
    Ok(state)
}

#[derive(Serialize)]
struct StateRecord {
    registry: Vec<String>,
    terms: Vec<TermRecord>,
}

#[derive(Serialize)]
struct TermRecord {
    ket: String,
    re: f64,
    im: f64,
}

fn cmd_state(args: &StateArgs) -> CliResult<Vec<u8>> {
    let state = build_state(args)?;
    match args.format {
        Some(FormatArg::Json) => json_bytes(&StateRecord {
            registry: state.registry().iter().map(|m| m.to_string()).collect(),
            terms: state
                .terms()
                .map(|(ket, _, a)| TermRecord { ket, re: a.re, im: a.im })
                .collect(),
        }),
        Some(FormatArg::Csv) => {
            let rows: Vec<Vec<String>> =
                state.terms().map(|(ket, _, a)| vec![ket, num(a.re), num(a.im)]).collect();
            csv_bytes("ket,re,im", &rows)
        }
        None => {
            let mut s = String::new();
            let _ = writeln!(s, "# modes {}", state.registry().iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" "));
            for (ket, _, a) in state.terms() {
                let _ = writeln!(s, "{:+.12} {:+.12}i  |{ket}>", a.re, a.im);
            }
            Ok(s.into_bytes())
        }
    }
}

fn destination(out: Option<&Path>, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match (out, dir) {
        (Some(p), Some(d)) if p.is_relative() => Some(d.join(p)),
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

fn emit(bytes: &[u8], out: Option<&Path>, default_name: &str, stdout: &mut dyn Write) -> CliResult<()> {
    match destination(out, default_name) {
        Some(path) => std::fs::write(&path, bytes)
            .or_else(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(bytes).or_else(|e| invalid(format!("cannot write output: {e}"))),
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::State(args) => {
            let bytes = cmd_state(&args)?;
            emit(&bytes, args.out.as_deref(), "state.txt", stdout)
        }
        Command::Distill(a) => {
            let cfg = RunConfig::resolve(a)?;
            let name = if cfg.format == Some(FormatArg::Json) { "distill.json" } else { "distill.csv" };
            emit(&cmd_distill(&cfg)?, cfg.out.as_deref(), name, stdout)
        }
        Command::Sweep(a) => {
            let cfg = RunConfig::resolve(a)?;
            emit(&cmd_sweep(&cfg)?, cfg.out.as_deref(), "sweep.csv", stdout)
        }
        Command::Iterate(a) => {
            let cfg = RunConfig::resolve(a)?;
            emit(&cmd_iterate(&cfg)?, cfg.out.as_deref(), "iterate.json", stdout)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let (CliError::Invalid(msg) | CliError::Internal(msg)) = &e;
            let _ = writeln!(stderr, "error: {msg}");
            e.code()
        }
    }
}
