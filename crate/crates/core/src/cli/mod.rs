//! The `cohwork` command line.
//!
//! Exit codes: 0 success, 1 failed check, 2 usage or config error, 3 I/O.

pub mod report;
pub mod scenario;
pub mod suite;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::cwp::{apply_cwp, build_cwp_unitary, CoherentWorkRecord, PROCESS_TOL};
use crate::decomposition::{deconvolve, DeconvolveOptions};
use crate::error::{Error, Result};
use crate::io::{read_distribution, read_state};
use crate::ladder::LadderState;
use crate::potential::{cumulants, lambda, mean_coherence};
use report::{emit, file_hash, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cohwork", version, about = "Coherent work processes and coherent Crooks checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for non-trivial factorizations p = q * r.
    Decompose(DecomposeArgs),
    /// Build or re-verify a coherent work process.
    #[command(subcommand)]
    Cwp(CwpCommand),
    /// Effective potential, cumulants and mean coherence on a beta grid (CSV).
    Potential(PotentialArgs),
    /// Coherent Crooks scenarios.
    #[command(subcommand)]
    Crooks(CrooksCommand),
    /// Reproduce the worked cases and print PASS/FAIL per case.
    Examples(ExamplesArgs),
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    /// Distribution file.
    pub dist: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 16)]
    pub exhaustive_cap: usize,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON object overriding `tol`, `exhaustive_cap`, `seed`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CwpCommand {
    /// Build V for p = q * r and run it on the zero-phase state of p.
    Build(CwpBuildArgs),
    /// Re-verify every invariant of a stored record.
    Check(CwpCheckArgs),
}

#[derive(Debug, Args)]
pub struct CwpBuildArgs {
    #[arg(long)]
    pub p: PathBuf,
    #[arg(long)]
    pub q: PathBuf,
    #[arg(long)]
    pub r: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CwpCheckArgs {
    pub record: PathBuf,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[arg(long)]
    pub state: PathBuf,
    /// `start:stop:step`, inclusive of `stop`.
    #[arg(long, default_value = "0:5:0.05")]
    pub beta_grid: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON object overriding `beta_grid`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CrooksCommand {
    /// Run a scenario file.
    Run(CrooksRunArgs),
}

#[derive(Debug, Args)]
pub struct CrooksRunArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExamplesArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parse `argv` (including the program name) and run, writing normal output
/// to `out` and diagnostics to `err`.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            if let Some(text) = outcome.stdout {
                let _ = out.write_all(text.as_bytes());
            }
            for w in outcome.warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            if outcome.passed { EXIT_OK } else { EXIT_CHECK }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) | Error::Json(_) => EXIT_IO,
        Error::Config(_) => EXIT_USAGE,
        _ => EXIT_CHECK,
    }
}

struct Outcome {
    stdout: Option<String>,
    passed: bool,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(stdout: Option<String>, passed: bool) -> Self {
        Self { stdout, passed, warnings: Vec::new() }
    }
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Decompose(a) => decompose(a),
        Command::Cwp(CwpCommand::Build(a)) => cwp_build(a),
        Command::Cwp(CwpCommand::Check(a)) => cwp_check(a),
        Command::Potential(a) => potential(a),
        Command::Crooks(CrooksCommand::Run(a)) => crooks_run(a),
        Command::Examples(a) => examples(a),
    }
}

fn read_overrides<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<Option<T>> {
    path.map(|p| Ok(serde_json::from_str(&std::fs::read_to_string(p)?)?)).transpose()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct DecomposeOverrides {
    tol: Option<f64>,
    exhaustive_cap: Option<usize>,
    seed: Option<u64>,
}

#[derive(Serialize)]
struct DecomposeConfig<'a> {
    dist_sha256: String,
    options: &'a DeconvolveOptions,
}

fn decompose(a: DecomposeArgs) -> Result<Outcome> {
    let o: DecomposeOverrides = read_overrides(a.config.as_deref())?.unwrap_or_default();
    let opts = DeconvolveOptions {
        tol: o.tol.unwrap_or(a.tol),
        exhaustive_cap: o.exhaustive_cap.unwrap_or(a.exhaustive_cap),
        seed: o.seed.unwrap_or(a.seed),
        ..DeconvolveOptions::default()
    };
    if !(opts.tol > 0.0) {
        return Err(Error::Config("tol must be positive".into()));
    }
    let p = read_distribution(&a.dist)?;
    let result = deconvolve(&p, &opts)?;
    let config = DecomposeConfig { dist_sha256: file_hash(&a.dist)?, options: &opts };
    let report = Report::new("decompose", &config, &[("tol", opts.tol)], true, result)?;
    Ok(Outcome::new(emit(&report.to_json()?, a.out.as_deref())?, true))
}

#[derive(Serialize)]
struct CwpBuildConfig {
    p_sha256: String,
    q_sha256: String,
    r_sha256: String,
}

fn cwp_build(a: CwpBuildArgs) -> Result<Outcome> {
    let (p, q, r) = (read_distribution(&a.p)?, read_distribution(&a.q)?, read_distribution(&a.r)?);
    let v = build_cwp_unitary(&p, &q, &r, None, None)?;
    v.validate()?;
    let record = apply_cwp(&v, &LadderState::from_distribution(&p, None)?)?;
    let config = CwpBuildConfig { p_sha256: file_hash(&a.p)?, q_sha256: file_hash(&a.q)?, r_sha256: file_hash(&a.r)? };
    let tolerances = [("convolution", crate::cwp::CONVOLUTION_TOL), ("process", PROCESS_TOL)];
    let report = Report::new("cwp-build", &config, &tolerances, true, record)?;
    Ok(Outcome::new(emit(&report.to_json()?, a.out.as_deref())?, true))
}

#[derive(Debug, Serialize)]
pub struct RecordCheck {
    pub unitarity_residual: f64,
    pub commutation_residual: f64,
    pub output_fidelity: f64,
    pub work_fidelity: f64,
    pub product_fidelity: f64,
    pub reversible_consistent: bool,
    pub passed: bool,
}

/// Recompute a stored record from its unitary and input.
pub fn check_record(record: &CoherentWorkRecord, tol: f64) -> Result<RecordCheck> {
    let input = LadderState::new(record.input.spectrum().clone(), record.input.amplitudes().to_vec())?;
    let v = &record.unitary;
    let unitarity_residual = v.unitarity_residual();
    let commutation_residual = v.commutation_residual();
    let fresh = apply_cwp(v, &input)?;
    let output_fidelity = fresh.output.fidelity(&record.output);
    let work_fidelity = fresh.work_state.fidelity(&record.work_state);
    let reversible_consistent = fresh.reversible == record.reversible;
    let passed = unitarity_residual <= tol
        && commutation_residual <= tol
        && output_fidelity >= 1.0 - tol
        && work_fidelity >= 1.0 - tol
        && fresh.product_fidelity >= 1.0 - PROCESS_TOL
        && reversible_consistent;
    Ok(RecordCheck {
        unitarity_residual,
        commutation_residual,
        output_fidelity,
        work_fidelity,
        product_fidelity: fresh.product_fidelity,
        reversible_consistent,
        passed,
    })
}

fn cwp_check(a: CwpCheckArgs) -> Result<Outcome> {
    if !(a.tol > 0.0) {
        return Err(Error::Config("tol must be positive".into()));
    }
    let stored: Report<CoherentWorkRecord> = serde_json::from_str(&std::fs::read_to_string(&a.record)?)?;
    let check = check_record(&stored.result, a.tol)?;
    let passed = check.passed;
    #[derive(Serialize)]
    struct Cfg {
        record_sha256: String,
        tol: f64,
    }
    let report = Report::new("cwp-check", &Cfg { record_sha256: file_hash(&a.record)?, tol: a.tol }, &[("tol", a.tol)], passed, check)?;
    Ok(Outcome::new(Some(report.to_json()?), passed))
}

/// Parse `start:stop:step` into an inclusive grid.
pub fn parse_beta_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Config(format!("bad beta grid {spec:?}"))))
        .collect::<Result<_>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(Error::Config(format!("beta grid {spec:?} is not start:stop:step")));
    };
    if !(step > 0.0) || !(stop >= start) || !start.is_finite() || !stop.is_finite() {
        return Err(Error::Config(format!("bad beta grid {spec:?}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + step * i as f64).collect())
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct PotentialOverrides {
    beta_grid: Option<String>,
}

fn fmt(x: f64) -> String {
    format!("{:.17e}", x + 0.0)
}

/// CSV rows: beta, lambda, kappa1..kappa4, chi_m, beta_m.
pub fn potential_csv(state: &LadderState, grid: &[f64], header_comment: &str) -> Result<String> {
    let stats = state.energy_statistics();
    let kappa = cumulants(&stats, 4)?;
    let mut s = String::new();
    s.push_str(header_comment);
    s.push_str("beta,lambda,kappa1,kappa2,kappa3,kappa4,chi_m,beta_m\n");
    for &beta in grid {
        let (chi_m, beta_m) = if beta > 0.0 {
            let m = mean_coherence(&stats, beta)?;
            (m.chi_m, m.beta_m)
        } else {
            (4.0 * std::f64::consts::PI * kappa[1], 0.0)
        };
        let row = [beta, lambda(beta, &stats), kappa[0], kappa[1], kappa[2], kappa[3], chi_m, beta_m];
        s.push_str(&row.iter().map(|&x| fmt(x)).collect::<Vec<_>>().join(","));
        s.push('\n');
    }
    Ok(s)
}

fn potential(a: PotentialArgs) -> Result<Outcome> {
    let o: PotentialOverrides = read_overrides(a.config.as_deref())?.unwrap_or_default();
    let grid_spec = o.beta_grid.unwrap_or(a.beta_grid);
    let grid = parse_beta_grid(&grid_spec)?;
    let state = read_state(&a.state)?;
    #[derive(Serialize)]
    struct Cfg<'a> {
        state_sha256: String,
        beta_grid: &'a str,
    }
    let hash = report::config_hash(&Cfg { state_sha256: file_hash(&a.state)?, beta_grid: &grid_spec })?;
    let comment = format!(
        "# config_sha256={hash} underflow_guard={:e} root_bisection_steps=200\n",
        crate::potential::UNDERFLOW_GUARD
    );
    let csv = potential_csv(&state, &grid, &comment)?;
    Ok(Outcome::new(emit(&csv, a.out.as_deref())?, true))
}

fn crooks_run(a: CrooksRunArgs) -> Result<Outcome> {
    let loaded = scenario::load(&a.config)?;
    let (result, passed) = scenario::run(&loaded)?;
    let warnings = result.warnings.clone();
    let tolerances = loaded.config.tolerances.pairs();
    let report = Report::new("crooks-run", &loaded.resolved, &tolerances, passed, result)?;
    let out = a.out.or_else(|| {
        loaded.config.out.as_ref().map(|o| a.config.parent().unwrap_or(Path::new(".")).join(o))
    });
    let mut outcome = Outcome::new(emit(&report.to_json()?, out.as_deref())?, passed);
    outcome.warnings = warnings;
    Ok(outcome)
}

fn examples(a: ExamplesArgs) -> Result<Outcome> {
    let cases = suite::run_suite(a.seed);
    let passed = cases.iter().all(|c| c.passed);
    let mut text: String = cases.iter().map(|c| c.line() + "\n").collect();
    if let Some(path) = a.out.as_deref() {
        #[derive(Serialize)]
        struct Cfg {
            seed: u64,
        }
        let report = Report::new("examples", &Cfg { seed: a.seed }, &[], passed, &cases)?;
        std::fs::write(path, report.to_json()?)?;
    }
    text.push_str(&format!("{} of {} cases passed\n", cases.iter().filter(|c| c.passed).count(), cases.len()));
    Ok(Outcome::new(Some(text), passed))
}
