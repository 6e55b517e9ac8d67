//! Command-line front end: `solve`, `check`, `simulate` and `figures`.
//!
//! Each subcommand is a plain function writing its report to a caller-supplied
//! writer, so tests can drive them without spawning a process.

pub mod figures;

use crate::model::{load_config, validate, ModelError, ValidatedModel};
use crate::monotone::{classify_policy, InJobsVerdict, Witness};
use crate::sim::{mc_estimate, simulate_episode, SimError};
use crate::solver::{solve, solve_recursive, SolverError, SolverKind, DEFAULT_TOLERANCE};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("{0}")]
    Usage(String),
    #[error("policy is not non-decreasing in b: mu{:?} > mu{:?}", .0.from, .0.to)]
    NotMonotoneInJobs(Witness),
    #[error("regime assertions failed: {}", .0.join("; "))]
    RegimeFailed(Vec<String>),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for a structural finding (monotonicity or regime failure), 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::NotMonotoneInJobs(_) | CliError::RegimeFailed(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "decayqueue",
    version,
    about = "Optimal service-rate control for value-decaying jobs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a model and write the solution table as CSV.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "recursive")]
        solver: SolverKind,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve a model and print its monotonicity report as JSON.
    Check {
        #[arg(long)]
        config: PathBuf,
    },
    /// Estimate the optimal cost by simulation and compare with the solver.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "recursive")]
        solver: SolverKind,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write episode 0 as JSON lines to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the reference presets, check their regimes and export the data.
    Figures {
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses arguments, runs the subcommand and maps failures to exit codes.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match run(cli.command, &mut out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Solve {
            config,
            solver,
            tol,
            out: path,
        } => cmd_solve(&config, solver, tol, &path, out),
        Command::Check { config } => cmd_check(&config, out),
        Command::Simulate {
            config,
            solver,
            tol,
            n,
            seed,
            out: trajectory,
        } => cmd_simulate(&config, solver, tol, n, seed, trajectory.as_deref(), out),
        Command::Figures { out: dir } => cmd_figures(&dir, out),
    }
}

/// Reads and validates a configuration file.
pub fn read_model(path: &Path) -> Result<ValidatedModel, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(validate(load_config(&text)?)?)
}

/// Writes `contents` to `path` through a temporary sibling file, so a failed
/// write leaves nothing behind at `path`.
fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let result = fs::write(&tmp, contents).and_then(|()| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(CliError::io(path, e));
    }
    Ok(())
}

pub fn cmd_solve(
    config: &Path,
    solver: SolverKind,
    tol: f64,
    path: &Path,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let model = read_model(config)?;
    let solution = solve(&model, solver, tol)?;
    write_atomic(path, solution.to_csv(&model).as_bytes())?;
    let (b, v) = (model.jobs(), model.max_value());
    let stats = solution.stats();
    writeln!(out, "solver: {solver}")?;
    writeln!(out, "J({b}, {v}) = {}", solution.j(b, v))?;
    writeln!(
        out,
        "states: {}, actions: {}, evaluations: {}, iterations: {}, improvements: {}, residual: {:e}",
        model.num_states(),
        model.num_actions(),
        stats.evaluations,
        stats.iterations,
        stats.improvements,
        stats.residual
    )?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

pub fn cmd_check(config: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let model = read_model(config)?;
    let report = classify_policy(&model, &solve_recursive(&model));
    writeln!(out, "{}", report.to_json())?;
    match report.in_b_verdict {
        InJobsVerdict::NonDecreasing => Ok(()),
        InJobsVerdict::Violated(witness) => {
            if !model.flags().h_nondecreasing {
                eprintln!("note: the holding cost is not non-decreasing, so no in-b guarantee applies");
            }
            Err(CliError::NotMonotoneInJobs(witness))
        }
    }
}

pub fn cmd_simulate(
    config: &Path,
    solver: SolverKind,
    tol: f64,
    n: usize,
    seed: u64,
    trajectory: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let model = read_model(config)?;
    let solution = solve(&model, solver, tol)?;
    let initial = model.initial_state();
    let estimate = mc_estimate(&model, solution.policy(), initial, n, seed)?;
    if let Some(path) = trajectory {
        let episode = simulate_episode(&model, solution.policy(), initial, seed)?;
        let mut buf = Vec::new();
        episode.write_jsonl(&model, &mut buf)?;
        write_atomic(path, &buf)?;
    }
    let j = solution.j(initial.jobs, initial.value);
    writeln!(out, "initial state: {initial}")?;
    writeln!(out, "solver J: {j}")?;
    writeln!(out, "mc mean: {}", estimate.mean)?;
    writeln!(out, "std error: {}", estimate.std_error)?;
    writeln!(out, "n: {}, seed: {}", estimate.n, estimate.seed)?;
    if estimate.std_error > 0.0 {
        writeln!(
            out,
            "|mean - J| / std error: {:.3}",
            (estimate.mean - j).abs() / estimate.std_error
        )?;
    } else {
        writeln!(out, "|mean - J|: {}", (estimate.mean - j).abs())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ManifestEntry {
    id: &'static str,
    cost_at_initial_state: f64,
    files: Vec<String>,
    claims: Vec<figures::ClaimOutcome>,
}

#[derive(Serialize)]
struct Manifest {
    passed: bool,
    presets: Vec<ManifestEntry>,
}

pub fn cmd_figures(dir: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    if dir.as_os_str().is_empty() {
        return Err(CliError::Usage("output directory must not be empty".into()));
    }
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| CliError::io(dir, e))?;
    let _ = fs::remove_file(&probe);

    let mut manifest = Manifest {
        passed: true,
        presets: Vec::new(),
    };
    let mut failures = Vec::new();
    for preset in figures::presets() {
        let model = validate(preset.config.clone())?;
        let solution = solve_recursive(&model);
        let report = classify_policy(&model, &solution);
        let claims = preset.check(&report);

        let id = preset.id;
        let files = [
            (format!("fig{id}_config.json"), preset.config.to_json() + "\n"),
            (format!("fig{id}_policy.csv"), solution.to_csv(&model)),
            (format!("fig{id}_boundaries.csv"), figures::boundary_csv(&solution)),
            (format!("fig{id}_report.json"), report.to_json() + "\n"),
        ];
        for (name, contents) in &files {
            write_atomic(&dir.join(name), contents.as_bytes())?;
        }
        for claim in &claims {
            writeln!(
                out,
                "{id}: {} ... {}",
                claim.claim,
                if claim.passed { "ok" } else { "FAILED" }
            )?;
            if !claim.passed {
                failures.push(format!("{id}: {}", claim.claim));
            }
        }
        manifest.presets.push(ManifestEntry {
            id,
            cost_at_initial_state: solution.j(model.jobs(), model.max_value()),
            files: files.into_iter().map(|(name, _)| name).collect(),
            claims,
        });
    }
    manifest.passed = failures.is_empty();
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    write_atomic(&dir.join("manifest.json"), json.as_bytes())?;
    writeln!(out, "wrote {}", dir.join("manifest.json").display())?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::RegimeFailed(failures))
    }
}
