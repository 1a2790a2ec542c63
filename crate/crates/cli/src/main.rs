//! `fidmap`: fidelity, reconstruction, classification and theorem checks
//! from the command line.
//!
//! Exit codes: 0 success or certified, 2 rejected map or failed
//! reconstruction, 1 bad input (one line on stderr).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde::Serialize;

use fidmap_core::fidelity::{fidelity, partial_fidelity};
use fidmap_core::io::MatrixFile;
use fidmap_core::mapzoo::{classify_map_with, make_map, run_theorem_panel, MapSpec};
use fidmap_core::tol::{Tolerances, VERIFICATION_TRIALS};
use fidmap_core::wigner::{reconstruct, ReconstructOptions};
use fidmap_core::DensityOperator;

#[derive(Debug, Parser)]
#[command(name = "fidmap", version, about = "Fidelity of density operators and symmetries of fidelity-preserving maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print F(A, B), or the partial fidelity F_m⁺ with --m.
    Fidelity {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        m: Option<usize>,
        /// Decimal digits printed; further digits are cut, not rounded.
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u8).range(0..=30))]
        digits: u8,
    },
    /// Recover the unitary or antiunitary operator behind a map.
    Reconstruct {
        #[arg(long)]
        map: PathBuf,
        /// Certification tolerance on the verification residual.
        #[arg(long)]
        tol: Option<f64>,
        /// Number of random verification operators.
        #[arg(long, default_value_t = VERIFICATION_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Decide whether a map preserves fidelity on sampled pairs.
    Classify {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every zoo map through the classifier and check each lands on
    /// the expected side.
    Verify {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct ReportFile<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    map: Option<&'a MapSpec>,
    report: T,
}

impl<'a, T: Serialize> ReportFile<'a, T> {
    fn new(command: &'static str, seed: u64, tolerances: Tolerances, map: Option<&'a MapSpec>, report: T) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            tolerances,
            map,
            report,
        }
    }
}

/// Outcome of a subcommand that ran to completion.
enum Outcome {
    Success,
    Negative,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // clap renders several lines; keep the message and drop the usage block
            let text = e.to_string();
            let message: Vec<&str> = text
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("fidmap: {}", message.join(" ").trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("fidmap: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Fidelity { a, b, m, digits } => {
            let a = read_density(&a)?;
            let b = read_density(&b)?;
            let value = match m {
                Some(m) => partial_fidelity(&a, &b, m)?.value(),
                None => fidelity(&a, &b)?.value(),
            };
            println!("{}", truncate_digits(value, digits as usize));
            Ok(Outcome::Success)
        }
        Command::Reconstruct {
            map,
            tol,
            trials,
            seed,
            out,
        } => {
            let spec = read_spec(&map)?;
            let oracle = make_map(&spec, seed)?;
            let mut opts = ReconstructOptions {
                verification_trials: trials,
                seed,
                ..ReconstructOptions::default()
            };
            let mut tolerances = Tolerances::default();
            if let Some(t) = tol {
                if !(t.is_finite() && t > 0.0) {
                    bail!("--tol must be a positive number, got {t}");
                }
                opts.certify_tol = t;
                tolerances.certify_tol = t;
            }
            let report = reconstruct(&oracle, &opts);
            let certified = report.is_certified();
            let parity = report.symmetry.as_ref().map(|s| s.parity());
            write_report(&out, &ReportFile::new("reconstruct", seed, tolerances, Some(&spec), &report))?;
            match parity {
                Some(p) if certified => println!("certified {}", serde_json::to_value(p)?.as_str().unwrap_or("")),
                _ => println!("{}", serde_json::to_value(report.status)?.as_str().unwrap_or("failed")),
            }
            Ok(if certified { Outcome::Success } else { Outcome::Negative })
        }
        Command::Classify {
            map,
            trials,
            seed,
            out,
        } => {
            if trials == 0 {
                bail!("--trials must be positive");
            }
            let spec = read_spec(&map)?;
            let oracle = make_map(&spec, seed)?;
            let opts = ReconstructOptions {
                seed,
                ..ReconstructOptions::default()
            };
            let report = classify_map_with(&oracle, trials, seed, &opts);
            let certified = report.is_certified_symmetry();
            write_report(&out, &ReportFile::new("classify", seed, Tolerances::default(), Some(&spec), &report))?;
            if report.preserving {
                println!("preserving, worst violation {:e}", report.worst_violation);
            } else {
                let trial = report.witness_pair.as_ref().map_or(0, |w| w.trial);
                println!("rejected, worst violation {:e} at trial {trial}", report.worst_violation);
            }
            Ok(if certified { Outcome::Success } else { Outcome::Negative })
        }
        Command::Verify { dim, trials, seed, out } => {
            let summary = run_theorem_panel(dim, trials, seed)?;
            if let Some(out) = out {
                write_report(&out, &ReportFile::new("verify", seed, Tolerances::default(), None, &summary))?;
            }
            for e in &summary.entries {
                let side = if e.expected_preserving { "certified" } else { "rejected" };
                let verdict = if e.passed { "ok" } else { "FAILED" };
                println!("{:<18} expected {side:<9} {verdict}", e.kind.name());
            }
            Ok(if summary.all_passed { Outcome::Success } else { Outcome::Negative })
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_density(path: &Path) -> Result<DensityOperator> {
    let file = MatrixFile::from_json(&read_text(path)?).with_context(|| path.display().to_string())?;
    file.to_density(false).with_context(|| path.display().to_string())
}

fn read_spec(path: &Path) -> Result<MapSpec> {
    let spec = MapSpec::from_json(&read_text(path)?).with_context(|| path.display().to_string())?;
    spec.validate().with_context(|| path.display().to_string())?;
    Ok(spec)
}

/// Writes next to the target and renames over it, so readers never see a
/// partial report.
fn write_report<T: Serialize>(path: &Path, report: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write {}", path.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

/// `value` with exactly `digits` decimals, cut from its exact decimal
/// expansion.
fn truncate_digits(value: f64, digits: usize) -> String {
    // 1100 places hold the full expansion of any finite double
    let mut exact = String::new();
    write!(exact, "{value:.1100}").expect("write to String");
    let point = exact.find('.').expect("fixed notation has a point");
    let end = if digits == 0 { point } else { point + 1 + digits };
    exact.truncate(end);
    exact
}
