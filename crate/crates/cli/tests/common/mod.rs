//! Runs the built binary on the shipped fixtures and renders a transcript.

use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_fidmap");

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_path(case: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{case}.txt"))
}

/// Runs `args`, substituting `{out}` with a fresh temp path, and renders
/// everything observable into one transcript.
pub fn transcript(args: &[&str]) -> String {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let out_str = out.to_str().unwrap();
    let args: Vec<&str> = args.iter().map(|a| if *a == "{out}" { out_str } else { a }).collect();
    let output = Command::new(BIN)
        .args(&args)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    let report = std::fs::read_to_string(&out).unwrap_or_default();
    format!(
        "$ fidmap {}\nexit: {}\n--- stdout\n{}--- stderr\n{}--- report\n{}",
        args.iter().map(|a| if *a == out_str { "{out}" } else { a }).collect::<Vec<_>>().join(" "),
        output.status.code().map_or("signal".to_string(), |c| c.to_string()),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr),
        report,
    )
}
