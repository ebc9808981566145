//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Determinism is judged on two full runs of the binary.

use std::process::{Command, ExitCode};

use hausdorff_core::verify::{run_suite, VerifyConfig};

const SEED: u64 = 7;

fn binary_report() -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hausdorff-lab"))
        .args(["verify", "--seed", &SEED.to_string()])
        .env("RUST_LOG", "off")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("verify exited with {}", out.status));
    }
    Ok(out.stdout)
}

fn main() -> ExitCode {
    let cfg = VerifyConfig {
        seed: SEED,
        filter: Vec::new(),
    };
    let mut report = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            println!("FAIL acceptance suite could not start: {e}");
            return ExitCode::FAILURE;
        }
    };
    let runs = (binary_report(), binary_report());
    if let Some(det) = report.results.iter_mut().find(|r| r.name == "determinism") {
        match runs {
            (Ok(a), Ok(b)) if a == b => {
                det.detail.push_str(&format!("; two binary runs byte-identical ({} bytes)", a.len()));
            }
            (Ok(_), Ok(_)) => {
                det.passed = false;
                det.detail.push_str("; two binary runs differ");
            }
            (Err(e), _) | (_, Err(e)) => {
                det.passed = false;
                det.detail.push_str(&format!("; binary run failed: {e}"));
            }
        }
    }
    println!();
    for r in &report.results {
        println!("{}", r.line());
    }
    let passed = report.results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", report.results.len());
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
