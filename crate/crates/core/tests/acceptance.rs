//! One line per acceptance criterion, then a failure if any criterion failed.
//!
//! Sample count and seed can be overridden with `BRICKWORK_SAMPLES` and
//! `BRICKWORK_SEED`.

use std::io::Write;

use brickwork::verify::{run_suite, Suite, SuiteReport, VerifyOptions};

fn options() -> VerifyOptions {
    let env = |k: &str| std::env::var(k).ok().and_then(|v| v.parse().ok());
    let mut opts = VerifyOptions::default();
    if let Some(s) = env("BRICKWORK_SAMPLES") {
        opts.samples = s;
    }
    if let Some(s) = env("BRICKWORK_SEED") {
        opts.seed = s;
    }
    opts.workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    opts
}

fn criterion(number: usize, title: &str, reports: &[SuiteReport]) -> bool {
    let pass = reports.iter().all(|r| r.pass);
    let ms: u128 = reports.iter().map(|r| r.runtime_ms).sum();
    let checks: usize = reports.iter().map(|r| r.rows.len()).sum();
    // Straight to the process stdout so the line survives libtest's capture.
    let line =
        format!("criterion {number}: {} - {title} ({checks} checks, {ms} ms)\n", if pass { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    if !pass {
        for r in reports {
            print!("{}", r.table());
        }
    }
    pass
}

#[test]
fn acceptance() {
    let opts = options();
    let run = |s| run_suite(s, &opts);
    let results = [
        criterion(1, "character orthogonality and dimension sums", &[run(Suite::Characters)]),
        criterion(2, "Frobenius formula equals brute-force counts", &[run(Suite::HurwitzVsOracle)]),
        criterion(3, "brickwork Hurwitz table", &[run(Suite::Brickwork)]),
        criterion(4, "Weingarten values, row sums and Haar estimates", &[run(Suite::Weingarten)]),
        criterion(5, "split formula for arbitrary complex matrices", &[run(Suite::SplitMc)]),
        criterion(6, "Gaussian Schur averages", &[run(Suite::GaussianSchur)]),
        criterion(7, "series triple agreement and calibration", &[run(Suite::SeriesCalibration)]),
        criterion(8, "normal-matrix model", &[run(Suite::NormalModel)]),
        criterion(9, "single-worker reproducibility", &[run(Suite::Reproducibility)]),
    ];
    assert!(results.iter().all(|&ok| ok), "acceptance criteria failed");
}
