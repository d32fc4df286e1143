//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line (written
//! straight to stdout so it survives output capture) and then asserts.

use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use glasner_core::experiments::*;
use glasner_core::Result;

static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: u32, title: &str, budget_s: u64, run: impl FnOnce() -> Result<ExperimentReport>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let report = run().expect("experiment ran");
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(budget_s);
    let ok = report.passed && in_time;
    let line = format!(
        "criterion {id:>2} {}: {title} ({:.1}s of {budget_s}s) {}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        report.summary["summary"],
    );
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(
        report.passed,
        "criterion {id} missed its target: {}",
        report.summary
    );
    assert!(in_time, "criterion {id} exceeded {budget_s}s: {elapsed:?}");
}

#[test]
fn c01_lower_bound_fuzz() {
    criterion(
        1,
        "exponential-sum lower bound, 1000 configurations",
        60,
        || lower_bound_fuzz(&LowerBoundFuzzConfig::default()),
    );
}

#[test]
fn c02_non_density_certificates() {
    criterion(
        2,
        "squared certificate on 500 NOT_DENSE images",
        120,
        || certificate_suite(&CertificateConfig::default()),
    );
}

#[test]
fn c03_smith_form_and_gcd_bound() {
    criterion(
        3,
        "Smith form and gcd-bound factorization, 500 matrices",
        60,
        || snf_suite(&SnfSuiteConfig::default()),
    );
}

#[test]
fn c04_affine_span_stabilization() {
    criterion(
        4,
        "affine-span stabilization, 200 presentations",
        120,
        || stabilization_suite(&StabilizationConfig::default()),
    );
}

#[test]
fn c05_complete_sums() {
    criterion(
        5,
        "quadratic and linear complete sums, odd primes ≤ 499",
        30,
        || gauss_suite(&GaussSuiteConfig::default()),
    );
}

#[test]
fn c06_polynomial_dilation() {
    criterion(6, "diag(n, n²) dilation, 20 trials, ≥ 90%", 600, || {
        poly_pair(&PolyPairConfig::default())
    });
}

#[test]
fn c07_scalar_dilation_1d() {
    criterion(7, "scalar dilation in 1-d, 40 trials, ≥ 95%", 300, || {
        glasner1d(&Glasner1dConfig::default())
    });
}

#[test]
fn c08_semigroup_pipeline() {
    criterion(
        8,
        "SL2 elementary semigroup pipeline, 20 trials, ≥ 80%",
        600,
        || semigroup_pipeline(&SemigroupConfig::default()),
    );
}

#[test]
fn c09_walk_decay() {
    criterion(
        9,
        "walk Fourier decay plateaus and Monte Carlo agreement",
        300,
        || walk_decay(&WalkDecayConfig::default()),
    );
}

#[test]
fn c10_hq_scaling() {
    criterion(10, "torsion-weighted sum scaling slopes", 60, || {
        hq_scaling(&HqScalingConfig::default())
    });
}
