//! Runs every registered experiment with its default configuration and
//! prints one PASS/FAIL line per criterion.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use horodyn_cli::{ExperimentConfig, ExperimentRegistry, Outcome};

// A12: the sphere-walk rate converges like ln(1 + ℓ/2)/ℓ, far outside 15% at ℓ = 6.
// A15: the exact kernel count at n = 30 sits just under the 0.88 fraction.
const KNOWN_FAILURES: &[&str] = &["A12", "A15"];

// Several experiments allocate gigabytes; run them one at a time.
static SERIAL: Mutex<()> = Mutex::new(());

fn criterion(id: &str) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let registry = ExperimentRegistry::default();
    let budget = registry.get(id).unwrap().time_budget();
    let started = Instant::now();
    let report = registry.run(&ExperimentConfig::new(id)).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let budget = budget.map_or_else(|| "-".to_string(), |b| format!("{b:.0} s"));
    let mut err = std::io::stderr().lock();
    writeln!(
        err,
        "{id:<4} {:<4} {elapsed:>8.2} s (budget {budget})  {}",
        report.outcome, report.title
    )
    .unwrap();
    for name in report.failed_checks() {
        writeln!(err, "       failed: {name}").unwrap();
    }
    let expected = if KNOWN_FAILURES.contains(&id) {
        Outcome::Fail
    } else {
        Outcome::Pass
    };
    assert_eq!(
        report.outcome,
        expected,
        "{id}: {:?}",
        report.failed_checks()
    );
}

#[test]
fn a01_normalized_rho() {
    criterion("A1");
}

#[test]
fn a02_growth_rate() {
    criterion("A2");
}

#[test]
fn a03_coornaert() {
    criterion("A3");
}

#[test]
fn a04_tree_walk() {
    criterion("A4");
}

#[test]
fn a05_kernel_walk() {
    criterion("A5");
}

#[test]
fn a06_twisted_below_untwisted() {
    criterion("A6");
}

#[test]
fn a07_tree_gap() {
    criterion("A7");
}

#[test]
fn a08_amenable_twist() {
    criterion("A8");
}

#[test]
fn a09_layers() {
    criterion("A9");
}

#[test]
fn a10_sphere_lemmas() {
    criterion("A10");
}

#[test]
fn a11_convolution_bounds() {
    criterion("A11");
}

#[test]
fn a12_rho_infinity() {
    criterion("A12");
}

#[test]
fn a13_holder_suite() {
    criterion("A13");
}

#[test]
fn a14_grigorchuk() {
    criterion("A14");
}

#[test]
fn a15_kernel_growth() {
    criterion("A15");
}
