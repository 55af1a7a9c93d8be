//! Acceptance battery: every criterion at its stated ranges and tolerances,
//! one pass/fail line each. Runs without the libtest harness so the table
//! always reaches the output.

use std::process::ExitCode;

use lapseq::suite::{run_criterion, Fault, Profile, SuiteConfig, CRITERIA};

/// Stated tolerance of each criterion's headline metric; zero means exact.
const STATED: [(u8, f64); 11] = [
    (1, 1e-8),
    (2, 1e-7),
    (3, 1e-8),
    (4, 0.0),
    (5, 1e-6),
    (6, 1e-6),
    (7, 1e-10),
    (8, 0.0),
    (9, 1e-9),
    (10, 1e-8),
    (11, 0.0),
];

fn main() -> ExitCode {
    let config = SuiteConfig::full();
    let mut failures = 0;
    for (id, name, _) in CRITERIA {
        let outcome = run_criterion(id, &config).expect("criterion exists");
        let stated = STATED.iter().find(|s| s.0 == id).expect("stated tolerance").1;
        let honest = outcome.tolerance == stated;
        let within_budget = outcome.seconds <= outcome.budget_seconds;
        let ok = outcome.passed && honest && within_budget;
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {id:>2} {:<4} {name}: metric {:.3e} (tolerance {:.0e}), {:.2} s of {} s; {}",
            if ok { "PASS" } else { "FAIL" },
            outcome.metric,
            outcome.tolerance,
            outcome.seconds,
            outcome.budget_seconds,
            outcome.detail
        );
        if !honest {
            println!("    tolerance {} differs from the stated {stated}", outcome.tolerance);
        }
        if !within_budget {
            println!("    exceeded the time budget");
        }
    }

    // a perturbed table coefficient must be caught and named
    let faulty = SuiteConfig { profile: Profile::Full, fault: Some(Fault::TableCoefficient) };
    let outcome = run_criterion(1, &faulty).expect("criterion exists");
    let caught = !outcome.passed && outcome.detail.contains("exp row");
    println!("fault injection {}: perturbed exp row detected: {}", if caught { "PASS" } else { "FAIL" }, outcome.detail);
    if !caught {
        failures += 1;
    }

    if failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} failure(s)");
        ExitCode::FAILURE
    }
}
