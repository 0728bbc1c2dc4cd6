//! Acceptance criteria, one line each. Runs as a plain binary so the
//! verdicts are always printed; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use coneq::pseudoherm::Signature;
use coneq::suites::{run_suite, RunReport};

const SEED: u64 = 20_240_601;

struct Verdict {
    ok: bool,
    detail: String,
}

fn battery() -> Vec<Signature> {
    Signature::test_battery()
}

/// Every signature with `p, q ≥ 1` and `n ≤ 6`.
fn desk_scale() -> Vec<Signature> {
    let mut out = Vec::new();
    for n in 2..=6 {
        for p in 1..n {
            out.push(Signature::new(p, n - p).unwrap());
        }
    }
    out
}

/// Runs `suite` on each signature and checks the reported worst residual
/// against the stated tolerance as well as the suite's own verdict.
fn suite_over(suite: &str, sigs: &[Signature], trials: usize, tol: f64) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut total = 0;
    let mut failures = Vec::new();
    for (k, sig) in sigs.iter().enumerate() {
        let r: RunReport = match run_suite(suite, *sig, SEED + k as u64, trials) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{sig}: {e}"));
                continue;
            }
        };
        total += r.trials;
        if r.worst_residual.is_finite() {
            worst = worst.max(r.worst_residual);
        }
        if !r.ok() || r.worst_residual > tol {
            failures.push(format!(
                "{sig}: {}/{} passed, worst {:.2e}, counterexample {}",
                r.passed,
                r.trials,
                r.worst_residual,
                serde_json::to_string(&r.counterexample).unwrap()
            ));
        }
    }
    let detail = if failures.is_empty() {
        format!(
            "{suite}: {total} trials over {} signature(s), worst {worst:.2e} ≤ {tol:.0e}",
            sigs.len()
        )
    } else {
        format!("{suite}: {}", failures.join("; "))
    };
    Verdict {
        ok: failures.is_empty(),
        detail,
    }
}

fn all(verdicts: Vec<Verdict>) -> Verdict {
    Verdict {
        ok: verdicts.iter().all(|v| v.ok),
        detail: verdicts
            .into_iter()
            .map(|v| v.detail)
            .collect::<Vec<_>>()
            .join(" | "),
    }
}

fn main() -> ExitCode {
    let two_two = Signature::new(2, 2).unwrap();
    let three_three = Signature::new(3, 3).unwrap();
    let one_one = Signature::new(1, 1).unwrap();

    let criteria: Vec<(&str, Box<dyn Fn() -> Verdict>)> = vec![
        (
            "sphere-product topology of Q′",
            Box::new(|| suite_over("cross_section", &battery(), 1000, 1e-9)),
        ),
        (
            "metric scaling g_{λx} = λ² g_x",
            Box::new(|| suite_over("lemma1", &battery(), 100, 1e-9)),
        ),
        (
            "induced metric signature (2p−1, 2q−1, 0)",
            Box::new(|| suite_over("signature", &battery(), 1000, 1e-9)),
        ),
        (
            "(1,1) torus case",
            Box::new(move || suite_over("torus", &[one_one], 1000, 1e-9)),
        ),
        (
            "Witt basis extension",
            Box::new(|| suite_over("lemma2", &battery(), 1000, 1e-9)),
        ),
        (
            "κ chart certificates and round trips",
            Box::new(|| {
                all(vec![
                    suite_over("kappa_cert", &battery(), 10_000, 1e-10),
                    suite_over("kappa_roundtrip", &battery(), 1000, 1e-9),
                    // 200 per signature: 10³ rational inputs in total
                    suite_over("exact_twin", &battery(), 200, 1e-12),
                ])
            }),
        ),
        (
            "degenerate cometric rank 2n−4, radical 1",
            Box::new(|| suite_over("cometric_rank", &desk_scale(), 100, 1e-9)),
        ),
        (
            "conformal well-definedness across splits",
            Box::new(|| suite_over("conformal", &battery(), 100, 1e-8)),
        ),
        (
            "a⊥ stratification",
            Box::new(move || {
                all(vec![
                    suite_over("aperp_partition", &battery(), 1000, 1e-9),
                    suite_over("aperp_dimension", &[two_two, three_three], 20, 0.0),
                ])
            }),
        ),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        let start = Instant::now();
        let v = check();
        let secs = start.elapsed().as_secs_f64();
        println!(
            "{} {name} ({secs:.1}s): {}",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
        if !v.ok {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
