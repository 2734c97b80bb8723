//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Each criterion runs one or more verification suites at fixed parameters
//! and a fixed seed, so the output is reproducible.

use std::process::ExitCode;
use std::time::Instant;
use xorbounds_cli::suites::{run_suite, Check, SuiteParams, FLOAT_TOLERANCE};

const SEED: u64 = 20_240_601;

type Runs<'a> = Vec<(&'a str, SuiteParams)>;

struct Outcome {
    checks: usize,
    failures: Vec<String>,
}

fn params(max_n: Option<u32>, max_m: Option<u32>, samples: Option<usize>) -> SuiteParams {
    SuiteParams {
        n: None,
        max_n,
        max_m,
        samples,
        seed: SEED,
    }
}

fn run(name: &str, p: &SuiteParams) -> Outcome {
    let mut failures = Vec::new();
    let mut sink = |c: &Check| {
        if !c.pass {
            failures.push(c.describe());
        }
        Ok(())
    };
    match run_suite(name, p, &mut sink) {
        Ok(s) => Outcome {
            checks: s.checks,
            failures,
        },
        Err(e) => Outcome {
            checks: 0,
            failures: vec![format!("{name}: {}", e.message)],
        },
    }
}

fn main() -> ExitCode {
    // Parameters pinned so that each suite covers exactly the stated range.
    let fourier = format!("FWHT = naive, Parseval, spectral norm vs SVD within {FLOAT_TOLERANCE:e}");
    let criteria: Vec<(u32, &str, Runs)> = vec![
        (1, "disc ≤ m ≤ 4·disc on all f at n = 2 and 100 random f at n = 3", vec![("sandwich", params(Some(3), None, Some(100)))]),
        (2, "LP strong duality and m·wt = 1 (full LP n ≤ 4, level LP n ≤ 16)", vec![("duality", params(Some(16), None, None))]),
        (3, &fourier, vec![("fourier", params(Some(12), None, Some(1000)))]),
        (4, "Bruck: |CQ^(S)| = 2^(-n/2) for even n, {0, 2^(-(n-1)/2)} for odd n, n ≤ 16", vec![("bruck", params(Some(16), None, None))]),
        (5, "odd-modulus coefficient bounds, m ∈ {3,5,7,9}, 20 sets, n ≤ 20; closed form at n ≤ 14", vec![("modclaim", params(Some(20), Some(9), Some(20)))]),
        (6, "forster(cq:n) = 2^(n/2); 𝒮={∅} beats 𝒮=∅ on mod:3,{0};n for n ≥ 8; f′ agrees at n ≤ 12", vec![("forster", params(Some(16), None, Some(50)))]),
        (7, "symmetric and threshold lifts project pointwise; projection monotonicity", vec![("lifts", params(Some(16), None, Some(100)))]),
        (8, "pp upper polynomial sign-represents with wt ≤ 4(2n)^k at even n ≤ 8", vec![("ppupper", params(Some(8), None, None))]),
        (9, "reduction chains for all non-simple A with m ≤ 12; modulus-4 values", vec![("chains", params(None, Some(12), None))]),
        (10, "BPP dual witness: corr ≥ 1/3 and 2^n·||(gν)^||∞ ≤ 3/w′ for every predicate at n ≤ 12", vec![("bpp", params(Some(12), None, None))]),
        (11, "|f^(∅)| + |f^([n])| = 1 for mod:4,{0};n at even n ≤ 16", vec![("obstruction", params(Some(16), None, None))]),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (id, title, runs) in &criteria {
        let t = Instant::now();
        let mut checks = 0;
        let mut failures = Vec::new();
        for (name, p) in runs {
            let o = run(name, p);
            checks += o.checks;
            failures.extend(o.failures);
        }
        let pass = checks > 0 && failures.is_empty();
        if !pass {
            failed += 1;
        }
        println!(
            "criterion {id}: {} ({checks} checks, {} failed, {:.1}s) {title}",
            if pass { "PASS" } else { "FAIL" },
            failures.len(),
            t.elapsed().as_secs_f64()
        );
        for f in failures.iter().take(5) {
            println!("    failing: {f}");
        }
    }
    println!(
        "acceptance: {} of {} criteria pass ({:.1}s)",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
