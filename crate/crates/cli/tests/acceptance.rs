//! The eight acceptance criteria, each reported as one PASS/FAIL line.
//!
//! Suites run at their documented defaults (1000 trials, seed 0x5EED,
//! prime bound 50) on separate threads; the test fails if any criterion
//! fails, after every line has been printed.

use std::thread;

use ordval_core::checks::{example_table, malformed_corpus, run_suite, CheckConfig};

struct Verdict {
    number: usize,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn suite(number: usize, title: &'static str, name: &'static str) -> Verdict {
    let outcome = run_suite(name, &CheckConfig::default()).expect("suite exists");
    let mut detail = format!(
        "{} checks, {} violations",
        outcome.checks, outcome.violation_count
    );
    for v in &outcome.violations {
        detail.push_str("\n    ");
        detail.push_str(v);
    }
    Verdict {
        number,
        title,
        passed: outcome.passed(),
        detail,
    }
}

fn examples() -> Verdict {
    let table = example_table();
    let failed: Vec<_> = table.iter().filter(|r| !r.passed).map(|r| r.name).collect();
    let mut detail = format!(
        "{} of {} rows reproduce",
        table.len() - failed.len(),
        table.len()
    );
    for name in &failed {
        detail.push_str("\n    failed: ");
        detail.push_str(name);
    }
    Verdict {
        number: 1,
        title: "example regression table",
        passed: table.len() == 14 && failed.is_empty(),
        detail,
    }
}

fn parser() -> Verdict {
    let mut verdict = suite(8, "parser round trips and malformed corpus", "parser");
    let corpus = malformed_corpus();
    let mut rejected = 0;
    for (kind, text) in &corpus {
        let out = ordval_cli::run(["ordval", "parse", kind.name(), text]);
        if out.code == 2 && out.stderr.contains("offset") {
            rejected += 1;
        } else {
            verdict.passed = false;
            verdict.detail.push_str(&format!(
                "\n    {} {text:?}: exit {} {}",
                kind.name(),
                out.code,
                out.stderr.trim()
            ));
        }
    }
    verdict.passed &= rejected == corpus.len() && !corpus.is_empty();
    verdict.detail.push_str(&format!(
        "; {rejected} of {} malformed inputs exit 2 with an offset",
        corpus.len()
    ));
    verdict
}

#[test]
fn acceptance_criteria() {
    let mut verdicts: Vec<Verdict> = thread::scope(|scope| {
        let jobs: Vec<Box<dyn FnOnce() -> Verdict + Send>> = vec![
            Box::new(examples),
            Box::new(|| suite(2, "group coherence over the catalog", "groups")),
            Box::new(|| suite(3, "definable convex subgroup", "definable")),
            Box::new(|| suite(4, "definable valuation cases", "cuts")),
            Box::new(|| suite(5, "positivity formula", "phi")),
            Box::new(|| suite(6, "series kernel", "series")),
            Box::new(|| suite(7, "classification invariants", "classify")),
            Box::new(parser),
        ];
        let handles: Vec<_> = jobs.into_iter().map(|job| scope.spawn(job)).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("criterion thread panicked"))
            .collect()
    });
    verdicts.sort_by_key(|v| v.number);

    for v in &verdicts {
        println!(
            "criterion {}: {}: {} ({})",
            v.number,
            v.title,
            if v.passed { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    let failed: Vec<_> = verdicts
        .iter()
        .filter(|v| !v.passed)
        .map(|v| v.number)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
