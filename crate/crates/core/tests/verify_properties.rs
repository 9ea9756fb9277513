use tablecheck::verify::{load_corpus, run_corpus, Report, Tolerances, VerdictTag, VerifyOptions, PAPER_CORPUS};

/// Everything in a report except the timing, with floats as bit patterns.
fn fingerprint(r: &Report) -> String {
    let bits = |v: f64| v.to_bits();
    format!(
        "{} {:?} {:?} {:?} {} {} {}",
        r.id,
        r.verdict.tag,
        r.lhs.map(|l| (bits(l.value), bits(l.err), l.terms_used)),
        r.rhs.map(|v| (bits(v.value), bits(v.err))),
        bits(r.verdict.discrepancy),
        bits(r.verdict.budget),
        r.matches
    )
}

#[test]
fn runs_are_deterministic_across_worker_counts() {
    let records = load_corpus(PAPER_CORPUS).unwrap();
    let opts = VerifyOptions::default();
    let a: Vec<String> = run_corpus(&records, &opts, 1).reports.iter().map(fingerprint).collect();
    let b: Vec<String> = run_corpus(&records, &opts, 8).reports.iter().map(fingerprint).collect();
    let c: Vec<String> = run_corpus(&records, &opts, 8).reports.iter().map(fingerprint).collect();
    assert_eq!(a, b);
    assert_eq!(b, c);
    let ids: Vec<&str> = records.iter().map(|r| r.id.as_str()).collect();
    let order: Vec<&str> = a.iter().map(|f| f.split(' ').next().unwrap()).collect();
    assert_eq!(ids, order);
}

#[test]
fn halving_tolerances_changes_no_verdict() {
    let records = load_corpus(PAPER_CORPUS).unwrap();
    let opts = VerifyOptions::default();
    let tight = VerifyOptions {
        tolerances: Tolerances {
            abs_tol: opts.tolerances.abs_tol / 2.0,
            rel_tol: opts.tolerances.rel_tol / 2.0,
            ..opts.tolerances
        },
        ..opts
    };
    let a = run_corpus(&records, &opts, 4);
    let b = run_corpus(&records, &tight, 4);
    for (x, y) in a.reports.iter().zip(&b.reports) {
        assert_eq!(x.verdict.tag, y.verdict.tag, "{}", x.id);
    }
}

#[test]
fn refutation_gaps_are_wide() {
    let records = load_corpus(PAPER_CORPUS).unwrap();
    let run = run_corpus(&records, &VerifyOptions::default(), 4);
    for r in run.reports.iter().filter(|r| r.verdict.tag == VerdictTag::Refuted) {
        assert!(r.verdict.discrepancy >= 1e-2, "{}: {}", r.id, r.verdict.discrepancy);
    }
}

#[test]
fn whole_one_and_reduced_identities() {
    let src = |a: &str| {
        format!(
            "[entry]\nid = \"W{a}\"\nlhs = \"integral(x, 0, {a}, x / (1 - exp(-x)))\"\n\
             rhs = \"({a})^2 / 2 - sum(k, 1, exp(-({a}) * k) / k^2) + zeta(2) - ({a}) * sum(k, 1, exp(-({a}) * k) / k)\"\n\
             expect = \"verified\"\n\n\
             [entry]\nid = \"R{a}\"\nlhs = \"integral(x, 0, {a}, x / (1 - exp(-x)))\"\n\
             rhs = \"({a})^2 / 2 - dilog(exp(-({a}))) + pi^2 / 6 + ({a}) * ln(1 - exp(-({a})))\"\n\
             expect = \"verified\"\n\n"
        )
    };
    let text: String = ["ln(2)", "1", "3"].iter().map(|a| src(a)).collect();
    let records = load_corpus(&text).unwrap();
    assert_eq!(records.len(), 6);
    let run = run_corpus(&records, &VerifyOptions::default(), 2);
    for r in &run.reports {
        assert_eq!(r.verdict.tag, VerdictTag::Verified, "{}: {:?}", r.id, r.verdict);
    }
}
