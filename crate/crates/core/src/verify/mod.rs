//! Identity records, verdicts and corpus runs.

mod corpus;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

pub use corpus::{load_corpus, CorpusError, CorpusErrorKind};

use crate::expr::Expression;
use crate::numeric::NumericResult;
use crate::quad::{detect_divergence, Divergence, IntegralSpec, QuadError, Route};
use crate::quantity::{self, QuantityError, QuantityOptions};

/// The bundled corpus of table identities.
pub const PAPER_CORPUS: &str = include_str!("../../../../corpus/paper.ids");

pub const ABS_TOL: f64 = 1e-9;
pub const REL_TOL: f64 = 1e-9;
pub const REFUTE_FACTOR: f64 = 100.0;
pub const REFUTE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerdictTag {
    Verified,
    Refuted,
    Divergent,
    Inconclusive,
    Error,
}

impl VerdictTag {
    pub const ALL: [VerdictTag; 5] = [
        VerdictTag::Verified,
        VerdictTag::Refuted,
        VerdictTag::Divergent,
        VerdictTag::Inconclusive,
        VerdictTag::Error,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VerdictTag::Verified => "VERIFIED",
            VerdictTag::Refuted => "REFUTED",
            VerdictTag::Divergent => "DIVERGENT",
            VerdictTag::Inconclusive => "INCONCLUSIVE",
            VerdictTag::Error => "ERROR",
        }
    }
}

impl fmt::Display for VerdictTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    pub id: String,
    pub lhs: Expression,
    /// May contain integrals or sums; it must not have free variables.
    pub rhs: Expression,
    pub expect: VerdictTag,
    pub note: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LhsKind {
    Integral,
    Series,
    Expression,
}

impl IdentityRecord {
    pub fn lhs_kind(&self) -> LhsKind {
        match self.lhs {
            Expression::Integral { .. } => LhsKind::Integral,
            Expression::Sum { .. } => LhsKind::Series,
            _ => LhsKind::Expression,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub refute_factor: f64,
    pub refute_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            abs_tol: ABS_TOL,
            rel_tol: REL_TOL,
            refute_factor: REFUTE_FACTOR,
            refute_floor: REFUTE_FLOOR,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    pub tolerances: Tolerances,
    pub quantity: QuantityOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub tag: VerdictTag,
    /// |lhs − rhs|; NaN when either side is unavailable.
    pub discrepancy: f64,
    pub budget: f64,
    /// Error text, or the reason for a divergent or inconclusive outcome.
    pub message: Option<String>,
}

impl Verdict {
    fn error(message: String) -> Self {
        Self {
            tag: VerdictTag::Error,
            discrepancy: f64::NAN,
            budget: f64::NAN,
            message: Some(message),
        }
    }
}

/// Compares a computed value with an exactly known one.
pub fn classify(lhs: &NumericResult, rhs_value: f64, opts: &Tolerances) -> Verdict {
    classify_pair(lhs, &NumericResult::exact(rhs_value), opts)
}

/// Like [`classify`] with an rhs that carries its own error, which is added
/// to the budget.
pub fn classify_pair(lhs: &NumericResult, rhs: &NumericResult, opts: &Tolerances) -> Verdict {
    let discrepancy = (lhs.value - rhs.value).abs();
    let budget = lhs.err + rhs.err + opts.abs_tol + opts.rel_tol * rhs.value.abs();
    let tag = if discrepancy <= budget {
        VerdictTag::Verified
    } else if discrepancy >= opts.refute_factor * budget && discrepancy >= opts.refute_floor {
        VerdictTag::Refuted
    } else {
        VerdictTag::Inconclusive
    };
    Verdict {
        tag,
        discrepancy,
        budget,
        message: None,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub id: String,
    /// Absent when the lhs diverges or fails to evaluate.
    pub lhs: Option<NumericResult>,
    pub rhs: Option<NumericResult>,
    pub verdict: Verdict,
    pub expected: VerdictTag,
    /// Verdict tag equals the expected one.
    pub matches: bool,
    /// Wall-clock time spent on the record.
    pub ms: f64,
}

enum Lhs {
    Value(NumericResult),
    Divergent(String),
    Unknown(String),
}

fn divergence_message(d: &Divergence) -> String {
    let table = match d {
        Divergence::ConvergesTo(_) => return String::new(),
        Divergence::Divergent(t) | Divergence::Unknown(t) => t,
    };
    let mut s = format!(
        "{} windows, max recent |W| {:.3e}",
        table.windows.len(),
        table.max_recent_magnitude()
    );
    if let (Some(slope), Some(se)) = (table.trend_slope, table.slope_se) {
        s.push_str(&format!(", ln|W| slope {slope:.4} ± {se:.4}"));
    }
    s
}

fn evaluate_lhs(e: &Expression, opts: &QuantityOptions) -> Result<Lhs, QuantityError> {
    let err = match quantity::evaluate(e, opts) {
        Ok(r) => return Ok(Lhs::Value(r)),
        Err(err @ QuantityError::Quad(QuadError::NoDecay { .. })) => err,
        Err(err) => return Err(err),
    };
    // Only a top-level integral over (a, ∞) goes to the divergence detector.
    let spec = match IntegralSpec::from_expression(e) {
        Some(Ok(spec)) if spec.route().ok() == Some(Route::HalfInfinite) => spec,
        _ => return Err(err),
    };
    let d = detect_divergence(|x| spec.integrand.sample(x), spec.lower.value());
    let message = divergence_message(&d);
    Ok(match d {
        Divergence::ConvergesTo(r) => Lhs::Value(r),
        Divergence::Divergent(_) => Lhs::Divergent(message),
        Divergence::Unknown(_) => Lhs::Unknown(message),
    })
}

/// Evaluates both sides of `r` and classifies the pair. Evaluation failures
/// become [`VerdictTag::Error`].
pub fn verify_identity(r: &IdentityRecord, opts: &VerifyOptions) -> Report {
    let started = Instant::now();
    let rhs = quantity::evaluate(&r.rhs, &opts.quantity);
    let lhs = evaluate_lhs(&r.lhs, &opts.quantity);
    let (lhs_value, rhs_value, verdict) = match (lhs, rhs) {
        (Err(e), rhs) => (None, rhs.ok(), Verdict::error(format!("lhs: {e}"))),
        (Ok(_), Err(e)) => (None, None, Verdict::error(format!("rhs: {e}"))),
        (Ok(Lhs::Value(l)), Ok(rv)) => (Some(l), Some(rv), classify_pair(&l, &rv, &opts.tolerances)),
        (Ok(Lhs::Divergent(message)), Ok(rv)) => (
            None,
            Some(rv),
            Verdict {
                tag: VerdictTag::Divergent,
                discrepancy: f64::NAN,
                budget: f64::NAN,
                message: Some(message),
            },
        ),
        (Ok(Lhs::Unknown(message)), Ok(rv)) => (
            None,
            Some(rv),
            Verdict {
                tag: VerdictTag::Inconclusive,
                discrepancy: f64::NAN,
                budget: f64::NAN,
                message: Some(format!("no decay, divergence undecided: {message}")),
            },
        ),
    };
    Report {
        id: r.id.clone(),
        lhs: lhs_value,
        rhs: rhs_value,
        matches: verdict.tag == r.expect,
        expected: r.expect,
        verdict,
        ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Summary {
    /// Report counts indexed like [`VerdictTag::ALL`].
    pub by_verdict: [usize; 5],
    pub matched: usize,
    pub mismatched: usize,
}

impl Summary {
    pub fn count(&self, tag: VerdictTag) -> usize {
        self.by_verdict[tag as usize]
    }

    pub fn all_match(&self) -> bool {
        self.mismatched == 0
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} records:", self.matched + self.mismatched)?;
        for tag in VerdictTag::ALL {
            write!(f, " {} {}", self.count(tag), tag.name().to_lowercase())?;
        }
        write!(f, "; {} match, {} mismatch", self.matched, self.mismatched)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusRun {
    /// In corpus order.
    pub reports: Vec<Report>,
    pub summary: Summary,
}

/// Verifies every record on up to `jobs` threads.
pub fn run_corpus(records: &[IdentityRecord], opts: &VerifyOptions, jobs: usize) -> CorpusRun {
    let jobs = jobs.clamp(1, records.len().max(1));
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Report>>> = Mutex::new(vec![None; records.len()]);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(record) = records.get(i) else { break };
                let report = verify_identity(record, opts);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(report);
            });
        }
    });
    let reports: Vec<Report> = slots
        .into_inner()
        .expect("workers finished")
        .into_iter()
        .map(|r| r.expect("every record verified"))
        .collect();
    let mut summary = Summary::default();
    for r in &reports {
        summary.by_verdict[r.verdict.tag as usize] += 1;
        if r.matches {
            summary.matched += 1;
        } else {
            summary.mismatched += 1;
        }
    }
    CorpusRun { reports, summary }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::specfun::{dbeta, PI};

    fn record(id: &str, lhs: &str, rhs: &str, expect: VerdictTag) -> IdentityRecord {
        IdentityRecord {
            id: id.into(),
            lhs: parse(lhs).unwrap(),
            rhs: parse(rhs).unwrap(),
            expect,
            note: String::new(),
        }
    }

    #[test]
    fn classify_examples() {
        let t = Tolerances::default();
        let v = classify(&NumericResult::new(0.8224670334, 1e-12, 0), PI * PI / 12.0, &t);
        assert_eq!(v.tag, VerdictTag::Verified);
        assert!(v.discrepancy <= v.budget);

        let rhs = PI.sqrt() * dbeta(0.5).unwrap();
        let v = classify(&NumericResult::new(1.0, 1e-12, 0), rhs, &t);
        assert_eq!(v.tag, VerdictTag::Refuted);
        assert!((v.discrepancy - 0.1834).abs() < 1e-4, "{}", v.discrepancy);

        // Within the lhs error the pair still verifies; the gray zone lies
        // between the budget and REFUTE_FACTOR times it.
        let x = 0.7;
        let v = classify(&NumericResult::new(x, 1e-3, 0), x + 5e-4, &t);
        assert_eq!(v.tag, VerdictTag::Verified);
        let v = classify(&NumericResult::new(x, 1e-3, 0), x + 5e-3, &t);
        assert_eq!(v.tag, VerdictTag::Inconclusive);
    }

    #[test]
    fn trivial_record() {
        let r = verify_identity(&record("ONE", "1", "1", VerdictTag::Verified), &VerifyOptions::default());
        assert_eq!(r.verdict.tag, VerdictTag::Verified);
        assert!(r.matches);
    }

    #[test]
    fn free_variable_in_rhs_is_isolated() {
        let records = [
            record("ONE", "1", "1", VerdictTag::Verified),
            record("BAD", "1", "x + 1", VerdictTag::Verified),
            record("TWO", "2", "1 + 1", VerdictTag::Verified),
        ];
        let run = run_corpus(&records, &VerifyOptions::default(), 2);
        let tags: Vec<_> = run.reports.iter().map(|r| r.verdict.tag).collect();
        assert_eq!(tags, [VerdictTag::Verified, VerdictTag::Error, VerdictTag::Verified]);
        assert!(run.reports[1].verdict.message.as_deref().unwrap().contains("x"));
        assert_eq!(run.summary.mismatched, 1);
        assert_eq!(run.summary.count(VerdictTag::Error), 1);
    }

    #[test]
    fn non_decaying_lhs_goes_to_divergence_detector() {
        let r = record(
            "DIV",
            "integral(x, 0, inf, 1/(1+x))",
            "1",
            VerdictTag::Divergent,
        );
        let rep = verify_identity(&r, &VerifyOptions::default());
        assert_eq!(rep.verdict.tag, VerdictTag::Divergent, "{:?}", rep.verdict);
        assert!(rep.lhs.is_none());
    }

    #[test]
    fn bundled_corpus_loads() {
        assert_eq!(load_corpus(PAPER_CORPUS).unwrap().len(), 24);
    }
}
