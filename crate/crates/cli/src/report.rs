//! Text and JSON rendering of corpus runs.

use serde::Serialize;
use tablecheck::verify::{CorpusRun, Report};

/// `v` with `digits` significant digits, in the style of C's `%g`.
pub fn sig(v: f64, digits: usize) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.into();
    }
    if v == 0.0 {
        return "0".into();
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

const TEXT_DIGITS: usize = 10;

pub fn text_line(r: &Report) -> String {
    let lhs = match (&r.lhs, r.verdict.tag) {
        (Some(l), _) => format!("{}±{}", sig(l.value, TEXT_DIGITS), sig(l.err, TEXT_DIGITS)),
        (None, tablecheck::verify::VerdictTag::Divergent) => "divergent".into(),
        (None, _) => "n/a".into(),
    };
    let rhs = r.rhs.map_or_else(|| "n/a".into(), |v| sig(v.value, TEXT_DIGITS));
    format!(
        "{}  {}  lhs={}  rhs={}  Δ={}  [{}]",
        r.id,
        r.verdict.tag,
        lhs,
        rhs,
        sig(r.verdict.discrepancy, TEXT_DIGITS),
        if r.matches { "MATCH" } else { "MISMATCH" }
    )
}

pub fn text(run: &CorpusRun) -> String {
    let mut out = String::new();
    for r in &run.reports {
        out.push_str(&text_line(r));
        out.push('\n');
    }
    out.push_str(&run.summary.to_string());
    out.push('\n');
    out
}

#[derive(Serialize)]
struct JsonReport<'a> {
    id: &'a str,
    verdict: &'static str,
    lhs: Option<f64>,
    lhs_err: Option<f64>,
    rhs: Option<f64>,
    delta: Option<f64>,
    #[serde(rename = "match")]
    matches: bool,
    ms: f64,
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// One object per report; numbers use the shortest representation that
/// reads back as the same double, and unavailable values are `null`.
pub fn json(run: &CorpusRun) -> String {
    let rows: Vec<JsonReport> = run
        .reports
        .iter()
        .map(|r| JsonReport {
            id: &r.id,
            verdict: r.verdict.tag.name(),
            lhs: r.lhs.map(|l| l.value),
            lhs_err: r.lhs.map(|l| l.err),
            rhs: r.rhs.map(|v| v.value),
            delta: finite(r.verdict.discrepancy),
            matches: r.matches,
            ms: r.ms,
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("reports serialize");
    s.push('\n');
    s
}
