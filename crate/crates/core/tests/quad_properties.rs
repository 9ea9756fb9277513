use std::f64::consts::PI;

use tablecheck::expr::{parse, Expression};
use tablecheck::quad::{
    integrate, integrate_finite, integrate_with, quartic_moment, IntegralSpec, QuadError, QuadOptions,
};
use tablecheck::quantity::{evaluate, QuantityOptions};
use tablecheck::verify::{load_corpus, VerdictTag, PAPER_CORPUS};

fn spec_of(e: &Expression) -> Option<IntegralSpec> {
    IntegralSpec::from_expression(e).map(|r| r.unwrap())
}

/// Corpus integrals whose identity is expected to hold, with the rhs value
/// and its error.
fn verified_integrals() -> Vec<(String, IntegralSpec, f64, f64)> {
    load_corpus(PAPER_CORPUS)
        .unwrap()
        .into_iter()
        .filter(|r| r.expect == VerdictTag::Verified)
        .filter_map(|r| {
            let spec = spec_of(&r.lhs)?;
            let rhs = evaluate(&r.rhs, &QuantityOptions::default()).unwrap();
            Some((r.id, spec, rhs.value, rhs.err))
        })
        .collect()
}

#[test]
fn error_estimates_are_sound_on_corpus() {
    let cases = verified_integrals();
    assert!(cases.len() >= 12);
    for (id, spec, rhs, rhs_err) in cases {
        let r = integrate(&spec, 1e-12).unwrap();
        // The closed form itself is only good to a few ulps.
        let slack = 4.0 * f64::EPSILON * rhs.abs();
        assert!(
            (r.value - rhs).abs() <= 10.0 * (r.err + rhs_err) + slack,
            "{id}: {} vs {rhs}, err {}",
            r.value,
            r.err
        );
    }
}

#[test]
fn error_non_increasing_in_level_cap_on_corpus() {
    for (id, spec, _, _) in verified_integrals() {
        let mut last = f64::INFINITY;
        for cap in QuadOptions::MIN_LEVEL..=QuadOptions::LEVEL_CAP {
            let opts = QuadOptions::new(1e-12).with_level_cap(cap);
            let err = match integrate_with(&spec, &opts) {
                Ok(r) => r.err,
                Err(QuadError::NoConvergence { err, .. }) => err,
                Err(e) => panic!("{id} at cap {cap}: {e}"),
            };
            assert!(err <= last, "{id}: cap {cap} err {err} > {last}");
            last = err;
        }
    }
}

#[test]
fn removable_and_log_singular_endpoints() {
    let r = integrate_finite(|x: f64| (1.0 + x).ln() / x, 0.0, 1.0, 1e-12).unwrap();
    assert!((r.value - PI * PI / 12.0).abs() <= 1e-12);
    let r = integrate_finite(|x: f64| x.tan().ln().ln(), PI / 4.0, PI / 2.0, 1e-12).unwrap();
    assert!((r.value + 0.260_442_806_300_988_7).abs() <= 1e-10, "{r}");
}

fn sigma(x: f64, p: f64) -> f64 {
    (x.powi(4) + 2.0 * p * x * x + 1.0).sqrt()
}

#[test]
fn equivalent_form_of_the_refuted_entry() {
    let i = tablecheck::quad::integrate_half_infinite(
        |x: f64| {
            let (a, b) = (sigma(x, 5.0 / 3.0), sigma(x, 1.0));
            1.0 / (a.sqrt() * b.sqrt() * (a + b).sqrt())
        },
        0.0,
        1e-12,
    )
    .unwrap();
    let phi = |x: f64| 1.0 + 4.0 * x * x / (3.0 * (1.0 + x * x).powi(2));
    let j = tablecheck::quad::integrate_half_infinite(
        |x: f64| 1.0 / ((1.0 + x * x).powf(1.5) * (phi(x) + phi(x).sqrt()).sqrt()),
        0.0,
        1e-12,
    )
    .unwrap();
    assert!((i.value - j.value).abs() <= i.err + j.err, "{i} vs {j}");
}

#[test]
fn quartic_closed_form_at_m0() {
    for a in [0.0, 1.0, 2.0] {
        let r = quartic_moment(a, 0, 1e-12).unwrap();
        let closed = PI / (2.0 * (2.0 * (a + 1.0)).sqrt());
        assert!((r.value - closed).abs() <= 1e-11, "a = {a}: {r} vs {closed}");
    }
}

/// Terms of the expansion of √(a + √(1 + c)) about c = 0.
fn double_root_terms(a: f64, c: f64, n: u32) -> Vec<f64> {
    (1..=n)
        .map(|k| {
            let moment = quartic_moment(a, k - 1, 1e-13).unwrap().value;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign / f64::from(k) * moment * c.powi(k as i32) / (PI * 2f64.sqrt())
        })
        .collect()
}

#[test]
fn double_square_root_truncation_bound() {
    let (a, c) = (1.0f64, 0.1f64);
    let exact = (a + (1.0 + c).sqrt()).sqrt();
    let terms = double_root_terms(a, c, 7);
    for k in 2..=6 {
        let partial = (a + 1.0).sqrt() + terms[..k].iter().sum::<f64>();
        let residual = (exact - partial).abs();
        assert!(residual <= terms[k].abs(), "K = {k}: {residual} > {}", terms[k].abs());
    }
}

#[test]
fn bound_expressions_are_evaluated_first() {
    let a = parse("integral(x, 0, ln(2), x / (1 - exp(-x)))").unwrap();
    let b = parse("integral(x, 0, 0.6931471805599453, x / (1 - exp(-x)))").unwrap();
    let ra = integrate(&spec_of(&a).unwrap(), 1e-12).unwrap();
    let rb = integrate(&spec_of(&b).unwrap(), 1e-12).unwrap();
    assert_eq!(ra.value.to_bits(), rb.value.to_bits());
}
