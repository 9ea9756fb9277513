//! Level-doubling trapezoid sums over double-exponential node maps.

use super::QuadError;
use crate::numeric::NumericResult;

use std::f64::consts::FRAC_PI_2;

/// Offsets from the integration origin beyond which the exp-sinh map stops.
pub(crate) const X_MAX: f64 = 1e100;
/// Contribution ratio below which the far right tail counts as decayed.
pub const DECAY_RATIO: f64 = 1e-8;

/// Node position and weight (without the step factor `h`) at parameter `t`,
/// or `None` once the node is no longer representable on that side.
pub(crate) trait NodeMap {
    fn node(&self, t: f64) -> Option<(f64, f64)>;
}

/// tanh-sinh map of the real line onto (a, b). Nodes are placed by their
/// distance from the nearer endpoint so they never coincide with it.
pub(crate) struct TanhSinh {
    pub a: f64,
    pub b: f64,
}

impl NodeMap for TanhSinh {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let half = 0.5 * (self.b - self.a);
        let u = FRAC_PI_2 * t.abs().sinh();
        let cu = u.cosh();
        // 1 - tanh(u)
        let delta = 1.0 / (u.exp() * cu);
        let w = half * FRAC_PI_2 * t.cosh() / (cu * cu);
        let x = if t > 0.0 {
            self.b - half * delta
        } else if t < 0.0 {
            self.a + half * delta
        } else {
            self.a + half
        };
        if !(w > 0.0) || !w.is_finite() || x <= self.a || x >= self.b {
            return None;
        }
        Some((x, w))
    }
}

/// exp-sinh map of the real line onto (a, ∞).
pub(crate) struct ExpSinh {
    pub a: f64,
}

impl NodeMap for ExpSinh {
    fn node(&self, t: f64) -> Option<(f64, f64)> {
        let e = (FRAC_PI_2 * t.sinh()).exp();
        let x = self.a + e;
        let w = FRAC_PI_2 * t.cosh() * e;
        if !(e > 0.0) || e > X_MAX || x <= self.a || !(w > 0.0) || !w.is_finite() {
            return None;
        }
        Some((x, w))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LevelSum {
    pub value: f64,
    /// Σ |h w f|
    pub magnitude: f64,
    pub evaluations: usize,
    /// Largest |h w f| among the three outermost finite nodes on the t > 0
    /// side, or the extrapolated contribution where that side was cut.
    pub right_tail: f64,
    /// Largest |h w f| overall.
    pub peak: f64,
}

// Finite samples needed on a side before a non-finite one may be treated as
// the start of a negligible endpoint tail.
const TAIL_NEIGHBOURS: usize = 4;

fn scan_side(
    f: &impl Fn(f64) -> f64,
    map: &impl NodeMap,
    h: f64,
    sign: f64,
    tol: f64,
    strict: bool,
    out: &mut LevelSum,
) -> Result<(), QuadError> {
    let mut finite_run = 1usize;
    let mut last_f = f64::NAN;
    let mut outer = [0.0f64; 3];
    let mut k = 1u32;
    while let Some((x, w)) = map.node(sign * f64::from(k) * h) {
        let fx = f(x);
        out.evaluations += 1;
        if fx.is_finite() {
            let c = h * w * fx;
            out.value += c;
            out.magnitude += c.abs();
            out.peak = out.peak.max(c.abs());
            finite_run += 1;
            last_f = fx;
            outer = [outer[1], outer[2], c.abs()];
        } else {
            // Accept the cut when contributions were already shrinking and
            // the last finite value, carried to this node, is negligible.
            let decaying = outer[2] <= outer[1];
            let bound = 2.0 * h * w * last_f.abs();
            if !strict || (finite_run >= TAIL_NEIGHBOURS && decaying && bound < 0.1 * tol) {
                // The accepted cut is itself evidence of decay; what is left
                // of the tail is the extrapolated contribution.
                outer = [0.0, 0.0, 0.5 * bound];
                break;
            }
            return Err(QuadError::SingularInterior { x });
        }
        k += 1;
    }
    if sign > 0.0 {
        out.right_tail = outer.iter().fold(0.0f64, |m, &v| m.max(v));
    }
    Ok(())
}

pub(crate) fn level_sum(
    f: &impl Fn(f64) -> f64,
    map: &impl NodeMap,
    h: f64,
    tol: f64,
    strict: bool,
) -> Result<LevelSum, QuadError> {
    let (x0, w0) = map.node(0.0).expect("centre node always exists");
    let f0 = f(x0);
    if !f0.is_finite() {
        return Err(QuadError::SingularInterior { x: x0 });
    }
    let c0 = h * w0 * f0;
    let mut out = LevelSum {
        value: c0,
        magnitude: c0.abs(),
        evaluations: 1,
        right_tail: 0.0,
        peak: c0.abs(),
    };
    scan_side(f, map, h, 1.0, tol, strict, &mut out)?;
    scan_side(f, map, h, -1.0, tol, strict, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub tol: f64,
    /// Finest level; the step at level `L` is `2^-L`.
    pub level_cap: u32,
    /// Levels are compared from this one on.
    pub min_level: u32,
}

impl QuadOptions {
    pub const LEVEL_CAP: u32 = 12;
    pub const MIN_LEVEL: u32 = 3;

    pub fn new(tol: f64) -> Self {
        Self {
            tol,
            level_cap: Self::LEVEL_CAP,
            min_level: Self::MIN_LEVEL,
        }
    }

    pub fn with_level_cap(mut self, cap: u32) -> Self {
        self.level_cap = cap;
        self
    }
}

/// Halves the step until two successive levels agree to `tol`.
pub(crate) fn run_levels(
    f: &impl Fn(f64) -> f64,
    map: &impl NodeMap,
    opts: &QuadOptions,
    check_decay: bool,
) -> Result<NumericResult, QuadError> {
    assert!(opts.tol > 0.0, "tolerance must be positive");
    let mut previous: Option<f64> = None;
    let mut evaluations = 0usize;
    let mut last_err = f64::INFINITY;
    let mut value = f64::NAN;
    for level in 0..=opts.level_cap {
        let h = (-(level as f64)).exp2();
        // Warm-up levels are too coarse for the endpoint-tail test and
        // simply stop at the first unusable sample.
        let strict = level + 1 >= opts.min_level;
        let sum = level_sum(f, map, h, opts.tol, strict)?;
        evaluations += sum.evaluations;
        if strict && check_decay && sum.right_tail > DECAY_RATIO * sum.peak {
            return Err(QuadError::NoDecay {
                tail: sum.right_tail,
                peak: sum.peak,
            });
        }
        value = sum.value;
        let floor = 4.0 * f64::EPSILON * sum.magnitude;
        if let Some(prev) = previous {
            last_err = (sum.value - prev).abs() + floor;
            if level >= opts.min_level && (sum.value - prev).abs() <= opts.tol {
                return Ok(NumericResult::new(value, last_err, evaluations));
            }
        }
        previous = Some(sum.value);
    }
    if last_err <= 100.0 * opts.tol {
        Ok(NumericResult::new(value, last_err, evaluations))
    } else {
        Err(QuadError::NoConvergence {
            estimate: value,
            err: last_err,
            level: opts.level_cap,
        })
    }
}
