//! Classifies ∫_a^∞ f from window integrals over `[a + 2^(j-1), a + 2^j]`.

use super::integrate_finite;
use crate::numeric::NumericResult;

/// Windows run over `j = 0..=MAX_WINDOW_EXPONENT` (the first is `[a, a+1]`).
pub const MAX_WINDOW_EXPONENT: u32 = 20;
pub const WINDOW_TOL: f64 = 1e-9;
/// Extrapolated tail below which the integral is taken as convergent.
pub const CONVERGED_TAIL: f64 = 1e-6;
/// Window magnitude above which a non-decaying trend counts as divergence.
pub const DIVERGENT_FLOOR: f64 = 1e-3;
/// Windows entering the trend test.
pub const TREND_WINDOWS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub err: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WindowTable {
    pub windows: Vec<Window>,
    /// Least-squares slope of ln|W_j| against j over the last [`TREND_WINDOWS`] windows.
    pub trend_slope: Option<f64>,
    /// Standard error of `trend_slope`.
    pub slope_se: Option<f64>,
    /// Why the table stopped short of the last window, if it did.
    pub stopped: Option<String>,
}

impl WindowTable {
    fn tail(&self) -> &[Window] {
        let n = self.windows.len();
        &self.windows[n.saturating_sub(TREND_WINDOWS)..]
    }

    pub fn max_recent_magnitude(&self) -> f64 {
        self.tail().iter().fold(0.0, |m, w| m.max(w.value.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Divergence {
    ConvergesTo(NumericResult),
    Divergent(WindowTable),
    Unknown(WindowTable),
}

/// Least-squares slope of ln|W_j| against j, with its standard error.
fn log_slope(windows: &[Window]) -> Option<(f64, f64)> {
    if windows.len() < 3 || windows.iter().any(|w| w.value == 0.0) {
        return None;
    }
    let n = windows.len() as f64;
    let ys: Vec<f64> = windows.iter().map(|w| w.value.abs().ln()).collect();
    let mean_x = (n - 1.0) / 2.0;
    let mean_y = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in ys.iter().enumerate() {
        let dx = i as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let rss: f64 = ys
        .iter()
        .enumerate()
        .map(|(i, y)| {
            let r = y - mean_y - slope * (i as f64 - mean_x);
            r * r
        })
        .sum();
    let se = (rss / (n - 2.0) / sxx).sqrt();
    Some((slope, se))
}

/// Geometric extrapolation of the remaining windows, if the last three decay.
fn extrapolated_tail(windows: &[Window]) -> Option<f64> {
    let n = windows.len();
    if n < 3 {
        return None;
    }
    let m: Vec<f64> = windows[n - 3..].iter().map(|w| w.value.abs()).collect();
    if m[2] == 0.0 && m[1] == 0.0 {
        return Some(0.0);
    }
    if !(m[2] < m[1] && m[1] < m[0]) {
        return None;
    }
    let r = (m[2] / m[1]).max(m[1] / m[0]);
    Some(m[2] * r / (1.0 - r))
}

/// Integrates `f` over dyadic windows starting at `a` and classifies the
/// improper integral.
///
/// Windows are integrated in order until one fails to converge (the
/// integrand then oscillates faster than the rule resolves). The integral
/// converges when the last three windows shrink geometrically with an
/// extrapolated tail below [`CONVERGED_TAIL`]. It is divergent when the
/// largest of the last [`TREND_WINDOWS`] windows exceeds [`DIVERGENT_FLOOR`]
/// and ln|W_j| shows no significant decay: slope + 2·SE ≥ 0.
pub fn detect_divergence(f: impl Fn(f64) -> f64, a: f64) -> Divergence {
    let mut table = WindowTable::default();
    let mut lower = a;
    for j in 0..=MAX_WINDOW_EXPONENT {
        let upper = a + (j as f64).exp2();
        match integrate_finite(&f, lower, upper, WINDOW_TOL) {
            Ok(r) => table.windows.push(Window {
                lower,
                upper,
                value: r.value,
                err: r.err,
            }),
            Err(e) => {
                table.stopped = Some(format!("window [{lower}, {upper}]: {e}"));
                break;
            }
        }
        if let Some(tail) = extrapolated_tail(&table.windows) {
            if tail <= CONVERGED_TAIL {
                let value: f64 = table.windows.iter().map(|w| w.value).sum();
                let err = tail + table.windows.iter().map(|w| w.err).sum::<f64>();
                let evaluations = table.windows.len();
                return Divergence::ConvergesTo(NumericResult::new(value, err, evaluations));
            }
        }
        lower = upper;
    }
    if table.windows.len() < TREND_WINDOWS {
        return Divergence::Unknown(table);
    }
    let Some((slope, se)) = log_slope(table.tail()) else {
        return Divergence::Unknown(table);
    };
    table.trend_slope = Some(slope);
    table.slope_se = Some(se);
    if slope + 2.0 * se >= 0.0 && table.max_recent_magnitude() > DIVERGENT_FLOOR {
        Divergence::Divergent(table)
    } else {
        Divergence::Unknown(table)
    }
}
