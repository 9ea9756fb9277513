use std::fmt;

/// A computed value with a claimed absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericResult {
    pub value: f64,
    pub err: f64,
    /// Function evaluations (quadrature) or terms (series) consumed.
    pub terms_used: usize,
}

impl NumericResult {
    pub fn new(value: f64, err: f64, terms_used: usize) -> Self {
        debug_assert!(err >= 0.0 && err.is_finite(), "bad error bound {err}");
        Self {
            value,
            err,
            terms_used,
        }
    }

    /// An exactly known value.
    pub fn exact(value: f64) -> Self {
        Self::new(value, 0.0, 0)
    }
}

impl fmt::Display for NumericResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ± {:e}", self.value, self.err)
    }
}
