use alloc::vec::Vec;

use crate::{Error, Result};

/// Natural cubic spline through strictly increasing abscissae.
///
/// The second derivative vanishes at both ends. Evaluation reproduces the
/// tabulated ordinates exactly at the knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    curvature: Vec<f64>,
}

impl CubicSpline {
    /// Builds the spline. Needs at least two knots, strictly increasing.
    pub fn natural(knots: &[f64], values: &[f64]) -> Result<Self> {
        let n = knots.len();
        if n < 2 {
            return Err(Error::invalid("a spline needs at least two knots"));
        }
        if values.len() != n {
            return Err(Error::invalid("knot and value arrays differ in length"));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("spline knots must be strictly increasing"));
        }
        if knots.iter().chain(values).any(|v| !v.is_finite()) {
            return Err(Error::invalid("spline data must be finite"));
        }

        // Tridiagonal system for the interior second derivatives (Thomas algorithm).
        let mut curvature = alloc::vec![0.0; n];
        if n > 2 {
            let m = n - 2;
            let mut diag = Vec::with_capacity(m);
            let mut upper = Vec::with_capacity(m);
            let mut rhs = Vec::with_capacity(m);
            for i in 1..n - 1 {
                let h0 = knots[i] - knots[i - 1];
                let h1 = knots[i + 1] - knots[i];
                diag.push(2.0 * (h0 + h1));
                upper.push(h1);
                rhs.push(6.0 * ((values[i + 1] - values[i]) / h1 - (values[i] - values[i - 1]) / h0));
            }
            for k in 1..m {
                let lower = knots[k + 1] - knots[k];
                let factor = lower / diag[k - 1];
                diag[k] -= factor * upper[k - 1];
                rhs[k] -= factor * rhs[k - 1];
            }
            let mut sol = alloc::vec![0.0; m];
            sol[m - 1] = rhs[m - 1] / diag[m - 1];
            for k in (0..m - 1).rev() {
                sol[k] = (rhs[k] - upper[k] * sol[k + 1]) / diag[k];
            }
            curvature[1..n - 1].copy_from_slice(&sol);
        }

        Ok(Self {
            knots: knots.to_vec(),
            values: values.to_vec(),
            curvature,
        })
    }

    /// Abscissa range `(first, last)`.
    pub fn span(&self) -> (f64, f64) {
        (self.knots[0], self.knots[self.knots.len() - 1])
    }

    /// Tabulated abscissae.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Tabulated ordinates.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn segment(&self, t: f64) -> (usize, f64, f64, f64) {
        let last = self.knots.len() - 2;
        let i = self.knots.partition_point(|&k| k <= t).saturating_sub(1).min(last);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        (i, h, a, b)
    }

    /// Spline value. Outside the span the end cubic is extrapolated.
    pub fn value(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        if b == 0.0 {
            return self.values[i];
        }
        if a == 0.0 {
            return self.values[i + 1];
        }
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        self.values[i]
            + b * (self.values[i + 1] - self.values[i])
            + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0
    }

    /// First derivative.
    pub fn derivative(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
        (self.values[i + 1] - self.values[i]) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0
            + (3.0 * b * b - 1.0) / 6.0 * h * m1
    }

    /// Second derivative (piecewise linear).
    pub fn second_derivative(&self, t: f64) -> f64 {
        let (i, _, a, b) = self.segment(t);
        a * self.curvature[i] + b * self.curvature[i + 1]
    }
}
