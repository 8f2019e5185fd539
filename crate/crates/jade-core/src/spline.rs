//! Interpolating natural cubic splines with analytic derivative evaluation.
//!
//! Knot values are interpolated exactly and the pieces join with continuous
//! first and second derivatives. End conditions are natural (zero second
//! derivative at both boundary knots), so affine data is reproduced exactly.

use crate::error::{Error, Result};

/// Piecewise cubic `S(x) = a + b dx + c dx^2 + d dx^3` per interval,
/// with `dx = x - knot_x[i]`.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    knots_x: Vec<f64>,
    coeffs: Vec<[f64; 4]>,
}

impl CubicSpline {
    /// Fit a natural cubic spline (zero second derivative at both ends)
    /// through `(knot_x[i], knot_y[i])`.
    ///
    /// Requires at least two knots with strictly increasing abscissae. The
    /// tridiagonal system for the interior second derivatives is solved by
    /// Thomas elimination; knot counts here stay small.
    pub fn fit(knot_x: &[f64], knot_y: &[f64]) -> Result<Self> {
        Self::fit_with_ends(knot_x, knot_y, false)
    }

    /// Fit with not-a-knot end conditions: the third derivative is
    /// continuous across the second and the second-to-last knot, so the
    /// two outermost pieces each merge with their neighbor. Data sampled
    /// from a single cubic (or lower-degree) polynomial is reproduced
    /// exactly, which a natural spline cannot do when the true curvature
    /// is nonzero at the ends. Falls back to the natural fit when there
    /// are fewer than four knots.
    pub fn fit_not_a_knot(knot_x: &[f64], knot_y: &[f64]) -> Result<Self> {
        Self::fit_with_ends(knot_x, knot_y, true)
    }

    fn fit_with_ends(knot_x: &[f64], knot_y: &[f64], not_a_knot: bool) -> Result<Self> {
        let n = knot_x.len();
        if n < 2 {
            return Err(Error::InsufficientSamples { required: 2, actual: n });
        }
        if knot_y.len() != n {
            return Err(Error::InvalidParameter(format!(
                "knot count mismatch: {} x vs {} y",
                n,
                knot_y.len()
            )));
        }
        for w in knot_x.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidParameter(format!(
                    "knots must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
        }

        let h: Vec<f64> = knot_x.windows(2).map(|w| w[1] - w[0]).collect();
        let not_a_knot = not_a_knot && n >= 4;

        // Second derivatives m[0..n]. Natural ends pin m[0] = m[n-1] = 0;
        // not-a-knot expresses them through their neighbors:
        //   m[0] = m[1] (1 + h0/h1) - m[2] h0/h1, and mirrored at the end.
        let mut m = vec![0.0; n];
        if n > 2 {
            let rows = n - 2;
            let mut diag = vec![0.0; rows];
            let mut upper = vec![0.0; rows];
            let mut lower = vec![0.0; rows];
            let mut rhs = vec![0.0; rows];
            for k in 0..rows {
                let i = k + 1;
                lower[k] = h[i - 1];
                diag[k] = 2.0 * (h[i - 1] + h[i]);
                upper[k] = h[i];
                rhs[k] = 6.0
                    * ((knot_y[i + 1] - knot_y[i]) / h[i]
                        - (knot_y[i] - knot_y[i - 1]) / h[i - 1]);
            }
            if not_a_knot {
                // Substitute the end relations into the first and last rows.
                let r0 = h[0] / h[1];
                diag[0] += h[0] * (1.0 + r0);
                upper[0] -= h[0] * r0;
                let rn = h[n - 2] / h[n - 3];
                diag[rows - 1] += h[n - 2] * (1.0 + rn);
                lower[rows - 1] -= h[n - 2] * rn;
            }
            // Thomas elimination.
            for k in 1..rows {
                let w = lower[k] / diag[k - 1];
                diag[k] -= w * upper[k - 1];
                rhs[k] -= w * rhs[k - 1];
            }
            m[rows] = rhs[rows - 1] / diag[rows - 1];
            for k in (0..rows - 1).rev() {
                m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
            }
            if not_a_knot {
                let r0 = h[0] / h[1];
                m[0] = m[1] * (1.0 + r0) - m[2] * r0;
                let rn = h[n - 2] / h[n - 3];
                m[n - 1] = m[n - 2] * (1.0 + rn) - m[n - 3] * rn;
            }
        }

        let mut coeffs = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let a = knot_y[i];
            let b = (knot_y[i + 1] - knot_y[i]) / h[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
            let c = m[i] / 2.0;
            let d = (m[i + 1] - m[i]) / (6.0 * h[i]);
            coeffs.push([a, b, c, d]);
        }
        Ok(Self { knots_x: knot_x.to_vec(), coeffs })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots_x
    }

    /// Domain covered by the spline.
    pub fn domain(&self) -> (f64, f64) {
        (self.knots_x[0], *self.knots_x.last().unwrap())
    }

    fn interval_of(&self, x: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return Err(Error::OutOfRange { x, lo, hi });
        }
        // partition_point returns the first knot > x; the active piece
        // starts one knot earlier. The last knot maps onto the final piece.
        let idx = self.knots_x.partition_point(|&k| k <= x);
        Ok(idx.saturating_sub(1).min(self.coeffs.len() - 1))
    }

    /// Evaluate the spline; exact at knots, no extrapolation.
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let i = self.interval_of(x)?;
        let [a, b, c, d] = self.coeffs[i];
        let dx = x - self.knots_x[i];
        Ok(a + dx * (b + dx * (c + dx * d)))
    }

    /// Analytic first derivative of the active cubic piece.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        let i = self.interval_of(x)?;
        let [_, b, c, d] = self.coeffs[i];
        let dx = x - self.knots_x[i];
        Ok(b + dx * (2.0 * c + dx * 3.0 * d))
    }

    /// Second derivative, used by continuity checks.
    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        let i = self.interval_of(x)?;
        let [_, _, c, d] = self.coeffs[i];
        let dx = x - self.knots_x[i];
        Ok(2.0 * c + 6.0 * d * dx)
    }
}
