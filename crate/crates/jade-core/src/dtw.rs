//! Dynamic Time Warping: accumulated cost matrix, optimal path backtracking,
//! and warping-path inversion.
//!
//! The cost matrix carries an `(n+1) x (m+1)` frame with an infinite border
//! so the initialization constraints and the recurrence
//! `D[i][j] = d(x[i-1], y[j-1]) + min(D[i-1][j-1], D[i-1][j], D[i][j-1])`
//! coexist without special cases. The local distance is the absolute
//! difference of scalar samples.

use crate::error::{Error, Result};

/// Accumulated cost matrix over two sequences of lengths `n` and `m`.
#[derive(Debug, Clone)]
pub struct CostMatrix {
    values: Vec<f64>,
    n: usize,
    m: usize,
}

impl CostMatrix {
    /// Accumulated cost at frame coordinates `(i, j)`, `0 <= i <= n`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * (self.m + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.values[i * (self.m + 1) + j] = v;
    }

    /// Total alignment cost `D[n][m]`.
    pub fn final_cost(&self) -> f64 {
        self.get(self.n, self.m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }
}

/// Monotone stepwise alignment between two sequences.
///
/// `pairs` holds 0-based index pairs `(i, j)`, starting at `(0, 0)` and
/// ending at `(n-1, m-1)`; each index advances by 0 or 1 per step and at
/// least one advances.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingPath {
    pub pairs: Vec<(usize, usize)>,
    pub cost: f64,
}

/// Fill the accumulated cost matrix for sequences `x` (rows) and `y` (columns).
pub fn accumulate(x: &[f64], y: &[f64]) -> Result<CostMatrix> {
    if x.is_empty() || y.is_empty() {
        return Err(Error::InsufficientSamples { required: 1, actual: 0 });
    }
    let (n, m) = (x.len(), y.len());
    let mut d = CostMatrix {
        values: vec![f64::INFINITY; (n + 1) * (m + 1)],
        n,
        m,
    };
    d.set(0, 0, 0.0);
    for i in 1..=n {
        let xi = x[i - 1];
        for j in 1..=m {
            let cost = (xi - y[j - 1]).abs();
            let best = d
                .get(i - 1, j - 1)
                .min(d.get(i - 1, j))
                .min(d.get(i, j - 1));
            d.set(i, j, cost + best);
        }
    }
    Ok(d)
}

/// Trace the optimal warping path back from `D[n][m]` to `D[1][1]`.
///
/// Ties are broken deterministically: diagonal, then vertical (advance in
/// `x` only), then horizontal.
pub fn optimal_path(matrix: &CostMatrix) -> WarpingPath {
    let (mut i, mut j) = (matrix.n(), matrix.m());
    let mut pairs = Vec::with_capacity(i + j);
    pairs.push((i - 1, j - 1));
    while i > 1 || j > 1 {
        let diag = if i > 1 && j > 1 { matrix.get(i - 1, j - 1) } else { f64::INFINITY };
        let vert = if i > 1 { matrix.get(i - 1, j) } else { f64::INFINITY };
        let horiz = if j > 1 { matrix.get(i, j - 1) } else { f64::INFINITY };
        let best = diag.min(vert).min(horiz);
        if diag == best {
            i -= 1;
            j -= 1;
        } else if vert == best {
            i -= 1;
        } else {
            j -= 1;
        }
        pairs.push((i - 1, j - 1));
    }
    pairs.reverse();
    WarpingPath { pairs, cost: matrix.final_cost() }
}

/// Convenience: align two sequences and return the optimal path.
pub fn align(x: &[f64], y: &[f64]) -> Result<WarpingPath> {
    Ok(optimal_path(&accumulate(x, y)?))
}

/// Convenience: total DTW cost between two sequences.
pub fn dtw_cost(x: &[f64], y: &[f64]) -> Result<f64> {
    Ok(accumulate(x, y)?.final_cost())
}

/// Invert a warping path along the first (query) axis.
///
/// For each query index `i` in `[0, target_length)` the output is the mean
/// of all second-axis indices the path aligns to `i`. Vertical path runs map
/// several reference indices onto one query sample; averaging keeps the
/// inverse smooth before spline fitting. The output is non-decreasing.
pub fn invert_path(path: &WarpingPath, target_length: usize) -> Vec<f64> {
    let mut sum = vec![0.0; target_length];
    let mut count = vec![0usize; target_length];
    for &(i, j) in &path.pairs {
        if i < target_length {
            sum[i] += j as f64;
            count[i] += 1;
        }
    }
    sum.iter()
        .zip(count.iter())
        .map(|(s, c)| if *c == 0 { 0.0 } else { s / *c as f64 })
        .collect()
}
