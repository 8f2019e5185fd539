//! Shared domain types and basic signal utilities.
//!
//! A [`Signal`] is a uniformly sampled real-valued time series. All
//! operations in this crate are pure functions of their inputs; a `Signal`
//! is immutable after construction and safe to share across threads.

use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Uniformly sampled real-valued time series.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<f64>,
    sample_period: f64,
    start_time: f64,
}

impl Signal {
    /// Build a signal from samples and a sampling period in seconds.
    ///
    /// Samples must be non-empty and finite; the period strictly positive.
    pub fn new(samples: Vec<f64>, sample_period: f64) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InsufficientSamples { required: 1, actual: 0 });
        }
        if !sample_period.is_finite() || sample_period <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sample_period must be positive, got {sample_period}"
            )));
        }
        if let Some(bad) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "non-finite sample at index {bad}"
            )));
        }
        Ok(Self { samples, sample_period, start_time: 0.0 })
    }

    pub fn with_start_time(mut self, start_time: f64) -> Self {
        self.start_time = start_time;
        self
    }

    /// Replace the samples, keeping period and start time.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        let mut s = Signal::new(samples, self.sample_period)?;
        s.start_time = self.start_time;
        Ok(s)
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_period(&self) -> f64 {
        self.sample_period
    }

    pub fn start_time(&self) -> f64 {
        self.start_time
    }

    /// Time stamp of sample `i`.
    pub fn time_at(&self, i: usize) -> f64 {
        self.start_time + i as f64 * self.sample_period
    }

    pub fn time_axis(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.time_at(i)).collect()
    }
}

/// Additive Gaussian noise description: `x + sigma_scale * xi` with
/// `xi ~ N(0, 1)` drawn from a ChaCha8 stream keyed by `seed`.
///
/// ChaCha8 is fixed across platforms, so noisy fixtures are reproducible
/// bit-for-bit for a given seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub sigma_scale: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(sigma_scale: f64, seed: u64) -> Result<Self> {
        if !sigma_scale.is_finite() || sigma_scale < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma_scale must be finite and nonnegative, got {sigma_scale}"
            )));
        }
        Ok(Self { sigma_scale, seed })
    }

    /// Zero noise, useful as a default.
    pub fn none() -> Self {
        Self { sigma_scale: 0.0, seed: 0 }
    }
}

/// Draw `len` unit-variance zero-mean Gaussian samples from the seeded stream.
pub fn gaussian_noise(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| StandardNormal.sample(&mut rng)).collect()
}

/// Add seeded Gaussian noise to a signal. Deterministic per seed.
pub fn add_noise(signal: &Signal, spec: &NoiseSpec) -> Signal {
    if spec.sigma_scale == 0.0 {
        return signal.clone();
    }
    let noise = gaussian_noise(signal.len(), spec.seed);
    let samples = signal
        .samples()
        .iter()
        .zip(noise.iter())
        .map(|(x, n)| x + spec.sigma_scale * n)
        .collect();
    signal.with_samples(samples).expect("noisy samples stay finite")
}

/// Indices of strict interior extrema, found by sign changes of the first
/// difference. A flat run bounded by opposite slopes counts once, at the
/// floor of the plateau midpoint. Returns `(maxima, minima)`.
pub fn local_extrema(signal: &Signal) -> Result<(Vec<usize>, Vec<usize>)> {
    let x = signal.samples();
    if x.len() < 3 {
        return Err(Error::InsufficientSamples { required: 3, actual: x.len() });
    }
    let mut maxima = Vec::new();
    let mut minima = Vec::new();

    // prev_sign: sign of the last nonzero difference; plateau_start: index
    // where the current flat run began.
    let mut prev_sign = 0i8;
    let mut plateau_start = 0usize;
    for i in 0..x.len() - 1 {
        let d = x[i + 1] - x[i];
        let sign = if d > 0.0 {
            1
        } else if d < 0.0 {
            -1
        } else {
            continue;
        };
        if prev_sign != 0 && sign != prev_sign {
            // Extremum spans [plateau_start, i]; report the midpoint.
            let idx = (plateau_start + i) / 2;
            if idx > 0 {
                if prev_sign > 0 {
                    maxima.push(idx);
                } else {
                    minima.push(idx);
                }
            }
        }
        prev_sign = sign;
        plateau_start = i + 1;
    }
    Ok((maxima, minima))
}

/// Centered moving average with an odd window. Boundary samples average over
/// the truncated in-range window, so the output length equals the input
/// length and no padding values are injected.
pub fn moving_average(signal: &Signal, window: usize) -> Result<Signal> {
    let x = signal.samples();
    if window % 2 == 0 || window == 0 {
        return Err(Error::InvalidParameter(format!(
            "window must be odd and positive, got {window}"
        )));
    }
    if window > x.len() {
        return Err(Error::InvalidParameter(format!(
            "window {window} exceeds signal length {}",
            x.len()
        )));
    }
    if window == 1 {
        return Ok(signal.clone());
    }
    let half = window / 2;
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    // Running sum over the clamped window keeps this O(n).
    let mut lo = 0usize;
    let mut hi = half.min(n - 1);
    let mut sum: f64 = x[lo..=hi].iter().sum();
    out.push(sum / (hi - lo + 1) as f64);
    for i in 1..n {
        let new_lo = i.saturating_sub(half);
        let new_hi = (i + half).min(n - 1);
        if new_lo > lo {
            sum -= x[lo];
        }
        if new_hi > hi {
            sum += x[new_hi];
        }
        lo = new_lo;
        hi = new_hi;
        out.push(sum / (hi - lo + 1) as f64);
    }
    signal.with_samples(out)
}

/// Signal-to-noise ratio in dB: `20 log10(||s|| / ||w||)`.
pub fn snr_db(signal: &Signal, noise: &Signal) -> Result<f64> {
    if signal.len() != noise.len() {
        return Err(Error::InvalidParameter(format!(
            "length mismatch: {} vs {}",
            signal.len(),
            noise.len()
        )));
    }
    let nn = l2_norm(noise.samples());
    if nn == 0.0 {
        return Err(Error::ZeroNorm("noise"));
    }
    Ok(20.0 * (l2_norm(signal.samples()) / nn).log10())
}

pub fn l2_norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Sum of squared samples.
pub fn energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `||a - b|| / ||b||`. Panics in debug builds on length mismatch.
pub fn relative_l2_error(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    diff.sqrt() / l2_norm(b)
}

/// Pearson correlation coefficient.
pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        let dx = x - ma;
        let dy = y - mb;
        cov += dx * dy;
        va += dx * dx;
        vb += dy * dy;
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}
