//! Reference instantaneous phase and frequency estimators: the
//! Hilbert-transform analytic signal, the normalized Hilbert transform,
//! and direct quadrature.

use crate::error::{Error, Result};
use crate::signal::{local_extrema, Signal};
use crate::spline::CubicSpline;
use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

/// Analytic signal `Z = x + j x_hat`. The real part is the input itself;
/// only the quadrature component comes out of the FFT.
#[derive(Debug, Clone)]
pub struct AnalyticSignal {
    real: Vec<f64>,
    imag: Vec<f64>,
}

impl AnalyticSignal {
    pub fn real_part(&self) -> &[f64] {
        &self.real
    }

    pub fn imag_part(&self) -> &[f64] {
        &self.imag
    }

    /// Four-quadrant instantaneous angle per sample, wrapped.
    pub fn angle(&self) -> Vec<f64> {
        self.real.iter().zip(&self.imag).map(|(r, i)| i.atan2(*r)).collect()
    }

    pub fn magnitude(&self) -> Vec<f64> {
        self.real.iter().zip(&self.imag).map(|(r, i)| r.hypot(*i)).collect()
    }
}

/// Unwrapped phase plus instantaneous frequency in Hz.
#[derive(Debug, Clone)]
pub struct BaselineEstimate {
    pub phase: Vec<f64>,
    pub frequency: Vec<f64>,
}

/// Envelope-normalization record: the envelopes divided out per pass and
/// the final frequency-modulated signal.
#[derive(Debug, Clone)]
pub struct NormalizationTrace {
    pub envelopes: Vec<Vec<f64>>,
    pub normalized: Vec<f64>,
    pub iterations: usize,
}

/// Discrete analytic signal via the one-sided spectrum: zero the
/// negative-frequency bins, double the positive bins, keep DC and Nyquist.
pub fn analytic_signal(signal: &Signal) -> Result<AnalyticSignal> {
    let x = signal.samples();
    let n = x.len();
    if n < 4 {
        return Err(Error::InsufficientSamples { required: 4, actual: n });
    }
    let mut spec: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(n).process(&mut spec);
    let half = n / 2;
    for (k, v) in spec.iter_mut().enumerate() {
        if k == 0 || (n % 2 == 0 && k == half) {
            // DC and Nyquist stay.
        } else if k < half || (n % 2 == 1 && k == half) {
            *v *= 2.0;
        } else {
            *v = Complex64::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut spec);
    let scale = 1.0 / n as f64;
    let imag: Vec<f64> = spec.iter().map(|c| c.im * scale).collect();
    Ok(AnalyticSignal { real: x.to_vec(), imag })
}

/// Unwrap a wrapped phase sequence in place: jumps above pi are folded by
/// whole turns.
pub fn unwrap_phase(wrapped: &[f64]) -> Vec<f64> {
    let tau = std::f64::consts::TAU;
    let mut out = Vec::with_capacity(wrapped.len());
    let mut offset = 0.0;
    for (k, &w) in wrapped.iter().enumerate() {
        if k > 0 {
            let jump = w - wrapped[k - 1];
            if jump > std::f64::consts::PI {
                offset -= tau;
            } else if jump < -std::f64::consts::PI {
                offset += tau;
            }
        }
        out.push(w + offset);
    }
    out
}

fn central_difference_if(phase: &[f64], sample_period: f64) -> Vec<f64> {
    let n = phase.len();
    let scale = 1.0 / (std::f64::consts::TAU * sample_period);
    let mut freq = Vec::with_capacity(n);
    for k in 0..n {
        let d = if k == 0 {
            phase[1] - phase[0]
        } else if k == n - 1 {
            phase[n - 1] - phase[n - 2]
        } else {
            (phase[k + 1] - phase[k - 1]) / 2.0
        };
        freq.push(d * scale);
    }
    freq
}

/// Hilbert-transform phase and IF: the unwrapped angle of the analytic
/// signal, differentiated by central differences.
pub fn ht_phase_if(signal: &Signal) -> Result<BaselineEstimate> {
    let z = analytic_signal(signal)?;
    let phase = unwrap_phase(&z.angle());
    let frequency = central_difference_if(&phase, signal.sample_period());
    Ok(BaselineEstimate { phase, frequency })
}

/// Three-point refinement of a sampled peak. Sampling rarely lands on the
/// true crest, and the alternation between on-sample and between-sample
/// peaks otherwise puts a ripple into the envelope that the normalization
/// loop cannot divide away.
///
/// A local cosine model `A cos(w (n - n0))` is fit first (exact for tones);
/// where its identities break down, a parabola is used instead.
fn refine_peak(values: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= values.len() {
        return (i as f64, values[i]);
    }
    let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
    if b > 0.0 {
        let cos_w = (a + c) / (2.0 * b);
        if cos_w.abs() < 1.0 {
            let w = cos_w.acos();
            let sin_w = w.sin();
            if w > 1e-6 && sin_w > 1e-12 {
                let delta = ((c - a) / (2.0 * b * sin_w)).atan() / w;
                if delta.abs() <= 0.5 {
                    let amp = b / (w * delta).cos();
                    return (i as f64 + delta, amp);
                }
            }
        }
    }
    let denom = a - 2.0 * b + c;
    if denom == 0.0 {
        return (i as f64, b);
    }
    let p = ((a - c) / (2.0 * denom)).clamp(-0.5, 0.5);
    (i as f64 + p, b - 0.25 * (a - c) * p)
}

/// Iterative envelope normalization separating amplitude from frequency
/// modulation: fit a cubic spline through the (parabolically refined)
/// maxima of `|x|`, divide, and repeat until `max |y| <= 1` or the
/// iteration cap.
///
/// The envelope is held at the nearest knot value beyond the first and last
/// maxima.
pub fn normalize_am(signal: &Signal, max_iterations: usize) -> Result<NormalizationTrace> {
    let n = signal.len();
    let mut y: Vec<f64> = signal.samples().to_vec();
    let mut envelopes = Vec::new();
    let mut iterations = 0;

    for _ in 0..max_iterations.max(1) {
        let abs = Signal::new(y.iter().map(|v| v.abs()).collect(), signal.sample_period())?;
        let (maxima, _) = local_extrema(&abs)?;
        if maxima.len() < 2 {
            return Err(Error::InsufficientSamples { required: 2, actual: maxima.len() });
        }
        let mut knot_x = Vec::with_capacity(maxima.len());
        let mut knot_y = Vec::with_capacity(maxima.len());
        for &i in &maxima {
            let (xr, yr) = refine_peak(abs.samples(), i);
            knot_x.push(xr);
            knot_y.push(yr);
        }
        let spline = CubicSpline::fit(&knot_x, &knot_y)?;
        let (lo, hi) = spline.domain();
        let mut envelope = Vec::with_capacity(n);
        for i in 0..n {
            let xq = (i as f64).clamp(lo, hi);
            envelope.push(spline.evaluate(xq).expect("query clamped to domain"));
        }
        if envelope.iter().any(|&e| e <= 0.0) {
            return Err(Error::DegenerateEnvelope);
        }
        for (v, e) in y.iter_mut().zip(&envelope) {
            *v /= e;
        }
        envelopes.push(envelope);
        iterations += 1;
        let max_abs = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if max_abs <= 1.0 {
            break;
        }
    }
    // The refined-peak estimate carries a small interpolation bias, so the
    // loop can stall a fraction above unity. A uniform rescale is itself an
    // envelope pass and lands the magnitude exactly at one.
    let max_abs = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max_abs > 1.0 {
        for v in &mut y {
            *v /= max_abs;
        }
        if let Some(last) = envelopes.last_mut() {
            for e in last.iter_mut() {
                *e *= max_abs;
            }
        }
    }
    Ok(NormalizationTrace { envelopes, normalized: y, iterations })
}

/// Normalized-HT estimate: envelope-normalize, then apply [`ht_phase_if`]
/// to the frequency-modulated part.
pub fn nht_phase_if(signal: &Signal) -> Result<BaselineEstimate> {
    let trace = normalize_am(signal, 10)?;
    let fm = signal.with_samples(trace.normalized)?;
    ht_phase_if(&fm)
}

/// Direct-quadrature estimate: phase from `arctan(y / sqrt(1 - y^2))` on
/// the normalized signal, with the branch chosen by the sign of the
/// discrete derivative of `y`, so no Hilbert integral is involved.
///
/// Overshoot up to 1e-6 beyond unit magnitude is clamped; more is an error.
/// At `|y| = 1` the quadrature vanishes and the phase takes the limiting
/// value (0 or pi).
pub fn dq_phase_if(signal: &Signal) -> Result<BaselineEstimate> {
    let trace = normalize_am(signal, 10)?;
    let y = trace.normalized;
    let n = y.len();
    let max_abs = y.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if max_abs > 1.0 + 1e-6 {
        return Err(Error::NormalizationFailed { max_abs });
    }

    // Quadrature sign from the discrete derivative: for advancing phase,
    // sin(phase) = -y' / phase', so the quadrature carries the opposite
    // sign of dy.
    let mut wrapped = Vec::with_capacity(n);
    let mut prev_sign = 1.0;
    for k in 0..n {
        let dy = if k == 0 {
            y[1] - y[0]
        } else if k == n - 1 {
            y[n - 1] - y[n - 2]
        } else {
            (y[k + 1] - y[k - 1]) / 2.0
        };
        let sign = if dy > 0.0 {
            -1.0
        } else if dy < 0.0 {
            1.0
        } else {
            prev_sign
        };
        prev_sign = sign;
        let c = y[k].clamp(-1.0, 1.0);
        let q = (1.0 - c * c).max(0.0).sqrt() * sign;
        wrapped.push(q.atan2(c));
    }
    let phase = unwrap_phase(&wrapped);
    let frequency = central_difference_if(&phase, signal.sample_period());
    Ok(BaselineEstimate { phase, frequency })
}
