//! Artificial signal generators with analytic ground truth, plus a
//! Duffing-equation integrator for the intrawave-modulation fixture.
//!
//! Ground-truth phases use the cosine convention throughout: the noiseless
//! component equals `amplitude(n) * cos(phase(n))`. Sine-based definitions
//! are shifted by `-pi/2` when stored so that estimators and truths share
//! one convention.

use crate::error::{Error, Result};
use crate::signal::{add_noise, NoiseSpec, Signal};

/// Per-sample ground truth for an analytic fixture.
///
/// `frequency` is the analytic derivative `phase' / (2 pi T_s)` in cycles
/// per time unit; `amplitude` is the signed envelope.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub phase: Vec<f64>,
    pub frequency: Vec<f64>,
    pub amplitude: Vec<f64>,
}

/// Quadratic chirp `cos(alpha n^2 + beta n) + gamma xi_n` with unit
/// sampling. Truth phase is `alpha n^2 + beta n`; truth frequency
/// `(2 alpha n + beta) / 2 pi` cycles per sample.
pub fn quadratic_chirp(
    n_samples: usize,
    alpha: f64,
    beta: f64,
    noise: &NoiseSpec,
) -> Result<(Signal, GroundTruth)> {
    if n_samples < 16 {
        return Err(Error::InsufficientSamples { required: 16, actual: n_samples });
    }
    let tau = std::f64::consts::TAU;
    let mut phase = Vec::with_capacity(n_samples);
    let mut frequency = Vec::with_capacity(n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let n = k as f64;
        let p = alpha * n * n + beta * n;
        phase.push(p);
        frequency.push((2.0 * alpha * n + beta) / tau);
        samples.push(p.cos());
    }
    let clean = Signal::new(samples, 1.0)?;
    let noisy = add_noise(&clean, noise);
    Ok((noisy, GroundTruth { phase, frequency, amplitude: vec![1.0; n_samples] }))
}

/// Amplitude- and frequency-modulated signal
/// `A1 cos(w1 n) * cos(n + A2 cos(w2 n)) + gamma xi_n` with unit sampling.
pub fn am_fm_signal(
    n_samples: usize,
    a1: f64,
    w1: f64,
    a2: f64,
    w2: f64,
    noise: &NoiseSpec,
) -> Result<(Signal, GroundTruth)> {
    if n_samples < 16 {
        return Err(Error::InsufficientSamples { required: 16, actual: n_samples });
    }
    let tau = std::f64::consts::TAU;
    let mut phase = Vec::with_capacity(n_samples);
    let mut frequency = Vec::with_capacity(n_samples);
    let mut amplitude = Vec::with_capacity(n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let n = k as f64;
        let a = a1 * (w1 * n).cos();
        let p = n + a2 * (w2 * n).cos();
        phase.push(p);
        frequency.push((1.0 - a2 * w2 * (w2 * n).sin()) / tau);
        amplitude.push(a);
        samples.push(a * p.cos());
    }
    let clean = Signal::new(samples, 1.0)?;
    let noisy = add_noise(&clean, noise);
    Ok((noisy, GroundTruth { phase, frequency, amplitude }))
}

/// Two-component signal on `t in [0, 1]`:
/// `0.2 sin(phi1) + 2 sin(phi2)` with `phi1 = 2 pi (40 t^3 - 60 t^2 + 47 t)`
/// and `phi2 = 2 pi (0.1 t^2 + t)`.
///
/// Returns the mixed signal plus per-component truths, fast component
/// first. Stored phases carry the sine-to-cosine shift, and frequencies
/// are in cycles per unit `t`.
pub fn two_component(n_samples: usize) -> Result<(Signal, [GroundTruth; 2])> {
    if n_samples < 16 {
        return Err(Error::InsufficientSamples { required: 16, actual: n_samples });
    }
    let dt = 1.0 / (n_samples - 1) as f64;
    let tau = std::f64::consts::TAU;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut samples = Vec::with_capacity(n_samples);
    let mut p1 = Vec::with_capacity(n_samples);
    let mut f1 = Vec::with_capacity(n_samples);
    let mut p2 = Vec::with_capacity(n_samples);
    let mut f2 = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let t = k as f64 * dt;
        let phi1 = tau * (40.0 * t.powi(3) - 60.0 * t * t + 47.0 * t);
        let phi2 = tau * (0.1 * t * t + t);
        samples.push(0.2 * phi1.sin() + 2.0 * phi2.sin());
        p1.push(phi1 - half_pi);
        f1.push(120.0 * t * t - 120.0 * t + 47.0);
        p2.push(phi2 - half_pi);
        f2.push(0.2 * t + 1.0);
    }
    let signal = Signal::new(samples, dt)?;
    let fast = GroundTruth { phase: p1, frequency: f1, amplitude: vec![0.2; n_samples] };
    let slow = GroundTruth { phase: p2, frequency: f2, amplitude: vec![2.0; n_samples] };
    Ok((signal, [fast, slow]))
}

/// Pure tone `cos(2 pi f0 t)` sampled at `sample_rate_hz`.
pub fn pure_tone(
    n_samples: usize,
    f0_hz: f64,
    sample_rate_hz: f64,
) -> Result<(Signal, GroundTruth)> {
    if n_samples < 16 {
        return Err(Error::InsufficientSamples { required: 16, actual: n_samples });
    }
    let ts = 1.0 / sample_rate_hz;
    let mut phase = Vec::with_capacity(n_samples);
    let mut samples = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let p = std::f64::consts::TAU * f0_hz * k as f64 * ts;
        phase.push(p);
        samples.push(p.cos());
    }
    let signal = Signal::new(samples, ts)?;
    Ok((signal, GroundTruth {
        phase,
        frequency: vec![f0_hz; n_samples],
        amplitude: vec![1.0; n_samples],
    }))
}

/// Parameters of the forced undamped Duffing equation
/// `x'' + alpha x + beta x^3 = gamma cos(omega t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DuffingParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub omega: f64,
    pub x0: f64,
    pub v0: f64,
    pub t_end: f64,
    pub dt: f64,
}

impl DuffingParams {
    /// Fixture values: a nonlinear spring driven at unit frequency,
    /// started at the right-well equilibrium.
    pub fn fixture() -> Self {
        Self {
            alpha: -1.0,
            beta: 1.0,
            gamma: 0.1,
            omega: 1.0,
            x0: 1.0,
            v0: 0.0,
            t_end: 400.0,
            dt: 0.01,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !(self.t_end > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dt and t_end must be positive, got dt={} t_end={}",
                self.dt, self.t_end
            )));
        }
        Ok(())
    }
}

/// Classical fourth-order Runge-Kutta integration of the Duffing system
/// `x' = v, v' = gamma cos(omega t) - alpha x - beta x^3` at fixed step.
/// No convergence check; see [`duffing_solve`].
pub fn integrate_fixed(params: &DuffingParams) -> Result<(Signal, Signal)> {
    params.validate()?;
    let steps = (params.t_end / params.dt).round() as usize;
    let accel = |t: f64, x: f64| -> f64 {
        params.gamma * (params.omega * t).cos() - params.alpha * x - params.beta * x.powi(3)
    };
    let mut x = params.x0;
    let mut v = params.v0;
    let mut xs = Vec::with_capacity(steps + 1);
    let mut vs = Vec::with_capacity(steps + 1);
    xs.push(x);
    vs.push(v);
    let h = params.dt;
    for i in 0..steps {
        let t = i as f64 * h;
        let k1x = v;
        let k1v = accel(t, x);
        let k2x = v + 0.5 * h * k1v;
        let k2v = accel(t + 0.5 * h, x + 0.5 * h * k1x);
        let k3x = v + 0.5 * h * k2v;
        let k3v = accel(t + 0.5 * h, x + 0.5 * h * k2x);
        let k4x = v + h * k3v;
        let k4v = accel(t + h, x + h * k3x);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        xs.push(x);
        vs.push(v);
    }
    Ok((Signal::new(xs, h)?, Signal::new(vs, h)?))
}

/// Integrate the Duffing system, verifying the step size by halving: the
/// endpoint must move by less than 1e-4 in relative norm, otherwise the
/// step is declared too coarse.
pub fn duffing_solve(params: &DuffingParams) -> Result<(Signal, Signal)> {
    let (x, v) = integrate_fixed(params)?;
    let halved = DuffingParams { dt: params.dt / 2.0, ..params.clone() };
    let (xh, vh) = integrate_fixed(&halved)?;
    let xe = *x.samples().last().unwrap();
    let ve = *v.samples().last().unwrap();
    let xeh = *xh.samples().last().unwrap();
    let veh = *vh.samples().last().unwrap();
    let scale = (xe * xe + ve * ve).sqrt().max(1e-12);
    let change = ((xe - xeh).powi(2) + (ve - veh).powi(2)).sqrt() / scale;
    if change >= 1e-4 {
        return Err(Error::DtTooCoarse { relative_change: change });
    }
    Ok((x, v))
}

/// Total energy of the unforced system, monitored by conservation tests.
pub fn duffing_energy(params: &DuffingParams, x: f64, v: f64) -> f64 {
    0.5 * v * v + 0.5 * params.alpha * x * x + 0.25 * params.beta * x.powi(4)
}
