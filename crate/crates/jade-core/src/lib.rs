//! Decomposition of non-stationary multicomponent signals into
//! mono-component modes and estimation of their instantaneous phase,
//! frequency, and amplitude.
//!
//! The crate provides:
//!
//! - [`fif`]: fast iterative filtering into intrinsic mode functions;
//! - [`dtw`]: dynamic time warping with path backtracking and inversion;
//! - [`jade`]: template-alignment phase/frequency estimation built on DTW;
//! - [`baselines`]: Hilbert-transform, normalized-HT, and direct-quadrature
//!   reference estimators;
//! - [`spline`]: natural cubic splines used for phase smoothing and
//!   envelope fitting;
//! - [`synth`]: artificial fixtures with analytic ground truth, including a
//!   Duffing-equation integrator;
//! - [`bench`]: noise-robustness sweeps, method comparisons, and the
//!   decompose-estimate-reconstruct pipeline.

pub mod baselines;
pub mod bench;
pub mod dtw;
pub mod error;
pub mod fif;
pub mod jade;
pub mod signal;
pub mod spline;
pub mod synth;

pub use error::{Error, Result};
pub use signal::{NoiseSpec, Signal};
