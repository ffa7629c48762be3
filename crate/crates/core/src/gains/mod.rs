//! Subband gain estimation.
//!
//! The built-in estimator is the MMSE log-spectral amplitude (LSA) suppressor
//! with decision-directed a priori SNR and a gated recursive noise tracker.
//! Gains can also come from an FBEG file (see [`stream`]).

mod expint;
pub mod stream;

pub use expint::exp_integral_e1;

use rustfft::num_complex::Complex64;

use crate::{Error, Result};

/// Per-frame subband response, `M/2 + 1` bins.
#[derive(Debug, Clone, PartialEq)]
pub struct GainFrame {
    /// 1-based frame index `k`.
    pub frame: usize,
    pub values: Vec<Complex64>,
}

impl GainFrame {
    /// Scales every bin whose magnitude exceeds `g_max` back onto the circle of
    /// radius `g_max`, keeping its phase.
    pub fn clamp_magnitude(&mut self, g_max: f64) {
        for v in &mut self.values {
            let mag = v.norm();
            if mag > g_max {
                *v *= g_max / mag;
            }
        }
    }
}

/// Tuning of the MMSE-LSA estimator and its noise tracker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorParams {
    /// Decision-directed smoothing of the a priori SNR.
    pub alpha_dd: f64,
    pub xi_min_db: f64,
    pub gain_floor_db: f64,
    /// Recursive smoothing of the noise PSD.
    pub alpha_noise: f64,
    /// Linear a posteriori SNR below which a bin updates its noise estimate.
    pub gamma_threshold: f64,
    /// Leading frames assumed to be noise only.
    pub init_frames: usize,
    pub lambda_floor: f64,
}

impl Default for EstimatorParams {
    fn default() -> Self {
        EstimatorParams {
            alpha_dd: 0.98,
            xi_min_db: -15.0,
            gain_floor_db: -25.0,
            alpha_noise: 0.8,
            gamma_threshold: 2.5,
            init_frames: 6,
            lambda_floor: 1e-20,
        }
    }
}

impl EstimatorParams {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        if !open_unit(self.alpha_dd) {
            return Err(Error::config(format!("alpha_dd={} must lie in (0, 1)", self.alpha_dd)));
        }
        if !open_unit(self.alpha_noise) {
            return Err(Error::config(format!("alpha_noise={} must lie in (0, 1)", self.alpha_noise)));
        }
        if !(self.gain_floor_db < 0.0) {
            return Err(Error::config(format!("gain_floor_db={} must be negative", self.gain_floor_db)));
        }
        if !self.xi_min_db.is_finite() {
            return Err(Error::config("xi_min_db must be finite"));
        }
        if !(self.gamma_threshold > 0.0) {
            return Err(Error::config("gamma_threshold must be positive"));
        }
        if !(self.lambda_floor > 0.0) {
            return Err(Error::config("lambda_floor must be positive"));
        }
        Ok(())
    }

    pub fn xi_min(&self) -> f64 {
        10f64.powf(self.xi_min_db / 10.0)
    }

    pub fn gain_floor(&self) -> f64 {
        10f64.powf(self.gain_floor_db / 20.0)
    }
}

/// Noise PSD estimate and decision-directed memory for one stream.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseTrackerState {
    /// Noise power per bin.
    pub lambda: Vec<f64>,
    /// Previous frame's `G² γ` per bin, floored at `xi_min`.
    pub xi_prev: Vec<f64>,
    pub frame_count: usize,
}

impl NoiseTrackerState {
    pub fn new(bins: usize, params: &EstimatorParams) -> Self {
        NoiseTrackerState {
            lambda: vec![params.lambda_floor; bins],
            xi_prev: vec![params.xi_min(); bins],
            frame_count: 0,
        }
    }
}

fn check_bins(state: &NoiseTrackerState, frame: &[Complex64]) -> Result<()> {
    if frame.len() != state.lambda.len() {
        return Err(Error::Dimension {
            context: "noise tracker frame",
            expected: state.lambda.len(),
            got: frame.len(),
        });
    }
    Ok(())
}

/// Correction for the downward bias of gated averaging.
///
/// Under the noise-only hypothesis the normalized bin power `p / λ` is
/// exponential for complex bins and chi-square with one degree of freedom
/// (mean 1) for the real DC and Nyquist bins. Averaging only the samples below
/// `threshold` converges to the truncated mean, so accepted samples are scaled
/// by its inverse.
pub fn gate_bias_compensation(threshold: f64, real_bin: bool) -> f64 {
    let t = threshold;
    if real_bin {
        // P(χ²₁ < t) / P(χ²₃ < t)
        let p1 = libm::erf((t / 2.0).sqrt());
        let p3 = p1 - (2.0 * t / std::f64::consts::PI).sqrt() * (-t / 2.0).exp();
        p1 / p3
    } else {
        let e = (-t).exp();
        (1.0 - e) / (1.0 - (1.0 + t) * e)
    }
}

/// Updates the noise PSD with one half-spectrum analysis frame.
///
/// The first `init_frames` frames are averaged unconditionally. Afterwards a
/// bin is smoothed only while its a posteriori SNR stays below
/// `gamma_threshold`, with the accepted power scaled by
/// [`gate_bias_compensation`]; otherwise it is left unchanged.
pub fn update_noise_psd(state: &mut NoiseTrackerState, frame: &[Complex64], params: &EstimatorParams) -> Result<()> {
    check_bins(state, frame)?;
    let n = state.frame_count;
    let last = frame.len() - 1;
    let beta_complex = gate_bias_compensation(params.gamma_threshold, false);
    let beta_real = gate_bias_compensation(params.gamma_threshold, true);
    for (i, (lambda, x)) in state.lambda.iter_mut().zip(frame).enumerate() {
        let power = x.norm_sqr();
        if n < params.init_frames {
            let prev = if n == 0 { 0.0 } else { *lambda };
            *lambda = (prev * n as f64 + power) / (n + 1) as f64;
        } else if power / *lambda < params.gamma_threshold {
            let beta = if i == 0 || i == last { beta_real } else { beta_complex };
            *lambda = params.alpha_noise * *lambda + (1.0 - params.alpha_noise) * beta * power;
        }
        *lambda = lambda.max(params.lambda_floor);
    }
    state.frame_count += 1;
    Ok(())
}

/// LSA gain `ξ/(1+ξ) · exp(E1(ν)/2)` with `ν = γ ξ/(1+ξ)`, unclamped.
///
/// A posteriori SNRs below 1 enter `ν` as 1. The unmodified gain grows
/// without bound as `γ → 0`, which would open the equalizer fully in bins whose
/// power has dropped below the noise estimate.
pub fn lsa_gain(xi: f64, gamma: f64) -> f64 {
    let nu = gamma.max(1.0) * xi / (1.0 + xi);
    let e1 = exp_integral_e1(nu).unwrap_or(f64::INFINITY);
    xi / (1.0 + xi) * (0.5 * e1).exp()
}

/// MMSE-LSA gains for one frame given the current noise estimate.
///
/// Updates the decision-directed memory in `state`. Gains are real and
/// clamped to `[gain_floor, 1]`.
pub fn mmse_lsa_gain(frame: &[Complex64], state: &mut NoiseTrackerState, params: &EstimatorParams) -> Result<GainFrame> {
    check_bins(state, frame)?;
    let xi_min = params.xi_min();
    let floor = params.gain_floor();
    let values = frame
        .iter()
        .zip(&state.lambda)
        .zip(state.xi_prev.iter_mut())
        .map(|((x, &lambda), xi_prev)| {
            let gamma = x.norm_sqr() / lambda;
            let xi = (params.alpha_dd * *xi_prev + (1.0 - params.alpha_dd) * (gamma - 1.0).max(0.0)).max(xi_min);
            let gain = lsa_gain(xi, gamma);
            let gain = if gain.is_nan() { floor } else { gain.clamp(floor, 1.0) };
            *xi_prev = (gain * gain * gamma).max(xi_min);
            Complex64::new(gain, 0.0)
        })
        .collect();
    Ok(GainFrame {
        frame: state.frame_count,
        values,
    })
}

/// MMSE-LSA estimator driving its own noise tracker, one frame at a time.
#[derive(Debug, Clone)]
pub struct MmseLsa {
    params: EstimatorParams,
    state: NoiseTrackerState,
    warmup: usize,
    seen: usize,
}

impl MmseLsa {
    pub fn new(bins: usize, params: EstimatorParams) -> Result<Self> {
        params.validate()?;
        Ok(MmseLsa {
            state: NoiseTrackerState::new(bins, &params),
            params,
            warmup: 0,
            seen: 0,
        })
    }

    /// Frames whose analysis window is still partly before the start of the
    /// signal. Their power is not representative, so noise initialization
    /// restarts once they have passed.
    pub fn with_warmup(mut self, frames: usize) -> Self {
        self.warmup = frames;
        self
    }

    pub fn state(&self) -> &NoiseTrackerState {
        &self.state
    }

    pub fn process(&mut self, frame: &[Complex64]) -> Result<GainFrame> {
        if self.seen < self.warmup {
            self.state.frame_count = 0;
        }
        self.seen += 1;
        update_noise_psd(&mut self.state, frame, &self.params)?;
        mmse_lsa_gain(frame, &mut self.state, &self.params)
    }
}
