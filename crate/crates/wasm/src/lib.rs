//! Browser bindings for the `fbe` equalizer demo page.

use std::f64::consts::{PI, TAU};

use fbe::equalizer::{process_stream, shorten_filter, subband_to_time, EngineConfig, GainSource};
use fbe::filterbank::{design_prototype, expand_hermitian, magnitude_response, FilterbankSpec};
use fbe::gains::EstimatorParams;
use fbe::metrics::{label_noise_only, seg_na, seg_snr};
use fbe::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wasm_bindgen::prelude::*;

const RATE: u32 = 16_000;

fn spec(frame_size: usize, proto_len: usize, hop: usize) -> Result<FilterbankSpec, JsError> {
    Ok(FilterbankSpec::new(frame_size, proto_len, hop, RATE)?)
}

/// Prototype magnitude response in dB, `nfft / 2 + 1` points from DC to Nyquist.
#[wasm_bindgen]
pub fn prototype_response(frame_size: usize, proto_len: usize, hop: usize, nfft: usize) -> Result<Vec<f64>, JsError> {
    let proto = design_prototype(&spec(frame_size, proto_len, hop)?)?;
    Ok(magnitude_response(&proto, nfft, RATE).into_iter().map(|(_, db)| db).collect())
}

/// A short equalizer filter and its magnitude response.
#[wasm_bindgen]
pub struct EqualizerDesign {
    taps: Vec<f64>,
    target_db: Vec<f64>,
    response_db: Vec<f64>,
    group_delay_ms: f64,
}

#[wasm_bindgen]
impl EqualizerDesign {
    #[wasm_bindgen(getter)]
    pub fn taps(&self) -> Vec<f64> {
        self.taps.clone()
    }

    /// Requested gain per subband, `M/2 + 1` values.
    #[wasm_bindgen(getter)]
    pub fn target_db(&self) -> Vec<f64> {
        self.target_db.clone()
    }

    /// Achieved response of the short filter on the same frequency grid.
    #[wasm_bindgen(getter)]
    pub fn response_db(&self) -> Vec<f64> {
        self.response_db.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn group_delay_ms(&self) -> f64 {
        self.group_delay_ms
    }
}

/// Builds the `shorten_len`-tap filter for a gain curve given by control points
/// spread evenly from DC to Nyquist (linear interpolation in dB between them).
#[wasm_bindgen]
pub fn design_equalizer(band_gains_db: &[f64], shorten_len: usize) -> Result<EqualizerDesign, JsError> {
    if band_gains_db.len() < 2 {
        return Err(JsError::new("need at least two control points"));
    }
    let spec = FilterbankSpec::default();
    let proto = design_prototype(&spec)?;
    let bins = spec.bins();
    let segments = (band_gains_db.len() - 1) as f64;
    let target_db: Vec<f64> = (0..bins)
        .map(|i| {
            let pos = i as f64 / (bins - 1) as f64 * segments;
            let j = (pos.floor() as usize).min(band_gains_db.len() - 2);
            let frac = pos - j as f64;
            band_gains_db[j] * (1.0 - frac) + band_gains_db[j + 1] * frac
        })
        .collect();
    let half: Vec<Complex64> = target_db.iter().map(|db| Complex64::new(10f64.powf(db / 20.0), 0.0)).collect();
    let full = expand_hermitian(&half)?;
    let short = shorten_filter(&subband_to_time(&full, &proto)?, shorten_len)?;

    let response_db = (0..bins)
        .map(|i| {
            let w = PI * i as f64 / (bins - 1) as f64;
            let h: Complex64 = short
                .taps
                .iter()
                .enumerate()
                .map(|(n, &t)| t * Complex64::from_polar(1.0, -w * n as f64))
                .sum();
            20.0 * h.norm().max(1e-12).log10()
        })
        .collect();
    Ok(EqualizerDesign {
        group_delay_ms: short.group_delay as f64 * 1000.0 / RATE as f64,
        taps: short.taps,
        target_db,
        response_db,
    })
}

/// Noisy and enhanced versions of a synthetic utterance, plus scores.
#[wasm_bindgen]
pub struct EnhanceResult {
    noisy: Vec<f32>,
    enhanced: Vec<f32>,
    seg_snr_in_db: f64,
    seg_snr_out_db: f64,
    seg_na_db: f64,
    group_delay_ms: f64,
}

#[wasm_bindgen]
impl EnhanceResult {
    #[wasm_bindgen(getter)]
    pub fn noisy(&self) -> Vec<f32> {
        self.noisy.clone()
    }

    /// Enhanced output, shifted back by the filter delay to line up with `noisy`.
    #[wasm_bindgen(getter)]
    pub fn enhanced(&self) -> Vec<f32> {
        self.enhanced.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn seg_snr_in_db(&self) -> f64 {
        self.seg_snr_in_db
    }

    #[wasm_bindgen(getter)]
    pub fn seg_snr_out_db(&self) -> f64 {
        self.seg_snr_out_db
    }

    /// Segmental noise attenuation in speech pauses; NaN if there were none.
    #[wasm_bindgen(getter)]
    pub fn seg_na_db(&self) -> f64 {
        self.seg_na_db
    }

    #[wasm_bindgen(getter)]
    pub fn group_delay_ms(&self) -> f64 {
        self.group_delay_ms
    }

    #[wasm_bindgen(getter)]
    pub fn sample_rate(&self) -> u32 {
        RATE
    }
}

/// Harmonic vowel-like bursts with silent gaps, sampled at 16 kHz.
fn synthetic_speech(seconds: f64) -> Vec<f64> {
    let (voiced, period) = (0.8, 1.3);
    let mut phase = 0.0f64;
    (0..(seconds * RATE as f64) as usize)
        .map(|t| {
            let ts = t as f64 / RATE as f64;
            let pos = ts % period;
            if pos >= voiced {
                return 0.0;
            }
            let f0 = 140.0 + 40.0 * (TAU * 0.7 * ts).sin();
            phase += TAU * f0 / RATE as f64;
            let s: f64 = (1..=25)
                .map(|h| h as f64)
                .take_while(|h| h * f0 <= 4000.0)
                .map(|h| {
                    let f = h * f0;
                    let formants = (-((f - 500.0) / 300.0).powi(2)).exp()
                        + 0.6 * (-((f - 1500.0) / 400.0).powi(2)).exp()
                        + 0.3 * (-((f - 2500.0) / 500.0).powi(2)).exp();
                    (0.05 + formants) / h * (h * phase).sin()
                })
                .sum();
            0.3 * (PI * pos / voiced).sin().powi(2) * s
        })
        .collect()
}

/// Adds white noise at `snr_db` to a synthetic utterance and enhances it with
/// the MMSE-LSA estimator.
#[wasm_bindgen]
pub fn enhance_synthetic(snr_db: f64, seconds: f64, shorten_len: usize, seed: u64) -> Result<EnhanceResult, JsError> {
    if !(0.5..=30.0).contains(&seconds) {
        return Err(JsError::new("duration must be between 0.5 and 30 seconds"));
    }
    let clean = synthetic_speech(seconds);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut noise: Vec<f64> = (0..clean.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let power = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
    let gain = (power(&clean) / power(&noise) / 10f64.powf(snr_db / 10.0)).sqrt();
    noise.iter_mut().for_each(|v| *v *= gain);
    let noisy: Vec<f64> = clean.iter().zip(&noise).map(|(s, n)| s + n).collect();

    let cfg = EngineConfig { shorten_len, ..EngineConfig::default() };
    let (out, latency) = process_stream(&noisy, GainSource::MmseLsa(EstimatorParams::default()), &cfg)?;
    let d = latency.filter_group_delay_samples;
    let r = cfg.filterbank.hop;
    let labels = label_noise_only(&clean, r, -40.0)?;
    let nan = f64::NAN;
    Ok(EnhanceResult {
        seg_snr_in_db: seg_snr(&clean, &noisy, r, 0)?.value.value().unwrap_or(nan),
        seg_snr_out_db: seg_snr(&clean, &out, r, d)?.value.value().unwrap_or(nan),
        seg_na_db: seg_na(&noise, &out, &labels, d)?.value.value().unwrap_or(nan),
        group_delay_ms: latency.group_delay_ms(),
        noisy: noisy.iter().map(|&v| v as f32).collect(),
        enhanced: out[d..].iter().map(|&v| v as f32).chain(std::iter::repeat_n(0.0, d)).collect(),
    })
}
