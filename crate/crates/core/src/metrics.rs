//! Objective measures: segmental noise attenuation, segmental SNR and the
//! RI+Mag spectral distance.
//!
//! All framing uses non-overlapping frames of `r` samples. Processed signals
//! are first advanced by the engine's group delay (`delay`), so that frame `m`
//! of the processed signal lines up with frame `m` of the reference.

use std::fmt;

use crate::filterbank::AnalysisFrames;
use crate::{Error, Result};

/// Ratio used for a noise-only frame whose processed energy is zero (+100 dB).
pub const SEG_NA_FRAME_CLAMP: f64 = 1e10;

/// A metric value or an explicit "not applicable" marker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Value(f64),
    NotApplicable,
}

impl Metric {
    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Value(v) => Some(v),
            Metric::NotApplicable => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Value(v) => write!(f, "{v:.4}"),
            Metric::NotApplicable => f.write_str("NA"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameLabeling {
    /// Indices of noise-only frames, ascending.
    pub noise_only: Vec<usize>,
    pub total_frames: usize,
    pub frame_len: usize,
}

impl FrameLabeling {
    pub fn noise_only_count(&self) -> usize {
        self.noise_only.len()
    }
}

fn frame_energies(x: &[f64], r: usize) -> impl Iterator<Item = f64> + '_ {
    x.chunks_exact(r).map(|f| f.iter().map(|v| v * v).sum())
}

/// Marks frame `m` noise-only when its clean energy lies more than
/// `threshold_db` below the loudest frame, or is exactly zero.
pub fn label_noise_only(clean: &[f64], r: usize, threshold_db: f64) -> Result<FrameLabeling> {
    if r == 0 || r > clean.len() {
        return Err(Error::config(format!("frame length {r} does not fit a {}-sample signal", clean.len())));
    }
    let energies: Vec<f64> = frame_energies(clean, r).collect();
    let peak = energies.iter().copied().fold(0.0, f64::max);
    let limit_db = 10.0 * peak.log10() + threshold_db;
    let noise_only = energies
        .iter()
        .enumerate()
        .filter(|(_, &e)| e == 0.0 || 10.0 * e.log10() < limit_db)
        .map(|(m, _)| m)
        .collect();
    Ok(FrameLabeling {
        noise_only,
        total_frames: energies.len(),
        frame_len: r,
    })
}

/// Advances `processed` by `delay` samples and trims both signals to their
/// common length.
pub fn align<'a>(reference: &'a [f64], processed: &'a [f64], delay: usize) -> Result<(&'a [f64], &'a [f64])> {
    if processed.len() < delay {
        return Err(Error::Dimension {
            context: "delay compensation",
            expected: delay,
            got: processed.len(),
        });
    }
    let processed = &processed[delay..];
    let n = reference.len().min(processed.len());
    Ok((&reference[..n], &processed[..n]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegNa {
    pub value: Metric,
    pub frames_used: usize,
    /// Frames whose processed energy was zero and were clamped at +100 dB.
    pub clamped_frames: usize,
}

/// Segmental noise attenuation over the noise-only frames of `labeling`:
/// `10 log10( mean_m Σn² / Σn̂² )`.
pub fn seg_na(noise: &[f64], processed: &[f64], labeling: &FrameLabeling, delay: usize) -> Result<SegNa> {
    let (noise, processed) = align(noise, processed, delay)?;
    let r = labeling.frame_len;
    let frames = noise.len() / r;
    let mut sum = 0.0;
    let mut used = 0;
    let mut clamped = 0;
    for &m in labeling.noise_only.iter().filter(|&&m| m < frames) {
        let span = m * r..(m + 1) * r;
        let num: f64 = noise[span.clone()].iter().map(|v| v * v).sum();
        let den: f64 = processed[span].iter().map(|v| v * v).sum();
        sum += if den == 0.0 {
            clamped += 1;
            SEG_NA_FRAME_CLAMP
        } else {
            num / den
        };
        used += 1;
    }
    let value = if used == 0 || sum == 0.0 {
        Metric::NotApplicable
    } else {
        Metric::Value(10.0 * (sum / used as f64).log10())
    };
    Ok(SegNa {
        value,
        frames_used: used,
        clamped_frames: clamped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegSnr {
    pub value: Metric,
    pub frames_used: usize,
}

/// Segmental SNR over all frames with nonzero clean energy:
/// `(10/N) Σ_m log10( Σs² / Σ(ŝ - s)² )`.
///
/// A frame with zero error makes the whole measure not applicable.
pub fn seg_snr(clean: &[f64], processed: &[f64], r: usize, delay: usize) -> Result<SegSnr> {
    if r == 0 {
        return Err(Error::config("frame length must be positive"));
    }
    let (clean, processed) = align(clean, processed, delay)?;
    if clean.len() < r {
        return Err(Error::Dimension {
            context: "segmental SNR after delay compensation",
            expected: r,
            got: clean.len(),
        });
    }
    let mut sum = 0.0;
    let mut used = 0;
    for (s, p) in clean.chunks_exact(r).zip(processed.chunks_exact(r)) {
        let signal: f64 = s.iter().map(|v| v * v).sum();
        if signal == 0.0 {
            continue;
        }
        let error: f64 = s.iter().zip(p).map(|(a, b)| (b - a) * (b - a)).sum();
        if error == 0.0 {
            return Ok(SegSnr {
                value: Metric::NotApplicable,
                frames_used: used,
            });
        }
        sum += (signal / error).log10();
        used += 1;
    }
    let value = if used == 0 {
        Metric::NotApplicable
    } else {
        Metric::Value(10.0 * sum / used as f64)
    };
    Ok(SegSnr {
        value,
        frames_used: used,
    })
}

/// `‖R_re - E_re‖² + ‖R_im - E_im‖² + ‖ |R| - |E| ‖²` over all stored bins.
pub fn ri_mag_loss(reference: &AnalysisFrames, estimate: &AnalysisFrames) -> Result<f64> {
    if reference.spec != estimate.spec {
        return Err(Error::config("RI+Mag loss needs frames of identical filterbank geometry"));
    }
    if reference.len() != estimate.len() {
        return Err(Error::Dimension {
            context: "RI+Mag frame count",
            expected: reference.len(),
            got: estimate.len(),
        });
    }
    Ok(reference
        .frames
        .iter()
        .zip(&estimate.frames)
        .flat_map(|(a, b)| a.iter().zip(b))
        .map(|(r, e)| {
            let d = r - e;
            let dm = r.norm() - e.norm();
            d.re * d.re + d.im * d.im + dm * dm
        })
        .sum())
}

/// Metrics for one processed file.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub seg_na: SegNa,
    pub seg_snr: SegSnr,
    pub ri_mag_loss: f64,
    pub labeling: FrameLabeling,
    pub delay_compensation_samples: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeling_fixed_points() {
        let silence = vec![0.0; 640];
        let l = label_noise_only(&silence, 64, -40.0).unwrap();
        assert_eq!(l.noise_only, (0..10).collect::<Vec<_>>());

        let tone: Vec<f64> = (0..640).map(|t| if t % 2 == 0 { 0.5 } else { -0.5 }).collect();
        assert!(label_noise_only(&tone, 64, -40.0).unwrap().noise_only.is_empty());

        assert!(label_noise_only(&tone, 641, -40.0).is_err());
        assert!(label_noise_only(&tone, 0, -40.0).is_err());
    }

    #[test]
    fn seg_na_fixed_points() {
        let noise: Vec<f64> = (0..640).map(|t| ((t * 7919) % 13) as f64 - 6.0).collect();
        let labels = label_noise_only(&vec![0.0; 640], 64, -40.0).unwrap();
        let same = seg_na(&noise, &noise, &labels, 0).unwrap();
        assert_eq!(same.value, Metric::Value(0.0));
        let half: Vec<f64> = noise.iter().map(|v| v / 2.0).collect();
        let v = seg_na(&noise, &half, &labels, 0).unwrap().value.value().unwrap();
        assert!((v - 20.0 * 2f64.log10()).abs() < 1e-12);
    }

    #[test]
    fn seg_na_clamps_silent_frames() {
        let noise = vec![0.1; 128];
        let labels = label_noise_only(&vec![0.0; 128], 64, -40.0).unwrap();
        let mut processed = vec![0.1; 128];
        processed[..64].iter_mut().for_each(|v| *v = 0.0);
        let r = seg_na(&noise, &processed, &labels, 0).unwrap();
        assert_eq!(r.clamped_frames, 1);
        let expect = 10.0 * ((SEG_NA_FRAME_CLAMP + 1.0) / 2.0).log10();
        assert!((r.value.value().unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn seg_na_without_noise_frames_is_na() {
        let tone: Vec<f64> = (0..640).map(|t| (t as f64 * 0.3).sin()).collect();
        let labels = label_noise_only(&tone, 64, -40.0).unwrap();
        assert_eq!(seg_na(&tone, &tone, &labels, 0).unwrap().value, Metric::NotApplicable);
    }

    #[test]
    fn seg_snr_fixed_points() {
        let clean: Vec<f64> = (0..640).map(|t| (t as f64 * 0.1).sin()).collect();
        let doubled: Vec<f64> = clean.iter().map(|v| 2.0 * v).collect();
        let v = seg_snr(&clean, &doubled, 64, 0).unwrap().value.value().unwrap();
        assert!(v.abs() < 1e-12);
        assert_eq!(seg_snr(&clean, &clean, 64, 0).unwrap().value, Metric::NotApplicable);
    }

    #[test]
    fn seg_snr_skips_silent_frames() {
        let mut clean: Vec<f64> = (0..256).map(|t| (t as f64 * 0.1).sin()).collect();
        clean[64..128].iter_mut().for_each(|v| *v = 0.0);
        let processed: Vec<f64> = clean.iter().map(|v| 0.5 * v + 0.01).collect();
        assert_eq!(seg_snr(&clean, &processed, 64, 0).unwrap().frames_used, 3);
    }

    #[test]
    fn delay_compensation() {
        let clean: Vec<f64> = (0..640).map(|t| (t as f64 * 0.37).sin() * (t as f64 * 0.01).cos()).collect();
        let processed: Vec<f64> = clean.iter().map(|v| 0.8 * v + 0.05).collect();
        let mut delayed = vec![0.0; 17];
        delayed.extend(&processed);
        assert_eq!(seg_snr(&clean, &processed, 64, 0).unwrap(), seg_snr(&clean, &delayed, 64, 17).unwrap());
        let labels = label_noise_only(&vec![0.0; 640], 64, -40.0).unwrap();
        assert_eq!(seg_na(&clean, &processed, &labels, 0).unwrap(), seg_na(&clean, &delayed, &labels, 17).unwrap());
        assert!(align(&clean, &processed[..10], 17).is_err());
    }
}
