//! Mono WAV input/output and SNR-controlled mixing.

use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AudioBuffer {
    pub samples: Vec<f64>,
    pub sample_rate_hz: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WavFormat {
    #[default]
    Pcm16,
    Float32,
}

impl std::str::FromStr for WavFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pcm16" => Ok(WavFormat::Pcm16),
            "float32" => Ok(WavFormat::Float32),
            other => Err(Error::config(format!("unknown WAV format {other:?} (expected pcm16 or float32)"))),
        }
    }
}

fn audio_err(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Audio(format!("{}: {e}", path.display()))
}

/// Reads a mono 16-bit PCM or 32-bit float WAV file recorded at `expected_rate`.
pub fn read_wav(path: impl AsRef<Path>, expected_rate: u32) -> Result<AudioBuffer> {
    let path = path.as_ref();
    let reader = WavReader::open(path).map_err(|e| audio_err(path, e))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(audio_err(path, format!("{} channels, only mono is supported", spec.channels)));
    }
    if spec.sample_rate != expected_rate {
        return Err(audio_err(
            path,
            format!("sample rate {} Hz, expected {expected_rate} Hz (no resampling)", spec.sample_rate),
        ));
    }
    let samples = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<Vec<_>, _>>(),
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<Vec<_>, _>>(),
        (format, bits) => return Err(audio_err(path, format!("unsupported sample format {format:?} {bits}-bit"))),
    }
    .map_err(|e| audio_err(path, e))?;
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(audio_err(path, "non-finite samples"));
    }
    Ok(AudioBuffer {
        samples,
        sample_rate_hz: spec.sample_rate,
    })
}

/// Round-half-away-from-zero quantization to 16 bits with saturation.
/// Returns the code and whether it saturated.
pub fn quantize_pcm16(v: f64) -> (i16, bool) {
    let scaled = (v * 32768.0).round();
    if scaled > i16::MAX as f64 {
        (i16::MAX, true)
    } else if scaled < i16::MIN as f64 {
        (i16::MIN, true)
    } else {
        (scaled as i16, false)
    }
}

/// Writes `buf` as a mono WAV file and returns the number of clipped samples.
pub fn write_wav(path: impl AsRef<Path>, buf: &AudioBuffer, format: WavFormat) -> Result<usize> {
    let path = path.as_ref();
    if buf.samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("{}: refusing to write non-finite samples", path.display())));
    }
    let (bits, sample_format) = match format {
        WavFormat::Pcm16 => (16, SampleFormat::Int),
        WavFormat::Float32 => (32, SampleFormat::Float),
    };
    let spec = WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate_hz,
        bits_per_sample: bits,
        sample_format,
    };
    let mut writer = WavWriter::create(path, spec).map_err(|e| audio_err(path, e))?;
    let mut clipped = 0;
    for &v in &buf.samples {
        match format {
            WavFormat::Pcm16 => {
                let (q, sat) = quantize_pcm16(v);
                clipped += sat as usize;
                writer.write_sample(q)
            }
            WavFormat::Float32 => {
                clipped += (v.abs() > 1.0) as usize;
                writer.write_sample(v as f32)
            }
        }
        .map_err(|e| audio_err(path, e))?;
    }
    writer.finalize().map_err(|e| audio_err(path, e))?;
    Ok(clipped)
}

fn mean_power(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mixture {
    pub mixture: Vec<f64>,
    /// The noise exactly as added to `clean`.
    pub scaled_noise: Vec<f64>,
    /// Crop offset into the noise recording.
    pub offset: usize,
    pub noise_gain: f64,
}

/// Adds a seeded crop of `noise` to `clean` at `snr_db`, with powers measured
/// over the full utterance.
pub fn mix_at_snr(clean: &[f64], noise: &[f64], snr_db: f64, seed: u64) -> Result<Mixture> {
    if noise.len() < clean.len() {
        return Err(Error::Dimension {
            context: "noise length",
            expected: clean.len(),
            got: noise.len(),
        });
    }
    if clean.is_empty() {
        return Err(Error::Audio("clean signal is empty".into()));
    }
    if !snr_db.is_finite() {
        return Err(Error::config(format!("SNR {snr_db} dB is not finite")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = rng.gen_range(0..=noise.len() - clean.len());
    let crop = &noise[offset..offset + clean.len()];
    let p_clean = mean_power(clean);
    let p_noise = mean_power(crop);
    if p_clean == 0.0 {
        return Err(Error::Audio("clean signal has zero power".into()));
    }
    if p_noise == 0.0 {
        return Err(Error::Audio(format!("noise crop at offset {offset} has zero power")));
    }
    let noise_gain = (p_clean / (p_noise * 10f64.powf(snr_db / 10.0))).sqrt();
    let scaled_noise: Vec<f64> = crop.iter().map(|n| noise_gain * n).collect();
    let mixture = clean.iter().zip(&scaled_noise).map(|(s, n)| s + n).collect();
    Ok(Mixture {
        mixture,
        scaled_noise,
        offset,
        noise_gain,
    })
}
