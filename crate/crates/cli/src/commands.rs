use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use fbe::audio_io::{mix_at_snr, read_wav, write_wav, AudioBuffer, WavFormat};
use fbe::config::{Config, GainSourceSpec};
use fbe::equalizer::{process_stream, GainSource};
use fbe::filterbank::{analyze_polyphase, design_prototype, magnitude_response};
use fbe::gains::stream::{load_gain_stream, write_fbeg_file, FbegHeader, RecordType};
use fbe::metrics::{align, label_noise_only, ri_mag_loss, seg_na, seg_snr};
use fbe::{Error, Result};
use log::{info, warn};

use crate::Command;

pub fn run(command: Command, cfg: &Config) -> Result<()> {
    match command {
        Command::Design { out, nfft } => design(cfg, out.as_deref(), nfft),
        Command::Analyze { input, out } => analyze(cfg, &input, &out),
        Command::Enhance { input, output, format } => enhance(cfg, &input, &output, format),
        Command::Mix {
            clean,
            noise,
            snr_db,
            out_mix,
            out_noise,
            format,
        } => mix(cfg, &clean, &noise, snr_db, &out_mix, &out_noise, format),
        Command::Evaluate {
            clean,
            noise,
            delay,
            threshold_db,
            out,
            processed,
        } => evaluate(cfg, &clean, &noise, &delay, threshold_db, out.as_deref(), &processed),
    }
}

fn csv_writer(out: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    let sink: Box<dyn Write> = match out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    Ok(csv::Writer::from_writer(sink))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Io(io::Error::other(format!("{other:?}"))),
    }
}

fn rate(cfg: &Config) -> u32 {
    cfg.engine.filterbank.sample_rate_hz
}

/// One CSV table: tap rows `0..=L` and response rows `0..=nfft/2`, padded with
/// empty fields where one list is shorter.
fn design(cfg: &Config, out: Option<&Path>, nfft: usize) -> Result<()> {
    if nfft < 2 || !nfft.is_multiple_of(2) {
        return Err(Error::Config(format!("--nfft {nfft} must be even and at least 2")));
    }
    let proto = design_prototype(&cfg.engine.filterbank)?;
    let response = magnitude_response(&proto, nfft, rate(cfg));
    let mut w = csv_writer(out)?;
    w.write_record(["index", "tap", "freq_hz", "mag_db"]).map_err(csv_err)?;
    for i in 0..proto.taps.len().max(response.len()) {
        let tap = proto.taps.get(i).map_or(String::new(), |t| format!("{t:.17e}"));
        let (freq, mag) = response
            .get(i)
            .map_or((String::new(), String::new()), |(f, m)| (format!("{f}"), format!("{m:.6}")));
        w.write_record([i.to_string(), tap, freq, mag]).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn analyze(cfg: &Config, input: &Path, out: &Path) -> Result<()> {
    let spec = cfg.engine.filterbank;
    let audio = read_wav(input, rate(cfg))?;
    let proto = design_prototype(&spec)?;
    let frames = analyze_polyphase(&audio.samples, &proto, &spec)?;
    let header = FbegHeader {
        record_type: RecordType::SubbandGains,
        frame_size: spec.frame_size as u32,
        hop: spec.hop as u32,
        bins: spec.bins() as u32,
        num_frames: frames.len() as u32,
    };
    write_fbeg_file(out, &header, &frames.frames)?;
    info!("wrote {} frames of {} bins to {}", frames.len(), spec.bins(), out.display());
    Ok(())
}

fn gain_source(cfg: &Config) -> Result<GainSource> {
    Ok(match &cfg.gain_source {
        GainSourceSpec::MmseLsa => GainSource::MmseLsa(cfg.estimator),
        GainSourceSpec::File(path) => {
            let loaded = load_gain_stream(path, &cfg.engine.filterbank, cfg.engine.shorten_len)
                .map_err(|e| with_path(e, path))?;
            if !loaded.warnings.is_empty() {
                warn!("{} of {} records exceed the alias-free filter length", loaded.warnings.len(), loaded.stream.len());
            }
            GainSource::Stream(loaded.stream)
        }
    })
}

fn with_path(err: Error, path: &Path) -> Error {
    match err {
        Error::Io(e) => Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))),
        other => other,
    }
}

fn write_audio(path: &Path, samples: Vec<f64>, rate: u32, format: WavFormat) -> Result<()> {
    let clipped = write_wav(path, &AudioBuffer { samples, sample_rate_hz: rate }, format)?;
    if clipped > 0 {
        warn!("{}: {clipped} samples clipped", path.display());
    }
    Ok(())
}

fn enhance(cfg: &Config, input: &Path, output: &Path, format: WavFormat) -> Result<()> {
    let audio = read_wav(input, rate(cfg))?;
    let (samples, latency) = process_stream(&audio.samples, gain_source(cfg)?, &cfg.engine)?;
    write_audio(output, samples, audio.sample_rate_hz, format)?;
    println!("{latency}");
    Ok(())
}

fn mix(
    cfg: &Config,
    clean: &Path,
    noise: &Path,
    snr_db: f64,
    out_mix: &Path,
    out_noise: &Path,
    format: WavFormat,
) -> Result<()> {
    let clean = read_wav(clean, rate(cfg))?;
    let noise = read_wav(noise, rate(cfg))?;
    let mixed = mix_at_snr(&clean.samples, &noise.samples, snr_db, cfg.seed)?;
    info!("noise offset {} gain {:.6}", mixed.offset, mixed.noise_gain);
    write_audio(out_mix, mixed.mixture, clean.sample_rate_hz, format)?;
    write_audio(out_noise, mixed.scaled_noise, clean.sample_rate_hz, format)
}

fn parse_delay(cfg: &Config, delay: &str) -> Result<usize> {
    if delay == "auto" {
        return Ok(cfg.engine.latency().filter_group_delay_samples);
    }
    delay
        .parse()
        .map_err(|_| Error::Config(format!("--delay expects a sample count or `auto`, got {delay:?}")))
}

fn power_db(x: &[f64]) -> f64 {
    10.0 * (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).log10()
}

fn evaluate(
    cfg: &Config,
    clean: &Path,
    noise: &Path,
    delay: &str,
    threshold_db: f64,
    out: Option<&Path>,
    processed: &[PathBuf],
) -> Result<()> {
    let spec = cfg.engine.filterbank;
    let delay = parse_delay(cfg, delay)?;
    let clean = read_wav(clean, rate(cfg))?.samples;
    let noise = read_wav(noise, rate(cfg))?.samples;
    if clean.len() != noise.len() {
        return Err(Error::Dimension {
            context: "noise file length",
            expected: clean.len(),
            got: noise.len(),
        });
    }
    let snr_db = power_db(&clean) - power_db(&noise);
    let labeling = label_noise_only(&clean, spec.hop, threshold_db)?;
    let proto = design_prototype(&spec)?;

    let mut w = csv_writer(out)?;
    w.write_record(["file", "snr_db", "seg_na_db", "seg_snr_db", "ri_mag_loss", "frames_noise_only", "frames_total"])
        .map_err(csv_err)?;
    for path in processed {
        let est = read_wav(path, rate(cfg))?.samples;
        let na = seg_na(&noise, &est, &labeling, delay)?;
        let snr = seg_snr(&clean, &est, spec.hop, delay)?;
        let (reference, aligned) = align(&clean, &est, delay)?;
        let loss = ri_mag_loss(
            &analyze_polyphase(reference, &proto, &spec)?,
            &analyze_polyphase(aligned, &proto, &spec)?,
        )?;
        w.write_record([
            path.display().to_string(),
            format!("{snr_db:.4}"),
            na.value.to_string(),
            snr.value.to_string(),
            format!("{loss:.6e}"),
            na.frames_used.to_string(),
            labeling.total_frames.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
