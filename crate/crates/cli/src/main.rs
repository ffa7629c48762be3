//! `fbe`: low-latency filter-bank equalizer for single-channel speech.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fbe::audio_io::WavFormat;
use fbe::config::Config;
use fbe::Error;

#[derive(Parser, Debug)]
#[command(name = "fbe", version, about = "Low-latency filter-bank equalizer for speech enhancement")]
struct Cli {
    #[command(flatten)]
    shared: SharedArgs,

    /// Log verbosity (-v info, -vv debug); RUST_LOG takes precedence.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand. Flags override `--config`.
#[derive(Args, Debug, Default)]
struct SharedArgs {
    /// `key = value` configuration file.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Number of subbands M.
    #[arg(short = 'M', long, global = true)]
    frame_size: Option<usize>,
    /// Prototype filter order L.
    #[arg(short = 'L', long, global = true)]
    proto_len: Option<usize>,
    /// Hop (downsampling rate) r.
    #[arg(short = 'r', long, global = true)]
    hop: Option<usize>,
    /// Short filter length P.
    #[arg(short = 'P', long, global = true)]
    shorten_len: Option<usize>,
    /// Filtering engine: ols or direct.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Built-in gain estimator (mmse-lsa).
    #[arg(long, global = true, conflicts_with = "gains")]
    estimator: Option<String>,
    /// FBEG gain stream to use instead of the estimator.
    #[arg(long, global = true, value_name = "FILE")]
    gains: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the prototype taps and magnitude response as CSV.
    Design {
        /// Output CSV (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// DFT size of the response.
        #[arg(long, default_value_t = 2048)]
        nfft: usize,
    },
    /// Dump the subband analysis of a WAV file as an FBEG stream.
    Analyze {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Enhance a WAV file.
    Enhance {
        #[arg(long, short)]
        input: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
        /// pcm16 or float32.
        #[arg(long, default_value = "pcm16")]
        format: WavFormat,
    },
    /// Mix clean speech with a seeded crop of noise at a given SNR.
    Mix {
        #[arg(long)]
        clean: PathBuf,
        #[arg(long)]
        noise: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        snr_db: f64,
        #[arg(long)]
        out_mix: PathBuf,
        /// Where to store the scaled noise actually added.
        #[arg(long)]
        out_noise: PathBuf,
        #[arg(long, default_value = "float32")]
        format: WavFormat,
    },
    /// Score processed files against clean speech and the added noise.
    Evaluate {
        #[arg(long)]
        clean: PathBuf,
        #[arg(long)]
        noise: PathBuf,
        /// Samples by which processed files lag the clean signal; `auto` uses P/2.
        #[arg(long, default_value = "0")]
        delay: String,
        /// Noise-only threshold relative to the loudest clean frame.
        #[arg(long, default_value_t = -40.0, allow_negative_numbers = true)]
        threshold_db: f64,
        /// Output CSV (stdout if omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(required = true)]
        processed: Vec<PathBuf>,
    },
}

impl SharedArgs {
    fn resolve(&self) -> fbe::Result<Config> {
        let mut cfg = Config::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        let overrides = [
            ("frame_size", self.frame_size.map(|v| v.to_string())),
            ("proto_len", self.proto_len.map(|v| v.to_string())),
            ("hop", self.hop.map(|v| v.to_string())),
            ("shorten_len", self.shorten_len.map(|v| v.to_string())),
            ("mode", self.mode.clone()),
            ("estimator", self.estimator.clone()),
            ("gains", self.gains.as_ref().map(|p| p.display().to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
        ];
        for (key, value) in overrides {
            if let Some(value) = value {
                cfg.set(key, &value)?;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) => 2,
        Error::Symmetry(_) | Error::Domain(_) | Error::Numeric(_) => 4,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let result = cli.shared.resolve().and_then(|cfg| commands::run(cli.command, &cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("fbe: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
