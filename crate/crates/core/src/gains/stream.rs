//! FBEG gain-stream files.
//!
//! Little-endian layout, no padding:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `FBEG`                            |
//! | 4      | 2    | version (1)                             |
//! | 6      | 1    | record type (0 subband gains, 1 DFT)    |
//! | 7      | 1    | reserved (0)                            |
//! | 8      | 4    | `M`                                     |
//! | 12     | 4    | `r`                                     |
//! | 16     | 4    | bins per record (`M/2+1` or `D`)        |
//! | 20     | 4    | number of frames                        |
//! | 24     | ...  | records of `bins` × (f32 re, f32 im)    |

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use log::warn;
use rustfft::num_complex::Complex64;

use super::GainFrame;
use crate::equalizer::FreqResponse;
use crate::filterbank::FilterbankSpec;
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"FBEG";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;

/// Relative filter energy past tap `2P - r` above which a DFT-domain record
/// is reported as time-aliasing in the overlap-save engine.
pub const ALIASING_ENERGY_LIMIT: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordType {
    /// Subband gains, `M/2 + 1` bins; mapped to a short filter by the equalizer.
    SubbandGains = 0,
    /// Half-spectrum of the short filter's `2P`-point DFT, `D = P + 1` bins.
    DftResponse = 1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FbegHeader {
    pub record_type: RecordType,
    pub frame_size: u32,
    pub hop: u32,
    pub bins: u32,
    pub num_frames: u32,
}

impl FbegHeader {
    fn to_bytes(self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[0..4].copy_from_slice(MAGIC);
        out[4..6].copy_from_slice(&VERSION.to_le_bytes());
        out[6] = self.record_type as u8;
        out[7] = 0;
        out[8..12].copy_from_slice(&self.frame_size.to_le_bytes());
        out[12..16].copy_from_slice(&self.hop.to_le_bytes());
        out[16..20].copy_from_slice(&self.bins.to_le_bytes());
        out[20..24].copy_from_slice(&self.num_frames.to_le_bytes());
        out
    }

    fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::format(bytes.len() as u64, format!("truncated header ({} of {HEADER_LEN} bytes)", bytes.len())));
        }
        if &bytes[0..4] != MAGIC {
            return Err(Error::format(0, format!("bad magic {:?}", &bytes[0..4])));
        }
        let version = u16::from_le_bytes([bytes[4], bytes[5]]);
        if version != VERSION {
            return Err(Error::format(4, format!("unsupported version {version}")));
        }
        let record_type = match bytes[6] {
            0 => RecordType::SubbandGains,
            1 => RecordType::DftResponse,
            other => return Err(Error::format(6, format!("unknown record type {other}"))),
        };
        if bytes[7] != 0 {
            return Err(Error::format(7, format!("reserved byte is {}", bytes[7])));
        }
        let word = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
        let header = FbegHeader {
            record_type,
            frame_size: word(8),
            hop: word(12),
            bins: word(16),
            num_frames: word(20),
        };
        if header.bins == 0 {
            return Err(Error::format(16, "zero bins per record"));
        }
        Ok(header)
    }

    /// Wide enough that hostile headers cannot overflow it.
    fn payload_len(&self) -> u128 {
        self.bins as u128 * self.num_frames as u128 * 8
    }
}

/// Serializes `frames` (each `header.bins` long) as an FBEG stream.
///
/// Values are narrowed to f32.
pub fn write_fbeg<W: Write>(mut out: W, header: &FbegHeader, frames: &[Vec<Complex64>]) -> Result<()> {
    if frames.len() != header.num_frames as usize {
        return Err(Error::Dimension {
            context: "FBEG frame count",
            expected: header.num_frames as usize,
            got: frames.len(),
        });
    }
    out.write_all(&header.to_bytes())?;
    for frame in frames {
        if frame.len() != header.bins as usize {
            return Err(Error::Dimension {
                context: "FBEG record",
                expected: header.bins as usize,
                got: frame.len(),
            });
        }
        for c in frame {
            out.write_all(&(c.re as f32).to_le_bytes())?;
            out.write_all(&(c.im as f32).to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_fbeg_file(path: impl AsRef<Path>, header: &FbegHeader, frames: &[Vec<Complex64>]) -> Result<()> {
    write_fbeg(BufWriter::new(File::create(path)?), header, frames)
}

/// Parses a complete FBEG stream held in memory.
pub fn parse_fbeg(bytes: &[u8]) -> Result<(FbegHeader, Vec<Vec<Complex64>>)> {
    let header = FbegHeader::parse(bytes)?;
    let expected = HEADER_LEN as u128 + header.payload_len();
    let actual = bytes.len() as u128;
    if actual < expected {
        let record = (actual - HEADER_LEN as u128) / (header.bins as u128 * 8);
        return Err(Error::format(
            actual as u64,
            format!("truncated payload in record {record}: expected {expected} bytes, found {actual}"),
        ));
    }
    if actual > expected {
        return Err(Error::format(expected as u64, format!("{} trailing bytes after last record", actual - expected)));
    }
    let frames = bytes[HEADER_LEN..]
        .chunks_exact(header.bins as usize * 8)
        .map(|record| {
            record
                .chunks_exact(8)
                .map(|pair| {
                    let re = f32::from_le_bytes(pair[0..4].try_into().unwrap());
                    let im = f32::from_le_bytes(pair[4..8].try_into().unwrap());
                    Complex64::new(re as f64, im as f64)
                })
                .collect()
        })
        .collect();
    Ok((header, frames))
}

pub fn read_fbeg<R: Read>(mut input: R) -> Result<(FbegHeader, Vec<Vec<Complex64>>)> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    parse_fbeg(&bytes)
}

/// Gains loaded from an FBEG file, validated against the active geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum GainStream {
    Subband(Vec<GainFrame>),
    Response(Vec<FreqResponse>),
}

impl GainStream {
    /// `frames` subband frames with every bin equal to `value`.
    pub fn constant_subband(value: Complex64, bins: usize, frames: usize) -> Self {
        GainStream::Subband(
            (1..=frames)
                .map(|frame| GainFrame {
                    frame,
                    values: vec![value; bins],
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        match self {
            GainStream::Subband(f) => f.len(),
            GainStream::Response(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn header(&self, spec: &FilterbankSpec) -> FbegHeader {
        let (record_type, bins) = match self {
            GainStream::Subband(_) => (RecordType::SubbandGains, spec.bins()),
            GainStream::Response(f) => (RecordType::DftResponse, f.first().map_or(0, |r| r.bins.len())),
        };
        FbegHeader {
            record_type,
            frame_size: spec.frame_size as u32,
            hop: spec.hop as u32,
            bins: bins as u32,
            num_frames: self.len() as u32,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>, spec: &FilterbankSpec) -> Result<()> {
        let frames: Vec<Vec<Complex64>> = match self {
            GainStream::Subband(f) => f.iter().map(|g| g.values.clone()).collect(),
            GainStream::Response(f) => f.iter().map(|r| r.bins.clone()).collect(),
        };
        write_fbeg_file(path, &self.header(spec), &frames)
    }
}

/// A DFT-domain record whose time filter leaks past the alias-free length.
#[derive(Debug, Clone, PartialEq)]
pub struct AliasingWarning {
    /// 1-based frame index.
    pub frame: usize,
    pub tail_energy_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LoadedStream {
    pub stream: GainStream,
    pub warnings: Vec<AliasingWarning>,
}

/// Loads an FBEG file and checks it against the filterbank geometry and the
/// short-filter length `shorten_len` (`P`).
pub fn load_gain_stream(path: impl AsRef<Path>, spec: &FilterbankSpec, shorten_len: usize) -> Result<LoadedStream> {
    let (header, frames) = read_fbeg(BufReader::new(File::open(path)?))?;
    from_records(header, frames, spec, shorten_len)
}

pub fn from_records(
    header: FbegHeader,
    frames: Vec<Vec<Complex64>>,
    spec: &FilterbankSpec,
    shorten_len: usize,
) -> Result<LoadedStream> {
    if header.frame_size as usize != spec.frame_size || header.hop as usize != spec.hop {
        return Err(Error::config(format!(
            "stream geometry M={} r={} does not match filterbank M={} r={}",
            header.frame_size, header.hop, spec.frame_size, spec.hop
        )));
    }
    let expected_bins = match header.record_type {
        RecordType::SubbandGains => spec.bins(),
        RecordType::DftResponse => shorten_len + 1,
    };
    if header.bins as usize != expected_bins {
        return Err(Error::config(format!(
            "stream has {} bins per record, expected {expected_bins} for {:?}",
            header.bins, header.record_type
        )));
    }
    for (k, frame) in frames.iter().enumerate() {
        if frame.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            let offset = HEADER_LEN as u64 + k as u64 * header.bins as u64 * 8;
            return Err(Error::format(offset, format!("non-finite value in record {k}")));
        }
    }
    let mut warnings = Vec::new();
    let stream = match header.record_type {
        RecordType::SubbandGains => GainStream::Subband(
            frames
                .into_iter()
                .enumerate()
                .map(|(k, values)| GainFrame { frame: k + 1, values })
                .collect(),
        ),
        RecordType::DftResponse => {
            let responses: Vec<FreqResponse> = frames.into_iter().map(|bins| FreqResponse { bins }).collect();
            for (k, resp) in responses.iter().enumerate() {
                let ratio = resp.tail_energy_ratio(spec.hop)?;
                if ratio > ALIASING_ENERGY_LIMIT {
                    warn!(
                        "frame {}: {:.3e} of the filter energy lies beyond tap {}; overlap-save output will alias",
                        k + 1,
                        ratio,
                        2 * shorten_len - spec.hop
                    );
                    warnings.push(AliasingWarning {
                        frame: k + 1,
                        tail_energy_ratio: ratio,
                    });
                }
            }
            GainStream::Response(responses)
        }
    };
    Ok(LoadedStream { stream, warnings })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(num_frames: u32) -> FbegHeader {
        FbegHeader {
            record_type: RecordType::SubbandGains,
            frame_size: 16,
            hop: 4,
            bins: 9,
            num_frames,
        }
    }

    fn encode(h: &FbegHeader, frames: &[Vec<Complex64>]) -> Vec<u8> {
        let mut out = Vec::new();
        write_fbeg(&mut out, h, frames).unwrap();
        out
    }

    #[test]
    fn header_layout() {
        let bytes = encode(&header(0), &[]);
        assert_eq!(bytes.len(), HEADER_LEN);
        assert_eq!(&bytes[0..4], b"FBEG");
        assert_eq!(&bytes[4..8], &[1, 0, 0, 0]);
        assert_eq!(&bytes[8..12], &16u32.to_le_bytes());
        assert_eq!(&bytes[16..20], &9u32.to_le_bytes());
    }

    #[test]
    fn record_layout_is_interleaved_f32() {
        let mut frame = vec![Complex64::new(0.0, 0.0); 9];
        frame[0] = Complex64::new(1.5, -2.0);
        let bytes = encode(&header(1), &[frame]);
        assert_eq!(bytes.len(), HEADER_LEN + 72);
        assert_eq!(&bytes[24..28], &1.5f32.to_le_bytes());
        assert_eq!(&bytes[28..32], &(-2.0f32).to_le_bytes());
    }

    #[test]
    fn corrupt_headers_are_format_errors() {
        let good = encode(&header(1), &[vec![Complex64::new(1.0, 0.0); 9]]);

        let mut bad = good.clone();
        bad[0] = b'X';
        assert!(matches!(parse_fbeg(&bad), Err(Error::Format { offset: 0, .. })));

        let mut bad = good.clone();
        bad[4] = 2;
        assert!(matches!(parse_fbeg(&bad), Err(Error::Format { offset: 4, .. })));

        let mut bad = good.clone();
        bad[6] = 7;
        assert!(matches!(parse_fbeg(&bad), Err(Error::Format { offset: 6, .. })));

        let mut bad = good.clone();
        bad[7] = 1;
        assert!(matches!(parse_fbeg(&bad), Err(Error::Format { offset: 7, .. })));

        assert!(matches!(parse_fbeg(&good[..10]), Err(Error::Format { offset: 10, .. })));
        let short = &good[..good.len() - 3];
        assert!(matches!(parse_fbeg(short), Err(Error::Format { offset, .. }) if offset == short.len() as u64));

        let mut long = good.clone();
        long.push(0);
        assert!(matches!(parse_fbeg(&long), Err(Error::Format { .. })));

        // Frame count claiming far more data than present.
        let mut bad = good;
        bad[20..24].copy_from_slice(&u32::MAX.to_le_bytes());
        assert!(matches!(parse_fbeg(&bad), Err(Error::Format { .. })));
    }

    #[test]
    fn geometry_mismatch_is_config_error() {
        let spec = FilterbankSpec::new(16, 16, 4, 16_000).unwrap();
        let frames = vec![vec![Complex64::new(1.0, 0.0); 9]];
        let mut h = header(1);
        h.hop = 8;
        assert!(matches!(from_records(h, frames.clone(), &spec, 8), Err(Error::Config(_))));
        let mut h = header(1);
        h.record_type = RecordType::DftResponse;
        assert!(matches!(from_records(h, frames.clone(), &spec, 16), Err(Error::Config(_))));
        assert!(from_records(h, frames, &spec, 8).is_ok());
    }

    #[test]
    fn non_finite_values_rejected() {
        let spec = FilterbankSpec::new(16, 16, 4, 16_000).unwrap();
        let mut frame = vec![Complex64::new(1.0, 0.0); 9];
        frame[3].im = f64::NAN;
        assert!(matches!(
            from_records(header(1), vec![frame], &spec, 8),
            Err(Error::Format { offset: 24, .. })
        ));
    }
}
