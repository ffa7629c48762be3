//! GDFT analysis filterbank: prototype design and causal subband analysis.
//!
//! Frame indexing is shared by every module of the crate. Frames are numbered
//! `k = 1..=floor(T / r)` and frame `k` is available once `k * r` samples have
//! arrived: with 0-based sample arrays it reads `x[k*r - 1 - l]` for
//! `l = 0..=L`. Samples before the start of the signal are zero. Frame `k` is
//! stored at position `k - 1` of [`AnalysisFrames::frames`].
//!
//! Only the `M/2 + 1` non-redundant bins are computed; for real input the
//! remaining bins follow from Hermitian symmetry (see [`expand_hermitian`]).

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// Geometry of an evenly stacked GDFT filterbank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterbankSpec {
    /// Number of subbands `M`.
    pub frame_size: usize,
    /// Prototype order `L`; the prototype has `L + 1` taps.
    pub proto_len: usize,
    /// Hop (downsampling rate) `r`.
    pub hop: usize,
    pub sample_rate_hz: u32,
}

impl Default for FilterbankSpec {
    fn default() -> Self {
        FilterbankSpec {
            frame_size: 512,
            proto_len: 512,
            hop: 64,
            sample_rate_hz: 16_000,
        }
    }
}

impl FilterbankSpec {
    pub fn new(frame_size: usize, proto_len: usize, hop: usize, sample_rate_hz: u32) -> Result<Self> {
        let spec = FilterbankSpec {
            frame_size,
            proto_len,
            hop,
            sample_rate_hz,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let (m, l, r) = (self.frame_size, self.proto_len, self.hop);
        if m < 2 || m % 2 != 0 {
            return Err(Error::config(format!("subband count M={m} must be even and >= 2")));
        }
        if l % 2 != 0 {
            return Err(Error::config(format!("prototype order L={l} must be even")));
        }
        if l + 1 < m {
            return Err(Error::config(format!("prototype length L+1={} is shorter than M={m}", l + 1)));
        }
        if r == 0 || r > m || m % r != 0 {
            return Err(Error::config(format!("hop r={r} must divide M={m}")));
        }
        if self.sample_rate_hz == 0 {
            return Err(Error::config("sample rate must be positive"));
        }
        Ok(())
    }

    /// Number of stored bins, `M/2 + 1`.
    pub fn bins(&self) -> usize {
        self.frame_size / 2 + 1
    }

    /// Group-delay center of the prototype, `L/2`.
    pub fn tau(&self) -> usize {
        self.proto_len / 2
    }

    /// Frames produced for a signal of `len` samples.
    pub fn num_frames(&self, len: usize) -> usize {
        len / self.hop
    }
}

/// Windowed-sinc prototype low-pass filter `h(l)`, `l = 0..=L`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeFilter {
    pub taps: Vec<f64>,
    pub tau: usize,
}

/// Designs the prototype `h(l) = (1/M) * sinc(2π(l-τ)/M) * win(l)` with a Hann
/// window that is zero at both ends and peaks at `τ`.
///
/// Both factors are evaluated from `|l - τ|`, so the taps are bit-symmetric.
pub fn design_prototype(spec: &FilterbankSpec) -> Result<PrototypeFilter> {
    spec.validate()?;
    let m = spec.frame_size as f64;
    let l_order = spec.proto_len as f64;
    let tau = spec.tau();
    let taps = (0..=spec.proto_len)
        .map(|l| {
            let d = l.abs_diff(tau) as f64;
            let sinc = if d == 0.0 {
                1.0
            } else {
                let arg = 2.0 * PI * d / m;
                arg.sin() / arg
            };
            let win = 0.5 + 0.5 * (2.0 * PI * d / l_order).cos();
            sinc * win / m
        })
        .collect();
    Ok(PrototypeFilter { taps, tau })
}

/// GDFT modulation sequence `exp(-j 2π/M i (l - τ))`.
///
/// The phase is reduced modulo `M` in integer arithmetic before evaluating
/// the exponential.
pub fn modulation(spec: &FilterbankSpec, i: usize, l: i64) -> Complex64 {
    let m = spec.frame_size as i64;
    let k = (i as i64 * (l - spec.tau() as i64)).rem_euclid(m);
    Complex64::from_polar(1.0, -2.0 * PI * k as f64 / m as f64)
}

/// Magnitude response of the prototype on an `nfft`-point grid, returned as
/// `(freq_hz, mag_db)` pairs for bins `0..=nfft/2`, normalized to 0 dB at DC.
pub fn magnitude_response(proto: &PrototypeFilter, nfft: usize, sample_rate_hz: u32) -> Vec<(f64, f64)> {
    let n = nfft.max(proto.taps.len()).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (b, &t) in buf.iter_mut().zip(&proto.taps) {
        b.re = t;
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dc = buf[0].norm();
    (0..=n / 2)
        .map(|k| {
            let freq = k as f64 * sample_rate_hz as f64 / n as f64;
            let mag = buf[k].norm() / dc;
            (freq, 20.0 * mag.max(1e-300).log10())
        })
        .collect()
}

/// Subband frames `x_i(k)`, half-spectrum only.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisFrames {
    pub spec: FilterbankSpec,
    /// `frames[k - 1][i]` holds `x_i(k)` for `i = 0..=M/2`.
    pub frames: Vec<Vec<Complex64>>,
}

impl AnalysisFrames {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Full `M`-bin spectrum of the frame stored at `index`.
    pub fn full_frame(&self, index: usize) -> Result<Vec<Complex64>> {
        expand_hermitian(&self.frames[index])
    }
}

/// Analysis by direct evaluation of the band-pass convolution sums.
pub fn analyze_direct(x: &[f64], proto: &PrototypeFilter, spec: &FilterbankSpec) -> Result<AnalysisFrames> {
    check_proto(proto, spec)?;
    let bins = spec.bins();
    let taps = spec.proto_len + 1;
    // Modulated band-pass filters h_i(l) = h(l) φ_i(l), one row per bin.
    let bank: Vec<Complex64> = (0..bins)
        .flat_map(|i| (0..taps).map(move |l| (i, l)))
        .map(|(i, l)| modulation(spec, i, l as i64) * proto.taps[l])
        .collect();

    let mut segment = vec![0.0; taps];
    let frames = (1..=spec.num_frames(x.len()))
        .map(|k| {
            let newest = k * spec.hop - 1;
            for (l, s) in segment.iter_mut().enumerate() {
                *s = if l <= newest { x[newest - l] } else { 0.0 };
            }
            bank.chunks_exact(taps)
                .map(|row| row.iter().zip(&segment).map(|(h, &s)| h * s).sum())
                .collect()
        })
        .collect();
    Ok(AnalysisFrames { spec: *spec, frames })
}

/// Analysis through the polyphase network: window, fold, one `M`-point FFT.
pub fn analyze_polyphase(x: &[f64], proto: &PrototypeFilter, spec: &FilterbankSpec) -> Result<AnalysisFrames> {
    let mut analyzer = PolyphaseAnalyzer::new(spec, proto)?;
    let frames = x
        .chunks_exact(spec.hop)
        .map(|block| analyzer.push_block(block))
        .collect::<Result<_>>()?;
    Ok(AnalysisFrames { spec: *spec, frames })
}

fn check_proto(proto: &PrototypeFilter, spec: &FilterbankSpec) -> Result<()> {
    spec.validate()?;
    if proto.taps.len() != spec.proto_len + 1 {
        return Err(Error::Dimension {
            context: "prototype taps",
            expected: spec.proto_len + 1,
            got: proto.taps.len(),
        });
    }
    Ok(())
}

/// Streaming polyphase analysis. Holds the `L + 1` most recent samples.
pub struct PolyphaseAnalyzer {
    spec: FilterbankSpec,
    /// Prototype taps reversed so that `window[j]` multiplies `history[j]`.
    window: Vec<f64>,
    /// Oldest sample first; `history[L]` is the newest.
    history: Vec<f64>,
    /// Per-bin correction `exp(j 2π i τ / M)`.
    phase: Vec<Complex64>,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl PolyphaseAnalyzer {
    pub fn new(spec: &FilterbankSpec, proto: &PrototypeFilter) -> Result<Self> {
        check_proto(proto, spec)?;
        let m = spec.frame_size;
        let tau = spec.tau();
        let phase = (0..spec.bins())
            .map(|i| {
                if tau % m == m / 2 {
                    // τ ≡ M/2 (mod M): exp(jπi) = (-1)^i exactly.
                    Complex64::new(if i % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
                } else {
                    let k = (i * tau) % m;
                    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
                }
            })
            .collect();
        let fft = FftPlanner::new().plan_fft_forward(m);
        let scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
        Ok(PolyphaseAnalyzer {
            spec: *spec,
            window: proto.taps.iter().rev().copied().collect(),
            history: vec![0.0; spec.proto_len + 1],
            phase,
            fft,
            buf: vec![Complex64::new(0.0, 0.0); m],
            scratch,
        })
    }

    pub fn spec(&self) -> &FilterbankSpec {
        &self.spec
    }

    pub fn reset(&mut self) {
        self.history.iter_mut().for_each(|h| *h = 0.0);
    }

    /// Consumes exactly `r` new samples and returns the next frame.
    pub fn push_block(&mut self, block: &[f64]) -> Result<Vec<Complex64>> {
        let r = self.spec.hop;
        if block.len() != r {
            return Err(Error::Dimension {
                context: "analysis block",
                expected: r,
                got: block.len(),
            });
        }
        let n = self.history.len();
        self.history.copy_within(r.., 0);
        self.history[n - r..].copy_from_slice(block);

        // Tap l multiplies history[L - l], so the fold bin of history[j] is
        // (L - j) mod M.
        let m = self.spec.frame_size;
        let l_order = self.spec.proto_len;
        self.buf.iter_mut().for_each(|b| *b = Complex64::new(0.0, 0.0));
        for (j, (&s, &w)) in self.history.iter().zip(&self.window).enumerate() {
            self.buf[(l_order - j) % m].re += s * w;
        }
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);
        Ok(self
            .buf
            .iter()
            .zip(&self.phase)
            .map(|(&v, &p)| v * p)
            .collect())
    }
}

/// Rebuilds the full `M`-bin spectrum from `M/2 + 1` stored bins using
/// `full[M - i] = conj(half[i])`.
///
/// Bins 0 and `M/2` must be real to within `1e-9` of the largest magnitude.
pub fn expand_hermitian(half: &[Complex64]) -> Result<Vec<Complex64>> {
    if half.len() < 2 {
        return Err(Error::Dimension {
            context: "half spectrum",
            expected: 2,
            got: half.len(),
        });
    }
    let m = 2 * (half.len() - 1);
    let peak = half.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * peak;
    for (idx, c) in [(0, half[0]), (m / 2, half[m / 2])] {
        if c.im.abs() > tol || !c.im.is_finite() {
            return Err(Error::Symmetry(format!(
                "bin {idx} has imaginary part {:e} (tolerance {tol:e})",
                c.im
            )));
        }
    }
    let mut full = Vec::with_capacity(m);
    full.extend_from_slice(half);
    full.extend(half[1..m / 2].iter().rev().map(|c| c.conj()));
    Ok(full)
}
