//! The filter-bank equalizer proper.
//!
//! Per frame, subband gains are mapped to the long time-domain filter
//! `w_l = h(l) Σ_i W_i φ_i(l)` ([`subband_to_time`]), cut down to `P` taps
//! around the prototype's group-delay point ([`shorten_filter`]) and applied
//! to the input by overlap-save over blocks of `2P` samples, emitting the last
//! `r` samples per hop ([`FilterEngine`]).
//!
//! Filter coefficients change only at frame boundaries, so the overlap-save
//! and direct-form paths produce the same output up to rounding.

use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::filterbank::{expand_hermitian, FilterbankSpec, PolyphaseAnalyzer, PrototypeFilter};
use crate::gains::stream::GainStream;
use crate::gains::{EstimatorParams, GainFrame, MmseLsa};
use crate::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Long time-domain filter of `L + 1` taps derived from one frame of gains.
#[derive(Debug, Clone, PartialEq)]
pub struct HighOrderFilter {
    pub taps: Vec<f64>,
}

/// `P`-tap filter cut from a [`HighOrderFilter`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShortenedFilter {
    pub taps: Vec<f64>,
    pub group_delay: usize,
}

/// Half-spectrum (`D = P + 1` bins) of the `2P`-point DFT of a short filter.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqResponse {
    pub bins: Vec<Complex64>,
}

impl FreqResponse {
    /// Filter length `P` implied by the bin count.
    pub fn shorten_len(&self) -> usize {
        self.bins.len().saturating_sub(1)
    }

    /// All `2P` bins, rebuilt by Hermitian symmetry.
    pub fn expand(&self) -> Result<Vec<Complex64>> {
        expand_hermitian(&self.bins)
    }

    /// The `2P`-tap real impulse response of this response.
    pub fn to_time_taps(&self) -> Result<Vec<f64>> {
        let mut full = self.expand()?;
        let n = full.len();
        FftPlanner::new().plan_fft_inverse(n).process(&mut full);
        Ok(full.iter().map(|c| c.re / n as f64).collect())
    }

    /// Fraction of the impulse-response energy at taps past `2P - r`, which
    /// overlap-save with hop `r` cannot reproduce without circular aliasing.
    pub fn tail_energy_ratio(&self, hop: usize) -> Result<f64> {
        let taps = self.to_time_taps()?;
        let total: f64 = taps.iter().map(|t| t * t).sum();
        if total == 0.0 {
            return Ok(0.0);
        }
        let first_tail = (taps.len() + 1).saturating_sub(hop);
        let tail: f64 = taps.iter().skip(first_tail).map(|t| t * t).sum();
        Ok(tail / total)
    }
}

fn check_hermitian(gains: &[Complex64]) -> Result<()> {
    let m = gains.len();
    let peak = gains.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let tol = 1e-9 * peak;
    if gains[0].im.abs() > tol {
        return Err(Error::Symmetry(format!("DC gain has imaginary part {:e}", gains[0].im)));
    }
    for i in 1..=m / 2 {
        let mismatch = (gains[m - i] - gains[i].conj()).norm();
        if mismatch > tol || mismatch.is_nan() {
            return Err(Error::Symmetry(format!("gains[{}] != conj(gains[{i}]) (|diff| = {mismatch:e})", m - i)));
        }
    }
    Ok(())
}

/// Reusable mapping from full-band gains to time-domain filters.
///
/// `Σ_i W_i exp(-j2π i (l - τ)/M)` is one `M`-point forward DFT of `W`
/// read at index `(l - τ) mod M`.
pub struct FilterMapper {
    proto: PrototypeFilter,
    fft: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl FilterMapper {
    pub fn new(spec: &FilterbankSpec, proto: &PrototypeFilter) -> Self {
        let fft = FftPlanner::new().plan_fft_forward(spec.frame_size);
        FilterMapper {
            proto: proto.clone(),
            scratch: vec![ZERO; fft.get_inplace_scratch_len()],
            buf: vec![ZERO; spec.frame_size],
            fft,
        }
    }

    pub fn subband_to_time(&mut self, gains_full: &[Complex64]) -> Result<HighOrderFilter> {
        let m = self.buf.len();
        if gains_full.len() != m {
            return Err(Error::Dimension {
                context: "full-band gains",
                expected: m,
                got: gains_full.len(),
            });
        }
        check_hermitian(gains_full)?;
        self.buf.copy_from_slice(gains_full);
        self.fft.process_with_scratch(&mut self.buf, &mut self.scratch);

        let scale: f64 = gains_full.iter().map(|c| c.norm()).sum();
        let residue = self.buf.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if residue > 1e-9 * scale {
            return Err(Error::Numeric(format!(
                "imaginary residue {residue:e} in synthesized filter (scale {scale:e})"
            )));
        }
        let tau = self.proto.tau;
        let taps = self
            .proto
            .taps
            .iter()
            .enumerate()
            .map(|(l, &h)| {
                let idx = (l as i64 - tau as i64).rem_euclid(m as i64) as usize;
                h * self.buf[idx].re
            })
            .collect();
        Ok(HighOrderFilter { taps })
    }
}

/// One-shot version of [`FilterMapper::subband_to_time`].
pub fn subband_to_time(gains_full: &[Complex64], proto: &PrototypeFilter) -> Result<HighOrderFilter> {
    let spec = FilterbankSpec {
        frame_size: gains_full.len(),
        proto_len: proto.taps.len() - 1,
        hop: 1,
        sample_rate_hz: 1,
    };
    FilterMapper::new(&spec, proto).subband_to_time(gains_full)
}

/// Filter-bank summation output `Σ_i W_i x_i(k)` over all `M` bins.
pub fn filterbank_summation(gains_full: &[Complex64], frame_full: &[Complex64]) -> Complex64 {
    gains_full.iter().zip(frame_full).map(|(w, x)| w * x).sum()
}

/// Keeps the `P` taps `[τ - P/2, τ + P/2)` of the long filter, which puts the
/// short filter's group delay at `P/2`.
pub fn shorten_filter(hd: &HighOrderFilter, shorten_len: usize) -> Result<ShortenedFilter> {
    let p = shorten_len;
    if p == 0 || !p.is_multiple_of(2) {
        return Err(Error::config(format!("short filter length P={p} must be even and positive")));
    }
    if hd.taps.is_empty() || hd.taps.len().is_multiple_of(2) {
        return Err(Error::config(format!("long filter must have odd length, got {}", hd.taps.len())));
    }
    let tau = (hd.taps.len() - 1) / 2;
    if p / 2 > tau || tau + p / 2 > hd.taps.len() {
        return Err(Error::config(format!(
            "window [{}, {}) falls outside the {}-tap filter",
            tau as i64 - (p / 2) as i64,
            tau + p / 2,
            hd.taps.len()
        )));
    }
    Ok(ShortenedFilter {
        taps: hd.taps[tau - p / 2..tau + p / 2].to_vec(),
        group_delay: p / 2,
    })
}

/// First `P + 1` bins of the `2P`-point DFT of the zero-padded short filter.
pub fn filter_to_freq(sf: &ShortenedFilter) -> FreqResponse {
    let p = sf.taps.len();
    let mut buf = vec![ZERO; 2 * p];
    for (b, &t) in buf.iter_mut().zip(&sf.taps) {
        b.re = t;
    }
    FftPlanner::new().plan_fft_forward(2 * p).process(&mut buf);
    buf.truncate(p + 1);
    FreqResponse { bins: buf }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterMode {
    /// Overlap-save in the `2P`-point DFT domain.
    #[default]
    Ols,
    /// Direct-form FIR, one dot product per output sample.
    Direct,
}

impl std::str::FromStr for FilterMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ols" => Ok(FilterMode::Ols),
            "direct" => Ok(FilterMode::Direct),
            other => Err(Error::config(format!("unknown filter mode {other:?} (expected ols or direct)"))),
        }
    }
}

impl fmt::Display for FilterMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterMode::Ols => "ols",
            FilterMode::Direct => "direct",
        })
    }
}

/// Streaming time-domain filter: the `2P` most recent input samples plus the
/// transforms for overlap-save.
pub struct FilterEngine {
    shorten_len: usize,
    hop: usize,
    /// Oldest sample first.
    history: Vec<f64>,
    frame: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl FilterEngine {
    /// Requires `P >= r - 1` so that the last `r` samples of each `2P` block
    /// are free of circular aliasing.
    pub fn new(shorten_len: usize, hop: usize) -> Result<Self> {
        let p = shorten_len;
        if p == 0 || !p.is_multiple_of(2) {
            return Err(Error::config(format!("short filter length P={p} must be even and positive")));
        }
        if hop == 0 || p + 1 < hop {
            return Err(Error::config(format!("hop r={hop} needs P >= r - 1 (P={p})")));
        }
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(2 * p);
        let inverse = planner.plan_fft_inverse(2 * p);
        let scratch_len = forward.get_inplace_scratch_len().max(inverse.get_inplace_scratch_len());
        Ok(FilterEngine {
            shorten_len: p,
            hop,
            history: vec![0.0; 2 * p],
            frame: 0,
            forward,
            inverse,
            buf: vec![ZERO; 2 * p],
            scratch: vec![ZERO; scratch_len],
        })
    }

    /// Number of blocks processed so far.
    pub fn frame(&self) -> usize {
        self.frame
    }

    pub fn history(&self) -> &[f64] {
        &self.history
    }

    fn push(&mut self, block: &[f64]) -> Result<()> {
        if block.len() != self.hop {
            return Err(Error::Dimension {
                context: "filter block",
                expected: self.hop,
                got: block.len(),
            });
        }
        let n = self.history.len();
        self.history.copy_within(self.hop.., 0);
        self.history[n - self.hop..].copy_from_slice(block);
        self.frame += 1;
        Ok(())
    }

    /// Overlap-save step: DFT of the `2P`-sample history times the expanded
    /// response, inverse DFT, last `r` samples.
    pub fn ols_filter_frame(&mut self, resp: &FreqResponse, block: &[f64]) -> Result<Vec<f64>> {
        if resp.bins.len() != self.shorten_len + 1 {
            return Err(Error::Dimension {
                context: "frequency response",
                expected: self.shorten_len + 1,
                got: resp.bins.len(),
            });
        }
        let full = resp.expand()?;
        self.push(block)?;
        for (b, &s) in self.buf.iter_mut().zip(&self.history) {
            *b = Complex64::new(s, 0.0);
        }
        self.forward.process_with_scratch(&mut self.buf, &mut self.scratch);
        for (b, w) in self.buf.iter_mut().zip(&full) {
            *b *= w;
        }
        self.inverse.process_with_scratch(&mut self.buf, &mut self.scratch);
        let n = self.buf.len();
        let norm = 1.0 / n as f64;
        Ok(self.buf[n - self.hop..].iter().map(|c| c.re * norm).collect())
    }

    /// Direct-form step: `y(t) = Σ_l x(t - l) taps[l]` for the `r` new samples.
    ///
    /// `taps` may be up to `2P - r + 1` long.
    pub fn direct_filter_block(&mut self, taps: &[f64], block: &[f64]) -> Result<Vec<f64>> {
        let n = self.history.len();
        if taps.len() > n - self.hop + 1 {
            return Err(Error::Dimension {
                context: "direct-form filter length",
                expected: n - self.hop + 1,
                got: taps.len(),
            });
        }
        self.push(block)?;
        Ok((n - self.hop..n)
            .map(|t| taps.iter().enumerate().map(|(l, &w)| w * self.history[t - l]).sum())
            .collect())
    }
}

/// Where per-frame gains come from.
#[derive(Debug, Clone, PartialEq)]
pub enum GainSource {
    MmseLsa(EstimatorParams),
    Stream(GainStream),
}

/// Static configuration of the enhancement engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineConfig {
    pub filterbank: FilterbankSpec,
    /// Short filter length `P`.
    pub shorten_len: usize,
    pub mode: FilterMode,
    /// Magnitude limit applied to externally supplied subband gains.
    pub g_max: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            filterbank: FilterbankSpec::default(),
            shorten_len: 128,
            mode: FilterMode::Ols,
            g_max: 4.0,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        self.filterbank.validate()?;
        let p = self.shorten_len;
        if p == 0 || !p.is_multiple_of(2) || p > self.filterbank.proto_len + 1 {
            return Err(Error::config(format!(
                "short filter length P={p} must be even and at most L+1={}",
                self.filterbank.proto_len + 1
            )));
        }
        if p + 1 < self.filterbank.hop {
            return Err(Error::config(format!("P={p} must be at least r-1={}", self.filterbank.hop - 1)));
        }
        if !(self.g_max > 0.0) {
            return Err(Error::config("g_max must be positive"));
        }
        Ok(())
    }

    pub fn latency(&self) -> LatencyReport {
        LatencyReport {
            filter_group_delay_samples: self.shorten_len / 2,
            block_buffer_samples: self.filterbank.hop,
            sample_rate_hz: self.filterbank.sample_rate_hz,
        }
    }
}

/// Signal-path delay and block buffering, reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LatencyReport {
    pub filter_group_delay_samples: usize,
    pub block_buffer_samples: usize,
    pub sample_rate_hz: u32,
}

impl LatencyReport {
    pub fn group_delay_ms(&self) -> f64 {
        1e3 * self.filter_group_delay_samples as f64 / self.sample_rate_hz as f64
    }

    pub fn block_ms(&self) -> f64 {
        1e3 * self.block_buffer_samples as f64 / self.sample_rate_hz as f64
    }
}

impl fmt::Display for LatencyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group_delay_ms={:.3} block_ms={:.3}", self.group_delay_ms(), self.block_ms())
    }
}

enum Gains {
    Estimator(MmseLsa),
    Stream { stream: GainStream, g_max: f64 },
}

/// What the engine applied in one frame; handy for inspection and plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTrace {
    /// Subband gains, `None` for DFT-domain streams.
    pub gains: Option<GainFrame>,
    /// The short filter actually applied.
    pub taps: Vec<f64>,
}

/// Block-by-block enhancer: analysis, gains, filter design, filtering.
pub struct Enhancer {
    config: EngineConfig,
    analyzer: PolyphaseAnalyzer,
    mapper: FilterMapper,
    engine: FilterEngine,
    gains: Gains,
    frame: usize,
}

impl Enhancer {
    pub fn new(config: EngineConfig, source: GainSource) -> Result<Self> {
        config.validate()?;
        let spec = config.filterbank;
        let proto = crate::filterbank::design_prototype(&spec)?;
        let gains = match source {
            GainSource::MmseLsa(params) => {
                Gains::Estimator(MmseLsa::new(spec.bins(), params)?.with_warmup(spec.proto_len / spec.hop))
            }
            GainSource::Stream(stream) => {
                check_stream_geometry(&stream, &config)?;
                Gains::Stream {
                    stream,
                    g_max: config.g_max,
                }
            }
        };
        Ok(Enhancer {
            analyzer: PolyphaseAnalyzer::new(&spec, &proto)?,
            mapper: FilterMapper::new(&spec, &proto),
            engine: FilterEngine::new(config.shorten_len, spec.hop)?,
            gains,
            frame: 0,
            config,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn latency(&self) -> LatencyReport {
        self.config.latency()
    }

    /// Processes `r` new samples and returns `r` enhanced samples.
    pub fn push_block(&mut self, block: &[f64]) -> Result<Vec<f64>> {
        self.push_block_traced(block).map(|(out, _)| out)
    }

    pub fn push_block_traced(&mut self, block: &[f64]) -> Result<(Vec<f64>, FrameTrace)> {
        let hop = self.config.filterbank.hop;
        if block.len() != hop {
            return Err(Error::Dimension {
                context: "enhancer block",
                expected: hop,
                got: block.len(),
            });
        }
        self.frame += 1;
        let k = self.frame;

        let subband = match &mut self.gains {
            Gains::Estimator(est) => {
                let frame = self.analyzer.push_block(block)?;
                Some(est.process(&frame)?)
            }
            Gains::Stream {
                stream: GainStream::Subband(frames),
                g_max,
            } => {
                let mut g = frames.get(k - 1).cloned().ok_or(Error::StreamExhausted { frame: k })?;
                g.clamp_magnitude(*g_max);
                Some(g)
            }
            Gains::Stream {
                stream: GainStream::Response(_),
                ..
            } => None,
        };

        let (out, taps) = match subband {
            Some(gains) => {
                let full = expand_hermitian(&gains.values)?;
                let hd = self.mapper.subband_to_time(&full)?;
                let sf = shorten_filter(&hd, self.config.shorten_len)?;
                let out = match self.config.mode {
                    FilterMode::Ols => self.engine.ols_filter_frame(&filter_to_freq(&sf), block)?,
                    FilterMode::Direct => self.engine.direct_filter_block(&sf.taps, block)?,
                };
                (out, (sf.taps, Some(gains)))
            }
            None => {
                let Gains::Stream {
                    stream: GainStream::Response(responses),
                    ..
                } = &self.gains
                else {
                    unreachable!()
                };
                let resp = responses.get(k - 1).ok_or(Error::StreamExhausted { frame: k })?;
                let taps = resp.to_time_taps()?;
                let out = match self.config.mode {
                    FilterMode::Ols => self.engine.ols_filter_frame(resp, block)?,
                    FilterMode::Direct => {
                        let usable = 2 * self.config.shorten_len - hop + 1;
                        self.engine.direct_filter_block(&taps[..usable], block)?
                    }
                };
                (out, (taps, None))
            }
        };
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite output in frame {k}")));
        }
        let (taps, gains) = taps;
        Ok((out, FrameTrace { gains, taps }))
    }
}

fn check_stream_geometry(stream: &GainStream, config: &EngineConfig) -> Result<()> {
    let (expected, got) = match stream {
        GainStream::Subband(frames) => (config.filterbank.bins(), frames.iter().map(|f| f.values.len()).find(|&n| n != config.filterbank.bins())),
        GainStream::Response(frames) => (config.shorten_len + 1, frames.iter().map(|f| f.bins.len()).find(|&n| n != config.shorten_len + 1)),
    };
    match got {
        Some(n) => Err(Error::config(format!("gain stream records have {n} bins, expected {expected}"))),
        None => Ok(()),
    }
}

/// Enhances a whole signal. The output holds `floor(T / r) * r` samples.
pub fn process_stream(x: &[f64], source: GainSource, config: &EngineConfig) -> Result<(Vec<f64>, LatencyReport)> {
    let mut enhancer = Enhancer::new(*config, source)?;
    let mut out = Vec::with_capacity(x.len());
    for block in x.chunks_exact(config.filterbank.hop) {
        out.extend(enhancer.push_block(block)?);
    }
    Ok((out, enhancer.latency()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::design_prototype;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ones(n: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n]
    }

    fn random_taps(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
    }

    #[test]
    fn unity_gains_give_centered_impulse() {
        for spec in [FilterbankSpec::default(), FilterbankSpec::new(16, 16, 4, 16_000).unwrap()] {
            let proto = design_prototype(&spec).unwrap();
            let hd = subband_to_time(&ones(spec.frame_size), &proto).unwrap();
            for (l, &t) in hd.taps.iter().enumerate() {
                if l == spec.tau() {
                    assert!((t - 1.0).abs() < 1e-12);
                } else {
                    assert!(t.abs() <= 1e-12, "tap {l} = {t}");
                }
            }
        }
    }

    #[test]
    fn zero_gains_give_zero_filter() {
        let spec = FilterbankSpec::default();
        let proto = design_prototype(&spec).unwrap();
        let hd = subband_to_time(&vec![ZERO; 512], &proto).unwrap();
        assert!(hd.taps.iter().all(|&t| t == 0.0));
    }

    #[test]
    fn non_hermitian_gains_rejected() {
        let spec = FilterbankSpec::new(16, 16, 4, 16_000).unwrap();
        let proto = design_prototype(&spec).unwrap();
        let mut g = ones(16);
        g[3] = Complex64::new(1.0, 0.5);
        assert!(matches!(subband_to_time(&g, &proto), Err(Error::Symmetry(_))));
        let mut g = ones(16);
        g[0] = Complex64::new(1.0, 0.5);
        assert!(matches!(subband_to_time(&g, &proto), Err(Error::Symmetry(_))));
    }

    #[test]
    fn shorten_impulse_and_bounds() {
        let mut taps = vec![0.0; 513];
        taps[256] = 1.0;
        let sf = shorten_filter(&HighOrderFilter { taps }, 128).unwrap();
        assert_eq!(sf.taps.len(), 128);
        assert_eq!(sf.group_delay, 64);
        assert_eq!(sf.taps[64], 1.0);
        assert_eq!(sf.taps.iter().filter(|&&t| t != 0.0).count(), 1);

        let hd = HighOrderFilter { taps: vec![0.0; 17] };
        assert!(shorten_filter(&hd, 18).is_err());
        assert!(shorten_filter(&hd, 7).is_err());
        assert!(shorten_filter(&hd, 16).is_ok());
    }

    #[test]
    fn shortening_error_is_tail_energy() {
        let taps = random_taps(513, 4);
        let hd = HighOrderFilter { taps: taps.clone() };
        let sf = shorten_filter(&hd, 128).unwrap();
        let start = 256 - 64;
        // Embed the short filter in the long support and measure the error directly.
        let err: f64 = (0..513)
            .map(|l| {
                let approx = if (start..start + 128).contains(&l) { sf.taps[l - start] } else { 0.0 };
                (taps[l] - approx).powi(2)
            })
            .sum();
        let tail: f64 = taps[..start].iter().chain(&taps[start + 128..]).map(|t| t * t).sum();
        assert!((err - tail).abs() <= 1e-12 * tail);

        // Any single-tap perturbation inside the support only adds error.
        for (p, delta) in [(0, 1e-3), (64, -1e-2), (127, 0.5)] {
            let perturbed: f64 = err + delta * delta;
            let mut s = sf.taps.clone();
            s[p] += delta;
            let e: f64 = (0..513)
                .map(|l| {
                    let approx = if (start..start + 128).contains(&l) { s[l - start] } else { 0.0 };
                    (taps[l] - approx).powi(2)
                })
                .sum();
            assert!(e > err);
            assert!((e - perturbed).abs() < 1e-9);
        }
    }

    #[test]
    fn freq_of_impulses() {
        let mut taps = vec![0.0; 128];
        taps[0] = 1.0;
        let r = filter_to_freq(&ShortenedFilter { taps, group_delay: 64 });
        assert_eq!(r.bins.len(), 129);
        assert!(r.bins.iter().all(|b| (b - Complex64::new(1.0, 0.0)).norm() < 1e-15));

        let mut taps = vec![0.0; 128];
        taps[64] = 1.0;
        let r = filter_to_freq(&ShortenedFilter { taps, group_delay: 64 });
        let cycle = [
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 1.0),
        ];
        for (d, b) in r.bins.iter().enumerate() {
            assert!((b - cycle[d % 4]).norm() < 1e-12, "bin {d}: {b}");
        }
    }

    #[test]
    fn time_taps_round_trip() {
        let taps = random_taps(128, 8);
        let r = filter_to_freq(&ShortenedFilter { taps: taps.clone(), group_delay: 64 });
        let back = r.to_time_taps().unwrap();
        assert_eq!(back.len(), 256);
        for (l, v) in back.iter().enumerate() {
            let expect = taps.get(l).copied().unwrap_or(0.0);
            assert!((v - expect).abs() < 1e-13);
        }
        assert!(r.tail_energy_ratio(64).unwrap() < 1e-25);
    }

    #[test]
    fn ols_identity_and_delay() {
        let mut engine = FilterEngine::new(128, 64).unwrap();
        let id = FreqResponse { bins: ones(129) };
        let x = random_taps(64 * 10, 2);
        for block in x.chunks(64) {
            let y = engine.ols_filter_frame(&id, block).unwrap();
            for (a, b) in y.iter().zip(block) {
                assert!((a - b).abs() < 1e-14);
            }
        }

        let mut taps = vec![0.0; 128];
        taps[64] = 1.0;
        let delay = filter_to_freq(&ShortenedFilter { taps, group_delay: 64 });
        let mut engine = FilterEngine::new(128, 64).unwrap();
        let y: Vec<f64> = x.chunks(64).flat_map(|b| engine.ols_filter_frame(&delay, b).unwrap()).collect();
        for t in 0..x.len() {
            let expect = if t >= 64 { x[t - 64] } else { 0.0 };
            assert!((y[t] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn direct_trivial_filters() {
        let x = random_taps(64 * 4, 5);
        let mut engine = FilterEngine::new(128, 64).unwrap();
        for block in x.chunks(64) {
            assert!(engine.direct_filter_block(&[0.0; 128], block).unwrap().iter().all(|&v| v == 0.0));
        }
        let mut engine = FilterEngine::new(128, 64).unwrap();
        let mut delta = vec![0.0; 128];
        delta[0] = 1.0;
        for block in x.chunks(64) {
            assert_eq!(engine.direct_filter_block(&delta, block).unwrap(), block);
        }
    }

    #[test]
    fn engine_rejects_bad_blocks() {
        let mut engine = FilterEngine::new(128, 64).unwrap();
        let id = FreqResponse { bins: ones(129) };
        assert!(matches!(engine.ols_filter_frame(&id, &[0.0; 63]), Err(Error::Dimension { .. })));
        assert!(matches!(engine.direct_filter_block(&[1.0], &[0.0; 65]), Err(Error::Dimension { .. })));
        assert!(matches!(
            engine.ols_filter_frame(&FreqResponse { bins: ones(65) }, &[0.0; 64]),
            Err(Error::Dimension { .. })
        ));
        assert!(FilterEngine::new(62, 64).is_err());
        assert!(FilterEngine::new(63, 8).is_err());
    }

    #[test]
    fn latency_report_format() {
        let report = EngineConfig::default().latency();
        assert_eq!(report.filter_group_delay_samples, 64);
        assert_eq!(report.to_string(), "group_delay_ms=4.000 block_ms=4.000");
    }

    #[test]
    fn stream_exhaustion_names_frame() {
        let cfg = EngineConfig::default();
        let stream = GainStream::constant_subband(Complex64::new(1.0, 0.0), 257, 3);
        let err = process_stream(&vec![0.1; 64 * 5], GainSource::Stream(stream), &cfg).unwrap_err();
        assert!(matches!(err, Error::StreamExhausted { frame: 4 }));
    }

    #[test]
    fn zero_gains_silence() {
        let cfg = EngineConfig::default();
        let x = random_taps(64 * 50, 7);
        let stream = GainStream::constant_subband(ZERO, 257, 50);
        let (y, _) = process_stream(&x, GainSource::Stream(stream), &cfg).unwrap();
        assert_eq!(y.len(), x.len());
        assert!(y.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn geometry_mismatch_rejected() {
        let cfg = EngineConfig::default();
        let stream = GainStream::constant_subband(ZERO, 9, 5);
        assert!(matches!(Enhancer::new(cfg, GainSource::Stream(stream)), Err(Error::Config(_))));
        let bad = EngineConfig { shorten_len: 130, ..cfg };
        assert!(bad.validate().is_ok());
        let bad = EngineConfig { shorten_len: 514, ..cfg };
        assert!(bad.validate().is_err());
        let bad = EngineConfig { shorten_len: 32, ..cfg };
        assert!(bad.validate().is_err());
    }
}
