//! Independent reference implementations and signal fixtures for tests.
//!
//! Everything here is written for clarity rather than speed and shares no code
//! with the library beyond plain data types.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use fbe::filterbank::FilterbankSpec;
use fbe::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_noise(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn gaussian_noise(n: usize, seed: u64) -> Vec<f64> {
    rng(seed).sample_iter(StandardNormal).take(n).collect()
}

/// Random gains on the full `M`-bin grid with `W[M-i] = conj(W[i])`.
pub fn random_hermitian(m: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = rng(seed);
    let mut w = vec![Complex64::new(0.0, 0.0); m];
    for i in 0..=m / 2 {
        let re = rng.gen_range(-1.0..1.0);
        let im = if i == 0 || i == m / 2 { 0.0 } else { rng.gen_range(-1.0..1.0) };
        w[i] = Complex64::new(re, im);
        if i != 0 && i != m / 2 {
            w[m - i] = w[i].conj();
        }
    }
    w
}

/// Prototype taps from the closed-form windowed sinc, evaluated directly.
pub fn prototype(spec: &FilterbankSpec) -> Vec<f64> {
    let m = spec.frame_size as f64;
    let l = spec.proto_len as f64;
    let tau = l / 2.0;
    (0..=spec.proto_len)
        .map(|n| {
            let d = n as f64 - tau;
            let arg = 2.0 * PI * d / m;
            let sinc = if d == 0.0 { 1.0 } else { arg.sin() / arg };
            sinc * (0.5 + 0.5 * (2.0 * PI * d / l).cos()) / m
        })
        .collect()
}

fn phasor(spec: &FilterbankSpec, i: usize, l: usize) -> Complex64 {
    let arg = -TAU * i as f64 * (l as f64 - spec.tau() as f64) / spec.frame_size as f64;
    Complex64::new(arg.cos(), arg.sin())
}

/// Subband analysis summed term by term for every frame and all `M` bins.
pub fn brute_force_analysis(x: &[f64], spec: &FilterbankSpec) -> Vec<Vec<Complex64>> {
    let h = prototype(spec);
    (1..=x.len() / spec.hop)
        .map(|k| {
            (0..spec.frame_size)
                .map(|i| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (l, &hl) in h.iter().enumerate() {
                        if let Some(t) = (k * spec.hop).checked_sub(1 + l) {
                            acc += x[t] * hl * phasor(spec, i, l);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Subband-to-time mapping as a double sum: `h(l) Σ_i W_i exp(-j 2π i (l - τ) / M)`.
pub fn brute_force_g1(w: &[Complex64], spec: &FilterbankSpec) -> Vec<Complex64> {
    prototype(spec)
        .iter()
        .enumerate()
        .map(|(l, &hl)| w.iter().enumerate().map(|(i, &wi)| wi * phasor(spec, i, l)).sum::<Complex64>() * hl)
        .collect()
}

/// Causal FIR output `Σ_l taps[l] x[t - l]` for every `t`.
pub fn convolve(x: &[f64], taps: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|t| taps.iter().enumerate().filter(|(l, _)| *l <= t).map(|(l, w)| w * x[t - l]).sum())
        .collect()
}

/// `max |a - b| / max |b|`, the error measure used for all tolerance checks.
pub fn rel_err_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let err = a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    let peak = b.iter().map(|y| y.norm()).fold(0.0, f64::max);
    err / peak
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let err = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let peak = b.iter().map(|y| y.abs()).fold(0.0, f64::max);
    err / peak
}

/// `E1(x) = ∫_{ln x}^{∞} exp(-e^s) ds` by composite Simpson, refined until
/// successive halvings agree to 1e-12.
pub fn e1_quadrature(x: f64) -> f64 {
    let f = |s: f64| (-s.exp()).exp();
    let a = x.ln();
    // exp(-e^s) is below e^{-x} · e^{-60} past this point.
    let b = (x + 60.0).ln();
    let simpson = |n: usize| {
        let h = (b - a) / n as f64;
        let inner: f64 = (1..n).map(|j| f(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 }).sum();
        (f(a) + f(b) + inner) * h / 3.0
    };
    let mut n = 256;
    let mut prev = simpson(n);
    loop {
        n *= 2;
        let next = simpson(n);
        if (next - prev).abs() <= 1e-12 * next.abs() || n > 1 << 22 {
            return next;
        }
        prev = next;
    }
}

pub fn seg_snr_oracle(clean: &[f64], processed: &[f64], r: usize, delay: usize) -> Option<f64> {
    let n = clean.len().min(processed.len() - delay);
    let mut total = 0.0;
    let mut count = 0;
    for m in 0..n / r {
        let mut s2 = 0.0;
        let mut e2 = 0.0;
        for t in m * r..(m + 1) * r {
            s2 += clean[t].powi(2);
            e2 += (processed[t + delay] - clean[t]).powi(2);
        }
        if s2 == 0.0 {
            continue;
        }
        if e2 == 0.0 {
            return None;
        }
        total += 10.0 * (s2 / e2).log10();
        count += 1;
    }
    (count > 0).then(|| total / count as f64)
}

pub fn seg_na_oracle(noise: &[f64], processed: &[f64], frames: &[usize], r: usize, delay: usize) -> f64 {
    let ratios: Vec<f64> = frames
        .iter()
        .map(|&m| {
            let n2: f64 = (m * r..(m + 1) * r).map(|t| noise[t].powi(2)).sum();
            let p2: f64 = (m * r..(m + 1) * r).map(|t| processed[t + delay].powi(2)).sum();
            n2 / p2
        })
        .collect();
    10.0 * (ratios.iter().sum::<f64>() / ratios.len() as f64).log10()
}

pub fn ri_mag_oracle(reference: &[Vec<Complex64>], estimate: &[Vec<Complex64>]) -> f64 {
    let mut ri = 0.0;
    let mut mag = 0.0;
    for (fr, fe) in reference.iter().zip(estimate) {
        for (r, e) in fr.iter().zip(fe) {
            ri += (r.re - e.re).powi(2) + (r.im - e.im).powi(2);
            mag += (r.re.hypot(r.im) - e.re.hypot(e.im)).powi(2);
        }
    }
    ri + mag
}

/// Voiced segment and pause lengths of [`synthetic_speech`], in seconds.
pub const VOICED_S: f64 = 0.8;
pub const PAUSE_S: f64 = 0.5;

/// Harmonic "speech": a gliding 100-180 Hz pitch with three formant bumps,
/// voiced for 0.8 s under a sin² envelope, then 0.5 s of exact silence.
pub fn synthetic_speech(rate: f64, seconds: f64) -> Vec<f64> {
    let n = (rate * seconds) as usize;
    let mut phase = 0.0f64;
    let formant = |f: f64, center: f64, width: f64| (-((f - center) / width).powi(2)).exp();
    (0..n)
        .map(|t| {
            let ts = t as f64 / rate;
            let pos = ts % (VOICED_S + PAUSE_S);
            if pos >= VOICED_S {
                return 0.0;
            }
            let env = (PI * pos / VOICED_S).sin().powi(2);
            let f0 = 140.0 + 40.0 * (TAU * 0.7 * ts).sin();
            phase += TAU * f0 / rate;
            let mut s = 0.0;
            for h in 1..=25 {
                let f = f0 * h as f64;
                if f > 4000.0 {
                    break;
                }
                let weight = 0.05 + formant(f, 500.0, 300.0) + 0.6 * formant(f, 1500.0, 400.0) + 0.3 * formant(f, 2500.0, 500.0);
                s += weight / h as f64 * (h as f64 * phase).sin();
            }
            0.3 * env * s
        })
        .collect()
}
