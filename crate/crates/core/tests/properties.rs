mod common;

use common::*;
use fbe::equalizer::{filter_to_freq, subband_to_time, FilterEngine, ShortenedFilter};
use fbe::filterbank::*;
use fbe::gains::stream::{parse_fbeg, write_fbeg, FbegHeader, RecordType};
use fbe::gains::{lsa_gain, mmse_lsa_gain, EstimatorParams, NoiseTrackerState};
use fbe::metrics::{label_noise_only, ri_mag_loss, seg_na};
use fbe::Complex64;
use proptest::prelude::*;

fn small() -> FilterbankSpec {
    FilterbankSpec::new(16, 16, 4, 16_000).unwrap()
}

fn signal(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analysis_is_linear(x1 in signal(200), x2 in signal(200), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let spec = small();
        let proto = design_prototype(&spec).unwrap();
        let mixed: Vec<f64> = x1.iter().zip(&x2).map(|(u, v)| a * u + b * v).collect();
        let lhs = analyze_polyphase(&mixed, &proto, &spec).unwrap().frames.concat();
        let f1 = analyze_polyphase(&x1, &proto, &spec).unwrap().frames.concat();
        let f2 = analyze_polyphase(&x2, &proto, &spec).unwrap().frames.concat();
        let rhs: Vec<Complex64> = f1.iter().zip(&f2).map(|(u, v)| u * a + v * b).collect();
        let scale = rhs.iter().map(|c| c.norm()).fold(1e-300, f64::max);
        let err = lhs.iter().zip(&rhs).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn polyphase_equals_direct(x in signal(240)) {
        let spec = small();
        let proto = design_prototype(&spec).unwrap();
        let a = analyze_polyphase(&x, &proto, &spec).unwrap().frames.concat();
        let b = analyze_direct(&x, &proto, &spec).unwrap().frames.concat();
        let err = a.iter().zip(&b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        prop_assert!(err <= 1e-12);
    }

    #[test]
    fn hermitian_expansion_round_trips(re in prop::collection::vec(-5.0f64..5.0, 9), im in prop::collection::vec(-5.0f64..5.0, 9)) {
        let mut half: Vec<Complex64> = re.iter().zip(&im).map(|(&r, &i)| Complex64::new(r, i)).collect();
        half[0].im = 0.0;
        half[8].im = 0.0;
        let full = expand_hermitian(&half).unwrap();
        prop_assert_eq!(&full[..9], &half[..]);
        for i in 1..8 {
            prop_assert_eq!(full[16 - i], half[i].conj());
        }
    }

    #[test]
    fn g1_taps_are_real_and_linear(seed in 0u64..10_000, c in -2.0f64..2.0) {
        let spec = small();
        let proto = design_prototype(&spec).unwrap();
        let w = random_hermitian(16, seed);
        let scaled: Vec<Complex64> = w.iter().map(|v| v * c).collect();
        let t1 = subband_to_time(&w, &proto).unwrap().taps;
        let t2 = subband_to_time(&scaled, &proto).unwrap().taps;
        for (a, b) in t1.iter().zip(&t2) {
            prop_assert!((a * c - b).abs() <= 1e-13);
        }
    }

    #[test]
    fn fbeg_round_trip(values in prop::collection::vec((any::<f32>(), any::<f32>()), 1..200), bins in 1u32..12) {
        let n = values.len() / bins as usize;
        let frames: Vec<Vec<Complex64>> = values
            .chunks_exact(bins as usize)
            .take(n)
            .map(|rec| rec.iter().map(|&(r, i)| Complex64::new(r as f64, i as f64)).collect())
            .collect();
        let header = FbegHeader { record_type: RecordType::DftResponse, frame_size: 512, hop: 64, bins, num_frames: n as u32 };
        let mut bytes = Vec::new();
        write_fbeg(&mut bytes, &header, &frames).unwrap();
        let (h, back) = parse_fbeg(&bytes).unwrap();
        prop_assert_eq!(h, header);
        let mut again = Vec::new();
        write_fbeg(&mut again, &h, &back).unwrap();
        prop_assert_eq!(again, bytes);
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..128)) {
        let _ = parse_fbeg(&bytes);
        let mut framed = b"FBEG\x01\x00\x00\x00".to_vec();
        framed.extend(&bytes);
        let _ = parse_fbeg(&framed);
    }

    #[test]
    fn ols_equals_direct_for_any_filter(taps in signal(16), x in signal(160)) {
        let resp = filter_to_freq(&ShortenedFilter { taps: taps.clone(), group_delay: 8 });
        let mut ols = FilterEngine::new(16, 8).unwrap();
        let mut direct = FilterEngine::new(16, 8).unwrap();
        for block in x.chunks_exact(8) {
            let a = ols.ols_filter_frame(&resp, block).unwrap();
            let b = direct.direct_filter_block(&taps, block).unwrap();
            for (u, v) in a.iter().zip(&b) {
                prop_assert!((u - v).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn lsa_gains_stay_in_range(powers in prop::collection::vec(0.0f64..100.0, 40)) {
        let p = EstimatorParams::default();
        let mut s = NoiseTrackerState::new(1, &p);
        s.lambda[0] = 1.0;
        for power in powers {
            let g = mmse_lsa_gain(&[Complex64::new(power.sqrt(), 0.0)], &mut s, &p).unwrap().values[0].re;
            prop_assert!(g >= p.gain_floor() && g <= 1.0);
        }
    }

    #[test]
    fn lsa_gain_is_positive_and_finite(xi in 1e-4f64..1e4, gamma in 0.0f64..1e4) {
        let g = lsa_gain(xi, gamma);
        prop_assert!(g.is_finite() && g > 0.0);
    }

    #[test]
    fn seg_na_is_scale_covariant(x in signal(640), y in signal(640), c in 0.01f64..100.0) {
        let labels = label_noise_only(&vec![0.0; 640], 64, -40.0).unwrap();
        let scaled: Vec<f64> = y.iter().map(|v| c * v).collect();
        let a = seg_na(&x, &y, &labels, 0).unwrap().value.value().unwrap();
        let b = seg_na(&x, &scaled, &labels, 0).unwrap().value.value().unwrap();
        prop_assert!((a - b - 20.0 * c.log10()).abs() <= 1e-9);
    }

    #[test]
    fn ri_mag_loss_is_a_nonnegative_symmetric_distance(x in signal(120), y in signal(120)) {
        let spec = small();
        let proto = design_prototype(&spec).unwrap();
        let a = analyze_polyphase(&x, &proto, &spec).unwrap();
        let b = analyze_polyphase(&y, &proto, &spec).unwrap();
        let ab = ri_mag_loss(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ri_mag_loss(&b, &a).unwrap()).abs() <= 1e-12 * ab.max(1.0));
        prop_assert_eq!(ri_mag_loss(&a, &a).unwrap(), 0.0);
    }
}
