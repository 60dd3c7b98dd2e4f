mod common;

use common::{bits, Dense};
use proptest::prelude::*;
use qcldpc::code::{build_h, sample_difference_family, CodeSpec};
use qcldpc::decoder::bf_decode;
use qcldpc::{BitVector, DecoderConfig, FlipRule, OpCounter, ParityCheck, PrivateCode};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn code(n0: usize, p: usize, d_v: usize, seed: u64) -> PrivateCode {
    sample_difference_family(&CodeSpec::new(n0, p, d_v, 1, 0).unwrap(), seed)
        .unwrap_or_else(|e| panic!("({n0}, {p}, {d_v}): {e}"))
}

fn decode(h: &ParityCheck, word: &BitVector, cfg: &DecoderConfig) -> qcldpc::DecodeOutcome {
    bf_decode(h, word, cfg, &mut OpCounter::new()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn syndrome_matches_dense(n0 in 2usize..5, seed: u64, wseed: u64) {
        let c = code(n0, 61, 3, seed);
        let h = ParityCheck::new(&c);
        let word = BitVector::random(n0 * 61, &mut ChaCha20Rng::seed_from_u64(wseed));
        let dense = Dense::expand(&build_h(&c));
        let want = Dense::vec_mul(&bits(&word), &dense.transpose());
        prop_assert_eq!(bits(&h.syndrome(&word).unwrap()), want);
    }

    #[test]
    fn success_means_zero_syndrome(seed: u64, t in 0usize..80, rule in prop::sample::select(vec![FlipRule::TotalCount, FlipRule::Extrinsic])) {
        let c = code(3, 211, 5, 11);
        let h = ParityCheck::new(&c);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let pos = rand::seq::index::sample(&mut rng, 633, t).into_vec();
        let word = BitVector::from_positions(633, &pos).unwrap();
        let cfg = DecoderConfig::new(3).with_rule(rule);
        let out = decode(&h, &word, &cfg);
        prop_assert_eq!(out.success, h.syndrome(&out.codeword).unwrap().is_zero());
        prop_assert!(out.iterations_used <= cfg.max_iterations);
        prop_assert_eq!(out, decode(&h, &word, &cfg));
    }
}

#[test]
fn low_weight_errors_always_corrected() {
    for d_v in [13, 15] {
        let c = code(2, 2003, d_v, d_v as u64);
        let h = ParityCheck::new(&c);
        let n = 4006;
        let cfg = DecoderConfig::new(d_v.div_ceil(2));
        for i in 0..n {
            let out = decode(&h, &BitVector::from_positions(n, &[i]).unwrap(), &cfg);
            assert!(out.success && out.codeword.is_zero(), "d_v={d_v} single {i}");
            assert_eq!(out.iterations_used, 1);
        }
        let mut rng = ChaCha20Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let pos = rand::seq::index::sample(&mut rng, n, 2).into_vec();
            let out = decode(&h, &BitVector::from_positions(n, &pos).unwrap(), &cfg);
            assert!(out.success && out.codeword.is_zero(), "d_v={d_v} pair {pos:?}");
        }
    }
}

#[test]
fn codeword_plus_errors_decodes_to_codeword() {
    let c = code(4, 1021, 9, 3);
    let h = ParityCheck::new(&c);
    let g = qcldpc::code::build_g(&c).unwrap();
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let u = BitVector::random(3 * 1021, &mut rng);
    let cw = g.vec_mul(&u).unwrap();
    assert!(h.syndrome(&cw).unwrap().is_zero());
    let pos = rand::seq::index::sample(&mut rng, 4 * 1021, 8).into_vec();
    let e = BitVector::from_positions(4 * 1021, &pos).unwrap();
    let out = decode(&h, &cw.xor(&e).unwrap(), &DecoderConfig::new(6).with_max_iterations(20));
    assert!(out.success);
    assert_eq!(out.codeword, cw);
}

#[test]
fn zero_word_takes_no_iterations() {
    let c = code(3, 101, 5, 2);
    let out = decode(&ParityCheck::new(&c), &BitVector::zeros(303), &DecoderConfig::new(3));
    assert!(out.success);
    assert_eq!(out.iterations_used, 0);
}

#[test]
fn iteration_cost_is_charged() {
    let c = code(3, 101, 5, 2);
    let h = ParityCheck::new(&c);
    let mut counter = OpCounter::new();
    let out = bf_decode(&h, &BitVector::from_positions(303, &[5]).unwrap(), &DecoderConfig::new(3), &mut counter).unwrap();
    assert_eq!(counter.binary_ops(), out.iterations_used as u64 * h.iteration_cost());
    assert_eq!(h.iteration_cost(), 5 * 303 * 5 - 101);
}

#[test]
fn config_validation() {
    let c = code(3, 101, 5, 2);
    let h = ParityCheck::new(&c);
    let w = BitVector::zeros(303);
    for bad in [
        DecoderConfig::new(2),
        DecoderConfig::new(5),
        DecoderConfig::new(3).with_max_iterations(0),
        DecoderConfig::new(3).with_schedule(vec![4, 1]),
        DecoderConfig::new(3).with_max_iterations(1).with_schedule(vec![3, 3]),
    ] {
        assert!(bf_decode(&h, &w, &bad, &mut OpCounter::new()).is_err(), "{bad:?}");
    }
    assert!(bf_decode(&h, &BitVector::zeros(302), &DecoderConfig::new(3), &mut OpCounter::new()).is_err());
    assert!(bf_decode(&h, &w, &DecoderConfig::new(4).with_schedule(vec![3, 4]), &mut OpCounter::new()).is_ok());
}
