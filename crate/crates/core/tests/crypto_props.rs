mod common;

use common::{bits, Dense};
use qcldpc::code::{build_g, sample_difference_family, CodeSpec};
use qcldpc::complexity::encryption_ops;
use qcldpc::crypto::{
    decrypt, decrypt_systematic, decrypt_traced, encrypt, encrypt_systematic, generate_q, generate_s, keygen,
    keypair_from_parts, random_error_vector, run_trials,
};
use qcldpc::{BitVector, DecoderConfig, Error, Exec, OpCounter, QcMatrix, WinogradConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn toy() -> CodeSpec {
    CodeSpec::new(3, 1021, 9, 7, 3).unwrap()
}

fn cfg() -> DecoderConfig {
    DecoderConfig::new(6).with_max_iterations(20)
}

fn message(k: usize, seed: u64) -> BitVector {
    BitVector::random(k, &mut ChaCha20Rng::seed_from_u64(seed))
}

#[test]
fn toy_roundtrip() {
    let spec = toy();
    let keys = keygen(&spec, 42).unwrap();
    for i in 0..20 {
        let u = message(spec.k(), i);
        let e = random_error_vector(spec.n(), spec.t_prime, 100 + i).unwrap();
        let x = encrypt(&keys.public, &u, &e, &mut OpCounter::new()).unwrap();
        assert_eq!(decrypt(&keys.private, &x, &cfg(), &mut OpCounter::new()).unwrap(), u);
    }
    let summary = run_trials(&keys, spec.t_prime, 30, 9, &cfg(), Exec::default()).unwrap();
    assert_eq!(summary.successes, 30);
    assert!(summary.mean_iterations >= 1.0);
}

#[test]
fn keygen_is_deterministic() {
    let spec = toy();
    let a = keygen(&spec, 5).unwrap();
    let b = keygen(&spec, 5).unwrap();
    let c = keygen(&spec, 6).unwrap();
    assert_eq!(a.public, b.public);
    assert_ne!(a.public, c.public);
}

#[test]
fn systematic_roundtrip() {
    let spec = toy();
    let keys = keygen(&spec, 8).unwrap();
    let sys = keys.public.to_systematic().unwrap();
    let g = sys.generator();
    assert!(g.submatrix(0, 0, spec.k0(), spec.k0()).is_identity());
    for i in 0..10 {
        let u = message(spec.k(), i);
        let e = random_error_vector(spec.n(), spec.t_prime, 50 + i).unwrap();
        let x = encrypt_systematic(&sys, &u, &e, &mut OpCounter::new()).unwrap();
        assert_eq!(x.slice(0, spec.k()), u.xor(&e.slice(0, spec.k())).unwrap());
        assert_eq!(decrypt_systematic(&keys.private, &x, &cfg(), &mut OpCounter::new()).unwrap(), u);
    }
}

#[test]
fn error_free_ciphertext_needs_no_iterations() {
    let spec = toy();
    let keys = keygen(&spec, 1).unwrap();
    let u = message(spec.k(), 3);
    let x = encrypt(&keys.public, &u, &BitVector::zeros(spec.n()), &mut OpCounter::new()).unwrap();
    let (v, iters) = decrypt_traced(&keys.private, &x, &cfg(), &mut OpCounter::new()).unwrap();
    assert_eq!((v, iters), (u, 0));
}

#[test]
fn transformed_error_weight_is_bounded() {
    let spec = toy();
    let q = generate_q(&spec, 4).unwrap();
    for seed in 0..200 {
        let e = random_error_vector(spec.n(), spec.t_prime, seed).unwrap();
        let w = q.vec_mul(&e).unwrap().weight();
        assert!(w <= spec.t_prime * spec.m);
        assert_eq!(w % 2, (spec.t_prime * spec.m) % 2);
    }
}

#[test]
fn public_generator_is_orthogonal_to_public_parity_check() {
    let spec = CodeSpec::new(4, 211, 5, 5, 2).unwrap();
    let keys = keygen(&spec, 2).unwrap();
    let h_pub = keys.private.public_parity_check();
    assert!(keys.public.gpub.mul(&h_pub.transpose()).unwrap().is_zero());
    let dense = Dense::expand(&keys.public.gpub).mul(&Dense::expand(&h_pub).transpose());
    assert!(dense.is_zero());
}

#[test]
fn identity_scramblers_give_private_generator() {
    let spec = toy();
    let code = sample_difference_family(&spec, 3).unwrap();
    let g = build_g(&code).unwrap();
    let keys = keypair_from_parts(code, QcMatrix::identity(2, spec.p), QcMatrix::identity(3, spec.p)).unwrap();
    assert_eq!(keys.public.gpub, g);
}

#[test]
fn scrambler_is_dense() {
    for n0 in [2, 4] {
        let spec = CodeSpec::new(n0, 4096, 13, 7, 0).unwrap();
        let s = generate_s(&spec, n0 as u64).unwrap();
        let total: usize = s.blocks().iter().map(|b| b.weight()).sum();
        let density = total as f64 / (s.blocks().len() * 4096) as f64;
        assert!((0.45..=0.55).contains(&density), "density {density}");
    }
}

#[test]
fn q_has_weight_m_rows_and_columns() {
    for (n0, p, m) in [(3, 31, 7), (4, 29, 5), (2, 23, 3), (3, 17, 1), (4, 13, 1)] {
        let spec = CodeSpec::new(n0, p, 1, m, 0).unwrap();
        let q = Dense::expand(&generate_q(&spec, 11).unwrap());
        let qt = q.transpose();
        assert!(q.a.iter().all(|r| r.iter().filter(|&&x| x == 1).count() == m));
        assert!(qt.a.iter().all(|r| r.iter().filter(|&&x| x == 1).count() == m));
    }
}

#[test]
fn unit_weight_q_is_a_permutation() {
    let spec = CodeSpec::new(3, 64, 5, 1, 0).unwrap();
    let q = generate_q(&spec, 1).unwrap();
    let e = random_error_vector(spec.n(), 10, 2).unwrap();
    assert_eq!(q.vec_mul(&e).unwrap().weight(), 10);
    assert!(matches!(
        generate_q(&CodeSpec::new(3, 64, 5, 3, 0).unwrap(), 1),
        Err(Error::InfeasibleParameters(_))
    ));
}

#[test]
fn error_positions_are_uniform() {
    // Chi-square over 60 positions, 59 degrees of freedom; 110 is far in the
    // upper tail (p < 1e-4).
    let (n, t, draws) = (60, 5, 20_000u64);
    let mut counts = vec![0f64; n];
    for seed in 0..draws {
        let e = random_error_vector(n, t, seed).unwrap();
        assert_eq!(e.weight(), t);
        for i in e.iter_ones() {
            counts[i] += 1.0;
        }
    }
    let expected = (draws as f64) * t as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
    assert!(chi2 < 110.0, "chi2 = {chi2}");
    assert!(random_error_vector(10, 11, 0).is_err());
}

#[test]
fn encryption_matches_dense_and_cost_model() {
    let spec = CodeSpec::new(3, 37, 3, 7, 4).unwrap();
    let keys = keygen(&spec, 6).unwrap();
    let u = message(spec.k(), 1);
    let e = random_error_vector(spec.n(), 4, 1).unwrap();
    let mut counter = OpCounter::new();
    let x = encrypt(&keys.public, &u, &e, &mut counter).unwrap();
    let mut want = Dense::vec_mul(&bits(&u), &Dense::expand(&keys.public.gpub));
    for i in e.iter_ones() {
        want[i] ^= 1;
    }
    assert_eq!(bits(&x), want);
    assert_eq!(counter.binary_ops(), encryption_ops(&spec, WinogradConfig::default()));
}

#[test]
fn length_mismatches_are_rejected() {
    let spec = CodeSpec::new(3, 37, 3, 7, 4).unwrap();
    let keys = keygen(&spec, 6).unwrap();
    let u = message(spec.k(), 1);
    let bad = BitVector::zeros(spec.n() - 1);
    assert!(encrypt(&keys.public, &u, &bad, &mut OpCounter::new()).is_err());
    assert!(encrypt(&keys.public, &bad, &BitVector::zeros(spec.n()), &mut OpCounter::new()).is_err());
    assert!(decrypt(&keys.private, &bad, &DecoderConfig::new(2), &mut OpCounter::new()).is_err());
}

#[test]
fn overloaded_ciphertext_reports_decode_failure() {
    let spec = CodeSpec::new(3, 211, 5, 7, 40).unwrap();
    let keys = keygen(&spec, 3).unwrap();
    let u = message(spec.k(), 1);
    let e = random_error_vector(spec.n(), 40, 1).unwrap();
    let x = encrypt(&keys.public, &u, &e, &mut OpCounter::new()).unwrap();
    let out = decrypt(&keys.private, &x, &DecoderConfig::new(3), &mut OpCounter::new());
    assert!(matches!(out, Err(Error::DecodeFailure { .. })));
}
