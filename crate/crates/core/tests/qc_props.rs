mod common;

use common::{bits, Dense};
use proptest::prelude::*;
use qcldpc::{BitVector, CirculantElement, OpCounter, QcMatrix, WinogradConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn random_qc(rows: usize, cols: usize, p: usize, seed: u64) -> QcMatrix {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let blocks = (0..rows * cols).map(|_| CirculantElement::random(p, &mut rng)).collect();
    QcMatrix::new(rows, cols, blocks).unwrap()
}

fn random_invertible(size: usize, p: usize, mut seed: u64) -> QcMatrix {
    loop {
        let m = random_qc(size, size, p, seed);
        if m.invert().is_ok() {
            return m;
        }
        seed += 1000;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn products_match_dense(r in 1usize..4, i in 1usize..4, c in 1usize..4, p in 2usize..20, s1: u64, s2: u64) {
        let a = random_qc(r, i, p, s1);
        let b = random_qc(i, c, p, s2);
        let want = Dense::expand(&a).mul(&Dense::expand(&b));
        prop_assert_eq!(Dense::expand(&a.mul(&b).unwrap()), want.clone());
        let counted = a.mul_counted(&b, WinogradConfig::default(), &mut OpCounter::new()).unwrap();
        prop_assert_eq!(Dense::expand(&counted), want);
    }

    #[test]
    fn vector_products_match_dense(r in 1usize..4, c in 1usize..4, p in 2usize..40, s1: u64, s2: u64) {
        let m = random_qc(r, c, p, s1);
        let v = BitVector::random(r * p, &mut ChaCha20Rng::seed_from_u64(s2));
        let want = Dense::vec_mul(&bits(&v), &Dense::expand(&m));
        prop_assert_eq!(bits(&m.vec_mul(&v).unwrap()), want.clone());
        let w = m.vec_mul_winograd(&v, WinogradConfig::default(), &mut OpCounter::new()).unwrap();
        prop_assert_eq!(bits(&w), want.clone());
        prop_assert_eq!(bits(&m.vec_mul_sparse(&v, &mut OpCounter::new()).unwrap()), want);
    }

    #[test]
    fn inverse_multiplies_back(size in 1usize..4, p in prop::sample::select(vec![5usize, 7, 13, 16]), seed: u64) {
        let m = random_qc(size, size, p, seed);
        if let Ok(inv) = m.invert() {
            prop_assert!(m.mul(&inv).unwrap().is_identity());
            prop_assert!(inv.mul(&m).unwrap().is_identity());
            prop_assert!(Dense::expand(&m).mul(&Dense::expand(&inv)).is_identity());
        }
    }

    #[test]
    fn transpose_matches_dense(r in 1usize..4, c in 1usize..4, p in 2usize..12, seed: u64) {
        let m = random_qc(r, c, p, seed);
        prop_assert_eq!(Dense::expand(&m.transpose()), Dense::expand(&m).transpose());
    }
}

#[test]
fn two_by_two_inverse_p13() {
    let m = random_invertible(2, 13, 3);
    assert!(m.mul(&m.invert().unwrap()).unwrap().is_identity());
    assert!(QcMatrix::identity(3, 13).invert().unwrap().is_identity());
}

#[test]
fn scrambled_generator_matches_dense() {
    // (S^-1 · G) · Q^-1 with block sizes up to 64.
    for (k0, n0, p) in [(1, 2, 17), (2, 3, 31), (3, 4, 64)] {
        let s = random_invertible(k0, p, 1);
        let q = random_invertible(n0, p, 2);
        let g = random_qc(k0, n0, p, 3);
        let (s_inv, q_inv) = (s.invert().unwrap(), q.invert().unwrap());
        let fast = s_inv
            .mul_counted(&g, WinogradConfig::default(), &mut OpCounter::new())
            .unwrap()
            .mul_counted(&q_inv, WinogradConfig::default(), &mut OpCounter::new())
            .unwrap();
        let dense = Dense::expand(&s_inv).mul(&Dense::expand(&g)).mul(&Dense::expand(&q_inv));
        assert_eq!(Dense::expand(&fast), dense);
    }
}

#[test]
fn counted_product_charges_shared_evaluation() {
    let a = random_qc(2, 3, 64, 5);
    let b = random_qc(3, 4, 64, 6);
    let mut c = OpCounter::new();
    a.mul_counted(&b, WinogradConfig::default(), &mut c).unwrap();
    let per_row = qcldpc::complexity::block_product_cost(3, 4, 64, WinogradConfig::default());
    assert_eq!(c.binary_ops(), 2 * per_row);
}
