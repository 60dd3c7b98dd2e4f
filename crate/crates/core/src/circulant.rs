//! The ring GF(2)\[x\]/(x^p + 1) of binary p×p circulant matrices.
//!
//! An element is identified with the first row of its circulant matrix:
//! coefficient `i` of the polynomial is the entry in column `i` of row 0, and
//! row `r` is row 0 cyclically shifted right by `r`. With this convention the
//! row-vector product `v · M` is the polynomial product `v(x) · m(x)`.

use rand::Rng;

use crate::bits::BitVector;
use crate::error::{Error, Result};

/// Accumulator of counted binary operations.
///
/// Counts follow the bit-level cost model (one XOR or AND of two bits is one
/// operation), independent of how many machine words the implementation
/// actually touches.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    binary_ops: u64,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, ops: u64) {
        self.binary_ops += ops;
    }

    #[inline]
    pub fn binary_ops(&self) -> u64 {
        self.binary_ops
    }
}

/// Sparse circulant given by the positions of the ones in its first row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseCirculant {
    p: usize,
    support: Vec<usize>,
}

impl SparseCirculant {
    /// Sorts and validates `support`; positions must be distinct and `< p`.
    pub fn new(p: usize, mut support: Vec<usize>) -> Result<Self> {
        if p == 0 {
            return Err(Error::param("circulant size must be positive"));
        }
        support.sort_unstable();
        if support.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::param("support positions must be distinct"));
        }
        if support.last().is_some_and(|&x| x >= p) {
            return Err(Error::param(format!("support position out of range for p = {p}")));
        }
        Ok(SparseCirculant { p, support })
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense(&self) -> CirculantElement {
        let poly = BitVector::from_positions(self.p, &self.support).expect("validated support");
        CirculantElement { p: self.p, poly }
    }
}

/// Element of GF(2)\[x\]/(x^p + 1), stored as the packed first row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CirculantElement {
    p: usize,
    poly: BitVector,
}

impl std::fmt::Debug for CirculantElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Circulant(p={}, {:?})", self.p, self.poly)
    }
}

impl CirculantElement {
    pub fn zero(p: usize) -> Self {
        CirculantElement {
            p,
            poly: BitVector::zeros(p),
        }
    }

    pub fn one(p: usize) -> Self {
        Self::monomial(p, 0)
    }

    /// `x^(i mod p)`, a cyclic permutation matrix.
    pub fn monomial(p: usize, i: usize) -> Self {
        let mut e = Self::zero(p);
        e.poly.set(i % p, true);
        e
    }

    pub fn from_support(p: usize, support: &[usize]) -> Result<Self> {
        Ok(SparseCirculant::new(p, support.to_vec())?.to_dense())
    }

    pub fn from_poly(poly: BitVector) -> Self {
        CirculantElement {
            p: poly.len(),
            poly,
        }
    }

    pub fn random<R: Rng + ?Sized>(p: usize, rng: &mut R) -> Self {
        Self::from_poly(BitVector::random(p, rng))
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn poly(&self) -> &BitVector {
        &self.poly
    }

    #[inline]
    pub fn weight(&self) -> usize {
        self.poly.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.poly.get(0) && self.weight() == 1
    }

    /// Support of the first row.
    pub fn to_sparse(&self) -> SparseCirculant {
        SparseCirculant {
            p: self.p,
            support: self.poly.iter_ones().collect(),
        }
    }

    /// Row `r` of the expanded p×p matrix.
    pub fn row(&self, r: usize) -> BitVector {
        self.poly.rotated(r % self.p)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::param(format!(
                "circulant size mismatch: {} vs {}",
                self.p, other.p
            )));
        }
        Ok(())
    }

    /// Coefficient-wise XOR.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(CirculantElement {
            p: self.p,
            poly: self.poly.xor(&other.poly)?,
        })
    }

    /// [`add`](Self::add), charging `p` operations.
    pub fn add_counted(&self, other: &Self, counter: &mut OpCounter) -> Result<Self> {
        let out = self.add(other)?;
        counter.add(self.p as u64);
        Ok(out)
    }

    pub(crate) fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.p, other.p);
        self.poly.xor_assign(&other.poly).expect("equal sizes");
    }

    /// Product mod x^p + 1 by shift-and-add over the sparser operand.
    pub fn mul_schoolbook(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (sparse, dense) = if self.weight() <= other.weight() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = BitVector::zeros(self.p);
        for i in sparse.poly.iter_ones() {
            out.xor_rotated(&dense.poly, i);
        }
        CirculantElement { p: self.p, poly: out }
    }

    /// Transposed circulant: coefficient `i` moves to `(p - i) mod p`.
    pub fn transpose(&self) -> Self {
        let mut out = BitVector::zeros(self.p);
        for i in self.poly.iter_ones() {
            out.set((self.p - i) % self.p, true);
        }
        CirculantElement { p: self.p, poly: out }
    }

    pub fn is_invertible(&self) -> bool {
        self.invert().is_ok()
    }

    /// Ring inverse via the extended Euclidean algorithm on `(a, x^p + 1)`.
    pub fn invert(&self) -> Result<Self> {
        let p = self.p;
        if self.is_zero() {
            return Err(Error::SingularElement);
        }
        let words = (2 * p + 1).div_ceil(64) + 1;
        let mut u = Poly::from_bits(self.poly.words(), words);
        let mut v = Poly::zero(words);
        v.set(0);
        v.set(p);
        let mut g1 = Poly::zero(words);
        g1.set(0);
        let mut g2 = Poly::zero(words);
        // Invariant: g1 * a == u and g2 * a == v (mod x^p + 1).
        loop {
            let du = match u.degree() {
                None => return Err(Error::SingularElement),
                Some(0) => break,
                Some(d) => d,
            };
            let dv = v.degree().expect("v never vanishes");
            if du < dv {
                std::mem::swap(&mut u, &mut v);
                std::mem::swap(&mut g1, &mut g2);
                continue;
            }
            let shift = du - dv;
            u.xor_shifted(&v, shift);
            g1.xor_shifted(&g2, shift);
        }
        let mut out = BitVector::zeros(p);
        for i in g1.iter_ones() {
            out.flip(i % p);
        }
        Ok(CirculantElement { p, poly: out })
    }
}

/// Scratch polynomial over GF(2) for the Euclidean algorithm.
#[derive(Clone)]
struct Poly {
    words: Vec<u64>,
}

impl Poly {
    fn zero(words: usize) -> Self {
        Poly {
            words: vec![0; words],
        }
    }

    fn from_bits(src: &[u64], words: usize) -> Self {
        let mut p = Poly::zero(words);
        p.words[..src.len()].copy_from_slice(src);
        p
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn degree(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .rev()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + 63 - w.leading_zeros() as usize)
    }

    fn xor_shifted(&mut self, other: &Poly, shift: usize) {
        let ws = shift / 64;
        let bs = shift % 64;
        let n = self.words.len();
        for i in (0..n - ws).rev() {
            let lo = other.words[i] << bs;
            let hi = if bs > 0 && i > 0 {
                other.words[i - 1] >> (64 - bs)
            } else {
                0
            };
            if lo != 0 || hi != 0 {
                self.words[i + ws] ^= lo | hi;
            }
        }
    }

    fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64).filter(move |b| (w >> b) & 1 == 1).map(move |b| wi * 64 + b)
        })
    }
}

/// Recursion control for the Winograd Toeplitz multiplier.
///
/// A subproblem of size `s` is split into three half-size products when `s`
/// is even and larger than `cutoff`; otherwise it is multiplied directly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinogradConfig {
    pub cutoff: usize,
}

impl Default for WinogradConfig {
    fn default() -> Self {
        WinogradConfig {
            cutoff: default_cutoff(),
        }
    }
}

impl WinogradConfig {
    pub fn new(cutoff: usize) -> Self {
        WinogradConfig { cutoff }
    }

    #[inline]
    pub fn splits(&self, size: usize) -> bool {
        size.is_multiple_of(2) && size > self.cutoff
    }
}

/// Modelled cost of a direct size-`s` Toeplitz vector product: `ceil(s²/2)`.
#[inline]
pub fn direct_cost(size: usize) -> u64 {
    ((size * size) as u64).div_ceil(2)
}

/// Largest power-of-two size at which one split does not beat the direct
/// product, i.e. `3·direct(s/2) + 3s/2 >= direct(s)`. Evaluates to 8.
pub fn default_cutoff() -> usize {
    let mut s = 2usize;
    loop {
        let split = 3 * direct_cost(s) + 3 * s as u64;
        if split < direct_cost(2 * s) {
            return s;
        }
        s *= 2;
    }
}

/// Toeplitz diagonal of a circulant: `diag[k] = T[i][i + k - (p - 1)]`.
fn circulant_diagonal(t: &CirculantElement) -> Vec<u8> {
    let p = t.p();
    (0..2 * p - 1)
        .map(|k| t.poly().get((k + 1) % p) as u8)
        .collect()
}

fn xor_u8(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// A vector after the evaluation phase of the Winograd recursion.
///
/// The evaluation phase depends only on the vector, so one evaluated vector can
/// be multiplied by many matrices; its cost is charged once, at construction.
#[derive(Debug, Clone)]
pub struct EvaluatedVector {
    size: usize,
    cfg: WinogradConfig,
    leaves: Vec<u8>,
}

impl EvaluatedVector {
    pub fn new(v: &BitVector, cfg: WinogradConfig, counter: &mut OpCounter) -> Self {
        let bits: Vec<u8> = v.to_bools().into_iter().map(u8::from).collect();
        let mut leaves = Vec::with_capacity(bits.len() * 2);
        evaluate(&bits, &cfg, counter, &mut leaves);
        EvaluatedVector {
            size: v.len(),
            cfg,
            leaves,
        }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    /// Multiplication and interpolation phases against circulant `t`.
    pub fn mul(&self, t: &CirculantElement, counter: &mut OpCounter) -> Result<BitVector> {
        if t.p() != self.size {
            return Err(Error::param(format!(
                "vector length {} does not match circulant size {}",
                self.size,
                t.p()
            )));
        }
        let diag = circulant_diagonal(t);
        let mut cursor = 0;
        let y = multiply(&self.leaves, &mut cursor, &diag, self.size, &self.cfg, counter);
        debug_assert_eq!(cursor, self.leaves.len());
        Ok(BitVector::from_bits(y.into_iter().map(|b| b == 1)))
    }
}

fn evaluate(v: &[u8], cfg: &WinogradConfig, counter: &mut OpCounter, out: &mut Vec<u8>) {
    let s = v.len();
    if !cfg.splits(s) {
        out.extend_from_slice(v);
        return;
    }
    let h = s / 2;
    let (v0, v1) = v.split_at(h);
    counter.add(h as u64);
    let v01 = xor_u8(v0, v1);
    evaluate(v0, cfg, counter, out);
    evaluate(v1, cfg, counter, out);
    evaluate(&v01, cfg, counter, out);
}

fn multiply(
    leaves: &[u8],
    cursor: &mut usize,
    diag: &[u8],
    s: usize,
    cfg: &WinogradConfig,
    counter: &mut OpCounter,
) -> Vec<u8> {
    if !cfg.splits(s) {
        let v = &leaves[*cursor..*cursor + s];
        *cursor += s;
        counter.add(direct_cost(s));
        let mut y = vec![0u8; s];
        for (i, _) in v.iter().enumerate().filter(|(_, &b)| b == 1) {
            let row = &diag[s - 1 - i..2 * s - 1 - i];
            for (yj, &r) in y.iter_mut().zip(row) {
                *yj ^= r;
            }
        }
        return y;
    }
    // T = [[T0, T1], [T2, T0]] with half-size Toeplitz blocks.
    let h = s / 2;
    let d0 = &diag[h..h + s - 1];
    let d1 = &diag[s..2 * s - 1];
    let d2 = &diag[..s - 1];
    let p1 = multiply(leaves, cursor, &xor_u8(d1, d0), h, cfg, counter);
    let p2 = multiply(leaves, cursor, &xor_u8(d2, d0), h, cfg, counter);
    let p3 = multiply(leaves, cursor, d0, h, cfg, counter);
    counter.add(s as u64);
    let mut y = xor_u8(&p2, &p3);
    y.extend(xor_u8(&p1, &p3));
    y
}

/// `v · T` for the circulant `t`, through the Winograd recursion with the
/// default cutoff.
pub fn circ_mul_winograd(
    v: &BitVector,
    t: &CirculantElement,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    circ_mul_winograd_with(v, t, WinogradConfig::default(), counter)
}

pub fn circ_mul_winograd_with(
    v: &BitVector,
    t: &CirculantElement,
    cfg: WinogradConfig,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    if v.len() != t.p() {
        return Err(Error::param(format!(
            "vector length {} does not match circulant size {}",
            v.len(),
            t.p()
        )));
    }
    EvaluatedVector::new(v, cfg, counter).mul(t, counter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn elem(p: usize, s: &[usize]) -> CirculantElement {
        CirculantElement::from_support(p, s).unwrap()
    }

    #[test]
    fn add_examples() {
        let a = elem(8, &[0, 3]);
        assert!(a.add(&a).unwrap().is_zero());
        assert_eq!(a.add(&CirculantElement::zero(8)).unwrap(), a);
        assert_eq!(a.add(&elem(8, &[3, 5])).unwrap(), elem(8, &[0, 5]));
        assert!(a.add(&CirculantElement::zero(9)).is_err());
        let mut c = OpCounter::new();
        a.add_counted(&a, &mut c).unwrap();
        assert_eq!(c.binary_ops(), 8);
    }

    #[test]
    fn schoolbook_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = CirculantElement::random(29, &mut rng);
        assert_eq!(a.mul_schoolbook(&CirculantElement::one(29)).unwrap(), a);
        let one_plus_x = elem(4, &[0, 1]);
        assert_eq!(one_plus_x.mul_schoolbook(&one_plus_x).unwrap(), elem(4, &[0, 2]));
        assert!(a.mul_schoolbook(&CirculantElement::one(28)).is_err());
    }

    #[test]
    fn invert_examples() {
        assert!(CirculantElement::one(7).invert().unwrap().is_one());
        assert_eq!(elem(3, &[1]).invert().unwrap(), elem(3, &[2]));
        // (1 + x) divides x^p + 1, so it is never a unit.
        assert_eq!(elem(10, &[0, 1]).invert(), Err(Error::SingularElement));
        assert_eq!(CirculantElement::zero(5).invert(), Err(Error::SingularElement));
    }

    #[test]
    fn transpose_example() {
        assert_eq!(elem(5, &[1]).transpose(), elem(5, &[4]));
        assert!(CirculantElement::one(5).transpose().is_one());
    }

    #[test]
    fn default_cutoff_is_eight() {
        assert_eq!(default_cutoff(), 8);
    }

    #[test]
    fn winograd_identity_and_length_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = BitVector::random(64, &mut rng);
        let mut c = OpCounter::new();
        assert_eq!(circ_mul_winograd(&v, &CirculantElement::one(64), &mut c).unwrap(), v);
        assert!(circ_mul_winograd(&v, &CirculantElement::one(63), &mut c).is_err());
    }

    #[test]
    fn winograd_count_below_direct_at_4096() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = BitVector::random(4096, &mut rng);
        let t = CirculantElement::random(4096, &mut rng);
        let mut c = OpCounter::new();
        let y = circ_mul_winograd(&v, &t, &mut c).unwrap();
        assert_eq!(y, CirculantElement::from_poly(v).mul_schoolbook(&t).unwrap().poly().clone());
        assert!(c.binary_ops() < 4096 * 4096 / 2);
    }
}
