//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use qcldpc::{BitVector, CirculantElement, QcMatrix};
use rand::{seq::SliceRandom, Rng};

/// Row-major dense GF(2) matrix, one byte per entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<u8>>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense { rows, cols, a: vec![vec![0; cols]; rows] }
    }

    /// Explicit p×p circulant with `M[i][j] = c[(j - i) mod p]`.
    pub fn circulant(c: &CirculantElement) -> Self {
        let p = c.p();
        let mut d = Dense::zeros(p, p);
        for i in 0..p {
            for j in 0..p {
                d.a[i][j] = c.poly().get((j + p - i) % p) as u8;
            }
        }
        d
    }

    pub fn expand(m: &QcMatrix) -> Self {
        let p = m.p();
        let mut d = Dense::zeros(m.rows() * p, m.cols() * p);
        for bi in 0..m.rows() {
            for bj in 0..m.cols() {
                let c = Dense::circulant(m.block(bi, bj));
                for i in 0..p {
                    for j in 0..p {
                        d.a[bi * p + i][bj * p + j] = c.a[i][j];
                    }
                }
            }
        }
        d
    }

    pub fn mul(&self, o: &Dense) -> Dense {
        assert_eq!(self.cols, o.rows);
        let mut out = Dense::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                if self.a[i][l] == 1 {
                    for j in 0..o.cols {
                        out.a[i][j] ^= o.a[l][j];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Dense {
        let mut out = Dense::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.a[j][i] = self.a[i][j];
            }
        }
        out
    }

    pub fn vec_mul(v: &[u8], m: &Dense) -> Vec<u8> {
        assert_eq!(v.len(), m.rows);
        let mut out = vec![0u8; m.cols];
        for (i, &b) in v.iter().enumerate() {
            if b == 1 {
                for j in 0..m.cols {
                    out[j] ^= m.a[i][j];
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.a[i][j] == (i == j) as u8))
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.a[i][c] == 1) else { continue };
            self.a.swap(r, pr);
            for i in 0..self.rows {
                if i != r && self.a[i][c] == 1 {
                    let row = self.a[r].clone();
                    for (x, y) in self.a[i].iter_mut().zip(&row) {
                        *x ^= y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }
}

pub fn bits(v: &BitVector) -> Vec<u8> {
    v.to_bools().into_iter().map(u8::from).collect()
}

/// Polynomial gcd over GF(2) on bit vectors of coefficients (index = degree).
pub fn poly_gcd(mut a: Vec<u8>, mut b: Vec<u8>) -> Vec<u8> {
    fn trim(v: &mut Vec<u8>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            for (i, &x) in b.iter().enumerate() {
                a[i + shift] ^= x;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Ring unit test by gcd with `x^p + 1`.
pub fn is_unit(c: &CirculantElement) -> bool {
    let p = c.p();
    let mut modulus = vec![0u8; p + 1];
    modulus[0] = 1;
    modulus[p] = 1;
    poly_gcd(bits(c.poly()), modulus) == vec![1]
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Exact check-node kernels by enumerating every placement of the other
/// errors among the `n - 1` remaining positions. The check holds the bit of
/// interest plus `d_c - 1` of those positions.
///
/// Returns `(cc, ci, ic, ii)`: `cc`/`ci` with `q` other errors (bit correct),
/// `ic`/`ii` with `q - 1` other errors (bit in error), split by even/odd
/// count of errors among the check's other positions.
pub fn enumerate_kernels(n: usize, d_c: usize, q: usize) -> [f64; 4] {
    let count = |errs: usize| -> (u64, u64) {
        let (mut even, mut odd) = (0u64, 0u64);
        let others = n - 1;
        let mut idx: Vec<usize> = (0..errs).collect();
        if errs > others {
            return (0, 0);
        }
        loop {
            let inside = idx.iter().filter(|&&i| i < d_c - 1).count();
            if inside % 2 == 0 {
                even += 1;
            } else {
                odd += 1;
            }
            // Next combination in lexicographic order.
            let mut i = errs;
            loop {
                if i == 0 {
                    return (even, odd);
                }
                i -= 1;
                if idx[i] < others - errs + i {
                    idx[i] += 1;
                    for j in i + 1..errs {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    };
    let (cc, ci) = count(q);
    let tot = (cc + ci) as f64;
    let (ic, ii) = if q >= 1 { count(q - 1) } else { (0, 0) };
    let tot1 = ((ic + ii) as f64).max(1.0);
    [cc as f64 / tot, ci as f64 / tot, ic as f64 / tot1, ii as f64 / tot1]
}

/// Exact hypergeometric kernel as a rational, `j` over a parity class.
pub fn kernel_rational(n: usize, d_c: usize, q: usize, odd: bool) -> BigRational {
    let den = binom(n - 1, q);
    let mut num = BigInt::zero();
    for j in (0..d_c).filter(|j| (j % 2 == 1) == odd) {
        if j <= q {
            num += binom(d_c - 1, j) * binom(n - d_c, q - j);
        }
    }
    BigRational::new(num, den)
}

/// Exact binomial tail `sum_{j >= b} C(N, j) x^j (1 - x)^(N - j)`.
pub fn tail_rational(big_n: usize, b: usize, x: &BigRational) -> f64 {
    let y = BigRational::one() - x;
    let mut s = BigRational::zero();
    for j in b..=big_n {
        let term = BigRational::from_integer(binom(big_n, j))
            * num_traits::pow(x.clone(), j)
            * num_traits::pow(y.clone(), big_n - j);
        s += term;
    }
    s.to_f64().unwrap()
}

/// Simulates the Stern information-set process: returns the mean number of
/// iterations until the `w` error positions split as `p | p | 0 | w - 2p`
/// over the two halves of the information set, the `l` window and the rest.
pub fn stern_iterations_mc<R: Rng>(
    n: usize,
    k: usize,
    w: usize,
    p: usize,
    l: usize,
    runs: usize,
    rng: &mut R,
) -> (f64, f64) {
    let half = k / 2;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut samples = Vec::with_capacity(runs);
    for _ in 0..runs {
        let mut iters = 0u64;
        loop {
            iters += 1;
            perm.shuffle(rng);
            let (mut a, mut b, mut win) = (0, 0, 0);
            for (pos, &v) in perm.iter().enumerate() {
                if v < w {
                    if pos < half {
                        a += 1;
                    } else if pos < 2 * half {
                        b += 1;
                    } else if pos >= k && pos < k + l {
                        win += 1;
                    }
                }
            }
            if a == p && b == p && win == 0 && in_tail_ok(&perm, w, k, half) {
                break;
            }
        }
        samples.push(iters as f64);
    }
    let mean = samples.iter().sum::<f64>() / runs as f64;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs - 1) as f64;
    (mean, (var / runs as f64).sqrt())
}

/// Errors may not sit in the `k - 2·half` leftover information position.
fn in_tail_ok(perm: &[usize], w: usize, k: usize, half: usize) -> bool {
    (2 * half..k).all(|pos| perm[pos] >= w)
}
