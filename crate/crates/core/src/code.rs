//! Private QC-LDPC codes: parameters, random difference families and the
//! parity-check / generator matrices derived from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::circulant::{CirculantElement, SparseCirculant};
use crate::error::{Error, Result};
use crate::qc::QcMatrix;

/// Default bound on rejected draws while sampling a difference family.
pub const DEFAULT_MAX_RETRIES: usize = 100_000;

/// Parameters of one cryptosystem instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeSpec {
    /// Number of circulant blocks in the parity-check row.
    pub n0: usize,
    /// Circulant size.
    pub p: usize,
    /// Column weight of every parity-check block.
    pub d_v: usize,
    /// Row and column weight of the transformation matrix Q.
    pub m: usize,
    /// Number of intentional errors added at encryption.
    pub t_prime: usize,
}

impl CodeSpec {
    pub fn new(n0: usize, p: usize, d_v: usize, m: usize, t_prime: usize) -> Result<Self> {
        let spec = CodeSpec {
            n0,
            p,
            d_v,
            m,
            t_prime,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n0 < 2 {
            return Err(Error::param("n0 must be at least 2"));
        }
        if self.p < 2 {
            return Err(Error::param("p must be at least 2"));
        }
        if self.d_v == 0 || self.d_v >= self.p {
            return Err(Error::param("d_v must satisfy 0 < d_v < p"));
        }
        if self.m == 0 {
            return Err(Error::param("m must be at least 1"));
        }
        if self.t_prime > self.n() {
            return Err(Error::param("t' cannot exceed the code length"));
        }
        Ok(())
    }

    /// Checks that the worst-case decoder load `t'·m` fits a capability.
    pub fn check_capability(&self, capability: usize) -> Result<()> {
        if self.t_prime * self.m > capability {
            return Err(Error::InfeasibleParameters(format!(
                "t'·m = {} exceeds decoder capability {capability}",
                self.t_prime * self.m
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn k0(&self) -> usize {
        self.n0 - 1
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n0 * self.p
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k0() * self.p
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.p
    }

    /// Row weight of H.
    #[inline]
    pub fn d_c(&self) -> usize {
        self.n0 * self.d_v
    }
}

/// Secret code: `n0` circulant supports forming H = [H_0 | ... | H_{n0-1}].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateCode {
    pub spec: CodeSpec,
    pub h: Vec<SparseCirculant>,
}

impl PrivateCode {
    /// Wraps explicit supports, validating shape only.
    pub fn from_supports(spec: CodeSpec, supports: Vec<Vec<usize>>) -> Result<Self> {
        if supports.len() != spec.n0 {
            return Err(Error::param(format!("expected {} supports", spec.n0)));
        }
        let h = supports
            .into_iter()
            .map(|s| {
                if s.len() != spec.d_v {
                    return Err(Error::param(format!("support size must be d_v = {}", spec.d_v)));
                }
                SparseCirculant::new(spec.p, s)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PrivateCode { spec, h })
    }
}

/// Samples `n0` supports whose internal differences mod p are all distinct.
pub fn sample_difference_family(spec: &CodeSpec, seed: u64) -> Result<PrivateCode> {
    sample_difference_family_with(spec, seed, DEFAULT_MAX_RETRIES)
}

/// [`sample_difference_family`] with an explicit rejection budget.
///
/// Positions are drawn one at a time and rejected when they would repeat a
/// difference already in the family. A family whose last block is not a ring
/// unit, or whose current block stalls, is discarded and sampling restarts,
/// drawing from the same budget.
pub fn sample_difference_family_with(
    spec: &CodeSpec,
    seed: u64,
    max_retries: usize,
) -> Result<PrivateCode> {
    spec.validate()?;
    let (n0, p, dv) = (spec.n0, spec.p, spec.d_v);
    if n0 * dv * (dv - 1) >= p {
        return Err(Error::InfeasibleParameters(format!(
            "n0·d_v·(d_v-1) = {} must be below p = {p}",
            n0 * dv * (dv - 1)
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    // A partial family can be a dead end; after this many consecutive
    // rejections sampling restarts from scratch.
    let stall_limit = 4 * p;
    let mut retries = 0usize;
    loop {
        if retries > max_retries {
            return Err(Error::GenerationFailure(format!(
                "no difference family found within {max_retries} rejected draws"
            )));
        }
        let mut used = vec![false; p];
        let mut supports = Vec::with_capacity(n0);
        'blocks: for _ in 0..n0 {
            let mut support: Vec<usize> = Vec::with_capacity(dv);
            let mut fresh: Vec<usize> = Vec::with_capacity(2 * dv);
            let mut stalled = 0usize;
            while support.len() < dv {
                if retries > max_retries || stalled > stall_limit {
                    break 'blocks;
                }
                let pos = rng.gen_range(0..p);
                fresh.clear();
                let mut ok = !support.contains(&pos);
                for &a in &support {
                    if !ok {
                        break;
                    }
                    let d = (pos + p - a) % p;
                    for diff in [d, p - d] {
                        if used[diff] || fresh.contains(&diff) {
                            ok = false;
                            break;
                        }
                        fresh.push(diff);
                    }
                }
                if !ok {
                    retries += 1;
                    stalled += 1;
                    continue;
                }
                stalled = 0;
                for &d in &fresh {
                    used[d] = true;
                }
                support.push(pos);
            }
            support.sort_unstable();
            supports.push(support);
        }
        if supports.len() < n0 || supports.last().map(|s| s.len()) != Some(dv) {
            continue;
        }
        let code = PrivateCode::from_supports(*spec, supports)?;
        if code.h[n0 - 1].to_dense().is_invertible() {
            debug_assert!(check_4cycle_free(&code));
            return Ok(code);
        }
        retries += 1;
    }
}

/// True iff all intra-block differences `a - b mod p` (a ≠ b) are distinct
/// across the whole family, i.e. the Tanner graph of H has no 4-cycles.
pub fn check_4cycle_free(code: &PrivateCode) -> bool {
    let p = code.spec.p;
    let mut seen = vec![false; p];
    for block in &code.h {
        let s = block.support();
        for &a in s {
            for &b in s {
                if a == b {
                    continue;
                }
                let d = (a + p - b) % p;
                if seen[d] {
                    return false;
                }
                seen[d] = true;
            }
        }
    }
    true
}

/// H = [H_0 | H_1 | ... | H_{n0-1}] as a 1×n0 block matrix.
pub fn build_h(code: &PrivateCode) -> QcMatrix {
    let blocks = code.h.iter().map(|s| s.to_dense()).collect();
    QcMatrix::new(1, code.spec.n0, blocks).expect("n0 blocks of equal size")
}

/// Systematic generator G = [I | P] with P_i = (H_{n0-1}^{-1} · H_i)^T.
pub fn build_g(code: &PrivateCode) -> Result<QcMatrix> {
    let spec = code.spec;
    let (n0, k0, p) = (spec.n0, spec.k0(), spec.p);
    let last_inv = code.h[n0 - 1].to_dense().invert()?;
    let mut g = QcMatrix::zero(k0, n0, p);
    for i in 0..k0 {
        g.set(i, i, CirculantElement::one(p));
        let pi = last_inv.mul_unchecked(&code.h[i].to_dense()).transpose();
        g.set(i, n0 - 1, pi);
    }
    Ok(g)
}
