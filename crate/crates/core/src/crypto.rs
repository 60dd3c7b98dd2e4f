//! Key generation, encryption and decryption.
//!
//! The public key is `G' = S^{-1} · G · Q^{-1}`, where `G = [I | P]` is the
//! systematic generator of the secret code, `S` is a dense `k0 × k0`
//! block-circulant scrambler and `Q` a sparse `n0 × n0` block-circulant
//! transformation with row and column weight `m`.
//!
//! Encryption is `x = u · G' + e` with `weight(e) = t'`. Decryption computes
//! `x · Q`, decodes the secret code (the error `e · Q` has weight at most
//! `t'·m`), reads `u · S^{-1}` off the systematic positions and multiplies by
//! `S`. Decoding failures surface as [`Error::DecodeFailure`] so the sender
//! can retransmit with a fresh error vector.
//!
//! This is textbook McEliece without a CCA2 conversion.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::bits::BitVector;
use crate::circulant::{CirculantElement, OpCounter, WinogradConfig};
use crate::code::{build_g, build_h, sample_difference_family, CodeSpec, PrivateCode};
use crate::decoder::{bf_decode, DecoderConfig, ParityCheck};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::qc::QcMatrix;
use crate::threshold::{max_intentional_errors, optimize_b, Ensemble};

/// Maximum number of redraws for S and Q.
pub const MAX_MATRIX_DRAWS: usize = 1000;

#[derive(Debug, Clone)]
pub struct PrivateKey {
    pub code: PrivateCode,
    pub s: QcMatrix,
    pub s_inv: QcMatrix,
    pub q: QcMatrix,
    pub q_inv: QcMatrix,
    parity: ParityCheck,
}

impl PrivateKey {
    /// Assembles a key from its secret parts, recomputing the inverses.
    pub fn from_parts(code: PrivateCode, s: QcMatrix, q: QcMatrix) -> Result<Self> {
        let spec = code.spec;
        if s.rows() != spec.k0() || s.cols() != spec.k0() || s.p() != spec.p {
            return Err(Error::param("S must be k0 x k0 with block size p"));
        }
        if q.rows() != spec.n0 || q.cols() != spec.n0 || q.p() != spec.p {
            return Err(Error::param("Q must be n0 x n0 with block size p"));
        }
        let s_inv = s.invert()?;
        let q_inv = q.invert()?;
        let parity = ParityCheck::new(&code);
        Ok(PrivateKey {
            code,
            s,
            s_inv,
            q,
            q_inv,
            parity,
        })
    }

    #[inline]
    pub fn spec(&self) -> &CodeSpec {
        &self.code.spec
    }

    pub fn parity_check(&self) -> &ParityCheck {
        &self.parity
    }

    /// Parity-check matrix of the public code, `H' = H · Q^T`.
    pub fn public_parity_check(&self) -> QcMatrix {
        build_h(&self.code)
            .mul(&self.q.transpose())
            .expect("H is 1 x n0, Q^T is n0 x n0")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub spec: CodeSpec,
    /// `k0 × n0` public generator.
    pub gpub: QcMatrix,
}

impl PublicKey {
    /// Row-reduces the public generator to `[I | P']`.
    pub fn to_systematic(&self) -> Result<SystematicPublicKey> {
        let k0 = self.spec.k0();
        let left = self.gpub.submatrix(0, 0, k0, k0);
        let right = self.gpub.submatrix(0, k0, k0, 1);
        let redundancy = left.invert()?.mul(&right)?;
        Ok(SystematicPublicKey {
            spec: self.spec,
            redundancy,
        })
    }
}

/// Public key in systematic form: only the `k0 × 1` redundancy column of
/// `[I | P']` is stored, `(n0 - 1)·p` bits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystematicPublicKey {
    pub spec: CodeSpec,
    pub redundancy: QcMatrix,
}

impl SystematicPublicKey {
    /// The full `[I | P']` generator.
    pub fn generator(&self) -> QcMatrix {
        let k0 = self.spec.k0();
        let p = self.spec.p;
        let mut g = QcMatrix::zero(k0, self.spec.n0, p);
        for i in 0..k0 {
            g.set(i, i, CirculantElement::one(p));
            g.set(i, k0, self.redundancy.block(i, 0).clone());
        }
        g
    }
}

#[derive(Debug, Clone)]
pub struct KeyPair {
    pub private: PrivateKey,
    pub public: PublicKey,
}

/// Derives independent sub-seeds from one master seed.
fn sub_seeds<const N: usize>(seed: u64) -> [u64; N] {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    std::array::from_fn(|_| rng.next_u64())
}

/// Block weights of the first block row of Q; row `i` is this pattern
/// rotated right by `i`, so every block row and column sums to `m`.
pub fn q_weight_pattern(n0: usize, m: usize) -> Vec<usize> {
    let w = m / n0;
    let mut pattern = vec![w; n0];
    pattern[0] = m - (n0 - 1) * w;
    pattern
}

/// Evaluating Q at `x = 1` gives the circulant GF(2) matrix of block-weight
/// parities; Q can only be a unit if that matrix is invertible.
fn parity_pattern_invertible(pattern: &[usize]) -> bool {
    let n0 = pattern.len();
    let mut rows: Vec<Vec<bool>> = (0..n0)
        .map(|i| (0..n0).map(|j| pattern[(j + n0 - i) % n0] % 2 == 1).collect())
        .collect();
    for c in 0..n0 {
        let Some(pr) = (c..n0).find(|&r| rows[r][c]) else {
            return false;
        };
        rows.swap(c, pr);
        for r in 0..n0 {
            if r != c && rows[r][c] {
                let pivot = rows[c].clone();
                for (x, y) in rows[r].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
    }
    true
}

/// Random invertible sparse Q with expanded row and column weight `m`.
pub fn generate_q(spec: &CodeSpec, seed: u64) -> Result<QcMatrix> {
    let (n0, p) = (spec.n0, spec.p);
    let pattern = q_weight_pattern(n0, spec.m);
    if pattern.iter().any(|&w| w > p) {
        return Err(Error::InfeasibleParameters(format!(
            "block weight exceeds p = {p}"
        )));
    }
    if !parity_pattern_invertible(&pattern) {
        return Err(Error::InfeasibleParameters(format!(
            "block weights {pattern:?} give a determinant of even weight, so Q is never invertible"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..MAX_MATRIX_DRAWS {
        let mut q = QcMatrix::zero(n0, n0, p);
        for i in 0..n0 {
            for j in 0..n0 {
                let w = pattern[(j + n0 - i) % n0];
                let support = rand::seq::index::sample(&mut rng, p, w).into_vec();
                q.set(i, j, CirculantElement::from_support(p, &support)?);
            }
        }
        if q.invert().is_ok() {
            return Ok(q);
        }
    }
    Err(Error::GenerationFailure(format!(
        "no invertible Q after {MAX_MATRIX_DRAWS} draws"
    )))
}

/// Random invertible dense `k0 × k0` scrambler.
pub fn generate_s(spec: &CodeSpec, seed: u64) -> Result<QcMatrix> {
    let (k0, p) = (spec.k0(), spec.p);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..MAX_MATRIX_DRAWS {
        let blocks = (0..k0 * k0)
            .map(|_| CirculantElement::random(p, &mut rng))
            .collect();
        let s = QcMatrix::new(k0, k0, blocks)?;
        if s.invert().is_ok() {
            return Ok(s);
        }
    }
    Err(Error::GenerationFailure(format!(
        "no invertible S after {MAX_MATRIX_DRAWS} draws"
    )))
}

/// Builds the key pair for explicit secret parts.
pub fn keypair_from_parts(code: PrivateCode, s: QcMatrix, q: QcMatrix) -> Result<KeyPair> {
    let spec = code.spec;
    let private = PrivateKey::from_parts(code, s, q)?;
    let g = build_g(&private.code)?;
    let gpub = private.s_inv.mul(&g)?.mul(&private.q_inv)?;
    Ok(KeyPair {
        private,
        public: PublicKey { spec, gpub },
    })
}

/// Deterministic key generation from a seed.
pub fn keygen(spec: &CodeSpec, seed: u64) -> Result<KeyPair> {
    spec.validate()?;
    let [code_seed, s_seed, q_seed] = sub_seeds::<3>(seed);
    let code = sample_difference_family(spec, code_seed)?;
    let s = generate_s(spec, s_seed)?;
    let q = generate_q(spec, q_seed)?;
    keypair_from_parts(code, s, q)
}

/// Uniform weight-`t` vector of length `n` by a partial Fisher-Yates shuffle.
pub fn random_error_vector(n: usize, t: usize, seed: u64) -> Result<BitVector> {
    if t > n {
        return Err(Error::param(format!("weight {t} exceeds length {n}")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut positions: Vec<usize> = (0..n).collect();
    for i in 0..t {
        let j = rng.gen_range(i..n);
        positions.swap(i, j);
    }
    BitVector::from_positions(n, &positions[..t])
}

/// `x = u · G' + e`, charging the Winograd product plus `n` additions.
pub fn encrypt(
    public: &PublicKey,
    u: &BitVector,
    e: &BitVector,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    encrypt_with_generator(&public.spec, &public.gpub, u, e, counter)
}

/// Encryption under the systematic form of the public key.
pub fn encrypt_systematic(
    public: &SystematicPublicKey,
    u: &BitVector,
    e: &BitVector,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    encrypt_with_generator(&public.spec, &public.generator(), u, e, counter)
}

fn encrypt_with_generator(
    spec: &CodeSpec,
    g: &QcMatrix,
    u: &BitVector,
    e: &BitVector,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    if u.len() != spec.k() {
        return Err(Error::param(format!("cleartext must have k = {} bits", spec.k())));
    }
    if e.len() != spec.n() {
        return Err(Error::param(format!("error vector must have n = {} bits", spec.n())));
    }
    let mut x = g.vec_mul_winograd(u, WinogradConfig::default(), counter)?;
    x.xor_assign(e)?;
    counter.add(spec.n() as u64);
    Ok(x)
}

/// Decodes `x · Q`, returning it with the secret codeword and the number of
/// iterations used.
fn decode_transformed(
    private: &PrivateKey,
    x: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> Result<(BitVector, BitVector, usize)> {
    let spec = private.spec();
    if x.len() != spec.n() {
        return Err(Error::param(format!("ciphertext must have n = {} bits", spec.n())));
    }
    let x_prime = private.q.vec_mul_sparse(x, counter)?;
    let out = bf_decode(&private.parity, &x_prime, cfg, counter)?;
    if !out.success {
        return Err(Error::DecodeFailure {
            iterations: out.iterations_used,
        });
    }
    Ok((x_prime, out.codeword, out.iterations_used))
}

/// Recovers `u` from `x = u · G' + e`.
pub fn decrypt(
    private: &PrivateKey,
    x: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    decrypt_traced(private, x, cfg, counter).map(|(u, _)| u)
}

/// [`decrypt`], also returning the decoder iteration count.
pub fn decrypt_traced(
    private: &PrivateKey,
    x: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> Result<(BitVector, usize)> {
    let (_, codeword, iterations) = decode_transformed(private, x, cfg, counter)?;
    let u_scrambled = codeword.slice(0, private.spec().k());
    let u = private
        .s
        .vec_mul_winograd(&u_scrambled, WinogradConfig::default(), counter)?;
    Ok((u, iterations))
}

/// Decryption for ciphertexts produced under the systematic public key: the
/// error is mapped back through `Q^{-1}` and the cleartext is read off the
/// first `k` positions of `x + e`.
pub fn decrypt_systematic(
    private: &PrivateKey,
    x: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> Result<BitVector> {
    let (x_prime, codeword, _) = decode_transformed(private, x, cfg, counter)?;
    let eq = x_prime.xor(&codeword)?;
    let e = private.q_inv.vec_mul(&eq)?;
    Ok(x.xor(&e)?.slice(0, private.spec().k()))
}

/// Decoder configuration with the threshold-optimal flipping threshold.
pub fn default_decoder_config(spec: &CodeSpec) -> Result<DecoderConfig> {
    let report = optimize_b(&Ensemble::from_spec(spec), Exec::default())?;
    Ok(DecoderConfig::new(report.b_opt))
}

/// `floor(t_th / m)`, the largest `t'` whose worst-case load `t'·m` stays
/// within the decoding threshold.
pub fn default_t_prime(spec: &CodeSpec) -> Result<usize> {
    let report = optimize_b(&Ensemble::from_spec(spec), Exec::default())?;
    Ok(max_intentional_errors(report.t_th, spec.m))
}

/// Outcome of a batch of seeded encrypt/decrypt roundtrips.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialSummary {
    pub trials: usize,
    pub successes: usize,
    /// Decoder reported failure.
    pub decode_failures: usize,
    /// Decoder reported success but the cleartext differed.
    pub mismatches: usize,
    /// Mean decoder iterations over successful decodes.
    pub mean_iterations: f64,
}

impl TrialSummary {
    pub fn failure_rate(&self) -> f64 {
        (self.trials - self.successes) as f64 / self.trials.max(1) as f64
    }
}

/// Runs `trials` independent roundtrips with `t'` errors each. Trial `i`
/// draws its cleartext and error vector from sub-seeds of `(seed, i)`.
pub fn run_trials(
    keys: &KeyPair,
    t_prime: usize,
    trials: usize,
    seed: u64,
    cfg: &DecoderConfig,
    exec: Exec,
) -> Result<TrialSummary> {
    let spec = keys.public.spec;
    if t_prime > spec.n() {
        return Err(Error::param("t' exceeds code length"));
    }
    cfg.validate(spec.d_v)?;
    let results = exec.map_range(trials, |i| -> Result<(bool, bool, usize)> {
        let [u_seed, e_seed] = sub_seeds::<2>(seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let u = BitVector::random(spec.k(), &mut ChaCha20Rng::seed_from_u64(u_seed));
        let e = random_error_vector(spec.n(), t_prime, e_seed)?;
        let x = encrypt(&keys.public, &u, &e, &mut OpCounter::new())?;
        let mut counter = OpCounter::new();
        match decrypt_traced(&keys.private, &x, cfg, &mut counter) {
            Ok((v, iterations)) => Ok((true, v == u, iterations)),
            Err(Error::DecodeFailure { iterations }) => Ok((false, false, iterations)),
            Err(e) => Err(e),
        }
    });
    let mut summary = TrialSummary {
        trials,
        successes: 0,
        decode_failures: 0,
        mismatches: 0,
        mean_iterations: 0.0,
    };
    let mut iterations = 0usize;
    for r in results {
        let (decoded, correct, iters) = r?;
        match (decoded, correct) {
            (true, true) => summary.successes += 1,
            (true, false) => summary.mismatches += 1,
            _ => summary.decode_failures += 1,
        }
        if decoded {
            iterations += iters;
        }
    }
    let decoded = summary.successes + summary.mismatches;
    if decoded > 0 {
        summary.mean_iterations = iterations as f64 / decoded as f64;
    }
    Ok(summary)
}
