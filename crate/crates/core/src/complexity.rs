//! Closed-form operation counts for key storage, encryption and decryption.
//!
//! Every count here equals what [`OpCounter`](crate::OpCounter) records for
//! the corresponding real computation.

use crate::circulant::{direct_cost, WinogradConfig};
use crate::code::CodeSpec;

/// Default bit-flipping iteration count assumed for decryption cost.
pub const DEFAULT_BF_ITERATIONS: usize = 10;

/// Public key size in bytes. Systematic keys store only the `k0 × 1`
/// redundancy column, otherwise all `k0 × n0` first rows are stored.
pub fn key_size_bytes(spec: &CodeSpec, systematic: bool) -> usize {
    let blocks = if systematic {
        spec.k0()
    } else {
        spec.k0() * spec.n0
    };
    (blocks * spec.p).div_ceil(8)
}

/// Cost of one Winograd vector-circulant product split by phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WinogradCost {
    /// Evaluation phase, depends on the vector only.
    pub evaluation: u64,
    /// Multiplication and interpolation phases.
    pub multiplication: u64,
}

impl WinogradCost {
    pub fn total(&self) -> u64 {
        self.evaluation + self.multiplication
    }
}

/// `C(s) = 3 C(s/2) + 3s/2` while `s` splits, `ceil(s²/2)` otherwise.
pub fn winograd_cost(size: usize, cutoff: usize) -> u64 {
    winograd_cost_split(size, WinogradConfig::new(cutoff)).total()
}

pub fn winograd_cost_split(size: usize, cfg: WinogradConfig) -> WinogradCost {
    if !cfg.splits(size) {
        return WinogradCost {
            evaluation: 0,
            multiplication: direct_cost(size),
        };
    }
    let h = size / 2;
    let sub = winograd_cost_split(h, cfg);
    WinogradCost {
        evaluation: 3 * sub.evaluation + h as u64,
        multiplication: 3 * sub.multiplication + size as u64,
    }
}

/// Cost of `v · M` for a `rows × cols` block matrix with shared evaluation:
/// one evaluation per input block, one multiplication per block and
/// `(rows - 1)·cols·p` additions to combine partial products.
pub fn block_product_cost(rows: usize, cols: usize, p: usize, cfg: WinogradConfig) -> u64 {
    let c = winograd_cost_split(p, cfg);
    rows as u64 * c.evaluation
        + (rows * cols) as u64 * c.multiplication
        + ((rows - 1) * cols * p) as u64
}

/// Which length normalises a per-bit figure.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum PerBit {
    /// Divide by `k`, the cleartext length.
    #[default]
    Cleartext,
    /// Divide by `n`, the ciphertext length.
    Ciphertext,
}

impl PerBit {
    fn divisor(self, spec: &CodeSpec) -> f64 {
        match self {
            PerBit::Cleartext => spec.k() as f64,
            PerBit::Ciphertext => spec.n() as f64,
        }
    }
}

/// Total encryption operations: `u · G'` plus `n` additions for the error.
pub fn encryption_ops(spec: &CodeSpec, cfg: WinogradConfig) -> u64 {
    block_product_cost(spec.k0(), spec.n0, spec.p, cfg) + spec.n() as u64
}

pub fn encryption_ops_per_bit(spec: &CodeSpec, divisor: PerBit) -> f64 {
    encryption_ops(spec, WinogradConfig::default()) as f64 / divisor.divisor(spec)
}

/// Operations of one synchronous bit-flipping iteration: `5 n d_v - r`.
pub fn bf_iteration_cost(spec: &CodeSpec) -> u64 {
    (5 * spec.n() * spec.d_v - spec.r()) as u64
}

/// Breakdown of the decryption cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecryptionOps {
    /// `x · Q`: `n·m`.
    pub transform: u64,
    pub decoding: u64,
    /// `u' · S` through Winograd.
    pub descramble: u64,
}

impl DecryptionOps {
    pub fn total(&self) -> u64 {
        self.transform + self.decoding + self.descramble
    }
}

pub fn decryption_ops(spec: &CodeSpec, iterations: usize, cfg: WinogradConfig) -> DecryptionOps {
    DecryptionOps {
        transform: (spec.n() * spec.m) as u64,
        decoding: iterations as u64 * bf_iteration_cost(spec),
        descramble: block_product_cost(spec.k0(), spec.k0(), spec.p, cfg),
    }
}

pub fn decryption_ops_per_bit(spec: &CodeSpec, iterations: usize, divisor: PerBit) -> f64 {
    decryption_ops(spec, iterations, WinogradConfig::default()).total() as f64
        / divisor.divisor(spec)
}
