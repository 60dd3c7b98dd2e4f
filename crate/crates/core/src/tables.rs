//! Parameter-grid sweeps over the analysis models.

use crate::code::CodeSpec;
use crate::complexity::{
    decryption_ops_per_bit, encryption_ops_per_bit, key_size_bytes, PerBit,
    DEFAULT_BF_ITERATIONS,
};
use crate::error::Result;
use crate::exec::Exec;
use crate::security::{decoding_attack_wf, dual_attack_wf};
use crate::threshold::{max_intentional_errors, optimize_b, Ensemble};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grid {
    pub n0s: Vec<usize>,
    pub d_vs: Vec<usize>,
    pub ps: Vec<usize>,
    /// Weight of Q.
    pub m: usize,
    /// Bit-flipping iterations assumed for decryption cost.
    pub iterations: usize,
}

impl Default for Grid {
    /// `p = 4096, 5120, ..., 16384`, `n0 ∈ {3, 4}`, `d_v ∈ {13, 15}`, `m = 7`.
    fn default() -> Self {
        Grid {
            n0s: vec![3, 4],
            d_vs: vec![13, 15],
            ps: (4..=16).map(|i| i * 1024).collect(),
            m: 7,
            iterations: DEFAULT_BF_ITERATIONS,
        }
    }
}

impl Grid {
    fn spec(&self, n0: usize, d_v: usize, p: usize) -> CodeSpec {
        CodeSpec {
            n0,
            p,
            d_v,
            m: self.m,
            t_prime: 0,
        }
    }

    fn points(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for &n0 in &self.n0s {
            for &dv in &self.d_vs {
                for &p in &self.ps {
                    out.push((n0, dv, p));
                }
            }
        }
        out
    }

    fn points_n0(&self) -> Vec<(usize, usize)> {
        self.n0s
            .iter()
            .flat_map(|&n0| self.ps.iter().map(move |&p| (n0, p)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeySizeRow {
    pub n0: usize,
    pub p: usize,
    pub bytes: usize,
}

/// Systematic public key sizes.
pub fn key_size_table(grid: &Grid) -> Vec<KeySizeRow> {
    grid.points_n0()
        .into_iter()
        .map(|(n0, p)| KeySizeRow {
            n0,
            p,
            bytes: key_size_bytes(&grid.spec(n0, 1, p), true),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EncryptionRow {
    pub n0: usize,
    pub p: usize,
    pub ops_per_bit: f64,
}

pub fn encryption_table(grid: &Grid, divisor: PerBit) -> Vec<EncryptionRow> {
    grid.points_n0()
        .into_iter()
        .map(|(n0, p)| EncryptionRow {
            n0,
            p,
            ops_per_bit: encryption_ops_per_bit(&grid.spec(n0, 1, p), divisor),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub n0: usize,
    pub d_v: usize,
    pub p: usize,
    pub t_th: usize,
    pub b_opt: usize,
    /// `floor(t_th / m)`.
    pub t_prime: usize,
}

/// Thresholds with optimal `b`, grid points evaluated in parallel.
pub fn threshold_table(grid: &Grid, exec: Exec) -> Result<Vec<ThresholdRow>> {
    exec.map(&grid.points(), |&(n0, d_v, p)| {
        let spec = grid.spec(n0, d_v, p);
        let r = optimize_b(&Ensemble::from_spec(&spec), Exec::Sequential)?;
        Ok(ThresholdRow {
            n0,
            d_v,
            p,
            t_th: r.t_th,
            b_opt: r.b_opt,
            t_prime: max_intentional_errors(r.t_th, grid.m),
        })
    })
    .into_iter()
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecryptionRow {
    pub n0: usize,
    pub d_v: usize,
    pub p: usize,
    pub ops_per_bit: f64,
}

pub fn decryption_table(grid: &Grid, divisor: PerBit) -> Vec<DecryptionRow> {
    grid.points()
        .into_iter()
        .map(|(n0, d_v, p)| DecryptionRow {
            n0,
            d_v,
            p,
            ops_per_bit: decryption_ops_per_bit(&grid.spec(n0, d_v, p), grid.iterations, divisor),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityRow {
    pub n0: usize,
    pub d_v: usize,
    pub p: usize,
    pub t_prime: usize,
    pub decoding_log2: f64,
    pub shifts: usize,
    pub dual_log2: f64,
    /// `min(decoding, dual)`.
    pub level_log2: f64,
}

/// Work factors for each threshold row, using its `t'`.
pub fn security_table(grid: &Grid, thresholds: &[ThresholdRow], exec: Exec) -> Result<Vec<SecurityRow>> {
    thresholds
        .iter()
        .map(|row| {
            let spec = grid.spec(row.n0, row.d_v, row.p);
            let dec = decoding_attack_wf(&spec, row.t_prime.max(1), exec)?;
            let dual = dual_attack_wf(&spec);
            Ok(SecurityRow {
                n0: row.n0,
                d_v: row.d_v,
                p: row.p,
                t_prime: row.t_prime,
                decoding_log2: dec.log2_wf,
                shifts: dec.shifts.unwrap_or(0),
                dual_log2: dual.log2_wf,
                level_log2: dec.log2_wf.min(dual.log2_wf),
            })
        })
        .collect()
}
