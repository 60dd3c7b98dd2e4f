//! Work-factor estimates for generic attacks on the public code.
//!
//! Both attacks are priced with the classical Stern low-weight-codeword
//! search. One iteration picks a random information set, splits it into two
//! halves of `floor(k/2)` positions, and looks for words with exactly `p`
//! errors in each half, none in an `l`-bit collision window and the remaining
//! `w - 2p` in the other redundancy positions. With `L = C(floor(k/2), p)`:
//!
//! ```text
//! cost(p, l) = (n-k)^2 (n+k) / 2          Gaussian elimination
//!            + (floor(k/2) - p + 1)       building the first half
//!            + 2 L max(l, 1)              window sums of both halves
//!            + 2 p (n-k) L^2 / 2^l        checking collisions (p > 0)
//!
//! P(p, l)    = targets · C(floor(k/2), p)^2 C(n-k-l, w-2p) / C(n, w)
//! ```
//!
//! and `WF = min_{p,l} cost / min(1, P)`. `targets` counts how many distinct
//! low-weight words are equally good to find.
//!
//! The decoding attack appends `δ` block-wise cyclic shifts of the ciphertext
//! to the public generator, giving an `(n, k + δ)` code containing `δ` shifted
//! copies of the error vector. The dual attack searches the `(n, r)` dual of
//! the public code for rows of `H·Q^T`, whose weight is at most `m·n0·d_v`;
//! each of the `r` rows is a valid target.

use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Largest `p` tried by the optimizer.
pub const MAX_STERN_P: usize = 10;
/// Largest window `l` tried by the optimizer.
pub const MAX_STERN_L: usize = 120;

/// Low-weight search problem: find one of `targets` weight-`w` words in an
/// `(n, k)` code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AttackModel {
    pub n: usize,
    pub k: usize,
    pub w: usize,
    pub targets: usize,
}

impl AttackModel {
    pub fn new(n: usize, k: usize, w: usize, targets: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::param("attack model needs 0 < k < n"));
        }
        if targets == 0 {
            return Err(Error::param("at least one target required"));
        }
        Ok(AttackModel { n, k, w, targets })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SternParams {
    pub p: usize,
    pub l: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttackKind {
    Decoding,
    Dual,
    Generic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkFactorReport {
    pub log2_wf: f64,
    /// `None` when no parameter choice is feasible (`log2_wf` is infinite).
    pub best_params: Option<SternParams>,
    pub attack_kind: AttackKind,
    /// Optimal number of shifted ciphertexts (decoding attack only).
    pub shifts: Option<usize>,
    pub model: AttackModel,
}

/// `log2 C(a, b)` over integers via a cached `ln a!` table.
struct Log2Binomial {
    ln_fact: Vec<f64>,
}

impl Log2Binomial {
    fn new(max: usize) -> Self {
        let mut ln_fact = Vec::with_capacity(max + 1);
        let mut acc = 0.0f64;
        ln_fact.push(0.0);
        for i in 1..=max {
            acc += (i as f64).ln();
            ln_fact.push(acc);
        }
        Log2Binomial { ln_fact }
    }

    fn get(&self, a: usize, b: usize) -> f64 {
        if b > a {
            return f64::NEG_INFINITY;
        }
        (self.ln_fact[a] - self.ln_fact[b] - self.ln_fact[a - b]) / std::f64::consts::LN_2
    }
}

fn log2_add(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if lo == f64::NEG_INFINITY {
        return hi;
    }
    hi + (1.0 + (lo - hi).exp2()).log2()
}

fn cost_with(table: &Log2Binomial, m: &AttackModel, sp: SternParams) -> f64 {
    let (n, k, w) = (m.n, m.k, m.w);
    let (p, l) = (sp.p, sp.l);
    let half = k / 2;
    if 2 * p > w || p > half || l > n - k || w - 2 * p > n - k - l || w > n {
        return f64::INFINITY;
    }
    let lb_half = table.get(half, p);
    let log_prob = success_with(table, m, sp);
    let r = (n - k) as f64;
    let mut cost = (0.5 * r * r * (n + k) as f64).log2();
    cost = log2_add(cost, ((half + 1 - p) as f64).max(1.0).log2());
    cost = log2_add(cost, 1.0 + lb_half + (l.max(1) as f64).log2());
    if p > 0 {
        cost = log2_add(cost, (2.0 * (p as f64) * r).log2() + 2.0 * lb_half - l as f64);
    }
    cost - log_prob
}

fn success_with(table: &Log2Binomial, m: &AttackModel, sp: SternParams) -> f64 {
    let (n, k, w) = (m.n, m.k, m.w);
    let (p, l) = (sp.p, sp.l);
    if 2 * p > w || l > n - k || w - 2 * p > n - k - l {
        return f64::NEG_INFINITY;
    }
    let lp = 2.0 * table.get(k / 2, p) + table.get(n - k - l, w - 2 * p) - table.get(n, w)
        + (m.targets as f64).log2();
    lp.min(0.0)
}

/// `log2` of the per-iteration success probability, capped at 0.
pub fn stern_success_log2(model: &AttackModel, params: SternParams) -> f64 {
    success_with(&Log2Binomial::new(model.n), model, params)
}

/// `log2` work factor of one Stern parameter choice; `+inf` when infeasible.
pub fn stern_cost(model: &AttackModel, params: SternParams) -> f64 {
    cost_with(&Log2Binomial::new(model.n), model, params)
}

fn optimize(table: &Log2Binomial, model: &AttackModel) -> (f64, Option<SternParams>) {
    let mut best = (f64::INFINITY, None);
    if model.w > model.n {
        return best;
    }
    for p in 0..=MAX_STERN_P.min(model.w / 2) {
        for l in 0..=MAX_STERN_L.min(model.n - model.k) {
            let sp = SternParams { p, l };
            let c = cost_with(table, model, sp);
            if c < best.0 {
                best = (c, Some(sp));
            }
        }
    }
    best
}

/// Stern work factor minimised over `p <= MAX_STERN_P`, `l <= MAX_STERN_L`.
pub fn stern_workfactor(model: &AttackModel) -> WorkFactorReport {
    let (log2_wf, best_params) = optimize(&Log2Binomial::new(model.n), model);
    WorkFactorReport {
        log2_wf,
        best_params,
        attack_kind: AttackKind::Generic,
        shifts: None,
        model: *model,
    }
}

/// Decoding attack with `δ ∈ 1..=p` shifted ciphertexts, `δ` optimised.
pub fn decoding_attack_wf(spec: &CodeSpec, t_prime: usize, exec: Exec) -> Result<WorkFactorReport> {
    if t_prime == 0 {
        return Err(Error::param("t' must be positive"));
    }
    let (n, k) = (spec.n(), spec.k());
    let table = Log2Binomial::new(n);
    let deltas: Vec<usize> = (1..=spec.p).filter(|d| k + d < n).collect();
    let results = exec.map(&deltas, |&d| {
        let model = AttackModel {
            n,
            k: k + d,
            w: t_prime,
            targets: d,
        };
        (optimize(&table, &model), model, d)
    });
    let ((log2_wf, best_params), model, d) = results
        .into_iter()
        .min_by(|a, b| a.0 .0.total_cmp(&b.0 .0).then(a.2.cmp(&b.2)))
        .ok_or_else(|| Error::param("no shift count fits the code"))?;
    Ok(WorkFactorReport {
        log2_wf,
        best_params,
        attack_kind: AttackKind::Decoding,
        shifts: Some(d),
        model,
    })
}

/// Search for rows of `H·Q^T` in the dual of the public code.
pub fn dual_attack_wf(spec: &CodeSpec) -> WorkFactorReport {
    let model = AttackModel {
        n: spec.n(),
        k: spec.r(),
        w: spec.m * spec.d_c(),
        targets: spec.r(),
    };
    let mut report = stern_workfactor(&model);
    report.attack_kind = AttackKind::Dual;
    report
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecurityReport {
    pub decoding: WorkFactorReport,
    pub dual: WorkFactorReport,
}

impl SecurityReport {
    /// The cheaper of the two attacks.
    pub fn log2_level(&self) -> f64 {
        self.decoding.log2_wf.min(self.dual.log2_wf)
    }

    /// True when the dual attack is the binding one.
    pub fn dual_limited(&self) -> bool {
        self.dual.log2_wf < self.decoding.log2_wf
    }
}

pub fn security_level(spec: &CodeSpec, t_prime: usize, exec: Exec) -> Result<SecurityReport> {
    Ok(SecurityReport {
        decoding: decoding_attack_wf(spec, t_prime, exec)?,
        dual: dual_attack_wf(spec),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_zero_costs_one_elimination() {
        let m = AttackModel::new(1000, 500, 0, 1).unwrap();
        let r = stern_workfactor(&m);
        let elim = (0.5f64 * 500.0 * 500.0 * 1500.0).log2();
        assert!(r.log2_wf >= elim && r.log2_wf - elim < 0.01);
    }

    #[test]
    fn monotone_in_weight() {
        let mut prev = 0.0;
        for w in 1..40 {
            let wf = stern_workfactor(&AttackModel::new(1024, 512, w, 1).unwrap()).log2_wf;
            assert!(wf > prev, "w = {w}");
            prev = wf;
        }
    }

    #[test]
    fn report_reevaluates() {
        let m = AttackModel::new(2048, 1024, 30, 4).unwrap();
        let r = stern_workfactor(&m);
        assert_eq!(stern_cost(&m, r.best_params.unwrap()), r.log2_wf);
    }

    #[test]
    fn infeasible_weight() {
        let m = AttackModel::new(20, 10, 21, 1).unwrap();
        let r = stern_workfactor(&m);
        assert!(r.log2_wf.is_infinite() && r.best_params.is_none());
    }
}
