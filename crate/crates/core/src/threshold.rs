//! Asymptotic bit-flipping performance: check-node error probabilities,
//! flip and mis-flip probabilities, the residual-error recursion and the
//! decoding threshold search.
//!
//! The residual error count `q` is real-valued, so binomial coefficients are
//! evaluated through `ln Γ` and are defined whenever both lower arguments
//! exceed `-1`. In particular the `j = 0` term of the "bit in error" kernels
//! survives for `0 < q < 1`, which keeps the recursion from stalling just
//! above zero.

use statrs::function::gamma::ln_gamma;

use crate::code::CodeSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// Residual error level regarded as zero.
pub const DEFAULT_TOLERANCE: f64 = 1e-3;
/// Iteration cap of the recursion.
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;
/// Step size below which the recursion is considered stuck.
pub const STALL_EPSILON: f64 = 1e-12;

/// Regular ensemble shape: code length and node degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ensemble {
    pub n: usize,
    pub d_c: usize,
    pub d_v: usize,
}

impl Ensemble {
    pub fn new(n: usize, d_c: usize, d_v: usize) -> Result<Self> {
        if d_c == 0 || d_c >= n {
            return Err(Error::param("d_c must satisfy 0 < d_c < n"));
        }
        if d_v == 0 {
            return Err(Error::param("d_v must be positive"));
        }
        Ok(Ensemble { n, d_c, d_v })
    }

    pub fn from_spec(spec: &CodeSpec) -> Self {
        Ensemble {
            n: spec.n(),
            d_c: spec.d_c(),
            d_v: spec.d_v,
        }
    }

    pub fn with_errors(self, t: usize) -> EnsembleParams {
        EnsembleParams {
            n: self.n,
            d_c: self.d_c,
            d_v: self.d_v,
            t,
        }
    }

    /// Admissible flipping thresholds `ceil(d_v/2) ..= d_v - 1`.
    pub fn admissible_b(&self) -> std::ops::RangeInclusive<usize> {
        self.d_v.div_ceil(2)..=(self.d_v - 1).max(1)
    }
}

/// Ensemble plus the initial error count `t = q_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnsembleParams {
    pub n: usize,
    pub d_c: usize,
    pub d_v: usize,
    pub t: usize,
}

impl EnsembleParams {
    pub fn ensemble(&self) -> Ensemble {
        Ensemble {
            n: self.n,
            d_c: self.d_c,
            d_v: self.d_v,
        }
    }
}

/// Probabilities that a check is satisfied or not, seen from a correct bit
/// (`cc`, `ci`) or from a bit in error (`ic`, `ii`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckProbabilities {
    pub cc: f64,
    pub ci: f64,
    pub ic: f64,
    pub ii: f64,
}

/// `ln C(a, b)` for real arguments, `None` outside the continuation domain.
fn ln_choose(a: f64, b: f64) -> Option<f64> {
    if b <= -1.0 || a - b <= -1.0 {
        return None;
    }
    Some(ln_gamma(a + 1.0) - ln_gamma(b + 1.0) - ln_gamma(a - b + 1.0))
}

pub fn check_probabilities(params: &EnsembleParams, q: f64) -> Result<CheckProbabilities> {
    let n = params.n as f64;
    if !(0.0..=n).contains(&q) {
        return Err(Error::param(format!("q = {q} outside [0, n]")));
    }
    Ok(check_probabilities_unchecked(params.n, params.d_c, q))
}

fn check_probabilities_unchecked(n: usize, d_c: usize, q: f64) -> CheckProbabilities {
    let (nf, dcf) = (n as f64, d_c as f64);
    let den = ln_choose(nf - 1.0, q);
    let den1 = ln_choose(nf - 1.0, q - 1.0);
    let mut out = CheckProbabilities {
        cc: 0.0,
        ci: 0.0,
        ic: 0.0,
        ii: 0.0,
    };
    for j in 0..d_c {
        let jf = j as f64;
        let a = ln_choose(dcf - 1.0, jf).expect("j < d_c");
        if let Some(den) = den {
            if jf <= q {
                if let Some(b) = ln_choose(nf - dcf, q - jf) {
                    let v = (a + b - den).exp();
                    if j % 2 == 0 {
                        out.cc += v;
                    } else {
                        out.ci += v;
                    }
                }
            }
        }
        if let Some(den1) = den1 {
            if j == 0 || jf <= q - 1.0 + 1e-12 {
                if let Some(b) = ln_choose(nf - dcf, q - 1.0 - jf) {
                    let v = (a + b - den1).exp();
                    if j % 2 == 0 {
                        out.ic += v;
                    } else {
                        out.ii += v;
                    }
                }
            }
        }
    }
    out.cc = out.cc.clamp(0.0, 1.0);
    out.ci = out.ci.clamp(0.0, 1.0);
    out.ic = out.ic.clamp(0.0, 1.0);
    out.ii = out.ii.clamp(0.0, 1.0);
    out
}

/// `sum_{j=b}^{N} C(N, j) x^j y^(N-j)`.
fn binomial_tail(big_n: usize, b: usize, x: f64, y: f64) -> f64 {
    let mut coeff = 1.0f64;
    let mut sum = 0.0;
    for j in 0..=big_n {
        if j >= b {
            sum += coeff * x.powi(j as i32) * y.powi((big_n - j) as i32);
        }
        coeff = coeff * (big_n - j) as f64 / (j + 1) as f64;
    }
    sum
}

fn check_b(params: &EnsembleParams, b: usize) -> Result<()> {
    if params.d_v == 0 || b > params.d_v - 1 {
        return Err(Error::param(format!("b = {b} outside 0..=d_v-1")));
    }
    Ok(())
}

/// Probability that a bit in error is flipped.
pub fn flip_probability(params: &EnsembleParams, b: usize, q: f64) -> Result<f64> {
    check_b(params, b)?;
    let pr = check_probabilities(params, q)?;
    Ok(binomial_tail(params.d_v - 1, b, pr.ic, pr.ii))
}

/// Probability that a correct bit is flipped.
pub fn misflip_probability(params: &EnsembleParams, b: usize, q: f64) -> Result<f64> {
    check_b(params, b)?;
    let pr = check_probabilities(params, q)?;
    Ok(binomial_tail(params.d_v - 1, b, pr.ci, pr.cc))
}

/// Result of running the residual-error recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTrace {
    /// `q_0, q_1, ...` up to the stopping point.
    pub values: Vec<f64>,
    pub converged: bool,
}

fn residual_step(params: &EnsembleParams, b: usize, q: f64) -> f64 {
    let pr = check_probabilities_unchecked(params.n, params.d_c, q);
    let f = binomial_tail(params.d_v - 1, b, pr.ic, pr.ii);
    let g = binomial_tail(params.d_v - 1, b, pr.ci, pr.cc);
    let t = params.t as f64;
    t - t * f + (params.n as f64 - t) * g
}

fn converges(params: &EnsembleParams, b: usize, max_iters: usize, tol: f64) -> bool {
    run_recursion(params, b, max_iters, tol, |_| {})
}

/// Iterates from `q_0 = t` until `q < tol`, the step drops below
/// [`STALL_EPSILON`], `q` exceeds `n` or `max_iters` steps are taken.
fn run_recursion(
    params: &EnsembleParams,
    b: usize,
    max_iters: usize,
    tol: f64,
    mut visit: impl FnMut(f64),
) -> bool {
    let mut q = params.t as f64;
    visit(q);
    if q < tol {
        return true;
    }
    for _ in 0..max_iters {
        let next = residual_step(params, b, q);
        visit(next);
        if next < tol {
            return true;
        }
        if (next - q).abs() < STALL_EPSILON || next > params.n as f64 {
            return false;
        }
        q = next;
    }
    false
}

pub fn iterate_residual(
    params: &EnsembleParams,
    b: usize,
    max_iters: usize,
    tol: f64,
) -> Result<ResidualTrace> {
    check_b(params, b)?;
    let mut values = Vec::new();
    let converged = run_recursion(params, b, max_iters, tol, |q| values.push(q));
    Ok(ResidualTrace { values, converged })
}

/// Largest `t` for which the recursion converges, by exponential bracketing
/// and bisection. Convergence at `t` and divergence at `t + 1` hold for the
/// returned value by construction.
pub fn find_threshold(ensemble: &Ensemble, b: usize) -> Result<usize> {
    let params = ensemble.with_errors(0);
    check_b(&params, b)?;
    let ok = |t: usize| {
        converges(
            &ensemble.with_errors(t),
            b,
            DEFAULT_MAX_ITERATIONS,
            DEFAULT_TOLERANCE,
        )
    };
    let (mut lo, mut hi) = (0usize, 1usize);
    while hi <= ensemble.n && ok(hi) {
        lo = hi;
        hi *= 2;
    }
    hi = hi.min(ensemble.n + 1);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub t_th: usize,
    pub b_opt: usize,
    /// Recursion trace at `t = t_th` with `b = b_opt`.
    pub convergence_trace: Vec<f64>,
    /// Threshold for every admissible `b`, in increasing `b`.
    pub per_b: Vec<(usize, usize)>,
}

/// Maximises the threshold over the admissible flipping thresholds. Ties go
/// to the smaller `b`.
pub fn optimize_b(ensemble: &Ensemble, exec: Exec) -> Result<ThresholdReport> {
    if ensemble.d_v < 2 {
        return Err(Error::param("d_v must be at least 2"));
    }
    let bs: Vec<usize> = ensemble.admissible_b().collect();
    let per_b = exec
        .map(&bs, |&b| find_threshold(ensemble, b).map(|t| (b, t)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let &(b_opt, t_th) = per_b
        .iter()
        .max_by(|x, y| x.1.cmp(&y.1).then(y.0.cmp(&x.0)))
        .expect("at least one admissible b");
    let trace = iterate_residual(
        &ensemble.with_errors(t_th),
        b_opt,
        DEFAULT_MAX_ITERATIONS,
        DEFAULT_TOLERANCE,
    )?;
    Ok(ThresholdReport {
        t_th,
        b_opt,
        convergence_trace: trace.values,
        per_b,
    })
}

/// Largest admissible `t' = floor(t_th / m)`.
pub fn max_intentional_errors(t_th: usize, m: usize) -> usize {
    t_th / m
}
