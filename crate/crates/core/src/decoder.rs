//! Gallager bit-flipping decoding over the sparse private parity-check matrix.

use crate::bits::BitVector;
use crate::circulant::OpCounter;
use crate::code::PrivateCode;
use crate::error::{Error, Result};

/// Adjacency lists of the Tanner graph of H = [H_0 | ... | H_{n0-1}].
#[derive(Debug, Clone)]
pub struct ParityCheck {
    n: usize,
    r: usize,
    d_v: usize,
    d_c: usize,
    /// `r × d_c` variable indices, row-major.
    check_vars: Vec<u32>,
    /// `n × d_v` check indices, row-major.
    var_checks: Vec<u32>,
}

impl ParityCheck {
    pub fn new(code: &PrivateCode) -> Self {
        let spec = code.spec;
        let (p, n0) = (spec.p, spec.n0);
        let d_v = code.h.iter().map(|h| h.weight()).max().unwrap_or(0);
        assert!(
            code.h.iter().all(|h| h.weight() == d_v),
            "all blocks must share one column weight"
        );
        let d_c = n0 * d_v;
        let mut check_vars = Vec::with_capacity(p * d_c);
        for row in 0..p {
            for (i, h) in code.h.iter().enumerate() {
                check_vars.extend(h.support().iter().map(|&s| (i * p + (s + row) % p) as u32));
            }
        }
        let mut var_checks = Vec::with_capacity(n0 * p * d_v);
        for h in &code.h {
            for col in 0..p {
                var_checks.extend(h.support().iter().map(|&s| ((col + p - s) % p) as u32));
            }
        }
        ParityCheck {
            n: n0 * p,
            r: p,
            d_v,
            d_c,
            check_vars,
            var_checks,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn r(&self) -> usize {
        self.r
    }

    #[inline]
    pub fn d_v(&self) -> usize {
        self.d_v
    }

    #[inline]
    pub fn d_c(&self) -> usize {
        self.d_c
    }

    #[inline]
    pub fn check(&self, c: usize) -> &[u32] {
        &self.check_vars[c * self.d_c..(c + 1) * self.d_c]
    }

    #[inline]
    pub fn var(&self, v: usize) -> &[u32] {
        &self.var_checks[v * self.d_v..(v + 1) * self.d_v]
    }

    /// `H · word^T` as an `r`-bit vector.
    pub fn syndrome(&self, word: &BitVector) -> Result<BitVector> {
        if word.len() != self.n {
            return Err(Error::param(format!(
                "word length {} does not match code length {}",
                word.len(),
                self.n
            )));
        }
        let mut s = BitVector::zeros(self.r);
        for v in word.iter_ones() {
            for &c in self.var(v) {
                s.flip(c as usize);
            }
        }
        Ok(s)
    }

    /// Counted cost of one decoding iteration: `r(2 d_c - 1) + 3 n d_v`.
    pub fn iteration_cost(&self) -> u64 {
        (self.r * (2 * self.d_c - 1) + 3 * self.n * self.d_v) as u64
    }
}

/// How a variable node decides to flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FlipRule {
    /// Flip when at least `b` of the `d_v` checks of the bit are unsatisfied.
    #[default]
    TotalCount,
    /// Per-edge extrinsic messages: the message towards check `c` is flipped
    /// when at least `b` of the other `d_v - 1` checks disagree with the
    /// received bit.
    Extrinsic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoderConfig {
    pub b: usize,
    pub max_iterations: usize,
    /// Per-iteration thresholds; iterations past its end fall back to `b`.
    pub b_schedule: Option<Vec<usize>>,
    pub rule: FlipRule,
}

pub const DEFAULT_MAX_ITERATIONS: usize = 10;

impl DecoderConfig {
    pub fn new(b: usize) -> Self {
        DecoderConfig {
            b,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            b_schedule: None,
            rule: FlipRule::TotalCount,
        }
    }

    pub fn with_max_iterations(mut self, iters: usize) -> Self {
        self.max_iterations = iters;
        self
    }

    pub fn with_schedule(mut self, schedule: Vec<usize>) -> Self {
        self.b_schedule = Some(schedule);
        self
    }

    pub fn with_rule(mut self, rule: FlipRule) -> Self {
        self.rule = rule;
        self
    }

    /// Checks `ceil(d_v/2) <= b <= d_v - 1` for every threshold in use.
    pub fn validate(&self, d_v: usize) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::param("max_iterations must be positive"));
        }
        let lo = d_v.div_ceil(2).max(1);
        let hi = d_v.saturating_sub(1).max(lo);
        let schedule = self.b_schedule.as_deref().unwrap_or(&[]);
        if schedule.len() > self.max_iterations {
            return Err(Error::param("b schedule longer than max_iterations"));
        }
        for &b in std::iter::once(&self.b).chain(schedule) {
            if b < lo || b > hi {
                return Err(Error::param(format!(
                    "flipping threshold {b} outside [{lo}, {hi}] for d_v = {d_v}"
                )));
            }
        }
        Ok(())
    }

    fn threshold_at(&self, iteration: usize) -> usize {
        self.b_schedule
            .as_ref()
            .and_then(|s| s.get(iteration).copied())
            .unwrap_or(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub codeword: BitVector,
    pub iterations_used: usize,
    /// True iff every parity check of `codeword` is satisfied.
    pub success: bool,
}

/// Bit-flipping decoding with synchronous updates.
///
/// Stops as soon as the syndrome vanishes or after `max_iterations`
/// iterations. A failed decode is reported through `success = false`.
pub fn bf_decode(
    h: &ParityCheck,
    received: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> Result<DecodeOutcome> {
    if received.len() != h.n {
        return Err(Error::param(format!(
            "received length {} does not match code length {}",
            received.len(),
            h.n
        )));
    }
    cfg.validate(h.d_v)?;
    match cfg.rule {
        FlipRule::TotalCount => Ok(decode_total(h, received, cfg, counter)),
        FlipRule::Extrinsic => Ok(decode_extrinsic(h, received, cfg, counter)),
    }
}

fn decode_total(
    h: &ParityCheck,
    received: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> DecodeOutcome {
    let mut word = received.clone();
    let mut syn: Vec<u8> = vec![0; h.r];
    for v in word.iter_ones() {
        for &c in h.var(v) {
            syn[c as usize] ^= 1;
        }
    }
    let mut unsatisfied = syn.iter().filter(|&&s| s == 1).count();
    let mut iterations = 0;
    let mut flips = Vec::new();
    while unsatisfied > 0 && iterations < cfg.max_iterations {
        let b = cfg.threshold_at(iterations);
        iterations += 1;
        counter.add(h.iteration_cost());
        flips.clear();
        for v in 0..h.n {
            let count: usize = h.var(v).iter().map(|&c| syn[c as usize] as usize).sum();
            if count >= b {
                flips.push(v);
            }
        }
        for &v in &flips {
            word.flip(v);
            for &c in h.var(v) {
                let s = &mut syn[c as usize];
                *s ^= 1;
                if *s == 1 {
                    unsatisfied += 1;
                } else {
                    unsatisfied -= 1;
                }
            }
        }
    }
    DecodeOutcome {
        codeword: word,
        iterations_used: iterations,
        success: unsatisfied == 0,
    }
}

fn decode_extrinsic(
    h: &ParityCheck,
    received: &BitVector,
    cfg: &DecoderConfig,
    counter: &mut OpCounter,
) -> DecodeOutcome {
    let (n, dv) = (h.n, h.d_v);
    let y: Vec<u8> = received.to_bools().into_iter().map(u8::from).collect();
    // Variable-to-check messages, indexed like `var_checks`.
    let mut to_check: Vec<u8> = (0..n * dv).map(|e| y[e / dv]).collect();
    let mut estimate = received.clone();
    let mut iterations = 0;
    let mut check_sum = vec![0u8; h.r];
    let mut syndrome_ok = h.syndrome(&estimate).expect("length checked").is_zero();
    while !syndrome_ok && iterations < cfg.max_iterations {
        let b = cfg.threshold_at(iterations);
        iterations += 1;
        counter.add(h.iteration_cost());
        check_sum.iter_mut().for_each(|s| *s = 0);
        for (e, &m) in to_check.iter().enumerate() {
            check_sum[h.var_checks[e] as usize] ^= m;
        }
        for v in 0..n {
            let edges = v * dv..(v + 1) * dv;
            // A check disagrees when its extrinsic parity differs from y_v.
            let disagree: Vec<u8> = edges
                .clone()
                .map(|e| check_sum[h.var_checks[e] as usize] ^ to_check[e] ^ y[v])
                .collect();
            let total: usize = disagree.iter().map(|&d| d as usize).sum();
            for (k, e) in edges.enumerate() {
                let others = total - disagree[k] as usize;
                to_check[e] = y[v] ^ u8::from(others >= b);
            }
            estimate.set(v, (y[v] ^ u8::from(total >= b)) == 1);
        }
        syndrome_ok = h.syndrome(&estimate).expect("length checked").is_zero();
    }
    DecodeOutcome {
        codeword: estimate,
        iterations_used: iterations,
        success: syndrome_ok,
    }
}
