//! Information rates of i.i.d. Shannon strategies under optimal decoding.
//!
//! The strategy draws `U ~ Bernoulli(p)` each slot and sends `X = U * S`.
//! Since `p(y_i, s_{i+1} | u_i, s_i)` does not depend on `i`, the battery is a
//! hidden Markov state and `(1/n) I(U^n; Y^n)` can be estimated from one long
//! sample path as
//!
//! ```text
//! (1/n) [ log p(y^n | u^n) - log p(y^n) ]
//! ```
//!
//! with both likelihoods computed by forward filters over `S`: one with `U`
//! marginalized, one conditioned on the drawn `u^n`. Beliefs are renormalized
//! every slot and the log normalizers accumulated, so nothing underflows.

use alloc::vec::Vec;

use crate::channel::{simulate, ChannelParams, IidStrategy};
use crate::error::{check_probability, Error, Result};
use crate::golden;
use crate::rates::RateResult;
use crate::rng::derive_seed;

/// Shortest trace [`estimate_information_rate`] accepts.
pub const MIN_SLOTS: usize = 1_000;
/// Default trace length.
pub const DEFAULT_SLOTS: usize = 1_000_000;
/// Batches used for the standard error.
pub const SEGMENTS: usize = 10;
/// Largest `n` for [`exact_iid_rate`].
pub const MAX_EXACT_SLOTS: usize = 12;
/// Grid step of the coarse search in [`optimize_oiid`].
pub const GRID_STEP: f64 = 0.05;
/// Bracket width of the golden-section refinement in [`optimize_oiid`].
pub const REFINE_TOLERANCE: f64 = 1e-3;

/// Posterior law of the battery level, `[Pr[S = 0], Pr[S = 1]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HmmBelief(pub [f64; 2]);

impl HmmBelief {
    /// Certainly empty.
    pub const EMPTY: Self = HmmBelief([1.0, 0.0]);

    /// Belief with `Pr[S = 1] = full`.
    pub fn full_with(full: f64) -> Self {
        HmmBelief([1.0 - full, full])
    }

    /// `Pr[S = 1]`.
    pub fn full(&self) -> f64 {
        self.0[1]
    }

    /// Advances one slot after seeing output `y`, where `u_weights[u]` is the
    /// prior weight of auxiliary symbol `u` (`[1-p, p]` when marginalizing,
    /// an indicator when `u` is known). Returns `p(y | past)`.
    pub fn advance(&mut self, u_weights: [f64; 2], y: u8, q: f64) -> f64 {
        let mut next = [0.0; 2];
        for (s, &belief) in self.0.iter().enumerate() {
            if belief == 0.0 {
                continue;
            }
            for (u, &wu) in u_weights.iter().enumerate() {
                let x = (u * s) as u8;
                if wu == 0.0 || x != y {
                    continue;
                }
                let w = belief * wu;
                // harvesting follows transmission; the battery caps at one unit
                let refill = if x == 0 && s == 1 { 1.0 } else { q };
                next[1] += w * refill;
                next[0] += w * (1.0 - refill);
            }
        }
        let likelihood = next[0] + next[1];
        if likelihood > 0.0 {
            self.0 = [next[0] / likelihood, next[1] / likelihood];
        }
        likelihood
    }
}

/// Estimated information rate of one i.i.d. strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorResult {
    /// Bits per channel use.
    pub rate: f64,
    /// Standard error from batch means over [`SEGMENTS`] segments.
    pub std_error: f64,
    /// Trace length.
    pub slots: usize,
    /// Strategy parameter.
    pub p: f64,
    /// `-(1/n) log2 p(y^n)`.
    pub output_entropy: f64,
    /// `-(1/n) log2 p(y^n | u^n)`.
    pub conditional_entropy: f64,
    /// Set when `p = 0` or `q = 0`: the output is constant and the rate is 0.
    pub degenerate: bool,
}

/// Per-slot log-likelihoods of one sample path, summed over segments.
struct PathLikelihoods {
    /// `(sum log2 p(y|past), sum log2 p(y|u, past))` per segment.
    segments: Vec<(f64, f64)>,
    lengths: Vec<usize>,
}

fn sample_path(p: f64, q: f64, slots: usize, segments: usize, seed: u64) -> Result<PathLikelihoods> {
    let params = ChannelParams::new(q)?;
    let mut strategy = IidStrategy::new(p, derive_seed(seed, 0))?;
    let trace = simulate(params, &mut strategy, slots, derive_seed(seed, 1))?;
    let mut marginal = HmmBelief::EMPTY;
    let mut conditional = HmmBelief::EMPTY;
    let prior = [1.0 - p, p];
    let mut out = PathLikelihoods { segments: Vec::with_capacity(segments), lengths: Vec::with_capacity(segments) };
    let base = slots / segments;
    let mut start = 0;
    for k in 0..segments {
        let end = if k + 1 == segments { slots } else { start + base };
        let (mut lm, mut lc) = (0.0, 0.0);
        for i in start..end {
            let y = trace.inputs[i] as u8;
            let u = strategy.choices[i] as usize;
            let mut known = [0.0; 2];
            known[u] = 1.0;
            lm += libm::log2(marginal.advance(prior, y, q));
            lc += libm::log2(conditional.advance(known, y, q));
        }
        out.segments.push((lm, lc));
        out.lengths.push(end - start);
        start = end;
    }
    Ok(out)
}

/// Single-path information density `(1/n) log2 [p(y^n|u^n) / p(y^n)]` for any
/// `n >= 1`, starting from an empty battery. Its mean over seeds is exactly
/// `(1/n) I(U^n; Y^n)`.
pub fn information_density(p: f64, q: f64, slots: usize, seed: u64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    if slots == 0 {
        return Err(Error::Domain { name: "slots", value: 0.0 });
    }
    let path = sample_path(p, q, slots, 1, seed)?;
    let (lm, lc) = path.segments[0];
    Ok((lc - lm) / slots as f64)
}

/// Estimates `lim (1/n) I(U^n; Y^n)` for `Pr[U = 1] = p` from one seeded trace
/// of `slots` channel uses.
pub fn estimate_information_rate(p: f64, q: f64, slots: usize, seed: u64) -> Result<EstimatorResult> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    if slots < MIN_SLOTS {
        return Err(Error::Domain { name: "slots", value: slots as f64 });
    }
    if p == 0.0 || q == 0.0 {
        return Ok(EstimatorResult {
            rate: 0.0,
            std_error: 0.0,
            slots,
            p,
            output_entropy: 0.0,
            conditional_entropy: 0.0,
            degenerate: true,
        });
    }
    let path = sample_path(p, q, slots, SEGMENTS, seed)?;
    let n = slots as f64;
    let (lm, lc) = path.segments.iter().fold((0.0, 0.0), |(a, b), (m, c)| (a + m, b + c));
    let batch: Vec<f64> = path.segments.iter().zip(&path.lengths).map(|((m, c), &len)| (c - m) / len as f64).collect();
    let mean = batch.iter().sum::<f64>() / SEGMENTS as f64;
    let var = batch.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (SEGMENTS - 1) as f64;
    Ok(EstimatorResult {
        rate: (lc - lm) / n,
        std_error: libm::sqrt(var / SEGMENTS as f64),
        slots,
        p,
        output_entropy: -lm / n,
        conditional_entropy: -lc / n,
        degenerate: false,
    })
}

/// Exact `(1/n) I(U^n; Y^n)` by enumerating every input and arrival sequence.
///
/// `initial_full` is `Pr[S_1 = 1]`; 0 matches the estimator's empty start.
pub fn exact_iid_rate(p: f64, q: f64, slots: usize, initial_full: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    check_probability("initial_full", initial_full)?;
    if slots == 0 {
        return Err(Error::Domain { name: "slots", value: 0.0 });
    }
    if slots > MAX_EXACT_SLOTS {
        return Err(Error::TooLarge { n: slots, max: MAX_EXACT_SLOTS });
    }
    let outputs = 1usize << slots;
    let mut p_y = alloc::vec![0.0; outputs];
    let mut conditional_entropy = 0.0;
    // (output prefix, battery) -> probability, given the input word
    let mut layer: Vec<f64> = Vec::new();
    let mut next: Vec<f64> = Vec::new();
    for word in 0..outputs {
        let ones = word.count_ones() as i32;
        let p_u = libm::pow(p, ones as f64) * libm::pow(1.0 - p, (slots as i32 - ones) as f64);
        if p_u == 0.0 {
            continue;
        }
        layer.clear();
        layer.extend_from_slice(&[1.0 - initial_full, initial_full]);
        for i in 0..slots {
            let u = (word >> i) & 1;
            next.clear();
            next.resize(layer.len() * 2, 0.0);
            for (idx, &w) in layer.iter().enumerate() {
                if w == 0.0 {
                    continue;
                }
                let (prefix, s) = (idx >> 1, idx & 1);
                let x = u * s;
                let refill = if x == 0 && s == 1 { 1.0 } else { q };
                let base = ((prefix << 1) | x) << 1;
                next[base | 1] += w * refill;
                next[base] += w * (1.0 - refill);
            }
            core::mem::swap(&mut layer, &mut next);
        }
        let mut h = 0.0;
        for y in 0..outputs {
            let py = layer[y << 1] + layer[(y << 1) | 1];
            if py > 0.0 {
                h -= py * libm::log2(py);
                p_y[y] += p_u * py;
            }
        }
        conditional_entropy += p_u * h;
    }
    let output_entropy: f64 = p_y.iter().filter(|&&w| w > 0.0).map(|&w| -w * libm::log2(w)).sum();
    Ok((output_entropy - conditional_entropy).max(0.0) / slots as f64)
}

/// Maximizes the estimated rate over `p`: a grid with step [`GRID_STEP`], then
/// golden-section refinement around the best grid point. Every evaluation
/// reuses `seed`, so the objective varies smoothly with `p`.
pub fn optimize_oiid(q: f64, slots: usize, seed: u64) -> Result<RateResult> {
    check_probability("q", q)?;
    if slots < MIN_SLOTS {
        return Err(Error::Domain { name: "slots", value: slots as f64 });
    }
    if q == 0.0 {
        return Ok(RateResult { rate: 0.0, argmax: 0.0, iterations: 0, tolerance: 0.0, std_error: 0.0 });
    }
    let steps = libm::round(1.0 / GRID_STEP) as usize;
    let mut best: Option<EstimatorResult> = None;
    for k in 0..=steps {
        let est = estimate_information_rate(k as f64 * GRID_STEP, q, slots, seed)?;
        if best.map_or(true, |b| est.rate > b.rate) {
            best = Some(est);
        }
    }
    let mut best = best.expect("grid is nonempty");
    let lo = (best.p - GRID_STEP).max(0.0);
    let hi = (best.p + GRID_STEP).min(1.0);
    let mut failure = None;
    let refined = golden::maximize(
        |p| match estimate_information_rate(p, q, slots, seed) {
            Ok(est) => est.rate,
            Err(e) => {
                failure = Some(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        REFINE_TOLERANCE,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    if refined.value > best.rate {
        best = estimate_information_rate(refined.argmax, q, slots, seed)?;
    }
    Ok(RateResult {
        rate: best.rate,
        argmax: best.p,
        iterations: steps + 1 + refined.iterations,
        tolerance: refined.bracket,
        std_error: best.std_error,
    })
}
