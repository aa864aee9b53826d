//! Modulo-`N` timing scheme.
//!
//! The auxiliary symbol `U` takes values in `0..N`. After observing the idle
//! time `Z`, the transmitter waits `V = ((U - Z) mod N) + 1` slots past the
//! arrival, so the duration `T = V + Z` satisfies `(T - 1) mod N = U` and the
//! receiver reads `U` off without error. The rate is `H(U) / E[T]` with
//!
//! ```text
//! E[T] = 1 + E[Z] + sum_u p(u) a_u,    a_u = E[(u - Z) mod N]
//! ```
//!
//! where only the folded law of `Z mod N` enters `a_u`. Maximizing the ratio
//! over `p(u)` is a concave-over-affine fractional program, solved here by
//! Dinkelbach iteration with the Gibbs distribution as the inner maximizer.
//! The ternary channel adds one noise-free sign bit per transmitted symbol,
//! which shifts the numerator by one.

mod codec;

pub use codec::{
    decode, decode_ternary, decode_timing, encode, encode_ternary, pack_bits_msb_first, run_codec_block,
    unpack_bits_msb_first, CodecStats, ModuloEncoder,
};

use alloc::vec::Vec;

use crate::entropy::entropy;
use crate::error::{check_probability, Error, Result};
use crate::rng::uniform;

/// Dinkelbach stops once successive ratios differ by at most this much.
pub const DINKELBACH_TOLERANCE: f64 = 1e-10;
/// Iteration cap; hitting it is reported as [`Error::NonConvergence`].
pub const DINKELBACH_MAX_ITERATIONS: usize = 10_000;
/// Default upper end of the frame-length scan.
pub const DEFAULT_MAX_FRAME_LEN: usize = 64;

/// Probability vector over `0..N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    weights: Vec<f64>,
}

impl Pmf {
    /// Validates nonnegativity and normalization (within `1e-12`).
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain { name: "frame_len", value: 0.0 });
        }
        if let Some(&w) = weights.iter().find(|w| !(**w >= 0.0)) {
            return Err(Error::Domain { name: "weight", value: w });
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain { name: "total probability", value: total });
        }
        Ok(Self { weights })
    }

    /// Uniform law over `0..n`.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain { name: "frame_len", value: 0.0 });
        }
        Ok(Self { weights: alloc::vec![1.0 / n as f64; n] })
    }

    /// `p_u ∝ 2^(-lambda * cost_u)`.
    pub fn gibbs(costs: &[f64], lambda: f64) -> Result<Self> {
        let floor = costs.iter().copied().fold(f64::INFINITY, f64::min);
        let mut weights: Vec<f64> = costs.iter().map(|&a| libm::exp2(-lambda * (a - floor))).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        Self::new(weights)
    }

    /// Probabilities, indexed by symbol.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Alphabet size `N`.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    /// Always false; a pmf has at least one symbol.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Entropy in bits.
    pub fn entropy(&self) -> f64 {
        entropy(&self.weights)
    }

    /// `sum_u p_u * values_u`.
    pub fn expectation(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(p, v)| p * v).sum()
    }

    /// Inverse-CDF sample.
    pub fn sample<R: rand_core::RngCore + ?Sized>(&self, rng: &mut R) -> usize {
        let x = uniform(rng);
        let mut acc = 0.0;
        for (u, &w) in self.weights.iter().enumerate() {
            acc += w;
            if x < acc {
                return u;
            }
        }
        // rounding left x above the cumulative total
        self.weights.iter().rposition(|&w| w > 0.0).unwrap_or(0)
    }
}

/// Optimized modulo scheme for one frame length.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeRate {
    /// Frame length `N`.
    pub frame_len: usize,
    /// Optimal auxiliary law.
    pub pmf: Pmf,
    /// Bits per channel use: `(H(pmf) + bonus) / expected_duration`.
    pub rate: f64,
    /// `E[T]` in slots.
    pub expected_duration: f64,
    /// Converged Dinkelbach parameter.
    pub lambda: f64,
    /// Dinkelbach iterations.
    pub iterations: usize,
    /// Set for `q = 0`, where no energy ever arrives and the rate is 0.
    pub degenerate: bool,
}

/// Mean idle time `E[Z] = (1 - q)/q` of a geometric arrival wait.
pub fn expected_idle(q: f64) -> f64 {
    (1.0 - q) / q
}

fn check_scheme_args(q: f64, frame_len: usize) -> Result<()> {
    check_probability("q", q)?;
    if frame_len == 0 {
        return Err(Error::Domain { name: "frame_len", value: 0.0 });
    }
    Ok(())
}

/// Law of `Z mod N` for `Z ~ Geometric(q)` on `{0, 1, ...}`.
pub fn folded_noise(q: f64, frame_len: usize) -> Result<Vec<f64>> {
    check_scheme_args(q, frame_len)?;
    if q == 0.0 {
        return Err(Error::Domain { name: "q", value: q });
    }
    // 1 - (1-q)^N without cancellation for small q
    let mass = -libm::expm1(frame_len as f64 * libm::log1p(-q));
    Ok((0..frame_len).map(|r| q * libm::pow(1.0 - q, r as f64) / mass).collect())
}

/// Expected extra wait per symbol, `a_u = E[(u - Z) mod N]`.
pub fn wait_cost(q: f64, frame_len: usize) -> Result<Vec<f64>> {
    let folded = folded_noise(q, frame_len)?;
    let n = frame_len;
    Ok((0..n).map(|u| folded.iter().enumerate().map(|(r, pr)| pr * ((u + n - r) % n) as f64).sum()).collect())
}

/// `E[T]` for auxiliary law `pmf` under arrival probability `q`.
pub fn expected_duration(q: f64, pmf: &Pmf) -> Result<f64> {
    let costs = wait_cost(q, pmf.len())?;
    Ok(1.0 + expected_idle(q) + pmf.expectation(&costs))
}

/// Best binary-channel rate for frame length `N`.
pub fn optimize_scheme(q: f64, frame_len: usize) -> Result<SchemeRate> {
    optimize_with_bonus(q, frame_len, 0.0)
}

/// Best ternary-channel rate for frame length `N`: `(H(U) + 1) / E[T]`.
pub fn optimize_ternary(q: f64, frame_len: usize) -> Result<SchemeRate> {
    optimize_with_bonus(q, frame_len, 1.0)
}

/// Exhaustive scan of `N = 1..=max_frame_len` for the binary scheme; the
/// smallest `N` wins ties.
pub fn best_scheme(q: f64, max_frame_len: usize) -> Result<SchemeRate> {
    best_over_frames(q, max_frame_len, optimize_scheme)
}

/// Same scan for the ternary scheme.
pub fn best_ternary(q: f64, max_frame_len: usize) -> Result<SchemeRate> {
    best_over_frames(q, max_frame_len, optimize_ternary)
}

fn best_over_frames(q: f64, max_frame_len: usize, solve: fn(f64, usize) -> Result<SchemeRate>) -> Result<SchemeRate> {
    check_scheme_args(q, max_frame_len)?;
    let mut best = solve(q, 1)?;
    for n in 2..=max_frame_len {
        let candidate = solve(q, n)?;
        if candidate.rate > best.rate {
            best = candidate;
        }
    }
    Ok(best)
}

fn optimize_with_bonus(q: f64, frame_len: usize, bonus: f64) -> Result<SchemeRate> {
    check_scheme_args(q, frame_len)?;
    if q == 0.0 {
        return Ok(SchemeRate {
            frame_len,
            pmf: Pmf::uniform(frame_len)?,
            rate: 0.0,
            expected_duration: f64::INFINITY,
            lambda: 0.0,
            iterations: 0,
            degenerate: true,
        });
    }
    let costs = wait_cost(q, frame_len)?;
    let fixed = 1.0 + expected_idle(q);
    let solution = dinkelbach(&costs, fixed, bonus)?;
    let expected_duration = fixed + solution.pmf.expectation(&costs);
    let rate = (solution.pmf.entropy() + bonus) / expected_duration;
    Ok(SchemeRate {
        frame_len,
        pmf: solution.pmf,
        rate,
        expected_duration,
        lambda: solution.lambda,
        iterations: solution.iterations,
        degenerate: false,
    })
}

/// Converged state of a Dinkelbach run.
#[derive(Debug, Clone, PartialEq)]
pub struct DinkelbachSolution {
    /// Maximizing law.
    pub pmf: Pmf,
    /// Optimal ratio.
    pub lambda: f64,
    /// Iterations taken.
    pub iterations: usize,
}

/// Maximizes `(H(p) + bonus) / (fixed + sum_u p_u costs_u)` over the simplex.
///
/// For a given `lambda` the linearized problem `H(p) - lambda * sum p_u a_u`
/// is solved by `p_u ∝ 2^(-lambda a_u)`; `lambda` is then replaced by the
/// ratio that law achieves. Starts from `lambda = 0` (uniform law).
pub fn dinkelbach(costs: &[f64], fixed: f64, bonus: f64) -> Result<DinkelbachSolution> {
    let ratio = |p: &Pmf| (p.entropy() + bonus) / (fixed + p.expectation(costs));
    let mut lambda = 0.0;
    for iteration in 1..=DINKELBACH_MAX_ITERATIONS {
        let next = ratio(&Pmf::gibbs(costs, lambda)?);
        let step = (next - lambda).abs();
        lambda = next;
        if step <= DINKELBACH_TOLERANCE {
            return Ok(DinkelbachSolution { pmf: Pmf::gibbs(costs, lambda)?, lambda, iterations: iteration });
        }
    }
    Err(Error::NonConvergence { iterations: DINKELBACH_MAX_ITERATIONS })
}

/// Value of the linearized problem at `lambda`:
/// `max_p [H(p) + bonus - lambda (fixed + sum p_u a_u)]`, which is zero at
/// the optimal ratio.
pub fn parametric_value(costs: &[f64], fixed: f64, bonus: f64, lambda: f64) -> f64 {
    let partition: f64 = costs.iter().map(|&a| libm::exp2(-lambda * a)).sum();
    libm::log2(partition) + bonus - lambda * fixed
}
