//! Closed-form rates for the unit-battery binary channel.
//!
//! | rate   | objective over `p in [0, 1]`                 |
//! |--------|----------------------------------------------|
//! | NIID   | `H(p*pi) - p*H(pi)`, `pi = q/(p + q - p*q)`  |
//! | ZS     | `H(p*q) - p*H(q)`                            |
//! | UB     | `q*H(p) / (q + p*(1 - q))`                   |
//!
//! The infinite-storage capacity has no free parameter: `H(q)` up to
//! `q = 1/2`, then 1.

use crate::entropy::binary_entropy;
use crate::error::{check_probability, Result};
use crate::golden;

/// Bracket width in `p` for every closed-form optimizer.
pub const P_TOLERANCE: f64 = 1e-9;

/// An optimized rate and where it was found.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateResult {
    /// Bits per channel use.
    pub rate: f64,
    /// Maximizing strategy parameter `p`.
    pub argmax: f64,
    /// Optimizer iterations.
    pub iterations: usize,
    /// Achieved bracket width in `p`.
    pub tolerance: f64,
    /// Statistical standard error of `rate`; zero for exact objectives.
    pub std_error: f64,
}

/// Stationary `Pr[S = 1]` of the battery under an i.i.d. strategy with
/// `Pr[U = 1] = p`. Defined as 0 when `p = q = 0`.
pub fn stationary_full_probability(p: f64, q: f64) -> f64 {
    let denom = p + q - p * q;
    if denom <= 0.0 {
        0.0
    } else {
        q / denom
    }
}

/// `I(U;Y)` of the naive i.i.d. Shannon strategy, decoding with the
/// stationary battery law.
pub fn niid_rate(p: f64, q: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_probability("q", q)?;
    Ok(niid_objective(p, q))
}

fn niid_objective(p: f64, q: f64) -> f64 {
    let full = stationary_full_probability(p, q);
    binary_entropy(p * full) - p * binary_entropy(full)
}

/// Zero-storage objective `H(pq) - p H(q)`.
pub fn czs_objective(p: f64, q: f64) -> f64 {
    binary_entropy(p * q) - p * binary_entropy(q)
}

/// Genie upper-bound objective `q H(p) / (q + p(1 - q))`, 0 at `q = 0`.
pub fn ub_objective(p: f64, q: f64) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    q * binary_entropy(p) / (q + p * (1.0 - q))
}

fn optimize(q: f64, objective: impl Fn(f64, f64) -> f64) -> Result<RateResult> {
    check_probability("q", q)?;
    let m = golden::maximize(|p| objective(p, q), 0.0, 1.0, P_TOLERANCE);
    Ok(RateResult { rate: m.value, argmax: m.argmax, iterations: m.iterations, tolerance: m.bracket, std_error: 0.0 })
}

/// Best naive i.i.d. Shannon strategy rate.
pub fn optimize_niid(q: f64) -> Result<RateResult> {
    optimize(q, niid_objective)
}

/// Capacity with no energy storage.
pub fn optimize_czs(q: f64) -> Result<RateResult> {
    optimize(q, czs_objective)
}

/// Upper bound from revealing the idle time to the receiver.
pub fn optimize_ub(q: f64) -> Result<RateResult> {
    optimize(q, ub_objective)
}

/// Capacity with an unlimited battery.
pub fn cis_rate(q: f64) -> Result<f64> {
    check_probability("q", q)?;
    Ok(if q <= 0.5 { binary_entropy(q) } else { 1.0 })
}
