//! Monte Carlo check of the modulo codec.

use std::fmt;

use ehchan_core::modulo::{best_scheme, optimize_scheme};

use crate::error::Result;
use crate::sweep::codec_monte_carlo;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub q: f64,
    pub frame_len: usize,
    pub symbols: u64,
    pub errors: u64,
    pub empirical_rate: f64,
    pub analytic_rate: f64,
    pub mean_duration: f64,
    pub expected_duration: f64,
}

impl VerifyReport {
    pub fn relative_gap(&self) -> f64 {
        (self.empirical_rate - self.analytic_rate).abs() / self.analytic_rate
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "q                 {}", self.q)?;
        writeln!(f, "frame length N    {}", self.frame_len)?;
        writeln!(f, "symbols           {}", self.symbols)?;
        writeln!(f, "decoding errors   {}", self.errors)?;
        writeln!(f, "mean duration     {:.6} (expected {:.6})", self.mean_duration, self.expected_duration)?;
        writeln!(f, "empirical rate    {:.6}", self.empirical_rate)?;
        writeln!(f, "analytic rate     {:.6}", self.analytic_rate)?;
        write!(f, "relative gap      {:.4}%", 100.0 * self.relative_gap())
    }
}

/// Encodes `symbols` i.i.d. draws from the optimal law for frame length
/// `frame_len` (or the best length up to `n_max` when `None`), decodes them
/// and compares the achieved rate with the analytic one.
pub fn verify(q: f64, frame_len: Option<usize>, n_max: usize, symbols: usize, seed: u64) -> Result<VerifyReport> {
    let scheme = match frame_len {
        Some(n) => optimize_scheme(q, n)?,
        None => best_scheme(q, n_max)?,
    };
    let stats = codec_monte_carlo(q, &scheme.pmf, symbols, seed)?;
    Ok(VerifyReport {
        q,
        frame_len: scheme.frame_len,
        symbols: stats.symbols,
        errors: stats.errors,
        empirical_rate: stats.empirical_rate(scheme.pmf.entropy()),
        analytic_rate: scheme.rate,
        mean_duration: stats.mean_duration(),
        expected_duration: scheme.expected_duration,
    })
}
