//! Sweep configuration: defaults, an optional TOML file, then flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{io_at, CliError, Result};

/// Parameters of a rate-vs-`q` sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub q_start: f64,
    pub q_end: f64,
    pub q_step: f64,
    /// Largest frame length scanned for the modulo scheme.
    pub n_max: usize,
    /// Trace length per OIID estimate.
    pub oiid_slots: usize,
    /// Codec Monte Carlo symbols per grid point; 0 skips the check.
    pub mc_symbols: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            q_start: 0.05,
            q_end: 0.95,
            q_step: 0.05,
            n_max: ehchan_core::modulo::DEFAULT_MAX_FRAME_LEN,
            oiid_slots: ehchan_core::oiid::DEFAULT_SLOTS,
            mc_symbols: 1_000_000,
            seed: 1,
        }
    }
}

/// Keys accepted in a config file; names match the long flags.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub q_start: Option<f64>,
    pub q_end: Option<f64>,
    pub q_step: Option<f64>,
    pub n_max: Option<usize>,
    pub oiid_slots: Option<usize>,
    pub mc_symbols: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_at(path))?;
        toml::from_str(&text).map_err(|e| CliError::ConfigFile { path: path.to_owned(), reason: e.to_string() })
    }

    /// Layers `self` over the defaults, then `flags` over that.
    pub fn merge(&self, flags: &FileConfig) -> SweepConfig {
        let d = SweepConfig::default();
        SweepConfig {
            q_start: flags.q_start.or(self.q_start).unwrap_or(d.q_start),
            q_end: flags.q_end.or(self.q_end).unwrap_or(d.q_end),
            q_step: flags.q_step.or(self.q_step).unwrap_or(d.q_step),
            n_max: flags.n_max.or(self.n_max).unwrap_or(d.n_max),
            oiid_slots: flags.oiid_slots.or(self.oiid_slots).unwrap_or(d.oiid_slots),
            mc_symbols: flags.mc_symbols.or(self.mc_symbols).unwrap_or(d.mc_symbols),
            seed: flags.seed.or(self.seed).unwrap_or(d.seed),
        }
    }
}

fn invalid(field: &'static str, reason: impl Into<String>) -> CliError {
    CliError::InvalidConfig { field, reason: reason.into() }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [("q-start", self.q_start), ("q-end", self.q_end)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(invalid(field, format!("{v} is not a probability")));
            }
        }
        if self.q_end < self.q_start {
            return Err(invalid("q-end", format!("{} is below q-start {}", self.q_end, self.q_start)));
        }
        if !(self.q_step > 0.0) || !self.q_step.is_finite() {
            return Err(invalid("q-step", format!("{} must be positive", self.q_step)));
        }
        if self.n_max == 0 {
            return Err(invalid("n-max", "must be at least 1"));
        }
        if self.oiid_slots < ehchan_core::oiid::MIN_SLOTS {
            return Err(invalid("oiid-slots", format!("must be at least {}", ehchan_core::oiid::MIN_SLOTS)));
        }
        Ok(())
    }

    /// The `q` grid, strictly increasing, with points rounded to 1e-12 so
    /// that `0.05 * 3` prints as `0.15`.
    pub fn grid(&self) -> Vec<f64> {
        let count = ((self.q_end - self.q_start) / self.q_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| ((self.q_start + k as f64 * self.q_step) * 1e12).round() / 1e12)
            .map(|q| q.min(1.0))
            .collect()
    }
}

/// Parses counts written either as integers or in scientific notation (`1e6`).
pub fn parse_count(s: &str) -> std::result::Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a count"))?;
    if v < 0.0 || v.fract() != 0.0 || v > u32::MAX as f64 * 1e3 {
        return Err(format!("`{s}` is not a whole nonnegative count"));
    }
    Ok(v as usize)
}
