use alloc::vec::Vec;

use crate::channel::{BatteryState, BinaryTrace, ChannelParams, Policy, Simulator};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, sim_rng};
use crate::timing::TimingTrace;

use super::Pmf;

/// Slot-by-slot encoder for the modulo scheme.
///
/// After each transmitted symbol it waits for the next energy arrival, reads
/// the idle time `Z` off the arrival history, and sends the next nonzero
/// symbol `V = ((u - Z) mod N) + 1` slots after that arrival.
#[derive(Debug, Clone)]
pub struct ModuloEncoder<'a> {
    symbols: &'a [usize],
    signs: Option<&'a [bool]>,
    frame_len: usize,
    next: usize,
    last_one: u64,
    arrival: Option<u64>,
    target: Option<u64>,
    seen: usize,
    started: bool,
    idle_times: Vec<u64>,
}

impl<'a> ModuloEncoder<'a> {
    /// Binary encoder for `symbols`, each in `0..frame_len`.
    pub fn new(symbols: &'a [usize], frame_len: usize) -> Result<Self> {
        if frame_len == 0 {
            return Err(Error::Domain { name: "frame_len", value: 0.0 });
        }
        if let Some((index, &value)) = symbols.iter().enumerate().find(|(_, &u)| u >= frame_len) {
            return Err(Error::SymbolOutOfRange { index, value, frame_len });
        }
        Ok(Self {
            symbols,
            signs: None,
            frame_len,
            next: 0,
            last_one: 0,
            arrival: None,
            target: None,
            seen: 0,
            started: false,
            idle_times: Vec::with_capacity(symbols.len()),
        })
    }

    /// Ternary encoder: symbol `n` is sent as `+1` if `signs[n]`, else `-1`.
    pub fn with_signs(symbols: &'a [usize], signs: &'a [bool], frame_len: usize) -> Result<Self> {
        if signs.len() != symbols.len() {
            return Err(Error::Domain { name: "sign bit count", value: signs.len() as f64 });
        }
        let mut encoder = Self::new(symbols, frame_len)?;
        encoder.signs = Some(signs);
        Ok(encoder)
    }

    /// True once every symbol has been sent.
    pub fn finished(&self) -> bool {
        self.next >= self.symbols.len()
    }

    /// Idle times `Z` observed for the symbols sent so far.
    pub fn idle_times(&self) -> &[u64] {
        &self.idle_times
    }
}

impl Policy for ModuloEncoder<'_> {
    fn choose(&mut self, slot: usize, state: BatteryState, history: &BinaryTrace) -> Result<i8> {
        if !self.started {
            self.started = true;
            if state == BatteryState::Full {
                self.arrival = Some(0);
            }
        }
        while self.seen < slot {
            if history.arrivals[self.seen] == 1 && self.arrival.is_none() {
                self.arrival = Some(self.seen as u64 + 1);
            }
            self.seen += 1;
        }
        if self.finished() {
            return Ok(0);
        }
        if let (None, Some(at)) = (self.target, self.arrival) {
            let n = self.frame_len as u64;
            let idle = at - self.last_one;
            let u = self.symbols[self.next] as u64;
            let wait = (u + n - idle % n) % n + 1;
            self.idle_times.push(idle);
            self.target = Some(at + wait);
        }
        let current = slot as u64 + 1;
        if self.target != Some(current) {
            return Ok(0);
        }
        if state != BatteryState::Full {
            return Err(Error::InfeasibleInput { slot: Some(slot), state: state.level(), symbol: 1 });
        }
        let symbol = match self.signs {
            Some(signs) if !signs[self.next] => -1,
            _ => 1,
        };
        self.last_one = current;
        self.arrival = None;
        self.target = None;
        self.next += 1;
        Ok(symbol)
    }
}

fn run_encoder(mut encoder: ModuloEncoder<'_>, params: ChannelParams, seed: u64) -> Result<BinaryTrace> {
    let mut sim = Simulator::new(params, seed);
    while !encoder.finished() {
        sim.step(&mut encoder)?;
    }
    Ok(sim.into_trace())
}

/// Sends `symbols` over a simulated channel; the trace ends on the last 1.
pub fn encode(symbols: &[usize], params: ChannelParams, frame_len: usize, seed: u64) -> Result<BinaryTrace> {
    run_encoder(ModuloEncoder::new(symbols, frame_len)?, params, seed)
}

/// Ternary variant of [`encode`] carrying one sign bit per symbol.
pub fn encode_ternary(
    symbols: &[usize],
    signs: &[bool],
    params: ChannelParams,
    frame_len: usize,
    seed: u64,
) -> Result<BinaryTrace> {
    run_encoder(ModuloEncoder::with_signs(symbols, signs, frame_len)?, params, seed)
}

fn durations(trace: &BinaryTrace) -> impl Iterator<Item = (u64, i8)> + '_ {
    let mut last = 0u64;
    trace.transmissions().map(move |i| {
        let slot = i as u64 + 1;
        let t = slot - last;
        last = slot;
        (t, trace.inputs[i])
    })
}

/// Receiver: `(T - 1) mod N` for each gap between nonzero outputs.
pub fn decode(trace: &BinaryTrace, frame_len: usize) -> Result<Vec<usize>> {
    Ok(decode_ternary(trace, frame_len)?.0)
}

/// Receiver for the ternary channel: residues plus sign bits (`true` for `+1`).
pub fn decode_ternary(trace: &BinaryTrace, frame_len: usize) -> Result<(Vec<usize>, Vec<bool>)> {
    if frame_len == 0 {
        return Err(Error::Domain { name: "frame_len", value: 0.0 });
    }
    let n = frame_len as u64;
    Ok(durations(trace).map(|(t, x)| (((t - 1) % n) as usize, x > 0)).unzip())
}

/// Receiver working on the timing representation.
pub fn decode_timing(timing: &TimingTrace, frame_len: usize) -> Result<Vec<usize>> {
    if frame_len == 0 {
        return Err(Error::Domain { name: "frame_len", value: 0.0 });
    }
    let n = frame_len as u64;
    Ok(timing.symbols.iter().map(|s| ((s.duration - 1) % n) as usize).collect())
}

/// Message bytes as bits, most significant first.
pub fn unpack_bits_msb_first(bytes: &[u8]) -> Vec<bool> {
    bytes.iter().flat_map(|&b| (0..8).rev().map(move |k| (b >> k) & 1 == 1)).collect()
}

/// Inverse of [`unpack_bits_msb_first`]; a partial last byte is zero-padded.
pub fn pack_bits_msb_first(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| chunk.iter().enumerate().fold(0u8, |acc, (k, &b)| acc | (u8::from(b) << (7 - k))))
        .collect()
}

/// Counts from a Monte Carlo run of the codec. Merging is associative, so
/// blocks may run in any order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CodecStats {
    /// Symbols sent.
    pub symbols: u64,
    /// Symbols decoded wrongly.
    pub errors: u64,
    /// Channel uses consumed (sum of durations).
    pub slots: u64,
    /// Sum of squared durations.
    pub sum_sq_duration: u64,
}

impl CodecStats {
    /// Combines two runs.
    pub fn merge(self, other: Self) -> Self {
        Self {
            symbols: self.symbols + other.symbols,
            errors: self.errors + other.errors,
            slots: self.slots + other.slots,
            sum_sq_duration: self.sum_sq_duration + other.sum_sq_duration,
        }
    }

    /// Empirical `E[T]`.
    pub fn mean_duration(&self) -> f64 {
        self.slots as f64 / self.symbols as f64
    }

    /// Standard error of [`CodecStats::mean_duration`].
    pub fn duration_std_error(&self) -> f64 {
        let n = self.symbols as f64;
        let mean = self.mean_duration();
        let var = (self.sum_sq_duration as f64 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
        libm::sqrt(var / n)
    }

    /// Bits per channel use when each symbol carries `bits_per_symbol`.
    pub fn empirical_rate(&self, bits_per_symbol: f64) -> f64 {
        bits_per_symbol / self.mean_duration()
    }
}

/// Draws `symbols` message symbols from `pmf`, encodes, decodes and counts.
///
/// Message and channel randomness come from separate streams derived from
/// `seed`. Each block starts from an empty battery.
pub fn run_codec_block(q: f64, pmf: &Pmf, symbols: usize, seed: u64) -> Result<CodecStats> {
    let params = ChannelParams::new(q)?;
    let frame_len = pmf.len();
    let mut rng = sim_rng(derive_seed(seed, 0));
    let message: Vec<usize> = (0..symbols).map(|_| pmf.sample(&mut rng)).collect();
    let trace = encode(&message, params, frame_len, derive_seed(seed, 1))?;
    let decoded = decode(&trace, frame_len)?;
    let errors = message.iter().zip(&decoded).filter(|(a, b)| a != b).count() + message.len().abs_diff(decoded.len());
    let (slots, sum_sq_duration) = durations(&trace).fold((0, 0), |(s, s2), (t, _)| (s + t, s2 + t * t));
    Ok(CodecStats { symbols: symbols as u64, errors: errors as u64, slots, sum_sq_duration })
}
