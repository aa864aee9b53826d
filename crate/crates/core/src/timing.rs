//! Timing-channel view of a binary trace.
//!
//! Slots are numbered from 1. A virtual transmitted 1 sits at slot 0, and the
//! battery level at slot 1 plays the role of its arrival: a full initial
//! battery counts as an arrival in slot 0, an empty one as none.
//!
//! For the `n`th transmitted 1 at slot `p_n`:
//!
//! - `T_n = p_n - p_{n-1}` (duration),
//! - `Z_n` = slots from `p_{n-1}` to the first arrival at or after it
//!   (an arrival in slot `p_{n-1}` itself gives `Z_n = 0`),
//! - `V_n = T_n - Z_n >= 1` (the wait the transmitter chose).
//!
//! Slots after the last 1 are kept as `tail_slots`.

use alloc::vec::Vec;

use crate::channel::{battery_update, BatteryState, BinaryTrace, ChannelParams};
use crate::error::{Error, Result};

/// One transmitted nonzero symbol seen as a timing-channel use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TimingSymbol {
    /// Slots since the previous nonzero symbol (`T`).
    pub duration: u64,
    /// Slots from the previous nonzero symbol to the next energy arrival (`Z`).
    pub idle: u64,
    /// Slots waited after that arrival (`V`).
    pub wait: u64,
    /// Sign of the symbol; always `+1` on the binary channel.
    pub sign: i8,
}

impl TimingSymbol {
    /// Binary-channel symbol from idle time and wait.
    pub fn new(idle: u64, wait: u64) -> Self {
        Self { duration: idle + wait, idle, wait, sign: 1 }
    }

    /// Same with an explicit sign.
    pub fn signed(idle: u64, wait: u64, sign: i8) -> Self {
        Self { sign, ..Self::new(idle, wait) }
    }

    fn check(&self, index: usize) -> Result<()> {
        if self.wait < 1 {
            return Err(Error::InconsistentTrace { index, reason: "wait must be at least one slot" });
        }
        if self.duration != self.idle + self.wait {
            return Err(Error::InconsistentTrace { index, reason: "duration differs from idle + wait" });
        }
        if self.sign != 1 && self.sign != -1 {
            return Err(Error::InconsistentTrace { index, reason: "sign must be +1 or -1" });
        }
        Ok(())
    }
}

/// A channel history as a sequence of timing symbols.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TimingTrace {
    /// One entry per transmitted nonzero symbol.
    pub symbols: Vec<TimingSymbol>,
    /// Slots after the last nonzero symbol.
    pub tail_slots: u64,
}

impl TimingTrace {
    /// Length in slots of the corresponding binary trace.
    pub fn total_slots(&self) -> u64 {
        self.symbols.iter().map(|s| s.duration).sum::<u64>() + self.tail_slots
    }
}

/// Converts a slot trace to its timing representation.
///
/// The battery level of the first slot decides whether slot 0 carries the
/// virtual arrival. Fails if the trace breaks the battery dynamics.
pub fn binary_to_timing(trace: &BinaryTrace) -> Result<TimingTrace> {
    trace.validate()?;
    let mut symbols = Vec::new();
    let mut last_one: u64 = 0;
    let mut arrival: Option<u64> = match trace.states.first() {
        Some(1) => Some(0),
        _ => None,
    };
    for (i, (&x, &e)) in trace.inputs.iter().zip(&trace.arrivals).enumerate() {
        let slot = i as u64 + 1;
        if x != 0 {
            let at = arrival.ok_or(Error::InconsistentTrace { index: i, reason: "transmission before any arrival" })?;
            let idle = at - last_one;
            let duration = slot - last_one;
            let wait = duration - idle;
            if wait < 1 {
                return Err(Error::InconsistentTrace { index: i, reason: "wait shorter than one slot" });
            }
            symbols.push(TimingSymbol { duration, idle, wait, sign: x.signum() });
            last_one = slot;
            arrival = None;
        }
        if e == 1 && arrival.is_none() {
            arrival = Some(slot);
        }
    }
    Ok(TimingTrace { symbols, tail_slots: trace.len() as u64 - last_one })
}

/// Rebuilds a slot trace from timing symbols.
///
/// Only the arrival that ends each idle period is recoverable, so the
/// reconstruction places exactly that arrival and no others. Transmissions
/// land on the same slots as in any trace that produced `timing`.
pub fn timing_to_binary(timing: &TimingTrace, params: &ChannelParams) -> Result<BinaryTrace> {
    let initial = params.initial_battery();
    for (n, symbol) in timing.symbols.iter().enumerate() {
        symbol.check(n)?;
    }
    if let Some(first) = timing.symbols.first() {
        match initial {
            BatteryState::Full if first.idle != 0 => {
                return Err(Error::InconsistentTrace { index: 0, reason: "full initial battery needs zero first idle time" })
            }
            BatteryState::Empty if first.idle == 0 => {
                return Err(Error::InconsistentTrace { index: 0, reason: "empty initial battery needs positive first idle time" })
            }
            _ => {}
        }
    }
    let len = usize::try_from(timing.total_slots())
        .map_err(|_| Error::InconsistentTrace { index: 0, reason: "trace too long" })?;
    let mut inputs = alloc::vec![0i8; len];
    let mut arrivals = alloc::vec![0u8; len];
    let mut last_one: u64 = 0;
    for s in &timing.symbols {
        let arrival_slot = last_one + s.idle;
        if arrival_slot >= 1 {
            arrivals[(arrival_slot - 1) as usize] = 1;
        }
        last_one += s.duration;
        inputs[(last_one - 1) as usize] = s.sign;
    }
    let mut states = Vec::with_capacity(len);
    let mut state = initial;
    for i in 0..len {
        states.push(state.level());
        state = battery_update(state, inputs[i], arrivals[i] == 1)
            .map_err(|_| Error::InconsistentTrace { index: i, reason: "reconstruction infeasible" })?;
    }
    Ok(BinaryTrace { inputs, arrivals, states })
}
