//! Slot-level model of the harvesting transmitter.
//!
//! Each slot runs in a fixed order: the transmitter observes its battery
//! level `S`, sends a symbol `X` (costing `|X|` units), then harvests an
//! arrival `E ~ Bernoulli(q)`. The battery holds at most one unit:
//!
//! ```text
//! S' = min(S - |X| + E, 1)
//! ```
//!
//! Because harvesting follows transmission, an arrival in the same slot as a
//! transmitted 1 refills the battery for the next slot.

use alloc::vec::Vec;

use crate::error::{check_probability, Error, Result};
use crate::rng::{bernoulli, sim_rng, SimRng};

/// Energy arrival probability and starting battery level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    q: f64,
    initial_battery: BatteryState,
}

impl ChannelParams {
    /// Channel with arrival probability `q` and an empty battery at the first slot.
    pub fn new(q: f64) -> Result<Self> {
        check_probability("q", q)?;
        Ok(Self { q, initial_battery: BatteryState::Empty })
    }

    /// Overrides the battery level at the first slot.
    pub fn with_initial_battery(mut self, initial_battery: BatteryState) -> Self {
        self.initial_battery = initial_battery;
        self
    }

    /// Energy arrival probability.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Battery level at the first slot.
    pub fn initial_battery(&self) -> BatteryState {
        self.initial_battery
    }
}

/// Unit battery level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BatteryState {
    /// No stored energy.
    #[default]
    Empty,
    /// One stored unit.
    Full,
}

impl BatteryState {
    /// Stored energy, 0 or 1.
    pub fn level(self) -> u8 {
        match self {
            BatteryState::Empty => 0,
            BatteryState::Full => 1,
        }
    }

    /// Inverse of [`BatteryState::level`].
    pub fn from_level(level: u8) -> Option<Self> {
        match level {
            0 => Some(BatteryState::Empty),
            1 => Some(BatteryState::Full),
            _ => None,
        }
    }
}

/// Applies one slot of battery dynamics.
///
/// `symbol` is the channel input (`-1`, `0` or `1`; nonzero symbols cost one
/// unit). Sending a nonzero symbol from an empty battery is an error, never
/// clamped.
pub fn battery_update(state: BatteryState, symbol: i8, arrival: bool) -> Result<BatteryState> {
    let cost = match symbol {
        0 => 0,
        -1 | 1 => 1,
        _ => return Err(Error::InfeasibleInput { slot: None, state: state.level(), symbol }),
    };
    if cost > state.level() {
        return Err(Error::InfeasibleInput { slot: None, state: state.level(), symbol });
    }
    let next = (state.level() - cost + u8::from(arrival)).min(1);
    Ok(if next == 1 { BatteryState::Full } else { BatteryState::Empty })
}

/// A channel history, one entry per slot in each vector.
///
/// `states[i]` is the battery level observed before transmitting in slot `i`,
/// `inputs[i]` the transmitted symbol (equal to the received one) and
/// `arrivals[i]` the energy harvested after transmission.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BinaryTrace {
    /// Channel symbols in `{-1, 0, 1}` (`{0, 1}` for the binary channel).
    pub inputs: Vec<i8>,
    /// Energy arrivals in `{0, 1}`.
    pub arrivals: Vec<u8>,
    /// Battery levels in `{0, 1}`.
    pub states: Vec<u8>,
}

impl BinaryTrace {
    /// Number of slots.
    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    /// True for a zero-slot trace.
    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Battery level after the final slot, if the trace is nonempty.
    pub fn final_state(&self) -> Option<BatteryState> {
        let last = self.len().checked_sub(1)?;
        let state = BatteryState::from_level(self.states[last])?;
        battery_update(state, self.inputs[last], self.arrivals[last] == 1).ok()
    }

    /// Zero-based indices of slots carrying a nonzero symbol.
    pub fn transmissions(&self) -> impl Iterator<Item = usize> + '_ {
        self.inputs.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i)
    }

    /// Checks lengths, alphabets, energy feasibility and the update rule.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.arrivals.len() != n || self.states.len() != n {
            return Err(Error::InconsistentTrace { index: 0, reason: "sequence lengths differ" });
        }
        for i in 0..n {
            let state = BatteryState::from_level(self.states[i])
                .ok_or(Error::InconsistentTrace { index: i, reason: "battery level not in {0,1}" })?;
            if self.arrivals[i] > 1 {
                return Err(Error::InconsistentTrace { index: i, reason: "arrival not in {0,1}" });
            }
            let next = battery_update(state, self.inputs[i], self.arrivals[i] == 1)
                .map_err(|_| Error::InconsistentTrace { index: i, reason: "infeasible symbol" })?;
            if i + 1 < n && self.states[i + 1] != next.level() {
                return Err(Error::InconsistentTrace { index: i + 1, reason: "battery update rule violated" });
            }
        }
        Ok(())
    }

    fn push(&mut self, state: BatteryState, symbol: i8, arrival: bool) {
        self.states.push(state.level());
        self.inputs.push(symbol);
        self.arrivals.push(u8::from(arrival));
    }
}

/// Chooses the channel symbol for each slot.
///
/// `history` holds every earlier slot, including its arrival; the arrival of
/// the current slot is not yet drawn.
pub trait Policy {
    /// Symbol for slot `slot` given the current battery level.
    fn choose(&mut self, slot: usize, state: BatteryState, history: &BinaryTrace) -> Result<i8>;
}

impl<P: Policy + ?Sized> Policy for &mut P {
    fn choose(&mut self, slot: usize, state: BatteryState, history: &BinaryTrace) -> Result<i8> {
        (**self).choose(slot, state, history)
    }
}

/// Never transmits.
#[derive(Debug, Clone, Copy, Default)]
pub struct Silent;

impl Policy for Silent {
    fn choose(&mut self, _: usize, _: BatteryState, _: &BinaryTrace) -> Result<i8> {
        Ok(0)
    }
}

/// Sends a 1 whenever the battery is full.
#[derive(Debug, Clone, Copy, Default)]
pub struct Greedy;

impl Policy for Greedy {
    fn choose(&mut self, _: usize, state: BatteryState, _: &BinaryTrace) -> Result<i8> {
        Ok(state.level() as i8)
    }
}

/// i.i.d. Shannon strategy: draws `U ~ Bernoulli(p)` each slot and sends
/// `X = U * S`.
///
/// The drawn `U` values are kept in [`IidStrategy::choices`]; each slot
/// consumes exactly one draw, so runs with the same seed and different `p`
/// share their random numbers.
#[derive(Debug, Clone)]
pub struct IidStrategy {
    p: f64,
    rng: SimRng,
    /// Auxiliary symbols drawn so far.
    pub choices: Vec<u8>,
}

impl IidStrategy {
    /// Strategy with `Pr[U = 1] = p`.
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self { p, rng: sim_rng(seed), choices: Vec::new() })
    }
}

impl Policy for IidStrategy {
    fn choose(&mut self, _: usize, state: BatteryState, _: &BinaryTrace) -> Result<i8> {
        let u = u8::from(bernoulli(&mut self.rng, self.p));
        self.choices.push(u);
        Ok((u * state.level()) as i8)
    }
}

/// Stepwise simulator; [`simulate`] wraps it for a fixed slot count.
#[derive(Debug, Clone)]
pub struct Simulator {
    params: ChannelParams,
    rng: SimRng,
    state: BatteryState,
    trace: BinaryTrace,
}

impl Simulator {
    /// Fresh simulator; arrivals are drawn from `sim_rng(seed)`, one draw per slot.
    pub fn new(params: ChannelParams, seed: u64) -> Self {
        Self { params, rng: sim_rng(seed), state: params.initial_battery(), trace: BinaryTrace::default() }
    }

    /// Runs one slot: observe, transmit, harvest.
    pub fn step<P: Policy + ?Sized>(&mut self, policy: &mut P) -> Result<()> {
        let slot = self.trace.len();
        let symbol = policy.choose(slot, self.state, &self.trace)?;
        let arrival = bernoulli(&mut self.rng, self.params.q());
        let next = battery_update(self.state, symbol, arrival).map_err(|e| match e {
            Error::InfeasibleInput { state, symbol, .. } => Error::InfeasibleInput { slot: Some(slot), state, symbol },
            other => other,
        })?;
        self.trace.push(self.state, symbol, arrival);
        self.state = next;
        Ok(())
    }

    /// Battery level at the upcoming slot.
    pub fn state(&self) -> BatteryState {
        self.state
    }

    /// Slots simulated so far.
    pub fn trace(&self) -> &BinaryTrace {
        &self.trace
    }

    /// Consumes the simulator, returning its trace.
    pub fn into_trace(self) -> BinaryTrace {
        self.trace
    }
}

/// Simulates `slots` channel uses under `policy`. Deterministic given `seed`.
pub fn simulate<P: Policy + ?Sized>(
    params: ChannelParams,
    policy: &mut P,
    slots: usize,
    seed: u64,
) -> Result<BinaryTrace> {
    let mut sim = Simulator::new(params, seed);
    sim.trace.inputs.reserve(slots);
    sim.trace.arrivals.reserve(slots);
    sim.trace.states.reserve(slots);
    for _ in 0..slots {
        sim.step(policy)?;
    }
    Ok(sim.into_trace())
}
