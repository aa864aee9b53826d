use core::fmt;

/// Errors raised by the channel model, transforms and optimizers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A numeric argument is outside its admissible range.
    Domain {
        /// Argument name.
        name: &'static str,
        /// Offending value.
        value: f64,
    },
    /// A symbol needs more energy than the battery holds. Always an encoder bug.
    InfeasibleInput {
        /// Slot index, when known.
        slot: Option<usize>,
        /// Battery level at that slot.
        state: u8,
        /// Requested channel symbol.
        symbol: i8,
    },
    /// A trace violates the battery dynamics or the timing invariants.
    InconsistentTrace {
        /// Index of the offending slot or timing symbol.
        index: usize,
        /// What went wrong.
        reason: &'static str,
    },
    /// A message symbol is outside `0..frame_len`.
    SymbolOutOfRange {
        /// Position in the message.
        index: usize,
        /// Offending value.
        value: usize,
        /// Alphabet size.
        frame_len: usize,
    },
    /// An iterative solver hit its iteration cap.
    NonConvergence {
        /// Iterations performed.
        iterations: usize,
    },
    /// Exhaustive enumeration requested beyond the supported size.
    TooLarge {
        /// Requested size.
        n: usize,
        /// Supported maximum.
        max: usize,
    },
}

/// Result alias for this crate.
pub type Result<T, E = Error> = core::result::Result<T, E>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::InfeasibleInput { slot, state, symbol } => {
                write!(f, "symbol {symbol} needs energy but battery is {state}")?;
                if let Some(slot) = slot {
                    write!(f, " at slot {slot}")?;
                }
                Ok(())
            }
            Error::InconsistentTrace { index, reason } => {
                write!(f, "inconsistent trace at {index}: {reason}")
            }
            Error::SymbolOutOfRange { index, value, frame_len } => {
                write!(f, "symbol {value} at position {index} is not below frame length {frame_len}")
            }
            Error::NonConvergence { iterations } => {
                write!(f, "no convergence after {iterations} iterations")
            }
            Error::TooLarge { n, max } => write!(f, "size {n} exceeds enumeration limit {max}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { name, value })
    }
}
