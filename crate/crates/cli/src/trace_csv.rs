//! Debug dump of a slot trace: `i,S,X,E` per line.

use std::io::{self, Write};

use ehchan_core::BinaryTrace;

pub fn write_trace_csv<W: Write>(trace: &BinaryTrace, mut out: W) -> io::Result<()> {
    writeln!(out, "i,S,X,E")?;
    for i in 0..trace.len() {
        writeln!(out, "{},{},{},{}", i, trace.states[i], trace.inputs[i], trace.arrivals[i])?;
    }
    out.flush()
}
