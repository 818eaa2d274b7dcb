//! Alphabets, corner points, path-trace encoding and reconstruction.

mod alphabet;
mod format;
mod trace;

pub use alphabet::{corner_points, Alphabet, CornerSet, RationalPoint, DNA_SYMBOLS, PROTEIN_SYMBOLS};
pub use format::{read_trace, trace_to_string, write_trace, TRACE_MAGIC, TRACE_VERSION};
pub use trace::{decode, encode, geometric_parent, verify_roundtrip, PathStep, PathTrace, RoundtripReport};
