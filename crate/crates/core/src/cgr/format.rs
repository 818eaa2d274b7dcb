//! `RCGR-TRACE v1` text serialization.
//!
//! ```text
//! RCGR-TRACE v1
//! alphabet <symbols>
//! precision <P>
//! steps <n>
//! <sym> <px_prev> <py_prev> <px_new> <py_new> <cx> <cy>
//! ```
//!
//! UTF-8, LF line endings, single spaces between fields, coordinates as
//! `num/den`.

use std::io::{BufRead, Write};

use super::alphabet::{Alphabet, RationalPoint};
use super::trace::{PathStep, PathTrace};
use crate::error::{Error, Result};
use crate::rational::{PrecisionBound, Rational};

pub const TRACE_MAGIC: &str = "RCGR-TRACE";
pub const TRACE_VERSION: &str = "v1";

pub fn write_trace<W: Write>(trace: &PathTrace, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_MAGIC} {TRACE_VERSION}")?;
    writeln!(out, "alphabet {}", trace.alphabet)?;
    writeln!(out, "precision {}", trace.precision)?;
    writeln!(out, "steps {}", trace.steps.len())?;
    for s in &trace.steps {
        writeln!(
            out,
            "{} {} {} {} {} {} {}",
            s.symbol, s.p_prev.x, s.p_prev.y, s.p_new.x, s.p_new.y, s.corner.x, s.corner.y
        )?;
    }
    Ok(())
}

pub fn trace_to_string(trace: &PathTrace) -> String {
    let mut buf = Vec::new();
    write_trace(trace, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("trace text is UTF-8")
}

/// Parses a trace. Syntax only; call [`PathTrace::validate`] (or `decode`)
/// for the structural invariants.
pub fn read_trace<R: BufRead>(input: R) -> Result<PathTrace> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut next_line = |what: &str| -> Result<(usize, String)> {
        match lines.next() {
            Some((n, Ok(text))) => Ok((n, text)),
            Some((_, Err(e))) => Err(e.into()),
            None => Err(Error::TraceParse { line: 0, message: format!("unexpected end of file, expected {what}") }),
        }
    };
    let parse_err = |line: usize, message: String| Error::TraceParse { line, message };

    let (n, header) = next_line("header")?;
    let version = header
        .strip_prefix(TRACE_MAGIC)
        .and_then(|rest| rest.strip_prefix(' '))
        .ok_or_else(|| parse_err(n, format!("expected `{TRACE_MAGIC} {TRACE_VERSION}` header")))?;
    if version != TRACE_VERSION {
        return Err(parse_err(n, format!("unsupported trace version {version:?}")));
    }

    let (n, line) = next_line("alphabet line")?;
    let symbols = line.strip_prefix("alphabet ").ok_or_else(|| parse_err(n, "expected `alphabet <symbols>`".into()))?;
    let alphabet = Alphabet::new(symbols).map_err(|e| parse_err(n, e.to_string()))?;

    let (n, line) = next_line("precision line")?;
    let p = line.strip_prefix("precision ").ok_or_else(|| parse_err(n, "expected `precision <P>`".into()))?;
    if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(n, format!("precision must be a decimal integer, got {p:?}")));
    }
    let precision: PrecisionBound = p.parse().map_err(|e: Error| parse_err(n, e.to_string()))?;

    let (n, line) = next_line("steps line")?;
    let count: usize = line
        .strip_prefix("steps ")
        .filter(|c| !c.is_empty() && c.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| parse_err(n, "expected `steps <n>`".into()))?;

    let mut steps = Vec::with_capacity(count.min(1 << 20));
    for i in 0..count {
        let (n, line) = next_line(&format!("step {} of {count}", i + 1)).map_err(|e| match e {
            Error::TraceParse { line: 0, message } => Error::TraceParse { line: 5 + i, message },
            other => other,
        })?;
        steps.push(parse_step(&line).map_err(|m| parse_err(n, m))?);
    }
    if let Some((n, extra)) = lines.next() {
        let extra = extra?;
        return Err(parse_err(n, format!("unexpected content after {count} steps: {extra:?}")));
    }
    Ok(PathTrace { alphabet, precision, steps })
}

fn parse_step(line: &str) -> std::result::Result<PathStep, String> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.len() != 7 {
        return Err(format!("expected 7 space-separated fields, found {}", fields.len()));
    }
    let mut chars = fields[0].chars();
    let symbol = match (chars.next(), chars.next()) {
        (Some(c), None) => c,
        _ => return Err(format!("symbol field must be one character, got {:?}", fields[0])),
    };
    let coord = |i: usize| -> std::result::Result<Rational, String> {
        fields[i].parse().map_err(|e: Error| format!("field {}: {e}", i + 1))
    };
    let point =
        |i: usize| -> std::result::Result<RationalPoint, String> { Ok(RationalPoint::new(coord(i)?, coord(i + 1)?)) };
    Ok(PathStep { symbol, p_prev: point(1)?, p_new: point(3)?, corner: point(5)? })
}
