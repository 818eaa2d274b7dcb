//! Path-trace encoding and sequence reconstruction.
//!
//! Encoding walks from the origin halfway towards the corner of each symbol,
//! recording `(symbol, previous point, new point, corner)` per step. The
//! stored symbols make reconstruction exact regardless of how much the
//! coordinates were clamped.

use num_bigint::BigInt;
use num_traits::One;

use super::alphabet::{corner_points, Alphabet, CornerSet, RationalPoint};
use crate::error::{Error, Result};
use crate::rational::{midpoint, PrecisionBound, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub symbol: char,
    pub p_prev: RationalPoint,
    pub p_new: RationalPoint,
    pub corner: RationalPoint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathTrace {
    pub alphabet: Alphabet,
    pub precision: PrecisionBound,
    pub steps: Vec<PathStep>,
}

impl PathTrace {
    pub fn empty(alphabet: Alphabet, precision: PrecisionBound) -> Self {
        Self { alphabet, precision, steps: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Final point `p_n`; the origin for an empty trace.
    pub fn final_point(&self) -> RationalPoint {
        self.steps.last().map(|s| s.p_new.clone()).unwrap_or_default()
    }

    /// Path points `p_1..p_n` in order.
    pub fn points(&self) -> impl Iterator<Item = &RationalPoint> {
        self.steps.iter().map(|s| &s.p_new)
    }

    /// Largest denominator of any stored coordinate (1 for an empty trace).
    pub fn max_denominator(&self) -> BigInt {
        self.steps
            .iter()
            .flat_map(|s| [&s.p_prev, &s.p_new, &s.corner])
            .flat_map(|p| [p.x.denom(), p.y.denom()])
            .max()
            .cloned()
            .unwrap_or_else(BigInt::one)
    }

    /// Structural checks: origin start, chaining, known symbols, and corners
    /// matching the alphabet's corner set.
    pub fn validate(&self) -> Result<()> {
        let corners = corner_points(&self.alphabet);
        let mut expected_prev = RationalPoint::origin();
        for (i, step) in self.steps.iter().enumerate() {
            let corrupt = |reason: String| Error::CorruptTrace { step: i + 1, reason };
            if step.p_prev != expected_prev {
                return Err(corrupt(if i == 0 {
                    format!("path must start at the origin, found {}", step.p_prev)
                } else {
                    format!("previous point {} does not chain from {}", step.p_prev, expected_prev)
                }));
            }
            let corner = corners
                .corner_for(step.symbol)
                .ok_or_else(|| corrupt(format!("symbol {:?} is not in the alphabet", step.symbol)))?;
            if &step.corner != corner {
                return Err(corrupt(format!(
                    "corner {} does not match {} for symbol {:?}",
                    step.corner, corner, step.symbol
                )));
            }
            expected_prev = step.p_new.clone();
        }
        Ok(())
    }

    /// Recomputes every midpoint under the trace's precision bound.
    pub fn check_geometry(&self) -> Result<()> {
        for (i, step) in self.steps.iter().enumerate() {
            let expected = midpoint_point(&step.p_prev, &step.corner, &self.precision);
            if step.p_new != expected {
                return Err(Error::CorruptTrace {
                    step: i + 1,
                    reason: format!("new point {} should be {}", step.p_new, expected),
                });
            }
            let den_ok = [&step.p_new.x, &step.p_new.y].iter().all(|c| self.precision.admits(c.denom()));
            if !den_ok {
                return Err(Error::CorruptTrace {
                    step: i + 1,
                    reason: format!("denominator exceeds precision bound {}", self.precision),
                });
            }
        }
        Ok(())
    }
}

fn midpoint_point(a: &RationalPoint, b: &RationalPoint, bound: &PrecisionBound) -> RationalPoint {
    RationalPoint::new(midpoint(&a.x, &b.x, bound), midpoint(&a.y, &b.y, bound))
}

/// Checks that the bound can hold every corner coordinate exactly.
fn check_bound(corners: &CornerSet, bound: &PrecisionBound) -> Result<()> {
    if !bound.admits(&BigInt::from(corners.q())) {
        return Err(Error::InvalidPrecision(format!(
            "bound {bound} is smaller than the corner grid denominator {}",
            corners.q()
        )));
    }
    Ok(())
}

/// Encodes `sequence`, returning the final point and the full path trace.
pub fn encode(sequence: &str, alphabet: &Alphabet, bound: &PrecisionBound) -> Result<(RationalPoint, PathTrace)> {
    let corners = corner_points(alphabet);
    check_bound(&corners, bound)?;
    let mut steps = Vec::with_capacity(sequence.len());
    let mut current = RationalPoint::origin();
    for (i, symbol) in sequence.chars().enumerate() {
        let index = alphabet.index(symbol).ok_or(Error::RejectedSymbol { position: i + 1, symbol })?;
        let corner = corners.corner(index);
        let next = midpoint_point(&current, corner, bound);
        steps.push(PathStep {
            symbol,
            p_prev: std::mem::replace(&mut current, next.clone()),
            p_new: next,
            corner: corner.clone(),
        });
    }
    let trace = PathTrace { alphabet: alphabet.clone(), precision: bound.clone(), steps };
    Ok((current, trace))
}

/// Reconstructs the sequence from a trace after validating its structure.
pub fn decode(trace: &PathTrace) -> Result<String> {
    trace.validate()?;
    Ok(trace.steps.iter().map(|s| s.symbol).collect())
}

/// `2 * p_new - corner`, exact. Inverts a step that was not clamped.
pub fn geometric_parent(p_new: &RationalPoint, corner: &RationalPoint) -> RationalPoint {
    let two = Rational::from_integer(2);
    RationalPoint::new(&(&two * &p_new.x) - &corner.x, &(&two * &p_new.y) - &corner.y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundtripReport {
    pub ok: bool,
    pub steps: usize,
    pub max_denominator: BigInt,
}

/// Encodes, decodes, and checks every trace invariant.
pub fn verify_roundtrip(sequence: &str, alphabet: &Alphabet, bound: &PrecisionBound) -> Result<RoundtripReport> {
    let (final_point, trace) = encode(sequence, alphabet, bound)?;
    let ok = trace.len() == sequence.chars().count()
        && trace.final_point() == final_point
        && trace.check_geometry().is_ok()
        && decode(&trace).map(|s| s == sequence).unwrap_or(false);
    Ok(RoundtripReport { ok, steps: trace.len(), max_denominator: trace.max_denominator() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn pt(x: (i64, i64), y: (i64, i64)) -> RationalPoint {
        RationalPoint::new(r(x.0, x.1), r(y.0, y.1))
    }

    fn enc(s: &str) -> (RationalPoint, PathTrace) {
        encode(s, &Alphabet::dna(), &PrecisionBound::default()).unwrap()
    }

    #[test]
    fn single_symbol() {
        let (p, trace) = enc("A");
        assert_eq!(p, pt((0, 1), (1, 2)));
        assert_eq!(trace.len(), 1);
        assert_eq!(trace.steps[0].corner, pt((0, 1), (1, 1)));
        assert_eq!(trace.steps[0].p_prev, RationalPoint::origin());
    }

    #[test]
    fn empty_sequence() {
        let (p, trace) = enc("");
        assert_eq!(p, RationalPoint::origin());
        assert!(trace.is_empty());
        assert_eq!(decode(&trace).unwrap(), "");
    }

    #[test]
    fn two_symbols() {
        // Float CGR gives (-0.5, 0.25) for the same walk.
        let (p, trace) = enc("AT");
        assert_eq!(p, pt((-1, 2), (1, 4)));
        assert_eq!(trace.steps[1].p_prev, trace.steps[0].p_new);
    }

    #[test]
    fn rejected_symbol_position() {
        let err = encode("ATXG", &Alphabet::dna(), &PrecisionBound::default()).unwrap_err();
        assert!(matches!(err, Error::RejectedSymbol { position: 3, symbol: 'X' }));
        let err = verify_roundtrip("ATXG", &Alphabet::dna(), &PrecisionBound::default()).unwrap_err();
        assert!(matches!(err, Error::RejectedSymbol { position: 3, .. }));
    }

    #[test]
    fn bound_below_corner_grid_is_rejected() {
        let err = encode("A", &Alphabet::dna(), &PrecisionBound::new(8).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidPrecision(_)));
        assert!(encode("A", &Alphabet::dna(), &PrecisionBound::new(16).unwrap()).is_ok());
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode(&enc("ATGC").1).unwrap(), "ATGC");
        let protein = "ARNDCQEGHILKMFPSTWYVARND";
        let (_, trace) = encode(protein, &Alphabet::protein(), &PrecisionBound::default()).unwrap();
        assert_eq!(decode(&trace).unwrap(), protein);
    }

    #[test]
    fn decode_detects_broken_chain() {
        let (_, mut trace) = enc("ATGC");
        trace.steps[2].p_prev = RationalPoint::origin();
        assert!(matches!(decode(&trace), Err(Error::CorruptTrace { step: 3, .. })));

        let (_, mut trace) = enc("ATGC");
        trace.steps[0].p_prev = pt((1, 2), (0, 1));
        assert!(matches!(decode(&trace), Err(Error::CorruptTrace { step: 1, .. })));

        let (_, mut trace) = enc("ATGC");
        trace.steps[1].corner = pt((1, 1), (0, 1));
        assert!(matches!(decode(&trace), Err(Error::CorruptTrace { step: 2, .. })));

        let (_, mut trace) = enc("ATGC");
        trace.steps[3].symbol = 'N';
        assert!(matches!(decode(&trace), Err(Error::CorruptTrace { step: 4, .. })));
    }

    #[test]
    fn geometry_check_catches_moved_points() {
        let (_, mut trace) = enc("ATG");
        assert!(trace.check_geometry().is_ok());
        trace.steps[2].p_new = pt((0, 1), (0, 1));
        assert!(trace.check_geometry().is_err());
        // Structure is still fine; only the geometry is off.
        assert!(trace.validate().is_ok());
    }

    #[test]
    fn geometric_parent_examples() {
        assert_eq!(geometric_parent(&pt((0, 1), (1, 2)), &pt((0, 1), (1, 1))), RationalPoint::origin());
        assert_eq!(geometric_parent(&pt((-1, 2), (1, 4)), &pt((-1, 1), (0, 1))), pt((0, 1), (1, 2)));
        assert_eq!(geometric_parent(&pt((1, 1), (0, 1)), &pt((1, 1), (0, 1))), pt((1, 1), (0, 1)));
    }

    #[test]
    fn roundtrip_report() {
        let report =
            verify_roundtrip("ATGCATGCATGCATGCATGCATGC", &Alphabet::dna(), &PrecisionBound::default()).unwrap();
        assert!(report.ok);
        assert_eq!(report.steps, 24);
        assert!(report.max_denominator <= BigInt::from(1u64 << 32));
        let empty = verify_roundtrip("", &Alphabet::dna(), &PrecisionBound::default()).unwrap();
        assert!(empty.ok);
        assert_eq!(empty.steps, 0);
    }

    #[test]
    fn clamping_keeps_symbols() {
        // With P = 16 every coordinate beyond the first couple of steps is clamped.
        let bound = PrecisionBound::new(16).unwrap();
        let seq = "GATTACA".repeat(20);
        let (_, trace) = encode(&seq, &Alphabet::dna(), &bound).unwrap();
        assert_eq!(decode(&trace).unwrap(), seq);
        assert!(trace.max_denominator() <= BigInt::from(16));
        assert!(trace.check_geometry().is_ok());
    }
}
