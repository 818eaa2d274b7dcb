//! Exact McNemar test on paired classifier predictions.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::{to_real, Rational};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McNemarResult {
    /// A correct, B wrong.
    pub b: u64,
    /// A wrong, B correct.
    pub c: u64,
    pub p_value: f64,
    /// No discordant pairs; `p_value` is 1 by convention.
    pub degenerate: bool,
}

/// `min(1, 2 * P(X <= min(b, c)))` for `X ~ Binomial(b + c, 1/2)`, exact.
pub fn mcnemar_p_exact(b: u64, c: u64) -> Rational {
    let n = b + c;
    if n == 0 {
        return Rational::one();
    }
    let mut term = BigInt::one();
    let mut tail = BigInt::one();
    for i in 1..=b.min(c) {
        term = term * (n - i + 1) / i;
        tail += &term;
    }
    let p = Rational::new(tail * 2, BigInt::one() << n).expect("positive denominator");
    p.min(Rational::one())
}

pub fn mcnemar_from_counts(b: u64, c: u64) -> McNemarResult {
    McNemarResult { b, c, p_value: to_real(&mcnemar_p_exact(b, c)), degenerate: b + c == 0 }
}

pub fn mcnemar_test<T: PartialEq>(preds_a: &[T], preds_b: &[T], labels: &[T]) -> Result<McNemarResult> {
    if preds_a.len() != labels.len() || preds_b.len() != labels.len() {
        return Err(Error::InvalidArgument(format!(
            "length mismatch: {} and {} predictions for {} labels",
            preds_a.len(),
            preds_b.len(),
            labels.len()
        )));
    }
    let (mut b, mut c) = (0, 0);
    for ((a, bb), y) in preds_a.iter().zip(preds_b).zip(labels) {
        match (a == y, bb == y) {
            (true, false) => b += 1,
            (false, true) => c += 1,
            _ => {}
        }
    }
    Ok(mcnemar_from_counts(b, c))
}
