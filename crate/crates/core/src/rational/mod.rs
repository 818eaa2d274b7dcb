//! Exact rational arithmetic with a hard cap on denominators.
//!
//! Values are always kept in lowest terms with a positive denominator. The
//! bounded operations ([`midpoint`], [`clamp`]) compute exactly and only then
//! fall back to the continued-fraction best approximation when the reduced
//! denominator exceeds the [`PrecisionBound`].

mod approx;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Magnitude limit for the `i128` fast path. Keeping every operand below
/// 2^62 means all intermediate products in midpoint and best-approximation
/// stay below 2^126.
const SMALL_LIMIT: i128 = 1 << 62;

/// An exact fraction in lowest terms.
///
/// Textual form is `<num>/<den>` in base 10, with an optional leading `-`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: BigInt,
    den: BigInt,
}

impl Rational {
    /// Builds a reduced fraction, see [`normalize`].
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        normalize(num.into(), den.into())
    }

    pub fn zero() -> Self {
        Self { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn one() -> Self {
        Self { num: BigInt::one(), den: BigInt::one() }
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self { num: n.into(), den: BigInt::one() }
    }

    /// Caller guarantees the pair is already reduced with `den > 0`.
    fn from_reduced(num: BigInt, den: BigInt) -> Self {
        debug_assert!(den.is_positive());
        debug_assert!(num.gcd(&den).is_one());
        Self { num, den }
    }

    pub fn numer(&self) -> &BigInt {
        &self.num
    }

    pub fn denom(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn abs(&self) -> Self {
        Self { num: self.num.abs(), den: self.den.clone() }
    }

    /// Nearest `f64` to the exact value (round-half-to-even).
    pub fn to_f64(&self) -> f64 {
        to_real(self)
    }

    fn small_parts(&self) -> Option<(i128, i128)> {
        let n = self.num.to_i128()?;
        let d = self.den.to_i128()?;
        (n.abs() < SMALL_LIMIT && d < SMALL_LIMIT).then_some((n, d))
    }

    /// Rounds to the nearest integer, halves away from zero.
    pub fn round_half_away(&self) -> BigInt {
        let magnitude: BigInt = (self.num.abs() * 2 + &self.den) / (&self.den * 2);
        if self.num.is_negative() {
            -magnitude
        } else {
            magnitude
        }
    }

    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }
}

impl Default for Rational {
    fn default() -> Self {
        Self::zero()
    }
}

/// Reduces `num/den` to lowest terms with the sign on the numerator.
///
/// Zero (including a "negative zero" such as `0/-3`) becomes `0/1`.
pub fn normalize(num: BigInt, den: BigInt) -> Result<Rational> {
    if den.is_zero() {
        return Err(Error::InvalidRational(format!("{num}/0 has a zero denominator")));
    }
    if num.is_zero() {
        return Ok(Rational::zero());
    }
    let g = num.gcd(&den);
    let (mut num, mut den) = (num / &g, den / g);
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    Ok(Rational::from_reduced(num, den))
}

/// Maximum denominator allowed in a bounded operation. Always `>= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionBound {
    max_den: BigInt,
    small: Option<i128>,
}

impl PrecisionBound {
    pub fn new(max_den: impl Into<BigInt>) -> Result<Self> {
        let max_den = max_den.into();
        if max_den < BigInt::from(2) {
            return Err(Error::InvalidPrecision(format!("bound must be at least 2, got {max_den}")));
        }
        let small = max_den.to_i128().filter(|&p| p < SMALL_LIMIT);
        Ok(Self { max_den, small })
    }

    /// `2^bits`; `bits` must be at least 1.
    pub fn power_of_two(bits: u32) -> Result<Self> {
        Self::new(BigInt::one() << bits)
    }

    pub fn value(&self) -> &BigInt {
        &self.max_den
    }

    pub fn admits(&self, den: &BigInt) -> bool {
        den <= &self.max_den
    }

    /// `ceil(log2(P))`.
    pub fn ceil_log2(&self) -> u64 {
        (&self.max_den - 1u32).bits()
    }
}

impl Default for PrecisionBound {
    /// `2^32`.
    fn default() -> Self {
        Self::power_of_two(32).expect("2^32 is a valid bound")
    }
}

impl fmt::Display for PrecisionBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.max_den)
    }
}

impl FromStr for PrecisionBound {
    type Err = Error;

    /// Accepts a plain decimal integer or `2^<bits>`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPrecision(format!("cannot parse {s:?}"));
        if let Some(bits) = s.strip_prefix("2^") {
            if bits.is_empty() || !bits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let bits: u32 = bits.parse().map_err(|_| bad())?;
            return Self::power_of_two(bits);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        Self::new(s.parse::<BigInt>().map_err(|_| bad())?)
    }
}

/// Exact `(a + b) / 2`, replaced by its best approximation under `bound` when
/// the reduced denominator is too large.
pub fn midpoint(a: &Rational, b: &Rational, bound: &PrecisionBound) -> Rational {
    if let (Some((an, ad)), Some((bn, bd))) = (a.small_parts(), b.small_parts()) {
        let num = an * bd + bn * ad;
        let den = 2 * ad * bd;
        let g = num.gcd(&den);
        return bounded_i128(num / g, den / g, bound);
    }
    let num = &a.num * &b.den + &b.num * &a.den;
    let den = (&a.den * &b.den) << 1;
    let reduced = normalize(num, den).expect("product of positive denominators");
    clamp(&reduced, bound)
}

fn bounded_i128(num: i128, den: i128, bound: &PrecisionBound) -> Rational {
    if let Some(p) = bound.small {
        if den <= p {
            return Rational::from_reduced(num.into(), den.into());
        }
        if num.abs() < SMALL_LIMIT && den < SMALL_LIMIT {
            let (n, d) = approx::best_approximation(&num, &den, &p);
            return Rational::from_reduced(n.into(), d.into());
        }
    }
    clamp(&Rational::from_reduced(num.into(), den.into()), bound)
}

/// Best approximation of `x` with denominator at most `P`.
///
/// Returns `x` unchanged when it already fits. Otherwise picks the fraction
/// minimizing `|x - p/q|` over all `q <= P`; ties go to the smaller
/// denominator, then the smaller `|p|`.
pub fn clamp(x: &Rational, bound: &PrecisionBound) -> Rational {
    if bound.admits(&x.den) {
        return x.clone();
    }
    if let (Some((n, d)), Some(p)) = (x.small_parts(), bound.small) {
        let (n, d) = approx::best_approximation(&n, &d, &p);
        return Rational::from_reduced(n.into(), d.into());
    }
    let (n, d) = approx::best_approximation(&x.num, &x.den, &bound.max_den);
    Rational::from_reduced(n, d)
}

/// Continued-fraction convergents of `x`; the final element equals `x`.
pub fn cf_convergents(x: &Rational) -> Vec<Rational> {
    approx::convergents(&x.num, &x.den).into_iter().map(|(h, k)| Rational::from_reduced(h, k)).collect()
}

/// Nearest `f64` to `x` (round-half-to-even, like IEEE division).
pub fn to_real(x: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (x.num.to_i64(), x.den.to_i64()) {
        const EXACT: i64 = 1 << 53;
        if n.abs() <= EXACT && d <= EXACT {
            return n as f64 / d as f64;
        }
    }
    let negative = x.num.is_negative();
    let num = x.num.magnitude();
    let den = x.den.magnitude();
    // Scale so the integer quotient carries 65 or 66 significant bits, then
    // fold any nonzero remainder into a sticky bit below the rounding point.
    let shift = den.bits() as i64 - num.bits() as i64 + 65;
    let (q, r) = if shift >= 0 { (num << shift as u64).div_rem(den) } else { num.div_rem(&(den << (-shift) as u64)) };
    let mut q = q.to_u128().expect("quotient has at most 66 bits");
    if !r.is_zero() {
        q |= 1;
    }
    let magnitude = q as f64 * 2f64.powi(-(shift as i32));
    if negative {
        -magnitude
    } else {
        magnitude
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Parses `-?<digits>/<digits>`; the result is normalized.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRational(format!("expected <num>/<den>, got {s:?}"));
        let (num, den) = s.split_once('/').ok_or_else(bad)?;
        let digits = num.strip_prefix('-').unwrap_or(num);
        let is_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !is_digits(digits) || !is_digits(den) {
            return Err(bad());
        }
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        normalize(num, den)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl Add for &Rational {
    type Output = Rational;

    fn add(self, rhs: &Rational) -> Rational {
        normalize(&self.num * &rhs.den + &rhs.num * &self.den, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Sub for &Rational {
    type Output = Rational;

    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Mul for &Rational {
    type Output = Rational;

    fn mul(self, rhs: &Rational) -> Rational {
        normalize(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominator")
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        Rational { num: -self.num, den: self.den }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}
