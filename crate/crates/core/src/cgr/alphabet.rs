use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DNA_SYMBOLS: &str = "ATGC";
pub const PROTEIN_SYMBOLS: &str = "ARNDCQEGHILKMFPSTWYV";

/// Ordered set of distinct symbols. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
    ascii_index: [u8; 128],
}

impl Alphabet {
    pub fn new(symbols: &str) -> Result<Self> {
        let symbols: Vec<char> = symbols.chars().collect();
        if symbols.len() < 2 {
            return Err(Error::InvalidAlphabet(format!("need at least 2 symbols, got {}", symbols.len())));
        }
        if symbols.len() > u8::MAX as usize {
            return Err(Error::InvalidAlphabet("more than 255 symbols".into()));
        }
        let mut ascii_index = [0u8; 128];
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() || c.is_control() {
                return Err(Error::InvalidAlphabet(format!("symbol {c:?} is not printable")));
            }
            if symbols[..i].contains(&c) {
                return Err(Error::InvalidAlphabet(format!("duplicate symbol {c:?}")));
            }
            if c.is_ascii() {
                ascii_index[c as usize] = (i + 1) as u8;
            }
        }
        Ok(Self { symbols, ascii_index })
    }

    pub fn dna() -> Self {
        Self::new(DNA_SYMBOLS).expect("valid builtin alphabet")
    }

    pub fn protein() -> Self {
        Self::new(PROTEIN_SYMBOLS).expect("valid builtin alphabet")
    }

    /// `dna`, `protein`, or a literal symbol string.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "dna" => Ok(Self::dna()),
            "protein" => Ok(Self::protein()),
            other => Self::new(other),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    /// 1-based position of `c`.
    pub fn index(&self, c: char) -> Option<usize> {
        if c.is_ascii() {
            match self.ascii_index[c as usize] {
                0 => None,
                i => Some(i as usize),
            }
        } else {
            self.symbols.iter().position(|&s| s == c).map(|i| i + 1)
        }
    }

    pub fn contains(&self, c: char) -> bool {
        self.index(c).is_some()
    }

    /// 1-based symbol lookup.
    pub fn symbol(&self, index: usize) -> Option<char> {
        index.checked_sub(1).and_then(|i| self.symbols.get(i)).copied()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.symbols.iter().try_for_each(|c| write!(f, "{c}"))
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_name(s)
    }
}

/// A point with exact rational coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::default()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Corner points of the k-gon, rounded onto the grid `1/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerSet {
    alphabet: Alphabet,
    q: u64,
    corners: Vec<RationalPoint>,
}

impl CornerSet {
    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// Grid denominator `2^ceil(log2(4k))`.
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn corners(&self) -> &[RationalPoint] {
        &self.corners
    }

    /// Corner for the 1-based symbol index.
    pub fn corner(&self, index: usize) -> &RationalPoint {
        &self.corners[index - 1]
    }

    pub fn corner_for(&self, symbol: char) -> Option<&RationalPoint> {
        self.alphabet.index(symbol).map(|i| self.corner(i))
    }
}

/// Builds `C_i = (round(q cos(2 pi i / k)) / q, round(q sin(2 pi i / k)) / q)`
/// for `i = 1..=k`, rounding half away from zero.
pub fn corner_points(alphabet: &Alphabet) -> CornerSet {
    let k = alphabet.len();
    let q = (4 * k as u64).next_power_of_two();
    let scaled = |v: f64| -> Rational {
        // f64::round already rounds half away from zero.
        let n = (q as f64 * v).round() as i64;
        Rational::new(n, q as i64).expect("q > 0")
    };
    let corners = (1..=k)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / k as f64;
            RationalPoint::new(scaled(theta.cos()), scaled(theta.sin()))
        })
        .collect();
    CornerSet { alphabet: alphabet.clone(), q, corners }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn rejects_bad_alphabets() {
        assert!(Alphabet::new("A").is_err());
        assert!(Alphabet::new("").is_err());
        assert!(Alphabet::new("AA").is_err());
        assert!(Alphabet::new("A T").is_err());
        assert_eq!(Alphabet::new("ATGC").unwrap(), Alphabet::dna());
    }

    #[test]
    fn indexing_is_one_based() {
        let dna = Alphabet::dna();
        assert_eq!(dna.index('A'), Some(1));
        assert_eq!(dna.index('C'), Some(4));
        assert_eq!(dna.index('X'), None);
        assert_eq!(dna.index('é'), None);
        assert_eq!(dna.symbol(2), Some('T'));
        assert_eq!(dna.symbol(0), None);
        let greek = Alphabet::new("αβγ").unwrap();
        assert_eq!(greek.index('γ'), Some(3));
        assert_eq!(greek.to_string(), "αβγ");
    }

    #[test]
    fn dna_corners_form_a_diamond() {
        let set = corner_points(&Alphabet::dna());
        assert_eq!(set.q(), 16);
        let expect = [(0, 1), (-1, 0), (0, -1), (1, 0)];
        for (c, (x, y)) in set.corners().iter().zip(expect) {
            assert_eq!(c, &RationalPoint::new(r(x, 1), r(y, 1)));
        }
    }

    #[test]
    fn protein_corners() {
        let set = corner_points(&Alphabet::protein());
        assert_eq!(set.q(), 128);
        assert_eq!(set.corner(5), &RationalPoint::new(r(0, 1), r(1, 1)));
        // round(128 cos 18deg) = round(121.735...) = 122; round(128 sin 18deg) = round(39.554...) = 40
        assert_eq!(set.corner(1), &RationalPoint::new(r(61, 64), r(5, 16)));
        assert_eq!(set.corner(2), &RationalPoint::new(r(13, 16), r(75, 128)));
        assert_eq!(set.corner(20), &RationalPoint::new(r(1, 1), r(0, 1)));
    }

    #[test]
    fn corners_within_rounding_bound() {
        for k in 2..=64usize {
            let symbols: String = (0..k).map(|i| char::from_u32(0x100 + i as u32).unwrap()).collect();
            let set = corner_points(&Alphabet::new(&symbols).unwrap());
            let q = set.q();
            assert_eq!(q, (4 * k as u64).next_power_of_two());
            for (i, c) in set.corners().iter().enumerate() {
                let theta = std::f64::consts::TAU * (i + 1) as f64 / k as f64;
                let tol = 1.0 / (2.0 * q as f64) + 1e-12;
                assert!((c.x.to_f64() - theta.cos()).abs() <= tol);
                assert!((c.y.to_f64() - theta.sin()).abs() <= tol);
                assert!(q.is_multiple_of(c.x.denom().to_string().parse::<u64>().unwrap()));
                assert!(q.is_multiple_of(c.y.denom().to_string().parse::<u64>().unwrap()));
            }
        }
    }
}
