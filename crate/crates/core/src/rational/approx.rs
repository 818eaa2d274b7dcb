//! Continued-fraction machinery shared by the `i128` fast path and the
//! arbitrary-precision path.
//!
//! All functions take a fraction as `(num, den)` with `den > 0`. Partial
//! quotients use floor division, so negative values expand as
//! `[a0; a1, a2, ...]` with `a0 = floor(x)` and every later term positive.

use num_integer::Integer;
use num_traits::Signed;

pub(crate) trait Int: Integer + Signed + Clone {}
impl<T: Integer + Signed + Clone> Int for T {}

/// Convergents `h_i / k_i` of `num / den`. The last one equals the input.
pub(crate) fn convergents<T: Int>(num: &T, den: &T) -> Vec<(T, T)> {
    let (a0, mut rem) = num.div_mod_floor(den);
    let mut d = den.clone();
    let (mut h_prev, mut k_prev) = (T::one(), T::zero());
    let (mut h, mut k) = (a0, T::one());
    let mut out = vec![(h.clone(), k.clone())];
    while !rem.is_zero() {
        let (a, r) = d.div_rem(&rem);
        d = std::mem::replace(&mut rem, r);
        let h_next = a.clone() * h.clone() + h_prev;
        let k_next = a * k.clone() + k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        out.push((h.clone(), k.clone()));
    }
    out
}

/// Closest fraction to `num / den` whose denominator does not exceed `bound`.
///
/// The answer is either the last convergent with denominator `<= bound` or
/// the largest admissible semiconvergent after it; those two are the Farey
/// neighbours of the input at order `bound`. Equidistant candidates resolve
/// to the smaller denominator, then the smaller absolute numerator.
pub(crate) fn best_approximation<T: Int>(num: &T, den: &T, bound: &T) -> (T, T) {
    if den <= bound {
        return (num.clone(), den.clone());
    }
    let (a0, mut rem) = num.div_mod_floor(den);
    let mut d = den.clone();
    let (mut h_prev, mut k_prev) = (T::one(), T::zero());
    let (mut h, mut k) = (a0, T::one());
    // den > bound guarantees the expansion outgrows the bound before it ends.
    while !rem.is_zero() {
        let (a, r) = d.div_rem(&rem);
        let k_next = a.clone() * k.clone() + k_prev.clone();
        if &k_next > bound {
            let t = (bound.clone() - k_prev.clone()) / k.clone();
            let hs = h_prev + t.clone() * h.clone();
            let ks = k_prev + t * k.clone();
            return closer(num, den, (h, k), (hs, ks));
        }
        d = std::mem::replace(&mut rem, r);
        let h_next = a * h.clone() + h_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
    }
    (h, k)
}

fn closer<T: Int>(num: &T, den: &T, a: (T, T), b: (T, T)) -> (T, T) {
    // |x - p/q| = |num*q - p*den| / (den*q); den cancels in the comparison.
    let err_a = (num.clone() * a.1.clone() - a.0.clone() * den.clone()).abs();
    let err_b = (num.clone() * b.1.clone() - b.0.clone() * den.clone()).abs();
    let lhs = err_a * b.1.clone();
    let rhs = err_b * a.1.clone();
    let key_a = (lhs, a.1.clone(), a.0.abs());
    let key_b = (rhs, b.1.clone(), b.0.abs());
    if key_a <= key_b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn convergents_of_five_twelfths() {
        assert_eq!(convergents(&5i128, &12), vec![(0, 1), (1, 2), (2, 5), (5, 12)]);
    }

    #[test]
    fn negative_expansion_ends_at_input() {
        let cs = convergents(&-7i128, &5);
        assert_eq!(cs.first(), Some(&(-2, 1)));
        assert_eq!(cs.last(), Some(&(-7, 5)));
    }

    #[test]
    fn tie_prefers_smaller_denominator() {
        // 1/4 is equidistant from 0/1 and 1/2.
        assert_eq!(best_approximation(&1i128, &4, &2), (0, 1));
        assert_eq!(best_approximation(&-1i128, &4, &2), (0, 1));
    }

    #[test]
    fn semiconvergent_beats_convergent() {
        // 5/12 = [0;2,2,2]; 2/5 is a convergent but 3/7 is closer.
        assert_eq!(best_approximation(&5i128, &12, &10), (3, 7));
    }
}
