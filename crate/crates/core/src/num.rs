//! Exact arithmetic primitives: arbitrary-precision integers and rationals.
//!
//! Everything in this crate computes over `ℚ`; there is no floating point.
//! `BigRational` already maintains the invariants the kernel relies on
//! (lowest terms, positive denominator), so this module only adds the small
//! vector utilities and the `"p/q"` string format used by the JSON layer.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Int = BigInt;
pub type Rat = BigRational;

/// Shorthand for an integer constant.
pub fn int(v: i64) -> Int {
    Int::from(v)
}

/// Shorthand for a rational constant `p/q`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(Int::from(p), Int::from(q))
}

/// Integer as a rational.
pub fn ratz(v: i64) -> Rat {
    Rat::from_integer(Int::from(v))
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| ratz(x)).collect()
}

/// Parses the `"p/q"` wire format (plain `"p"` is accepted as `p/1`).
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidInput(format!("malformed rational {s:?}"));
    let mut parts = s.splitn(2, '/');
    let p: Int = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    match parts.next() {
        None => Ok(Rat::from_integer(p)),
        Some(q) => {
            let q: Int = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
    }
}

/// Formats a rational in the `"p/q"` wire format; integers drop the `/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn dot_int(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_int_rat(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| Rat::from_integer(x.clone()) * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn add_rat_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_rat_vec(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_rat_vec(a: &[Rat], c: &Rat) -> Vec<Rat> {
    a.iter().map(|x| x * c).collect()
}

pub fn neg_int_vec(a: &[Int]) -> Vec<Int> {
    a.iter().map(|x| -x).collect()
}

pub fn int_to_rat_vec(a: &[Int]) -> Vec<Rat> {
    a.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Exact integer part of a rational rounded toward −∞.
pub fn floor_rat(r: &Rat) -> Int {
    r.floor().to_integer()
}

/// Exact integer part of a rational rounded toward +∞.
pub fn ceil_rat(r: &Rat) -> Int {
    r.ceil().to_integer()
}

/// True if the rational is an integer.
pub fn is_integral(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Divides an integer vector by the gcd of its entries.
///
/// The zero vector is returned unchanged. The orientation is preserved, so
/// primitive representatives of opposite rays stay distinct.
pub fn primitive_int_vec(v: &[Int]) -> Vec<Int> {
    let mut g = Int::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Scales a rational vector to its primitive integer representative.
///
/// Multiplies by the lcm of denominators, then divides by the gcd; the
/// direction is preserved. Returns the zero vector for zero input.
pub fn primitive_of_rat_vec(v: &[Rat]) -> Vec<Int> {
    let mut l = Int::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<Int> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive_int_vec(&ints)
}

/// Least common multiple of the denominators in a rational vector.
pub fn denom_lcm(v: &[Rat]) -> Int {
    let mut l = Int::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    l
}

/// Lexicographic comparison of rational vectors.
pub fn lex_cmp_rat(a: &[Rat], b: &[Rat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Lexicographic comparison of integer vectors.
pub fn lex_cmp_int(a: &[Int], b: &[Int]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Signum of the first nonzero entry, or 0 for the zero vector.
pub fn leading_sign(v: &[Int]) -> i32 {
    for x in v {
        if x.is_positive() {
            return 1;
        }
        if x.is_negative() {
            return -1;
        }
    }
    0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_wire_format_round_trips() {
        for s in ["3/4", "-7/2", "5", "0", "-12"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(parse_rat(&format_rat(&r)).unwrap(), r);
        }
        assert_eq!(parse_rat("6/4").unwrap(), rat(3, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn primitive_vectors() {
        assert_eq!(primitive_int_vec(&int_vec(&[4, -6, 2])), int_vec(&[2, -3, 1]));
        assert_eq!(primitive_int_vec(&int_vec(&[0, 0])), int_vec(&[0, 0]));
        let v = vec![rat(1, 2), rat(-3, 4)];
        assert_eq!(primitive_of_rat_vec(&v), int_vec(&[2, -3]));
    }
}
