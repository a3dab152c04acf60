//! Exact rational scalars.
//!
//! `Rat` is an arbitrary-precision rational, always stored in lowest
//! terms with a positive denominator. All arithmetic in this crate is
//! exact; nothing is ever rounded.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rational `p/q`. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Rat) -> Rat {
    x - x.floor()
}

/// Parses `"p"` or `"p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    s.trim()
        .parse::<Rat>()
        .map_err(|e| format!("invalid rational {s:?}: {e}"))
}

/// Canonical display form: `p` when the denominator is 1, else `p/q`.
pub fn format_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn is_nonnegative(x: &Rat) -> bool {
    !x.is_negative()
}

pub fn zero() -> Rat {
    Rat::zero()
}

pub fn one() -> Rat {
    Rat::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "-1", "3/4", "-7/2", "10"] {
            let x = parse_rat(s).unwrap();
            assert_eq!(format_rat(&x), s);
        }
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert!(parse_rat("1.5").is_err());
    }

    #[test]
    fn frac_lands_in_unit_interval() {
        assert_eq!(frac(&ratio(-5, 2)), ratio(1, 2));
        assert_eq!(frac(&rat(3)), rat(0));
        assert_eq!(frac(&ratio(7, 3)), ratio(1, 3));
    }
}
