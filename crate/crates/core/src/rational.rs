//! Exact rational scalars.
//!
//! Two representations are used throughout the crate:
//!
//! * [`Rational`] (arbitrary precision) for the general-purpose geometry
//!   routines, where nothing bounds the operands;
//! * [`Frac`] (`i128` numerator/denominator) for the bulk per-word tables,
//!   where the vertex statistics of branch products are provably small and
//!   a 32-byte value keeps millions of rows affordable.
//!
//! `Ratio<i128>` ordering in `num-rational` is implemented with the
//! continued-fraction algorithm, so comparisons never overflow even for
//! unreduced values; all other arithmetic on `Frac` in this crate goes
//! through explicitly checked `i128` operations.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = num_rational::BigRational;
pub type Frac = num_rational::Ratio<i128>;

/// Build an arbitrary-precision rational from machine integers.
pub fn big_ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Convert a compact fraction to arbitrary precision.
pub fn frac_to_big(x: &Frac) -> Rational {
    Rational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// Convert an arbitrary-precision rational to the compact form, if its
/// reduced numerator and denominator both fit in `i128`.
pub fn big_to_frac(x: &Rational) -> Option<Frac> {
    let num = x.numer().to_i128()?;
    let den = x.denom().to_i128()?;
    Some(Frac::new(num, den))
}

pub fn frac_to_f64(x: &Frac) -> f64 {
    // i128 -> f64 rounds; the quotient is accurate to ~1 ulp, plenty for
    // prefilter and reporting uses.
    *x.numer() as f64 / *x.denom() as f64
}

pub fn big_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Serialized view of an exact rational: decimal digit strings survive any
/// magnitude.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl RationalRepr {
    pub fn of_big(x: &Rational) -> Self {
        RationalRepr {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }

    pub fn of_frac(x: &Frac) -> Self {
        RationalRepr {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }

    pub fn parse(&self) -> Option<Rational> {
        let num: BigInt = self.num.parse().ok()?;
        let den: BigInt = self.den.parse().ok()?;
        if den.is_zero() {
            return None;
        }
        Some(Rational::new(num, den))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn repr_round_trip() {
        let x = big_ratio(-86185, 3);
        let repr = RationalRepr::of_big(&x);
        assert_eq!(repr.num, "-86185");
        assert_eq!(repr.den, "3");
        assert_eq!(repr.parse().unwrap(), x);
    }

    #[test]
    fn frac_conversions() {
        let f = Frac::new(64, 192);
        assert_eq!(*f.numer(), 1);
        assert_eq!(*f.denom(), 3);
        assert_eq!(big_to_frac(&frac_to_big(&f)).unwrap(), f);
    }

    #[test]
    fn unreduced_ordering_is_exact() {
        // 2^100/3 vs (2^100+1)/3, deliberately unreduced against a huge
        // common multiple.
        let a = Frac::new_raw(1 << 90, 3 << 20);
        let b = Frac::new_raw((1 << 90) + 3, 3 << 20);
        assert!(a < b);
    }
}
