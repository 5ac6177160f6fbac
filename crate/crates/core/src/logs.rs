//! Natural logarithms of exact rationals.
//!
//! Reported decimals are doubles, but two places need more: re-deriving
//! every decimal in a report from its exact companions, and breaking
//! near-ties between pruning scores (which are quotients of logarithms and
//! therefore not rational). [`ln_fixed`] evaluates `ln` of a positive
//! rational in fixed-point decimal arithmetic at a caller-chosen precision
//! via `ln x = k ln 2 + 2 atanh((m-1)/(m+1))` with `m = x / 2^k` brought
//! into `[2/3, 4/3]`.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// `ln(x)` scaled by `10^digits`, accurate to a few last-place units.
pub fn ln_fixed(x: &Rational, digits: u32) -> Result<BigInt> {
    if !x.is_positive() {
        return Err(Error::InvalidBound(format!(
            "logarithm of a non-positive rational {x}"
        )));
    }
    let scale = BigInt::from(10u32).pow(digits);

    // Peel powers of two until the mantissa sits in [2/3, 4/3]. The first
    // guess from bit lengths lands within a step or two.
    let mut k: i64 = x.numer().bits() as i64 - x.denom().bits() as i64;
    let mut m = if k >= 0 {
        Rational::new(x.numer().clone(), x.denom() << k as u64)
    } else {
        Rational::new(x.numer() << (-k) as u64, x.denom().clone())
    };
    let lo = Rational::new(BigInt::from(2), BigInt::from(3));
    let hi = Rational::new(BigInt::from(4), BigInt::from(3));
    let two = Rational::from_integer(BigInt::from(2));
    while m > hi {
        m = &m / &two;
        k += 1;
    }
    while m < lo {
        m = &m * &two;
        k -= 1;
    }

    let t = &(&m - &Rational::from_integer(BigInt::from(1)))
        / &(&m + &Rational::from_integer(BigInt::from(1)));
    let ln_m = atanh_fixed(&t, &scale) * 2;
    let ln2 = ln2_fixed(&scale);
    Ok(ln_m + ln2 * BigInt::from(k))
}

/// `ln 2 = 2 atanh(1/3)` at the given scale.
fn ln2_fixed(scale: &BigInt) -> BigInt {
    let third = Rational::new(BigInt::from(1), BigInt::from(3));
    atanh_fixed(&third, scale) * 2
}

/// `atanh(t) = t + t^3/3 + t^5/5 + ...` in fixed point; |t| <= 1/2 is
/// assumed, so the series gains at least two bits per term.
fn atanh_fixed(t: &Rational, scale: &BigInt) -> BigInt {
    let t_fixed = (t.numer() * scale) / t.denom();
    let t2_fixed = (&t_fixed * &t_fixed) / scale;
    let mut term = t_fixed;
    let mut sum = term.clone();
    let mut odd = BigInt::from(1);
    while !term.is_zero() {
        // Truncating division drives |term| to zero even for negative t.
        term = (&term * &t2_fixed) / scale;
        odd += 2;
        if term.is_zero() {
            break;
        }
        sum += &term / &odd;
    }
    sum
}

/// Convert a fixed-point value back to a double.
pub fn fixed_to_f64(value: &BigInt, digits: u32) -> f64 {
    let v = value.to_f64().unwrap_or(f64::NAN);
    v / 10f64.powi(digits as i32)
}

/// `ln` of a positive rational as a double, robust to magnitudes far beyond
/// the `f64` range: both integers are reduced by their bit length first.
pub fn ln_rational_f64(x: &Rational) -> f64 {
    ln_bigint_f64(x.numer()) - ln_bigint_f64(x.denom())
}

fn ln_bigint_f64(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::NAN);
    }
    let shift = bits - 52;
    let top: BigInt = x >> shift;
    top.to_f64().map(f64::ln).unwrap_or(f64::NAN) + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    #[test]
    fn fixed_ln_matches_f64() {
        for (n, d) in [(2, 1), (3, 1), (1, 3), (86185, 3), (1595, 7), (1, 1)] {
            let x = big_ratio(n, d);
            let fixed = ln_fixed(&x, 60).unwrap();
            let expect = (n as f64 / d as f64).ln();
            assert!(
                (fixed_to_f64(&fixed, 60) - expect).abs() <= 1e-12 * (1.0 + expect.abs()),
                "ln({n}/{d})"
            );
        }
    }

    #[test]
    fn fixed_ln_of_powers_of_two() {
        let x = Rational::from_integer(BigInt::from(1) << 100);
        let fixed = ln_fixed(&x, 60).unwrap();
        let expect = 100.0 * std::f64::consts::LN_2;
        assert!((fixed_to_f64(&fixed, 60) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn ln_is_antisymmetric_under_reciprocal() {
        let x = big_ratio(48_358_655_787_008, 1595);
        let up = ln_fixed(&x, 50).unwrap();
        let down = ln_fixed(&x.recip(), 50).unwrap();
        let err = (&up + &down).magnitude().to_f64().unwrap();
        assert!(err <= 1e4, "cancellation left {err} ulps at 1e-50");
    }

    #[test]
    fn ln_f64_handles_huge_values() {
        let x = Rational::from_integer(BigInt::from(3).pow(5000));
        let expect = 5000.0 * 3f64.ln();
        assert!((ln_rational_f64(&x) - expect).abs() < 1e-9 * expect);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(ln_fixed(&big_ratio(0, 1), 10).is_err());
        assert!(ln_fixed(&big_ratio(-2, 1), 10).is_err());
    }
}
