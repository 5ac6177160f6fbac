//! The dimension lower bound `s0 = 1 + (c - a)/b`.
//!
//! With `a` the log of the largest expanded-derivative norm bound, `b` the
//! log of the reciprocal smallest inverse-derivative norm bound and
//! `c` the log of the branch count, the repeller's Hausdorff dimension is at
//! least `1 + (c - a)/b` whenever the branches are uniformly expanding.
//! Only this closed form is evaluated; no pressure equation is solved.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::logs::{fixed_to_f64, ln_fixed, ln_rational_f64};
use crate::rational::Rational;
use crate::sweep::SweepResult;

/// Exact inputs: `exp(2a)`, `exp(2b)` and the branch count `exp(c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundInputs {
    pub exp2a: Rational,
    pub exp2b: Rational,
    pub word_count: u64,
}

impl From<&SweepResult> for BoundInputs {
    fn from(sweep: &SweepResult) -> Self {
        BoundInputs {
            exp2a: sweep.exp2a.clone(),
            exp2b: sweep.exp2b.clone(),
            word_count: sweep.word_count,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundFlags {
    /// `b > 0`; required for the bound to make sense at all.
    pub b_positive: bool,
    /// `c > a` (checked exactly as `count^2 > exp(2a)`); when false the
    /// bound degenerates to `s0 <= 1` and is only reported, not used.
    pub c_exceeds_a: bool,
    /// `1 <= s0 <= 2`, the parameter range of the surface-repeller bound.
    pub s0_in_range: bool,
}

impl BoundFlags {
    pub fn nontrivial(&self) -> bool {
        self.b_positive && self.c_exceeds_a && self.s0_in_range
    }
}

/// Dimension lower bound with its exact companions. Every decimal field is
/// recomputable from `exp2a`, `exp2b` and `word_count` alone.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// `a = log max-norm bound` (natural log).
    pub a: f64,
    /// `b = log reciprocal min-inverse-norm bound`.
    pub b: f64,
    /// `c = log word_count`.
    pub c: f64,
    /// `1 + (c - a)/b`.
    pub s0: f64,
    pub exp2a: Rational,
    pub exp2b: Rational,
    pub word_count: u64,
    pub flags: BoundFlags,
}

pub fn dimension_lower_bound(inputs: &BoundInputs) -> Result<BoundReport> {
    if inputs.word_count < 2 {
        return Err(Error::InvalidBound(format!(
            "word count {} is below 2",
            inputs.word_count
        )));
    }
    if !inputs.exp2a.is_positive() || !inputs.exp2b.is_positive() {
        return Err(Error::InvalidBound(
            "exp(2a) and exp(2b) must be positive".into(),
        ));
    }
    // b <= 0  <=>  exp(2b) <= 1.
    if inputs.exp2b <= Rational::one() {
        return Err(Error::InvalidBound(
            "b <= 0: the smallest inverse-derivative bound does not certify expansion".into(),
        ));
    }

    let a = 0.5 * ln_rational_f64(&inputs.exp2a);
    let b = 0.5 * ln_rational_f64(&inputs.exp2b);
    let c = (inputs.word_count as f64).ln();

    // Evaluate c - a as half a single logarithm of count^2 / exp(2a): this
    // is exact when the ratio is 1 and loses nothing otherwise.
    let count_sq = Rational::from_integer(BigInt::from(inputs.word_count)).pow(2);
    let ratio = &count_sq / &inputs.exp2a;
    let c_minus_a = 0.5 * ln_rational_f64(&ratio);
    let s0 = 1.0 + c_minus_a / b;

    let flags = BoundFlags {
        b_positive: true,
        c_exceeds_a: count_sq > inputs.exp2a,
        s0_in_range: (1.0..=2.0).contains(&s0),
    };
    Ok(BoundReport {
        a,
        b,
        c,
        s0,
        exp2a: inputs.exp2a.clone(),
        exp2b: inputs.exp2b.clone(),
        word_count: inputs.word_count,
        flags,
    })
}

impl BoundReport {
    /// Recompute `s0` from the exact companions in fixed-point decimal
    /// arithmetic with the requested number of digits.
    pub fn s0_high_precision(&self, digits: u32) -> Result<f64> {
        let count_sq =
            Rational::from_integer(BigInt::from(self.word_count)).pow(2);
        let ratio = &count_sq / &self.exp2a;
        let num = ln_fixed(&ratio, digits)?; // 2(c - a), scaled
        let den = ln_fixed(&self.exp2b, digits)?; // 2b, scaled
        let scale = BigInt::from(10u32).pow(digits);
        let quotient = (num * &scale) / den; // (c - a)/b, scaled
        Ok(1.0 + fixed_to_f64(&quotient, digits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    fn full_inputs() -> BoundInputs {
        BoundInputs {
            exp2a: big_ratio(886_952_587_840, 3),
            exp2b: big_ratio(48_358_655_787_008, 1595),
            word_count: 1_594_320,
        }
    }

    fn pruned_inputs() -> BoundInputs {
        // 6800^2 * 829/3 and 615627^2 * 3/515.
        BoundInputs {
            exp2a: big_ratio(38_332_960_000, 3),
            exp2b: big_ratio(1_136_989_809_387, 515),
            word_count: 898_224,
        }
    }

    #[test]
    fn full_sweep_bound() {
        let report = dimension_lower_bound(&full_inputs()).unwrap();
        assert!(report.s0 > 1.08, "s0 = {}", report.s0);
        assert!((report.s0 - 1.0891).abs() < 1e-3);
        assert!(report.flags.nontrivial());
    }

    #[test]
    fn pruned_bound() {
        let report = dimension_lower_bound(&pruned_inputs()).unwrap();
        assert!(report.s0 > 1.19, "s0 = {}", report.s0);
        assert!((report.s0 - 1.1926).abs() < 1e-3);
        assert!(report.flags.nontrivial());
    }

    #[test]
    fn equal_c_and_a_is_exactly_one() {
        let report = dimension_lower_bound(&BoundInputs {
            exp2a: big_ratio(36, 1),
            exp2b: big_ratio(100, 1),
            word_count: 6,
        })
        .unwrap();
        assert_eq!(report.s0, 1.0);
        assert!(!report.flags.c_exceeds_a);
    }

    #[test]
    fn nonpositive_b_is_rejected() {
        let mut inputs = full_inputs();
        inputs.exp2b = big_ratio(1, 2);
        assert!(matches!(
            dimension_lower_bound(&inputs),
            Err(Error::InvalidBound(_))
        ));
    }

    #[test]
    fn monotonicity() {
        let base = dimension_lower_bound(&full_inputs()).unwrap().s0;

        let mut more_words = full_inputs();
        more_words.word_count *= 2;
        assert!(dimension_lower_bound(&more_words).unwrap().s0 > base);

        let mut bigger_a = full_inputs();
        bigger_a.exp2a = &bigger_a.exp2a * &big_ratio(4, 1);
        assert!(dimension_lower_bound(&bigger_a).unwrap().s0 < base);

        // c > a here, so growing b drags s0 toward 1.
        let mut bigger_b = full_inputs();
        bigger_b.exp2b = &bigger_b.exp2b * &big_ratio(4, 1);
        assert!(dimension_lower_bound(&bigger_b).unwrap().s0 < base);
    }

    #[test]
    fn high_precision_agrees_with_f64() {
        for inputs in [full_inputs(), pruned_inputs()] {
            let report = dimension_lower_bound(&inputs).unwrap();
            let precise = report.s0_high_precision(60).unwrap();
            assert!(
                (precise - report.s0).abs() < 1e-12,
                "{} vs {}",
                precise,
                report.s0
            );
        }
    }
}
