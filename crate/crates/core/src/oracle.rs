//! Independent reference statistics for small word lengths.
//!
//! The oracle never forms branch products or uses the closed-form basis
//! Jacobian: it composes the generator maps pointwise in floating point and
//! differentiates numerically (central differences with one Richardson
//! extrapolation step). Agreement with the exact pipeline validates the
//! product construction, the composition order and the basis bookkeeping
//! all at once.

use crate::error::{Error, Result};
use crate::ifs::{enumerate_words, GeneratorSet, Word};
use crate::rational::big_to_f64;
use crate::simplex::{basis_coords_f64, projective_apply_f64, Jacobian2F};
use crate::sweep::{word_stats, EvalMode};

/// Cost guard: `3^n` words, each differentiated numerically.
pub const MAX_ORACLE_LEN: u32 = 6;

/// Relative agreement demanded between the oracle and the exact pipeline.
pub const ORACLE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleStats {
    pub word: Word,
    pub rmax: f64,
    pub qmin: f64,
    pub qmax: f64,
}

/// Apply the branch map of `word` pointwise: first symbol first.
fn apply_word(word: &[u8], y: [f64; 3], reversed: bool) -> [f64; 3] {
    let gens = GeneratorSet::standard();
    let mut z = y;
    if reversed {
        for &s in word.iter().rev() {
            z = projective_apply_f64(gens.generator(s), z);
        }
    } else {
        for &s in word {
            z = projective_apply_f64(gens.generator(s), z);
        }
    }
    z
}

/// Jacobian column along direction `v` by central differences at step `h`.
fn fd_column(word: &[u8], y: [f64; 3], v: [f64; 3], h: f64, reversed: bool) -> [f64; 2] {
    let plus = apply_word(
        word,
        [y[0] + h * v[0], y[1] + h * v[1], y[2] + h * v[2]],
        reversed,
    );
    let minus = apply_word(
        word,
        [y[0] - h * v[0], y[1] - h * v[1], y[2] - h * v[2]],
        reversed,
    );
    let diff = [
        (plus[0] - minus[0]) / (2.0 * h),
        (plus[1] - minus[1]) / (2.0 * h),
        (plus[2] - minus[2]) / (2.0 * h),
    ];
    basis_coords_f64(diff)
}

fn fd_jacobian(word: &[u8], y: [f64; 3], reversed: bool) -> Jacobian2F {
    // Central differences are O(h^2); one Richardson step removes that term,
    // leaving O(h^4) truncation with rounding ~eps/h. h = 1e-3 balances both
    // far below the comparison tolerance.
    let h = 1e-3;
    let s3 = 3f64.sqrt();
    let basis = [[1.0, -1.0, 0.0], [-1.0 / s3, -1.0 / s3, 2.0 / s3]];
    let mut m = [[0.0f64; 2]; 2];
    for (j, v) in basis.iter().enumerate() {
        let coarse = fd_column(word, y, *v, h, reversed);
        let fine = fd_column(word, y, *v, h / 2.0, reversed);
        for i in 0..2 {
            m[i][j] = (4.0 * fine[i] - coarse[i]) / 3.0;
        }
    }
    Jacobian2F { m }
}

fn oracle_stats_with_order(word: &Word, reversed: bool) -> OracleStats {
    let mut rmax = f64::NEG_INFINITY;
    let mut qmin = f64::INFINITY;
    let mut qmax = f64::NEG_INFINITY;
    for k in 0..3 {
        let mut y = [0.0f64; 3];
        y[k] = 1.0;
        let j = fd_jacobian(word.symbols(), y, reversed);
        let q = j.q();
        let det = j.det();
        rmax = rmax.max(q / (det * det));
        qmin = qmin.min(q);
        qmax = qmax.max(q);
    }
    OracleStats {
        word: word.clone(),
        rmax,
        qmin,
        qmax,
    }
}

/// Vertex statistics of one word by pointwise composition and numerical
/// differentiation.
pub fn oracle_word_stats(word: &Word) -> OracleStats {
    oracle_stats_with_order(word, false)
}

/// Same oracle with the composition order deliberately transposed; used to
/// confirm that the comparison is sensitive to the orientation convention.
pub fn oracle_word_stats_reversed(word: &Word) -> OracleStats {
    oracle_stats_with_order(word, true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub n: u32,
    pub words: u64,
    pub tolerance: f64,
    pub max_rel_rmax: f64,
    pub max_rel_qmin: f64,
    pub max_rel_qmax: f64,
    pub worst_word: Option<Word>,
    pub pass: bool,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Compare the oracle against the exact pipeline for every word of length
/// `n`, vertex evaluation.
pub fn compare_with_pipeline(n: u32) -> Result<OracleComparison> {
    if n > MAX_ORACLE_LEN {
        return Err(Error::InvalidConfig(format!(
            "oracle words are limited to length {MAX_ORACLE_LEN} (requested {n})"
        )));
    }
    let mut cmp = OracleComparison {
        n,
        words: 0,
        tolerance: ORACLE_TOLERANCE,
        max_rel_rmax: 0.0,
        max_rel_qmin: 0.0,
        max_rel_qmax: 0.0,
        worst_word: None,
        pass: true,
    };
    for word in enumerate_words(n)? {
        let exact = word_stats(&word, &EvalMode::VertexOnly)?;
        let fd = oracle_word_stats(&word);
        let dr = rel(fd.rmax, big_to_f64(&exact.rmax));
        let dqn = rel(fd.qmin, big_to_f64(&exact.qmin));
        let dqx = rel(fd.qmax, big_to_f64(&exact.qmax));
        let word_worst = dr.max(dqn).max(dqx);
        if word_worst > cmp.max_rel_rmax.max(cmp.max_rel_qmin).max(cmp.max_rel_qmax) {
            cmp.worst_word = Some(word.clone());
        }
        cmp.max_rel_rmax = cmp.max_rel_rmax.max(dr);
        cmp.max_rel_qmin = cmp.max_rel_qmin.max(dqn);
        cmp.max_rel_qmax = cmp.max_rel_qmax.max(dqx);
        cmp.words += 1;
    }
    cmp.pass = cmp.max_rel_rmax <= ORACLE_TOLERANCE
        && cmp.max_rel_qmin <= ORACLE_TOLERANCE
        && cmp.max_rel_qmax <= ORACLE_TOLERANCE;
    Ok(cmp)
}
