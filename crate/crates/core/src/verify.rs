//! Sampling validation of the vertex-extremality hypothesis.
//!
//! The sweep's default evaluates per-word extrema at the three vertices
//! only. This module samples random words and random interior points and
//! checks, in exact arithmetic, whether any interior value of `q` or
//! `q/det^2` beats the vertex extremum beyond a relative tolerance. Any
//! finding is a hard diagnostic: it means the vertex default under- or
//! over-states that word's true extremum and finer evaluation modes are the
//! reference for per-word quantities.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::ifs::{word_count, word_product, Word};
use crate::rational::{big_to_f64, Rational};
use crate::simplex::{jacobian, SimplexPoint};
use crate::sweep::{word_stats, EvalMode, WordStats};

/// Relative slack allowed before an interior value counts as a violation.
pub const VERIFY_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n: u32,
    pub words: u32,
    pub points_per_word: u32,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n: 13,
            words: 1000,
            points_per_word: 1000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub word: String,
    pub quantity: &'static str,
    /// Relative amount by which the interior value beats the vertex
    /// extremum.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub n: u32,
    pub words_sampled: u32,
    pub points_per_word: u32,
    pub seed: u64,
    /// Worst `interior/vertex_max - 1` for `q/det^2`; positive means the
    /// vertex maximum was beaten.
    pub worst_rmax_margin: f64,
    /// Worst `interior/vertex_max - 1` for `q`.
    pub worst_qmax_margin: f64,
    /// Worst `vertex_min/interior - 1` for `q`; positive means the vertex
    /// minimum was undercut.
    pub worst_qmin_margin: f64,
    pub violation_count: u64,
    /// First violations, capped; enough to identify offending words.
    pub violations: Vec<Violation>,
    pub vacuous: bool,
    pub pass: bool,
}

const MAX_RECORDED: usize = 32;

fn tol_hi() -> Rational {
    // 1 + 1e-12, exactly.
    let t = BigInt::from(10u64.pow(12));
    Rational::new(&t + BigInt::from(1), t)
}

fn tol_lo() -> Rational {
    let t = BigInt::from(10u64.pow(12));
    Rational::new(&t - BigInt::from(1), t)
}

struct WordCheck {
    worst_rmax: f64,
    worst_qmax: f64,
    worst_qmin: f64,
    violations: Vec<Violation>,
}

/// Compare interior evaluations of one word against its vertex statistics.
fn check_word(stats: &WordStats, points: &[SimplexPoint]) -> Result<WordCheck> {
    let product = word_product(&stats.word)?;
    let hi = tol_hi();
    let lo = tol_lo();
    let rmax_cap = &stats.rmax * &hi;
    let qmax_cap = &stats.qmax * &hi;
    let qmin_floor = &stats.qmin * &lo;

    let mut out = WordCheck {
        worst_rmax: f64::NEG_INFINITY,
        worst_qmax: f64::NEG_INFINITY,
        worst_qmin: f64::NEG_INFINITY,
        violations: Vec::new(),
    };
    let push = |word: &Word, quantity: &'static str, margin: f64, list: &mut Vec<Violation>| {
        if list.len() < MAX_RECORDED {
            list.push(Violation {
                word: word.to_string(),
                quantity,
                margin,
            });
        }
    };
    for y in points {
        let j = jacobian(product.matrix(), y)?;
        let q = j.q();
        let r = j.q_over_det2()?;

        let m = big_to_f64(&(&r / &stats.rmax)) - 1.0;
        out.worst_rmax = out.worst_rmax.max(m);
        if r > rmax_cap {
            push(&stats.word, "q/det^2 above vertex max", m, &mut out.violations);
        }
        let m = big_to_f64(&(&q / &stats.qmax)) - 1.0;
        out.worst_qmax = out.worst_qmax.max(m);
        if q > qmax_cap {
            push(&stats.word, "q above vertex max", m, &mut out.violations);
        }
        let m = big_to_f64(&(&stats.qmin / &q)) - 1.0;
        out.worst_qmin = out.worst_qmin.max(m);
        if q < qmin_floor {
            push(&stats.word, "q below vertex min", m, &mut out.violations);
        }
    }
    Ok(out)
}

/// Run the sampling verifier.
pub fn verify_vertex_extremality(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut report = VerifyReport {
        n: cfg.n,
        words_sampled: cfg.words,
        points_per_word: cfg.points_per_word,
        seed: cfg.seed,
        worst_rmax_margin: f64::NEG_INFINITY,
        worst_qmax_margin: f64::NEG_INFINITY,
        worst_qmin_margin: f64::NEG_INFINITY,
        violation_count: 0,
        violations: Vec::new(),
        vacuous: cfg.words == 0 || cfg.points_per_word == 0,
        pass: true,
    };
    if report.vacuous {
        return Ok(report);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let total = 3u64.pow(cfg.n);
    let _ = word_count(cfg.n);
    for _ in 0..cfg.words {
        let word = loop {
            let index = rng.gen_range(0..total);
            if let Ok(w) = Word::from_index(cfg.n, index) {
                break w;
            }
        };
        let stats = word_stats(&word, &EvalMode::VertexOnly)?;
        let points: Vec<SimplexPoint> = (0..cfg.points_per_word)
            .map(|_| {
                let a = rng.gen_range(1u64..=65_536);
                let b = rng.gen_range(1u64..=65_536);
                let c = rng.gen_range(1u64..=65_536);
                SimplexPoint::from_weights(a, b, c).expect("positive weights")
            })
            .collect();
        let check = check_word(&stats, &points)?;
        report.worst_rmax_margin = report.worst_rmax_margin.max(check.worst_rmax);
        report.worst_qmax_margin = report.worst_qmax_margin.max(check.worst_qmax);
        report.worst_qmin_margin = report.worst_qmin_margin.max(check.worst_qmin);
        report.violation_count += check.violations.len() as u64;
        for v in check.violations {
            if report.violations.len() < MAX_RECORDED {
                report.violations.push(v);
            }
        }
    }
    report.pass = report.violation_count == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::big_ratio;

    #[test]
    fn vacuous_run_passes() {
        let report = verify_vertex_extremality(&VerifyConfig {
            n: 4,
            words: 0,
            points_per_word: 10,
            seed: 7,
        })
        .unwrap();
        assert!(report.vacuous);
        assert!(report.pass);
    }

    #[test]
    fn corrupted_vertex_stats_are_flagged() {
        let word = Word::new(vec![1, 2, 3]).unwrap();
        let mut stats = word_stats(&word, &EvalMode::VertexOnly).unwrap();
        // Cripple the recorded maximum; interior points must now beat it.
        stats.qmax = &stats.qmax * &big_ratio(1, 100);
        stats.rmax = &stats.rmax * &big_ratio(1, 100);
        let points = vec![SimplexPoint::barycenter()];
        let check = check_word(&stats, &points).unwrap();
        assert!(!check.violations.is_empty());
        assert!(check.worst_qmax > 0.0);
    }

    #[test]
    fn determinism_under_fixed_seed() {
        let cfg = VerifyConfig {
            n: 5,
            words: 8,
            points_per_word: 16,
            seed: 42,
        };
        let a = verify_vertex_extremality(&cfg).unwrap();
        let b = verify_vertex_extremality(&cfg).unwrap();
        assert_eq!(a, b);
    }
}
