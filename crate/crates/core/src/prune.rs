//! Iterated rank-based pruning of the branch set.
//!
//! Each round trades branch count against derivative bounds in four steps:
//!
//! 1. rank the working set by `A_i = (max norm)^2`, ascending;
//! 2. keep the words up to the rank maximizing `rank^2 / A` (the cutoff
//!    word's norm becomes the cap `a'`);
//! 3. rank the survivors by `B_i = (min inverse norm)^2`, descending;
//! 4. keep the words up to the rank maximizing
//!    `(log rank^2 - log A*) / log(1/B)`, which fixes the new constants
//!    `b`, `c` and (after a rescan) `a`.
//!
//! Rounds repeat on the retained set until it stops changing. All sort keys
//! are exact rationals with the lexicographic word order as secondary key,
//! so ranks are reproducible. Step-2 scores are compared exactly (the log is
//! monotone, so `rank^2/A` decides). Step-4 scores are genuine quotients of
//! logarithms: candidates within a `1e-9` double-precision window are
//! re-compared in 60-digit fixed point, and only differences below 1e-50
//! are treated as ties, which then resolve by rank.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::bound::{dimension_lower_bound, BoundInputs, BoundReport};
use crate::error::{Error, Result};
use crate::ifs::Word;
use crate::logs::{ln_fixed, ln_rational_f64};
use crate::rational::{frac_to_big, frac_to_f64, Frac, Rational};
use crate::sweep::StatsTable;

/// Barycentric grid resolution whose per-word statistics the pruning
/// pipeline treats as the reference.
///
/// Per-word extrema are not always attained at the vertices: sampling finds
/// interior dips of the minimum of `q` for about 6% of the length-13 words
/// (and small interior excesses of the maxima for ~0.1%). The global sweep
/// constants are unaffected, but the pruning cutoffs are sensitive to the
/// per-word values. The fixed point computed from grid statistics is
/// identical for resolutions 6, 12 and 24, so the coarsest stable
/// resolution is the reference; vertex statistics remain available for
/// comparison and keep the same `a`, `b` at a slightly larger retained set.
pub const REFERENCE_PRUNE_GRID: u32 = 6;

/// Maximizer selection when scores tie exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Keep the larger set (the default).
    LargestRank,
    /// Alternate documented variant.
    SmallestRank,
}

#[derive(Debug, Clone)]
pub struct PruneConfig {
    pub tie_break: TieBreak,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            tie_break: TieBreak::LargestRank,
        }
    }
}

/// A word of the current working set with its two pruning keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankedWord {
    pub index: u64,
    /// `(max norm)^2 = rmax`.
    pub a: Frac,
    /// `(min inverse norm)^2 = qmin / 2`.
    pub b: Frac,
}

/// Step-2 outcome: 1-based cutoff rank in the ascending-`A` order and the
/// retained norm cap `A* = A_{i*}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormPivot {
    pub rank: usize,
    pub cap: Frac,
}

/// Step-4 outcome: 1-based cutoff rank in the descending-`B` order and the
/// contraction floor `B** = B_{i**}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversePivot {
    pub rank: usize,
    pub floor: Frac,
}

/// One executed round of the heuristic.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTrace {
    pub round: u32,
    pub set_size: u64,
    pub i_star: String,
    pub i_starstar: String,
    pub a_prime: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneOutcome {
    pub n: u32,
    pub rounds: u32,
    pub trace: Vec<RoundTrace>,
    /// Lexicographic indices of the fixed-point word set.
    pub retained: Vec<u64>,
    pub retained_count: u64,
    pub exp2a: Rational,
    pub exp2b: Rational,
    pub bound: BoundReport,
}

// ---------------------------------------------------------------------------
// Step 2
// ---------------------------------------------------------------------------

/// Exact comparison of `r1^2 / a1` against `r2^2 / a2` for positive `a`.
fn cmp_norm_score(r1: usize, a1: &Frac, r2: usize, a2: &Frac) -> Ordering {
    let lhs = BigInt::from(r1) * BigInt::from(r1) * BigInt::from(*a1.denom())
        * BigInt::from(*a2.numer());
    let rhs = BigInt::from(r2) * BigInt::from(r2) * BigInt::from(*a2.denom())
        * BigInt::from(*a1.numer());
    lhs.cmp(&rhs)
}

/// Step 2: given the working set sorted ascending by `(A, index)`, find the
/// rank maximizing `rank^2 / A` (equivalently `log rank - log sqrt(A)`).
pub fn select_norm_pivot(sorted_by_a: &[RankedWord], tie: TieBreak) -> Result<NormPivot> {
    if sorted_by_a.is_empty() {
        return Err(Error::EmptySet);
    }
    // Double-precision prefilter, then exact comparison of the survivors.
    let mut best_f = f64::NEG_INFINITY;
    for (pos, entry) in sorted_by_a.iter().enumerate() {
        let score = 2.0 * ((pos + 1) as f64).ln() - frac_to_f64(&entry.a).ln();
        if score > best_f {
            best_f = score;
        }
    }
    let slack = 1e-9 * (1.0 + best_f.abs());
    let mut best: Option<usize> = None; // 1-based rank
    for (pos, entry) in sorted_by_a.iter().enumerate() {
        let rank = pos + 1;
        let score = 2.0 * (rank as f64).ln() - frac_to_f64(&entry.a).ln();
        if score < best_f - slack {
            continue;
        }
        best = Some(match best {
            None => rank,
            Some(cur) => match cmp_norm_score(rank, &entry.a, cur, &sorted_by_a[cur - 1].a) {
                Ordering::Greater => rank,
                Ordering::Less => cur,
                Ordering::Equal => match tie {
                    TieBreak::LargestRank => rank.max(cur),
                    TieBreak::SmallestRank => rank.min(cur),
                },
            },
        });
    }
    let rank = best.expect("nonempty set always yields a pivot");
    Ok(NormPivot {
        rank,
        cap: sorted_by_a[rank - 1].a,
    })
}

// ---------------------------------------------------------------------------
// Step 4
// ---------------------------------------------------------------------------

/// Fixed-point precision for near-tie refinement of step-4 scores.
const SCORE_DIGITS: u32 = 60;
/// Products of two 60-digit logs are scaled by 10^120; differences below
/// 10^70 (1e-50 relative) count as exact ties.
const TIE_MARGIN_POWER: u32 = 70;

struct InverseScore {
    rank: usize,
    /// `rank^2 / A*`, the argument of the numerator log.
    numer_arg: Rational,
    /// `1 / B`, the argument of the (positive) denominator log.
    denom_arg: Rational,
}

impl InverseScore {
    fn new(rank: usize, b: &Frac, cap: &Frac) -> Self {
        let r2 = BigInt::from(rank) * BigInt::from(rank);
        let numer_arg = &Rational::from_integer(r2) / &frac_to_big(cap);
        let denom_arg = frac_to_big(b).recip();
        InverseScore {
            rank,
            numer_arg,
            denom_arg,
        }
    }

    fn value_f64(&self) -> f64 {
        ln_rational_f64(&self.numer_arg) / ln_rational_f64(&self.denom_arg)
    }

    /// Cross-multiplied 60-digit logs, with the tie band.
    fn cmp_precise(&self, other: &InverseScore) -> Result<Ordering> {
        let ln_n1 = ln_fixed(&self.numer_arg, SCORE_DIGITS)?;
        let ln_d1 = ln_fixed(&self.denom_arg, SCORE_DIGITS)?;
        let ln_n2 = ln_fixed(&other.numer_arg, SCORE_DIGITS)?;
        let ln_d2 = ln_fixed(&other.denom_arg, SCORE_DIGITS)?;
        let diff = ln_n1 * ln_d2 - ln_n2 * ln_d1;
        let margin = BigInt::from(10u32).pow(SCORE_DIGITS + TIE_MARGIN_POWER);
        if diff.magnitude() <= margin.magnitude() {
            Ok(Ordering::Equal)
        } else if diff > BigInt::from(0) {
            Ok(Ordering::Greater)
        } else {
            Ok(Ordering::Less)
        }
    }
}

/// Step 4: given the step-2 survivors sorted descending by `(B, index)` and
/// the norm cap `A*`, find the rank maximizing
/// `(log rank^2 - log A*) / log(1/B)`. Fails if any `B >= 1`.
pub fn select_inverse_pivot(
    sorted_by_b: &[RankedWord],
    cap: &Frac,
    tie: TieBreak,
) -> Result<InversePivot> {
    if sorted_by_b.is_empty() {
        return Err(Error::EmptySet);
    }
    // Descending order puts the largest B first.
    let largest = &sorted_by_b[0];
    if largest.b >= Frac::new(1, 1) {
        return Err(Error::NonContracting {
            word: largest.index.to_string(),
        });
    }

    let mut best_f = f64::NEG_INFINITY;
    for (pos, entry) in sorted_by_b.iter().enumerate() {
        let s = InverseScore::new(pos + 1, &entry.b, cap).value_f64();
        if s > best_f {
            best_f = s;
        }
    }
    let slack = 1e-9 * (1.0 + best_f.abs());
    let mut best: Option<InverseScore> = None;
    for (pos, entry) in sorted_by_b.iter().enumerate() {
        let rank = pos + 1;
        let score = InverseScore::new(rank, &entry.b, cap);
        if score.value_f64() < best_f - slack {
            continue;
        }
        best = Some(match best {
            None => score,
            Some(cur) => match score.cmp_precise(&cur)? {
                Ordering::Greater => score,
                Ordering::Less => cur,
                Ordering::Equal => match tie {
                    TieBreak::LargestRank => {
                        if score.rank > cur.rank {
                            score
                        } else {
                            cur
                        }
                    }
                    TieBreak::SmallestRank => {
                        if score.rank < cur.rank {
                            score
                        } else {
                            cur
                        }
                    }
                },
            },
        });
    }
    let chosen = best.expect("nonempty set always yields a pivot");
    Ok(InversePivot {
        rank: chosen.rank,
        floor: sorted_by_b[chosen.rank - 1].b,
    })
}

// ---------------------------------------------------------------------------
// The fixed-point loop
// ---------------------------------------------------------------------------

fn entry_of_row(row: &crate::sweep::StatsRow) -> Result<RankedWord> {
    let b_den = row
        .qmin
        .denom()
        .checked_mul(2)
        .ok_or(Error::Overflow("inverse-norm key"))?;
    Ok(RankedWord {
        index: row.index,
        a: row.rmax,
        b: Frac::new(*row.qmin.numer(), b_den),
    })
}

/// Run the heuristic to its fixed point on a full per-word table.
///
/// Per-word statistics are those of the full map and are never recomputed
/// on the shrunken sets; only ranks change between rounds.
pub fn prune_to_fixed_point(table: &StatsTable, cfg: &PruneConfig) -> Result<PruneOutcome> {
    if table.rows.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut working: Vec<RankedWord> = table
        .rows
        .iter()
        .map(entry_of_row)
        .collect::<Result<Vec<_>>>()?;

    let mut trace: Vec<RoundTrace> = Vec::new();
    let mut round: u32 = 0;
    loop {
        round += 1;

        // Step 1: ascending (A, index).
        let mut by_a = working.clone();
        by_a.sort_unstable_by(|x, y| x.a.cmp(&y.a).then(x.index.cmp(&y.index)));

        // Step 2.
        let norm = select_norm_pivot(&by_a, cfg.tie_break)?;
        let survivors = &by_a[..norm.rank];

        // Step 3: descending (B), lexicographic secondary.
        let mut by_b: Vec<RankedWord> = survivors.to_vec();
        by_b.sort_unstable_by(|x, y| y.b.cmp(&x.b).then(x.index.cmp(&y.index)));

        // Step 4.
        let inverse = select_inverse_pivot(&by_b, &norm.cap, cfg.tie_break)?;
        let mut retained: Vec<RankedWord> = by_b[..inverse.rank].to_vec();
        retained.sort_unstable_by_key(|e| e.index);

        // Constants of this round: b and c from the cutoff, a rescanned over
        // the retained set (it may drop below a').
        let exp2a_round = retained
            .iter()
            .map(|e| e.a)
            .max()
            .expect("retained set is nonempty");
        let exp2b_round = frac_to_big(&inverse.floor).recip();
        let count = retained.len() as u64;

        let a = 0.5 * ln_rational_f64(&frac_to_big(&exp2a_round));
        let b = 0.5 * ln_rational_f64(&exp2b_round);
        let c = (count as f64).ln();
        trace.push(RoundTrace {
            round,
            set_size: working.len() as u64,
            i_star: Word::from_index(table.n, by_a[norm.rank - 1].index)?.to_string(),
            i_starstar: Word::from_index(table.n, by_b[inverse.rank - 1].index)?.to_string(),
            a_prime: 0.5 * ln_rational_f64(&frac_to_big(&norm.cap)),
            a,
            b,
            c,
            s0: 1.0 + (c - a) / b,
        });

        if retained.len() == working.len() {
            // Fixed point: the retained set is always a subset of the
            // working set, so equal sizes mean equality.
            let inputs = BoundInputs {
                exp2a: frac_to_big(&exp2a_round),
                exp2b: exp2b_round.clone(),
                word_count: count,
            };
            let bound = dimension_lower_bound(&inputs)?;
            return Ok(PruneOutcome {
                n: table.n,
                rounds: round,
                trace,
                retained: retained.iter().map(|e| e.index).collect(),
                retained_count: count,
                exp2a: inputs.exp2a,
                exp2b: inputs.exp2b,
                bound,
            });
        }
        working = retained;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{sweep, SweepConfig};

    fn entry(index: u64, a: Frac, b: Frac) -> RankedWord {
        RankedWord { index, a, b }
    }

    #[test]
    fn norm_pivot_of_two_words() {
        // A = (4, 9): scores r^2/A are 1/4 and 4/9; the second rank wins and
        // both words are kept.
        let sorted = vec![
            entry(0, Frac::new(4, 1), Frac::new(1, 8)),
            entry(1, Frac::new(9, 1), Frac::new(1, 8)),
        ];
        let pivot = select_norm_pivot(&sorted, TieBreak::LargestRank).unwrap();
        assert_eq!(pivot.rank, 2);
        assert_eq!(pivot.cap, Frac::new(9, 1));
    }

    #[test]
    fn norm_pivot_equal_values_keeps_everything() {
        // Equal A turns the score into log(rank): the last rank wins.
        let sorted: Vec<RankedWord> = (0..5)
            .map(|i| entry(i, Frac::new(7, 2), Frac::new(1, 9)))
            .collect();
        let pivot = select_norm_pivot(&sorted, TieBreak::LargestRank).unwrap();
        assert_eq!(pivot.rank, 5);
    }

    #[test]
    fn norm_pivot_singleton() {
        let sorted = vec![entry(3, Frac::new(5, 1), Frac::new(1, 4))];
        let pivot = select_norm_pivot(&sorted, TieBreak::LargestRank).unwrap();
        assert_eq!(pivot.rank, 1);
        assert_eq!(pivot.cap, Frac::new(5, 1));
    }

    #[test]
    fn inverse_pivot_of_two_words() {
        // B = (1/4, 1/9) with cap A* = 1: scores 0 and log2/log3; rank 2
        // wins and the floor is B = 1/9.
        let sorted = vec![
            entry(0, Frac::new(1, 1), Frac::new(1, 4)),
            entry(1, Frac::new(1, 1), Frac::new(1, 9)),
        ];
        let pivot =
            select_inverse_pivot(&sorted, &Frac::new(1, 1), TieBreak::LargestRank).unwrap();
        assert_eq!(pivot.rank, 2);
        assert_eq!(pivot.floor, Frac::new(1, 9));
    }

    #[test]
    fn inverse_pivot_rejects_non_contracting() {
        let sorted = vec![entry(0, Frac::new(1, 1), Frac::new(3, 2))];
        assert!(matches!(
            select_inverse_pivot(&sorted, &Frac::new(1, 1), TieBreak::LargestRank),
            Err(Error::NonContracting { .. })
        ));
    }

    #[test]
    fn empty_sets_are_rejected() {
        assert!(select_norm_pivot(&[], TieBreak::LargestRank).is_err());
        assert!(select_inverse_pivot(&[], &Frac::new(1, 1), TieBreak::LargestRank).is_err());
    }

    fn small_table(n: u32) -> StatsTable {
        let mut cfg = SweepConfig::exact_vertices(n);
        cfg.keep_table = true;
        sweep(&cfg).unwrap().table.unwrap()
    }

    #[test]
    fn prune_terminates_on_small_sets() {
        for n in 2..=4u32 {
            let table = small_table(n);
            let outcome = prune_to_fixed_point(&table, &PruneConfig::default()).unwrap();
            assert!(outcome.rounds as usize <= table.rows.len());
            assert!(outcome.retained_count >= 1);
            assert!(outcome.retained.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn rerunning_on_the_fixed_point_is_stable() {
        let table = small_table(3);
        let first = prune_to_fixed_point(&table, &PruneConfig::default()).unwrap();
        let subset = StatsTable {
            n: table.n,
            rows: table
                .rows
                .iter()
                .filter(|r| first.retained.binary_search(&r.index).is_ok())
                .copied()
                .collect(),
        };
        let second = prune_to_fixed_point(&subset, &PruneConfig::default()).unwrap();
        assert_eq!(second.rounds, 1);
        assert_eq!(second.retained, first.retained);
        assert_eq!(second.exp2a, first.exp2a);
        assert_eq!(second.exp2b, first.exp2b);
    }

    #[test]
    fn working_sets_shrink_monotonically() {
        let table = small_table(4);
        let outcome = prune_to_fixed_point(&table, &PruneConfig::default()).unwrap();
        let sizes: Vec<u64> = outcome.trace.iter().map(|t| t.set_size).collect();
        assert!(sizes.windows(2).all(|w| w[1] <= w[0]));
    }
}
