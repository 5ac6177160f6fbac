//! Exhaustive derivative sweep over all branch words of a given length.
//!
//! For every word the map `g_n` restricted to that branch is the inverse of
//! the branch map `h = f_{i_n} o ... o f_{i_1}`, so with `x = h(y)`,
//! `(D_x g_n)^{-1} = D_y h`. Writing `q` for the squared-entry sum and `det`
//! for the determinant of the 2x2 derivative of `h` in the orthonormal
//! basis, the per-word quantities are
//!
//! * `rmax  = max_y q/det^2`  -- squared strong norm of `D_x g_n`,
//! * `qmin  = min_y q`        -- twice the squared weak norm of `(D_x g_n)^{-1}`,
//! * `qmax  = max_y q`        -- drives the expansion certificate.
//!
//! At a vertex `e_k` everything reduces to integer arithmetic on the columns
//! of the branch product: with `s` the k-th column sum,
//! `q = Q / (12 s^4)` and `q/det^2 = Q s^2 / 12` for an integer `Q` bounded
//! well inside `i128` for any affordable word length. The sweep runs on that
//! fast path and falls back to arbitrary-precision arithmetic if a checked
//! operation ever overflows or the determinant identity
//! `det = det(P) / sigma(P y)^3` fails its runtime cross-check.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ifs::{word_count, GeneratorSet, Word};
use crate::mat3::Mat3;
use crate::rational::{big_ratio, big_to_frac, frac_to_big, Frac, Rational};
use crate::simplex::{jacobian, jacobian_f64, SimplexPoint};

/// Where the per-word extrema are evaluated.
///
/// The default is the three vertices of the simplex; the closed-form
/// constants the sweep reproduces are attained there. Grid and sampled modes
/// exist for validation, not certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvalMode {
    VertexOnly,
    /// All barycentric points with denominator `k` (includes the vertices).
    Grid(u32),
    /// The vertices plus `samples` random interior points drawn from a
    /// seeded generator.
    VertexPlusSamples { samples: u32, seed: u64 },
}

impl fmt::Display for EvalMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalMode::VertexOnly => write!(f, "vertices"),
            EvalMode::Grid(k) => write!(f, "grid:{k}"),
            EvalMode::VertexPlusSamples { samples, .. } => write!(f, "samples:{samples}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arithmetic {
    Exact,
    Float,
}

impl fmt::Display for Arithmetic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arithmetic::Exact => write!(f, "exact"),
            Arithmetic::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Arithmetic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Arithmetic::Exact),
            "float" => Ok(Arithmetic::Float),
            other => Err(Error::InvalidConfig(format!(
                "unknown arithmetic mode '{other}' (expected exact|float)"
            ))),
        }
    }
}

/// Per-word extremized derivative quantities, exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WordStats {
    pub word: Word,
    /// `(max_y q/det^2)` over the evaluation set.
    pub rmax: Rational,
    /// `(min_y q)`; the squared weak norm of the inverse derivative is half
    /// of this.
    pub qmin: Rational,
    /// `(max_y q)`, the expansion-certificate quantity.
    pub qmax: Rational,
}

/// Compact table row; values are reduced `i128` fractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StatsRow {
    pub index: u64,
    pub rmax: Frac,
    pub qmin: Frac,
    pub qmax: Frac,
}

/// Full per-word table in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsTable {
    pub n: u32,
    pub rows: Vec<StatsRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub n: u32,
    pub eval: EvalMode,
    pub arithmetic: Arithmetic,
    pub word_count: u64,
    /// `max_i rmax_i = exp(2a)`.
    pub exp2a: Rational,
    pub arg_exp2a: Word,
    /// `2 / min_i qmin_i = exp(2b)`.
    pub exp2b: Rational,
    pub arg_exp2b: Word,
    /// `max_i qmax_i`; at most 1/3 exactly when the smallest expansion
    /// factor is at least sqrt(3).
    pub expansion_sq: Rational,
    pub arg_expansion: Word,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOutput {
    pub result: SweepResult,
    pub table: Option<StatsTable>,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub n: u32,
    pub eval: EvalMode,
    pub arithmetic: Arithmetic,
    /// 0 uses the global rayon pool.
    pub workers: usize,
    pub keep_table: bool,
}

impl SweepConfig {
    pub fn exact_vertices(n: u32) -> Self {
        SweepConfig {
            n,
            eval: EvalMode::VertexOnly,
            arithmetic: Arithmetic::Exact,
            workers: 0,
            keep_table: false,
        }
    }
}

/// True when the sweep certifies a smallest expansion factor of at least
/// `sqrt(3)`: `max_i max_y q <= 1/3`, boundary inclusive.
pub fn expansion_certificate(result: &SweepResult) -> bool {
    result.expansion_sq <= big_ratio(1, 3)
}

// ---------------------------------------------------------------------------
// Evaluation sets
// ---------------------------------------------------------------------------

fn grid_points(k: u32) -> Vec<SimplexPoint> {
    let mut pts = Vec::new();
    for i in 0..=k {
        for j in 0..=(k - i) {
            let l = k - i - j;
            pts.push(SimplexPoint::from_weights(i as u64, j as u64, l as u64).unwrap());
        }
    }
    pts
}

fn sample_points(samples: u32, seed: u64, word_index: u64) -> Vec<SimplexPoint> {
    let mixed = seed ^ word_index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let mut rng = ChaCha8Rng::seed_from_u64(mixed);
    (0..samples)
        .map(|_| {
            let a = rng.gen_range(1u64..=65_536);
            let b = rng.gen_range(1u64..=65_536);
            let c = rng.gen_range(1u64..=65_536);
            SimplexPoint::from_weights(a, b, c).unwrap()
        })
        .collect()
}

fn eval_points(eval: &EvalMode, word_index: u64) -> Vec<SimplexPoint> {
    match eval {
        EvalMode::VertexOnly => (0..3).map(SimplexPoint::vertex).collect(),
        EvalMode::Grid(k) => grid_points(*k),
        EvalMode::VertexPlusSamples { samples, seed } => {
            let mut pts: Vec<SimplexPoint> = (0..3).map(SimplexPoint::vertex).collect();
            pts.extend(sample_points(*samples, *seed, word_index));
            pts
        }
    }
}

// ---------------------------------------------------------------------------
// Exact per-word statistics
// ---------------------------------------------------------------------------

/// Exact statistics for one word over the evaluation set, via
/// arbitrary-precision arithmetic. This is the reference route; the sweep's
/// compact fast path is cross-checked against it.
pub fn word_stats(word: &Word, eval: &EvalMode) -> Result<WordStats> {
    let product = crate::ifs::word_product(word)?;
    word_stats_of_product(product.matrix(), word, eval)
}

fn word_stats_of_product(p: &Mat3, word: &Word, eval: &EvalMode) -> Result<WordStats> {
    let points = eval_points(eval, word.index());
    let mut rmax: Option<Rational> = None;
    let mut qmin: Option<Rational> = None;
    let mut qmax: Option<Rational> = None;
    for y in &points {
        let j = jacobian(p, y)?;
        let q = j.q();
        let r = j.q_over_det2()?;
        if rmax.as_ref().is_none_or(|m| r > *m) {
            rmax = Some(r);
        }
        if qmin.as_ref().is_none_or(|m| q < *m) {
            qmin = Some(q.clone());
        }
        if qmax.as_ref().is_none_or(|m| q > *m) {
            qmax = Some(q);
        }
    }
    Ok(WordStats {
        word: word.clone(),
        rmax: rmax.expect("nonempty evaluation set"),
        qmin: qmin.expect("nonempty evaluation set"),
        qmax: qmax.expect("nonempty evaluation set"),
    })
}

/// Exact statistics at the rational point `t / d` (integer weights `t`
/// summing to `d`) on the `i128` fast path. Returns `None` if a checked
/// operation overflows or the determinant identity fails; callers fall back
/// to the arbitrary-precision route.
fn point_stats_i128(p: &Mat3, t: [i64; 3], d: i64) -> Option<(Frac, Frac)> {
    let c0 = p.col(0);
    let c1 = p.col(1);
    let c2 = p.col(2);
    // T = P t and its coordinate sum.
    let mut pt = [0i128; 3];
    let mut s: i128 = 0;
    for i in 0..3 {
        let v = c0[i] as i128 * t[0] as i128
            + c1[i] as i128 * t[1] as i128
            + c2[i] as i128 * t[2] as i128;
        pt[i] = v;
        s += v;
    }
    if s <= 0 {
        return None;
    }
    let d = d as i128;

    // Images of the scaled basis vectors (1,-1,0) and (-1,-1,2).
    let mut u = [0i128; 3];
    let mut w = [0i128; 3];
    let mut s1: i128 = 0;
    let mut s2: i128 = 0;
    for i in 0..3 {
        let pv1 = c0[i] as i128 - c1[i] as i128;
        let pv2 = 2 * c2[i] as i128 - c0[i] as i128 - c1[i] as i128;
        u[i] = pv1;
        w[i] = pv2;
        s1 += pv1;
        s2 += pv2;
    }
    for i in 0..3 {
        u[i] = s.checked_mul(u[i])?.checked_sub(s1.checked_mul(pt[i])?)?;
        w[i] = s.checked_mul(w[i])?.checked_sub(s2.checked_mul(pt[i])?)?;
    }

    // Derivative coefficients over the common denominator 2 s^2 / d.
    let a = u[0].checked_mul(2)?.checked_add(u[2])?;
    let b = w[0].checked_mul(2)?.checked_add(w[2])?;
    let c = u[2];
    let d2 = w[2];

    let q_num = a
        .checked_mul(a)?
        .checked_mul(3)?
        .checked_add(b.checked_mul(b)?)?
        .checked_add(c.checked_mul(c)?.checked_mul(9)?)?
        .checked_add(d2.checked_mul(d2)?.checked_mul(3)?)?;
    let q_num = q_num.checked_mul(d.checked_mul(d)?)?;
    let s2pow = s.checked_mul(s)?;
    let s4 = s2pow.checked_mul(s2pow)?;
    let q_den = s4.checked_mul(12)?;

    // det = d^2 (a d2 - b c) / (4 s^4); the identity
    // det = det(P)/sigma(Py)^3 = d^3/s^3 pins the numerator to 4 s d.
    // Cross-check rather than assume.
    let det_num = a.checked_mul(d2)?.checked_sub(b.checked_mul(c)?)?;
    if det_num != s.checked_mul(4)?.checked_mul(d)? {
        return None;
    }
    // q / det^2 = q_num_unscaled * s^2 / (12 d^4), i.e. q_num * s^2/(12 d^6).
    let r_num = q_num.checked_mul(s2pow)?;
    let d3 = d.checked_mul(d)?.checked_mul(d)?;
    let r_den = d3.checked_mul(d3)?.checked_mul(12)?;

    Some((Frac::new(q_num, q_den), Frac::new(r_num, r_den)))
}

/// Integer-weight evaluation points for the fast path, when the mode admits
/// them.
fn fast_points(eval: &EvalMode) -> Option<Vec<([i64; 3], i64)>> {
    match eval {
        EvalMode::VertexOnly => Some(vec![([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]),
        // Bounded so the i128 magnitudes stay far from overflow; finer
        // grids take the arbitrary-precision route.
        EvalMode::Grid(k) if *k <= 64 => {
            let k = *k as i64;
            let mut pts = Vec::new();
            for i in 0..=k {
                for j in 0..=(k - i) {
                    pts.push(([i, j, k - i - j], k));
                }
            }
            Some(pts)
        }
        _ => None,
    }
}

/// Compact exact statistics for one branch product over a fast-path
/// evaluation set.
fn fast_word_stats_at(p: &Mat3, points: &[([i64; 3], i64)]) -> Option<(Frac, Frac, Frac)> {
    let mut rmax: Option<Frac> = None;
    let mut qmin: Option<Frac> = None;
    let mut qmax: Option<Frac> = None;
    for &(t, d) in points {
        let (q, r) = point_stats_i128(p, t, d)?;
        if rmax.is_none_or(|m| r > m) {
            rmax = Some(r);
        }
        if qmin.is_none_or(|m| q < m) {
            qmin = Some(q);
        }
        if qmax.is_none_or(|m| q > m) {
            qmax = Some(q);
        }
    }
    Some((rmax?, qmin?, qmax?))
}

fn exact_word_row(
    p: &Mat3,
    index: u64,
    n: u32,
    eval: &EvalMode,
    fast: Option<&[([i64; 3], i64)]>,
) -> Result<StatsRow> {
    if let Some(points) = fast {
        if let Some((rmax, qmin, qmax)) = fast_word_stats_at(p, points) {
            return Ok(StatsRow {
                index,
                rmax,
                qmin,
                qmax,
            });
        }
    }
    // Promotion: arbitrary-precision evaluation, then back to the compact
    // form for the table.
    let word = Word::from_index(n, index)?;
    let stats = word_stats_of_product(p, &word, eval)?;
    let rmax = big_to_frac(&stats.rmax).ok_or(Error::Overflow("per-word table entry"))?;
    let qmin = big_to_frac(&stats.qmin).ok_or(Error::Overflow("per-word table entry"))?;
    let qmax = big_to_frac(&stats.qmax).ok_or(Error::Overflow("per-word table entry"))?;
    Ok(StatsRow {
        index,
        rmax,
        qmin,
        qmax,
    })
}

// ---------------------------------------------------------------------------
// Enumeration: depth-first walk with incremental branch products
// ---------------------------------------------------------------------------

const NOT_CONSTANT: u8 = u8::MAX;

fn dfs<F>(
    gens: &GeneratorSet,
    remaining: u32,
    product: Mat3,
    index: u64,
    constant_sym: u8,
    sink: &mut F,
) -> Result<()>
where
    F: FnMut(u64, &Mat3) -> Result<()>,
{
    if remaining == 0 {
        if constant_sym == NOT_CONSTANT {
            sink(index, &product)?;
        }
        return Ok(());
    }
    for sym in 1u8..=3 {
        let next = gens.generator(sym).mul(&product)?;
        let next_constant = if constant_sym == 0 || constant_sym == sym {
            sym
        } else {
            NOT_CONSTANT
        };
        dfs(
            gens,
            remaining - 1,
            next,
            index * 3 + (sym - 1) as u64,
            next_constant,
            sink,
        )?;
    }
    Ok(())
}

/// Walk every word of a chunk (fixed leading digits) in lexicographic order.
fn walk_chunk<F>(n: u32, prefix_depth: u32, chunk: u64, sink: &mut F) -> Result<()>
where
    F: FnMut(u64, &Mat3) -> Result<()>,
{
    let gens = GeneratorSet::standard();
    let mut product = Mat3::IDENTITY;
    let mut constant_sym = 0u8;
    // Decode the chunk's leading digits (most significant first).
    for level in (0..prefix_depth).rev() {
        let sym = ((chunk / 3u64.pow(level)) % 3) as u8 + 1;
        product = gens.generator(sym).mul(&product)?;
        constant_sym = if constant_sym == 0 || constant_sym == sym {
            sym
        } else {
            NOT_CONSTANT
        };
    }
    dfs(gens, n - prefix_depth, product, chunk, constant_sym, sink)
}

fn chunk_prefix_depth(n: u32) -> u32 {
    n.saturating_sub(2).min(6)
}

fn run_in_pool<T: Send>(workers: usize, job: impl FnOnce() -> T + Send) -> Result<T> {
    if workers == 0 {
        Ok(job())
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        Ok(pool.install(job))
    }
}

// ---------------------------------------------------------------------------
// Exact sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct ExactAccum {
    count: u64,
    max_r: Option<(Frac, u64)>,
    min_q: Option<(Frac, u64)>,
    max_q: Option<(Frac, u64)>,
    rows: Option<Vec<StatsRow>>,
}

impl ExactAccum {
    fn new(keep_rows: bool) -> Self {
        ExactAccum {
            count: 0,
            max_r: None,
            min_q: None,
            max_q: None,
            rows: keep_rows.then(Vec::new),
        }
    }

    fn push(&mut self, row: StatsRow) {
        self.count += 1;
        update_max(&mut self.max_r, row.rmax, row.index);
        update_min(&mut self.min_q, row.qmin, row.index);
        update_max(&mut self.max_q, row.qmax, row.index);
        if let Some(rows) = &mut self.rows {
            rows.push(row);
        }
    }

    fn merge(&mut self, other: ExactAccum) {
        self.count += other.count;
        if let Some((v, i)) = other.max_r {
            update_max(&mut self.max_r, v, i);
        }
        if let Some((v, i)) = other.min_q {
            update_min(&mut self.min_q, v, i);
        }
        if let Some((v, i)) = other.max_q {
            update_max(&mut self.max_q, v, i);
        }
        if let (Some(rows), Some(mut extra)) = (&mut self.rows, other.rows) {
            rows.append(&mut extra);
        }
    }
}

// Ties resolve to the lexicographically smallest word, which keeps the
// reduction independent of chunking.
fn update_max(slot: &mut Option<(Frac, u64)>, value: Frac, index: u64) {
    match slot {
        None => *slot = Some((value, index)),
        Some((best, arg)) => {
            if value > *best || (value == *best && index < *arg) {
                *slot = Some((value, index));
            }
        }
    }
}

fn update_min(slot: &mut Option<(Frac, u64)>, value: Frac, index: u64) {
    match slot {
        None => *slot = Some((value, index)),
        Some((best, arg)) => {
            if value < *best || (value == *best && index < *arg) {
                *slot = Some((value, index));
            }
        }
    }
}

fn sweep_exact(cfg: &SweepConfig) -> Result<SweepOutput> {
    let n = cfg.n;
    let depth = chunk_prefix_depth(n);
    let chunks = 3u64.pow(depth);
    let eval = cfg.eval;
    let keep = cfg.keep_table;

    let fast = fast_points(&eval);
    let accums: Vec<ExactAccum> = run_in_pool(cfg.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = ExactAccum::new(keep);
                walk_chunk(n, depth, chunk, &mut |index, product| {
                    acc.push(exact_word_row(product, index, n, &eval, fast.as_deref())?);
                    Ok(())
                })?;
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut total = ExactAccum::new(keep);
    for acc in accums {
        total.merge(acc);
    }
    debug_assert_eq!(total.count, word_count(n));

    let (max_r, arg_r) = total.max_r.ok_or(Error::EmptySet)?;
    let (min_q, arg_minq) = total.min_q.ok_or(Error::EmptySet)?;
    let (max_q, arg_maxq) = total.max_q.ok_or(Error::EmptySet)?;

    let result = SweepResult {
        n,
        eval: cfg.eval,
        arithmetic: Arithmetic::Exact,
        word_count: total.count,
        exp2a: frac_to_big(&max_r),
        arg_exp2a: Word::from_index(n, arg_r)?,
        exp2b: &big_ratio(2, 1) / &frac_to_big(&min_q),
        arg_exp2b: Word::from_index(n, arg_minq)?,
        expansion_sq: frac_to_big(&max_q),
        arg_expansion: Word::from_index(n, arg_maxq)?,
    };
    Ok(SweepOutput {
        result,
        table: total.rows.map(|rows| StatsTable { n, rows }),
    })
}

// ---------------------------------------------------------------------------
// Float sweep: double-precision pass with exact re-checks of the candidates
// ---------------------------------------------------------------------------

/// Relative slack used when collecting candidate extremal words in float
/// mode. Double precision is accurate to ~1e-15 here, so the margin is wide.
const FLOAT_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
struct FloatAccum {
    count: u64,
    max_r: f64,
    min_q: f64,
    max_q: f64,
    cand_r: Vec<(u64, f64)>,
    cand_minq: Vec<(u64, f64)>,
    cand_maxq: Vec<(u64, f64)>,
}

impl FloatAccum {
    fn new() -> Self {
        FloatAccum {
            count: 0,
            max_r: f64::NEG_INFINITY,
            min_q: f64::INFINITY,
            max_q: f64::NEG_INFINITY,
            cand_r: Vec::new(),
            cand_minq: Vec::new(),
            cand_maxq: Vec::new(),
        }
    }

    fn push(&mut self, index: u64, rmax: f64, qmin: f64, qmax: f64) {
        self.count += 1;
        if rmax > self.max_r {
            self.max_r = rmax;
        }
        if rmax >= self.max_r * (1.0 - FLOAT_SLACK) {
            self.cand_r.push((index, rmax));
            compact_high(&mut self.cand_r, self.max_r);
        }
        if qmin < self.min_q {
            self.min_q = qmin;
        }
        if qmin <= self.min_q * (1.0 + FLOAT_SLACK) {
            self.cand_minq.push((index, qmin));
            compact_low(&mut self.cand_minq, self.min_q);
        }
        if qmax > self.max_q {
            self.max_q = qmax;
        }
        if qmax >= self.max_q * (1.0 - FLOAT_SLACK) {
            self.cand_maxq.push((index, qmax));
            compact_high(&mut self.cand_maxq, self.max_q);
        }
    }

    fn merge(&mut self, other: FloatAccum) {
        self.count += other.count;
        self.max_r = self.max_r.max(other.max_r);
        self.min_q = self.min_q.min(other.min_q);
        self.max_q = self.max_q.max(other.max_q);
        self.cand_r.extend(other.cand_r);
        self.cand_minq.extend(other.cand_minq);
        self.cand_maxq.extend(other.cand_maxq);
        compact_high(&mut self.cand_r, self.max_r);
        compact_low(&mut self.cand_minq, self.min_q);
        compact_high(&mut self.cand_maxq, self.max_q);
    }
}

fn compact_high(cands: &mut Vec<(u64, f64)>, best: f64) {
    if cands.len() > 64 {
        cands.retain(|&(_, v)| v >= best * (1.0 - FLOAT_SLACK));
    }
}

fn compact_low(cands: &mut Vec<(u64, f64)>, best: f64) {
    if cands.len() > 64 {
        cands.retain(|&(_, v)| v <= best * (1.0 + FLOAT_SLACK));
    }
}

fn float_word_stats(p: &Mat3, index: u64, eval: &EvalMode) -> (f64, f64, f64) {
    let mut rmax = f64::NEG_INFINITY;
    let mut qmin = f64::INFINITY;
    let mut qmax = f64::NEG_INFINITY;
    match eval {
        EvalMode::VertexOnly => {
            for k in 0..3 {
                let mut y = [0.0; 3];
                y[k] = 1.0;
                let j = jacobian_f64(p, y);
                let q = j.q();
                let det = j.det();
                rmax = rmax.max(q / (det * det));
                qmin = qmin.min(q);
                qmax = qmax.max(q);
            }
        }
        _ => {
            for y in eval_points(eval, index) {
                let j = jacobian_f64(p, y.to_f64());
                let q = j.q();
                let det = j.det();
                rmax = rmax.max(q / (det * det));
                qmin = qmin.min(q);
                qmax = qmax.max(q);
            }
        }
    }
    (rmax, qmin, qmax)
}

fn sweep_float(cfg: &SweepConfig) -> Result<SweepOutput> {
    if cfg.keep_table {
        return Err(Error::InvalidConfig(
            "the per-word table requires exact arithmetic".into(),
        ));
    }
    let n = cfg.n;
    let depth = chunk_prefix_depth(n);
    let chunks = 3u64.pow(depth);
    let eval = cfg.eval;

    let accums: Vec<FloatAccum> = run_in_pool(cfg.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let mut acc = FloatAccum::new();
                walk_chunk(n, depth, chunk, &mut |index, product| {
                    let (rmax, qmin, qmax) = float_word_stats(product, index, &eval);
                    acc.push(index, rmax, qmin, qmax);
                    Ok(())
                })?;
                Ok(acc)
            })
            .collect::<Result<Vec<_>>>()
    })??;

    let mut total = FloatAccum::new();
    for acc in accums {
        total.merge(acc);
    }
    debug_assert_eq!(total.count, word_count(n));

    // Exact re-check of the candidates keeps the reported extremal words and
    // constants identical to the exact sweep.
    let recheck = |cands: &[(u64, f64)], keep_high: bool, pick_r: bool| -> Result<(Rational, u64)> {
        let mut best: Option<(Rational, u64)> = None;
        for &(index, _) in cands {
            let word = Word::from_index(n, index)?;
            let stats = word_stats(&word, &eval)?;
            let value = if pick_r {
                stats.rmax
            } else if keep_high {
                stats.qmax
            } else {
                stats.qmin
            };
            let better = match &best {
                None => true,
                Some((bv, bi)) => {
                    if keep_high || pick_r {
                        value > *bv || (value == *bv && index < *bi)
                    } else {
                        value < *bv || (value == *bv && index < *bi)
                    }
                }
            };
            if better {
                best = Some((value, index));
            }
        }
        best.ok_or(Error::EmptySet)
    };

    let (exp2a, arg_r) = recheck(&total.cand_r, true, true)?;
    let (min_q, arg_minq) = recheck(&total.cand_minq, false, false)?;
    let (max_q, arg_maxq) = recheck(&total.cand_maxq, true, false)?;

    let result = SweepResult {
        n,
        eval: cfg.eval,
        arithmetic: Arithmetic::Float,
        word_count: total.count,
        exp2a,
        arg_exp2a: Word::from_index(n, arg_r)?,
        exp2b: &big_ratio(2, 1) / &min_q,
        arg_exp2b: Word::from_index(n, arg_minq)?,
        expansion_sq: max_q,
        arg_expansion: Word::from_index(n, arg_maxq)?,
    };
    Ok(SweepOutput {
        result,
        table: None,
    })
}

/// Run the full sweep over `S_n`.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    if cfg.n < 2 {
        return Err(Error::InvalidConfig("word length must be at least 2".into()));
    }
    if let EvalMode::Grid(k) = cfg.eval {
        if k == 0 {
            return Err(Error::InvalidConfig("grid resolution must be positive".into()));
        }
    }
    match cfg.arithmetic {
        Arithmetic::Exact => sweep_exact(cfg),
        Arithmetic::Float => sweep_float(cfg),
    }
}

/// Convenience accessor used by tests: exact `Frac` stats of a single word
/// on the vertex fast path.
pub fn fast_word_stats(word: &Word) -> Result<Option<(Frac, Frac, Frac)>> {
    let p = crate::ifs::word_product(word)?;
    let points = fast_points(&EvalMode::VertexOnly).expect("vertices are always fast");
    Ok(fast_word_stats_at(p.matrix(), &points))
}
