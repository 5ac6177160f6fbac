//! Persistent report formats: the JSON document, CSV side tables and the
//! retained-word list.
//!
//! The JSON body contains every semantic result with exact companions
//! (decimal digit strings for numerators and denominators), so each decimal
//! is recomputable. Timings live outside the body: reports from identical
//! configurations are byte-identical on the body.

use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::bound::BoundReport;
use crate::error::Result;
use crate::ifs::Word;
use crate::prune::{PruneOutcome, RoundTrace};
use crate::rational::RationalRepr;
use crate::sweep::{expansion_certificate, StatsTable, SweepResult};
use crate::verify::VerifyReport;

pub const SCHEMA_VERSION: u32 = 1;

/// Decimal rendering used for every floating value in reports: 15
/// significant digits.
pub fn sig15(x: f64) -> String {
    format!("{x:.14e}")
}

#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub command: String,
    pub n: u32,
    pub eval: String,
    pub mode: String,
    pub workers: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSection {
    pub n: u32,
    pub word_count: u64,
    pub exp2a: RationalRepr,
    pub arg_exp2a: String,
    pub exp2b: RationalRepr,
    pub arg_exp2b: String,
    pub expansion_sq: RationalRepr,
    pub arg_expansion: String,
    pub expansion_certificate: bool,
}

impl SweepSection {
    pub fn from_result(r: &SweepResult) -> Self {
        SweepSection {
            n: r.n,
            word_count: r.word_count,
            exp2a: RationalRepr::of_big(&r.exp2a),
            arg_exp2a: r.arg_exp2a.to_string(),
            exp2b: RationalRepr::of_big(&r.exp2b),
            arg_exp2b: r.arg_exp2b.to_string(),
            expansion_sq: RationalRepr::of_big(&r.expansion_sq),
            arg_expansion: r.arg_expansion.to_string(),
            expansion_certificate: expansion_certificate(r),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundSection {
    pub a: String,
    pub b: String,
    pub c: String,
    pub s0: String,
    pub exp2a: RationalRepr,
    pub exp2b: RationalRepr,
    pub word_count: u64,
    pub b_positive: bool,
    pub c_exceeds_a: bool,
    pub s0_in_range: bool,
}

impl BoundSection {
    pub fn from_report(r: &BoundReport) -> Self {
        BoundSection {
            a: sig15(r.a),
            b: sig15(r.b),
            c: sig15(r.c),
            s0: sig15(r.s0),
            exp2a: RationalRepr::of_big(&r.exp2a),
            exp2b: RationalRepr::of_big(&r.exp2b),
            word_count: r.word_count,
            b_positive: r.flags.b_positive,
            c_exceeds_a: r.flags.c_exceeds_a,
            s0_in_range: r.flags.s0_in_range,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundRow {
    pub round: u32,
    pub set_size: u64,
    pub i_star: String,
    pub i_starstar: String,
    pub a_prime: String,
    pub a: String,
    pub b: String,
    pub c: String,
    pub s0: String,
}

impl RoundRow {
    fn from_trace(t: &RoundTrace) -> Self {
        RoundRow {
            round: t.round,
            set_size: t.set_size,
            i_star: t.i_star.clone(),
            i_starstar: t.i_starstar.clone(),
            a_prime: sig15(t.a_prime),
            a: sig15(t.a),
            b: sig15(t.b),
            c: sig15(t.c),
            s0: sig15(t.s0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PruneSection {
    pub rounds: u32,
    pub retained_count: u64,
    pub exp2a: RationalRepr,
    pub exp2b: RationalRepr,
    pub bound: BoundSection,
    pub trace: Vec<RoundRow>,
}

impl PruneSection {
    pub fn from_outcome(o: &PruneOutcome) -> Self {
        PruneSection {
            rounds: o.rounds,
            retained_count: o.retained_count,
            exp2a: RationalRepr::of_big(&o.exp2a),
            exp2b: RationalRepr::of_big(&o.exp2b),
            bound: BoundSection::from_report(&o.bound),
            trace: o.trace.iter().map(RoundRow::from_trace).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifySection {
    pub n: u32,
    pub words_sampled: u32,
    pub points_per_word: u32,
    pub seed: u64,
    pub worst_rmax_margin: String,
    pub worst_qmax_margin: String,
    pub worst_qmin_margin: String,
    pub violation_count: u64,
    pub violations: Vec<ViolationRow>,
    pub vacuous: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ViolationRow {
    pub word: String,
    pub quantity: String,
    pub margin: String,
}

impl VerifySection {
    pub fn from_report(r: &VerifyReport) -> Self {
        VerifySection {
            n: r.n,
            words_sampled: r.words_sampled,
            points_per_word: r.points_per_word,
            seed: r.seed,
            worst_rmax_margin: sig15(r.worst_rmax_margin),
            worst_qmax_margin: sig15(r.worst_qmax_margin),
            worst_qmin_margin: sig15(r.worst_qmin_margin),
            violation_count: r.violation_count,
            violations: r
                .violations
                .iter()
                .map(|v| ViolationRow {
                    word: v.word.clone(),
                    quantity: v.quantity.to_string(),
                    margin: sig15(v.margin),
                })
                .collect(),
            vacuous: r.vacuous,
            pass: r.pass,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBody {
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_full: Option<BoundSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prune: Option<PruneSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timings {
    pub sweep_ms: Option<u64>,
    pub prune_ms: Option<u64>,
    pub total_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub body: ReportBody,
    pub timings: Timings,
}

impl ReportDocument {
    pub fn new(body: ReportBody, timings: Timings) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION,
            body,
            timings,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// The deterministic part: everything except timings.
    pub fn body_json(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serialization cannot fail")
    }
}

/// Per-word table CSV: exact reduced fractions, one row per word.
pub fn write_stats_csv(table: &StatsTable, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# schema_version=1")?;
    writeln!(
        out,
        "word,rmax_num,rmax_den,qmin_num,qmin_den,qmax_num,qmax_den"
    )?;
    for row in &table.rows {
        let word = Word::from_index(table.n, row.index)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            word,
            row.rmax.numer(),
            row.rmax.denom(),
            row.qmin.numer(),
            row.qmin.denom(),
            row.qmax.numer(),
            row.qmax.denom()
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Per-round pruning trace CSV.
pub fn write_trace_csv(trace: &[RoundTrace], path: &Path) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "# schema_version=1")?;
    writeln!(out, "round,set_size,i_star,i_starstar,a_prime,a,b,c,s0")?;
    for t in trace {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            t.round,
            t.set_size,
            t.i_star,
            t.i_starstar,
            sig15(t.a_prime),
            sig15(t.a),
            sig15(t.b),
            sig15(t.c),
            sig15(t.s0)
        )?;
    }
    out.flush()?;
    Ok(())
}

/// Audit list of the retained words, one per line, lexicographic order.
pub fn write_retained_words(outcome: &PruneOutcome, path: &Path) -> Result<()> {
    let mut out = BufWriter::new(std::fs::File::create(path)?);
    for &index in &outcome.retained {
        writeln!(out, "{}", Word::from_index(outcome.n, index)?)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::{dimension_lower_bound, BoundInputs};
    use crate::logs::{fixed_to_f64, ln_fixed};
    use crate::rational::big_ratio;
    use crate::sweep::{sweep, SweepConfig};

    #[test]
    fn decimals_recompute_from_exact_companions() {
        let out = sweep(&SweepConfig::exact_vertices(3)).unwrap();
        let bound = dimension_lower_bound(&BoundInputs::from(&out.result)).unwrap();
        let section = BoundSection::from_report(&bound);

        let exp2a = section.exp2a.parse().unwrap();
        let a_recomputed = 0.5 * fixed_to_f64(&ln_fixed(&exp2a, 60).unwrap(), 60);
        let a_reported: f64 = section.a.parse().unwrap();
        assert!((a_recomputed - a_reported).abs() <= 1e-12 * (1.0 + a_reported.abs()));

        let exp2b = section.exp2b.parse().unwrap();
        let b_recomputed = 0.5 * fixed_to_f64(&ln_fixed(&exp2b, 60).unwrap(), 60);
        let b_reported: f64 = section.b.parse().unwrap();
        assert!((b_recomputed - b_reported).abs() <= 1e-12 * (1.0 + b_reported.abs()));

        let s0_reported: f64 = section.s0.parse().unwrap();
        let s0_recomputed = bound.s0_high_precision(60).unwrap();
        assert!((s0_recomputed - s0_reported).abs() <= 1e-12);
    }

    #[test]
    fn body_json_is_deterministic_and_excludes_timings() {
        let out = sweep(&SweepConfig::exact_vertices(2)).unwrap();
        let body = ReportBody {
            config: ConfigEcho {
                command: "sweep".into(),
                n: 2,
                eval: "vertices".into(),
                mode: "exact".into(),
                workers: 1,
                seed: 1,
            },
            sweep: Some(SweepSection::from_result(&out.result)),
            bound_full: None,
            prune: None,
            verify: None,
        };
        let doc1 = ReportDocument::new(body.clone(), Timings {
            sweep_ms: Some(10),
            prune_ms: None,
            total_ms: 11,
        });
        let doc2 = ReportDocument::new(body, Timings {
            sweep_ms: Some(99),
            prune_ms: None,
            total_ms: 120,
        });
        assert_eq!(doc1.body_json(), doc2.body_json());
        assert_ne!(doc1.to_json(), doc2.to_json());
        assert!(doc1.to_json().contains("\"schema_version\": 1"));
    }

    #[test]
    fn csv_roundtrip_smoke() {
        let mut cfg = SweepConfig::exact_vertices(2);
        cfg.keep_table = true;
        let out = sweep(&cfg).unwrap();
        let dir = std::env::temp_dir().join("rauzy-report-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("stats.csv");
        write_stats_csv(out.table.as_ref().unwrap(), &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("# schema_version=1"));
        assert_eq!(
            lines.next(),
            Some("word,rmax_num,rmax_den,qmin_num,qmin_den,qmax_num,qmax_den")
        );
        // "12" carries the hand-computed stats.
        let first = lines.next().unwrap();
        assert_eq!(first, "12,448,3,7,192,1,3");
        assert_eq!(text.lines().count(), 2 + 6);
        let _ = big_ratio(1, 1);
    }
}
