//! Command-line driver for the gasket dimension-bound pipeline.
//!
//! Exit codes: 0 success, 1 runtime/IO error, 2 configuration error,
//! 3 certificate failure (expansion certificate or vertex-extremality
//! verification), 4 oracle mismatch.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use rauzy_core::bound::{dimension_lower_bound, BoundInputs};
use rauzy_core::error::Error;
use rauzy_core::oracle::compare_with_pipeline;
use rauzy_core::prune::{prune_to_fixed_point, PruneConfig, TieBreak};
use rauzy_core::render::{render_gasket, write_image};
use rauzy_core::report::{
    write_retained_words, write_stats_csv, write_trace_csv, BoundSection, ConfigEcho,
    PruneSection, ReportBody, ReportDocument, SweepSection, Timings, VerifySection,
    SCHEMA_VERSION,
};
use rauzy_core::sweep::{expansion_certificate, sweep, Arithmetic, EvalMode, SweepConfig};
use rauzy_core::verify::{verify_vertex_extremality, VerifyConfig};

const EXIT_RUNTIME: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_CERTIFICATE: u8 = 3;
const EXIT_ORACLE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "rauzy",
    about = "Exact derivative sweeps, pruning and dimension lower bounds for the Rauzy gasket",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep all branch words and report the dimension lower bound.
    Sweep(SweepArgs),
    /// Sweep, then improve the bound with the iterated pruning heuristic.
    Prune(PruneArgs),
    /// Sample interior points against the vertex extrema of random words.
    Verify(VerifyArgs),
    /// Cross-check the pipeline against the finite-difference oracle.
    Oracle(OracleArgs),
    /// Render the gasket to a PGM (or PNG) raster.
    Render(RenderArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Word length.
    #[arg(long, default_value_t = 13)]
    n: u32,
    /// Evaluation set: vertices | grid:K | samples:M.
    #[arg(long, default_value = "vertices")]
    eval: String,
    /// Arithmetic: exact | float.
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Seed for sampled evaluation modes.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Report destination ("-" for stdout).
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional CSV with per-word statistics (exact mode only).
    #[arg(long)]
    per_word_table: Option<PathBuf>,
}

#[derive(Args)]
struct PruneArgs {
    /// Word length.
    #[arg(long, default_value_t = 13)]
    n: u32,
    /// Evaluation set for per-word statistics: vertices | grid:K |
    /// samples:M. The grid default is the stable per-word reference.
    #[arg(long, default_value = "grid:6")]
    eval: String,
    /// Arithmetic: exact (required for pruning).
    #[arg(long, default_value = "exact")]
    mode: String,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Seed for sampled evaluation modes.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Report destination ("-" for stdout).
    #[arg(long, default_value = "-")]
    out: String,
    /// Optional CSV with per-word statistics.
    #[arg(long)]
    per_word_table: Option<PathBuf>,
    /// Maximizer choice under exact score ties: largest-rank | smallest-rank.
    #[arg(long, default_value = "largest-rank")]
    tie_break: String,
    /// Optional CSV with the per-round trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Optional list of the retained words, one per line.
    #[arg(long)]
    retained: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 13)]
    n: u32,
    /// Number of sampled words.
    #[arg(long, default_value_t = 1000)]
    words: u32,
    /// Interior points per word.
    #[arg(long, default_value_t = 1000)]
    points: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct OracleArgs {
    /// Word length (at most 6).
    #[arg(long)]
    n: u32,
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args)]
struct RenderArgs {
    /// Subdivision depth.
    #[arg(long, default_value_t = 8)]
    depth: u32,
    /// Image width in pixels.
    #[arg(long, default_value_t = 1024)]
    width: u32,
    /// Output path; `.png` selects PNG, anything else binary PGM.
    #[arg(long)]
    out: PathBuf,
}

fn parse_eval(raw: &str, seed: u64) -> Result<EvalMode, Error> {
    if raw == "vertices" {
        return Ok(EvalMode::VertexOnly);
    }
    if let Some(k) = raw.strip_prefix("grid:") {
        let k: u32 = k
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad grid resolution in '{raw}'")))?;
        if k == 0 {
            return Err(Error::InvalidConfig("grid resolution must be positive".into()));
        }
        return Ok(EvalMode::Grid(k));
    }
    if let Some(m) = raw.strip_prefix("samples:") {
        let samples: u32 = m
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("bad sample count in '{raw}'")))?;
        return Ok(EvalMode::VertexPlusSamples { samples, seed });
    }
    Err(Error::InvalidConfig(format!(
        "unknown evaluation mode '{raw}' (expected vertices|grid:K|samples:M)"
    )))
}

fn emit(out: &str, content: &str) -> Result<(), Error> {
    if out == "-" {
        println!("{content}");
    } else {
        std::fs::write(out, content)?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<u8, Error> {
    let eval = parse_eval(&args.eval, args.seed)?;
    let arithmetic = Arithmetic::from_str(&args.mode)?;
    let cfg = SweepConfig {
        n: args.n,
        eval,
        arithmetic,
        workers: args.workers,
        keep_table: args.per_word_table.is_some(),
    };
    let start = Instant::now();
    let output = sweep(&cfg)?;
    let sweep_ms = start.elapsed().as_millis() as u64;

    if let (Some(path), Some(table)) = (&args.per_word_table, &output.table) {
        write_stats_csv(table, path)?;
    }
    let bound = dimension_lower_bound(&BoundInputs::from(&output.result))?;
    let certified = expansion_certificate(&output.result);
    let body = ReportBody {
        config: ConfigEcho {
            command: "sweep".to_string(),
            n: args.n,
            eval: args.eval.clone(),
            mode: args.mode.clone(),
            workers: args.workers,
            seed: args.seed,
        },
        sweep: Some(SweepSection::from_result(&output.result)),
        bound_full: Some(BoundSection::from_report(&bound)),
        prune: None,
        verify: None,
    };
    let timings = Timings {
        sweep_ms: Some(sweep_ms),
        prune_ms: None,
        total_ms: sweep_ms,
    };
    emit(&args.out, &ReportDocument::new(body, timings).to_json())?;
    if !certified {
        eprintln!("expansion certificate failed: max q exceeds 1/3");
        return Ok(EXIT_CERTIFICATE);
    }
    Ok(0)
}

fn cmd_prune(args: &PruneArgs) -> Result<u8, Error> {
    let tie_break = match args.tie_break.as_str() {
        "largest-rank" => TieBreak::LargestRank,
        "smallest-rank" => TieBreak::SmallestRank,
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown tie-break '{other}' (expected largest-rank|smallest-rank)"
            )))
        }
    };
    let eval = parse_eval(&args.eval, args.seed)?;
    let arithmetic = Arithmetic::from_str(&args.mode)?;
    if arithmetic != Arithmetic::Exact {
        return Err(Error::InvalidConfig(
            "pruning requires exact arithmetic (per-word table)".into(),
        ));
    }
    let cfg = SweepConfig {
        n: args.n,
        eval,
        arithmetic,
        workers: args.workers,
        keep_table: true,
    };
    let start = Instant::now();
    let output = sweep(&cfg)?;
    let sweep_ms = start.elapsed().as_millis() as u64;
    let table = output.table.as_ref().expect("table kept by construction");
    if let Some(path) = &args.per_word_table {
        write_stats_csv(table, path)?;
    }

    let prune_start = Instant::now();
    let outcome = prune_to_fixed_point(table, &PruneConfig { tie_break })?;
    let prune_ms = prune_start.elapsed().as_millis() as u64;

    if let Some(path) = &args.trace {
        write_trace_csv(&outcome.trace, path)?;
    }
    if let Some(path) = &args.retained {
        write_retained_words(&outcome, path)?;
    }

    let bound = dimension_lower_bound(&BoundInputs::from(&output.result))?;
    let certified = expansion_certificate(&output.result);
    let body = ReportBody {
        config: ConfigEcho {
            command: "prune".to_string(),
            n: args.n,
            eval: args.eval.clone(),
            mode: args.mode.clone(),
            workers: args.workers,
            seed: args.seed,
        },
        sweep: Some(SweepSection::from_result(&output.result)),
        bound_full: Some(BoundSection::from_report(&bound)),
        prune: Some(PruneSection::from_outcome(&outcome)),
        verify: None,
    };
    let timings = Timings {
        sweep_ms: Some(sweep_ms),
        prune_ms: Some(prune_ms),
        total_ms: sweep_ms + prune_ms,
    };
    emit(&args.out, &ReportDocument::new(body, timings).to_json())?;
    if !certified {
        eprintln!("expansion certificate failed: max q exceeds 1/3");
        return Ok(EXIT_CERTIFICATE);
    }
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, Error> {
    let cfg = VerifyConfig {
        n: args.n,
        words: args.words,
        points_per_word: args.points,
        seed: args.seed,
    };
    let start = Instant::now();
    let report = verify_vertex_extremality(&cfg)?;
    let total_ms = start.elapsed().as_millis() as u64;
    let pass = report.pass;
    if report.vacuous {
        eprintln!("warning: no words or points sampled; the check is vacuous");
    }
    let body = ReportBody {
        config: ConfigEcho {
            command: "verify".to_string(),
            n: args.n,
            eval: "vertices".to_string(),
            mode: "exact".to_string(),
            workers: 1,
            seed: args.seed,
        },
        sweep: None,
        bound_full: None,
        prune: None,
        verify: Some(VerifySection::from_report(&report)),
    };
    let timings = Timings {
        sweep_ms: None,
        prune_ms: None,
        total_ms,
    };
    emit(&args.out, &ReportDocument::new(body, timings).to_json())?;
    if !pass {
        eprintln!(
            "vertex-extremality violated for sampled words ({} violations): \
finer evaluation modes are the per-word reference",
            report.violation_count
        );
        return Ok(EXIT_CERTIFICATE);
    }
    Ok(0)
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8, Error> {
    let cmp = compare_with_pipeline(args.n)?;
    emit(&args.out, &oracle_json(&cmp))?;
    if !cmp.pass {
        eprintln!(
            "oracle mismatch: worst relative differences rmax {:e} qmin {:e} qmax {:e} (word {})",
            cmp.max_rel_rmax,
            cmp.max_rel_qmin,
            cmp.max_rel_qmax,
            cmp.worst_word
                .as_ref()
                .map(|w| w.to_string())
                .unwrap_or_default()
        );
        return Ok(EXIT_ORACLE);
    }
    Ok(0)
}

fn oracle_json(cmp: &rauzy_core::oracle::OracleComparison) -> String {
    format!(
        "{{\n  \"schema_version\": {},\n  \"body\": {{\n    \"command\": \"oracle\",\n    \
\"n\": {},\n    \"words\": {},\n    \"tolerance\": \"{:e}\",\n    \
\"max_rel_rmax\": \"{:e}\",\n    \"max_rel_qmin\": \"{:e}\",\n    \
\"max_rel_qmax\": \"{:e}\",\n    \"worst_word\": \"{}\",\n    \"pass\": {}\n  }}\n}}",
        SCHEMA_VERSION,
        cmp.n,
        cmp.words,
        cmp.tolerance,
        cmp.max_rel_rmax,
        cmp.max_rel_qmin,
        cmp.max_rel_qmax,
        cmp.worst_word
            .as_ref()
            .map(|w| w.to_string())
            .unwrap_or_default(),
        cmp.pass
    )
}

fn cmd_render(args: &RenderArgs) -> Result<u8, Error> {
    let raster = render_gasket(args.depth, args.width)?;
    write_image(&raster, &args.out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sweep(args) => cmd_sweep(args),
        Command::Prune(args) => cmd_prune(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Render(args) => cmd_render(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err @ Error::InvalidConfig(_)) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
