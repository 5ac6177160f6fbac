//! Exact machinery for certified Hausdorff-dimension lower bounds on the
//! Rauzy gasket.
//!
//! The crate sweeps derivative statistics of every branch word of the
//! defining projective system in exact rational arithmetic, certifies the
//! uniform expansion of the induced repeller, evaluates the dimension lower
//! bound `1 + (c - a)/b`, and improves it with an iterated rank-based
//! pruning of the branch set. A finite-difference oracle, a sampling
//! verifier and a raster renderer round out the pipeline.

pub mod bound;
pub mod error;
pub mod ifs;
pub mod logs;
pub mod mat3;
pub mod oracle;
pub mod prune;
pub mod rational;
pub mod render;
pub mod report;
pub mod simplex;
pub mod sweep;
pub mod verify;

pub use bound::{dimension_lower_bound, BoundFlags, BoundInputs, BoundReport};
pub use error::{Error, Result};
pub use ifs::{
    contraction_check, enumerate_words, word_count, word_product, GeneratorSet, ProductMatrix,
    Word,
};
pub use mat3::Mat3;
pub use oracle::{compare_with_pipeline, oracle_word_stats, OracleComparison, OracleStats};
pub use prune::{
    prune_to_fixed_point, select_inverse_pivot, select_norm_pivot, PruneConfig, PruneOutcome,
    RankedWord, TieBreak,
};
pub use rational::{Frac, Rational, RationalRepr};
pub use render::{render_gasket, write_image, Raster};
pub use report::{ReportBody, ReportDocument, Timings};
pub use simplex::{
    basis_coords, jacobian, projective_apply, BasisCoords, Jacobian2, SimplexPoint, TangentVector,
};
pub use sweep::{
    expansion_certificate, sweep, word_stats, Arithmetic, EvalMode, StatsRow, StatsTable,
    SweepConfig, SweepOutput, SweepResult, WordStats,
};
pub use verify::{verify_vertex_extremality, VerifyConfig, VerifyReport};
