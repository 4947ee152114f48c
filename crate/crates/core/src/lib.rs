//! Labeled chip-firing on infinite k-star graphs.
//!
//! Chips `1..=km` start on the center of a star with `k` infinite branches.
//! A ready vertex fires by sending one chip to each neighbor; with labels,
//! smaller chips go inward (or to lower-numbered branches from the center).
//! The crate simulates stabilization, counts every stabilization sequence,
//! checks structural properties of logged sequences, and relates the
//! reachable stable outcomes to standard Young tableaux.

pub mod engine;
pub mod enumerate;
pub mod error;
pub mod montecarlo;
pub mod outcome;
mod packed;
pub mod report;
pub mod star;
pub mod tableau;
pub mod verify;

pub use engine::{
    expected_fire_count, expected_total_fires, parse_moves, replay, stabilize_labeled,
    stabilize_unlabeled, ReplayEnd, SequenceLog, StrategyKind, UnlabeledStabilization,
};
pub use enumerate::{
    enumerate_all, enumerate_volmin, enumerate_volmin_counts, reachable_set, volmin_allowed_moves,
    EnumBudget, EnumerationResult,
};
pub use error::{Error, Result};
pub use montecarlo::{run_montecarlo, FrequencyReport, OutcomeTally};
pub use outcome::StableOutcome;
pub use star::{Label, LabeledConfig, Move, StarParams, UnlabeledConfig, Vertex};
pub use tableau::{
    catalan, count_rect_syt, from_outcome, generate_syts, sort_rows, to_outcome, witness_sequence,
    Tableau,
};
pub use verify::{
    verify_branch_sorted, verify_mixing, verify_outcome, verify_poset, verify_rim_sorted,
    MixingMode, VerifierReport, Violation,
};
