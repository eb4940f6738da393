//! Error type shared by all modules of the crate.

use thiserror::Error;

use crate::scenario::Violation;

/// Everything that can go wrong while building or analyzing a cycle scenario.
#[derive(Debug, Error)]
pub enum Error {
    /// A raw vector with norm below the degeneracy threshold cannot be normalized.
    #[error("degenerate vector: norm {norm:.3e} is below 1e-12")]
    DegenerateVector { norm: f64 },

    /// Two projectors are not jointly measurable: their directions are not orthogonal.
    #[error("incompatible pair: |<vi|vj>| = {inner:.3e} exceeds tolerance {tolerance:.1e}")]
    IncompatiblePair { inner: f64, tolerance: f64 },

    /// `plane_normal` needs two linearly independent directions.
    #[error("parallel inputs: |<u|v>| = {inner:.6} leaves no unique normal direction")]
    ParallelInputs { inner: f64 },

    /// A value that must be a probability landed outside [0, 1] beyond slack.
    #[error("probability out of range: {value:.6e}")]
    ProbabilityRange { value: f64 },

    /// The angle recurrence has no real solution: -cos(2*phi_k) < 0.
    #[error("infeasible angles: -cos(2*phi_k) = {cos_term:.6} < 0 admits no real theta_k")]
    InfeasibleAngles { cos_term: f64 },

    /// Malformed angle input (wrong length, not strictly increasing, out of range).
    #[error("invalid angle sequence: {0}")]
    InvalidAngles(String),

    /// Closed-form Hardy families exist only for k >= 2; k = 1 collapses to theta = 0.
    #[error("degenerate family: k = {k} (need k >= 2; the n = 5 case is the pentagon)")]
    DegenerateFamily { k: usize },

    /// A cycle needs an odd number of boxes, at least five.
    #[error("bad cycle size: n = {n} (need odd n >= 5)")]
    BadCycleSize { n: usize },

    /// The number of vectors does not match the declared n.
    #[error("vector count mismatch: declared n = {n}, got {got} vectors")]
    VectorCountMismatch { n: usize, got: usize },

    /// A scenario failed validation; each entry names one violated invariant.
    #[error("invalid scenario: {} violation(s), first: {}", .violations.len(), .violations[0])]
    InvalidScenario { violations: Vec<Violation> },

    /// Exhaustive enumeration over 2^n assignments is capped at n = 25.
    #[error("n = {n} is too large for exhaustive enumeration (max {max}); use the closed form")]
    TooLarge { n: usize, max: usize },

    /// A parametrization hit a measure-zero degenerate point.
    #[error("infeasible parameter point: {0}")]
    Infeasible(String),

    /// Parameter vector has the wrong length for the requested n.
    #[error("bad parameter count: n = {n} needs {expected} angles, got {got}")]
    BadParameterCount { n: usize, expected: usize, got: usize },

    /// Requested export format is not supported.
    #[error("unsupported format: {format:?} (supported: {supported})")]
    UnsupportedFormat { format: String, supported: &'static str },

    /// Scenario file could not be read.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Scenario file could not be parsed.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
