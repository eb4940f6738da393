//! Hardy-like contextuality on odd measurement cycles for a single qutrit.
//!
//! The crate builds cycle scenarios (a state plus n projector directions
//! with cyclic orthogonality), checks the Hardy conditions, evaluates the
//! classical and quantum bounds for the associated cycle inequality, finds
//! the maximum Hardy probability numerically, exports orthogonality graphs,
//! and simulates measurement statistics.

pub mod bounds;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod sampler;
pub mod scenario;

pub use bounds::{
    extract_params, hardy_max_bound, nchv_closed_form, nchv_cycle_bound,
    nchv_implication_check, optimize_cycle_max, optimize_hardy_max, parametrize,
    parametrize_cycle, quantum_cycle_bound, Assignment, OptimizationResult, ENUMERATION_CAP,
};
pub use error::{Error, Result};
pub use graph::{
    build_graph, export_graph, is_cycle, label_cycle_vectors, OrthogonalityGraph,
    DEFAULT_EDGE_TOL,
};
pub use linalg::{
    joint_prob, joint_prob_with_tol, plane_normal, single_prob, Outcome, Probability,
    QutritState, UnitVector3, DEFAULT_ORTHO_TOL, NORM_TOL,
};
pub use sampler::{run_experiment, sample_context, ContextSample, SampleReport};
pub use scenario::{
    check_conditions, hardy_family, hardy_prob, ks_block, load_scenario, pentagon,
    save_scenario, solve_thetas, validate_scenario, ConditionReport, CycleScenario,
    HardyFamilyParams, ScenarioFile, ThetaSolution, Violation, CONDITION_TOL,
};
