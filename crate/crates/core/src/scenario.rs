//! Cycle scenarios: the built-in pentagon, the closed-form Hardy families on
//! n = 4k+1 boxes, validation, condition checking, and the eight-vector
//! Kochen-Specker building block.
//!
//! A scenario is a qutrit state plus n projector directions with cyclic
//! adjacency orthogonality (box n is adjacent to box 1). The Hardy-like
//! argument demands, for j = 1..(n-1)/2,
//!
//! ```text
//!     P(0,1|2j-1,2j) + P(0,1|2j,2j+1) = 1,
//! ```
//!
//! which holds exactly when the state lies in the plane spanned by the two
//! even/odd partner directions. Noncontextual models then force
//! P(0,1|n,1) = 0, while a quantum realization keeps it strictly positive.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    joint_prob_with_tol, plane_normal, Outcome, Probability, QutritState, UnitVector3,
    DEFAULT_ORTHO_TOL,
};

/// Tolerance for comparing condition sums against 1.
pub const CONDITION_TOL: f64 = 1e-10;

/// An odd cycle of projective measurements together with the prepared state.
///
/// Boxes are numbered 1..n as in the usual presentation; internally the
/// vector list is 0-based with `vectors[i-1]` holding box i.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleScenario {
    n: usize,
    state: QutritState,
    vectors: Vec<UnitVector3>,
    tolerance: f64,
}

impl CycleScenario {
    /// Builds a scenario, checking only the structural invariants
    /// (odd n >= 5, count match). Orthogonality is checked separately by
    /// [`validate_scenario`] so that broken scenarios can be inspected.
    pub fn new(state: QutritState, vectors: Vec<UnitVector3>, tolerance: f64) -> Result<Self> {
        let n = vectors.len();
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::BadCycleSize { n });
        }
        Ok(Self {
            n,
            state,
            vectors,
            tolerance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state(&self) -> &QutritState {
        &self.state
    }

    /// All measurement directions, `vectors()[i]` holding box i+1.
    pub fn vectors(&self) -> &[UnitVector3] {
        &self.vectors
    }

    /// Box i's direction, 1-based as in the box labels.
    pub fn vector(&self, i: usize) -> &UnitVector3 {
        assert!(i >= 1 && i <= self.n, "box index {i} out of 1..={}", self.n);
        &self.vectors[i - 1]
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// One violated scenario invariant, with the residual that witnessed it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    /// Vector for box `index` (1-based) is not unit-normalized.
    VectorNorm { index: usize, residual: f64 },
    /// Adjacent boxes i, j (cyclic, 1-based) are not orthogonal.
    AdjacentPair { i: usize, j: usize, inner: f64 },
    /// The state is not unit-normalized.
    StateNorm { residual: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::VectorNorm { index, residual } => {
                write!(f, "box {index}: |norm - 1| = {residual:.3e}")
            }
            Violation::AdjacentPair { i, j, inner } => {
                write!(f, "pair ({i},{j}): |<v{i}|v{j}>| = {inner:.3e}")
            }
            Violation::StateNorm { residual } => {
                write!(f, "state: |norm - 1| = {residual:.3e}")
            }
        }
    }
}

/// Checks normalization and cyclic-adjacency orthogonality.
/// Returns one entry per violated invariant; empty means valid.
pub fn validate_scenario(s: &CycleScenario) -> Vec<Violation> {
    let mut violations = Vec::new();
    let norm_of = |v: &UnitVector3| {
        let c = v.components();
        (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt()
    };
    let state_residual = (norm_of(s.state().as_vector()) - 1.0).abs();
    if state_residual > s.tolerance {
        violations.push(Violation::StateNorm {
            residual: state_residual,
        });
    }
    for (idx, v) in s.vectors.iter().enumerate() {
        let residual = (norm_of(v) - 1.0).abs();
        if residual > s.tolerance {
            violations.push(Violation::VectorNorm {
                index: idx + 1,
                residual,
            });
        }
    }
    for i in 1..=s.n {
        let j = i % s.n + 1;
        let ip = s.vector(i).inner(s.vector(j));
        if ip.abs() >= s.tolerance {
            violations.push(Violation::AdjacentPair { i, j, inner: ip });
        }
    }
    violations
}

/// The per-scenario condition report: one sum per Hardy condition line, the
/// Hardy probability P(0,1|n,1), and the full cycle sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    /// P(0,1|2j-1,2j) + P(0,1|2j,2j+1) for j = 1..(n-1)/2.
    pub condition_sums: Vec<f64>,
    /// P(0,1|n,1): zero under noncontextual assignments, positive here.
    pub hardy_prob: f64,
    /// Sum of P(0,1|i,i+1) over all n cyclic pairs.
    pub cycle_sum: f64,
    /// True iff every condition sum is within [`CONDITION_TOL`] of 1.
    pub all_satisfied: bool,
}

/// Evaluates the condition sums, Hardy probability and cycle sum of a valid
/// scenario. Errors with the violation list if validation fails.
pub fn check_conditions(s: &CycleScenario) -> Result<ConditionReport> {
    let violations = validate_scenario(s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario { violations });
    }
    let p01 = |i: usize, j: usize| -> Result<f64> {
        Ok(joint_prob_with_tol(
            s.state(),
            s.vector(i),
            s.vector(j),
            Outcome::Empty,
            Outcome::Full,
            s.tolerance,
        )?
        .value())
    };
    let m = (s.n - 1) / 2;
    let mut condition_sums = Vec::with_capacity(m);
    for j in 1..=m {
        condition_sums.push(p01(2 * j - 1, 2 * j)? + p01(2 * j, 2 * j + 1)?);
    }
    let hardy_prob = p01(s.n, 1)?;
    let cycle_sum = condition_sums.iter().sum::<f64>() + hardy_prob;
    let all_satisfied = condition_sums
        .iter()
        .all(|sum| (sum - 1.0).abs() <= CONDITION_TOL);
    Ok(ConditionReport {
        condition_sums,
        hardy_prob,
        cycle_sum,
        all_satisfied,
    })
}

/// P(0,1|n,1) of a valid scenario.
pub fn hardy_prob(s: &CycleScenario) -> Result<Probability> {
    let violations = validate_scenario(s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario { violations });
    }
    joint_prob_with_tol(
        s.state(),
        s.vector(s.n),
        s.vector(1),
        Outcome::Empty,
        Outcome::Full,
        s.tolerance,
    )
}

/// The five-box scenario: state (1,1,1)/√3 and the five explicit directions.
/// P(0,1|5,1) = 1/9 while both condition sums equal 1.
pub fn pentagon() -> CycleScenario {
    let state = QutritState::normalize([1.0, 1.0, 1.0]).expect("static");
    let vectors = vec![
        UnitVector3::normalize([1.0, -1.0, 1.0]).expect("static"),
        UnitVector3::normalize([1.0, 1.0, 0.0]).expect("static"),
        UnitVector3::normalize([0.0, 0.0, 1.0]).expect("static"),
        UnitVector3::normalize([1.0, 0.0, 0.0]).expect("static"),
        UnitVector3::normalize([0.0, 1.0, 1.0]).expect("static"),
    ];
    CycleScenario::new(state, vectors, DEFAULT_ORTHO_TOL).expect("static")
}

/// Solved polar angles for a Hardy family, with the degenerate boundary
/// (theta_k = 0, all probabilities collapse) flagged rather than rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSolution {
    pub thetas: Vec<f64>,
    pub degenerate: bool,
}

/// Solves the family's angle recurrence for theta_1..theta_k given strictly
/// increasing azimuths phi_1..phi_k in (0, π/2):
///
/// ```text
///     tan²(theta_k) = -cos(2 phi_k),
///     tan(theta_j)  = tan(theta_{j+1}) cos(phi_{j+1} - phi_j).
/// ```
///
/// Errors with `InfeasibleAngles` when -cos(2 phi_k) < 0 (no real theta_k);
/// the boundary -cos(2 phi_k) = 0 yields theta = 0 and is flagged degenerate.
pub fn solve_thetas(k: usize, phis: &[f64]) -> Result<ThetaSolution> {
    if k == 0 || phis.len() != k {
        return Err(Error::InvalidAngles(format!(
            "need k >= 1 azimuths, got k = {k} with {} value(s)",
            phis.len()
        )));
    }
    for (j, w) in phis.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::InvalidAngles(format!(
                "phi_{} = {} is not greater than phi_{} = {}",
                j + 2,
                w[1],
                j + 1,
                w[0]
            )));
        }
    }
    if phis[0] <= 0.0 || phis[k - 1] >= std::f64::consts::FRAC_PI_2 {
        return Err(Error::InvalidAngles(
            "azimuths must lie strictly inside (0, \u{3c0}/2)".into(),
        ));
    }
    let cos_term = -(2.0 * phis[k - 1]).cos();
    if cos_term < -1e-12 {
        return Err(Error::InfeasibleAngles { cos_term });
    }
    let tan_sq = cos_term.max(0.0);
    let mut thetas = vec![0.0; k];
    thetas[k - 1] = tan_sq.sqrt().atan();
    for j in (0..k - 1).rev() {
        let delta = phis[j + 1] - phis[j];
        thetas[j] = (thetas[j + 1].tan() * delta.cos()).atan();
    }
    Ok(ThetaSolution {
        degenerate: tan_sq <= 1e-12,
        thetas,
    })
}

/// Angle data of one closed-form family on n = 4k+1 boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyFamilyParams {
    pub k: usize,
    pub n: usize,
    pub phis: Vec<f64>,
    pub thetas: Vec<f64>,
    pub deltas: Vec<f64>,
    pub degenerate: bool,
}

impl HardyFamilyParams {
    /// The canonical choice phi_j = jπ/(2(k+1)), which makes every delta
    /// equal and keeps all vectors distinct.
    pub fn with_default_phis(k: usize) -> Result<Self> {
        let phis: Vec<f64> = (1..=k)
            .map(|j| j as f64 * std::f64::consts::PI / (2.0 * (k as f64 + 1.0)))
            .collect();
        Self::from_phis(k, phis)
    }

    pub fn from_phis(k: usize, phis: Vec<f64>) -> Result<Self> {
        let solution = solve_thetas(k, &phis)?;
        let deltas = phis.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(Self {
            k,
            n: 4 * k + 1,
            thetas: solution.thetas,
            degenerate: solution.degenerate,
            phis,
            deltas,
        })
    }

    /// Closed-form Hardy probability of the family,
    /// sin²θ₁cos²φ₁ / (cos²θ₁ + sin²θ₁cos²φ₁).
    ///
    /// Independent of the assembled vectors; `check_conditions` on the
    /// assembled scenario must agree via the Born rule.
    pub fn hardy_prob_closed_form(&self) -> f64 {
        let (s1, c1) = self.thetas[0].sin_cos();
        let cp = self.phis[0].cos();
        s1 * s1 * cp * cp / (c1 * c1 + s1 * s1 * cp * cp)
    }

    /// Assembles the n = 4k+1 measurement directions and state (0,0,1).
    ///
    /// Every plane spanned by a condition pair contains the state:
    ///   eta = cosθ_j |2j⟩ + sinθ_j |2j+1⟩ = sinθ_j |4k-2j+2⟩ + cosθ_j |4k-2j+3⟩.
    /// Box 1 is the common normal of the planes of boxes 2 and 4k+1. All
    /// n cyclic orthogonality relations are re-verified numerically after
    /// assembly instead of being trusted.
    pub fn scenario(&self) -> Result<CycleScenario> {
        let k = self.k;
        let n = self.n;
        let mut vectors = vec![UnitVector3::normalize([0.0, 0.0, 1.0]).expect("static"); n];
        let set = |vectors: &mut Vec<UnitVector3>, boxno: usize, raw: [f64; 3]| -> Result<()> {
            vectors[boxno - 1] = UnitVector3::normalize(raw)?;
            Ok(())
        };
        for j in 1..=k {
            let (st, ct) = self.thetas[j - 1].sin_cos();
            let (sp, cp) = self.phis[j - 1].sin_cos();
            set(&mut vectors, 2 * j, [-st * sp, st * cp, ct])?;
            set(&mut vectors, 2 * j + 1, [ct * sp, -ct * cp, st])?;
            set(&mut vectors, 4 * k - 2 * j + 2, [-ct * sp, -ct * cp, st])?;
            set(&mut vectors, 4 * k - 2 * j + 3, [st * sp, st * cp, ct])?;
        }
        let (s1, c1) = self.thetas[0].sin_cos();
        let cp1 = self.phis[0].cos();
        set(&mut vectors, 1, [0.0, c1, -s1 * cp1])?;

        let state = QutritState::normalize([0.0, 0.0, 1.0])?;
        let scenario = CycleScenario::new(state, vectors, DEFAULT_ORTHO_TOL)?;
        let violations = validate_scenario(&scenario);
        if !violations.is_empty() {
            return Err(Error::InvalidScenario { violations });
        }
        Ok(scenario)
    }
}

/// The closed-form Hardy-family scenario on n = 4k+1 boxes (k >= 2).
///
/// k = 1 is rejected: its recurrence forces theta_1 = 0, collapsing the
/// Hardy probability to zero; the five-box case is [`pentagon`].
pub fn hardy_family(k: usize) -> Result<CycleScenario> {
    if k < 2 {
        return Err(Error::DegenerateFamily { k });
    }
    HardyFamilyParams::with_default_phis(k)?.scenario()
}

/// The eight labeled vectors of the Kochen-Specker building block:
/// the pentagon's eta, v1..v5, plus v6 ⟂ {eta, v2, v3} and v7 ⟂ {eta, v4, v5}.
pub fn ks_block() -> Vec<(String, UnitVector3)> {
    let p = pentagon();
    let v6 = plane_normal(p.vector(2), p.vector(3)).expect("static");
    let v7 = plane_normal(p.vector(4), p.vector(5)).expect("static");
    let mut labeled = vec![("eta".to_string(), *p.state().as_vector())];
    for i in 1..=5 {
        labeled.push((format!("v{i}"), *p.vector(i)));
    }
    labeled.push(("v6".to_string(), v6));
    labeled.push(("v7".to_string(), v7));
    labeled
}

/// On-disk scenario document. Vectors need not be pre-normalized; the loader
/// normalizes them and records a warning when the input norm is off by more
/// than 1e-6.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScenarioFile {
    pub n: usize,
    pub state: [f64; 3],
    pub vectors: Vec<[f64; 3]>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_ORTHO_TOL
}

const LOAD_NORM_WARN: f64 = 1e-6;

impl ScenarioFile {
    pub fn from_scenario(s: &CycleScenario) -> Self {
        Self {
            n: s.n(),
            state: s.state().components(),
            vectors: s.vectors().iter().map(|v| v.components()).collect(),
            tolerance: s.tolerance(),
        }
    }

    /// Normalizes the raw entries into a scenario, collecting warnings for
    /// inputs whose norm deviates from 1 by more than 1e-6.
    pub fn into_scenario(self) -> Result<(CycleScenario, Vec<String>)> {
        if self.vectors.len() != self.n {
            return Err(Error::VectorCountMismatch {
                n: self.n,
                got: self.vectors.len(),
            });
        }
        let mut warnings = Vec::new();
        let mut check_norm = |what: &str, raw: &[f64; 3]| {
            let norm = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
            if (norm - 1.0).abs() > LOAD_NORM_WARN {
                warnings.push(format!("{what}: input norm {norm:.9} normalized to 1"));
            }
        };
        check_norm("state", &self.state);
        let state = QutritState::normalize(self.state)?;
        let mut vectors = Vec::with_capacity(self.n);
        for (idx, raw) in self.vectors.iter().enumerate() {
            check_norm(&format!("vector {}", idx + 1), raw);
            vectors.push(UnitVector3::normalize(*raw)?);
        }
        Ok((CycleScenario::new(state, vectors, self.tolerance)?, warnings))
    }
}

/// Reads a scenario document from disk.
pub fn load_scenario(path: &Path) -> Result<(CycleScenario, Vec<String>)> {
    let text = std::fs::read_to_string(path)?;
    let file: ScenarioFile = serde_json::from_str(&text)?;
    file.into_scenario()
}

/// Writes a scenario document to disk (full float precision).
pub fn save_scenario(s: &CycleScenario, path: &Path) -> Result<()> {
    let file = ScenarioFile::from_scenario(s);
    let mut text = serde_json::to_string_pretty(&file)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
