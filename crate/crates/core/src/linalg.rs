//! Real 3-dimensional vector algebra and the Born-rule probability engine.
//!
//! Every measurement in an odd-cycle scenario is a rank-1 projector onto a
//! real unit vector, and every probability comes from the Born rule
//! |⟨v|η⟩|². Two projectors are jointly measurable exactly when their
//! directions are orthogonal; for such a pair the four joint outcomes have
//! the closed form implemented by [`joint_prob`].

use crate::error::{Error, Result};

/// Norm (and general numerical-identity) tolerance for unit vectors.
pub const NORM_TOL: f64 = 1e-12;

/// Default tolerance separating compatible (orthogonal) from incompatible pairs.
pub const DEFAULT_ORTHO_TOL: f64 = 1e-10;

/// Outcome of opening one box: empty (0) or full (1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Empty,
    Full,
}

impl Outcome {
    /// Bit convention: empty = 0, full = 1.
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Empty => 0,
            Outcome::Full => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Self {
        if bit == 0 {
            Outcome::Empty
        } else {
            Outcome::Full
        }
    }
}

/// A real 3-component unit vector: the direction of a rank-1 projector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector3 {
    components: [f64; 3],
}

/// Serializes as the bare component array. There is deliberately no
/// Deserialize: construction must pass through the norm checks.
impl serde::Serialize for UnitVector3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.components.serialize(s)
    }
}

impl UnitVector3 {
    /// Builds from components that must already be unit-normalized (within 1e-12).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DegenerateVector { norm });
        }
        Ok(Self {
            components: [x, y, z],
        })
    }

    /// Scales a raw vector to unit norm. Errors on (near-)zero input.
    /// Already-unit input is returned bitwise unchanged, so normalizing is
    /// idempotent and save/load roundtrips are exact.
    pub fn normalize(raw: [f64; 3]) -> Result<Self> {
        let norm = (raw[0] * raw[0] + raw[1] * raw[1] + raw[2] * raw[2]).sqrt();
        if norm <= NORM_TOL {
            return Err(Error::DegenerateVector { norm });
        }
        if (norm - 1.0).abs() <= NORM_TOL {
            return Ok(Self { components: raw });
        }
        Ok(Self {
            components: [raw[0] / norm, raw[1] / norm, raw[2] / norm],
        })
    }

    pub fn components(&self) -> [f64; 3] {
        self.components
    }

    /// Euclidean inner product; in [-1, 1] up to roundoff for unit inputs.
    pub fn inner(&self, other: &Self) -> f64 {
        let a = &self.components;
        let b = &other.components;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    /// Cross product (not normalized).
    pub fn cross(&self, other: &Self) -> [f64; 3] {
        let a = &self.components;
        let b = &other.components;
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    }

    /// Flips the sign so the first component larger than 1e-12 in magnitude
    /// is positive. Projectors are insensitive to the global sign, so this
    /// only pins a deterministic representative.
    pub fn canonical_sign(mut self) -> Self {
        for c in self.components {
            if c.abs() > NORM_TOL {
                if c < 0.0 {
                    for x in &mut self.components {
                        *x = -*x;
                    }
                }
                break;
            }
        }
        self
    }
}

/// A pure qutrit state, also a real unit vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QutritState {
    vector: UnitVector3,
}

impl QutritState {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Ok(Self {
            vector: UnitVector3::new(x, y, z)?,
        })
    }

    pub fn normalize(raw: [f64; 3]) -> Result<Self> {
        Ok(Self {
            vector: UnitVector3::normalize(raw)?,
        })
    }

    pub fn from_vector(vector: UnitVector3) -> Self {
        Self { vector }
    }

    pub fn as_vector(&self) -> &UnitVector3 {
        &self.vector
    }

    pub fn components(&self) -> [f64; 3] {
        self.vector.components()
    }
}

/// A probability, clamped to [0, 1] after a 1e-12 slack check.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability {
    value: f64,
}

impl Probability {
    /// Accepts values in [-1e-12, 1 + 1e-12], clamping the endpoints;
    /// anything further out is a bug upstream, not roundoff.
    pub fn new(value: f64) -> Result<Self> {
        if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&value) {
            return Err(Error::ProbabilityRange { value });
        }
        Ok(Self {
            value: value.clamp(0.0, 1.0),
        })
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Born rule for a single projector: P(full) = ⟨v|state⟩².
pub fn single_prob(state: &QutritState, v: &UnitVector3) -> Probability {
    let ip = state.as_vector().inner(v);
    // ip² can exceed 1 by a few ulp; Probability::new clamps it.
    Probability::new(ip * ip).expect("inner product of unit vectors squared")
}

/// Joint Born-rule probability P(a,b|i,j) for a compatible (orthogonal) pair
/// of rank-1 projectors, at the default orthogonality tolerance.
///
/// For orthogonal directions the projectors commute and
/// P(1,1) = 0, P(1,0) = ⟨vi|state⟩², P(0,1) = ⟨vj|state⟩²,
/// P(0,0) = 1 - P(1,0) - P(0,1).
pub fn joint_prob(
    state: &QutritState,
    vi: &UnitVector3,
    vj: &UnitVector3,
    a: Outcome,
    b: Outcome,
) -> Result<Probability> {
    joint_prob_with_tol(state, vi, vj, a, b, DEFAULT_ORTHO_TOL)
}

/// [`joint_prob`] with an explicit orthogonality tolerance.
pub fn joint_prob_with_tol(
    state: &QutritState,
    vi: &UnitVector3,
    vj: &UnitVector3,
    a: Outcome,
    b: Outcome,
    tolerance: f64,
) -> Result<Probability> {
    let ip = vi.inner(vj);
    if ip.abs() >= tolerance {
        return Err(Error::IncompatiblePair {
            inner: ip,
            tolerance,
        });
    }
    let p_i = single_prob(state, vi).value();
    let p_j = single_prob(state, vj).value();
    let p = match (a, b) {
        (Outcome::Full, Outcome::Full) => 0.0,
        (Outcome::Full, Outcome::Empty) => p_i,
        (Outcome::Empty, Outcome::Full) => p_j,
        // Bessel: p_i + p_j <= 1 for orthogonal directions, up to roundoff.
        (Outcome::Empty, Outcome::Empty) => 1.0 - p_i - p_j,
    };
    Probability::new(p)
}

/// Unit vector orthogonal to both inputs (normalized cross product), with the
/// sign fixed so the first nonzero component is positive.
pub fn plane_normal(u: &UnitVector3, v: &UnitVector3) -> Result<UnitVector3> {
    let ip = u.inner(v);
    if ip.abs() >= 1.0 - DEFAULT_ORTHO_TOL {
        return Err(Error::ParallelInputs { inner: ip });
    }
    Ok(UnitVector3::normalize(u.cross(v))?.canonical_sign())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pentagon_state() -> QutritState {
        QutritState::normalize([1.0, 1.0, 1.0]).unwrap()
    }

    fn pentagon_vectors() -> [UnitVector3; 5] {
        [
            UnitVector3::normalize([1.0, -1.0, 1.0]).unwrap(),
            UnitVector3::normalize([1.0, 1.0, 0.0]).unwrap(),
            UnitVector3::normalize([0.0, 0.0, 1.0]).unwrap(),
            UnitVector3::normalize([1.0, 0.0, 0.0]).unwrap(),
            UnitVector3::normalize([0.0, 1.0, 1.0]).unwrap(),
        ]
    }

    #[test]
    fn inner_identity_is_one() {
        let v = UnitVector3::normalize([0.3, -1.2, 0.7]).unwrap();
        assert!((v.inner(&v) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inner_pentagon_adjacency_is_zero() {
        let [v1, v2, ..] = pentagon_vectors();
        assert!(v1.inner(&v2).abs() < 1e-12);
    }

    #[test]
    fn inner_canonical_basis() {
        let e1 = UnitVector3::new(1.0, 0.0, 0.0).unwrap();
        let e2 = UnitVector3::new(0.0, 1.0, 0.0).unwrap();
        assert_eq!(e1.inner(&e2), 0.0);
    }

    #[test]
    fn normalize_diagonal() {
        let v = UnitVector3::normalize([1.0, 1.0, 1.0]).unwrap();
        let c = 1.0 / 3f64.sqrt();
        for (got, want) in v.components().iter().zip([c, c, c]) {
            assert!((got - want).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_axis_scaling() {
        let v = UnitVector3::normalize([0.0, 0.0, 2.0]).unwrap();
        assert_eq!(v.components(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn normalize_zero_vector_is_degenerate() {
        assert!(matches!(
            UnitVector3::normalize([0.0, 0.0, 0.0]),
            Err(Error::DegenerateVector { .. })
        ));
    }

    #[test]
    fn new_rejects_non_unit_components() {
        assert!(UnitVector3::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn single_prob_pentagon_values() {
        let eta = pentagon_state();
        let [v1, v2, ..] = pentagon_vectors();
        assert!((single_prob(&eta, &v1).value() - 1.0 / 9.0).abs() < 1e-12);
        assert!((single_prob(&eta, &v2).value() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_prob_state_along_direction() {
        let v = UnitVector3::normalize([2.0, -1.0, 0.5]).unwrap();
        let s = QutritState::from_vector(v);
        assert!((single_prob(&s, &v).value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_prob_hardy_value() {
        let eta = pentagon_state();
        let [v1, _, _, _, v5] = pentagon_vectors();
        let p = joint_prob(&eta, &v5, &v1, Outcome::Empty, Outcome::Full).unwrap();
        assert!((p.value() - 1.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn joint_prob_full_full_is_zero() {
        let eta = pentagon_state();
        let [v1, v2, ..] = pentagon_vectors();
        let p = joint_prob(&eta, &v1, &v2, Outcome::Full, Outcome::Full).unwrap();
        assert_eq!(p.value(), 0.0);
    }

    #[test]
    fn joint_prob_empty_empty_vanishes_in_condition_pair() {
        let eta = pentagon_state();
        let [_, v2, v3, ..] = pentagon_vectors();
        let p = joint_prob(&eta, &v2, &v3, Outcome::Empty, Outcome::Empty).unwrap();
        assert!(p.value().abs() < 1e-12);
    }

    #[test]
    fn joint_prob_rejects_incompatible_pair() {
        let eta = pentagon_state();
        let [v1, _, v3, ..] = pentagon_vectors();
        // <v1|v3> = 1/sqrt(3), far from orthogonal.
        assert!((v1.inner(&v3) - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        assert!(matches!(
            joint_prob(&eta, &v1, &v3, Outcome::Empty, Outcome::Full),
            Err(Error::IncompatiblePair { .. })
        ));
    }

    #[test]
    fn plane_normal_of_v2_v3_and_v4_v5() {
        let [_, v2, v3, v4, v5] = pentagon_vectors();
        let n23 = plane_normal(&v2, &v3).unwrap();
        let r = 1.0 / 2f64.sqrt();
        for (got, want) in n23.components().iter().zip([r, -r, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let n45 = plane_normal(&v4, &v5).unwrap();
        for (got, want) in n45.components().iter().zip([0.0, r, -r]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn plane_normal_canonical_basis() {
        let e1 = UnitVector3::new(1.0, 0.0, 0.0).unwrap();
        let e2 = UnitVector3::new(0.0, 1.0, 0.0).unwrap();
        let n = plane_normal(&e1, &e2).unwrap();
        assert_eq!(n.components(), [0.0, 0.0, 1.0]);
    }

    #[test]
    fn plane_normal_rejects_parallel_inputs() {
        let v = UnitVector3::normalize([1.0, 2.0, 3.0]).unwrap();
        let w = UnitVector3::normalize([-1.0, -2.0, -3.0]).unwrap();
        assert!(matches!(
            plane_normal(&v, &w),
            Err(Error::ParallelInputs { .. })
        ));
    }

    #[test]
    fn probability_clamps_slack_and_rejects_beyond() {
        assert_eq!(Probability::new(-1e-13).unwrap().value(), 0.0);
        assert_eq!(Probability::new(1.0 + 1e-13).unwrap().value(), 1.0);
        assert!(Probability::new(-1e-9).is_err());
        assert!(Probability::new(1.1).is_err());
    }

    prop_compose! {
        fn arb_unit_vector()(x in -1.0..1.0f64, y in -1.0..1.0f64, z in -1.0..1.0f64)
            -> Option<UnitVector3>
        {
            UnitVector3::normalize([x, y, z]).ok()
        }
    }

    prop_compose! {
        // A random state plus a random orthogonal pair (vj completed in the
        // plane orthogonal to vi).
        fn arb_state_and_orthogonal_pair()(
            s in arb_unit_vector(),
            u in arb_unit_vector(),
            w in arb_unit_vector(),
        ) -> Option<(QutritState, UnitVector3, UnitVector3)> {
            let (s, u, w) = (s?, u?, w?);
            let vj = UnitVector3::normalize(u.cross(&w)).ok()?;
            Some((QutritState::from_vector(s), u, vj))
        }
    }

    proptest! {
        #[test]
        fn joint_outcomes_sum_to_one(input in arb_state_and_orthogonal_pair()) {
            if let Some((state, vi, vj)) = input {
                let mut total = 0.0;
                for a in [Outcome::Empty, Outcome::Full] {
                    for b in [Outcome::Empty, Outcome::Full] {
                        total += joint_prob(&state, &vi, &vj, a, b).unwrap().value();
                    }
                }
                prop_assert!((total - 1.0).abs() < 1e-12);
                let p11 = joint_prob(&state, &vi, &vj, Outcome::Full, Outcome::Full)
                    .unwrap()
                    .value();
                prop_assert_eq!(p11, 0.0);
            }
        }

        #[test]
        fn single_prob_sign_invariant(s in arb_unit_vector(), v in arb_unit_vector()) {
            if let (Some(s), Some(v)) = (s, v) {
                let [x, y, z] = s.components();
                let flipped = QutritState::new(-x, -y, -z).unwrap();
                let state = QutritState::from_vector(s);
                let p = single_prob(&state, &v).value();
                prop_assert!((single_prob(&flipped, &v).value() - p).abs() < 1e-15);
                let [vx, vy, vz] = v.components();
                let vf = UnitVector3::new(-vx, -vy, -vz).unwrap();
                prop_assert!((single_prob(&state, &vf).value() - p).abs() < 1e-15);
            }
        }

        #[test]
        fn plane_normal_orthogonal_to_inputs(u in arb_unit_vector(), v in arb_unit_vector()) {
            if let (Some(u), Some(v)) = (u, v) {
                if let Ok(n) = plane_normal(&u, &v) {
                    prop_assert!(n.inner(&u).abs() < 1e-12);
                    prop_assert!(n.inner(&v).abs() < 1e-12);
                    prop_assert!((n.inner(&n) - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}
