//! Seeded Monte Carlo simulation of box-opening experiments.
//!
//! Each cyclic context (i, i+1) is sampled from its exact four-point joint
//! distribution with an independent deterministic stream, so reports are
//! reproducible bit for bit and adding contexts never perturbs others.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{joint_prob_with_tol, Outcome, QutritState, UnitVector3};
use crate::scenario::{validate_scenario, CycleScenario};

/// Counts and estimates for one context. Outcome order is
/// (0,0), (0,1), (1,0), (1,1); the last is structurally zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextSample {
    /// Context (i, j) with j = i mod n + 1, 1-based.
    pub i: usize,
    pub j: usize,
    pub counts: [u64; 4],
    /// count / shots per outcome.
    pub estimates: [f64; 4],
    /// sqrt(p(1-p)/shots) at the estimated p.
    pub standard_errors: [f64; 4],
}

/// Full experiment record: per-context statistics plus the empirical
/// versions of the condition sums, the cycle sum and the Hardy probability.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleReport {
    pub n: usize,
    pub shots: u64,
    pub seed: u64,
    pub contexts: Vec<ContextSample>,
    pub empirical_condition_sums: Vec<f64>,
    pub empirical_cycle_sum: f64,
    pub empirical_hardy_prob: f64,
}

impl SampleReport {
    /// Estimate of P(a,b|i,i+1), 1-based context index.
    pub fn estimate(&self, i: usize, a: Outcome, b: Outcome) -> f64 {
        self.contexts[i - 1].estimates[(a.bit() * 2 + b.bit()) as usize]
    }

    pub fn standard_error(&self, i: usize, a: Outcome, b: Outcome) -> f64 {
        self.contexts[i - 1].standard_errors[(a.bit() * 2 + b.bit()) as usize]
    }
}

const OUTCOMES: [(Outcome, Outcome); 4] = [
    (Outcome::Empty, Outcome::Empty),
    (Outcome::Empty, Outcome::Full),
    (Outcome::Full, Outcome::Empty),
    (Outcome::Full, Outcome::Full),
];

fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draws `shots` samples of the joint outcome for one compatible pair,
/// by inverse CDF over the exact distribution. (1,0) is the catch-all bin,
/// so (1,1) is never produced: its exact probability is zero.
pub fn sample_context(
    state: &QutritState,
    vi: &UnitVector3,
    vj: &UnitVector3,
    shots: u64,
    rng: &mut impl RngCore,
) -> Result<[u64; 4]> {
    sample_context_with_tol(state, vi, vj, shots, rng, crate::linalg::DEFAULT_ORTHO_TOL)
}

/// [`sample_context`] with an explicit compatibility tolerance.
pub fn sample_context_with_tol(
    state: &QutritState,
    vi: &UnitVector3,
    vj: &UnitVector3,
    shots: u64,
    rng: &mut impl RngCore,
    tolerance: f64,
) -> Result<[u64; 4]> {
    let p00 = joint_prob_with_tol(state, vi, vj, Outcome::Empty, Outcome::Empty, tolerance)?
        .value();
    let p01 = joint_prob_with_tol(state, vi, vj, Outcome::Empty, Outcome::Full, tolerance)?
        .value();
    let c1 = p00;
    let c2 = p00 + p01;
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        let u = uniform(rng);
        let slot = if u < c1 {
            0
        } else if u < c2 {
            1
        } else {
            2
        };
        counts[slot] += 1;
    }
    Ok(counts)
}

/// Stream for context i of an experiment with the given seed. Mixing the
/// context index into the seed material keeps streams independent: adding
/// contexts never changes another context's draws.
fn context_rng(seed: u64, i: usize) -> ChaCha12Rng {
    let mut state = seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
        chunk.copy_from_slice(&z.to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Samples every cyclic context of a valid scenario with `shots` draws
/// each. Deterministic given (scenario, shots, seed); contexts run in
/// parallel but assemble in index order.
pub fn run_experiment(s: &CycleScenario, shots: u64, seed: u64) -> Result<SampleReport> {
    let violations = validate_scenario(s);
    if !violations.is_empty() {
        return Err(Error::InvalidScenario { violations });
    }
    if shots == 0 {
        return Err(Error::Infeasible("need at least one shot".into()));
    }
    let n = s.n();
    let contexts: Vec<ContextSample> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let j = i % n + 1;
            let mut rng = context_rng(seed, i);
            let counts =
                sample_context_with_tol(s.state(), s.vector(i), s.vector(j), shots, &mut rng, s.tolerance())?;
            let estimates: Vec<f64> = counts.iter().map(|&c| c as f64 / shots as f64).collect();
            let standard_errors: Vec<f64> = estimates
                .iter()
                .map(|&p| (p * (1.0 - p) / shots as f64).sqrt())
                .collect();
            Ok(ContextSample {
                i,
                j,
                counts,
                estimates: estimates.try_into().expect("four outcomes"),
                standard_errors: standard_errors.try_into().expect("four outcomes"),
            })
        })
        .collect::<Result<_>>()?;
    let p01 = |i: usize| contexts[i - 1].estimates[1];
    let empirical_condition_sums: Vec<f64> = (1..=(n - 1) / 2)
        .map(|j| p01(2 * j - 1) + p01(2 * j))
        .collect();
    let empirical_hardy_prob = p01(n);
    let empirical_cycle_sum = (1..=n).map(p01).sum();
    Ok(SampleReport {
        n,
        shots,
        seed,
        contexts,
        empirical_condition_sums,
        empirical_cycle_sum,
        empirical_hardy_prob,
    })
}

/// The four outcome pairs in count order, for report formatting.
pub fn outcome_order() -> [(Outcome, Outcome); 4] {
    OUTCOMES
}
