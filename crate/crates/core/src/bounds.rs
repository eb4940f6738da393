//! Classical (NCHV) bounds by exhaustive enumeration, quantum cycle bounds
//! in closed form, and multi-start numerical maximization of the Hardy
//! probability and the cycle sum.
//!
//! A noncontextual hidden-variable model gives every box a predetermined
//! outcome, identical across contexts. For the cyclic sum of P(0,1|i,i+1)
//! events the best such assignment reaches (n-1)/2; quantum realizations
//! reach n cos(pi/n)/(1 + cos(pi/n)). The gap between the two is exactly
//! the room available to the Hardy probability P(0,1|n,1) once the
//! (n-1)/2 condition sums are pinned to 1.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{plane_normal, single_prob, QutritState, UnitVector3, DEFAULT_ORTHO_TOL};
use crate::scenario::{check_conditions, hardy_prob, CycleScenario};

/// Largest n for which the 2^n exhaustive oracles run.
pub const ENUMERATION_CAP: usize = 25;

/// Default simplex-diameter tolerance for the optimizers.
pub const DEFAULT_OPT_TOL: f64 = 1e-9;

fn check_cycle_n(n: usize) -> Result<()> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::BadCycleSize { n });
    }
    Ok(())
}

fn check_enumerable(n: usize) -> Result<()> {
    check_cycle_n(n)?;
    if n > ENUMERATION_CAP {
        return Err(Error::TooLarge {
            n,
            max: ENUMERATION_CAP,
        });
    }
    Ok(())
}

/// One deterministic outcome assignment: bit i-1 is the predetermined
/// outcome of box i, independent of which compatible box is co-opened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    bits: Vec<u8>,
}

impl Assignment {
    /// Assignment number `index` in the 2^n enumeration order: box i reads
    /// bit i-1 of `index`.
    pub fn from_index(n: usize, index: u32) -> Self {
        let bits = (0..n).map(|i| ((index >> i) & 1) as u8).collect();
        Self { bits }
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    fn n(&self) -> usize {
        self.bits.len()
    }

    /// Value this assignment gives the cycle sum: the number of cyclic
    /// pairs (i, i+1) showing outcome (0, 1).
    pub fn cycle_value(&self) -> usize {
        let n = self.n();
        (0..n)
            .filter(|&i| self.bits[i] == 0 && self.bits[(i + 1) % n] == 1)
            .count()
    }

    /// Whether the assignment is consistent with every condition pair:
    /// boxes 2j-1, 2j never both full and boxes 2j, 2j+1 never both empty.
    /// This is the reformulation of the condition sums equalling 1.
    pub fn satisfies_conditions(&self) -> bool {
        (1..=(self.n() - 1) / 2).all(|j| {
            let (b1, b2, b3) = (self.bits[2 * j - 2], self.bits[2 * j - 1], self.bits[2 * j]);
            !(b1 == 1 && b2 == 1) && !(b2 == 0 && b3 == 0)
        })
    }

    /// The Hardy event: box n empty and box 1 full.
    pub fn hardy_event(&self) -> bool {
        self.bits[self.n() - 1] == 0 && self.bits[0] == 1
    }
}

/// Max of the cycle sum over all 2^n outcome assignments, by exhaustive
/// enumeration. Equals (n-1)/2 for every odd n; the enumeration is the
/// oracle, the closed form is [`nchv_closed_form`].
pub fn nchv_cycle_bound(n: usize) -> Result<usize> {
    check_enumerable(n)?;
    let mask: u32 = (1u32 << n) - 1;
    // Bit i of `next` is bit i+1 (cyclic) of `a`, so the 01-pairs of the
    // cycle are exactly the set bits of !a & next.
    let best = (0..=mask)
        .into_par_iter()
        .map(|a| {
            let next = ((a >> 1) | (a << (n - 1))) & mask;
            (!a & next & mask).count_ones()
        })
        .max()
        .expect("nonempty range");
    Ok(best as usize)
}

/// The closed form (n-1)/2 for the NCHV cycle bound, for n beyond the
/// enumeration cap. Verified against [`nchv_cycle_bound`] wherever the
/// enumeration is feasible.
pub fn nchv_closed_form(n: usize) -> Result<usize> {
    check_cycle_n(n)?;
    Ok((n - 1) / 2)
}

/// Brute-force check of the NCHV implication: every assignment consistent
/// with all condition pairs keeps the Hardy event impossible.
pub fn nchv_implication_check(n: usize) -> Result<bool> {
    check_enumerable(n)?;
    let mask: u32 = (1u32 << n) - 1;
    let ok = (0..=mask).into_par_iter().all(|a| {
        let assignment = Assignment::from_index(n, a);
        !assignment.satisfies_conditions() || !assignment.hardy_event()
    });
    Ok(ok)
}

/// Quantum maximum of the cycle sum, n cos(pi/n)/(1 + cos(pi/n)).
pub fn quantum_cycle_bound(n: usize) -> Result<f64> {
    check_cycle_n(n)?;
    let c = (PI / n as f64).cos();
    Ok(n as f64 * c / (1.0 + c))
}

/// Slack left for P(0,1|n,1) once the condition sums are pinned to 1:
/// quantum_cycle_bound(n) - (n-1)/2. Strictly below 1/2 for every n.
pub fn hardy_max_bound(n: usize) -> Result<f64> {
    Ok(quantum_cycle_bound(n)? - ((n - 1) / 2) as f64)
}

const POLE: [f64; 3] = [0.0, 0.0, 1.0];

fn pole_state() -> QutritState {
    QutritState::normalize(POLE).expect("static")
}

fn spherical(theta: f64, phi: f64) -> Result<UnitVector3> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    UnitVector3::normalize([st * cp, st * sp, ct])
}

/// Unit vector along eta minus its component on v; together with v it spans
/// a plane containing eta. Degenerates when v is (anti)parallel to eta.
fn residual_of_pole(v: &UnitVector3) -> Result<UnitVector3> {
    let c = v.components();
    let ip = c[2];
    let raw = [
        POLE[0] - ip * c[0],
        POLE[1] - ip * c[1],
        POLE[2] - ip * c[2],
    ];
    UnitVector3::normalize(raw).map_err(|_| {
        Error::Infeasible(format!(
            "vector ({:+.3e}, {:+.3e}, {:+.3e}) is parallel to the state",
            c[0], c[1], c[2]
        ))
    })
}

/// Orthonormal basis of the plane orthogonal to v, with e1 the direction of
/// the pole's residual. Degenerate when v is (anti)parallel to the pole.
fn perp_basis(v: &UnitVector3) -> Result<(UnitVector3, UnitVector3)> {
    let e1 = residual_of_pole(v)?;
    let e2 = UnitVector3::normalize(v.cross(&e1))?;
    Ok((e1, e2))
}

fn in_plane(e1: &UnitVector3, e2: &UnitVector3, gamma: f64) -> Result<UnitVector3> {
    let (sg, cg) = gamma.sin_cos();
    let a = e1.components();
    let b = e2.components();
    UnitVector3::normalize([
        cg * a[0] + sg * b[0],
        cg * a[1] + sg * b[1],
        cg * a[2] + sg * b[2],
    ])
}

fn closing_vector(prev: &UnitVector3, first: &UnitVector3) -> Result<UnitVector3> {
    plane_normal(prev, first).map_err(|_| {
        Error::Infeasible("closing pair is parallel; no common orthogonal direction".into())
    })
}

/// Builds a condition-satisfying scenario from (n+1)/2 free angles.
///
/// State eta = (0,0,1). v2 is spherical from params[0..2]; each further even
/// box 2m takes one angle params[m] in the plane orthogonal to v_{2m-1};
/// every odd box 2m+1 is the normalized residual of eta off v_{2m}, which
/// puts eta in span{v_{2m}, v_{2m+1}} and so pins that condition sum to 1.
/// Box 1 closes the cycle as the common normal of v2 and vn.
///
/// Errors `Infeasible` on the measure-zero degenerate points (an even box
/// parallel to eta, or the closing pair parallel).
pub fn parametrize(n: usize, params: &[f64]) -> Result<CycleScenario> {
    check_cycle_n(n)?;
    let expected = n.div_ceil(2);
    if params.len() != expected {
        return Err(Error::BadParameterCount {
            n,
            expected,
            got: params.len(),
        });
    }
    let mut vectors = vec![UnitVector3::normalize(POLE).expect("static"); n];
    vectors[1] = spherical(params[0], params[1])?;
    vectors[2] = residual_of_pole(&vectors[1])?;
    for m in 2..=(n - 1) / 2 {
        let (e1, e2) = perp_basis(&vectors[2 * m - 2])?;
        vectors[2 * m - 1] = in_plane(&e1, &e2, params[m])?;
        vectors[2 * m] = residual_of_pole(&vectors[2 * m - 1])?;
    }
    vectors[0] = closing_vector(&vectors[1], &vectors[n - 1])?;
    CycleScenario::new(pole_state(), vectors, DEFAULT_ORTHO_TOL)
}

/// Builds a cycle scenario with only the cyclic orthogonality constraints
/// (condition sums free) from n angles: v1 spherical from params[0..2],
/// each v_i for i = 2..n-1 one angle in the plane orthogonal to v_{i-1},
/// and vn the common normal of v_{n-1} and v1. Closure is exact by
/// construction, so every evaluated point is feasible.
pub fn parametrize_cycle(n: usize, params: &[f64]) -> Result<CycleScenario> {
    check_cycle_n(n)?;
    if params.len() != n {
        return Err(Error::BadParameterCount {
            n,
            expected: n,
            got: params.len(),
        });
    }
    let mut vectors = vec![UnitVector3::normalize(POLE).expect("static"); n];
    vectors[0] = spherical(params[0], params[1])?;
    for i in 1..n - 1 {
        let (e1, e2) = perp_basis(&vectors[i - 1])?;
        vectors[i] = in_plane(&e1, &e2, params[i + 1])?;
    }
    vectors[n - 1] = closing_vector(&vectors[n - 2], &vectors[0])?;
    CycleScenario::new(pole_state(), vectors, DEFAULT_ORTHO_TOL)
}

fn rotation_to_pole(from: [f64; 3]) -> [[f64; 3]; 3] {
    let k = [from[1], -from[0], 0.0]; // from x pole
    let s2 = k[0] * k[0] + k[1] * k[1];
    let c = from[2];
    if s2 < 1e-30 {
        if c > 0.0 {
            return [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        }
        return [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]];
    }
    // Rodrigues: R = I + K + K^2 (1-c)/s^2 with K the skew form of k.
    let f = (1.0 - c) / s2;
    [
        [1.0 - f * k[1] * k[1], f * k[0] * k[1], k[1]],
        [f * k[0] * k[1], 1.0 - f * k[0] * k[0], -k[0]],
        [-k[1], k[0], c],
    ]
}

fn rotate(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// Inverse of [`parametrize`] up to projector signs, for scenarios whose
/// condition sums equal 1: rotates the state to (0,0,1) and reads back the
/// (n+1)/2 angles. Reparametrizing reproduces every probability of the
/// input (each reconstructed vector matches the original up to sign).
pub fn extract_params(s: &CycleScenario) -> Result<Vec<f64>> {
    let rot = rotation_to_pole(s.state().components());
    let rotated: Vec<UnitVector3> = s
        .vectors()
        .iter()
        .map(|v| UnitVector3::normalize(rotate(&rot, v.components())))
        .collect::<Result<_>>()?;
    let v2 = rotated[1].components();
    let mut params = vec![v2[2].clamp(-1.0, 1.0).acos(), v2[1].atan2(v2[0])];
    let mut prev_odd = residual_of_pole(&rotated[1])?;
    for m in 2..=(s.n() - 1) / 2 {
        let (e1, e2) = perp_basis(&prev_odd)?;
        let target = &rotated[2 * m - 1];
        let gamma = target.inner(&e2).atan2(target.inner(&e1));
        params.push(gamma);
        let even = in_plane(&e1, &e2, gamma)?;
        prev_odd = residual_of_pole(&even)?;
    }
    Ok(params)
}

/// Outcome of one local search start.
struct StartOutcome {
    x: Vec<f64>,
    objective: f64,
    converged: bool,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn unit_from_u64(z: u64) -> f64 {
    (z >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Kronecker sequence directions 1/g^i from the generalized golden ratio,
/// the positive root of g^(d+1) = g + 1. Successive multiples fill the unit
/// cube evenly, so starts probe the angle space without clustering.
fn kronecker_alphas(dim: usize) -> Vec<f64> {
    let mut g = 1.5f64;
    for _ in 0..64 {
        g = (g + 1.0).powf(1.0 / (dim as f64 + 1.0));
    }
    (1..=dim as i32).map(|i| (1.0 / g.powi(i)).fract()).collect()
}

/// Nelder-Mead ascent (reflection 1, expansion 2, contraction 1/2,
/// shrink 1/2). Terminates when the simplex diameter drops below tol or
/// the iteration budget runs out.
fn nelder_mead_max(
    objective: &(impl Fn(&[f64]) -> f64 + Sync),
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> StartOutcome {
    let dim = x0.len();
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    pts.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += 0.25;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| objective(p)).collect();
    let mut converged = false;

    let order = |pts: &mut Vec<Vec<f64>>, vals: &mut Vec<f64>| {
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        *pts = idx.iter().map(|&i| pts[i].clone()).collect();
        *vals = idx.iter().map(|&i| vals[i]).collect();
    };

    for _ in 0..max_iter {
        order(&mut pts, &mut vals);
        let diameter = pts[1..]
            .iter()
            .flat_map(|p| p.iter().zip(&pts[0]).map(|(a, b)| (a - b).abs()))
            .fold(0.0f64, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|i| pts[..dim].iter().map(|p| p[i]).sum::<f64>() / dim as f64)
            .collect();
        let worst = pts[dim].clone();
        let at = |coef: f64| -> Vec<f64> {
            (0..dim)
                .map(|i| centroid[i] + coef * (centroid[i] - worst[i]))
                .collect()
        };
        let reflected = at(1.0);
        let fr = objective(&reflected);
        if fr > vals[0] {
            let expanded = at(2.0);
            let fe = objective(&expanded);
            if fe > fr {
                pts[dim] = expanded;
                vals[dim] = fe;
            } else {
                pts[dim] = reflected;
                vals[dim] = fr;
            }
        } else if fr > vals[dim - 1] {
            pts[dim] = reflected;
            vals[dim] = fr;
        } else {
            let (candidate, fc, accept) = if fr > vals[dim] {
                let outside = at(0.5);
                let fc = objective(&outside);
                (outside, fc, fc >= fr)
            } else {
                let inside = at(-0.5);
                let fc = objective(&inside);
                (inside, fc, fc > vals[dim])
            };
            if accept {
                pts[dim] = candidate;
                vals[dim] = fc;
            } else {
                for i in 1..=dim {
                    pts[i] = (0..dim)
                        .map(|j| pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]))
                        .collect();
                    vals[i] = objective(&pts[i]);
                }
            }
        }
    }
    order(&mut pts, &mut vals);
    StartOutcome {
        x: pts.swap_remove(0),
        objective: vals[0],
        converged,
    }
}

/// Runs `starts` independent local searches from a shifted Kronecker grid
/// over the scaled angle box. Start index fixes the grid point and the
/// seed fixes the shift, so the outcome is deterministic regardless of
/// how rayon schedules the starts (selection is index-ordered).
fn multistart_max(
    dim: usize,
    scale: &[f64],
    starts: usize,
    seed: u64,
    tol: f64,
    objective: &(impl Fn(&[f64]) -> f64 + Sync),
) -> Vec<StartOutcome> {
    let alphas = kronecker_alphas(dim);
    let mut state = seed;
    let shifts: Vec<f64> = (0..dim).map(|_| unit_from_u64(splitmix64(&mut state))).collect();
    let max_iter = 400 * dim + 800;
    (0..starts)
        .into_par_iter()
        .map(|s| {
            let x0: Vec<f64> = (0..dim)
                .map(|i| (shifts[i] + (s + 1) as f64 * alphas[i]).fract() * scale[i])
                .collect();
            nelder_mead_max(objective, &x0, tol, max_iter)
        })
        .collect()
}

/// Ties within 1e-12 resolve to the lowest start index; with the
/// index-ordered outcome list this is scheduling-independent.
fn select_best(outcomes: &[StartOutcome]) -> usize {
    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if o.objective > outcomes[best].objective + 1e-12 {
            best = i;
        }
    }
    best
}

/// Result of a multi-start maximization. For [`optimize_hardy_max`] the
/// objective is P(0,1|n,1); for [`optimize_cycle_max`] it is the cycle sum.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_scenario: CycleScenario,
    pub objective: f64,
    pub starts_run: usize,
    pub best_start_index: usize,
    pub converged: bool,
    /// Best objective found by each start, in start order.
    pub objective_history: Vec<f64>,
}

fn angle_scales(dim: usize) -> Vec<f64> {
    // Polar angle spans pi, everything after (azimuth, in-plane angles) 2 pi.
    (0..dim).map(|i| if i == 0 { PI } else { 2.0 * PI }).collect()
}

/// Maximizes the Hardy probability over all condition-satisfying scenarios
/// of size n. Every evaluated point is feasible by construction
/// ([`parametrize`]); degenerate points score -1 and never win.
pub fn optimize_hardy_max(
    n: usize,
    starts: usize,
    seed: u64,
    tol: f64,
) -> Result<OptimizationResult> {
    check_cycle_n(n)?;
    if starts == 0 {
        return Err(Error::Infeasible("need at least one start".into()));
    }
    let dim = n.div_ceil(2);
    let objective = |params: &[f64]| -> f64 {
        match parametrize(n, params) {
            Ok(s) => single_prob(s.state(), s.vector(1)).value(),
            Err(_) => -1.0,
        }
    };
    let outcomes = multistart_max(dim, &angle_scales(dim), starts, seed, tol, &objective);
    let best = select_best(&outcomes);
    if outcomes[best].objective < 0.0 {
        return Err(Error::Infeasible(
            "every start degenerated; try a different seed".into(),
        ));
    }
    let best_scenario = parametrize(n, &outcomes[best].x)?;
    let objective = hardy_prob(&best_scenario)?.value();
    Ok(OptimizationResult {
        objective,
        starts_run: starts,
        best_start_index: best,
        converged: outcomes[best].converged,
        objective_history: outcomes.iter().map(|o| o.objective).collect(),
        best_scenario,
    })
}

/// Maximizes the cycle sum over scenarios constrained only by cyclic
/// orthogonality ([`parametrize_cycle`]; condition sums are free). The
/// best value approaches quantum_cycle_bound(n) from below.
pub fn optimize_cycle_max(n: usize, starts: usize, seed: u64) -> Result<OptimizationResult> {
    check_cycle_n(n)?;
    if starts == 0 {
        return Err(Error::Infeasible("need at least one start".into()));
    }
    let dim = n;
    let objective = |params: &[f64]| -> f64 {
        match parametrize_cycle(n, params) {
            Ok(s) => s
                .vectors()
                .iter()
                .map(|v| single_prob(s.state(), v).value())
                .sum(),
            Err(_) => -1.0,
        }
    };
    let outcomes = multistart_max(
        dim,
        &angle_scales(dim),
        starts,
        seed,
        DEFAULT_OPT_TOL,
        &objective,
    );
    let best = select_best(&outcomes);
    if outcomes[best].objective < 0.0 {
        return Err(Error::Infeasible(
            "every start degenerated; try a different seed".into(),
        ));
    }
    let best_scenario = parametrize_cycle(n, &outcomes[best].x)?;
    let objective = check_conditions(&best_scenario)?.cycle_sum;
    Ok(OptimizationResult {
        objective,
        starts_run: starts,
        best_start_index: best,
        converged: outcomes[best].converged,
        objective_history: outcomes.iter().map(|o| o.objective).collect(),
        best_scenario,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{hardy_family, pentagon, validate_scenario};
    use rand_chacha::rand_core::{RngCore, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn nchv_bounds_match_closed_form() {
        assert_eq!(nchv_cycle_bound(5).unwrap(), 2);
        assert_eq!(nchv_cycle_bound(7).unwrap(), 3);
        assert_eq!(nchv_cycle_bound(9).unwrap(), 4);
        for n in (5..=17).step_by(2) {
            assert_eq!(nchv_cycle_bound(n).unwrap(), nchv_closed_form(n).unwrap());
        }
    }

    #[test]
    fn nchv_enumeration_has_limits() {
        assert!(matches!(
            nchv_cycle_bound(27),
            Err(Error::TooLarge { n: 27, max: 25 })
        ));
        assert!(matches!(nchv_cycle_bound(6), Err(Error::BadCycleSize { n: 6 })));
        assert_eq!(nchv_closed_form(27).unwrap(), 13);
    }

    #[test]
    fn nchv_implication_holds_and_is_not_vacuous() {
        for n in (5..=13).step_by(2) {
            assert!(nchv_implication_check(n).unwrap(), "n = {n}");
        }
        // Non-vacuity: consistent assignments exist, and without the
        // conditions the Hardy event is easy to realize.
        let consistent = (0u32..32)
            .filter(|&a| Assignment::from_index(5, a).satisfies_conditions())
            .count();
        assert!(consistent > 0);
        assert!((0u32..32).any(|a| Assignment::from_index(5, a).hardy_event()));
    }

    #[test]
    fn assignment_bit_trick_agrees_with_direct_count() {
        let n = 11;
        let mask: u32 = (1 << n) - 1;
        for a in (0..=mask).step_by(37) {
            let next = ((a >> 1) | (a << (n - 1))) & mask;
            let fast = (!a & next & mask).count_ones() as usize;
            assert_eq!(fast, Assignment::from_index(n, a).cycle_value());
        }
    }

    #[test]
    fn quantum_bound_values() {
        let q5 = quantum_cycle_bound(5).unwrap();
        assert!((q5 - 5f64.sqrt()).abs() < 1e-12);
        assert!((quantum_cycle_bound(7).unwrap() - 3.317667207394096).abs() < 1e-12);
        assert!((quantum_cycle_bound(9).unwrap() - 4.360089581434065).abs() < 1e-12);
    }

    #[test]
    fn hardy_max_bound_values_and_limit() {
        assert!((hardy_max_bound(5).unwrap() - (5f64.sqrt() - 2.0)).abs() < 1e-12);
        assert!((hardy_max_bound(7).unwrap() - 0.3176672073940962).abs() < 1e-12);
        let mut last = 0.0;
        for n in (5..=101).step_by(2) {
            let b = hardy_max_bound(n).unwrap();
            assert!(b < 0.5, "n = {n}: {b}");
            assert!(b > last, "n = {n}");
            last = b;
        }
        let far = hardy_max_bound(10001).unwrap();
        assert!(far > 0.4995 && far < 0.5, "{far}");
        assert!((far - 0.49987664227865025).abs() < 1e-12);
    }

    #[test]
    fn parametrize_rejects_bad_input() {
        assert!(matches!(
            parametrize(5, &[0.1, 0.2]),
            Err(Error::BadParameterCount {
                n: 5,
                expected: 3,
                got: 2
            })
        ));
        // params[0] = 0 puts v2 at the pole, i.e. parallel to the state.
        assert!(matches!(
            parametrize(5, &[0.0, 0.3, 1.0]),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn parametrize_points_satisfy_conditions_by_construction() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let mut angle = |scale: f64| unit_from_u64(rng.next_u64()) * scale;
        for n in [5usize, 7, 9, 13] {
            let mut done = 0;
            while done < 50 {
                let dim = n.div_ceil(2);
                let params: Vec<f64> = (0..dim)
                    .map(|i| angle(if i == 0 { PI } else { 2.0 * PI }))
                    .collect();
                let Ok(s) = parametrize(n, &params) else { continue };
                let report = check_conditions(&s).unwrap();
                assert!(report.all_satisfied, "n = {n}: {:?}", report.condition_sums);
                done += 1;
            }
        }
    }

    #[test]
    fn random_feasible_points_respect_quantum_bounds() {
        // Lighter version of the acceptance sweep: 200 draws per n.
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let mut angle = |scale: f64| unit_from_u64(rng.next_u64()) * scale;
        for n in [5usize, 7, 9] {
            let hmb = hardy_max_bound(n).unwrap();
            let qcb = quantum_cycle_bound(n).unwrap();
            let mut done = 0;
            while done < 200 {
                let dim = n.div_ceil(2);
                let params: Vec<f64> = (0..dim)
                    .map(|i| angle(if i == 0 { PI } else { 2.0 * PI }))
                    .collect();
                let Ok(s) = parametrize(n, &params) else { continue };
                let report = check_conditions(&s).unwrap();
                assert!(report.hardy_prob <= hmb + 1e-9, "n = {n}");
                assert!(report.cycle_sum <= qcb + 1e-9, "n = {n}");
                done += 1;
            }
        }
    }

    #[test]
    fn parametrize_cycle_points_are_feasible_and_bounded() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let mut angle = |scale: f64| unit_from_u64(rng.next_u64()) * scale;
        for n in [5usize, 7, 9] {
            let qcb = quantum_cycle_bound(n).unwrap();
            let mut done = 0;
            while done < 200 {
                let params: Vec<f64> = (0..n)
                    .map(|i| angle(if i == 0 { PI } else { 2.0 * PI }))
                    .collect();
                let Ok(s) = parametrize_cycle(n, &params) else { continue };
                assert!(validate_scenario(&s).is_empty());
                let cycle_sum = check_conditions(&s).unwrap().cycle_sum;
                assert!(cycle_sum <= qcb + 1e-9, "n = {n}: {cycle_sum}");
                done += 1;
            }
        }
    }

    #[test]
    fn extracted_pentagon_params_reproduce_one_ninth() {
        let params = extract_params(&pentagon()).unwrap();
        assert_eq!(params.len(), 3);
        let s = parametrize(5, &params).unwrap();
        let report = check_conditions(&s).unwrap();
        assert!(report.all_satisfied);
        assert!((report.hardy_prob - 1.0 / 9.0).abs() < 1e-10);
    }

    #[test]
    fn extracted_family_params_reproduce_9_41() {
        let family = hardy_family(2).unwrap();
        let params = extract_params(&family).unwrap();
        assert_eq!(params.len(), 5);
        let s = parametrize(9, &params).unwrap();
        let report = check_conditions(&s).unwrap();
        assert!(report.all_satisfied);
        assert!((report.hardy_prob - 9.0 / 41.0).abs() < 1e-10);
    }

    #[test]
    fn optimizer_finds_pentagon_maximum() {
        let result = optimize_hardy_max(5, 16, 1, 1e-9).unwrap();
        assert!((result.objective - 1.0 / 9.0).abs() < 1e-4, "{}", result.objective);
        assert!(result.objective <= hardy_max_bound(5).unwrap() + 1e-9);
        let report = check_conditions(&result.best_scenario).unwrap();
        assert!(report.all_satisfied);
        assert!((result.objective - report.hardy_prob).abs() < 1e-10);
        assert_eq!(result.objective_history.len(), 16);
    }

    #[test]
    fn optimizer_is_deterministic() {
        let a = optimize_hardy_max(7, 8, 42, 1e-9).unwrap();
        let b = optimize_hardy_max(7, 8, 42, 1e-9).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.best_start_index, b.best_start_index);
        for (x, y) in a.objective_history.iter().zip(&b.objective_history) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert_eq!(a.best_scenario, b.best_scenario);
    }

    #[test]
    fn cycle_optimizer_reaches_kcbs_maximum() {
        let result = optimize_cycle_max(5, 16, 1).unwrap();
        let target = quantum_cycle_bound(5).unwrap();
        assert!((result.objective - target).abs() < 1e-3, "{}", result.objective);
        assert!(result.objective <= target + 1e-6);
    }

    #[test]
    fn optimizers_reject_zero_starts_and_bad_n() {
        assert!(optimize_hardy_max(5, 0, 1, 1e-9).is_err());
        assert!(matches!(
            optimize_hardy_max(4, 8, 1, 1e-9),
            Err(Error::BadCycleSize { n: 4 })
        ));
        assert!(matches!(
            optimize_cycle_max(3, 8, 1),
            Err(Error::BadCycleSize { n: 3 })
        ));
    }
}
