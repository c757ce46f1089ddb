//! Qubit strategies for two-party binary-input games.
//!
//! Each (party, input) slot is described by an active pair `(first, second)`
//! of outcomes and an angle `θ`: outcome `first` gets `Π(θ) = |ψ(θ)><ψ(θ)|`
//! with `ψ(θ) = (cos θ, sin θ)`, outcome `second` gets `1 - Π(θ)` and all
//! other outcomes get 0. A pair with `first == second` is the deterministic
//! measurement that always answers `first`.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::nelder_mead::{nelder_mead, NelderMeadOptions};
use super::{omega, MeasurementFamily, Povm, QuantumError};
use crate::game::JointDistribution;
use crate::linalg::{jacobi_symmetric, principal_eigenvalue, Complex, ComplexMatrix};
use crate::rational::to_f64;

/// Active pairs for slots `(A, 0), (A, 1), (B, 0), (B, 1)`.
pub type Pattern = [(usize, usize); 4];

pub const TABLE2_PATTERN: Pattern = [(1, 2), (0, 1), (0, 1), (0, 2)];

pub fn table2_pattern() -> Pattern {
    TABLE2_PATTERN
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitStrategy {
    /// `(alpha0, alpha1, beta0, beta1)`.
    pub angles: [f64; 4],
    pub pattern: Pattern,
    /// Shared state in the basis `|00>, |01>, |10>, |11>` (Alice first); the
    /// principal eigenvector of Ω is used when absent.
    pub state: Option<[Complex; 4]>,
}

fn psi(theta: f64) -> [f64; 2] {
    [theta.cos(), theta.sin()]
}

/// `Π(θ)` as a row-major real 2x2 matrix.
fn pi_real(theta: f64) -> [f64; 4] {
    let [c, s] = psi(theta);
    [c * c, c * s, c * s, s * s]
}

fn slot_operator(outcome: usize, pair: (usize, usize), theta: f64) -> [f64; 4] {
    let (first, second) = pair;
    if first == second {
        return if outcome == first { [1.0, 0.0, 0.0, 1.0] } else { [0.0; 4] };
    }
    let p = pi_real(theta);
    if outcome == first {
        p
    } else if outcome == second {
        [1.0 - p[0], -p[1], -p[2], 1.0 - p[3]]
    } else {
        [0.0; 4]
    }
}

fn to_matrix(m: [f64; 4]) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, |i, j| Complex::new(m[i * 2 + j], 0.0))
}

fn check_game(dist: &JointDistribution, pattern: &Pattern) -> Result<(), QuantumError> {
    if !dist.is_binary_two_party() {
        return Err(QuantumError::ShapeMismatch("qubit strategies need two parties with binary inputs".into()));
    }
    let x = dist.referee_size();
    if pattern.iter().any(|&(f, s)| f >= x || s >= x) {
        return Err(QuantumError::ShapeMismatch(format!("pattern outcome outside [{x}]")));
    }
    Ok(())
}

impl QubitStrategy {
    pub fn new(angles: [f64; 4], pattern: Pattern) -> Self {
        Self { angles, pattern, state: None }
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        if self.angles.iter().any(|a| !a.is_finite()) {
            return Err(QuantumError::InvalidState("angles must be finite".into()));
        }
        if let Some(s) = &self.state {
            let norm: f64 = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(QuantumError::InvalidState(format!("state norm {norm}")));
            }
        }
        Ok(())
    }

    /// Alice's and Bob's measurement families with `outcomes` outcomes.
    pub fn families(&self, outcomes: usize) -> Result<(MeasurementFamily, MeasurementFamily), QuantumError> {
        let slot = |k: usize| Povm {
            elements: (0..outcomes)
                .map(|x| to_matrix(slot_operator(x, self.pattern[k], self.angles[k])))
                .collect(),
        };
        Ok((MeasurementFamily::new(vec![slot(0), slot(1)])?, MeasurementFamily::new(vec![slot(2), slot(3)])?))
    }

    pub fn omega(&self, dist: &JointDistribution) -> Result<ComplexMatrix, QuantumError> {
        check_game(dist, &self.pattern)?;
        let (m, n) = self.families(dist.referee_size())?;
        omega(dist, &m, &n)
    }

    /// The state actually used: the explicit one, or the principal
    /// eigenvector of Ω.
    pub fn effective_state(&self, dist: &JointDistribution) -> Result<Vec<Complex>, QuantumError> {
        match &self.state {
            Some(s) => Ok(s.to_vec()),
            None => Ok(principal_eigenvalue(&self.omega(dist)?)?.1),
        }
    }

    pub fn report(&self, dist: &JointDistribution) -> Result<StrategyReport, QuantumError> {
        let value = eval_strategy(dist, self)?;
        let state = self.effective_state(dist)?;
        Ok(StrategyReport {
            angles: self.angles,
            pattern: self.pattern.map(|(f, s)| [f, s]),
            state: state.iter().map(|z| [z.re, z.im]).collect(),
            value,
        })
    }
}

/// Serializable strategy record: angles, active pairs, state amplitudes as
/// `[re, im]` pairs, and the achieved value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategyReport {
    pub angles: [f64; 4],
    pub pattern: [[usize; 2]; 4],
    pub state: Vec<[f64; 2]>,
    pub value: f64,
}

impl StrategyReport {
    pub fn strategy(&self) -> Result<QubitStrategy, QuantumError> {
        if self.state.len() != 4 {
            return Err(QuantumError::InvalidState("state must have four amplitudes".into()));
        }
        let mut state = [Complex::new(0.0, 0.0); 4];
        for (s, [re, im]) in state.iter_mut().zip(&self.state) {
            *s = Complex::new(*re, *im);
        }
        let s = QubitStrategy {
            angles: self.angles,
            pattern: self.pattern.map(|[f, s]| (f, s)),
            state: Some(state),
        };
        s.validate()?;
        Ok(s)
    }
}

/// The explicit optimal strategy for the three-outcome example game.
pub fn paper_strategy() -> QubitStrategy {
    let r13 = 13f64.sqrt();
    let theta1 = 0.25 * ((121.0 + 52.0 * r13) / 477.0).acos();
    let theta2 = 0.25 * ((-431.0 + 4.0 * r13) / 477.0).acos();
    QubitStrategy::new(
        [-theta1, theta2, std::f64::consts::FRAC_PI_2 - theta2, theta1],
        TABLE2_PATTERN,
    )
}

/// Value of the strategy: `λ_max(Ω)`, or `<σ|Ω|σ>` for an explicit state.
pub fn eval_strategy(dist: &JointDistribution, strat: &QubitStrategy) -> Result<f64, QuantumError> {
    strat.validate()?;
    let o = strat.omega(dist)?;
    match &strat.state {
        Some(s) => Ok(o.expectation(s).re),
        None => Ok(principal_eigenvalue(&o)?.0),
    }
}

/// All patterns that answer only outcomes which can be correct for the
/// slot's input: unordered pairs and single outcomes from the support.
/// An input that never occurs gets the single pattern `(0, 0)`.
pub fn prune_consistent_patterns(dist: &JointDistribution) -> Vec<Pattern> {
    let supports = [dist.output_support(0), dist.output_support(1)];
    let options: Vec<Vec<(usize, usize)>> = (0..4)
        .map(|k| {
            let s = &supports[k / 2][k % 2];
            if s.is_empty() {
                return vec![(0, 0)];
            }
            let mut opts = Vec::new();
            for (i, &f) in s.iter().enumerate() {
                for &g in &s[i + 1..] {
                    opts.push((f, g));
                }
            }
            opts.extend(s.iter().map(|&x| (x, x)));
            opts
        })
        .collect();
    let mut out = Vec::new();
    for p0 in &options[0] {
        for p1 in &options[1] {
            for p2 in &options[2] {
                for p3 in &options[3] {
                    out.push([*p0, *p1, *p2, *p3]);
                }
            }
        }
    }
    out
}

/// Support of the game with float weights, for the fast evaluator.
struct FastGame {
    terms: Vec<(usize, usize, usize, f64)>,
}

impl FastGame {
    fn new(dist: &JointDistribution) -> Self {
        Self { terms: dist.support().map(|(x, ab, p)| (x, ab[0], ab[1], to_f64(p))).collect() }
    }

    /// `λ_max(Ω)` for real qubit measurements.
    fn value(&self, angles: &[f64], pattern: &Pattern) -> f64 {
        let mut o = [0.0f64; 16];
        for &(x, a, b, p) in &self.terms {
            let m = slot_operator(x, pattern[a], angles[a]);
            let n = slot_operator(x, pattern[2 + b], angles[2 + b]);
            for r in 0..4 {
                for c in 0..4 {
                    o[r * 4 + c] += p * m[(r / 2) * 2 + c / 2] * n[(r % 2) * 2 + c % 2];
                }
            }
        }
        let (vals, _) = jacobi_symmetric(&mut o, 4);
        vals.into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct OptimizeOptions {
    /// Random starting points per pattern.
    pub seeds: usize,
    /// Objective evaluations allowed per Nelder–Mead run.
    pub budget: usize,
    pub rng_seed: u64,
    /// Restrict the search to these patterns instead of all prune-consistent ones.
    pub patterns: Option<Vec<Pattern>>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self { seeds: 20, budget: 2000, rng_seed: 0x5eed, patterns: None }
    }
}

pub fn optimize_qubit(
    dist: &JointDistribution,
    seeds: usize,
    budget: usize,
) -> Result<(f64, QubitStrategy), QuantumError> {
    optimize_qubit_with(dist, &OptimizeOptions { seeds, budget, ..Default::default() })
}

/// Nelder–Mead over the four angles for every pattern and seed; the state is
/// the principal eigenvector at each evaluation. Runs are independent and
/// reduced in a fixed order, so the result does not depend on scheduling.
pub fn optimize_qubit_with(
    dist: &JointDistribution,
    opts: &OptimizeOptions,
) -> Result<(f64, QubitStrategy), QuantumError> {
    let patterns = opts.patterns.clone().unwrap_or_else(|| prune_consistent_patterns(dist));
    for p in &patterns {
        check_game(dist, p)?;
    }
    let game = FastGame::new(dist);
    let seeds = opts.seeds.max(1);
    let nm = NelderMeadOptions { max_evals: opts.budget.max(10), ..Default::default() };

    let runs: Vec<(f64, [f64; 4], usize)> = (0..patterns.len() * seeds)
        .into_par_iter()
        .map(|job| {
            let pi = job / seeds;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.rng_seed);
            rng.set_stream(job as u64);
            let half_pi = std::f64::consts::FRAC_PI_2;
            let x0: Vec<f64> = (0..4).map(|_| rng.gen_range(-half_pi..half_pi)).collect();
            let pattern = &patterns[pi];
            let r = nelder_mead(|x| -game.value(x, pattern), &x0, nm);
            let mut angles = [0.0; 4];
            angles.copy_from_slice(&r.x);
            (-r.value, angles, pi)
        })
        .collect();

    let (_, angles, pi) = runs
        .into_iter()
        .fold(None, |best: Option<(f64, [f64; 4], usize)>, run| match best {
            Some(b) if b.0 >= run.0 => Some(b),
            _ => Some(run),
        })
        .expect("at least one run");
    let strat = QubitStrategy::new(angles, patterns[pi]);
    let value = eval_strategy(dist, &strat)?;
    Ok((value, strat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{point_mass, theorem1_game};

    fn t_star() -> f64 {
        (16.0 + 13f64.sqrt()) / 45.0
    }

    #[test]
    fn reference_angles_relation() {
        let r13 = 13f64.sqrt();
        let theta1 = 0.25 * ((121.0 + 52.0 * r13) / 477.0).acos();
        let theta2 = 0.25 * ((-431.0 + 4.0 * r13) / 477.0).acos();
        assert!(((4.0 * theta1).cos() - 13.0 * (4.0 * theta2).cos() - 12.0).abs() < 1e-12);
        let c1 = ((159.0 + (689.0 * (23.0 + 2.0 * r13)).sqrt()) / 318.0).sqrt();
        let c2 = ((159.0 + (53.0 * (23.0 + 2.0 * r13)).sqrt()) / 318.0).sqrt();
        assert!((theta1.cos() - c1).abs() < 1e-12);
        assert!((theta2.cos() - c2).abs() < 1e-12);
    }

    #[test]
    fn reference_strategy_value_and_state() {
        let g = theorem1_game();
        let s = paper_strategy();
        assert!((eval_strategy(&g, &s).unwrap() - t_star()).abs() < 1e-10);
        let v = s.effective_state(&g).unwrap();
        let inner = (715.0 - 182.0 * 13f64.sqrt()).sqrt() / 78.0;
        let (sp, sm) = ((0.5 + inner).sqrt(), (0.5 - inner).sqrt());
        let phase = v[0] / v[0].norm();
        let v: Vec<Complex> = v.iter().map(|z| z / phase).collect();
        assert!((v[0].re - sp).abs() < 1e-8);
        assert!((v[3].re - sm).abs() < 1e-8);
        assert!(v[1].norm() < 1e-8 && v[2].norm() < 1e-8);

        let explicit = QubitStrategy {
            state: Some([Complex::new(sp, 0.0), Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), Complex::new(sm, 0.0)]),
            ..s
        };
        assert!((eval_strategy(&g, &explicit).unwrap() - t_star()).abs() < 1e-10);
    }

    #[test]
    fn fast_path_matches_general_omega() {
        let g = theorem1_game();
        let fast = FastGame::new(&g);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let patterns = prune_consistent_patterns(&g);
        assert_eq!(patterns.len(), 81);
        assert!(patterns.contains(&TABLE2_PATTERN));
        for _ in 0..50 {
            let angles: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
            let p = patterns[rng.gen_range(0..patterns.len())];
            let s = QubitStrategy::new(angles, p);
            assert!((fast.value(&angles, &p) - eval_strategy(&g, &s).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_angles_are_classical() {
        let g = theorem1_game();
        let s = QubitStrategy::new([0.0; 4], TABLE2_PATTERN);
        assert!(eval_strategy(&g, &s).unwrap() <= 0.4 + 1e-12);
    }

    #[test]
    fn point_mass_optimum() {
        let g = point_mass(2, vec![2, 2]);
        let (v, _) = optimize_qubit(&g, 2, 500).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = point_mass(2, vec![3, 2]);
        assert!(optimize_qubit(&g, 1, 100).is_err());
        let s = QubitStrategy::new([f64::NAN, 0.0, 0.0, 0.0], TABLE2_PATTERN);
        assert!(eval_strategy(&theorem1_game(), &s).is_err());
        let s = QubitStrategy::new([0.0; 4], [(0, 3), (0, 1), (0, 1), (0, 2)]);
        assert!(eval_strategy(&theorem1_game(), &s).is_err());
    }

    #[test]
    fn report_round_trip() {
        let g = theorem1_game();
        let r = paper_strategy().report(&g).unwrap();
        let s = r.strategy().unwrap();
        assert!((eval_strategy(&g, &s).unwrap() - r.value).abs() < 1e-12);
    }
}
