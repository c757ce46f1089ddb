//! See-saw lower bounds for quantum inputs without shared entanglement.
//!
//! Each half-step fixes one party and improves the other's POVM by gradient
//! ascent over `M_x = S^{-1/2} K_x S^{-1/2}` with `K_x = A_x† A_x` and
//! `S = sum_x K_x`, which keeps every iterate a valid POVM. Only improving
//! steps are accepted, so the objective never decreases.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::{CqqState, Povm, QuantumError};
use crate::game::JointDistribution;
use crate::linalg::{Complex, ComplexMatrix};
use crate::rational::{ratio, to_f64, Rational};

pub const MAX_LOCAL_DIM: usize = 8;

#[derive(Debug, Clone)]
pub struct SeesawOptions {
    pub restarts: usize,
    /// Alternations (one Alice and one Bob update each).
    pub iters: usize,
    /// Gradient steps per half-step.
    pub inner_steps: usize,
    pub rng_seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        Self { restarts: 8, iters: 60, inner_steps: 25, rng_seed: 0x5eed }
    }
}

#[derive(Debug, Clone)]
pub struct SeesawResult {
    pub value: f64,
    pub alice: Povm,
    pub bob: Povm,
    /// Objective after every half-step of the winning restart.
    pub history: Vec<f64>,
}

/// `sum_x P(x) tr(rho^x (M_x ⊗ N_x))`.
pub fn seesaw_value(state: &CqqState, alice: &Povm, bob: &Povm) -> f64 {
    state
        .px()
        .iter()
        .zip(state.states())
        .enumerate()
        .map(|(x, (p, rho))| to_f64(p) * rho.trace_product(&alice.element(x).kron(bob.element(x))).re)
        .sum()
}

/// Weighted operators `R_x` seen by one party when the other is fixed.
fn effective_operators(state: &CqqState, other: &[ComplexMatrix], alice: bool) -> Vec<ComplexMatrix> {
    let (da, db) = state.dims();
    state
        .px()
        .iter()
        .zip(state.states())
        .zip(other)
        .map(|((p, rho), m)| {
            let w = to_f64(p);
            if alice {
                let ext = ComplexMatrix::identity(da).kron(m);
                (rho * &ext).partial_trace_second(da, db).expect("dims").scale(w).hermitian_part()
            } else {
                let ext = m.kron(&ComplexMatrix::identity(db));
                (rho * &ext).partial_trace_first(da, db).expect("dims").scale(w).hermitian_part()
            }
        })
        .collect()
}

struct Parameterized {
    a: Vec<ComplexMatrix>,
}

struct Evaluated {
    povm: Vec<ComplexMatrix>,
    k: Vec<ComplexMatrix>,
    t: ComplexMatrix,
    basis: ComplexMatrix,
    s_values: Vec<f64>,
}

impl Parameterized {
    fn random(n: usize, d: usize, rng: &mut impl Rng) -> Self {
        let a = (0..n)
            .map(|_| ComplexMatrix::from_fn(d, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))))
            .collect();
        Self { a }
    }

    fn evaluate(&self) -> Option<Evaluated> {
        let k: Vec<ComplexMatrix> = self.a.iter().map(|a| &a.adjoint() * a).collect();
        let d = k[0].dim();
        let s = k.iter().fold(ComplexMatrix::zeros(d), |acc, m| &acc + m).hermitian_part();
        let e = s.eigh().ok()?;
        if e.min() <= 1e-13 * e.max().max(1e-300) {
            return None;
        }
        let basis = ComplexMatrix::from_fn(d, |i, j| e.vectors[j][i]);
        let inv_sqrt = ComplexMatrix::diagonal(&e.values.iter().map(|v| 1.0 / v.sqrt()).collect::<Vec<_>>());
        let t = &(&basis * &inv_sqrt) * &basis.adjoint();
        let povm = k.iter().map(|kx| (&(&t * kx) * &t).hermitian_part()).collect();
        Some(Evaluated { povm, k, t, basis, s_values: e.values })
    }

    fn objective(ev: &Evaluated, r: &[ComplexMatrix]) -> f64 {
        ev.povm.iter().zip(r).map(|(m, rx)| m.trace_product(rx).re).sum()
    }

    /// Euclidean gradient `2 A_x Z_x` of `sum_x tr(R_x M_x)` with respect to
    /// the real and imaginary parts of each `A_x`.
    fn gradient(&self, ev: &Evaluated, r: &[ComplexMatrix]) -> Vec<ComplexMatrix> {
        let d = ev.t.dim();
        let mut w = ComplexMatrix::zeros(d);
        for (kx, rx) in ev.k.iter().zip(r) {
            let ktr = &(kx * &ev.t) * rx;
            w = &(&w + &ktr) + &ktr.adjoint();
        }
        let w_eig = &(&ev.basis.adjoint() * &w) * &ev.basis;
        let s = &ev.s_values;
        let y_eig = ComplexMatrix::from_fn(d, |i, j| {
            let l = if (s[i] - s[j]).abs() <= 1e-12 * s[i].max(s[j]) {
                -0.5 * s[i].powf(-1.5)
            } else {
                (s[i].powf(-0.5) - s[j].powf(-0.5)) / (s[i] - s[j])
            };
            w_eig[(i, j)] * l
        });
        let y = &(&ev.basis * &y_eig) * &ev.basis.adjoint();
        self.a
            .iter()
            .zip(r)
            .map(|(a, rx)| {
                let z = &(&(&ev.t * rx) * &ev.t) + &y;
                (a * &z).scale(2.0)
            })
            .collect()
    }

    /// Rescales all `A_x` together so that `tr S = d`; the POVM is unchanged.
    fn normalize(&mut self) {
        let d = self.a[0].dim() as f64;
        let tr: f64 = self.a.iter().map(|a| a.frobenius_norm().powi(2)).sum();
        if tr > 0.0 {
            let c = (d / tr).sqrt();
            for a in &mut self.a {
                *a = a.scale(c);
            }
        }
    }

    /// Monotone ascent on `sum_x tr(R_x M_x)`; returns the final objective.
    fn ascend(&mut self, r: &[ComplexMatrix], steps: usize) -> f64 {
        self.normalize();
        let mut ev = self.evaluate().expect("full-rank start");
        let mut f = Self::objective(&ev, r);
        let mut eta = 0.5;
        for _ in 0..steps {
            let g = self.gradient(&ev, r);
            let gnorm: f64 = g.iter().map(|m| m.frobenius_norm().powi(2)).sum::<f64>().sqrt();
            if gnorm < 1e-14 {
                break;
            }
            let mut accepted = false;
            for _ in 0..40 {
                let trial = Parameterized {
                    a: self.a.iter().zip(&g).map(|(a, gx)| a + &gx.scale(eta)).collect(),
                };
                if let Some(tev) = trial.evaluate() {
                    let tf = Self::objective(&tev, r);
                    if tf > f {
                        self.a = trial.a;
                        ev = tev;
                        f = tf;
                        accepted = true;
                        eta *= 1.5;
                        break;
                    }
                }
                eta *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        f
    }
}

pub fn cqq_seesaw(state: &CqqState, restarts: usize, iters: usize) -> Result<SeesawResult, QuantumError> {
    cqq_seesaw_with(state, &SeesawOptions { restarts, iters, ..Default::default() })
}

pub fn cqq_seesaw_with(state: &CqqState, opts: &SeesawOptions) -> Result<SeesawResult, QuantumError> {
    let (da, db) = state.dims();
    for d in [da, db] {
        if d > MAX_LOCAL_DIM {
            return Err(QuantumError::DimensionTooLarge { d, max: MAX_LOCAL_DIM });
        }
    }
    let n = state.px().len();
    let runs: Vec<SeesawResult> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.rng_seed);
            rng.set_stream(restart as u64);
            let mut alice = Parameterized::random(n, da, &mut rng);
            let mut bob = Parameterized::random(n, db, &mut rng);
            let mut bob_povm = bob.evaluate().expect("full rank").povm;
            let mut history = Vec::with_capacity(2 * opts.iters);
            for _ in 0..opts.iters {
                let r = effective_operators(state, &bob_povm, true);
                history.push(alice.ascend(&r, opts.inner_steps));
                let alice_povm = alice.evaluate().expect("full rank").povm;
                let r = effective_operators(state, &alice_povm, false);
                history.push(bob.ascend(&r, opts.inner_steps));
                bob_povm = bob.evaluate().expect("full rank").povm;
            }
            let alice = Povm { elements: alice.evaluate().expect("full rank").povm };
            let bob = Povm { elements: bob_povm };
            let value = seesaw_value(state, &alice, &bob);
            SeesawResult { value, alice, bob, history }
        })
        .collect();
    Ok(runs
        .into_iter()
        .reduce(|best, run| if run.value > best.value { run } else { best })
        .expect("at least one restart"))
}

/// Two referee values with `|φ^x> = (|x, ⊥> + |⊥, x>)/sqrt 2` on `C^3 ⊗ C^3`,
/// where `⊥` is basis index 2.
pub fn example2_state() -> CqqState {
    let states = (0..2)
        .map(|x| {
            let mut v = vec![Complex::new(0.0, 0.0); 9];
            let h = std::f64::consts::FRAC_1_SQRT_2;
            v[x * 3 + 2] = Complex::new(h, 0.0);
            v[2 * 3 + x] = Complex::new(h, 0.0);
            ComplexMatrix::outer(&v)
        })
        .collect();
    CqqState::new(vec![ratio(1, 2), ratio(1, 2)], states, (3, 3)).expect("valid state")
}

/// Encodes a two-party classical game as diagonal states:
/// `rho^x = sum_{a,b} P(a, b | x) |a><a| ⊗ |b><b|`.
pub fn classical_embedding(dist: &JointDistribution) -> Result<CqqState, QuantumError> {
    if dist.num_parties() != 2 {
        return Err(QuantumError::ShapeMismatch("classical embedding needs two parties".into()));
    }
    let (na, nb) = (dist.party_sizes()[0], dist.party_sizes()[1]);
    let px = dist.referee_marginal();
    let states = px
        .iter()
        .enumerate()
        .map(|(x, p)| {
            let mut diag = vec![0.0; na * nb];
            if *p == Rational::from_integer(0.into()) {
                diag[0] = 1.0;
            } else {
                for a in 0..na {
                    for b in 0..nb {
                        diag[a * nb + b] = to_f64(&(dist.get(x, &[a, b]) / p));
                    }
                }
            }
            ComplexMatrix::diagonal(&diag)
        })
        .collect();
    CqqState::new(px, states, (na, nb))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::theorem1_game;

    #[test]
    fn qutrit_state_properties() {
        let s = example2_state();
        let [r0, r1] = [&s.states()[0], &s.states()[1]];
        assert!((r0.trace().re - 1.0).abs() < 1e-12);
        assert!(r0.trace_product(r1).norm() < 1e-15);
        let e = r0.eigh().unwrap();
        assert_eq!(e.values.iter().filter(|v| v.abs() > 1e-12).count(), 1);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let p = Parameterized::random(3, 2, &mut rng);
        let r: Vec<ComplexMatrix> = (0..3)
            .map(|_| {
                let b = ComplexMatrix::from_fn(2, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
                &b.adjoint() * &b
            })
            .collect();
        let ev = p.evaluate().unwrap();
        let g = p.gradient(&ev, &r);
        let h = 1e-6;
        for x in 0..3 {
            for i in 0..2 {
                for j in 0..2 {
                    for (unit, part) in [(Complex::new(1.0, 0.0), 0), (Complex::new(0.0, 1.0), 1)] {
                        let shifted = |sign: f64| {
                            let mut q = Parameterized { a: p.a.clone() };
                            q.a[x][(i, j)] += unit * (sign * h);
                            Parameterized::objective(&q.evaluate().unwrap(), &r)
                        };
                        let fd = (shifted(1.0) - shifted(-1.0)) / (2.0 * h);
                        let an = if part == 0 { g[x][(i, j)].re } else { g[x][(i, j)].im };
                        assert!((fd - an).abs() < 1e-6, "x={x} ({i},{j}) part {part}: {fd} vs {an}");
                    }
                }
            }
        }
    }

    #[test]
    fn iterates_are_povms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let p = Parameterized::random(4, 3, &mut rng);
        Povm::new(p.evaluate().unwrap().povm).unwrap();
    }

    #[test]
    fn orthogonal_product_states() {
        let mut r0 = vec![0.0; 4];
        r0[0] = 1.0;
        let mut r1 = vec![0.0; 4];
        r1[3] = 1.0;
        let s = CqqState::new(
            vec![ratio(1, 2), ratio(1, 2)],
            vec![ComplexMatrix::diagonal(&r0), ComplexMatrix::diagonal(&r1)],
            (2, 2),
        )
        .unwrap();
        let res = cqq_seesaw(&s, 2, 40).unwrap();
        assert!((res.value - 1.0).abs() < 1e-8, "{}", res.value);
    }

    #[test]
    fn monotone_history() {
        let res = cqq_seesaw(&example2_state(), 1, 10).unwrap();
        for w in res.history.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
    }

    #[test]
    fn classical_game_embedding() {
        let s = classical_embedding(&theorem1_game()).unwrap();
        let res = cqq_seesaw(&s, 8, 60).unwrap();
        assert!((res.value - 0.4).abs() < 1e-6, "{}", res.value);
    }

    #[test]
    fn dimension_limit() {
        let d = 9;
        let mut diag = vec![0.0; d];
        diag[0] = 1.0;
        let s = CqqState::new(vec![ratio(1, 1)], vec![ComplexMatrix::diagonal(&diag)], (9, 1)).unwrap();
        assert!(matches!(cqq_seesaw(&s, 1, 1), Err(QuantumError::DimensionTooLarge { d: 9, .. })));
    }
}
