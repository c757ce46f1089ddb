//! Floating-point cross-checks of the certificate.

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use super::f_polynomial;
use crate::game::theorem1_game;
use crate::linalg::{principal_eigenvalue, ComplexMatrix};
use crate::quantum::{QubitStrategy, TABLE2_PATTERN};

/// Ω for `A0 = B0 = diag(1, 0)`, `A1 = Π(α/2)`, `B1 = Π((π - β)/2)` with
/// `a = cos α`, `b = cos β`.
pub fn omega_ab(a: f64, b: f64) -> ComplexMatrix {
    let alpha = a.clamp(-1.0, 1.0).acos();
    let beta = b.clamp(-1.0, 1.0).acos();
    let s = QubitStrategy::new(
        [0.0, alpha / 2.0, 0.0, (std::f64::consts::PI - beta) / 2.0],
        TABLE2_PATTERN,
    );
    s.omega(&theorem1_game()).expect("binary game")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridReport {
    pub points: usize,
    pub max_eigenvalue: f64,
    pub argmax: (f64, f64),
}

/// Largest eigenvalue of `omega_ab` over an `n x n` grid of `[-1, 1]²`.
pub fn grid_check(n: usize) -> GridReport {
    let coord = |i: usize| if n == 1 { 0.0 } else { -1.0 + 2.0 * i as f64 / (n - 1) as f64 };
    let (max_eigenvalue, argmax) = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (a, b) = (coord(k / n), coord(k % n));
            (principal_eigenvalue(&omega_ab(a, b)).expect("Hermitian").0, (a, b))
        })
        .reduce(|| (f64::NEG_INFINITY, (0.0, 0.0)), |x, y| if y.0 > x.0 { y } else { x });
    GridReport { points: n * n, max_eigenvalue, argmax }
}

/// Coefficients `c_0..c_n` of `det(tI - A) = sum_k c_k t^k` (Faddeev–LeVerrier).
pub fn charpoly_coefficients(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.dim();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut mk = ComplexMatrix::zeros(n);
    for k in 1..=n {
        mk = &(m * &mk) + &ComplexMatrix::identity(n).scale(c[n - k + 1]);
        c[n - k] = -(m * &mk).trace().re / k as f64;
    }
    c
}

/// Largest coefficient deviation between `det(tI - Ω(a, b))` and `f(t, a, b)`
/// over random `(a, b)`.
pub fn charpoly_check(samples: usize, seed: u64) -> f64 {
    let f = f_polynomial();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let (a, b) = (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let c = charpoly_coefficients(&omega_ab(a, b));
        for (k, ck) in c.iter().enumerate() {
            worst = worst.max((ck - f.t_coefficient_f64(k as u32, a, b)).abs());
        }
    }
    worst
}
