#![allow(dead_code)]

use lssd_core::hypergraph::RPartiteHypergraph;
use lssd_core::quantum::Povm;
use lssd_core::rational::ratio;
use lssd_core::{Complex, ComplexMatrix, JointDistribution};
use rand::Rng;

/// Game with integer weights in `0..=max_weight` on every cell, normalized;
/// at least one cell carries mass.
pub fn random_game(rng: &mut impl Rng, x: usize, sizes: &[usize], max_weight: i64) -> JointDistribution {
    let cells = x * sizes.iter().product::<usize>();
    let mut w: Vec<i64> = (0..cells).map(|_| rng.gen_range(0..=max_weight)).collect();
    if w.iter().all(|&v| v == 0) {
        let k = rng.gen_range(0..cells);
        w[k] = 1;
    }
    let total: i64 = w.iter().sum();
    JointDistribution::new(x, sizes.to_vec(), w.iter().map(|&v| ratio(v, total)).collect()).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, |_, _| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
}

/// `M_i = S^{-1/2} G_i† G_i S^{-1/2}` with `S = sum_i G_i† G_i`.
pub fn random_povm(rng: &mut impl Rng, d: usize, n: usize) -> Povm {
    let grams: Vec<ComplexMatrix> = (0..n)
        .map(|_| {
            let g = random_matrix(rng, d);
            &g.adjoint() * &g
        })
        .collect();
    let s = grams.iter().fold(ComplexMatrix::zeros(d), |acc, g| &acc + g);
    let w = s.inv_sqrt_pd().unwrap();
    let elements = grams.iter().map(|g| (&(&w * g) * &w).hermitian_part()).collect();
    Povm::new(elements).unwrap()
}

/// Eigenvectors of a random Hermitian matrix, as columns of a unitary.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> ComplexMatrix {
    let h = random_matrix(rng, d).hermitian_part();
    let e = h.eigh().unwrap();
    ComplexMatrix::from_fn(d, |i, j| e.vectors[j][i])
}

pub fn random_hypergraph(rng: &mut impl Rng, rank: usize, max_part: usize, max_edges: usize) -> RPartiteHypergraph {
    let parts: Vec<usize> = (0..rank).map(|_| rng.gen_range(1..=max_part)).collect();
    let m = rng.gen_range(1..=max_edges);
    let edges = (0..m).map(|_| parts.iter().map(|&p| rng.gen_range(0..p)).collect()).collect();
    RPartiteHypergraph::new(parts, edges).unwrap()
}

/// Matching number by scanning all `2^|E|` edge subsets.
pub fn matching_number_by_subsets(g: &RPartiteHypergraph) -> usize {
    let e = g.edges();
    let mut best = 0;
    for mask in 0u32..(1 << e.len()) {
        let chosen: Vec<&Vec<usize>> = (0..e.len()).filter(|i| mask & (1 << i) != 0).map(|i| &e[i]).collect();
        let disjoint = chosen.iter().enumerate().all(|(i, a)| {
            chosen[i + 1..].iter().all(|b| a.iter().zip(b.iter()).all(|(u, v)| u != v))
        });
        if disjoint {
            best = best.max(chosen.len());
        }
    }
    best
}
