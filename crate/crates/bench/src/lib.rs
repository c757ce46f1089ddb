//! Shared fixtures for the criterion benchmarks.

use lssd_core::hypergraph::RPartiteHypergraph;
use lssd_core::rational::noisy_bit_threshold;
use lssd_core::{noisy_bit_game, product_game, JointDistribution};

/// Two copies of the noisy-bit game at the threshold noise level.
pub fn noisy_square() -> JointDistribution {
    let g = noisy_bit_game(&noisy_bit_threshold(1_000_000)).expect("valid noise level");
    product_game(&g, &g).expect("same party count")
}

/// Eight edges on parts of size three, with no perfect matching.
pub fn sample_hypergraph() -> RPartiteHypergraph {
    let edges = [[0, 0, 0], [0, 1, 1], [1, 0, 1], [1, 1, 2], [2, 2, 0], [2, 0, 2], [0, 2, 2], [1, 2, 1]];
    RPartiteHypergraph::new(vec![3, 3, 3], edges.iter().map(|e| e.to_vec()).collect()).expect("edges fit the parts")
}
