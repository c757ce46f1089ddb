//! Solvers for local simultaneous state discrimination games.
//!
//! A referee draws `x` together with inputs `a_1, ..., a_r` from a known
//! distribution; each party sees only its own input and must output `x`. The
//! crate computes the classical value exactly, the no-signaling value by exact
//! rational linear programming, lower bounds on the entangled value by
//! optimizing qubit strategies, and verifies an exact sum-of-squares
//! certificate for the matching upper bound on the three-outcome example game.

pub mod certificate;
pub mod classical;
pub mod game;
pub mod hypergraph;
pub mod linalg;
pub mod lp;
pub mod nosignaling;
pub mod quantum;
pub mod rational;

pub use classical::{pc_binary_closed_form, pc_bruteforce, strategy_value};
pub use game::{
    noisy_bit_game, point_mass, product_game, theorem1_game, DeterministicStrategy, GameError,
    JointDistribution,
};
pub use linalg::{Complex, ComplexMatrix};
pub use lp::{ExactLp, LpError, Relation};
pub use nosignaling::{pns_exact, NoSignalingBox};
pub use rational::Rational;
