//! Game instances: joint distributions `P(x, a_1, ..., a_r)` over finite
//! alphabets, deterministic strategies, and the standard constructors.

mod format;

pub use format::{load_game, parse_game, save_game, write_game};

use num_traits::{Signed, Zero};

use crate::rational::{ratio, Frac, Rational};

#[derive(Debug, thiserror::Error)]
pub enum GameError {
    #[error("negative probability {value} at index {index:?}")]
    NegativeEntry { index: Vec<usize>, value: String },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: String },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("noise parameter {0} outside [0, 1/2]")]
    AlphaOutOfRange(String),
    #[error("party count mismatch: {left} vs {right}")]
    PartyCountMismatch { left: usize, right: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Dense table of exact probabilities indexed by `(x, a_1, ..., a_r)`, with
/// the referee value `x` as the slowest-varying index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    referee_size: usize,
    party_sizes: Vec<usize>,
    table: Vec<Rational>,
}

fn check_table(
    referee_size: usize,
    party_sizes: &[usize],
    table: &[Rational],
) -> Result<(), GameError> {
    if party_sizes.is_empty() {
        return Err(GameError::ShapeMismatch("at least one party required".into()));
    }
    if referee_size == 0 || party_sizes.iter().any(|&s| s == 0) {
        return Err(GameError::ShapeMismatch("alphabets must be non-empty".into()));
    }
    let expected = referee_size * party_sizes.iter().product::<usize>();
    if table.len() != expected {
        return Err(GameError::ShapeMismatch(format!(
            "table has {} entries, alphabets require {expected}",
            table.len()
        )));
    }
    let mut sum = Rational::zero();
    for (flat, p) in table.iter().enumerate() {
        if p.is_negative() {
            return Err(GameError::NegativeEntry {
                index: unflatten(flat, referee_size, party_sizes),
                value: Frac(p).to_string(),
            });
        }
        sum += p;
    }
    if sum != crate::rational::int(1) {
        return Err(GameError::NotNormalized { sum: Frac(&sum).to_string() });
    }
    Ok(())
}

fn unflatten(mut flat: usize, referee_size: usize, party_sizes: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; party_sizes.len() + 1];
    for (slot, &size) in party_sizes.iter().enumerate().rev() {
        idx[slot + 1] = flat % size;
        flat /= size;
    }
    idx[0] = flat % referee_size;
    idx
}

impl JointDistribution {
    pub fn new(
        referee_size: usize,
        party_sizes: Vec<usize>,
        table: Vec<Rational>,
    ) -> Result<Self, GameError> {
        check_table(referee_size, &party_sizes, &table)?;
        Ok(Self { referee_size, party_sizes, table })
    }

    /// Builds a distribution from sparse `(x, inputs, probability)` entries;
    /// repeated indices accumulate.
    pub fn from_entries<I>(
        referee_size: usize,
        party_sizes: Vec<usize>,
        entries: I,
    ) -> Result<Self, GameError>
    where
        I: IntoIterator<Item = (usize, Vec<usize>, Rational)>,
    {
        let len = referee_size * party_sizes.iter().product::<usize>();
        let mut table = vec![Rational::zero(); len];
        for (x, inputs, p) in entries {
            let flat = flat_index(referee_size, &party_sizes, x, &inputs)?;
            table[flat] += p;
        }
        Self::new(referee_size, party_sizes, table)
    }

    /// Re-checks every invariant.
    pub fn validate(&self) -> Result<(), GameError> {
        check_table(self.referee_size, &self.party_sizes, &self.table)
    }

    pub fn num_parties(&self) -> usize {
        self.party_sizes.len()
    }

    pub fn referee_size(&self) -> usize {
        self.referee_size
    }

    pub fn party_sizes(&self) -> &[usize] {
        &self.party_sizes
    }

    pub fn table(&self) -> &[Rational] {
        &self.table
    }

    pub fn get(&self, x: usize, inputs: &[usize]) -> &Rational {
        let flat = flat_index(self.referee_size, &self.party_sizes, x, inputs)
            .expect("index out of range");
        &self.table[flat]
    }

    /// Iterates over `(x, inputs, p)` with `p > 0`, in table order.
    pub fn support(&self) -> impl Iterator<Item = (usize, Vec<usize>, &Rational)> + '_ {
        self.table.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(flat, p)| {
            let idx = unflatten(flat, self.referee_size, &self.party_sizes);
            (idx[0], idx[1..].to_vec(), p)
        })
    }

    pub fn is_binary_two_party(&self) -> bool {
        self.party_sizes == [2, 2]
    }

    /// `P_X(x)`.
    pub fn referee_marginal(&self) -> Vec<Rational> {
        let block = self.table.len() / self.referee_size;
        self.table.chunks(block).map(|c| c.iter().sum()).collect()
    }

    /// `P_{X A_i}(x, a)` as `[x][a]`.
    pub fn referee_party_marginal(&self, party: usize) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.party_sizes[party]]; self.referee_size];
        for (x, inputs, p) in self.support() {
            out[x][inputs[party]] += p;
        }
        out
    }

    /// `P_{A_i}(a)`.
    pub fn party_marginal(&self, party: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.party_sizes[party]];
        for (_, inputs, p) in self.support() {
            out[inputs[party]] += p;
        }
        out
    }

    /// For each input `a` of `party`, the referee values `x` with
    /// `P_{X A_i}(x, a) > 0`, in increasing order. Empty for inputs that
    /// never occur.
    pub fn output_support(&self, party: usize) -> Vec<Vec<usize>> {
        let marginal = self.referee_party_marginal(party);
        (0..self.party_sizes[party])
            .map(|a| (0..self.referee_size).filter(|&x| !marginal[x][a].is_zero()).collect())
            .collect()
    }
}

fn flat_index(
    referee_size: usize,
    party_sizes: &[usize],
    x: usize,
    inputs: &[usize],
) -> Result<usize, GameError> {
    if inputs.len() != party_sizes.len() {
        return Err(GameError::ShapeMismatch(format!(
            "expected {} inputs, got {}",
            party_sizes.len(),
            inputs.len()
        )));
    }
    if x >= referee_size {
        return Err(GameError::ShapeMismatch(format!("x = {x} out of range {referee_size}")));
    }
    let mut flat = x;
    for (i, (&a, &size)) in inputs.iter().zip(party_sizes).enumerate() {
        if a >= size {
            return Err(GameError::ShapeMismatch(format!(
                "input {a} of party {i} out of range {size}"
            )));
        }
        flat = flat * size + a;
    }
    Ok(flat)
}

/// Per-party lookup tables `f_i: A_i -> X`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct DeterministicStrategy {
    pub tables: Vec<Vec<usize>>,
}

impl DeterministicStrategy {
    pub fn new(tables: Vec<Vec<usize>>) -> Self {
        Self { tables }
    }

    /// Every party ignores its input and answers `x`.
    pub fn constant(dist: &JointDistribution, x: usize) -> Self {
        Self { tables: dist.party_sizes().iter().map(|&n| vec![x; n]).collect() }
    }

    pub fn check_shape(&self, dist: &JointDistribution) -> Result<(), GameError> {
        if self.tables.len() != dist.num_parties() {
            return Err(GameError::ShapeMismatch(format!(
                "strategy has {} parties, game has {}",
                self.tables.len(),
                dist.num_parties()
            )));
        }
        for (i, (table, &size)) in self.tables.iter().zip(dist.party_sizes()).enumerate() {
            if table.len() != size {
                return Err(GameError::ShapeMismatch(format!(
                    "party {i} table has length {}, alphabet has {size}",
                    table.len()
                )));
            }
            if let Some(&bad) = table.iter().find(|&&x| x >= dist.referee_size()) {
                return Err(GameError::ShapeMismatch(format!(
                    "party {i} outputs {bad}, outside referee alphabet"
                )));
            }
        }
        Ok(())
    }
}

/// `(X, X xor Y, X xor Z)` with `X` a uniform bit and `Y, Z` independent
/// `alpha`-biased coins.
pub fn noisy_bit_game(alpha: &Rational) -> Result<JointDistribution, GameError> {
    if alpha.is_negative() || *alpha > ratio(1, 2) {
        return Err(GameError::AlphaOutOfRange(Frac(alpha).to_string()));
    }
    let flip = |bit: usize| if bit == 1 { alpha.clone() } else { crate::rational::int(1) - alpha };
    let half = ratio(1, 2);
    let mut entries = Vec::with_capacity(8);
    for x in 0..2 {
        for a in 0..2 {
            for b in 0..2 {
                let p = &half * flip(x ^ a) * flip(x ^ b);
                entries.push((x, vec![a, b], p));
            }
        }
    }
    JointDistribution::from_entries(2, vec![2, 2], entries)
}

/// Independent product: referee values and every party's inputs are paired,
/// with the first game's component as the high digit.
pub fn product_game(
    p: &JointDistribution,
    q: &JointDistribution,
) -> Result<JointDistribution, GameError> {
    if p.num_parties() != q.num_parties() {
        return Err(GameError::PartyCountMismatch {
            left: p.num_parties(),
            right: q.num_parties(),
        });
    }
    let sizes: Vec<usize> =
        p.party_sizes().iter().zip(q.party_sizes()).map(|(a, b)| a * b).collect();
    let q_support: Vec<_> = q.support().collect();
    let mut entries = Vec::new();
    for (x, a, pv) in p.support() {
        for (x2, a2, qv) in &q_support {
            let inputs = a
                .iter()
                .zip(a2)
                .zip(q.party_sizes())
                .map(|((hi, lo), n)| hi * n + lo)
                .collect();
            entries.push((x * q.referee_size() + x2, inputs, pv * *qv));
        }
    }
    JointDistribution::from_entries(p.referee_size() * q.referee_size(), sizes, entries)
}

/// Three referee values, binary inputs, uniform mass on five triples.
pub fn theorem1_game() -> JointDistribution {
    let fifth = ratio(1, 5);
    let triples = [(0, 1, 0), (0, 1, 1), (1, 0, 0), (1, 1, 0), (2, 0, 1)];
    JointDistribution::from_entries(
        3,
        vec![2, 2],
        triples.iter().map(|&(x, a, b)| (x, vec![a, b], fifth.clone())),
    )
    .expect("static game is valid")
}

/// All mass on `(0, 0, ..., 0)`.
pub fn point_mass(referee_size: usize, party_sizes: Vec<usize>) -> JointDistribution {
    let r = party_sizes.len();
    JointDistribution::from_entries(
        referee_size,
        party_sizes,
        [(0, vec![0; r], crate::rational::int(1))],
    )
    .expect("point mass is valid")
}
