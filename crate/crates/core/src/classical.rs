//! Classical value `p_c`: exhaustive search over deterministic strategies and
//! the closed form for two parties with binary inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::game::{DeterministicStrategy, GameError, JointDistribution};
use crate::rational::{int, ratio, Frac, Rational};

pub const DEFAULT_STRATEGY_BUDGET: u128 = 100_000_000;

#[derive(Debug, thiserror::Error)]
pub enum ClassicalError {
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("strategy space has {required} tuples, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("closed form needs two parties with binary inputs and |X| >= 2")]
    NotBinaryInput,
}

/// `sum P(x, a) [f_1(a_1) = ... = f_r(a_r) = x]`.
pub fn strategy_value(
    dist: &JointDistribution,
    strat: &DeterministicStrategy,
) -> Result<Rational, ClassicalError> {
    strat.check_shape(dist)?;
    Ok(dist
        .support()
        .filter(|(x, inputs, _)| {
            inputs.iter().zip(&strat.tables).all(|(&a, table)| table[a] == *x)
        })
        .map(|(_, _, p)| p)
        .sum())
}

/// Candidate outputs per party and input. Inputs that never occur are pinned
/// to output 0; elsewhere outputs that cannot be correct are dropped.
pub(crate) fn candidate_outputs(dist: &JointDistribution) -> Vec<Vec<Vec<usize>>> {
    (0..dist.num_parties())
        .map(|i| {
            dist.output_support(i)
                .into_iter()
                .map(|s| if s.is_empty() { vec![0] } else { s })
                .collect()
        })
        .collect()
}

/// Size of the pruned strategy space (saturating).
pub fn strategy_space_size(dist: &JointDistribution) -> u128 {
    candidate_outputs(dist)
        .iter()
        .flatten()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
}

pub fn pc_bruteforce(
    dist: &JointDistribution,
) -> Result<(Rational, DeterministicStrategy), ClassicalError> {
    pc_bruteforce_with_budget(dist, DEFAULT_STRATEGY_BUDGET)
}

/// Exact maximum over deterministic strategy tuples.
///
/// Strategies of all parties but the last are enumerated lexicographically;
/// the last party plays a best response input by input, which is exact
/// because its contribution separates over its inputs. Ties go to the
/// lexicographically first tuple.
pub fn pc_bruteforce_with_budget(
    dist: &JointDistribution,
    budget: u128,
) -> Result<(Rational, DeterministicStrategy), ClassicalError> {
    let required = strategy_space_size(dist);
    if required > budget {
        return Err(ClassicalError::BudgetExceeded { required, budget });
    }
    let candidates = candidate_outputs(dist);

    // Scale to integers over the common denominator.
    let lcm = dist.support().fold(BigInt::one(), |acc, (_, _, p)| acc.lcm(p.denom()));
    let scaled: Vec<(usize, Vec<usize>, BigInt)> = dist
        .support()
        .map(|(x, inputs, p)| (x, inputs, p.numer() * (&lcm / p.denom())))
        .collect();

    let (best, strat) = if lcm.to_u128().is_some_and(|l| l < (1u128 << 120)) {
        let entries: Vec<_> = scaled
            .into_iter()
            .map(|(x, a, w)| (x, a, w.to_u128().expect("bounded by lcm")))
            .collect();
        let (w, s) = search(dist, &candidates, &entries);
        (BigInt::from(w), s)
    } else {
        search(dist, &candidates, &scaled)
    };
    Ok((Rational::new(best, lcm), strat))
}

trait Weight: Clone + Ord + Zero + for<'a> std::ops::AddAssign<&'a Self> + Send + Sync {}
impl Weight for u128 {}
impl Weight for BigInt {}

struct Shape<'a> {
    /// `(party, input)` digits of the enumerated prefix, most significant first.
    digits: Vec<(usize, usize)>,
    candidates: &'a [Vec<Vec<usize>>],
}

impl Shape<'_> {
    fn decode(&self, mut index: u128, tables: &mut [Vec<usize>]) {
        for &(party, input) in self.digits.iter().rev() {
            let c = &self.candidates[party][input];
            let radix = c.len() as u128;
            tables[party][input] = c[(index % radix) as usize];
            index /= radix;
        }
    }

    /// Best response of the last party; returns the value and fills its table.
    fn best_response<W: Weight>(
        &self,
        entries: &[(usize, Vec<usize>, W)],
        tables: &mut [Vec<usize>],
        scratch: &mut [Vec<W>],
    ) -> W {
        let last = tables.len() - 1;
        for row in scratch.iter_mut() {
            row.iter_mut().for_each(|w| *w = W::zero());
        }
        for (x, inputs, w) in entries {
            if (0..last).all(|i| tables[i][inputs[i]] == *x) {
                scratch[inputs[last]][*x] += w;
            }
        }
        let mut total = W::zero();
        for (a, row) in scratch.iter().enumerate() {
            let mut pick = self.candidates[last][a][0];
            for &x in &self.candidates[last][a] {
                if row[x] > row[pick] {
                    pick = x;
                }
            }
            tables[last][a] = pick;
            total += &row[pick];
        }
        total
    }
}

fn search<W: Weight>(
    dist: &JointDistribution,
    candidates: &[Vec<Vec<usize>>],
    entries: &[(usize, Vec<usize>, W)],
) -> (W, DeterministicStrategy) {
    let r = dist.num_parties();
    let sizes = dist.party_sizes();
    let digits: Vec<(usize, usize)> =
        (0..r - 1).flat_map(|i| (0..sizes[i]).map(move |a| (i, a))).collect();
    let prefix_count: u128 = digits
        .iter()
        .map(|&(i, a)| candidates[i][a].len() as u128)
        .product();
    let shape = Shape { digits, candidates };

    let fresh_tables = || -> Vec<Vec<usize>> { sizes.iter().map(|&n| vec![0; n]).collect() };
    let fresh_scratch =
        || -> Vec<Vec<W>> { vec![vec![W::zero(); dist.referee_size()]; sizes[r - 1]] };

    let chunk: u128 = 1 << 14;
    let chunks = prefix_count.div_ceil(chunk);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let end = (start + chunk).min(prefix_count);
            let mut tables = fresh_tables();
            let mut scratch = fresh_scratch();
            let mut best: Option<(W, u128, Vec<Vec<usize>>)> = None;
            for index in start..end {
                shape.decode(index, &mut tables);
                let v = shape.best_response(entries, &mut tables, &mut scratch);
                if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                    best = Some((v, index, tables.clone()));
                }
            }
            best.expect("non-empty chunk")
        })
        .reduce_with(|a, b| match b.0.cmp(&a.0) {
            std::cmp::Ordering::Greater => b,
            std::cmp::Ordering::Less => a,
            std::cmp::Ordering::Equal => {
                if b.1 < a.1 {
                    b
                } else {
                    a
                }
            }
        })
        .expect("at least one prefix");
    (best.0, DeterministicStrategy::new(best.2))
}

/// Closed form for two parties with binary inputs: the best of a constant
/// guess `P_X(s)` and the two ways of matching distinct guesses `s != t`.
pub fn pc_binary_closed_form(dist: &JointDistribution) -> Result<Rational, ClassicalError> {
    if !dist.is_binary_two_party() || dist.referee_size() < 2 {
        return Err(ClassicalError::NotBinaryInput);
    }
    let px = dist.referee_marginal();
    let p = |x: usize, a: usize, b: usize| dist.get(x, &[a, b]).clone();
    let d = dist.referee_size();
    let mut best = Rational::zero();
    for s in 0..d {
        for t in (0..d).filter(|&t| t != s) {
            let candidates = [px[s].clone(), p(s, 0, 0) + p(t, 1, 1), p(s, 0, 1) + p(t, 1, 0)];
            for c in candidates {
                if c > best {
                    best = c;
                }
            }
        }
    }
    Ok(best)
}

/// Classical value of the noisy-bit game: `(1 - alpha)^2` while
/// `2 (1 - alpha)^2 >= 1`, otherwise `1/2`.
pub fn example1_pc(alpha: &Rational) -> Result<Rational, ClassicalError> {
    if *alpha < Rational::zero() || *alpha > ratio(1, 2) {
        return Err(GameError::AlphaOutOfRange(Frac(alpha).to_string()).into());
    }
    let keep = int(1) - alpha;
    let both = &keep * &keep;
    if int(2) * &both >= int(1) {
        Ok(both)
    } else {
        Ok(ratio(1, 2))
    }
}
