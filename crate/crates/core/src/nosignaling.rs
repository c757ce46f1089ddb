//! No-signaling value `p_ns`: linear programs over the no-signaling polytope,
//! the extremal `Q^k` boxes, and the binary-input formula built from them.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::classical::pc_binary_closed_form;
use crate::game::JointDistribution;
use crate::lp::{ExactLp, LpError, Relation};
use crate::rational::{parse_rational, ratio, Frac, Rational};

#[derive(Debug, thiserror::Error)]
pub enum NsError {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("no-signaling boxes need at least two parties")]
    TooFewParties,
    #[error("k = {k} outside 2..={d}")]
    KOutOfRange { k: usize, d: usize },
    #[error("binary-input formula needs two parties with binary inputs")]
    NotBinaryInput,
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn radix_index(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (d, r)| acc * r + d)
}

fn radix_digits(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, &r) in radices.iter().enumerate().rev() {
        out[slot] = index % r;
        index /= r;
    }
    out
}

/// All tuples of a mixed-radix space, in lexicographic order.
fn tuples(radices: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radices.iter().product();
    (0..total).map(move |i| radix_digits(i, radices))
}

/// Conditional distribution `Q(x_1, ..., x_r | a_1, ..., a_r)`; every port
/// has the same output alphabet `[d]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoSignalingBox {
    outputs: usize,
    input_sizes: Vec<usize>,
    /// Indexed by `input_index * outputs^r + output_index`.
    table: Vec<Rational>,
}

impl NoSignalingBox {
    pub fn new(
        outputs: usize,
        input_sizes: Vec<usize>,
        table: Vec<Rational>,
    ) -> Result<Self, NsError> {
        let b = Self { outputs, input_sizes, table };
        b.validate()?;
        Ok(b)
    }

    fn output_count(&self) -> usize {
        self.outputs.pow(self.input_sizes.len() as u32)
    }

    pub fn num_parties(&self) -> usize {
        self.input_sizes.len()
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn input_sizes(&self) -> &[usize] {
        &self.input_sizes
    }

    pub fn get(&self, outputs: &[usize], inputs: &[usize]) -> &Rational {
        let r = self.num_parties();
        let out = radix_index(outputs, &vec![self.outputs; r]);
        let inp = radix_index(inputs, &self.input_sizes);
        &self.table[inp * self.output_count() + out]
    }

    /// Checks nonnegativity, normalization for every input tuple, and that
    /// the output marginal of every proper subset of parties depends only on
    /// that subset's inputs.
    pub fn validate(&self) -> Result<(), NsError> {
        let r = self.num_parties();
        if r < 2 {
            return Err(NsError::TooFewParties);
        }
        let outs = self.output_count();
        let ins: usize = self.input_sizes.iter().product();
        if self.outputs == 0 || self.table.len() != outs * ins {
            return Err(NsError::InvalidBox(format!(
                "table has {} entries, expected {}",
                self.table.len(),
                outs * ins
            )));
        }
        if let Some(i) = self.table.iter().position(|p| p.is_negative()) {
            return Err(NsError::InvalidBox(format!("negative entry at flat index {i}")));
        }
        for (inp, block) in self.table.chunks(outs).enumerate() {
            if block.iter().sum::<Rational>() != Rational::one() {
                let inputs = radix_digits(inp, &self.input_sizes);
                return Err(NsError::InvalidBox(format!("inputs {inputs:?} not normalized")));
            }
        }
        let out_radices = vec![self.outputs; r];
        for mask in 1..(1usize << r) - 1 {
            let subset: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            // inputs in the subset -> marginal seen first for those inputs
            let mut seen: std::collections::HashMap<Vec<usize>, Vec<Rational>> =
                std::collections::HashMap::new();
            let sub_count = self.outputs.pow(subset.len() as u32);
            let sub_radices = vec![self.outputs; subset.len()];
            for inputs in tuples(&self.input_sizes) {
                let inp = radix_index(&inputs, &self.input_sizes);
                let mut marginal = vec![Rational::zero(); sub_count];
                for (o, p) in self.table[inp * outs..(inp + 1) * outs].iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let digits = radix_digits(o, &out_radices);
                    let key: Vec<usize> = subset.iter().map(|&i| digits[i]).collect();
                    marginal[radix_index(&key, &sub_radices)] += p;
                }
                let key: Vec<usize> = subset.iter().map(|&i| inputs[i]).collect();
                match seen.get(&key) {
                    Some(first) if *first != marginal => {
                        return Err(NsError::InvalidBox(format!(
                            "parties {subset:?} signal: marginal changes at inputs {inputs:?}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(key, marginal);
                    }
                }
            }
        }
        Ok(())
    }

    /// `sum P(x, a) Q(x, ..., x | a)`.
    pub fn winning_probability(&self, dist: &JointDistribution) -> Rational {
        let r = self.num_parties();
        dist.support()
            .map(|(x, inputs, p)| p * self.get(&vec![x; r], &inputs))
            .sum()
    }

    /// `lssd-box v1` text: header, party count, output size, input sizes,
    /// then `<x_1..x_r> <a_1..a_r> <num>/<den>` for nonzero entries.
    pub fn write(&self) -> String {
        let r = self.num_parties();
        let mut out = String::from("lssd-box v1\n");
        writeln!(out, "parties {r}").unwrap();
        writeln!(out, "outputs {}", self.outputs).unwrap();
        write!(out, "inputs").unwrap();
        for n in &self.input_sizes {
            write!(out, " {n}").unwrap();
        }
        out.push('\n');
        let outs = self.output_count();
        let out_radices = vec![self.outputs; r];
        for (flat, p) in self.table.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let xs = radix_digits(flat % outs, &out_radices);
            let inputs = radix_digits(flat / outs, &self.input_sizes);
            for v in xs.iter().chain(&inputs) {
                write!(out, "{v} ").unwrap();
            }
            writeln!(out, "{}", Frac(p)).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, NsError> {
        let err = |line: usize, m: &str| NsError::Parse { line, message: m.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "lssd-box v1")) => {}
            Some((n, _)) => return Err(err(n, "expected `lssd-box v1`")),
            None => return Err(err(1, "empty file")),
        }
        let mut header = |want: &str| -> Result<(usize, Vec<usize>), NsError> {
            let (n, l) = lines.next().ok_or_else(|| err(0, "unexpected end of file"))?;
            let toks: Vec<&str> = l.split_whitespace().collect();
            if toks.first() != Some(&want) {
                return Err(err(n, &format!("expected `{want}`")));
            }
            let vals = toks[1..]
                .iter()
                .map(|t| t.parse().map_err(|_| err(n, "invalid integer")))
                .collect::<Result<Vec<usize>, _>>()?;
            Ok((n, vals))
        };
        let (n, r) = header("parties")?;
        let r = *r.first().filter(|_| r.len() == 1).ok_or_else(|| err(n, "bad party count"))?;
        let (n, d) = header("outputs")?;
        let d = *d.first().filter(|_| d.len() == 1).ok_or_else(|| err(n, "bad output count"))?;
        let (n, input_sizes) = header("inputs")?;
        if input_sizes.len() != r || r < 2 || d == 0 || input_sizes.contains(&0) {
            return Err(err(n, "bad input sizes"));
        }
        let outs = d.pow(r as u32);
        let ins: usize = input_sizes.iter().product();
        let mut table = vec![Rational::zero(); outs * ins];
        let out_radices = vec![d; r];
        for (n, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 2 * r + 1 {
                return Err(err(n, "wrong entry width"));
            }
            let idx = toks[..2 * r]
                .iter()
                .map(|t| t.parse::<usize>().map_err(|_| err(n, "invalid index")))
                .collect::<Result<Vec<_>, _>>()?;
            let (xs, inputs) = idx.split_at(r);
            if xs.iter().any(|&x| x >= d) || inputs.iter().zip(&input_sizes).any(|(a, s)| a >= s) {
                return Err(err(n, "index out of range"));
            }
            let p = parse_rational(toks[2 * r]).map_err(|e| err(n, &e.to_string()))?;
            let flat = radix_index(inputs, &input_sizes) * outs + radix_index(xs, &out_radices);
            if !table[flat].is_zero() {
                return Err(err(n, "duplicate entry"));
            }
            table[flat] = p;
        }
        Self::new(d, input_sizes, table)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, NsError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// Restriction of the no-signaling LP to a product of per-party output and
/// input sets. Variables run over `(inputs, outputs)` with each input tuple
/// block laid out consecutively.
struct NsLayout {
    /// Allowed inputs per party.
    inputs: Vec<Vec<usize>>,
    /// Allowed outputs per party and (original) input.
    outputs: Vec<Vec<Vec<usize>>>,
    /// Start offset of each input tuple's block, in lexicographic order of
    /// allowed input positions.
    offsets: Vec<usize>,
    num_vars: usize,
}

impl NsLayout {
    fn new(inputs: Vec<Vec<usize>>, outputs: Vec<Vec<Vec<usize>>>) -> Self {
        let radices: Vec<usize> = inputs.iter().map(Vec::len).collect();
        let mut offsets = Vec::new();
        let mut next = 0;
        for pos in tuples(&radices) {
            offsets.push(next);
            next += pos
                .iter()
                .enumerate()
                .map(|(i, &p)| outputs[i][inputs[i][p]].len())
                .product::<usize>();
        }
        Self { inputs, outputs, offsets, num_vars: next }
    }

    fn input_radices(&self) -> Vec<usize> {
        self.inputs.iter().map(Vec::len).collect()
    }

    fn output_radices(&self, input_pos: &[usize]) -> Vec<usize> {
        input_pos.iter().enumerate().map(|(i, &p)| self.outputs[i][self.inputs[i][p]].len()).collect()
    }

    /// Variable index for input positions and output positions.
    fn var(&self, input_pos: &[usize], output_pos: &[usize]) -> usize {
        let block = radix_index(input_pos, &self.input_radices());
        self.offsets[block] + radix_index(output_pos, &self.output_radices(input_pos))
    }

    fn build(&self, dist: &JointDistribution) -> ExactLp {
        let r = self.inputs.len();
        let mut lp = ExactLp::new(self.num_vars);
        let in_radices = self.input_radices();

        for pos in tuples(&in_radices) {
            let start = self.var(&pos, &vec![0; r]);
            let len: usize = self.output_radices(&pos).iter().product();
            lp.add_sparse_row((start..start + len).map(|v| (v, Rational::one())), Relation::Equal, Rational::one());
        }

        // For each party k: summing out x_k gives something independent of a_k.
        for k in 0..r {
            if self.inputs[k].len() < 2 {
                continue;
            }
            let others: Vec<usize> = (0..r).filter(|&i| i != k).collect();
            let other_in: Vec<usize> = others.iter().map(|&i| in_radices[i]).collect();
            for other_pos in tuples(&other_in) {
                let mut pos = vec![0; r];
                for (slot, &i) in others.iter().enumerate() {
                    pos[i] = other_pos[slot];
                }
                let other_out: Vec<usize> = others
                    .iter()
                    .map(|&i| self.outputs[i][self.inputs[i][pos[i]]].len())
                    .collect();
                for other_x in tuples(&other_out) {
                    let marginal_terms = |pos_k: usize, sign: Rational| {
                        let mut p = pos.clone();
                        p[k] = pos_k;
                        let count = self.outputs[k][self.inputs[k][pos_k]].len();
                        (0..count)
                            .map(|xk| {
                                let mut x = vec![0; r];
                                for (slot, &i) in others.iter().enumerate() {
                                    x[i] = other_x[slot];
                                }
                                x[k] = xk;
                                (self.var(&p, &x), sign.clone())
                            })
                            .collect::<Vec<_>>()
                    };
                    let reference = marginal_terms(0, -Rational::one());
                    for pos_k in 1..self.inputs[k].len() {
                        let mut terms = marginal_terms(pos_k, Rational::one());
                        terms.extend(reference.iter().cloned());
                        lp.add_sparse_row(terms, Relation::Equal, Rational::zero());
                    }
                }
            }
        }

        // Objective: sum P(x, a) Q(x, ..., x | a) over allowed variables.
        let position = |i: usize, a: usize| self.inputs[i].iter().position(|&v| v == a);
        for (x, inputs, p) in dist.support() {
            let Some(pos) = inputs.iter().enumerate().map(|(i, &a)| position(i, a)).collect::<Option<Vec<_>>>() else {
                continue;
            };
            let out_pos: Option<Vec<usize>> = inputs
                .iter()
                .enumerate()
                .map(|(i, &a)| self.outputs[i][a].iter().position(|&v| v == x))
                .collect();
            if let Some(out_pos) = out_pos {
                lp.add_objective(self.var(&pos, &out_pos), p);
            }
        }
        lp
    }

    /// Expands an LP witness to a full box. Inputs outside the allowed set
    /// copy the behaviour of the party's first allowed input.
    fn expand(&self, dist: &JointDistribution, witness: &[Rational]) -> NoSignalingBox {
        let r = self.inputs.len();
        let d = dist.referee_size();
        let outs = d.pow(r as u32);
        let sizes = dist.party_sizes();
        let mut table = vec![Rational::zero(); outs * sizes.iter().product::<usize>()];
        let out_radices = vec![d; r];
        for inputs in tuples(sizes) {
            let pos: Vec<usize> = inputs
                .iter()
                .enumerate()
                .map(|(i, &a)| self.inputs[i].iter().position(|&v| v == a).unwrap_or(0))
                .collect();
            let out_r = self.output_radices(&pos);
            let base = radix_index(&inputs, sizes) * outs;
            for out_pos in tuples(&out_r) {
                let v = &witness[self.var(&pos, &out_pos)];
                if v.is_zero() {
                    continue;
                }
                let xs: Vec<usize> = out_pos
                    .iter()
                    .enumerate()
                    .map(|(i, &o)| self.outputs[i][self.inputs[i][pos[i]]][o])
                    .collect();
                table[base + radix_index(&xs, &out_radices)] = v.clone();
            }
        }
        NoSignalingBox { outputs: d, input_sizes: sizes.to_vec(), table }
    }
}

fn full_layout(dist: &JointDistribution) -> NsLayout {
    let d = dist.referee_size();
    let inputs: Vec<Vec<usize>> = dist.party_sizes().iter().map(|&n| (0..n).collect()).collect();
    let outputs = dist.party_sizes().iter().map(|&n| vec![(0..d).collect(); n]).collect();
    NsLayout::new(inputs, outputs)
}

/// Drops inputs that never occur and, for each remaining input, outputs that
/// can never be correct. Local post-processing maps any no-signaling box onto
/// this face without lowering the winning probability, so the optimum is
/// unchanged.
fn pruned_layout(dist: &JointDistribution) -> NsLayout {
    let r = dist.num_parties();
    let mut inputs = Vec::with_capacity(r);
    let mut outputs = Vec::with_capacity(r);
    for i in 0..r {
        let support = dist.output_support(i);
        inputs.push((0..dist.party_sizes()[i]).filter(|&a| !support[a].is_empty()).collect());
        outputs.push(support);
    }
    NsLayout::new(inputs, outputs)
}

/// The full no-signaling LP: one variable per `Q(x_1..x_r | a_1..a_r)`,
/// normalization per input tuple, and for every party the marginal of the
/// others independent of its input (for two parties these are exactly the
/// two marginal conditions; for more they generate all proper subsets).
pub fn build_ns_lp(dist: &JointDistribution) -> Result<ExactLp, NsError> {
    if dist.num_parties() < 2 {
        return Err(NsError::TooFewParties);
    }
    Ok(full_layout(dist).build(dist))
}

/// Support-pruned LP with the same optimum as [`build_ns_lp`].
pub fn build_pruned_ns_lp(dist: &JointDistribution) -> Result<ExactLp, NsError> {
    if dist.num_parties() < 2 {
        return Err(NsError::TooFewParties);
    }
    Ok(pruned_layout(dist).build(dist))
}

/// Exact `p_ns` with an optimal box, solved on the pruned LP.
pub fn pns_exact(dist: &JointDistribution) -> Result<(Rational, NoSignalingBox), NsError> {
    solve_layout(dist, pruned_layout(dist))
}

/// Exact `p_ns` on the unpruned LP; slower, used for cross-checks.
pub fn pns_exact_full(dist: &JointDistribution) -> Result<(Rational, NoSignalingBox), NsError> {
    solve_layout(dist, full_layout(dist))
}

fn solve_layout(
    dist: &JointDistribution,
    layout: NsLayout,
) -> Result<(Rational, NoSignalingBox), NsError> {
    if dist.num_parties() < 2 {
        return Err(NsError::TooFewParties);
    }
    let lp = layout.build(dist);
    let sol = lp.maximize()?;
    let boxed = layout.expand(dist, &sol.witness);
    debug_assert_eq!(boxed.winning_probability(dist), sol.value);
    Ok((sol.value, boxed))
}

/// Extremal box: `1/k` iff both outputs lie in `[k]` and differ by `ab`
/// modulo `k`.
pub fn qk_box(k: usize, d: usize) -> Result<NoSignalingBox, NsError> {
    if k < 2 || k > d {
        return Err(NsError::KOutOfRange { k, d });
    }
    let mut table = vec![Rational::zero(); d * d * 4];
    for a in 0..2 {
        for b in 0..2 {
            for xa in 0..k {
                for xb in 0..k {
                    if (xa + k - xb) % k == a * b {
                        table[(a * 2 + b) * d * d + xa * d + xb] = ratio(1, k as i64);
                    }
                }
            }
        }
    }
    NoSignalingBox::new(d, vec![2, 2], table)
}

pub const DEFAULT_PERMUTATION_LIMIT: usize = 5;

/// `Q^k` relabeled by per-input output permutations: `f[a][x]`, `g[b][x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelabeledQk {
    pub k: usize,
    pub f: [Vec<usize>; 2],
    pub g: [Vec<usize>; 2],
}

impl RelabeledQk {
    /// `sum P(x, a, b) Q^k(f(x, a), g(x, b) | a, b)`.
    pub fn value(&self, dist: &JointDistribution) -> Rational {
        let hits: Rational = dist
            .support()
            .filter(|(x, ab, _)| self.hit(*x, ab[0], ab[1]))
            .map(|(_, _, p)| p)
            .sum();
        hits / Rational::from_integer(BigInt::from(self.k))
    }

    fn hit(&self, x: usize, a: usize, b: usize) -> bool {
        let (xa, xb) = (self.f[a][x], self.g[b][x]);
        xa < self.k && xb < self.k && (xa + self.k - xb) % self.k == a * b
    }

    /// True iff every supported `(x, a, b)` lands on a nonzero `Q^k` entry,
    /// so the value reaches the `1/k` ceiling.
    pub fn covers_support(&self, dist: &JointDistribution) -> bool {
        dist.support().all(|(x, ab, _)| self.hit(x, ab[0], ab[1]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryInputValue {
    pub value: Rational,
    pub classical: Rational,
    /// Best relabeled extremal box; `None` when `|X| < 2`, or when `|X|` is
    /// above the enumeration limit and the LP supplied the value.
    pub best_extremal: Option<(Rational, RelabeledQk)>,
}

pub fn pns_binary_inputs(dist: &JointDistribution) -> Result<BinaryInputValue, NsError> {
    pns_binary_inputs_with_limit(dist, DEFAULT_PERMUTATION_LIMIT)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; d], &mut out);
    out
}

/// Binary-input formula: the larger of the classical value and the best
/// relabeled `Q^k`, found by exhaustive search over output permutations.
///
/// With Alice's two permutations fixed the objective separates over Bob's
/// inputs, so each of Bob's permutations is chosen independently; this visits
/// every permutation tuple implicitly. Ties keep the first candidate in
/// `(k, f0, f1, g0, g1)` lexicographic order.
pub fn pns_binary_inputs_with_limit(
    dist: &JointDistribution,
    limit: usize,
) -> Result<BinaryInputValue, NsError> {
    if !dist.is_binary_two_party() {
        return Err(NsError::NotBinaryInput);
    }
    let d = dist.referee_size();
    let classical =
        pc_binary_closed_form(dist).unwrap_or_else(|_| crate::rational::int(1));
    if d > limit {
        let (value, _) = pns_exact(dist)?;
        return Ok(BinaryInputValue { value, classical, best_extremal: None });
    }
    if d < 2 {
        return Ok(BinaryInputValue { value: classical.clone(), classical, best_extremal: None });
    }

    let lcm = dist.support().fold(BigInt::one(), |acc, (_, _, p)| acc.lcm(p.denom()));
    // weight[a][b][x] as an integer multiple of 1/lcm
    let mut weight = vec![vec![vec![0u128; d]; 2]; 2];
    let fits = lcm.to_u128().is_some_and(|l| l < (1u128 << 100));
    if !fits {
        // Astronomically fine distributions: fall back to the direct evaluator.
        return exhaustive_rational(dist, classical);
    }
    for (x, ab, p) in dist.support() {
        weight[ab[0]][ab[1]][x] = (p.numer() * (&lcm / p.denom())).to_u128().expect("fits");
    }

    let perms = permutations(d);
    let mut best: Option<(Rational, RelabeledQk)> = None;
    for k in 2..=d {
        let hit = |xa: usize, xb: usize, ab: usize| xa < k && xb < k && (xa + k - xb) % k == ab;
        // term[a][b][fi][gi]
        let term = |a: usize, b: usize, f: &[usize], g: &[usize]| -> u128 {
            (0..d).filter(|&x| hit(f[x], g[x], a * b)).map(|x| weight[a][b][x]).sum()
        };
        let mut best_k: Option<(u128, [usize; 4])> = None;
        for (i0, f0) in perms.iter().enumerate() {
            for (i1, f1) in perms.iter().enumerate() {
                let mut total = 0u128;
                let mut picks = [0usize; 2];
                for b in 0..2 {
                    let mut bv = None;
                    for (j, g) in perms.iter().enumerate() {
                        let v = term(0, b, f0, g) + term(1, b, f1, g);
                        if bv.is_none_or(|(best, _)| v > best) {
                            bv = Some((v, j));
                        }
                    }
                    let (v, j) = bv.expect("non-empty");
                    total += v;
                    picks[b] = j;
                }
                if best_k.is_none_or(|(v, _)| total > v) {
                    best_k = Some((total, [i0, i1, picks[0], picks[1]]));
                }
            }
        }
        let (hits, [i0, i1, j0, j1]) = best_k.expect("non-empty");
        let value = Rational::new(BigInt::from(hits), lcm.clone() * BigInt::from(k));
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            let witness = RelabeledQk {
                k,
                f: [perms[i0].clone(), perms[i1].clone()],
                g: [perms[j0].clone(), perms[j1].clone()],
            };
            best = Some((value, witness));
        }
    }
    let value = match &best {
        Some((v, _)) if *v > classical => v.clone(),
        _ => classical.clone(),
    };
    Ok(BinaryInputValue { value, classical, best_extremal: best })
}

fn exhaustive_rational(
    dist: &JointDistribution,
    classical: Rational,
) -> Result<BinaryInputValue, NsError> {
    let d = dist.referee_size();
    let perms = permutations(d);
    let mut best: Option<(Rational, RelabeledQk)> = None;
    for k in 2..=d {
        for f0 in &perms {
            for f1 in &perms {
                for g0 in &perms {
                    for g1 in &perms {
                        let w = RelabeledQk {
                            k,
                            f: [f0.clone(), f1.clone()],
                            g: [g0.clone(), g1.clone()],
                        };
                        let v = w.value(dist);
                        if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                            best = Some((v, w));
                        }
                    }
                }
            }
        }
    }
    let value = match &best {
        Some((v, _)) if *v > classical => v.clone(),
        _ => classical.clone(),
    };
    Ok(BinaryInputValue { value, classical, best_extremal: best })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::pc_bruteforce;
    use crate::game::{noisy_bit_game, point_mass, theorem1_game};
    use crate::rational::int;

    #[test]
    fn full_lp_size() {
        let lp = build_ns_lp(&theorem1_game()).unwrap();
        assert_eq!(lp.num_vars(), 36);
    }

    #[test]
    fn three_outcome_value_is_one_half() {
        let g = theorem1_game();
        let (v, b) = pns_exact(&g).unwrap();
        assert_eq!(v, ratio(1, 2));
        b.validate().unwrap();
        assert_eq!(b.winning_probability(&g), v);

        let (full, fb) = pns_exact_full(&g).unwrap();
        assert_eq!(full, ratio(1, 2));
        fb.validate().unwrap();

        let lp_sol = build_ns_lp(&g).unwrap().maximize().unwrap();
        assert_eq!(lp_sol.value, ratio(1, 2));
    }

    #[test]
    fn point_mass_is_won() {
        let g = point_mass(2, vec![2, 2]);
        assert_eq!(pns_exact(&g).unwrap().0, int(1));
        assert_eq!(pns_exact_full(&g).unwrap().0, int(1));
    }

    #[test]
    fn noisy_bit_equals_classical() {
        for a in [ratio(3, 10), ratio(1, 4)] {
            let g = noisy_bit_game(&a).unwrap();
            let v = pns_exact(&g).unwrap().0;
            assert_eq!(v, pc_bruteforce(&g).unwrap().0);
            assert_eq!(build_ns_lp(&g).unwrap().maximize().unwrap().value, v);
        }
    }

    #[test]
    fn too_few_parties() {
        let g = point_mass(2, vec![2]);
        assert!(matches!(build_ns_lp(&g), Err(NsError::TooFewParties)));
    }

    #[test]
    fn qk_boxes() {
        let pr = qk_box(2, 2).unwrap();
        assert_eq!(pr.table.iter().filter(|p| **p == ratio(1, 2)).count(), 8);
        assert!(pr.table.iter().all(|p| p.is_zero() || *p == ratio(1, 2)));

        let b = qk_box(2, 3).unwrap();
        for a in 0..2 {
            for bb in 0..2 {
                for x in 0..3 {
                    assert!(b.get(&[2, x], &[a, bb]).is_zero());
                    assert!(b.get(&[x, 2], &[a, bb]).is_zero());
                }
            }
        }
        for d in 2..=5 {
            for k in 2..=d {
                qk_box(k, d).unwrap().validate().unwrap();
            }
        }
        assert!(matches!(qk_box(1, 3), Err(NsError::KOutOfRange { .. })));
        assert!(matches!(qk_box(4, 3), Err(NsError::KOutOfRange { .. })));
    }

    #[test]
    fn signaling_box_rejected() {
        let mut table = vec![Rational::zero(); 16];
        // outputs copy Bob's input to Alice: x_A = b
        for a in 0..2 {
            for b in 0..2 {
                table[(a * 2 + b) * 4 + b * 2] = int(1);
            }
        }
        assert!(matches!(NoSignalingBox::new(2, vec![2, 2], table), Err(NsError::InvalidBox(_))));
    }

    #[test]
    fn reference_relabeling() {
        let g = theorem1_game();
        let table1 = RelabeledQk {
            k: 2,
            f: [vec![2, 1, 0], vec![0, 1, 2]],
            g: [vec![0, 1, 2], vec![1, 2, 0]],
        };
        assert!(table1.covers_support(&g));
        assert_eq!(table1.value(&g), ratio(1, 2));

        let res = pns_binary_inputs(&g).unwrap();
        assert_eq!(res.value, ratio(1, 2));
        assert_eq!(res.classical, ratio(2, 5));
        let (v, w) = res.best_extremal.unwrap();
        assert_eq!(v, ratio(1, 2));
        assert_eq!(w.k, 2);
        assert!(w.covers_support(&g));
    }

    #[test]
    fn binary_formula_limit() {
        let g = point_mass(6, vec![2, 2]);
        let res = pns_binary_inputs(&g).unwrap();
        assert_eq!((res.value, res.best_extremal), (int(1), None));
        let t1 = theorem1_game();
        let lp = pns_binary_inputs_with_limit(&t1, 2).unwrap();
        assert_eq!(lp.value, ratio(1, 2));
        assert!(lp.best_extremal.is_none());
        assert!(matches!(
            pns_binary_inputs(&point_mass(2, vec![3, 2])),
            Err(NsError::NotBinaryInput)
        ));
    }

    #[test]
    fn box_text_round_trip() {
        let (_, b) = pns_exact(&theorem1_game()).unwrap();
        let back = NoSignalingBox::parse(&b.write()).unwrap();
        assert_eq!(back, b);
        assert!(NoSignalingBox::parse("lssd-box v1\nparties 2\noutputs 2\ninputs 1 1\n0 0 0 0 1/2\n").is_err());
    }

    #[test]
    fn lp_optimum_bounded_by_one() {
        for k in 0..=5 {
            let g = noisy_bit_game(&ratio(k, 10)).unwrap();
            assert!(pns_exact(&g).unwrap().0 <= int(1));
        }
    }
}
