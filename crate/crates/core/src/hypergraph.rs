//! r-partite hypergraph games: a uniformly random hyperedge is drawn and
//! each party receives its own vertex; all must name the edge.

use std::fmt::Write as _;
use std::path::Path;

use num_traits::One;

use crate::classical::{pc_bruteforce, strategy_value, ClassicalError};
use crate::game::{DeterministicStrategy, GameError, JointDistribution};
use crate::lp::{ExactLp, LpError, Relation};
use crate::nosignaling::{pns_exact, NsError};
use crate::rational::{int, ratio, Rational};

pub const DEFAULT_MATCHING_EDGE_LIMIT: usize = 24;

#[derive(Debug, thiserror::Error)]
pub enum HypergraphError {
    #[error("hypergraph has no edges")]
    EmptyHypergraph,
    #[error("edge {edge}: {message}")]
    InvalidEdge { edge: usize, message: String },
    #[error("{edges} edges exceed the exact matching limit {limit}")]
    BudgetExceeded { edges: usize, limit: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    NoSignaling(#[from] NsError),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// Part sizes and a duplicate-free list of edges, one vertex per part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPartiteHypergraph {
    parts: Vec<usize>,
    edges: Vec<Vec<usize>>,
}

impl RPartiteHypergraph {
    /// Validates vertex ranges; repeated edges keep their first occurrence.
    pub fn new(parts: Vec<usize>, edges: Vec<Vec<usize>>) -> Result<Self, HypergraphError> {
        let mut seen = std::collections::HashSet::new();
        let mut unique = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if e.len() != parts.len() {
                return Err(HypergraphError::InvalidEdge {
                    edge: i,
                    message: format!("has {} vertices, expected {}", e.len(), parts.len()),
                });
            }
            if let Some(k) = (0..e.len()).find(|&k| e[k] >= parts[k]) {
                return Err(HypergraphError::InvalidEdge {
                    edge: i,
                    message: format!("vertex {} out of range for part {k}", e[k]),
                });
            }
            if seen.insert(e.clone()) {
                unique.push(e);
            }
        }
        Ok(Self { parts, edges: unique })
    }

    pub fn rank(&self) -> usize {
        self.parts.len()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    fn intersect(e: &[usize], f: &[usize]) -> bool {
        e.iter().zip(f).any(|(a, b)| a == b)
    }

    /// `lssd-hypergraph v1`, `parts n_1 .. n_r`, then one edge per line.
    pub fn write(&self) -> String {
        let mut out = String::from("lssd-hypergraph v1\nparts");
        for p in &self.parts {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
        for e in &self.edges {
            let line: Vec<String> = e.iter().map(usize::to_string).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, HypergraphError> {
        let err = |line: usize, m: &str| HypergraphError::Parse { line, message: m.to_string() };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        match lines.next() {
            Some((_, "lssd-hypergraph v1")) => {}
            Some((n, _)) => return Err(err(n, "expected `lssd-hypergraph v1`")),
            None => return Err(err(1, "empty file")),
        }
        let (n, parts_line) = lines.next().ok_or_else(|| err(2, "missing `parts`"))?;
        let toks: Vec<&str> = parts_line.split_whitespace().collect();
        if toks.first() != Some(&"parts") || toks.len() < 2 {
            return Err(err(n, "expected `parts <n_1> ... <n_r>`"));
        }
        let parts = toks[1..]
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| err(n, "invalid part size")))
            .collect::<Result<Vec<_>, _>>()?;
        let mut edges = Vec::new();
        for (n, line) in lines {
            let e = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| err(n, "invalid vertex")))
                .collect::<Result<Vec<_>, _>>()?;
            if e.len() != parts.len() || e.iter().zip(&parts).any(|(v, p)| v >= p) {
                return Err(err(n, "edge does not fit the parts"));
            }
            edges.push(e);
        }
        Self::new(parts, edges)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, HypergraphError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

/// `|X| = |E|` and `P(e, a) = 1/|E|` exactly when `a` is edge `e`.
pub fn game_distribution(g: &RPartiteHypergraph) -> Result<JointDistribution, HypergraphError> {
    let m = g.edges.len();
    if m == 0 {
        return Err(HypergraphError::EmptyHypergraph);
    }
    let entries = g.edges.iter().enumerate().map(|(e, a)| (e, a.clone(), ratio(1, m as i64)));
    Ok(JointDistribution::from_entries(m, g.parts.clone(), entries)?)
}

/// Maximum fractional matching: `max sum g(e)` with `sum_{e ∋ v} g(e) <= 1`
/// and `0 <= g(e) <= 1`.
pub fn fractional_matching(g: &RPartiteHypergraph) -> Result<Rational, HypergraphError> {
    Ok(fractional_lp(g).maximize()?.value)
}

fn fractional_lp(g: &RPartiteHypergraph) -> ExactLp {
    let m = g.edges.len();
    let mut lp = ExactLp::new(m);
    for e in 0..m {
        lp.set_objective(e, Rational::one());
        lp.add_sparse_row([(e, Rational::one())], Relation::LessEq, Rational::one());
    }
    for (k, &size) in g.parts.iter().enumerate() {
        for v in 0..size {
            let users: Vec<(usize, Rational)> =
                (0..m).filter(|&e| g.edges[e][k] == v).map(|e| (e, Rational::one())).collect();
            if !users.is_empty() {
                lp.add_sparse_row(users, Relation::LessEq, Rational::one());
            }
        }
    }
    lp
}

struct MatchingSearch<'a> {
    g: &'a RPartiteHypergraph,
    /// Conflict bitmasks: `conflicts[e]` has bit `f` when edges `e`, `f` meet.
    conflicts: Vec<u64>,
    best: Vec<usize>,
}

impl MatchingSearch<'_> {
    /// Cheap bound: remaining edges, and per part the number of distinct
    /// vertices they use.
    fn bound(&self, candidates: u64) -> usize {
        let count = candidates.count_ones() as usize;
        let per_part = (0..self.g.rank()).map(|k| {
            let mut used = vec![false; self.g.parts[k]];
            let mut c = candidates;
            while c != 0 {
                let e = c.trailing_zeros() as usize;
                c &= c - 1;
                used[self.g.edges[e][k]] = true;
            }
            used.iter().filter(|&&u| u).count()
        });
        per_part.fold(count, usize::min)
    }

    fn search(&mut self, chosen: &mut Vec<usize>, candidates: u64) {
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        if candidates == 0 || chosen.len() + self.bound(candidates) <= self.best.len() {
            return;
        }
        let e = candidates.trailing_zeros() as usize;
        let rest = candidates & !(1 << e);
        chosen.push(e);
        self.search(chosen, rest & !self.conflicts[e]);
        chosen.pop();
        self.search(chosen, rest);
    }
}

pub fn max_matching(g: &RPartiteHypergraph) -> Result<(usize, Vec<usize>), HypergraphError> {
    max_matching_with_limit(g, DEFAULT_MATCHING_EDGE_LIMIT)
}

/// Exact maximum matching by branch and bound. Starts from a greedy
/// matching, stops at once if it meets the floor of the fractional optimum,
/// and otherwise prunes with a per-part vertex count. The witness lists edge
/// indices in increasing order.
pub fn max_matching_with_limit(
    g: &RPartiteHypergraph,
    limit: usize,
) -> Result<(usize, Vec<usize>), HypergraphError> {
    let m = g.edges.len();
    if m > limit.min(64) {
        return Err(HypergraphError::BudgetExceeded { edges: m, limit: limit.min(64) });
    }
    let conflicts: Vec<u64> = (0..m)
        .map(|e| {
            (0..m)
                .filter(|&f| RPartiteHypergraph::intersect(&g.edges[e], &g.edges[f]))
                .fold(0u64, |acc, f| acc | (1 << f))
        })
        .collect();

    let mut greedy = Vec::new();
    let mut free = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    while free != 0 {
        let e = free.trailing_zeros() as usize;
        greedy.push(e);
        free &= !conflicts[e];
    }
    if m == 0 {
        return Ok((0, greedy));
    }
    let frac = fractional_matching(g)?;
    if int(greedy.len() as i64) >= frac.floor() {
        return Ok((greedy.len(), greedy));
    }

    let mut s = MatchingSearch { g, conflicts, best: greedy };
    s.search(&mut Vec::new(), u64::MAX >> (64 - m));
    let mut best = s.best;
    best.sort_unstable();
    Ok((best.len(), best))
}

/// Deterministic strategy from a matching: every vertex of a matching edge
/// names that edge, every other vertex names edge 0. It wins exactly on the
/// matching edges.
pub fn matching_strategy(g: &RPartiteHypergraph, matching: &[usize]) -> DeterministicStrategy {
    let mut tables: Vec<Vec<usize>> = g.parts.iter().map(|&n| vec![0; n]).collect();
    for &e in matching {
        for (k, &v) in g.edges[e].iter().enumerate() {
            tables[k][v] = e;
        }
    }
    DeterministicStrategy::new(tables)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem3Report {
    pub edges: usize,
    pub rank: usize,
    pub nu: usize,
    pub matching: Vec<usize>,
    pub nu_f: Rational,
    pub pc: Rational,
    pub pns: Rational,
    /// `p_c |E| = ν`, and the strategy built from the matching attains it.
    pub pc_equals_nu: bool,
    /// `p_ns |E| <= ν_f`.
    pub pns_within_nu_f: bool,
    /// `ν <= ν_f <= (r - 1) ν`.
    pub nu_f_sandwich: bool,
    /// `p_c = p_ns`, checked only for two parts.
    pub bipartite_equal: Option<bool>,
}

impl Theorem3Report {
    pub fn all_pass(&self) -> bool {
        self.pc_equals_nu && self.pns_within_nu_f && self.nu_f_sandwich && self.bipartite_equal.unwrap_or(true)
    }
}

pub fn verify_theorem3(g: &RPartiteHypergraph) -> Result<Theorem3Report, HypergraphError> {
    let dist = game_distribution(g)?;
    let edges = g.edges.len();
    let e = int(edges as i64);
    let (nu, matching) = max_matching(g)?;
    let nu_f = fractional_matching(g)?;
    let (pc, _) = pc_bruteforce(&dist)?;
    let (pns, _) = pns_exact(&dist)?;
    let nu_r = int(nu as i64);
    let attained = strategy_value(&dist, &matching_strategy(g, &matching))? * &e;
    let r = g.rank();
    let upper = if r >= 2 { int(r as i64 - 1) * &nu_r } else { nu_r.clone() };
    Ok(Theorem3Report {
        edges,
        rank: r,
        nu,
        matching,
        pc_equals_nu: &pc * &e == nu_r && attained == nu_r,
        pns_within_nu_f: &pns * &e <= nu_f,
        nu_f_sandwich: nu_r <= nu_f && (r < 2 || nu_f <= upper),
        bipartite_equal: (r == 2).then(|| pc == pns),
        nu_f,
        pc,
        pns,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nosignaling::pns_exact_full;

    fn hg(parts: &[usize], edges: &[&[usize]]) -> RPartiteHypergraph {
        RPartiteHypergraph::new(parts.to_vec(), edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn single_edge_is_point_mass() {
        let g = hg(&[2, 2, 2], &[&[1, 0, 1]]);
        let d = game_distribution(&g).unwrap();
        assert_eq!(pc_bruteforce(&d).unwrap().0, int(1));
        assert_eq!(max_matching(&g).unwrap().0, 1);
    }

    #[test]
    fn disjoint_edges() {
        let g = hg(&[3, 3, 3], &[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2]]);
        let (nu, w) = max_matching(&g).unwrap();
        assert_eq!((nu, w), (3, vec![0, 1, 2]));
        assert_eq!(fractional_matching(&g).unwrap(), int(3));
        let rep = verify_theorem3(&g).unwrap();
        assert!(rep.all_pass());
        assert_eq!(rep.pc, int(1));
        assert_eq!(rep.pns, int(1));
    }

    #[test]
    fn sunflower() {
        let g = hg(&[1, 4, 4], &[&[0, 0, 0], &[0, 1, 1], &[0, 2, 2], &[0, 3, 3]]);
        assert_eq!(max_matching(&g).unwrap().0, 1);
    }

    #[test]
    fn complete_bipartite_two_by_two() {
        let g = hg(&[2, 2], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let d = game_distribution(&g).unwrap();
        assert_eq!(pc_bruteforce(&d).unwrap().0, ratio(1, 2));
        let rep = verify_theorem3(&g).unwrap();
        assert_eq!(rep.nu, 2);
        assert_eq!(rep.bipartite_equal, Some(true));
        assert!(rep.all_pass());
    }

    #[test]
    fn pairwise_intersecting_triangle() {
        let g = hg(&[2, 2, 2], &[&[0, 0, 0], &[0, 1, 1], &[1, 0, 1]]);
        assert_eq!(max_matching(&g).unwrap().0, 1);
        assert_eq!(fractional_matching(&g).unwrap(), ratio(3, 2));
        let rep = verify_theorem3(&g).unwrap();
        assert!(rep.all_pass());
        let d = game_distribution(&g).unwrap();
        assert_eq!(pns_exact_full(&d).unwrap().0, rep.pns);
    }

    #[test]
    fn matching_strategy_wins_on_matched_edges() {
        let g = hg(&[3, 3, 3], &[&[0, 0, 0], &[0, 1, 1], &[1, 1, 2], &[2, 2, 1]]);
        let (nu, m) = max_matching(&g).unwrap();
        assert_eq!(nu, 3);
        let d = game_distribution(&g).unwrap();
        let s = matching_strategy(&g, &m);
        assert_eq!(strategy_value(&d, &s).unwrap(), ratio(3, 4));
        assert_eq!(s.tables[0][2], 3);
        assert_eq!(pc_bruteforce(&d).unwrap().0, ratio(3, 4));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            RPartiteHypergraph::new(vec![2, 2], vec![vec![0, 2]]),
            Err(HypergraphError::InvalidEdge { edge: 0, .. })
        ));
        let g = RPartiteHypergraph::new(vec![2, 2], vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(g.edges().len(), 1);
        let empty = RPartiteHypergraph::new(vec![2, 2], vec![]).unwrap();
        assert!(matches!(game_distribution(&empty), Err(HypergraphError::EmptyHypergraph)));
        let big = RPartiteHypergraph::new(vec![30, 30], (0..25).map(|i| vec![i, i]).collect()).unwrap();
        assert!(matches!(max_matching(&big), Err(HypergraphError::BudgetExceeded { edges: 25, .. })));
        assert_eq!(max_matching_with_limit(&big, 30).unwrap().0, 25);
    }

    #[test]
    fn file_round_trip() {
        let g = hg(&[2, 3, 1], &[&[0, 2, 0], &[1, 0, 0]]);
        assert_eq!(RPartiteHypergraph::parse(&g.write()).unwrap(), g);
        assert!(matches!(
            RPartiteHypergraph::parse("lssd-hypergraph v1\nparts 2 2\n0 5\n"),
            Err(HypergraphError::Parse { line: 3, .. })
        ));
        assert!(RPartiteHypergraph::parse("lssd-hypergraph v2\n").is_err());
    }
}
