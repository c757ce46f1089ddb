//! Exact rational linear programs and a dense two-phase simplex.
//!
//! Problems are `maximize c.x` subject to rows `a.x <= b` or `a.x = b` and
//! `x >= 0`. Entering columns follow the largest reduced cost until a run of
//! degenerate pivots is seen, after which Bland's rule (lowest index enters,
//! lowest basic index leaves on ties) is used for the rest of the solve, so
//! the method always terminates.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::rational::{Frac, Rational};

mod scalar;
use scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    Equal,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::LessEq => "<=",
            Relation::Equal => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LpError {
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("row {row} has {got} coefficients, expected {expected}")]
    RowWidth { row: usize, got: usize, expected: usize },
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExactLp {
    num_vars: usize,
    objective: Vec<Rational>,
    rows: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub witness: Vec<Rational>,
    pub pivots: usize,
}

impl ExactLp {
    pub fn new(num_vars: usize) -> Self {
        Self { num_vars, objective: vec![Rational::zero(); num_vars], rows: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn add_objective(&mut self, var: usize, coeff: &Rational) {
        self.objective[var] += coeff;
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.rows.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds a row from sparse `(var, coeff)` terms; repeated vars accumulate.
    pub fn add_sparse_row(
        &mut self,
        terms: impl IntoIterator<Item = (usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) {
        let mut coeffs = vec![Rational::zero(); self.num_vars];
        for (var, c) in terms {
            coeffs[var] += c;
        }
        self.add_row(coeffs, relation, rhs);
    }

    pub fn check_shape(&self) -> Result<(), LpError> {
        let widths = std::iter::once(&self.objective).chain(self.rows.iter().map(|r| &r.coeffs));
        for (row, w) in widths.enumerate() {
            if w.len() != self.num_vars {
                // row 0 is the objective
                return Err(LpError::RowWidth { row, got: w.len(), expected: self.num_vars });
            }
        }
        Ok(())
    }

    /// True iff `x >= 0` satisfies every row exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|row| {
                let lhs: Rational = row.coeffs.iter().zip(x).map(|(a, v)| a * v).sum();
                match row.relation {
                    Relation::LessEq => lhs <= row.rhs,
                    Relation::Equal => lhs == row.rhs,
                }
            })
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// Text dump: an objective comment, then `<coeffs...> <rel> <rhs>` per row.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("# maximize");
        for c in &self.objective {
            write!(out, " {}", Frac(c)).unwrap();
        }
        out.push('\n');
        for row in &self.rows {
            for c in &row.coeffs {
                write!(out, "{} ", Frac(c)).unwrap();
            }
            writeln!(out, "{} {}", row.relation.symbol(), Frac(&row.rhs)).unwrap();
        }
        out
    }

    pub fn maximize(&self) -> Result<LpSolution, LpError> {
        simplex_max(self)
    }
}

/// Solves `lp` exactly. The witness satisfies every constraint exactly.
pub fn simplex_max(lp: &ExactLp) -> Result<LpSolution, LpError> {
    lp.check_shape()?;
    let mut tab = Tableau::build(lp);
    tab.phase_one()?;
    tab.phase_two(lp)?;
    let witness = tab.primal(lp.num_vars);
    let value = lp.objective_value(&witness);
    debug_assert!(lp.is_feasible(&witness));
    Ok(LpSolution { value, witness, pivots: tab.pivots })
}

/// Consecutive degenerate pivots tolerated before switching to Bland's rule.
const DEGENERATE_RUN: usize = 50;

struct Tableau {
    /// Constraint rows, each `cols` coefficients followed by the rhs.
    rows: Vec<Vec<Scalar>>,
    /// Reduced costs `c_j - z_j` for the current phase, followed by `-value`.
    obj: Vec<Scalar>,
    basis: Vec<usize>,
    cols: usize,
    artificial_start: usize,
    pivots: usize,
    bland: bool,
    degenerate_run: usize,
}

impl Tableau {
    fn build(lp: &ExactLp) -> Self {
        let n = lp.num_vars;
        let slack_count = lp.rows.iter().filter(|r| r.relation == Relation::LessEq).count();
        let mut needs_artificial = Vec::with_capacity(lp.rows.len());
        for row in &lp.rows {
            let slack_ok = row.relation == Relation::LessEq && !row.rhs.is_negative();
            needs_artificial.push(!slack_ok);
        }
        let art_count = needs_artificial.iter().filter(|&&b| b).count();
        let artificial_start = n + slack_count;
        let cols = artificial_start + art_count;

        let mut rows = Vec::with_capacity(lp.rows.len());
        let mut basis = Vec::with_capacity(lp.rows.len());
        let mut slack = n;
        let mut art = artificial_start;
        for (row, &needs_art) in lp.rows.iter().zip(&needs_artificial) {
            let mut t = vec![Scalar::ZERO; cols + 1];
            let flip = row.rhs.is_negative();
            for (j, c) in row.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let c = Scalar::from_rational(c);
                    t[j] = if flip { c.neg() } else { c };
                }
            }
            let rhs = Scalar::from_rational(&row.rhs);
            t[cols] = if flip { rhs.neg() } else { rhs };
            if row.relation == Relation::LessEq {
                t[slack] = if flip { Scalar::ONE.neg() } else { Scalar::ONE };
                if !needs_art {
                    basis.push(slack);
                }
                slack += 1;
            }
            if needs_art {
                t[art] = Scalar::ONE;
                basis.push(art);
                art += 1;
            }
            rows.push(t);
        }
        Tableau {
            rows,
            obj: vec![Scalar::ZERO; cols + 1],
            basis,
            cols,
            artificial_start,
            pivots: 0,
            bland: false,
            degenerate_run: 0,
        }
    }

    fn set_costs(&mut self, cost: impl Fn(usize) -> Scalar) {
        let mut obj: Vec<Scalar> = (0..self.cols).map(&cost).collect();
        obj.push(Scalar::ZERO);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost(b);
            if cb.is_zero() {
                continue;
            }
            for (o, a) in obj.iter_mut().zip(row) {
                if !a.is_zero() {
                    o.sub_product(&cb, a);
                }
            }
        }
        self.obj = obj;
    }

    fn phase_one(&mut self) -> Result<(), LpError> {
        if self.artificial_start == self.cols {
            return Ok(());
        }
        let start = self.artificial_start;
        self.set_costs(|j| if j >= start { Scalar::ONE.neg() } else { Scalar::ZERO });
        self.run(self.cols)?;
        // obj[cols] holds -value; phase-one value is -sum(artificials).
        if !self.obj[self.cols].is_zero() {
            return Err(LpError::Infeasible);
        }
        self.evict_artificials();
        Ok(())
    }

    /// Pivots zero-level artificials out of the basis; rows where that is
    /// impossible are redundant and dropped.
    fn evict_artificials(&mut self) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < self.artificial_start {
                i += 1;
                continue;
            }
            let col = (0..self.artificial_start).find(|&j| !self.rows[i][j].is_zero());
            match col {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.swap_remove(i);
                    self.basis.swap_remove(i);
                }
            }
        }
    }

    fn phase_two(&mut self, lp: &ExactLp) -> Result<(), LpError> {
        let n = lp.num_vars;
        let costs: Vec<Scalar> = lp.objective.iter().map(Scalar::from_rational).collect();
        self.set_costs(|j| if j < n { costs[j].clone() } else { Scalar::ZERO });
        self.bland = false;
        self.degenerate_run = 0;
        self.run(self.artificial_start)
    }

    /// Runs simplex iterations with entering columns restricted to `< limit`.
    fn run(&mut self, limit: usize) -> Result<(), LpError> {
        loop {
            let Some(q) = self.entering(limit) else {
                return Ok(());
            };
            let r = self.leaving(q).ok_or(LpError::Unbounded)?;
            if self.rows[r][self.cols].is_zero() {
                self.degenerate_run += 1;
                if self.degenerate_run >= DEGENERATE_RUN {
                    self.bland = true;
                }
            } else {
                self.degenerate_run = 0;
            }
            self.pivot(r, q);
        }
    }

    fn entering(&self, limit: usize) -> Option<usize> {
        let positive = (0..limit).filter(|&j| self.obj[j].is_positive());
        if self.bland {
            positive.into_iter().next()
        } else {
            // Largest reduced cost; first index wins ties.
            positive.fold(None, |best: Option<usize>, j| match best {
                Some(b) if self.obj[b] >= self.obj[j] => Some(b),
                _ => Some(j),
            })
        }
    }

    fn leaving(&self, q: usize) -> Option<usize> {
        let mut best: Option<(usize, Scalar)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if !row[q].is_positive() {
                continue;
            }
            let ratio = row[self.cols].div(&row[q]);
            let better = match &best {
                None => true,
                Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, q: usize) {
        self.pivots += 1;
        let inv = self.rows[r][q].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = v.mul(&inv);
            }
        }
        let support: Vec<usize> =
            (0..=self.cols).filter(|&j| !self.rows[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for &j in &support {
                row[j].sub_product(&factor, &pivot_row[j]);
            }
        }
        if !self.obj[q].is_zero() {
            let factor = self.obj[q].clone();
            for &j in &support {
                self.obj[j].sub_product(&factor, &pivot_row[j]);
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = q;
    }

    fn primal(&self, n: usize) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); n];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < n {
                x[b] = row[self.cols].to_rational();
            }
        }
        x
    }
}
