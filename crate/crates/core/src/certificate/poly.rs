//! Polynomials in `t, a, b` and dense matrices over `Q(√13)`.

use std::collections::BTreeMap;
use std::fmt;

use super::field::Q13Scalar;

/// Exponents `(i_t, i_a, i_b)` of `t^i_t a^i_a b^i_b`.
pub type Monomial = (u32, u32, u32);

fn add_monomials(x: Monomial, y: Monomial) -> Monomial {
    (x.0 + y.0, x.1 + y.1, x.2 + y.2)
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Q13Poly {
    terms: BTreeMap<Monomial, Q13Scalar>,
}

impl Q13Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q13Scalar) -> Self {
        Self::monomial((0, 0, 0), c)
    }

    pub fn monomial(m: Monomial, c: Q13Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn t() -> Self {
        Self::monomial((1, 0, 0), Q13Scalar::one())
    }

    pub fn a() -> Self {
        Self::monomial((0, 1, 0), Q13Scalar::one())
    }

    pub fn b() -> Self {
        Self::monomial((0, 0, 1), Q13Scalar::one())
    }

    pub fn add_term(&mut self, m: Monomial, c: Q13Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q13Scalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn coefficient(&self, m: Monomial) -> Q13Scalar {
        self.terms.get(&m).cloned().unwrap_or_else(Q13Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q13Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q13Scalar) -> Self {
        let mut out = Self::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v * c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*m, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Q13Scalar::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (m1, v1) in &self.terms {
            for (m2, v2) in &other.terms {
                out.add_term(add_monomials(*m1, *m2), v1 * v2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(Q13Scalar::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, t: &Q13Scalar, a: &Q13Scalar, b: &Q13Scalar) -> Q13Scalar {
        let pow = |x: &Q13Scalar, e: u32| (0..e).fold(Q13Scalar::one(), |acc, _| &acc * x);
        self.terms
            .iter()
            .map(|(&(it, ia, ib), c)| &(&(c * &pow(t, it)) * &pow(a, ia)) * &pow(b, ib))
            .sum()
    }

    pub fn eval_f64(&self, t: f64, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(it, ia, ib), c)| c.to_f64() * t.powi(it as i32) * a.powi(ia as i32) * b.powi(ib as i32))
            .sum()
    }

    /// Coefficient of `t^k` as a float polynomial in `a, b`, evaluated.
    pub fn t_coefficient_f64(&self, k: u32, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.0 == k)
            .map(|(&(_, ia, ib), c)| c.to_f64() * a.powi(ia as i32) * b.powi(ib as i32))
            .sum()
    }
}

impl fmt::Display for Q13Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((it, ia, ib), c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) t^{it} a^{ia} b^{ib}")?;
        }
        Ok(())
    }
}

/// Dense square matrix over `Q(√13)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Q13Matrix {
    n: usize,
    entries: Vec<Q13Scalar>,
}

impl Q13Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, entries: vec![Q13Scalar::zero(); n * n] }
    }

    pub fn from_rows(rows: Vec<Vec<Q13Scalar>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Self { n, entries: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q13Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q13Scalar) {
        self.entries[i * self.n + j] = v;
    }

    /// Sets `(i, j)` and `(j, i)`.
    pub fn set_sym(&mut self, i: usize, j: usize, v: Q13Scalar) {
        self.set(j, i, v.clone());
        self.set(i, j, v);
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(Q13Scalar::to_f64).collect()
    }

    /// `vᵀ M v` for a vector of monomials with unit coefficients.
    pub fn quadratic_form(&self, v: &[Monomial]) -> Q13Poly {
        assert_eq!(v.len(), self.n, "vector length must match the matrix");
        let mut out = Q13Poly::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                out.add_term(add_monomials(v[i], v[j]), self.get(i, j).clone());
            }
        }
        out
    }
}
