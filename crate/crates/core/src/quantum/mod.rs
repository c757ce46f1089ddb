//! Entangled strategies: measurement families, the Ω operator whose top
//! eigenvalue is the value of fixed measurements, qubit-strategy search,
//! Naimark dilation, pruning, and a see-saw for quantum inputs.

mod nelder_mead;
mod qubit;
mod seesaw;

pub use nelder_mead::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use qubit::{
    eval_strategy, optimize_qubit, optimize_qubit_with, paper_strategy, prune_consistent_patterns,
    table2_pattern, OptimizeOptions, QubitStrategy, StrategyReport, TABLE2_PATTERN,
};
pub use seesaw::{
    classical_embedding, cqq_seesaw, cqq_seesaw_with, example2_state, seesaw_value, SeesawOptions,
    SeesawResult, MAX_LOCAL_DIM,
};

use crate::game::{GameError, JointDistribution};
use crate::linalg::{Complex, ComplexMatrix, LinalgError};
use crate::rational::{to_f64, Rational};

pub const POVM_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum QuantumError {
    #[error("invalid POVM: {0}")]
    InvalidPovm(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid state: {0}")]
    InvalidState(String),
    #[error("local dimension {d} exceeds the limit {max}")]
    DimensionTooLarge { d: usize, max: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Measurement with `n` outcomes on `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self, QuantumError> {
        let p = Self { elements };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), QuantumError> {
        let Some(first) = self.elements.first() else {
            return Err(QuantumError::InvalidPovm("no outcomes".into()));
        };
        let d = first.dim();
        let mut sum = ComplexMatrix::zeros(d);
        for (i, m) in self.elements.iter().enumerate() {
            if m.dim() != d {
                return Err(QuantumError::InvalidPovm(format!("element {i} has dimension {}", m.dim())));
            }
            if !m.is_hermitian(POVM_TOL) {
                return Err(QuantumError::InvalidPovm(format!("element {i} is not Hermitian")));
            }
            let min = m.eigh()?.min();
            if min < -POVM_TOL {
                return Err(QuantumError::InvalidPovm(format!("element {i} has eigenvalue {min:e}")));
            }
            sum = &sum + m;
        }
        let dev = sum.max_abs_diff(&ComplexMatrix::identity(d));
        if dev > POVM_TOL {
            return Err(QuantumError::InvalidPovm(format!("elements sum to identity only within {dev:e}")));
        }
        Ok(())
    }

    /// Single-outcome measurement `{1}`.
    pub fn trivial(d: usize) -> Self {
        Self { elements: vec![ComplexMatrix::identity(d)] }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &ComplexMatrix {
        &self.elements[i]
    }

    pub fn is_projective(&self) -> bool {
        self.elements.iter().all(|m| (m * m).max_abs_diff(m) <= POVM_TOL)
    }
}

/// One measurement per input of a party, all on the same space with the
/// same number of outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementFamily {
    povms: Vec<Povm>,
}

impl MeasurementFamily {
    pub fn new(povms: Vec<Povm>) -> Result<Self, QuantumError> {
        let Some(first) = povms.first() else {
            return Err(QuantumError::ShapeMismatch("empty measurement family".into()));
        };
        let (d, n) = (first.dim(), first.outcomes());
        if povms.iter().any(|p| p.dim() != d || p.outcomes() != n) {
            return Err(QuantumError::ShapeMismatch("inconsistent dimensions or outcome counts".into()));
        }
        Ok(Self { povms })
    }

    pub fn inputs(&self) -> usize {
        self.povms.len()
    }

    pub fn dim(&self) -> usize {
        self.povms[0].dim()
    }

    pub fn outcomes(&self) -> usize {
        self.povms[0].outcomes()
    }

    pub fn povm(&self, input: usize) -> &Povm {
        &self.povms[input]
    }

    pub fn povms(&self) -> &[Povm] {
        &self.povms
    }
}

/// `sum_{x,a,b} P(x, a, b) M_x(a) ⊗ N_x(b)`.
pub fn omega(
    dist: &JointDistribution,
    m: &MeasurementFamily,
    n: &MeasurementFamily,
) -> Result<ComplexMatrix, QuantumError> {
    if dist.num_parties() != 2 {
        return Err(QuantumError::ShapeMismatch("omega needs two parties".into()));
    }
    let sizes = dist.party_sizes();
    let x = dist.referee_size();
    for (fam, size, who) in [(m, sizes[0], "Alice"), (n, sizes[1], "Bob")] {
        if fam.inputs() != size || fam.outcomes() != x {
            return Err(QuantumError::ShapeMismatch(format!(
                "{who}: {} inputs x {} outcomes, game needs {size} x {x}",
                fam.inputs(),
                fam.outcomes()
            )));
        }
    }
    let mut out = ComplexMatrix::zeros(m.dim() * n.dim());
    for (x, ab, p) in dist.support() {
        let term = m.povm(ab[0]).element(x).kron(n.povm(ab[1]).element(x));
        out = &out + &term.scale(to_f64(p));
    }
    Ok(out)
}

/// Isometry `U: C^d -> C^d ⊗ C^n` stored as a `(d n) x d` row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Isometry {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex>,
}

impl Isometry {
    pub fn get(&self, r: usize, c: usize) -> Complex {
        self.data[r * self.cols + c]
    }

    /// `U† X U` for a square `X` on the output space.
    pub fn compress(&self, x: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(x.dim(), self.rows, "dimension mismatch");
        let xu: Vec<Complex> = (0..self.rows * self.cols)
            .map(|k| {
                let (r, c) = (k / self.cols, k % self.cols);
                (0..self.rows).map(|j| x[(r, j)] * self.get(j, c)).sum()
            })
            .collect();
        ComplexMatrix::from_fn(self.cols, |i, j| {
            (0..self.rows).map(|r| self.get(r, i).conj() * xu[r * self.cols + j]).sum()
        })
    }

    /// `U† U`.
    pub fn gram(&self) -> ComplexMatrix {
        self.compress(&ComplexMatrix::identity(self.rows))
    }
}

/// Naimark dilation `U = sum_i sqrt(M_i) ⊗ |i>` with projectors
/// `Π_i = 1 ⊗ |i><i|`; the row index of `U` is `j * n + i`.
pub fn naimark_dilate(m: &Povm) -> Result<(Isometry, Povm), QuantumError> {
    m.validate()?;
    let (d, n) = (m.dim(), m.outcomes());
    let roots = m.elements().iter().map(|e| e.sqrt_psd()).collect::<Result<Vec<_>, _>>()?;
    let mut data = vec![Complex::new(0.0, 0.0); d * n * d];
    for (i, root) in roots.iter().enumerate() {
        for j in 0..d {
            for c in 0..d {
                data[(j * n + i) * d + c] = root[(j, c)];
            }
        }
    }
    let projectors = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            ComplexMatrix::identity(d).kron(&ComplexMatrix::diagonal(&e))
        })
        .collect();
    Ok((Isometry { rows: d * n, cols: d, data }, Povm { elements: projectors }))
}

/// For each input that occurs, folds every operator of an outcome that can
/// never be correct into the smallest outcome that can; other inputs are
/// left alone. Sums of orthogonal projectors stay projectors.
pub fn prune(
    dist: &JointDistribution,
    party: usize,
    m: &MeasurementFamily,
) -> Result<MeasurementFamily, QuantumError> {
    if dist.num_parties() != 2 || party > 1 {
        return Err(QuantumError::ShapeMismatch("prune needs two parties and party 0 or 1".into()));
    }
    let support = dist.output_support(party);
    if m.inputs() != support.len() || m.outcomes() != dist.referee_size() {
        return Err(QuantumError::ShapeMismatch("family does not match the game".into()));
    }
    let d = m.dim();
    let povms = m
        .povms()
        .iter()
        .zip(&support)
        .map(|(povm, allowed)| {
            let Some(&keep) = allowed.first() else {
                return povm.clone();
            };
            let mut elements = povm.elements().to_vec();
            for x in 0..elements.len() {
                if !allowed.contains(&x) {
                    let moved = std::mem::replace(&mut elements[x], ComplexMatrix::zeros(d));
                    elements[keep] = &elements[keep] + &moved;
                }
            }
            Povm { elements }
        })
        .collect();
    Ok(MeasurementFamily { povms })
}

/// Classical-quantum-quantum input: `rho_XAB = sum_x P(x) |x><x| ⊗ rho^x`.
#[derive(Debug, Clone)]
pub struct CqqState {
    px: Vec<Rational>,
    states: Vec<ComplexMatrix>,
    dims: (usize, usize),
}

pub const STATE_TOL: f64 = 1e-10;

impl CqqState {
    pub fn new(
        px: Vec<Rational>,
        states: Vec<ComplexMatrix>,
        dims: (usize, usize),
    ) -> Result<Self, QuantumError> {
        if px.len() != states.len() || px.is_empty() {
            return Err(QuantumError::InvalidState("one state per referee value required".into()));
        }
        if px.iter().any(|p| *p < Rational::from_integer(0.into()))
            || px.iter().sum::<Rational>() != Rational::from_integer(1.into())
        {
            return Err(QuantumError::InvalidState("P_X must be a probability vector".into()));
        }
        for (x, rho) in states.iter().enumerate() {
            if rho.dim() != dims.0 * dims.1 {
                return Err(QuantumError::InvalidState(format!("rho^{x} has the wrong dimension")));
            }
            if !rho.is_hermitian(1e-12) {
                return Err(QuantumError::InvalidState(format!("rho^{x} is not Hermitian")));
            }
            if (rho.trace().re - 1.0).abs() > STATE_TOL || rho.trace().im.abs() > STATE_TOL {
                return Err(QuantumError::InvalidState(format!("rho^{x} does not have unit trace")));
            }
            if rho.eigh()?.min() < -STATE_TOL {
                return Err(QuantumError::InvalidState(format!("rho^{x} is not PSD")));
            }
        }
        Ok(Self { px, states, dims })
    }

    pub fn px(&self) -> &[Rational] {
        &self.px
    }

    pub fn states(&self) -> &[ComplexMatrix] {
        &self.states
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }
}
