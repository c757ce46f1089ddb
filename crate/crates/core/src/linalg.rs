//! Dense complex matrices and a Jacobi eigensolver for small Hermitian
//! matrices.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

pub type Complex = num_complex::Complex64;

pub const HERMITIAN_TOL: f64 = 1e-12;
const JACOBI_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is singular or not positive definite (smallest eigenvalue {min:e})")]
    NotPositiveDefinite { min: f64 },
}

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![Complex::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        Self { dim, data }
    }

    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self, LinalgError> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(LinalgError::Dimension("rows must form a square matrix".into()));
        }
        Ok(Self { dim, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Complex::new(v, 0.0)).collect()).collect(),
        )
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex::new(v, 0.0);
        }
        m
    }

    /// `|v><v|`.
    pub fn outer(v: &[Complex]) -> Self {
        Self::from_fn(v.len(), |i, j| v[i] * v[j].conj())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn scale_complex(&self, s: Complex) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    /// `self ⊗ other`; row index of the result is `i * other.dim + k`.
    pub fn kron(&self, other: &Self) -> Self {
        let n = other.dim;
        Self::from_fn(self.dim * n, |r, c| self[(r / n, c / n)] * other[(r % n, c % n)])
    }

    pub fn mul_vec(&self, v: &[Complex]) -> Vec<Complex> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// `<v|M|v>`.
    pub fn expectation(&self, v: &[Complex]) -> Complex {
        self.mul_vec(v).iter().zip(v).map(|(mv, vi)| vi.conj() * mv).sum()
    }

    /// `Tr(self * other)` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Complex {
        let n = self.dim;
        let mut t = Complex::new(0.0, 0.0);
        for i in 0..n {
            for k in 0..n {
                t += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        t
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Traces out the second factor of a `d_a * d_b` space.
    pub fn partial_trace_second(&self, d_a: usize, d_b: usize) -> Result<Self, LinalgError> {
        if d_a * d_b != self.dim {
            return Err(LinalgError::Dimension(format!("{} != {d_a} * {d_b}", self.dim)));
        }
        Ok(Self::from_fn(d_a, |i, j| (0..d_b).map(|k| self[(i * d_b + k, j * d_b + k)]).sum()))
    }

    /// Traces out the first factor of a `d_a * d_b` space.
    pub fn partial_trace_first(&self, d_a: usize, d_b: usize) -> Result<Self, LinalgError> {
        if d_a * d_b != self.dim {
            return Err(LinalgError::Dimension(format!("{} != {d_a} * {d_b}", self.dim)));
        }
        Ok(Self::from_fn(d_b, |i, j| (0..d_a).map(|k| self[(k * d_b + i, k * d_b + j)]).sum()))
    }

    pub fn eigh(&self) -> Result<Eigen, LinalgError> {
        eigh(self)
    }

    /// `V f(Λ) V†` for a Hermitian matrix.
    pub fn apply_spectral(&self, f: impl Fn(f64) -> f64) -> Result<Self, LinalgError> {
        let e = self.eigh()?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for (lambda, v) in e.values.iter().zip(&e.vectors) {
            let w = f(*lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    out.data[i * n + j] += v[i] * v[j].conj() * w;
                }
            }
        }
        Ok(out)
    }

    /// Principal square root of a PSD matrix; tiny negative eigenvalues are
    /// clamped to zero.
    pub fn sqrt_psd(&self) -> Result<Self, LinalgError> {
        self.apply_spectral(|l| l.max(0.0).sqrt())
    }

    pub fn inv_sqrt_pd(&self) -> Result<Self, LinalgError> {
        let min = self.eigh()?.min();
        if min <= 1e-14 {
            return Err(LinalgError::NotPositiveDefinite { min });
        }
        self.apply_spectral(|l| 1.0 / l.sqrt())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Complex::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Eigenpairs sorted by decreasing eigenvalue; vectors are orthonormal.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex>>,
}

impl Eigen {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty")
    }
}

/// Cyclic Jacobi on a real symmetric matrix stored row-major. Returns the
/// eigenvalues (diagonal) and the eigenvector matrix with eigenvectors as
/// columns.
pub fn jacobi_symmetric(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_THRESHOLD * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Full eigendecomposition of a Hermitian matrix via the real embedding
/// `[[Re, -Im], [Im, Re]]`, whose spectrum is that of `H` with every
/// eigenvalue doubled.
pub fn eigh(h: &ComplexMatrix) -> Result<Eigen, LinalgError> {
    let deviation = h.hermitian_deviation();
    let tol = HERMITIAN_TOL * h.frobenius_norm().max(1.0);
    if deviation > tol {
        return Err(LinalgError::NotHermitian { deviation });
    }
    let n = h.dim();
    if n == 0 {
        return Ok(Eigen { values: vec![], vectors: vec![] });
    }
    let h = h.hermitian_part();
    let real = h.data.iter().all(|z| z.im == 0.0);

    let (values, vecs, m) = if real {
        let mut a: Vec<f64> = h.data.iter().map(|z| z.re).collect();
        let (vals, v) = jacobi_symmetric(&mut a, n);
        (vals, v, n)
    } else {
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = h[(i, j)];
                a[i * m + j] = z.re;
                a[(i + n) * m + j + n] = z.re;
                a[i * m + j + n] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let (vals, v) = jacobi_symmetric(&mut a, m);
        (vals, v, m)
    };

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));

    let mut out_vals = Vec::with_capacity(n);
    let mut out_vecs: Vec<Vec<Complex>> = Vec::with_capacity(n);
    for &col in &order {
        if out_vecs.len() == n {
            break;
        }
        let mut z: Vec<Complex> = if real {
            (0..n).map(|i| Complex::new(vecs[i * m + col], 0.0)).collect()
        } else {
            (0..n).map(|i| Complex::new(vecs[i * m + col], vecs[(i + n) * m + col])).collect()
        };
        // Each complex eigenline appears twice in the embedding (z and iz);
        // keep only directions independent of those already taken.
        for u in &out_vecs {
            let overlap: Complex = u.iter().zip(&z).map(|(ui, zi)| ui.conj() * zi).sum();
            for (zi, ui) in z.iter_mut().zip(u) {
                *zi -= overlap * ui;
            }
        }
        let norm = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 0.5 {
            continue;
        }
        for zi in &mut z {
            *zi /= norm;
        }
        out_vals.push(values[col]);
        out_vecs.push(z);
    }
    Ok(Eigen { values: out_vals, vectors: out_vecs })
}

/// Largest eigenvalue of a Hermitian matrix and a unit eigenvector.
pub fn principal_eigenvalue(h: &ComplexMatrix) -> Result<(f64, Vec<Complex>), LinalgError> {
    if h.dim() == 0 {
        return Err(LinalgError::Dimension("empty matrix".into()));
    }
    let e = eigh(h)?;
    let v = e.vectors.into_iter().next().expect("nonempty");
    Ok((e.values[0], v))
}

pub fn vec_norm(v: &[Complex]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
