//! Exact sum-of-squares certificate that the characteristic polynomial
//! `f(t, a, b)` of the qubit Ω operator has no root above
//! `t* = (16 + √13)/45` for `a, b ∈ [-1, 1]`.
//!
//! The certificate is
//! `f = vᵀ (Q1 + (t - t*) Q2 + (1 - a²) Q3 + (1 - b²) Q4) v` with
//! `v = (1, a, b, ab, t, t²)` and PSD `Q1..Q4`. For `t > t*` every term is
//! nonnegative and the `Q2` term is `λ (t - t*) > 0`.

mod field;
mod numeric;
mod poly;

pub use field::Q13Scalar;
pub use numeric::{charpoly_check, charpoly_coefficients, grid_check, omega_ab, GridReport};
pub use poly::{Monomial, Q13Matrix, Q13Poly};

use crate::rational::ratio;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("certificate invalid: {step}")]
    CertificateInvalid { step: String },
}

/// `v = (1, a, b, ab, t, t²)` as `(i_t, i_a, i_b)` exponents.
pub const V_MONOMIALS: [Monomial; 6] = [(0, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 0), (2, 0, 0)];

pub const V_DESCRIPTION: &str = "(1, a, b, ab, t, t^2)";

pub fn t_star() -> Q13Scalar {
    Q13Scalar::from_ints(16, 1, 45)
}

fn r(p: i64, q: i64) -> Q13Scalar {
    Q13Scalar::rational(ratio(p, q))
}

fn rat(p: i64, den: i64) -> Q13Poly {
    Q13Poly::constant(r(p, den))
}

/// `f(t,a,b) = t⁴ - t³ + (32 + (1+a)(1+b))/100 t² - (16 + 3(1+a)(1+b))/500 t
/// + (1+a)(1+b)(4 - (1-a)(1-b))/5000`.
pub fn f_polynomial() -> Q13Poly {
    let one = rat(1, 1);
    let t = Q13Poly::t();
    let pp = one.add(&Q13Poly::a()).mul(&one.add(&Q13Poly::b()));
    let mm = one.sub(&Q13Poly::a()).mul(&one.sub(&Q13Poly::b()));
    t.pow(4)
        .sub(&t.pow(3))
        .add(&rat(32, 1).add(&pp).scale(&r(1, 100)).mul(&t.pow(2)))
        .sub(&rat(16, 1).add(&pp.scale(&r(3, 1))).scale(&r(1, 500)).mul(&t))
        .add(&pp.mul(&rat(4, 1).sub(&mm)).scale(&r(1, 5000)))
}

/// The published constants `α..ν` of the certificate.
pub struct SosConstants {
    pub alpha: Q13Scalar,
    pub beta: Q13Scalar,
    pub gamma: Q13Scalar,
    pub delta: Q13Scalar,
    pub epsilon: Q13Scalar,
    pub zeta: Q13Scalar,
    pub eta: Q13Scalar,
    pub theta: Q13Scalar,
    pub iota: Q13Scalar,
    pub kappa: Q13Scalar,
    pub lambda: Q13Scalar,
    pub mu: Q13Scalar,
    pub nu: Q13Scalar,
}

pub fn sos_constants() -> SosConstants {
    let q = Q13Scalar::from_ints;
    SosConstants {
        alpha: q(973343, 240821, 371790000),
        beta: q(33139, -617, 82620000),
        gamma: q(20, -1, 45000),
        delta: q(-1721, -62, 81000),
        epsilon: q(25, -2, 600),
        zeta: q(21592, -2903, 185895000),
        eta: q(-2, 1, 45000),
        theta: q(-91, 617, 82620000),
        iota: q(-47, 127, 4590000),
        kappa: q(37, 1, 150),
        lambda: q(91, 31, 20250),
        mu: q(8203, -1325, 743580000),
        nu: q(871, 127, 9180000),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SosCertificate {
    pub v: [Monomial; 6],
    /// `Q1, Q2, Q3, Q4`, multiplied by `1, t - t*, 1 - a², 1 - b²`.
    pub q: [Q13Matrix; 4],
}

pub fn sos_matrices() -> SosCertificate {
    let c = sos_constants();
    let mut q1 = Q13Matrix::zeros(6);
    let upper: [[Q13Scalar; 6]; 6] = [
        [c.alpha.clone(), c.beta.clone(), c.beta.clone(), c.gamma.clone(), c.delta.clone(), c.epsilon.clone()],
        [Q13Scalar::zero(), c.zeta.clone(), c.eta.clone(), c.theta.clone(), r(-3, 1000), r(1, 200)],
        [Q13Scalar::zero(), Q13Scalar::zero(), c.zeta.clone(), c.theta.clone(), r(-3, 1000), r(1, 200)],
        [Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), c.iota.clone(), r(-3, 1000), r(1, 200)],
        [Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), c.kappa.clone(), r(-1, 2)],
        [Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), Q13Scalar::zero(), r(1, 1)],
    ];
    for (i, row) in upper.iter().enumerate() {
        for (j, v) in row.iter().enumerate().skip(i) {
            q1.set_sym(i, j, v.clone());
        }
    }
    let mut q2 = Q13Matrix::zeros(6);
    q2.set(0, 0, c.lambda.clone());
    let mut q3 = Q13Matrix::zeros(6);
    q3.set(0, 0, c.mu.clone());
    q3.set_sym(0, 2, c.theta.clone());
    q3.set(2, 2, c.nu.clone());
    let mut q4 = Q13Matrix::zeros(6);
    q4.set(0, 0, c.mu.clone());
    q4.set_sym(0, 1, c.theta.clone());
    q4.set(1, 1, c.nu.clone());
    SosCertificate { v: V_MONOMIALS, q: [q1, q2, q3, q4] }
}

impl SosCertificate {
    /// `vᵀ (Q1 + (t - t*) Q2 + (1 - a²) Q3 + (1 - b²) Q4) v`, expanded.
    pub fn expand(&self) -> Q13Poly {
        let one = Q13Poly::constant(Q13Scalar::one());
        let multipliers = [
            one.clone(),
            Q13Poly::t().sub(&Q13Poly::constant(t_star())),
            one.sub(&Q13Poly::a().pow(2)),
            one.sub(&Q13Poly::b().pow(2)),
        ];
        self.q
            .iter()
            .zip(&multipliers)
            .fold(Q13Poly::zero(), |acc, (q, m)| acc.add(&q.quadratic_form(&self.v).mul(m)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub monomial: Monomial,
    pub expected: Q13Scalar,
    pub found: Q13Scalar,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCheck {
    pub ok: bool,
    /// First differing monomial in `(i_t, i_a, i_b)` order.
    pub mismatch: Option<Mismatch>,
}

pub fn verify_sos_identity() -> IdentityCheck {
    verify_sos_identity_for(&sos_matrices())
}

/// Compares the expanded certificate with `f` coefficient by coefficient;
/// both the rational and the √13 parts must agree exactly.
pub fn verify_sos_identity_for(cert: &SosCertificate) -> IdentityCheck {
    let lhs = f_polynomial();
    let rhs = cert.expand();
    let diff = lhs.sub(&rhs);
    let first = diff.terms().next().map(|(m, _)| *m);
    match first {
        None => IdentityCheck { ok: true, mismatch: None },
        Some(m) => IdentityCheck {
            ok: false,
            mismatch: Some(Mismatch { monomial: m, expected: lhs.coefficient(m), found: rhs.coefficient(m) }),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdCheck {
    pub psd: bool,
    /// Positive pivots in elimination order.
    pub pivots: Vec<Q13Scalar>,
    pub rank: usize,
}

/// Exact `LDLᵀ` with symmetric pivoting on the largest remaining diagonal
/// entry. Fails on a negative pivot, or on a zero pivot whose row is not
/// zero in the remaining block.
pub fn ldl_check(m: &Q13Matrix) -> Result<PsdCheck, CertificateError> {
    if !m.is_symmetric() {
        return Err(CertificateError::NotSymmetric);
    }
    let n = m.dim();
    let mut a = m.clone();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut pivots = Vec::new();
    while !remaining.is_empty() {
        let (pos, &k) = remaining
            .iter()
            .enumerate()
            .max_by(|(_, &i), (_, &j)| a.get(i, i).cmp(a.get(j, j)).then(j.cmp(&i)))
            .expect("nonempty");
        let d = a.get(k, k).clone();
        if d.is_negative() {
            return Ok(PsdCheck { psd: false, rank: pivots.len(), pivots });
        }
        if d.is_zero() {
            // Every remaining diagonal is zero, so PSD forces the block to vanish.
            let block_zero = remaining.iter().all(|&i| remaining.iter().all(|&j| a.get(i, j).is_zero()));
            return Ok(PsdCheck { psd: block_zero, rank: pivots.len(), pivots });
        }
        remaining.remove(pos);
        let dinv = d.recip();
        let col: Vec<(usize, Q13Scalar)> = remaining.iter().map(|&i| (i, a.get(i, k).clone())).collect();
        for (i, aik) in &col {
            if aik.is_zero() {
                continue;
            }
            let scaled = aik * &dinv;
            for (j, ajk) in &col {
                if ajk.is_zero() {
                    continue;
                }
                let v = a.get(*i, *j) - &(&scaled * ajk);
                a.set(*i, *j, v);
            }
        }
        pivots.push(d);
    }
    Ok(PsdCheck { psd: true, rank: pivots.len(), pivots })
}

pub fn verify_psd(m: &Q13Matrix) -> Result<bool, CertificateError> {
    Ok(ldl_check(m)?.psd)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateReport {
    pub identity_ok: bool,
    pub psd: [PsdCheck; 4],
    /// `λ = (Q2)_{11}`; `f(t, a, b) >= λ (t - t*)` for `t >= t*`.
    pub lambda: Q13Scalar,
    pub t_star: Q13Scalar,
}

impl CertificateReport {
    pub fn valid(&self) -> bool {
        self.identity_ok && self.psd.iter().all(|p| p.psd) && self.lambda.is_positive()
    }
}

/// Runs the exact identity check, the four PSD checks and the strictness
/// condition `λ > 0`.
pub fn certify_upper_bound() -> Result<CertificateReport, CertificateError> {
    certify(&sos_matrices())
}

pub fn certify(cert: &SosCertificate) -> Result<CertificateReport, CertificateError> {
    let id = verify_sos_identity_for(cert);
    if !id.ok {
        let m = id.mismatch.expect("mismatch recorded");
        return Err(CertificateError::CertificateInvalid {
            step: format!(
                "identity: coefficient of t^{} a^{} b^{} is {} in f but {} in the certificate",
                m.monomial.0, m.monomial.1, m.monomial.2, m.expected, m.found
            ),
        });
    }
    let checks: Vec<PsdCheck> = cert.q.iter().map(ldl_check).collect::<Result<_, _>>()?;
    if let Some(i) = checks.iter().position(|c| !c.psd) {
        return Err(CertificateError::CertificateInvalid { step: format!("Q{} is not PSD", i + 1) });
    }
    let lambda = cert.q[1].get(0, 0).clone();
    let q2_rest_zero = (0..6).all(|i| (0..6).all(|j| (i, j) == (0, 0) || cert.q[1].get(i, j).is_zero()));
    if !lambda.is_positive() || !q2_rest_zero {
        return Err(CertificateError::CertificateInvalid { step: "Q2 must be λ e1 e1ᵀ with λ > 0".into() });
    }
    let psd: [PsdCheck; 4] = checks.try_into().expect("four matrices");
    Ok(CertificateReport { identity_ok: true, psd, lambda, t_star: t_star() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn f_coefficients() {
        let f = f_polynomial();
        assert_eq!(f.coefficient((4, 0, 0)), Q13Scalar::one());
        assert_eq!(f.coefficient((3, 0, 0)), r(-1, 1));
        assert_eq!(f.coefficient((2, 0, 0)), r(33, 100));
        assert_eq!(f.coefficient((2, 1, 1)), r(1, 100));
        assert_eq!(f.coefficient((2, 1, 0)), r(1, 100));
        assert_eq!(f.coefficient((2, 0, 1)), r(1, 100));
        assert!(f.terms().all(|(_, c)| c.q == int(0)));
    }

    #[test]
    fn f_evaluation_consistent() {
        let f = f_polynomial();
        let t = t_star();
        let one = Q13Scalar::one();
        // direct substitution at a = b = 1: (1+a)(1+b) = 4, (1-a)(1-b) = 0
        let t2 = &t * &t;
        let direct = &(&(&(&t2 * &t2) - &(&t2 * &t)) + &(&r(36, 100) * &t2)) - &(&r(28, 500) * &t);
        let direct = &direct + &r(16, 5000);
        assert_eq!(f.eval(&t, &one, &one), direct);
    }

    #[test]
    fn published_matrices() {
        let c = sos_matrices();
        assert_eq!(*c.q[1].get(0, 0), Q13Scalar::from_ints(91, 31, 20250));
        assert_eq!(*c.q[0].get(4, 5), r(-1, 2));
        for q in &c.q {
            assert!(q.is_symmetric());
        }
        let k = sos_constants();
        // Q3 and Q4 are rank one: μν = θ²
        assert_eq!(&k.mu * &k.nu, &k.theta * &k.theta);
    }

    #[test]
    fn identity_holds_exactly() {
        let id = verify_sos_identity();
        assert!(id.ok, "{:?}", id.mismatch);
    }

    #[test]
    fn perturbed_identity_fails() {
        let mut c = sos_matrices();
        let v = c.q[0].get(1, 1) + &r(1, 1000);
        c.q[0].set(1, 1, v);
        let id = verify_sos_identity_for(&c);
        assert!(!id.ok);
        assert_eq!(id.mismatch.unwrap().monomial, (0, 2, 0));
        assert!(matches!(certify(&c), Err(CertificateError::CertificateInvalid { .. })));
    }

    #[test]
    fn psd_verdicts() {
        let c = sos_matrices();
        let q1 = ldl_check(&c.q[0]).unwrap();
        assert!(q1.psd);
        assert_eq!(q1.rank, 5);
        for q in &c.q[1..] {
            let chk = ldl_check(q).unwrap();
            assert!(chk.psd);
            assert_eq!(chk.rank, 1);
        }
        let mut bad = Q13Matrix::zeros(2);
        bad.set(0, 0, r(1, 1));
        bad.set(1, 1, r(-1, 1000));
        assert!(!verify_psd(&bad).unwrap());
        let mut zero_pivot = Q13Matrix::zeros(2);
        zero_pivot.set_sym(0, 1, r(1, 1));
        assert!(!verify_psd(&zero_pivot).unwrap());
        let mut asym = Q13Matrix::zeros(2);
        asym.set(0, 1, r(1, 1));
        assert_eq!(verify_psd(&asym), Err(CertificateError::NotSymmetric));
    }

    #[test]
    fn report_is_valid() {
        let rep = certify_upper_bound().unwrap();
        assert!(rep.valid());
        assert_eq!(rep.t_star, t_star());
    }

    #[test]
    fn identity_at_rational_points() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let cert = sos_matrices();
        let f = f_polynomial();
        let expanded = cert.expand();
        for _ in 0..20 {
            let mut pick = || Q13Scalar::rational(ratio(rng.gen_range(-50..=50), rng.gen_range(1..=17)));
            let (t, a, b) = (pick(), pick(), pick());
            // direct evaluation of the certificate, independent of the expansion
            let vals: Vec<Q13Scalar> = V_MONOMIALS
                .iter()
                .map(|&m| Q13Poly::monomial(m, Q13Scalar::one()).eval(&t, &a, &b))
                .collect();
            let form = |q: &Q13Matrix| -> Q13Scalar {
                (0..6).flat_map(|i| (0..6).map(move |j| (i, j))).map(|(i, j)| &(&vals[i] * q.get(i, j)) * &vals[j]).sum()
            };
            let one = Q13Scalar::one();
            let rhs = &(&(&form(&cert.q[0]) + &(&(&t - &t_star()) * &form(&cert.q[1])))
                + &(&(&one - &(&a * &a)) * &form(&cert.q[2])))
                + &(&(&one - &(&b * &b)) * &form(&cert.q[3]));
            assert_eq!(f.eval(&t, &a, &b), rhs);
            assert_eq!(expanded.eval(&t, &a, &b), rhs);
        }
    }

    #[test]
    fn q1_eigenvalues_match_published() {
        let q1 = sos_matrices().q[0].to_f64();
        let mut a = q1.clone();
        let (mut vals, _) = crate::linalg::jacobi_symmetric(&mut a, 6);
        vals.sort_by(|x, y| y.total_cmp(x));
        let published = [1.255390507, 0.020376547, 0.000059985, 0.000024167, 0.000015112];
        for (v, p) in vals.iter().zip(published) {
            assert!((v - p).abs() < 1e-9, "{v} vs {p}");
        }
        assert!(vals[5].abs() < 1e-12);
    }
}
