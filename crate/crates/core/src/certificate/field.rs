//! Exact arithmetic in `Q(√13)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{int, ratio, to_f64, Frac, Rational};

/// `p + q √13` with rational `p`, `q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Q13Scalar {
    pub p: Rational,
    pub q: Rational,
}

impl Q13Scalar {
    pub fn new(p: Rational, q: Rational) -> Self {
        Self { p, q }
    }

    pub fn rational(p: Rational) -> Self {
        Self { p, q: Rational::zero() }
    }

    /// `(p + q √13) / den` from integers.
    pub fn from_ints(p: i64, q: i64, den: i64) -> Self {
        Self { p: ratio(p, den), q: ratio(q, den) }
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    pub fn sqrt13() -> Self {
        Self { p: Rational::zero(), q: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    /// Exact sign. Since √13 is irrational, `p + q √13 = 0` only when both
    /// parts vanish; with opposite signs the larger of `p²` and `13 q²` wins.
    pub fn signum(&self) -> Ordering {
        let sp = self.p.cmp(&Rational::zero());
        let sq = self.q.cmp(&Rational::zero());
        match (sp, sq) {
            (s, Ordering::Equal) | (Ordering::Equal, s) => s,
            (a, b) if a == b => a,
            _ => {
                let p2 = &self.p * &self.p;
                let q2 = &self.q * &self.q * int(13);
                if p2 > q2 { sp } else { sq }
            }
        }
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn conjugate(&self) -> Self {
        Self { p: self.p.clone(), q: -&self.q }
    }

    /// `p² - 13 q²`.
    pub fn norm(&self) -> Rational {
        &self.p * &self.p - &self.q * &self.q * int(13)
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() { -self } else { self.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.p) + to_f64(&self.q) * 13f64.sqrt()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in Q(sqrt 13)");
        let n = self.norm();
        Self { p: &self.p / &n, q: -&self.q / &n }
    }
}

impl PartialOrd for Q13Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q13Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl fmt::Display for Q13Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt(13)", Frac(&self.p), Frac(&self.q))
    }
}

impl From<Rational> for Q13Scalar {
    fn from(p: Rational) -> Self {
        Self::rational(p)
    }
}

impl Add for &Q13Scalar {
    type Output = Q13Scalar;
    fn add(self, o: &Q13Scalar) -> Q13Scalar {
        Q13Scalar { p: &self.p + &o.p, q: &self.q + &o.q }
    }
}

impl Sub for &Q13Scalar {
    type Output = Q13Scalar;
    fn sub(self, o: &Q13Scalar) -> Q13Scalar {
        Q13Scalar { p: &self.p - &o.p, q: &self.q - &o.q }
    }
}

impl Mul for &Q13Scalar {
    type Output = Q13Scalar;
    fn mul(self, o: &Q13Scalar) -> Q13Scalar {
        Q13Scalar {
            p: &self.p * &o.p + &self.q * &o.q * int(13),
            q: &self.p * &o.q + &self.q * &o.p,
        }
    }
}

impl Div for &Q13Scalar {
    type Output = Q13Scalar;
    fn div(self, o: &Q13Scalar) -> Q13Scalar {
        self * &o.recip()
    }
}

impl Neg for &Q13Scalar {
    type Output = Q13Scalar;
    fn neg(self) -> Q13Scalar {
        Q13Scalar { p: -&self.p, q: -&self.q }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Q13Scalar {
            type Output = Q13Scalar;
            fn $m(self, o: Q13Scalar) -> Q13Scalar {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Q13Scalar {
    type Output = Q13Scalar;
    fn neg(self) -> Q13Scalar {
        -&self
    }
}

impl std::iter::Sum for Q13Scalar {
    fn sum<I: Iterator<Item = Q13Scalar>>(iter: I) -> Self {
        iter.fold(Q13Scalar::zero(), |a, b| &a + &b)
    }
}
