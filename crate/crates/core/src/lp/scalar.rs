//! Tableau entries: machine-word fractions with an arbitrary-precision
//! fallback. Values are exact either way; the small form is only a faster
//! encoding of the same rational.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone)]
pub(crate) enum Scalar {
    /// `n / d` in lowest terms with `d > 0`.
    Small(i64, i64),
    Big(Rational),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Small(0, 1);
    pub const ONE: Scalar = Scalar::Small(1, 1);

    fn from_i128(n: i128, d: i128) -> Scalar {
        debug_assert!(d > 0);
        let (n, d) = if d == 1 || n == 0 {
            (n, if n == 0 { 1 } else { d })
        } else {
            let g = n.gcd(&d);
            (n / g, d / g)
        };
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(Rational::new(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: Rational) -> Scalar {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar::Small(n, d),
            _ => Scalar::Big(r),
        }
    }

    pub fn from_rational(r: &Rational) -> Scalar {
        Self::from_big(r.clone())
    }

    pub fn to_rational(&self) -> Rational {
        match self {
            Scalar::Small(n, d) => Rational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Scalar::Big(r) => r.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n == 0,
            Scalar::Big(r) => r.is_zero(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Small(n, _) => *n > 0,
            Scalar::Big(r) => r.is_positive(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) if *n != i64::MIN => Scalar::Small(-n, *d),
            _ => Self::from_big(-self.to_rational()),
        }
    }

    pub fn recip(&self) -> Scalar {
        match self {
            Scalar::Small(n, d) if *n != 0 => {
                let (n, d) = (*n as i128, *d as i128);
                Self::from_i128(d * n.signum(), n.abs())
            }
            _ => Self::from_big(self.to_rational().recip()),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Scalar::ZERO;
                }
                Self::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Self::from_big(self.to_rational() * o.to_rational()),
        }
    }

    pub fn div(&self, o: &Scalar) -> Scalar {
        self.mul(&o.recip())
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Self::from_i128(a - c, b)
                } else {
                    Self::from_i128(a * d - c * b, b * d)
                }
            }
            _ => Self::from_big(self.to_rational() - o.to_rational()),
        }
    }

    /// `self -= f * p`.
    pub fn sub_product(&mut self, f: &Scalar, p: &Scalar) {
        *self = self.sub(&f.mul(p));
    }
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Scalar {
    fn cmp(&self, o: &Self) -> Ordering {
        match (self, o) {
            (Scalar::Small(a, b), Scalar::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_rational().cmp(&o.to_rational()),
        }
    }
}
