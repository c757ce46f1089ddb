//! Exact rational helpers on top of `num_rational::BigRational`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

/// Builds `num / den`. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RationalParseError {
    #[error("empty rational literal")]
    Empty,
    #[error("invalid integer `{0}`")]
    BadInteger(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Parses `num/den` or a bare integer. Decimal notation is rejected so that
/// round trips stay bit-exact.
pub fn parse_rational(s: &str) -> Result<Rational, RationalParseError> {
    let s = s.trim();
    if s.is_empty() {
        return Err(RationalParseError::Empty);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| RationalParseError::BadInteger(num.to_string()))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| RationalParseError::BadInteger(den.to_string()))?;
    if den.is_zero() {
        return Err(RationalParseError::ZeroDenominator(s.to_string()));
    }
    Ok(Rational::new(num, den))
}

/// `num/den` display; integers keep the explicit `/1`.
pub struct Frac<'a>(pub &'a Rational);

impl fmt::Display for Frac<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators or denominators: divide in the big-integer domain first.
        let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(900);
        let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Nearest rational with denominator `den` (ties rounded away from zero).
pub fn round_to_denominator(x: f64, den: i64) -> Rational {
    let scaled = (x * den as f64).round() as i64;
    ratio(scaled, den)
}

/// Rational approximation of `1 - 1/sqrt(2)` with denominator `den`, the
/// threshold between the two regimes of the noisy-bit game.
pub fn noisy_bit_threshold(den: i64) -> Rational {
    round_to_denominator(1.0 - std::f64::consts::FRAC_1_SQRT_2, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_reduce() {
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-3/-6").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(
            parse_rational("1/0"),
            Err(RationalParseError::ZeroDenominator("1/0".into()))
        );
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn canonical_zero() {
        let z = parse_rational("0/17").unwrap();
        assert_eq!(Frac(&z).to_string(), "0/1");
    }

    #[test]
    fn threshold_rounding() {
        assert_eq!(noisy_bit_threshold(1_000_000), ratio(292_893, 1_000_000));
    }
}
