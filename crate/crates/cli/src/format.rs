use lssd_core::rational::Frac;
use lssd_core::Rational;

/// Fixed-point with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn frac(r: &Rational) -> String {
    Frac(r).to_string()
}
