//! Locale-independent number formatting.

use num_bigint::BigInt;
use num_traits::Signed;
use spiked_qes::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    Floor,
    Ceil,
    Nearest,
}

/// Exact decimal expansion of `x` with `frac` fractional digits.
pub fn decimal(x: &Rational, frac: usize, rounding: Rounding) -> String {
    let scale = BigInt::from(10).pow(frac as u32);
    let scaled = x * Rational::from_integer(scale);
    let int = match rounding {
        Rounding::Floor => scaled.floor(),
        Rounding::Ceil => scaled.ceil(),
        Rounding::Nearest => scaled.round(),
    }
    .to_integer();
    let neg = int.is_negative();
    let digits = int.abs().to_string();
    let digits = if digits.len() <= frac {
        format!("{}{}", "0".repeat(frac + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (whole, fraction) = digits.split_at(digits.len() - frac);
    let sign = if neg { "-" } else { "" };
    if frac == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{fraction}")
    }
}

/// Shortest round-trip text, switching to exponent form for tiny or huge
/// magnitudes. Negative zero prints as `0`.
pub fn float(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let a = x.abs();
    if (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// `x` rounded to 10 significant digits.
pub fn sig10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().expect("formatted float parses")
}

/// Text form with 10 significant digits.
pub fn sig10_text(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    // Magnitude after rounding, so 9.9999999999 becomes 10.00000000.
    let y = sig10(x);
    let mag = y.abs().log10().floor() as i32;
    if (-4..15).contains(&mag) {
        let decimals = (9 - mag).max(0) as usize;
        format!("{y:.decimals$}")
    } else {
        format!("{x:.9e}")
    }
}
