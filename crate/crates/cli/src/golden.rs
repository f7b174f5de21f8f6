//! Reference copies of the reduced condition polynomials for small `N`.

use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;
use spiked_qes::{Parity, RationalPoly};

use crate::CliError;

pub const BUILTIN: &str = include_str!("../data/golden_tables.toml");

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct Elimination {
    pub base: Vec<i64>,
    pub top: i64,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct GoldenRow {
    pub n: usize,
    pub poly: Vec<i64>,
    pub elimination: Option<Elimination>,
}

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct GoldenTables {
    pub even: Vec<GoldenRow>,
    pub odd: Vec<GoldenRow>,
}

impl GoldenTables {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("built-in golden tables parse")
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("golden tables: {e}")))
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::builtin()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn row(&self, n: usize, parity: Parity) -> Option<&GoldenRow> {
        let rows = match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        };
        rows.iter().find(|r| r.n == n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GoldenStatus {
    /// Equal up to overall sign.
    Match,
    /// Odd table only: agrees after `a -> -d` but not after `a -> d`.
    MatchOnlyUnderNegation,
    Mismatch,
    NotTabulated,
}

impl GoldenStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            GoldenStatus::Match => "match",
            GoldenStatus::MatchOnlyUnderNegation => "match-under-a=-d-only",
            GoldenStatus::Mismatch => "MISMATCH",
            GoldenStatus::NotTabulated => "-",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(
            self,
            GoldenStatus::Mismatch | GoldenStatus::MatchOnlyUnderNegation
        )
    }
}

fn up_to_sign(a: &RationalPoly, b: &RationalPoly) -> bool {
    a == b || a == &-b
}

/// Compares a reduced condition polynomial (in `d`) with a golden row.
/// Odd rows are in `a = -d`; they are compared after `a -> d`, and a match
/// that appears only after `a -> -d` is reported separately.
pub fn compare(computed: &RationalPoly, parity: Parity, row: Option<&GoldenRow>) -> GoldenStatus {
    let Some(row) = row else {
        return GoldenStatus::NotTabulated;
    };
    let golden = RationalPoly::from_ints(&row.poly);
    if up_to_sign(computed, &golden) {
        GoldenStatus::Match
    } else if parity == Parity::Odd && up_to_sign(computed, &golden.reflect()) {
        GoldenStatus::MatchOnlyUnderNegation
    } else {
        GoldenStatus::Mismatch
    }
}

/// Value of the elimination relation at shift `d` with top coefficient `a_top`.
pub fn elimination_residual(e: &Elimination, parity: Parity, d: f64, a_top: f64) -> f64 {
    let v = match parity {
        Parity::Even => d,
        Parity::Odd => -d,
    };
    let base = RationalPoly::from_ints(&e.base);
    base.eval_f64(v) + e.top as f64 * a_top
}

/// Integer coefficients in ascending order, e.g. `-5 + 2d^2`.
pub fn format_ascending(coeffs: &[BigInt], var: &str) -> String {
    let mut out = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c == &BigInt::from(0) {
            continue;
        }
        let neg = c < &BigInt::from(0);
        let mag = if neg { -c } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let one = mag == BigInt::from(1);
        match i {
            0 => out.push_str(&mag.to_string()),
            1 if one => out.push_str(var),
            1 => out.push_str(&format!("{mag}{var}")),
            _ if one => out.push_str(&format!("{var}^{i}")),
            _ => out.push_str(&format!("{mag}{var}^{i}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
