//! QES families: coefficient polynomials `a_k(d)`, condition polynomials and
//! assembled solutions.
//!
//! Substituting `psi = exp(-x^2/2 + d x) * sum a_k x^k` into
//! `-psi'' + (x - d)^2 psi = E psi` on `x >= 0` gives the three-term rows
//!
//! ```text
//! (E - 1 - 2n) a_n + 2d (n+1) a_{n+1} + (n+1)(n+2) a_{n+2} = 0,   n = 0..=N
//! ```
//!
//! The `n = N` row fixes `E = 2N + 1`. Rows `0..=N-2` determine `a_2..a_N`
//! from the parity seed, and row `N - 1` (equivalently `a_{N+1} = 0`) is a
//! polynomial condition on `d`.
//!
//! Two independent routes produce the coefficients: the forward recurrence
//! and closed-form tridiagonal continuants. The continuant of order `N + 1`
//! (even) or `N` (odd) is the condition polynomial.
//!
//! At `(N = 3, even)` the recurrence gives, on every QES root,
//! `a_2 = 2d^2 / (2d^2 - 1)` and `a_3 = -2d / (6d^2 - 3)`; the negative sign
//! follows from the `n = 2` row `a_2 + 3d a_3 = 0`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{rat, to_f64, Rational, RationalPoly};
use crate::roots::{decimal_tolerance, isolate_real_roots, narrow_bracket, RootBracket};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    /// `+1` for even, `-1` for odd: `psi(-x) = sign * psi(x)`.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            other => Err(format!("unknown parity {other:?}")),
        }
    }
}

/// One QES family: polynomial degree `N` and wavefunction parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QesProblem {
    pub degree: usize,
    pub parity: Parity,
}

impl QesProblem {
    pub fn new(degree: usize, parity: Parity) -> Self {
        QesProblem { degree, parity }
    }

    pub fn even(degree: usize) -> Self {
        Self::new(degree, Parity::Even)
    }

    pub fn odd(degree: usize) -> Self {
        Self::new(degree, Parity::Odd)
    }

    /// `E = 2N + 1`.
    pub fn energy(&self) -> u64 {
        2 * self.degree as u64 + 1
    }

    /// Families whose only candidate shift is the harmonic oscillator `d = 0`
    /// (or that have no candidate at all).
    pub fn is_degenerate(&self) -> bool {
        matches!(
            (self.degree, self.parity),
            (0, Parity::Even) | (0, Parity::Odd) | (1, Parity::Odd)
        )
    }

    /// Valid determinant indices `k` for [`coefficients_by_determinant`].
    pub fn determinant_range(&self) -> std::ops::RangeInclusive<usize> {
        match self.parity {
            Parity::Even => 1..=self.degree + 1,
            Parity::Odd => 1..=self.degree,
        }
    }
}

impl fmt::Display for QesProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={}, {}", self.degree, self.parity)
    }
}

fn d_poly() -> RationalPoly {
    RationalPoly::x()
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Coefficients `a_0..=a_N` as exact polynomials in `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    pub problem: QesProblem,
    coeffs: Vec<RationalPoly>,
    /// `a_{N+1}` from one more recurrence step; vanishes exactly on QES shifts.
    closure: RationalPoly,
}

impl CoefficientTable {
    pub fn coeffs(&self) -> &[RationalPoly] {
        &self.coeffs
    }

    pub fn a(&self, k: usize) -> RationalPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `a_{N+1}` obtained by extending the recurrence past the top row.
    pub fn closure(&self) -> &RationalPoly {
        &self.closure
    }

    /// Evaluates `a_0..=a_N` at an exact shift.
    pub fn eval_at(&self, d: &Rational) -> Vec<Rational> {
        self.coeffs.iter().map(|a| a.eval(d)).collect()
    }
}

/// Runs the recurrence from the parity seed up to and including `a_last`.
fn run_recurrence(problem: QesProblem, last: usize) -> Vec<RationalPoly> {
    let n_deg = problem.degree as i64;
    let d = d_poly();
    let mut a: Vec<RationalPoly> = match problem.parity {
        Parity::Even => vec![RationalPoly::one(), -&d],
        Parity::Odd => vec![RationalPoly::zero(), RationalPoly::one()],
    };
    let mut n = 0usize;
    while a.len() <= last {
        let ni = n as i64;
        // (2N - 2n) a_n + 2d (n+1) a_{n+1} + (n+1)(n+2) a_{n+2} = 0
        let lhs = &a[n].scale(&rat(2 * n_deg - 2 * ni))
            + &(&d * &a[n + 1]).scale(&rat(2 * (ni + 1)));
        a.push(lhs.scale(&-Rational::new(BigInt::one(), BigInt::from((ni + 1) * (ni + 2)))));
        n += 1;
    }
    a.truncate(last + 1);
    a
}

/// Forward recurrence from the parity seed, exact in `d`.
pub fn coefficients_by_recurrence(problem: QesProblem) -> CoefficientTable {
    let mut all = run_recurrence(problem, problem.degree + 1);
    let closure = all.pop().expect("recurrence yields N + 2 entries");
    CoefficientTable {
        problem,
        coeffs: all,
        closure,
    }
}

/// Leading principal minors `D_0..=D_k` of the tridiagonal matrix encoding
/// the recurrence, by the continuant three-term rule.
///
/// Even parity (first row anomalous):
/// `D_1 = d`, `D_2 = 2d D_1 - 2N D_0`,
/// `D_j = 2(j-1) d D_{j-1} - 2(N-j+2)(j-1)(j-2) D_{j-2}` for `j >= 3`.
///
/// Odd parity: `D_1 = 2d`, `D_j = 2j d D_{j-1} - 2(N-j+1)(j-1) j D_{j-2}`.
pub fn continuants(problem: QesProblem, k: usize) -> Vec<RationalPoly> {
    let n = problem.degree as i64;
    let d = d_poly();
    let mut minors = vec![RationalPoly::one()];
    for j in 1..=k {
        let ji = j as i64;
        let next = match (problem.parity, j) {
            (Parity::Even, 1) => d.clone(),
            (Parity::Even, 2) => {
                &(&d * &minors[1]).scale(&rat(2)) - &minors[0].scale(&rat(2 * n))
            }
            (Parity::Even, _) => {
                &(&d * &minors[j - 1]).scale(&rat(2 * (ji - 1)))
                    - &minors[j - 2].scale(&rat(2 * (n - ji + 2) * (ji - 1) * (ji - 2)))
            }
            (Parity::Odd, 1) => d.scale(&rat(2)),
            (Parity::Odd, _) => {
                &(&d * &minors[j - 1]).scale(&rat(2 * ji))
                    - &minors[j - 2].scale(&rat(2 * (n - ji + 1) * (ji - 1) * ji))
            }
        };
        minors.push(next);
    }
    minors
}

/// Determinant of the `k x k` tridiagonal matrix of the family.
pub fn determinant(problem: QesProblem, k: usize) -> RationalPoly {
    continuants(problem, k).pop().expect("at least D_0")
}

/// Closed-form coefficient from a continuant.
///
/// Even parity returns `a_k = (-1)^k / (k! (k-1)!) det P_k` for `1 <= k <= N+1`.
/// Odd parity returns `a_{k+1} = (-1)^k / ((k+1)! k!) det Q_k` for `1 <= k <= N`.
/// The top index reproduces the closure `a_{N+1}`.
pub fn coefficients_by_determinant(problem: QesProblem, k: usize) -> Result<RationalPoly> {
    let range = problem.determinant_range();
    if !range.contains(&k) {
        return Err(Error::IndexOutOfRange {
            k,
            min: *range.start(),
            max: *range.end(),
        });
    }
    let denom = match problem.parity {
        Parity::Even => factorial(k) * factorial(k - 1),
        Parity::Odd => factorial(k + 1) * factorial(k),
    };
    let sign = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    Ok(determinant(problem, k).scale(&Rational::new(sign, denom)))
}

/// Raw condition polynomial whose nonzero real roots are the QES shifts.
///
/// Degenerate families return the polynomial `d`, so their only root is the
/// excluded harmonic-oscillator shift.
pub fn condition_polynomial(problem: QesProblem) -> RationalPoly {
    if problem.is_degenerate() {
        return d_poly();
    }
    let k = match problem.parity {
        Parity::Even => problem.degree + 1,
        Parity::Odd => problem.degree,
    };
    determinant(problem, k)
}

/// Condition polynomial with content and the factor `d^m` removed.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedCondition {
    /// Primitive, positive leading coefficient, only even powers of `d`.
    pub poly: RationalPoly,
    pub stripped_zero_multiplicity: usize,
}

impl ReducedCondition {
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        self.poly
            .integer_coeffs()
            .expect("primitive part has integer coefficients")
    }

    /// Real roots are isolated; the rest are non-real.
    pub fn non_real_root_count(&self) -> Result<usize> {
        let real: usize = isolate_real_roots(&self.poly)?
            .iter()
            .map(|b| b.multiplicity)
            .sum();
        Ok(self.poly.degree().unwrap_or(0) - real)
    }
}

pub fn reduced_condition(problem: QesProblem) -> Result<ReducedCondition> {
    let raw = condition_polynomial(problem);
    if raw.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (m, stripped) = raw.strip_x_power();
    let (_, poly) = stripped.content_split()?;
    debug_assert!(poly.is_even(), "reduced condition must be even in d");
    Ok(ReducedCondition {
        poly,
        stripped_zero_multiplicity: m,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WellType {
    /// `d < 0`.
    SingleWell,
    /// `d > 0`.
    DoubleWell,
}

impl WellType {
    pub fn of(d: &Rational) -> Self {
        if d.is_negative() {
            WellType::SingleWell
        } else {
            WellType::DoubleWell
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WellType::SingleWell => "single_well",
            WellType::DoubleWell => "double_well",
        }
    }
}

/// One admissible shift with its energy and wavefunction coefficients.
#[derive(Clone, Debug)]
pub struct QesSolution {
    pub problem: QesProblem,
    pub energy: u64,
    /// Certified bracket on the reduced condition polynomial, narrowed below
    /// `10^(-digits)`.
    pub d_bracket: RootBracket,
    pub d_value: Rational,
    /// `a_0..=a_N` at `d_value`, rounded to `f64`.
    pub coefficients: Vec<f64>,
    pub well_type: WellType,
    pub digits: u32,
    pub table: CoefficientTable,
}

impl QesSolution {
    pub fn d(&self) -> f64 {
        to_f64(&self.d_value)
    }

    /// `a_0..=a_N` evaluated exactly at the rational shift.
    pub fn exact_coefficients(&self) -> Vec<Rational> {
        self.table.eval_at(&self.d_value)
    }

    /// Same solution recomputed at a higher precision.
    pub fn refined(&self, digits: u32) -> Result<QesSolution> {
        let reduced = reduced_condition(self.problem)?;
        build_solution(self.problem, &reduced.poly, &self.d_bracket, digits, self.table.clone())
    }
}

fn build_solution(
    problem: QesProblem,
    condition: &RationalPoly,
    bracket: &RootBracket,
    digits: u32,
    table: CoefficientTable,
) -> Result<QesSolution> {
    // Narrow until the bracket is below 10^-digits and the condition value
    // at the midpoint is below 10^(1-digits) times the coefficient sum.
    let l1: Rational = condition.coeffs().iter().map(Signed::abs).sum();
    let budget = &l1 * decimal_tolerance(digits) * rat(10);
    let mut extra = 0;
    let (narrow, d_value) = loop {
        let (narrow, exact) = narrow_bracket(condition, bracket, digits + extra)?;
        let d_value = exact.unwrap_or_else(|| narrow.midpoint());
        if condition.eval(&d_value).abs() < budget {
            break (narrow, d_value);
        }
        extra += 2;
    };
    let coefficients = table.eval_at(&d_value).iter().map(to_f64).collect();
    Ok(QesSolution {
        problem,
        energy: problem.energy(),
        well_type: WellType::of(&d_value),
        d_bracket: narrow,
        d_value,
        coefficients,
        digits,
        table,
    })
}

/// All QES solutions of a family, sorted by ascending `d`.
pub fn solve(problem: QesProblem, digits: u32) -> Result<Vec<QesSolution>> {
    if problem.is_degenerate() {
        return Ok(Vec::new());
    }
    let reduced = reduced_condition(problem)?;
    let table = coefficients_by_recurrence(problem);
    let mut out = Vec::new();
    for bracket in isolate_real_roots(&reduced.poly)? {
        let sol = build_solution(problem, &reduced.poly, &bracket, digits, table.clone())?;
        // d^m was stripped exactly, so no remaining root is the trivial d = 0.
        debug_assert!(!sol.d_value.is_zero());
        debug_assert!(!table.a(problem.degree).eval(&sol.d_value).is_zero());
        out.push(sol);
    }
    Ok(out)
}

/// Coefficients of `R(x) = -p'' + 2(x - d) p' + (1 - E) p` for `n = 0..=N`,
/// each a polynomial in `d`.
///
/// Rows `n <= N - 2` and `n = N` vanish identically; row `N - 1` equals
/// `-(2 a_{N-1} + 2dN a_N)`, a multiple of the condition polynomial.
pub fn ode_residual(table: &CoefficientTable) -> Vec<RationalPoly> {
    let n_deg = table.problem.degree;
    let e = table.problem.energy() as i64;
    let d = d_poly();
    (0..=n_deg)
        .map(|n| {
            let ni = n as i64;
            let a_n = table.a(n);
            let a_n1 = if n < n_deg { table.a(n + 1) } else { RationalPoly::zero() };
            let a_n2 = if n + 1 < n_deg { table.a(n + 2) } else { RationalPoly::zero() };
            let second = a_n2.scale(&rat(-(ni + 2) * (ni + 1)));
            let drift = &a_n.scale(&rat(2 * ni)) - &(&d * &a_n1).scale(&rat(2 * (ni + 1)));
            &(&second + &drift) + &a_n.scale(&rat(1 - e))
        })
        .collect()
}

/// `2 a_{N-1} + 2dN a_N`, the top-row condition (requires `N >= 1`).
pub fn top_row_condition(table: &CoefficientTable) -> Option<RationalPoly> {
    let n = table.problem.degree;
    if n == 0 {
        return None;
    }
    let d = d_poly();
    Some(&table.a(n - 1).scale(&rat(2)) + &(&d * &table.a(n)).scale(&rat(2 * n as i64)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p(c: &[i64]) -> RationalPoly {
        RationalPoly::from_ints(c)
    }

    fn pr(c: &[(i64, i64)]) -> RationalPoly {
        RationalPoly::new(c.iter().map(|&(n, d)| ratio(n, d)).collect())
    }

    #[test]
    fn energy_is_derived() {
        assert_eq!(QesProblem::even(0).energy(), 1);
        assert_eq!(QesProblem::odd(3).energy(), 7);
    }

    #[test]
    fn recurrence_examples() {
        let t = coefficients_by_recurrence(QesProblem::even(3));
        assert_eq!(t.a(2), p(&[-3, 0, 1]));
        for n in 1..10 {
            let t = coefficients_by_recurrence(QesProblem::even(n));
            assert_eq!(t.a(0), p(&[1]));
            assert_eq!(t.a(1), p(&[0, -1]));
            if n >= 2 {
                assert_eq!(t.a(2), p(&[-(n as i64), 0, 1]));
            }
        }
        let t = coefficients_by_recurrence(QesProblem::odd(3));
        assert_eq!(t.a(2), p(&[0, -1]));
        assert_eq!(t.a(3), pr(&[(-2, 3), (0, 1), (2, 3)]));
    }

    #[test]
    fn odd_seed_emerges_from_first_row() {
        for n in 2..8 {
            let t = coefficients_by_recurrence(QesProblem::odd(n));
            assert!(t.a(0).is_zero());
            assert_eq!(t.a(1), p(&[1]));
            assert_eq!(t.a(2), p(&[0, -1]));
        }
    }

    #[test]
    fn recurrence_rows_hold() {
        for problem in [QesProblem::even(6), QesProblem::odd(6)] {
            let t = coefficients_by_recurrence(problem);
            let n_deg = problem.degree as i64;
            for n in 0..problem.degree - 1 {
                let ni = n as i64;
                let row = &(&t.a(n).scale(&rat(2 * n_deg - 2 * ni))
                    + &(&p(&[0, 1]) * &t.a(n + 1)).scale(&rat(2 * (ni + 1))))
                    + &t.a(n + 2).scale(&rat((ni + 1) * (ni + 2)));
                assert!(row.is_zero(), "row {n} of {problem}");
            }
        }
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(
            coefficients_by_determinant(QesProblem::even(4), 1).unwrap(),
            p(&[0, -1])
        );
        assert_eq!(determinant(QesProblem::even(2), 3), p(&[0, -20, 0, 8]));
        assert_eq!(
            coefficients_by_determinant(QesProblem::even(2), 3).unwrap(),
            p(&[0, -20, 0, 8]).scale(&ratio(-1, 12))
        );
        assert_eq!(determinant(QesProblem::odd(2), 2), p(&[-4, 0, 8]));
        assert_eq!(
            coefficients_by_determinant(QesProblem::odd(2), 2).unwrap(),
            pr(&[(-1, 3), (0, 1), (2, 3)])
        );
    }

    #[test]
    fn determinant_index_out_of_range() {
        assert_eq!(
            coefficients_by_determinant(QesProblem::even(2), 4),
            Err(Error::IndexOutOfRange { k: 4, min: 1, max: 3 })
        );
        assert!(coefficients_by_determinant(QesProblem::even(2), 0).is_err());
        assert!(coefficients_by_determinant(QesProblem::odd(0), 1).is_err());
    }

    #[test]
    fn condition_examples() {
        assert_eq!(condition_polynomial(QesProblem::even(2)), p(&[0, -20, 0, 8]));
        assert_eq!(
            condition_polynomial(QesProblem::even(3)),
            p(&[3, 0, -9, 0, 2]).scale(&rat(24))
        );
        assert_eq!(
            condition_polynomial(QesProblem::odd(3)),
            p(&[0, -3, 0, 2]).scale(&rat(24))
        );
        for deg in [QesProblem::even(0), QesProblem::odd(0), QesProblem::odd(1)] {
            assert_eq!(condition_polynomial(deg), p(&[0, 1]));
        }
    }

    #[test]
    fn reduced_examples() {
        let r = reduced_condition(QesProblem::even(2)).unwrap();
        assert_eq!(r.poly, p(&[-5, 0, 2]));
        assert_eq!(r.stripped_zero_multiplicity, 1);
        assert_eq!(
            reduced_condition(QesProblem::even(4)).unwrap().poly,
            p(&[27, 0, -28, 0, 4])
        );
        assert_eq!(
            reduced_condition(QesProblem::odd(5)).unwrap().poly,
            p(&[15, 0, -20, 0, 4])
        );
    }

    #[test]
    fn solve_n1_even() {
        let sols = solve(QesProblem::even(1), 12).unwrap();
        assert_eq!(sols.len(), 2);
        assert_eq!(sols[0].d_value, rat(-1));
        assert_eq!(sols[1].d_value, rat(1));
        assert_eq!(sols[0].energy, 3);
        assert_eq!(sols[0].coefficients, vec![1.0, 1.0]);
        assert_eq!(sols[0].well_type, WellType::SingleWell);
        assert_eq!(sols[1].well_type, WellType::DoubleWell);
    }

    #[test]
    fn solve_degenerate_is_empty() {
        assert!(solve(QesProblem::even(0), 12).unwrap().is_empty());
        assert!(solve(QesProblem::odd(0), 12).unwrap().is_empty());
        assert!(solve(QesProblem::odd(1), 12).unwrap().is_empty());
    }

    #[test]
    fn solve_n3_even_quadruplet() {
        let sols = solve(QesProblem::even(3), 14).unwrap();
        let ds: Vec<f64> = sols.iter().map(QesSolution::d).collect();
        let big = ((9.0 + 57f64.sqrt()) / 4.0).sqrt();
        let small = ((9.0 - 57f64.sqrt()) / 4.0).sqrt();
        let want = [-big, -small, small, big];
        for (got, want) in ds.iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        // frozen from the quadratic formula on 2t^2 - 9t + 3, t = d^2
        assert!((big - 2.034_074_386_254_762).abs() < 1e-14);
        assert!((small - 0.602_114_101_464_425_6).abs() < 1e-14);
    }

    #[test]
    fn n3_even_a3_sign_resolved_by_recurrence() {
        // a_3 = -2d / (6d^2 - 3) on every root; +2d / (6d^2 - 3) fails.
        for sol in solve(QesProblem::even(3), 20).unwrap() {
            let d = sol.d();
            let a3 = sol.coefficients[3];
            assert!((a3 + 2.0 * d / (6.0 * d * d - 3.0)).abs() < 1e-12);
            assert!((a3 - 2.0 * d / (6.0 * d * d - 3.0)).abs() > 1e-3);
            let a2 = sol.coefficients[2];
            assert!((a2 - 2.0 * d * d / (2.0 * d * d - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_examples() {
        let t = coefficients_by_recurrence(QesProblem::even(2));
        let r = ode_residual(&t);
        assert!(r[0].is_zero());
        assert!(r[2].is_zero());
        assert!(r[1].is_rational_multiple_of(&p(&[0, -20, 0, 8])));
        assert_eq!(r[1], -&top_row_condition(&t).unwrap());

        let t = coefficients_by_recurrence(QesProblem::even(1));
        for c in ode_residual(&t) {
            assert!(c.eval(&rat(-1)).is_zero());
        }
    }

    #[test]
    fn reflection_symmetry_of_table() {
        for problem in [QesProblem::even(5), QesProblem::odd(5)] {
            let t = coefficients_by_recurrence(problem);
            for (n, a) in t.coeffs().iter().enumerate() {
                // a_n(-d) = (-1)^n a_n(d) for even parity, (-1)^(n+1) for odd
                let flip = (n + usize::from(problem.parity == Parity::Odd)) % 2 == 1;
                let want = if flip { -a } else { a.clone() };
                assert_eq!(a.reflect(), want);
            }
        }
    }

    #[test]
    fn non_real_roots_counted_by_degree_deficit() {
        let r = reduced_condition(QesProblem::even(3)).unwrap();
        assert_eq!(r.non_real_root_count().unwrap(), 0);
    }
}
