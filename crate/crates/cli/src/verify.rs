//! The `verify` sweep: algebraic, analytic and spectral checks for every
//! root of every family up to a maximum degree.

use std::io::Write;
use std::path::PathBuf;

use num_traits::{One, Signed, Zero};
use spiked_qes::family::top_row_condition;
use spiked_qes::poly::{rat, to_f64};
use spiked_qes::spectrum::{gap_at, MATCH_TOL};
use spiked_qes::{
    coefficients_by_determinant, coefficients_by_recurrence, condition_polynomial,
    derivative_jump_exact, ode_residual, reduced_condition, solve, validate_solution,
    CoefficientTable, Parity, QesProblem, QesSolution, Rational, RationalPoly,
};

use crate::format::float;
use crate::golden::{compare, elimination_residual, GoldenTables};
use crate::{CliError, EXIT_FAILURE, EXIT_OK};

pub const RESIDUAL_TOL: f64 = 1e-9;
pub const ELIMINATION_TOL: f64 = 1e-9;
pub const RATIO_RANGE: (f64, f64) = (3.4, 4.6);
pub const CONVERGENCE_POINTS: [usize; 3] = [2000, 4000, 8000];

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub n_max: usize,
    pub golden: Option<PathBuf>,
    pub digits: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name,
            pass,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyRow {
    pub problem: QesProblem,
    pub root_index: usize,
    pub d: f64,
    pub checks: Vec<Check>,
}

impl VerifyRow {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct A3Diagnostic {
    pub minus_form_holds: bool,
    pub plus_form_holds: bool,
}

impl A3Diagnostic {
    pub fn passed(&self) -> bool {
        self.minus_form_holds && !self.plus_form_holds
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub a3: A3Diagnostic,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.a3.passed() && self.rows.iter().all(VerifyRow::passed)
    }
}

/// Family-level checks, shared by every root of the family.
fn family_checks(problem: QesProblem, table: &CoefficientTable, golden: &GoldenTables) -> Vec<Check> {
    let mut out = Vec::new();

    let routes_agree = problem.determinant_range().all(|k| {
        let index = match problem.parity {
            Parity::Even => k,
            Parity::Odd => k + 1,
        };
        let want = if index <= problem.degree {
            table.a(index)
        } else {
            table.closure().clone()
        };
        coefficients_by_determinant(problem, k).is_ok_and(|p| p == want)
    });
    out.push(Check::new("route", routes_agree, ""));

    let cond = condition_polynomial(problem);
    let cond_ok = top_row_condition(table).is_some_and(|top| cond.is_rational_multiple_of(&top))
        && table.closure().is_rational_multiple_of(&cond);
    out.push(Check::new("cond", cond_ok, ""));

    let status = reduced_condition(problem)
        .map(|r| compare(&r.poly, problem.parity, golden.row(problem.degree, problem.parity)));
    let (pass, detail) = match status {
        Ok(s) => (!s.is_failure(), s.as_str().to_string()),
        Err(e) => (false, e.to_string()),
    };
    out.push(Check::new("table", pass, detail));

    let rows = ode_residual(table);
    let identity = top_row_condition(table).is_some_and(|top| {
        rows.iter().enumerate().all(|(n, r)| {
            if n + 1 == problem.degree {
                *r == -&top
            } else {
                r.is_zero()
            }
        })
    });
    out.push(Check::new("residual_identity", identity, ""));
    out
}

/// Row `N - 1` of the residual at the root, divided by the sum of the
/// absolute values of its monomials in `d`.
pub fn scaled_residual(sol: &QesSolution) -> f64 {
    let row = top_row_condition(&sol.table).expect("degree >= 1");
    let d = &sol.d_value;
    let mut power = Rational::one();
    let mut scale = Rational::zero();
    for c in row.coeffs() {
        scale += (c * &power).abs();
        power *= d;
    }
    let value = to_f64(&row.eval(d).abs());
    if scale.is_zero() {
        value
    } else {
        value / to_f64(&scale)
    }
}

fn root_checks(sol: &QesSolution, golden: &GoldenTables) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let n = sol.problem.degree;
    let d = sol.d();

    let r = scaled_residual(sol);
    out.push(Check::new("residual", r < RESIDUAL_TOL, float(r)));

    if let Some(e) = golden
        .row(n, sol.problem.parity)
        .and_then(|row| row.elimination.as_ref())
    {
        let a_top = sol.coefficients[n];
        let v = elimination_residual(e, sol.problem.parity, d, a_top);
        let scale = 1.0 + (e.top as f64 * a_top).abs();
        let rel = v.abs() / scale;
        out.push(Check::new("elimination", rel < ELIMINATION_TOL, float(rel)));
    }

    let mut c1 = true;
    for order in 0..=1 {
        let (l, r) = derivative_jump_exact(sol, order)?;
        c1 &= l == r;
    }
    out.push(Check::new("c1", c1, ""));

    let report = validate_solution(sol, None)?;
    let m = report.matched.expect("validate_solution fills the match");
    out.push(Check::new("gap", m.gap < MATCH_TOL, float(m.gap)));
    out.push(Check::new(
        "index",
        m.index_matches_nodes,
        format!("eigenindex {} nodes {}", m.eigenindex, m.node_count),
    ));

    let gaps: Vec<f64> = CONVERGENCE_POINTS
        .iter()
        .map(|&p| gap_at(sol, m.eigenindex, p))
        .collect();
    let ratios: Vec<f64> = gaps.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = ratios
        .iter()
        .all(|r| (RATIO_RANGE.0..=RATIO_RANGE.1).contains(r));
    let detail = ratios.iter().map(|r| format!("{r:.3}")).collect::<Vec<_>>().join(",");
    out.push(Check::new("convergence", ok, detail));
    Ok(out)
}

/// Checks `a_3 = -2d / (6d^2 - 3)` on the roots of the `N = 3` even family,
/// and that the opposite sign does not hold, modulo the condition polynomial.
pub fn a3_diagnostic() -> Result<A3Diagnostic, CliError> {
    let problem = QesProblem::even(3);
    let table = coefficients_by_recurrence(problem);
    let cond = reduced_condition(problem)?.poly;
    let d = RationalPoly::x();
    let denom = RationalPoly::from_ints(&[-3, 0, 6]);
    let lhs = &table.a(3) * &denom;
    let two_d = d.scale(&rat(2));
    let holds = |rhs: &RationalPoly| (&lhs - rhs).remainder(&cond).map(|r| r.is_zero());
    Ok(A3Diagnostic {
        minus_form_holds: holds(&-&two_d)?,
        plus_form_holds: holds(&two_d)?,
    })
}

pub fn build_verify(opts: &VerifyOptions) -> Result<VerifyReport, CliError> {
    let golden = GoldenTables::load(opts.golden.as_deref())?;
    let mut rows = Vec::new();
    for degree in 1..=opts.n_max {
        for parity in [Parity::Even, Parity::Odd] {
            let problem = QesProblem::new(degree, parity);
            let table = coefficients_by_recurrence(problem);
            let shared = family_checks(problem, &table, &golden);
            for (i, sol) in solve(problem, opts.digits)?.iter().enumerate() {
                let mut checks = shared.clone();
                checks.extend(root_checks(sol, &golden)?);
                rows.push(VerifyRow {
                    problem,
                    root_index: i,
                    d: sol.d(),
                    checks,
                });
            }
        }
    }
    Ok(VerifyReport {
        rows,
        a3: a3_diagnostic()?,
    })
}

fn describe(c: &Check) -> String {
    let mark = if c.pass { "ok" } else { "FAIL" };
    if c.detail.is_empty() {
        format!("{}={mark}", c.name)
    } else {
        format!("{}={mark}({})", c.name, c.detail)
    }
}

pub fn run_verify(opts: &VerifyOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    if opts.n_max < 1 {
        return Err(CliError::Usage("--N-max must be at least 1".into()));
    }
    let report = build_verify(opts)?;
    for row in &report.rows {
        let checks = row.checks.iter().map(describe).collect::<Vec<_>>().join(" ");
        writeln!(
            out,
            "{} N={} {} root={} d={} {}",
            if row.passed() { "PASS" } else { "FAIL" },
            row.problem.degree,
            row.problem.parity,
            row.root_index,
            float(row.d),
            checks
        )?;
    }
    let a3 = &report.a3;
    writeln!(
        out,
        "{} a3-sign N=3 even: a_3 = -2d/(6d^2-3) {}; a_3 = +2d/(6d^2-3) {}",
        if a3.passed() { "PASS" } else { "FAIL" },
        if a3.minus_form_holds { "confirmed" } else { "NOT confirmed" },
        if a3.plus_form_holds { "holds" } else { "rejected" },
    )?;
    let failed = report.rows.iter().filter(|r| !r.passed()).count();
    writeln!(
        out,
        "summary: {} roots checked, {} failed",
        report.rows.len(),
        failed
    )?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAILURE })
}
