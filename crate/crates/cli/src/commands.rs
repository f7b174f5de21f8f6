use std::io::Write;
use std::path::PathBuf;

use serde::Serialize;
use spiked_qes::spectrum::potential;
use spiked_qes::{
    count_nodes, lowest_eigenvalues, reduced_condition, sample, solve, validate_solution, Parity,
    QesProblem, QesSolution, SpectrumRequest,
};

use crate::format::{decimal, float, sig10, sig10_text, Rounding};
use crate::golden::{compare, format_ascending, GoldenTables};
use crate::{CliError, EXIT_FAILURE, EXIT_OK, TOOL_VERSION};

pub const DEFAULT_DIGITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub degree: usize,
    pub parity: Parity,
    pub digits: u32,
    pub format: SolveFormat,
    pub verify: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct NumericCheck {
    pub nearest_eigenvalue: f64,
    pub gap: f64,
    pub eigenindex: usize,
    pub index_matches_nodes: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SolutionRecord {
    pub index: usize,
    pub d: f64,
    /// `d` rounded to `digits` decimals.
    pub d_decimal: String,
    /// Certified enclosure, rounded outward.
    pub bracket: [String; 2],
    pub coefficients: Vec<f64>,
    pub well_type: &'static str,
    pub nodes: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_check: Option<NumericCheck>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SolveConfig {
    #[serde(rename = "N")]
    pub degree: usize,
    pub parity: &'static str,
    pub digits: u32,
    pub verify: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SolveReport {
    pub tool_version: &'static str,
    pub config: SolveConfig,
    #[serde(rename = "N")]
    pub degree: usize,
    pub parity: &'static str,
    pub energy: u64,
    pub solutions: Vec<SolutionRecord>,
}

fn record(index: usize, sol: &QesSolution, digits: u32, verify: bool) -> Result<SolutionRecord, CliError> {
    let frac = digits as usize + 2;
    let numeric_check = if verify {
        let m = validate_solution(sol, None)?
            .matched
            .expect("validate_solution fills the match");
        Some(NumericCheck {
            nearest_eigenvalue: m.nearest_eigenvalue,
            gap: m.gap,
            eigenindex: m.eigenindex,
            index_matches_nodes: m.index_matches_nodes,
        })
    } else {
        None
    };
    Ok(SolutionRecord {
        index,
        d: sol.d(),
        d_decimal: decimal(&sol.d_value, digits as usize, Rounding::Nearest),
        bracket: [
            decimal(&sol.d_bracket.lo, frac, Rounding::Floor),
            decimal(&sol.d_bracket.hi, frac, Rounding::Ceil),
        ],
        coefficients: sol.coefficients.clone(),
        well_type: sol.well_type.as_str(),
        nodes: count_nodes(sol)?,
        numeric_check,
    })
}

pub fn build_solve_report(opts: &SolveOptions) -> Result<SolveReport, CliError> {
    if opts.digits == 0 {
        return Err(CliError::Usage("--digits must be positive".into()));
    }
    let problem = QesProblem::new(opts.degree, opts.parity);
    let solutions = solve(problem, opts.digits)?
        .iter()
        .enumerate()
        .map(|(i, s)| record(i, s, opts.digits, opts.verify))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolveReport {
        tool_version: TOOL_VERSION,
        config: SolveConfig {
            degree: opts.degree,
            parity: opts.parity.as_str(),
            digits: opts.digits,
            verify: opts.verify,
        },
        degree: opts.degree,
        parity: opts.parity.as_str(),
        energy: problem.energy(),
        solutions,
    })
}

fn csv_error(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn run_solve(opts: &SolveOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    let report = build_solve_report(opts)?;
    match opts.format {
        SolveFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        SolveFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record([
                "index", "N", "parity", "energy", "d", "bracket_lo", "bracket_hi", "well_type",
                "nodes", "coefficients", "nearest_eigenvalue", "gap", "eigenindex",
                "index_matches_nodes",
            ])
            .map_err(csv_error)?;
            for s in &report.solutions {
                let coeffs = s.coefficients.iter().map(|c| float(*c)).collect::<Vec<_>>().join(";");
                let (near, gap, idx, ok) = match &s.numeric_check {
                    Some(c) => (
                        float(c.nearest_eigenvalue),
                        float(c.gap),
                        c.eigenindex.to_string(),
                        c.index_matches_nodes.to_string(),
                    ),
                    None => Default::default(),
                };
                w.write_record([
                    s.index.to_string(),
                    report.degree.to_string(),
                    report.parity.to_string(),
                    report.energy.to_string(),
                    s.d_decimal.clone(),
                    s.bracket[0].clone(),
                    s.bracket[1].clone(),
                    s.well_type.to_string(),
                    s.nodes.to_string(),
                    coeffs,
                    near,
                    gap,
                    idx,
                    ok,
                ])
                .map_err(csv_error)?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TablesFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
pub struct TablesOptions {
    pub n_max: usize,
    pub format: TablesFormat,
    pub golden: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub degree: usize,
    pub variable: &'static str,
    /// Power of `d` stripped from the raw determinant.
    pub stripped_power: usize,
    /// Integer coefficients, ascending powers, as decimal strings.
    pub coefficients: Vec<String>,
    pub polynomial: String,
    pub golden: &'static str,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct TablesReport {
    pub tool_version: &'static str,
    #[serde(rename = "N_max")]
    pub n_max: usize,
    pub even: Vec<TableRow>,
    pub odd: Vec<TableRow>,
}

pub fn build_tables(n_max: usize, golden: &GoldenTables) -> Result<(TablesReport, Vec<String>), CliError> {
    let mut failures = Vec::new();
    let mut rows = |parity: Parity| -> Result<Vec<TableRow>, CliError> {
        let var = match parity {
            Parity::Even => "d",
            Parity::Odd => "a",
        };
        (2..=n_max)
            .map(|n| {
                let reduced = reduced_condition(QesProblem::new(n, parity))?;
                let coeffs = reduced.integer_coeffs();
                let status = compare(&reduced.poly, parity, golden.row(n, parity));
                if status.is_failure() {
                    failures.push(format!(
                        "N={n} {parity}: computed {} vs golden {:?} ({})",
                        format_ascending(&coeffs, var),
                        golden.row(n, parity).map(|r| &r.poly),
                        status.as_str()
                    ));
                }
                Ok(TableRow {
                    degree: n,
                    variable: var,
                    stripped_power: reduced.stripped_zero_multiplicity,
                    polynomial: format_ascending(&coeffs, var),
                    coefficients: coeffs.iter().map(ToString::to_string).collect(),
                    golden: status.as_str(),
                })
            })
            .collect()
    };
    let even = rows(Parity::Even)?;
    let odd = rows(Parity::Odd)?;
    Ok((
        TablesReport {
            tool_version: TOOL_VERSION,
            n_max,
            even,
            odd,
        },
        failures,
    ))
}

fn write_table_text(out: &mut dyn Write, title: &str, rows: &[TableRow]) -> std::io::Result<()> {
    writeln!(out, "{title}")?;
    writeln!(out, "{:>3}  {:>8}  {:<48}  golden", "N", "stripped", "polynomial")?;
    for r in rows {
        writeln!(
            out,
            "{:>3}  {:>8}  {:<48}  {}",
            r.degree,
            format!("{}^{}", r.variable, r.stripped_power),
            r.polynomial,
            r.golden
        )?;
    }
    Ok(())
}

pub fn run_tables(opts: &TablesOptions, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    if opts.n_max < 2 {
        return Err(CliError::Usage("--N-max must be at least 2".into()));
    }
    let golden = GoldenTables::load(opts.golden.as_deref())?;
    let (report, failures) = build_tables(opts.n_max, &golden)?;
    match opts.format {
        TablesFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, &report).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        TablesFormat::Text => {
            write_table_text(
                out,
                "Even parity: reduced condition polynomials P(d), ascending powers",
                &report.even,
            )?;
            writeln!(out)?;
            write_table_text(
                out,
                "Odd parity: reduced condition polynomials Q(a), a = -d, ascending powers",
                &report.odd,
            )?;
        }
    }
    for f in &failures {
        writeln!(err, "golden mismatch: {f}")?;
    }
    Ok(if failures.is_empty() { EXIT_OK } else { EXIT_FAILURE })
}

#[derive(Clone, Debug)]
pub struct WavefunctionOptions {
    pub degree: usize,
    pub parity: Parity,
    pub root_index: usize,
    pub x_max: f64,
    pub points: usize,
    pub digits: u32,
}

pub fn run_wavefunction(opts: &WavefunctionOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    let sols = solve(QesProblem::new(opts.degree, opts.parity), opts.digits)?;
    let sol = sols.get(opts.root_index).ok_or_else(|| {
        CliError::Usage(format!(
            "--root-index {} out of range: N={} {} has {} solution(s)",
            opts.root_index,
            opts.degree,
            opts.parity,
            sols.len()
        ))
    })?;
    let grid = sample(sol, opts.x_max, opts.points)?;
    let d = sol.d();
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["x", "psi", "V"]).map_err(csv_error)?;
    for (x, psi) in grid.xs.iter().zip(&grid.psi_normalized) {
        w.write_record([float(*x), float(*psi), float(potential(*x, d))])
            .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumFormat {
    Json,
    Csv,
}

#[derive(Clone, Debug)]
pub struct SpectrumOptions {
    pub d: f64,
    pub half_width: Option<f64>,
    pub points: usize,
    pub count: usize,
    pub format: SpectrumFormat,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SpectrumConfig {
    pub d: f64,
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
    pub k: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SpectrumOutput {
    pub tool_version: &'static str,
    pub config: SpectrumConfig,
    /// Interior points actually used (forced odd).
    pub points: usize,
    pub h: f64,
    pub eigenvalues: Vec<f64>,
}

pub fn run_spectrum(opts: &SpectrumOptions, out: &mut dyn Write) -> Result<i32, CliError> {
    let mut req = SpectrumRequest::new(opts.d, opts.count);
    if let Some(l) = opts.half_width {
        req.half_width = l;
    }
    req.points = opts.points;
    let report = lowest_eigenvalues(&req)?;
    match opts.format {
        SpectrumFormat::Json => {
            let payload = SpectrumOutput {
                tool_version: TOOL_VERSION,
                config: SpectrumConfig {
                    d: opts.d,
                    half_width: req.half_width,
                    n: opts.points,
                    k: opts.count,
                },
                points: report.points,
                h: report.h,
                eigenvalues: report.eigenvalues.iter().map(|&e| sig10(e)).collect(),
            };
            serde_json::to_writer_pretty(&mut *out, &payload).map_err(std::io::Error::from)?;
            writeln!(out)?;
        }
        SpectrumFormat::Csv => {
            let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
            w.write_record(["index", "eigenvalue"]).map_err(csv_error)?;
            for (i, e) in report.eigenvalues.iter().enumerate() {
                w.write_record([i.to_string(), sig10_text(*e)]).map_err(csv_error)?;
            }
            w.flush()?;
        }
    }
    Ok(EXIT_OK)
}
