use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qes_cli::commands::{
    run_solve, run_spectrum, run_tables, run_wavefunction, SolveFormat, SolveOptions,
    SpectrumFormat, SpectrumOptions, TablesFormat, TablesOptions, WavefunctionOptions,
    DEFAULT_DIGITS,
};
use qes_cli::verify::{run_verify, VerifyOptions};
use qes_cli::CliError;
use spiked_qes::spectrum::DEFAULT_POINTS;
use spiked_qes::Parity;

#[derive(Parser)]
#[command(name = "qes", version, about = "Exact QES solutions for the spiked harmonic well V(x) = (|x| - d)^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitFormat {
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Solve for the admissible shifts d at E = 2N + 1.
    Solve {
        #[arg(long = "N")]
        degree: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        /// Decimal digits of the reported shift.
        #[arg(long, env = "QES_DIGITS", default_value_t = DEFAULT_DIGITS)]
        digits: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Attach a finite-difference eigenvalue check to each solution.
        #[arg(long)]
        verify: bool,
    },
    /// Print the reduced condition polynomials and compare with reference tables.
    Tables {
        #[arg(long = "N-max", default_value_t = 5)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
        /// Reference tables file (TOML) replacing the built-in copy.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Sample a normalized wavefunction as CSV (x, psi, V).
    Wavefunction {
        #[arg(long = "N")]
        degree: usize,
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, default_value_t = 0)]
        root_index: usize,
        #[arg(long, default_value_t = 6.0)]
        x_max: f64,
        #[arg(long, default_value_t = 601)]
        points: usize,
        #[arg(long, value_enum, default_value = "csv")]
        emit: EmitFormat,
        #[arg(long, env = "QES_DIGITS", default_value_t = DEFAULT_DIGITS)]
        digits: u32,
    },
    /// Lowest eigenvalues of the finite-difference operator at a given shift.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        d: f64,
        /// Box half-width; defaults to |d| + 10.
        #[arg(long = "L")]
        half_width: Option<f64>,
        /// Interior grid points (rounded up to odd).
        #[arg(long = "n", default_value_t = DEFAULT_POINTS)]
        points: usize,
        #[arg(long = "k", default_value_t = 6)]
        count: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
    },
    /// Run every algebraic, analytic and spectral check up to N-max.
    Verify {
        #[arg(long = "N-max", default_value_t = 8)]
        n_max: usize,
        #[arg(long)]
        golden: Option<PathBuf>,
        #[arg(long, env = "QES_DIGITS", default_value_t = DEFAULT_DIGITS)]
        digits: u32,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let mut err = stderr.lock();
    match cli.command {
        Command::Solve {
            degree,
            parity,
            digits,
            format,
            output,
            verify,
        } => {
            let opts = SolveOptions {
                degree,
                parity: parity.into(),
                digits,
                format: match format {
                    DataFormat::Json => SolveFormat::Json,
                    DataFormat::Csv => SolveFormat::Csv,
                },
                verify,
            };
            let mut out: Box<dyn Write> = match output {
                Some(path) => Box::new(BufWriter::new(File::create(&path).map_err(|e| {
                    CliError::Usage(format!("{}: {e}", path.display()))
                })?)),
                None => Box::new(stdout.lock()),
            };
            let code = run_solve(&opts, &mut out)?;
            out.flush()?;
            Ok(code)
        }
        Command::Tables {
            n_max,
            format,
            golden,
        } => {
            let opts = TablesOptions {
                n_max,
                format: match format {
                    TableFormat::Text => TablesFormat::Text,
                    TableFormat::Json => TablesFormat::Json,
                },
                golden,
            };
            run_tables(&opts, &mut stdout.lock(), &mut err)
        }
        Command::Wavefunction {
            degree,
            parity,
            root_index,
            x_max,
            points,
            emit: EmitFormat::Csv,
            digits,
        } => {
            let opts = WavefunctionOptions {
                degree,
                parity: parity.into(),
                root_index,
                x_max,
                points,
                digits,
            };
            run_wavefunction(&opts, &mut stdout.lock())
        }
        Command::Spectrum {
            d,
            half_width,
            points,
            count,
            format,
        } => {
            let opts = SpectrumOptions {
                d,
                half_width,
                points,
                count,
                format: match format {
                    DataFormat::Json => SpectrumFormat::Json,
                    DataFormat::Csv => SpectrumFormat::Csv,
                },
            };
            run_spectrum(&opts, &mut stdout.lock())
        }
        Command::Verify {
            n_max,
            golden,
            digits,
        } => run_verify(
            &VerifyOptions {
                n_max,
                golden,
                digits,
            },
            &mut stdout.lock(),
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("qes: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
