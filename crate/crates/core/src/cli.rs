//! Command-line front end.
//!
//! Payloads (matrices, circuits, CSV, numbers) go to stdout or `--out`;
//! reports and timings go to stderr. Exit codes: 0 success, 1 input or parse
//! error, 2 singular matrix, 3 verification mismatch.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};

use crate::bench::{run_benchmark, summarize, write_csv, BenchConfig};
use crate::circuit::Circuit;
use crate::gf2::{count_linear_reversible, BitMatrix};
use crate::synth::{
    cnot_synth_pmh, default_section_size, gaussian_synth, lower_bound_gates, upper_bound_row_ops,
    verify, SynthError, SynthOptions, SynthReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_SINGULAR: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "linrev",
    version,
    about = "CNOT synthesis for linear reversible circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a circuit with partitioned elimination
    Synth {
        matrix: PathBuf,
        /// Section width (default: round(log2(n)/2), at least 1)
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize a circuit with Gaussian elimination
    Gauss {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the matrix a circuit computes
    Eval { circuit: PathBuf },
    /// Check that a circuit computes a matrix (exit 3 if not)
    Verify { matrix: PathBuf, circuit: PathBuf },
    /// Generate a random invertible matrix
    Gen {
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare both synthesizers on random matrices and emit CSV
    Bench {
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the lower and upper gate-count bounds
    Bounds {
        n: usize,
        #[arg(long)]
        m: Option<usize>,
    },
    /// Print the number of linear reversible functions on n wires
    Count { n: usize },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Singular(String),
    Mismatch(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Singular(_) => EXIT_SINGULAR,
            Failure::Mismatch(_) => EXIT_MISMATCH,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Singular(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<SynthError> for Failure {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Singular { .. } => Failure::Singular(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(context: impl std::fmt::Display) -> impl FnOnce(E) -> Failure {
    move |e| Failure::Input(format!("{context}: {e}"))
}

fn read_matrix(path: &Path) -> Result<BitMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(input(path.display()))?;
    BitMatrix::parse(&text).map_err(input(path.display()))
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = fs::read_to_string(path).map_err(input(path.display()))?;
    Circuit::parse(&text).map_err(input(path.display()))
}

fn emit(out: Option<&Path>, payload: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, payload).map_err(input(path.display())),
        None => stdout
            .write_all(payload.as_bytes())
            .map_err(input("stdout")),
    }
}

fn report_synthesis(report: &SynthReport, started: Instant, stderr: &mut dyn Write) {
    let _ = writeln!(stderr, "{}", report.to_json_line());
    if let Some(note) = report.note() {
        let _ = writeln!(stderr, "note: {note}");
    }
    let _ = writeln!(
        stderr,
        "elapsed_ms: {:.3}",
        started.elapsed().as_secs_f64() * 1e3
    );
}

fn dispatch(
    command: Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Failure> {
    match command {
        Command::Synth { matrix, m, out } => {
            let a = read_matrix(&matrix)?;
            let started = Instant::now();
            let (circuit, report) = cnot_synth_pmh(&a, &SynthOptions { m })?;
            report_synthesis(&report, started, stderr);
            emit(out.as_deref(), &circuit.to_text(), stdout)
        }
        Command::Gauss { matrix, out } => {
            let a = read_matrix(&matrix)?;
            let started = Instant::now();
            let (circuit, report) = gaussian_synth(&a)?;
            report_synthesis(&report, started, stderr);
            emit(out.as_deref(), &circuit.to_text(), stdout)
        }
        Command::Eval { circuit } => {
            let c = read_circuit(&circuit)?;
            emit(None, &c.eval_matrix().to_text(), stdout)
        }
        Command::Verify { matrix, circuit } => {
            let a = read_matrix(&matrix)?;
            let c = read_circuit(&circuit)?;
            if verify(&a, &c)? {
                let _ = writeln!(stderr, "ok: circuit computes the matrix");
                Ok(())
            } else {
                Err(Failure::Mismatch(
                    "mismatch: circuit does not compute the matrix".into(),
                ))
            }
        }
        Command::Gen { n, seed } => {
            let a = BitMatrix::random_invertible(n, seed).map_err(input("gen"))?;
            emit(None, &a.to_text(), stdout)
        }
        Command::Bench {
            sizes,
            trials,
            seed,
            m,
            out,
        } => {
            let config = BenchConfig {
                sizes: sizes.unwrap_or_else(|| BenchConfig::default().sizes),
                trials,
                seed,
                m_override: m,
            };
            let started = Instant::now();
            let records = run_benchmark(&config).map_err(input("bench"))?;
            let _ = write!(stderr, "{}", summarize(&records));
            let _ = writeln!(
                stderr,
                "elapsed_ms: {:.1}",
                started.elapsed().as_secs_f64() * 1e3
            );
            let mut buf = Vec::new();
            write_csv(&records, &mut buf).map_err(input("csv"))?;
            emit(out.as_deref(), &String::from_utf8_lossy(&buf), stdout)
        }
        Command::Bounds { n, m } => {
            let lower = lower_bound_gates(n)?;
            let m = m.unwrap_or_else(|| default_section_size(n));
            let upper = upper_bound_row_ops(n, m)?;
            let text = format!(
                "n {n}\nm {m}\nlower_bound_gates {lower:.6}\nupper_bound_row_ops {upper}\n"
            );
            emit(None, &text, stdout)
        }
        Command::Count { n } => {
            let count = count_linear_reversible(n).map_err(input("count"))?;
            emit(None, &format!("{count}\n"), stdout)
        }
    }
}

/// Parses `args` (including the program name) and runs one command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            // --help and --version are not failures; everything else is input error
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message());
            failure.code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("linrev").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn count_and_bounds() {
        assert_eq!(run_args(&["count", "1"]).1, "1\n");
        assert_eq!(run_args(&["count", "2"]).1, "6\n");
        assert_eq!(run_args(&["count", "3"]).1, "168\n");
        assert_eq!(run_args(&["count", "0"]).0, EXIT_INPUT);

        let (code, out, _) = run_args(&["bounds", "6", "--m", "2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n 6\nm 2\nlower_bound_gates 6.055473\nupper_bound_row_ops 102\n"
        );
        let (code, out, _) = run_args(&["bounds", "2"]);
        assert_eq!(code, 0);
        assert!(out.contains("lower_bound_gates 1.261860"), "{out}");
        let (code, _, err) = run_args(&["bounds", "1"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(err.contains("domain"), "{err}");
    }

    #[test]
    fn usage_errors_are_input_errors() {
        assert_eq!(run_args(&[]).0, EXIT_INPUT);
        assert_eq!(run_args(&["count", "3", "--bogus"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_INPUT);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn gen_is_reproducible() {
        let (code, a, _) = run_args(&["gen", "8", "--seed", "42"]);
        assert_eq!(code, 0);
        assert_eq!(a, run_args(&["gen", "8", "--seed", "42"]).1);
        assert!(BitMatrix::parse(&a).unwrap().is_invertible());
    }
}
