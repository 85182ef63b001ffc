//! `ncqo` command-line front end.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{normal_order, parse_word, parse_word_untyped, AlgebraError, ModeId};
use crate::blackbody::{self, BlackbodyError, LinearGrid, ThermoParams};
use crate::fock::{self, OracleConfig, OracleError};
use crate::perturbation::{self, PerturbationError, ProcessKind};
use crate::vacuum::{self, VacuumError, VacuumSpec};

#[derive(Parser, Debug)]
#[command(
    name = "ncqo",
    version,
    about = "Non-canonical field algebra, vacuum moments and blackbody spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal-order an operator word and print its JSON normal form.
    NormalOrder { expr: String },
    /// Vacuum expectation value of a word.
    Vev {
        expr: String,
        #[arg(long)]
        vacuum: PathBuf,
    },
    /// Canonical and non-canonical vacuum values of a word and their ratio.
    Xfactor {
        expr: String,
        #[arg(long)]
        vacuum: PathBuf,
    },
    /// Amplitude factor of an emission process.
    Emission {
        #[arg(long, value_enum)]
        process: Process,
        /// Photon number for `n-photon` and `stimulated`.
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long)]
        mode: String,
        /// Second mode for `two-different`.
        #[arg(long)]
        other: Option<String>,
        #[arg(long)]
        vacuum: PathBuf,
    },
    /// Check the algebra on the dense oracle and compare symbolic and matrix vacuum values.
    OracleVerify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = fock::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = fock::DEFAULT_WORD_COUNT)]
        words: usize,
        /// Print the full JSON report instead of the table.
        #[arg(long)]
        json: bool,
    },
    /// Spectrum at fixed μ/k_BT over a grid of ħω/k_BT.
    PlanckSweep {
        #[arg(long, allow_hyphen_values = true)]
        mu: f64,
        #[arg(long, default_value = "0.01:10:512")]
        grid: String,
        /// Comma-separated Tsallis q values.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        q: Vec<f64>,
        /// Output CSV path; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-format spectrum over a grid of μ/k_BT and ħω/k_BT.
    PlanckSurface {
        #[arg(long, default_value = "-10:0:41", allow_hyphen_values = true)]
        mu_range: String,
        #[arg(long, default_value = "0.01:10:512")]
        grid: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Process {
    NPhoton,
    TwoDifferent,
    Stimulated,
}

/// Failure carrying the error name printed on standard error.
#[derive(Debug)]
pub struct CliError {
    pub name: &'static str,
    pub message: String,
}

macro_rules! named_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError { name: e.name(), message: e.to_string() }
            }
        }
    )*};
}

named_error!(
    AlgebraError,
    VacuumError,
    PerturbationError,
    OracleError,
    BlackbodyError
);

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError {
        name: "IoError",
        message: format!("{}: {e}", path.display()),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load_vacuum(path: &Path) -> Result<VacuumSpec, CliError> {
    Ok(VacuumSpec::from_json(&read(path)?)?)
}

fn write_output(
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
    text: &[u8],
) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_error(path, e)),
        None => stdout
            .write_all(text)
            .map_err(|e| io_error(Path::new("<stdout>"), e)),
    }
}

fn emit(stdout: &mut dyn Write, value: &serde_json::Value) -> Result<(), CliError> {
    writeln!(stdout, "{value}").map_err(|e| io_error(Path::new("<stdout>"), e))
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::NormalOrder { expr } => {
            let form = normal_order(&parse_word_untyped(&expr)?)?;
            writeln!(stdout, "{}", form.to_json()).map_err(|e| io_error(Path::new("<stdout>"), e))
        }
        Command::Vev { expr, vacuum } => {
            let vac = load_vacuum(&vacuum)?;
            let word = parse_word(&expr, &vac.mode_table())?;
            let value = vacuum::vev(&vac, &normal_order(&word)?)?;
            emit(
                stdout,
                &json!({ "word": word.to_string(), "vev": [value.re, value.im] }),
            )
        }
        Command::Xfactor { expr, vacuum } => {
            let vac = load_vacuum(&vacuum)?;
            let word = parse_word(&expr, &vac.mode_table())?;
            let report = perturbation::xfactor(&vac, &word)?;
            let mut value = serde_json::to_value(&report).expect("report serializes");
            value["word"] = json!(word.to_string());
            emit(stdout, &value)
        }
        Command::Emission {
            process,
            n,
            mode,
            other,
            vacuum,
        } => {
            let vac = load_vacuum(&vacuum)?;
            let id = ModeId::from(mode.as_str());
            let (kind, summary) = match process {
                Process::NPhoton => (
                    ProcessKind::NPhotonSame { mode: id, n },
                    json!({ "process": "n-photon", "mode": mode, "n": n }),
                ),
                Process::Stimulated => (
                    ProcessKind::Stimulated { mode: id, n },
                    json!({ "process": "stimulated", "mode": mode, "n": n }),
                ),
                Process::TwoDifferent => {
                    let other = other.ok_or_else(|| CliError {
                        name: "InvalidProcess",
                        message: "two-different needs --other".into(),
                    })?;
                    let kind = ProcessKind::TwoDifferent {
                        mode: id,
                        other: ModeId::from(other.as_str()),
                    };
                    (
                        kind,
                        json!({ "process": "two-different", "mode": mode, "other": other }),
                    )
                }
            };
            let mut value = summary;
            value["factor"] = json!(perturbation::emission_factor(&vac, &kind)?);
            emit(stdout, &value)
        }
        Command::OracleVerify {
            config,
            seed,
            words,
            json,
        } => {
            let cfg = OracleConfig::from_json(&read(&config)?)?;
            let report = fock::run_verification(&cfg, seed, words)?;
            if json {
                emit(
                    stdout,
                    &serde_json::to_value(&report).expect("report serializes"),
                )?;
            } else {
                stdout
                    .write_all(report.table().as_bytes())
                    .map_err(|e| io_error(Path::new("<stdout>"), e))?;
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError {
                    name: "VerificationFailed",
                    message: "at least one oracle check failed".into(),
                })
            }
        }
        Command::PlanckSweep { mu, grid, q, out } => {
            let params = ThermoParams::reduced(mu)?;
            let grid: LinearGrid = grid.parse()?;
            let points = blackbody::sweep(&params, &grid.points(), &q)?;
            let mut buf = Vec::new();
            blackbody::write_csv(&mut buf, &points, &q)?;
            write_output(&out, stdout, &buf)
        }
        Command::PlanckSurface {
            mu_range,
            grid,
            out,
        } => {
            let mus: LinearGrid = mu_range.parse()?;
            let grid: LinearGrid = grid.parse()?;
            let points = blackbody::surface(1.0, &mus.points(), &grid.points())?;
            let mut buf = Vec::new();
            blackbody::write_surface_csv(&mut buf, &points)?;
            write_output(&out, stdout, &buf)
        }
    }
}

/// Runs one invocation; returns 0 on success, 1 on domain errors, 2 on usage errors.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    2
                }
            };
        }
    };
    match execute(cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            if e.message.starts_with(e.name) {
                let _ = writeln!(stderr, "error: {}", e.message);
            } else {
                let _ = writeln!(stderr, "error: {}: {}", e.name, e.message);
            }
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("ncqo").chain(args.iter().copied()),
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
    fn normal_order_two_terms() {
        let (code, out, _) = call(&["normal-order", "a(k1) ad(k1)"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn usage_and_domain_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&[]).0, 2);
        let (code, _, err) = call(&["normal-order", "a(k1"]);
        assert_eq!(code, 1);
        assert!(err.contains("ParseError"), "{err}");
    }

    #[test]
    fn sweep_to_stdout() {
        let (code, out, _) = call(&["planck-sweep", "--mu", "-10", "--grid", "1:2:3"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
        let (code, _, err) = call(&["planck-sweep", "--mu", "0.5"]);
        assert_eq!(code, 1);
        assert!(err.contains("InvalidInput"));
    }
}
