//! `kmu` command line: `verify`, `table` and `classify`.
//!
//! Exit codes: 0 when everything passes, 1 on a verification failure or a
//! boundary invariant, 2 on usage errors. JSON goes to stdout (one object per
//! line for grids), diagnostics to stderr.

use std::io::Write;
use std::thread;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::models::{verify_model, Family, ModelSpec, Report, Tolerances, DEFAULT_SEED};
use crate::report::{
    classification_table, classify, report_json, report_text, DEFAULT_TABLE_INVARIANTS,
};

/// Environment variable overriding the identity tolerance.
pub const TOL_ENV: &str = "KAPPA_MU_TOL";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "kmu", version, about = "Verify homogeneous (κ,μ)-space models and classify their base spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build models and check every identity; one report per grid point.
    Verify {
        /// Comma-separated families: so_n_plus_2, so_n_2, so_n_plus_1_1.
        #[arg(long, default_value = "so_n_plus_2,so_n_2,so_n_plus_1_1")]
        family: String,
        /// Comma-separated values of n.
        #[arg(long, default_value = "1,2,3,5")]
        n: String,
        /// Comma-separated values of alpha.
        #[arg(long, conflicts_with = "alpha_grid")]
        alpha: Option<String>,
        /// Inclusive alpha range start:stop:step.
        #[arg(long)]
        alpha_grid: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        out: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Identity tolerance (overrides KAPPA_MU_TOL).
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Classification table over a grid of Boeckx invariants.
    Table {
        #[arg(long, allow_hyphen_values = true)]
        invariants: Option<String>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        out: OutputFormat,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Model, base space, alpha and standard structure for one invariant.
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        invariant: f64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, value_enum, default_value = "text")]
        out: OutputFormat,
    },
}

#[derive(Debug)]
struct Usage(String);

impl From<Error> for Usage {
    fn from(e: Error) -> Self {
        Usage(e.to_string())
    }
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, Usage>
where
    T::Err: std::fmt::Display,
{
    let out = raw
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| Usage(format!("bad {what} {s:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if out.is_empty() {
        return Err(Usage(format!("empty {what} list")));
    }
    Ok(out)
}

/// `start:stop:step`, inclusive of `stop` up to round-off.
pub fn parse_alpha_grid(raw: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = raw
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("bad alpha grid {raw:?}: {e}")))
        .collect::<Result<_, _>>()?;
    let [start, stop, step] = parts[..] else {
        return Err(format!("alpha grid must be start:stop:step, got {raw:?}"));
    };
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
        return Err("alpha grid bounds must be finite".into());
    }
    if !(start > 0.0 && stop >= start && step > 0.0) {
        return Err(format!("alpha grid needs 0 < start <= stop and step > 0, got {raw:?}"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

fn tolerances(tol: Option<f64>) -> Result<Tolerances, Usage> {
    let t = match tol {
        Some(t) => t,
        None => match std::env::var(TOL_ENV) {
            Ok(raw) => raw
                .trim()
                .parse::<f64>()
                .map_err(|e| Usage(format!("bad {TOL_ENV}={raw:?}: {e}")))?,
            Err(_) => return Ok(Tolerances::default()),
        },
    };
    if !(t > 0.0) || !t.is_finite() {
        return Err(Usage(format!("tolerance must be positive, got {t}")));
    }
    Ok(Tolerances::with_identity(t))
}

/// Runs the grid on worker threads; results come back in grid order.
pub fn verify_grid(specs: &[ModelSpec], tol: &Tolerances, seed: u64) -> Vec<Report> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(specs.len().max(1));
    let chunk = specs.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = specs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|spec| verify_model(*spec, tol, seed).expect("spec validated"))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect()
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Usage> {
    match cmd {
        Command::Verify {
            family,
            n,
            alpha,
            alpha_grid,
            out: fmt,
            seed,
            tol,
        } => {
            let families: Vec<Family> = parse_list(&family, "family")?;
            let ns: Vec<usize> = parse_list(&n, "n")?;
            let alphas = match (alpha, alpha_grid) {
                (_, Some(g)) => parse_alpha_grid(&g).map_err(Usage)?,
                (Some(a), None) => parse_list(&a, "alpha")?,
                (None, None) => vec![0.3, 0.5, 0.8],
            };
            let tol = tolerances(tol)?;
            let mut specs = Vec::new();
            for &f in &families {
                for &n in &ns {
                    for &a in &alphas {
                        specs.push(ModelSpec::new(f, n, a)?);
                    }
                }
            }
            let reports = verify_grid(&specs, &tol, seed);
            let mut all = true;
            for r in &reports {
                all &= r.pass();
                match fmt {
                    OutputFormat::Json => {
                        let _ = writeln!(out, "{}", report_json(r));
                    }
                    OutputFormat::Text => {
                        let _ = write!(out, "{}", report_text(r));
                    }
                }
                if !r.pass() {
                    let _ = writeln!(
                        err,
                        "FAIL {} n={} alpha={}: {:?} {:?}",
                        r.spec.family,
                        r.spec.n,
                        r.spec.alpha,
                        r.failures(),
                        r.errors
                    );
                }
            }
            Ok(if all { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Table {
            invariants,
            n,
            out: fmt,
            seed,
            tol,
        } => {
            let grid: Vec<f64> = match invariants {
                Some(raw) => parse_list(&raw, "invariant")?,
                None => DEFAULT_TABLE_INVARIANTS.to_vec(),
            };
            let tol = tolerances(tol)?;
            let table = classification_table(&grid, n, &tol, seed)?;
            match fmt {
                OutputFormat::Json => {
                    let _ = writeln!(out, "{}", table.to_json());
                }
                OutputFormat::Text => {
                    let _ = write!(out, "{}", table.to_text());
                }
            }
            Ok(if table.all_verified() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Classify { invariant, n, out: fmt } => match classify(invariant, n) {
            Ok(c) => {
                match fmt {
                    OutputFormat::Json => {
                        let _ = writeln!(out, "{}", c.to_json());
                    }
                    OutputFormat::Text => {
                        let _ = write!(out, "{}", c.to_text());
                    }
                }
                Ok(EXIT_PASS)
            }
            Err(Error::BoundaryInvariant) => {
                let _ = writeln!(
                    err,
                    "I = {invariant} lies on the boundary |I| = 1: no base space classification"
                );
                Ok(EXIT_FAIL)
            }
            Err(e) => Err(e.into()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_grid_parsing() {
        assert_eq!(parse_alpha_grid("0.3:0.8:0.25").unwrap().len(), 3);
        assert_eq!(parse_alpha_grid("0.5:0.5:0.1").unwrap(), vec![0.5]);
        assert!(parse_alpha_grid("0:1:0.1").is_err());
        assert!(parse_alpha_grid("1:0.5:0.1").is_err());
        assert!(parse_alpha_grid("0.1:1:0").is_err());
        assert!(parse_alpha_grid("0.1:inf:0.1").is_err());
        assert!(parse_alpha_grid("0.1:1").is_err());
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.cli_name().parse::<Family>().unwrap(), f);
        }
        assert!("so3".parse::<Family>().is_err());
    }
}
