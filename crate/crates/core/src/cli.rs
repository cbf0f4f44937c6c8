//! The `psni` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

use crate::dyadic::{alpha, binom_nu, nu};
use crate::obstruction::{
    check_four_conditions, replay_part, replay_part_exploratory, ChartDb, Variant13, Verdict,
};
use crate::rules::{Catalog, FactIndex, Part11, RuleConfig};
use crate::tabulator::{self, ClaimGroup, Format};

/// Largest `n` accepted by `best`.
const BEST_LIMIT: u64 = 1 << 28;

#[derive(Debug, Parser)]
#[command(name = "psni", version, about = "Nonimmersions of real projective spaces")]
struct Cli {
    /// Rule configuration file (enable.<id>=true|false, precedence=...)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Chart database replacing the built-in one
    #[arg(long, global = true, value_name = "PATH", env = "PSNI_CHARTDB")]
    chartdb: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of 1's in the binary expansion
    Alpha { n: u64 },
    /// Exponent of 2 in n
    Nu { n: u64 },
    /// 2-adic valuation of C(TOP, BOTTOM); negative TOP means 2^L - |TOP|
    Binomnu {
        #[arg(allow_negative_numbers = true)]
        top: i64,
        bottom: u64,
    },
    /// Best known nonimmersion dimension of P^n and its first source
    Best { n: u64 },
    /// Emit the table for 7 < n < 49152
    Table {
        #[arg(long, default_value = "csv", value_parser = clap::value_parser!(String))]
        format: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Check the counting claims
    Verify {
        /// all|kd2|within3|spots|counts|family
        #[arg(long, default_value = "all")]
        claims: String,
        /// Print claim_id=... lines instead of aligned text
        #[arg(long)]
        machine: bool,
    },
    /// Replay the obstruction argument of one main-family part
    Replay {
        #[arg(long)]
        part: char,
        #[arg(long = "M")]
        m: u64,
        /// Allow alpha(M) other than the part's; never a nonimmersion claim
        #[arg(long)]
        explore: bool,
    },
    /// Check the four conditions of a large-alpha(M) instance
    Check13 {
        /// be|c|d
        #[arg(long)]
        variant: String,
        #[arg(long)]
        h: u64,
        #[arg(long = "M")]
        m: u64,
    },
    /// Validate the chart database
    Charts {
        #[arg(long)]
        check: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn usage(e: impl ToString) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Runs one invocation; returns 0 on success, 1 when an exact claim fails,
/// 2 on a usage or input error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn load_config(cli: &Cli, catalog: &Catalog) -> Result<RuleConfig, CliError> {
    match &cli.config {
        Some(p) => RuleConfig::load(p, catalog).map_err(CliError::usage),
        None => Ok(RuleConfig::default()),
    }
}

fn load_db(cli: &Cli) -> Result<ChartDb, CliError> {
    match &cli.chartdb {
        Some(p) => ChartDb::load(p).map_err(CliError::usage),
        None => Ok(ChartDb::builtin()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Alpha { n } => writeln!(out, "{}", alpha(*n))?,
        Command::Nu { n } => writeln!(out, "{}", nu(*n).map_err(CliError::usage)?)?,
        Command::Binomnu { top, bottom } => writeln!(out, "{}", binom_nu(*top, *bottom))?,
        Command::Best { n } => {
            if *n > BEST_LIMIT {
                return Err(CliError::Usage(format!("n must be at most {BEST_LIMIT}")));
            }
            let catalog = Catalog::builtin();
            let config = load_config(cli, &catalog)?;
            let index = FactIndex::build(&catalog, &config, *n).map_err(CliError::usage)?;
            match index.best(*n) {
                (k, Some(src)) => writeln!(out, "{n} -> {k} ({src})")?,
                (_, None) => writeln!(out, "{n} -> none")?,
            }
        }
        Command::Table { format, out: path } => {
            let format: Format = format.parse().map_err(CliError::Usage)?;
            let catalog = Catalog::builtin();
            let config = load_config(cli, &catalog)?;
            let table = tabulator::Table::build(&catalog, &config).map_err(CliError::usage)?;
            match path {
                Some(p) => tabulator::emit(table.rows(), format, p)?,
                None => out.write_all(tabulator::render(table.rows(), format).as_bytes())?,
            }
        }
        Command::Verify { claims, machine } => {
            let group: ClaimGroup = claims.parse().map_err(CliError::Usage)?;
            let catalog = Catalog::builtin();
            let config = load_config(cli, &catalog)?;
            let reports =
                tabulator::verify_claims(&catalog, &config, group).map_err(CliError::usage)?;
            for r in &reports {
                if *machine {
                    writeln!(out, "{}", r.machine_line())?;
                } else {
                    writeln!(out, "{r}")?;
                }
            }
            if reports.iter().any(|r| r.failed()) {
                return Ok(1);
            }
        }
        Command::Replay { part, m, explore } => {
            let part = Part11::from_letter(*part)
                .ok_or_else(|| CliError::Usage(format!("unknown part `{part}`")))?;
            let db = load_db(cli)?;
            let report = if *explore {
                replay_part_exploratory(part, *m, &db)
            } else {
                replay_part(part, *m, &db)
            }
            .map_err(CliError::usage)?;
            writeln!(out, "{report}")?;
            if !report.exploratory && report.verdict() == Verdict::Zero {
                return Ok(1);
            }
        }
        Command::Check13 { variant, h, m } => {
            let variant = Variant13::parse(variant)
                .ok_or_else(|| CliError::Usage(format!("unknown variant `{variant}`")))?;
            let db = load_db(cli)?;
            let r = check_four_conditions(*h, *m, variant, &db).map_err(CliError::usage)?;
            writeln!(out, "{r}")?;
            if !r.all() {
                return Ok(1);
            }
        }
        Command::Charts { check } => {
            let db = load_db(cli)?;
            let mut failed = false;
            for c in db.charts() {
                if !check {
                    writeln!(
                        out,
                        "{} towers={} relations={}",
                        c.key(),
                        c.towers.len(),
                        c.relations.len()
                    )?;
                    continue;
                }
                for (label, portion) in [
                    ("stored", c.clone()),
                    ("mirrored", c.mirrored()),
                    ("shifted", c.shifted(1)),
                ] {
                    match portion.check() {
                        Ok(k) => writeln!(
                            out,
                            "{} {label}: ok, {} dots, {}",
                            portion.key(),
                            k.dots,
                            k.group_string()
                        )?,
                        Err(e) => {
                            failed = true;
                            writeln!(out, "{} {label}: FAILED {e}", portion.key())?;
                        }
                    }
                }
            }
            if failed {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut argv = vec!["psni"];
        argv.extend_from_slice(args);
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn small_queries() {
        assert_eq!(call(&["alpha", "58"]), (0, "4\n".into(), String::new()));
        assert_eq!(call(&["nu", "96"]).1, "5\n");
        assert_eq!(call(&["binomnu", "-3", "2"]).1, "1\n");
        assert_eq!(call(&["best", "58"]).1, "58 -> 107 (R-DZ)\n");
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["alpha"]).0, 2);
        assert_eq!(call(&["nu", "0"]).0, 2);
        assert_eq!(call(&["replay", "--part", "z", "--M", "7"]).0, 2);
        assert_eq!(call(&["replay", "--part", "a", "--M", "8"]).0, 2);
        assert_eq!(call(&["table", "--format", "xml"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }
}
