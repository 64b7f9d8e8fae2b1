//! Command-line front end. [`run`] is the whole program minus the process
//! exit, so it can be driven from tests.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::channel::coefficients;
use crate::error::{Error, Result};
use crate::exec::{with_threads, Execution};

use super::config::RunConfig;
use super::output::{format_number, result_lines, write_csv};
use super::sweep::{run_sweep, SchemeSelection, SweepKind, SweepSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// Environment variable that sets the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "WPCN_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wpcn", version, about = "Max-min throughput of two-user wireless powered cooperation")]
struct Cli {
    /// Worker threads (default: WPCN_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Run on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    /// Exit with status 2 if any result did not converge.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Instance {
    /// key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one config key (repeatable), e.g. `--set d_xd=30`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance for one scheme and print the result.
    Solve {
        #[arg(long)]
        scheme: String,
        #[command(flatten)]
        instance: Instance,
    },
    /// Brute-force grid search on one instance, for cross-checking `solve`.
    Oracle {
        #[arg(long)]
        scheme: String,
        /// Grid step (default: oracle_grid_step from the config).
        #[arg(long)]
        step: Option<f64>,
        #[command(flatten)]
        instance: Instance,
    },
    /// Run the sweep described by the config and write CSV.
    Sweep {
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        instance: Instance,
    },
    /// Run the four built-in sweeps into fig6.csv .. fig9.csv.
    Figures {
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        instance: Instance,
    },
}

impl Instance {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        for pair in &self.set {
            cfg.set_pair(pair)?;
        }
        Ok(cfg)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match execute(&cli, stdout) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "error: at least one result did not converge");
            EXIT_NOT_CONVERGED
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_CONFIG
        }
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

/// Returns whether every result converged (or `--strict` is off).
fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<bool> {
    let threads = thread_count(cli.threads)?;
    if threads == Some(0) {
        return Err(Error::Config("thread count must be at least 1".into()));
    }
    let execution = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let mut buffer = Vec::new();
    let outcome = with_threads(threads, || dispatch(&cli.command, execution, &mut buffer));
    stdout.write_all(&buffer)?;
    Ok(outcome? || !cli.strict)
}

fn dispatch(command: &Command, execution: Execution, stdout: &mut Vec<u8>) -> Result<bool> {
    match command {
        Command::Solve { scheme, instance } => {
            let (cfg, scheme) = prepare(instance, scheme, execution)?;
            let coeffs = coefficients(&cfg.params, &cfg.channels()?)?;
            let r = scheme.solve(&coeffs, &cfg.params, &cfg.solver)?;
            print_lines(stdout, &result_lines(&r))?;
            Ok(r.converged)
        }
        Command::Oracle { scheme, step, instance } => {
            let (cfg, scheme) = prepare(instance, scheme, execution)?;
            let step = step.unwrap_or(cfg.solver.oracle_grid_step);
            let coeffs = coefficients(&cfg.params, &cfg.channels()?)?;
            let r = scheme.oracle(&coeffs, &cfg.params, step, execution)?;
            let mut lines = result_lines(&r);
            lines.push(("grid_step".into(), format_number(step)));
            print_lines(stdout, &lines)?;
            Ok(true)
        }
        Command::Sweep { out, instance } => {
            let cfg = load(instance, execution)?;
            let spec = SweepSpec::from_config(&cfg)?;
            let rows = run_sweep(&spec, &cfg.solver)?;
            match out {
                Some(path) => write_csv(&rows, create(path)?)?,
                None => write_csv(&rows, &mut *stdout)?,
            }
            Ok(rows.iter().all(|r| r.converged))
        }
        Command::Figures { out, instance } => {
            let cfg = load(instance, execution)?;
            std::fs::create_dir_all(out)
                .map_err(|e| Error::Config(format!("cannot create {}: {e}", out.display())))?;
            let mut all_converged = true;
            for kind in SweepKind::ALL {
                let spec = SweepSpec::from_config_with_kind(&cfg, kind)?;
                let rows = run_sweep(&spec, &cfg.solver)?;
                all_converged &= rows.iter().all(|r| r.converged);
                let path = out.join(kind.figure_file());
                write_csv(&rows, create(&path)?)?;
                writeln!(stdout, "wrote {}", path.display())?;
            }
            Ok(all_converged)
        }
    }
}

fn load(instance: &Instance, execution: Execution) -> Result<RunConfig> {
    let mut cfg = instance.load()?;
    cfg.solver.execution = execution;
    cfg.validate()?;
    Ok(cfg)
}

fn prepare(instance: &Instance, scheme: &str, execution: Execution) -> Result<(RunConfig, SchemeSelection)> {
    let scheme = scheme.parse()?;
    Ok((load(instance, execution)?, scheme))
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>> {
    let file = std::fs::File::create(path).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(std::io::BufWriter::new(file))
}

fn print_lines(out: &mut dyn Write, lines: &[(String, String)]) -> Result<()> {
    for (k, v) in lines {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("wpcn").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn unknown_flag_is_echoed() {
        let (code, _, err) = run_args(&["solve", "--scheme", "noncoop", "--bogus"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("--bogus"), "{err}");
    }

    #[test]
    fn unknown_key_is_echoed() {
        let (code, _, err) = run_args(&["solve", "--scheme", "noncoop", "--set", "warp_factor=9"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("warp_factor"), "{err}");
    }

    #[test]
    fn bad_scheme_is_config_error() {
        let (code, _, err) = run_args(&["solve", "--scheme", "telepathy"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(err.contains("telepathy"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, _, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
    }

    #[test]
    fn solve_prints_key_values() {
        let (code, out, _) = run_args(&["--sequential", "solve", "--scheme", "noncoop", "--set", "t1_step=0.01"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.lines().any(|l| l == "scheme=noncoop"));
        assert!(out.lines().any(|l| l.starts_with("common=")));
    }
}
