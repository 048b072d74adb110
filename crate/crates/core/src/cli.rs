//! The `ltltab` command line.

use std::io::Write;
use std::net::SocketAddr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{generate_foo, run_case, series_cases, CSV_HEADER};
use crate::formula::{parse_formula, Formula};
use crate::oracle::decide_graph;
use crate::rules::PrincipalPolicy;
use crate::search::{run_parallel, SearchOptions, DEFAULT_MAX_POISED_DEPTH, DEFAULT_MAX_STEPS};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ltltab", version, about = "LTL satisfiability by one-pass tree tableau")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide a formula; prints SAT or UNSAT.
    Solve {
        /// Formula text, or @path to read it from a file.
        formula: String,
        /// Print the lasso model of a satisfiable formula as JSON.
        #[arg(long)]
        model: bool,
        /// Print the tableau as JSON or Graphviz.
        #[arg(long, value_enum)]
        trace: Option<TraceFormat>,
        /// Print search statistics as JSON.
        #[arg(long)]
        stats: bool,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Decide a formula with the independent graph tableau.
    Oracle { formula: String },
    /// Run a benchmark series and print CSV rows.
    Bench {
        /// `foo`, `patterns`, or @path with one formula per line.
        series: String,
        /// Largest n for the foo series.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print a generated formula.
    Gen {
        series: GenSeries,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Serve the step-by-step explorer over HTTP.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
        /// Seconds an idle session is kept.
        #[arg(long, default_value_t = 3600)]
        ttl: u64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TraceFormat {
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GenSeries {
    Foo,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Choose principal formulas pseudo-randomly from this seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Disable the PRUNE0 shortcut.
    #[arg(long)]
    no_prune0: bool,
    /// Step and poised-depth caps as `steps,depth`; either may be empty.
    #[arg(long, value_parser = parse_caps)]
    caps: Option<(u64, usize)>,
}

impl SearchArgs {
    fn options(&self, record_trace: bool) -> SearchOptions {
        let (max_steps, max_poised_depth) = self
            .caps
            .unwrap_or((DEFAULT_MAX_STEPS, DEFAULT_MAX_POISED_DEPTH));
        SearchOptions {
            policy: self.seed.map_or(PrincipalPolicy::Priority, PrincipalPolicy::Seeded),
            use_prune0: !self.no_prune0,
            max_steps,
            max_poised_depth,
            record_trace,
        }
    }
}

fn parse_caps(s: &str) -> Result<(u64, usize), String> {
    let (steps, depth) = s
        .split_once(',')
        .ok_or_else(|| "expected `steps,depth`".to_string())?;
    let steps = match steps.trim() {
        "" => DEFAULT_MAX_STEPS,
        t => t.parse().map_err(|e| format!("steps: {e}"))?,
    };
    let depth = match depth.trim() {
        "" => DEFAULT_MAX_POISED_DEPTH,
        t => t.parse().map_err(|e| format!("depth: {e}"))?,
    };
    Ok((steps, depth))
}

/// Formula from the command line, or the contents of `@path`.
fn read_formula(arg: &str, err: &mut dyn Write) -> Option<Formula> {
    let text = match arg.strip_prefix('@') {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "error: cannot read {path}: {e}");
                return None;
            }
        },
        None => arg.to_string(),
    };
    match parse_formula(text.trim()) {
        Ok(f) => Some(f),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(err, "  {}", text.trim());
            let _ = writeln!(err, "  {}^", " ".repeat(text.trim()[..e.offset].chars().count()));
            None
        }
    }
}

/// Runs the CLI with process stdout and stderr; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Solve {
            formula,
            model,
            trace,
            stats,
            search,
        } => {
            let Some(f) = read_formula(&formula, err) else {
                return EXIT_ERROR;
            };
            let verdict = match run_parallel(f, search.workers, &search.options(trace.is_some())) {
                Ok(v) => v,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_ERROR;
                }
            };
            let _ = writeln!(out, "{}", if verdict.is_sat() { "SAT" } else { "UNSAT" });
            if model {
                if let Some(m) = verdict.model() {
                    let _ = writeln!(out, "{}", m.to_json());
                }
            }
            if stats {
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&verdict.stats).expect("stats serialise")
                );
            }
            if let (Some(format), Some(t)) = (trace, &verdict.trace) {
                let _ = match format {
                    TraceFormat::Json => writeln!(out, "{}", t.to_json()),
                    TraceFormat::Dot => write!(out, "{}", t.to_dot()),
                };
            }
            if verdict.is_sat() {
                EXIT_SAT
            } else {
                EXIT_UNSAT
            }
        }
        Command::Oracle { formula } => {
            let Some(f) = read_formula(&formula, err) else {
                return EXIT_ERROR;
            };
            match decide_graph(f) {
                Ok(sat) => {
                    let _ = writeln!(out, "{}", if sat { "SAT" } else { "UNSAT" });
                    if sat {
                        EXIT_SAT
                    } else {
                        EXIT_UNSAT
                    }
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_ERROR
                }
            }
        }
        Command::Bench {
            series,
            n,
            repeat,
            search,
        } => {
            let cases = match series_cases(&series, n) {
                Ok(c) => c,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_ERROR;
                }
            };
            let opts = search.options(false);
            let _ = writeln!(out, "{CSV_HEADER}");
            for case in &cases {
                for _ in 0..repeat {
                    match run_case(case, search.workers, &opts) {
                        Ok(row) => {
                            let _ = writeln!(out, "{}", row.csv_line());
                            let _ = out.flush();
                        }
                        Err(e) => {
                            let _ = writeln!(err, "error: {}: {e}", case.name);
                            return EXIT_ERROR;
                        }
                    }
                }
            }
            0
        }
        Command::Gen { series: GenSeries::Foo, n } => match generate_foo(n) {
            Ok(f) => {
                let _ = writeln!(out, "{f}");
                0
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_ERROR
            }
        },
        Command::Serve { addr, ttl } => {
            let runtime = match tokio::runtime::Runtime::new() {
                Ok(rt) => rt,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_ERROR;
                }
            };
            let _ = writeln!(out, "explorer listening on http://{addr}");
            let _ = out.flush();
            match runtime.block_on(crate::explorer::serve(addr, Duration::from_secs(ttl))) {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    EXIT_ERROR
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("ltltab").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn caps_syntax() {
        assert_eq!(parse_caps("10,20"), Ok((10, 20)));
        assert_eq!(parse_caps(",5"), Ok((DEFAULT_MAX_STEPS, 5)));
        assert!(parse_caps("10").is_err());
    }

    #[test]
    fn parse_errors_point_at_the_offset() {
        let (code, _, err) = run_capture(&["solve", "p & & q"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("byte 4"), "{err}");
        assert!(err.contains("      ^"), "{err}");
    }

    #[test]
    fn gen_and_oracle() {
        let (code, out, _) = run_capture(&["gen", "foo", "--n", "2"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("a & G(a <-> X~a)"));
        assert_eq!(run_capture(&["oracle", "F p & G ~p"]).0, EXIT_UNSAT);
        assert_eq!(run_capture(&["gen", "foo", "--n", "1"]).0, EXIT_ERROR);
    }
}
