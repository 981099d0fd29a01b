//! `qclone`: verification suites and parameter sweeps for optimal universal
//! qubit cloning and covariant state estimation.

mod commands;
mod render;
mod report;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use commands::{Grid, Job, Tolerances};
use report::{Report, Section};

#[derive(Debug, Parser)]
#[command(
    name = "qclone",
    version,
    about = "Optimal universal qubit cloning: simulation and verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact closed-form shrinking factors, fidelities and identities.
    Bounds {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Upper limit of the exhaustive exact grids (run when --n/--m are absent).
        #[arg(long, default_value_t = 50)]
        max_exact: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Simulate the N→M cloner and certify its shrinking factor.
    Clone {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Haar-random pure inputs.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Random symmetric mixed inputs.
        #[arg(long, default_value_t = 3)]
        mixed: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exact and Monte Carlo state estimation from M copies.
    Estimate {
        #[arg(long)]
        m: usize,
        /// Also compose the M→L' cloner with estimation for M ≤ L' ≤ L.
        #[arg(long)]
        l: Option<usize>,
        /// Haar-random states checked with exact quadrature, besides the reference state.
        #[arg(long, default_value_t = 10)]
        samples: usize,
        /// Monte Carlo shots (0 skips Monte Carlo).
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Chain N→M→L: stagewise, end-to-end and direct shrinking factors.
    Concat {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        l: usize,
        /// Haar-random pure inputs.
        #[arg(long, default_value_t = 3)]
        samples: usize,
        /// Random symmetric mixed inputs.
        #[arg(long, default_value_t = 2)]
        mixed: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run the full acceptance grid.
    VerifyAll {
        /// Haar-random inputs per cloner.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Monte Carlo shots per copy number.
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Table => "table",
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Record wall-clock time per section (makes reports non-reproducible).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    tol_physics: Option<f64>,
    #[arg(long)]
    tol_estimation: Option<f64>,
    #[arg(long)]
    tol_trace: Option<f64>,
    #[arg(long)]
    tol_positivity: Option<f64>,
    #[arg(long)]
    tol_support: Option<f64>,
    #[arg(long)]
    tol_mc_sigmas: Option<f64>,
}

impl Common {
    fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            physics: self.tol_physics.unwrap_or(d.physics),
            estimation: self.tol_estimation.unwrap_or(d.estimation),
            trace: self.tol_trace.unwrap_or(d.trace),
            positivity: self.tol_positivity.unwrap_or(d.positivity),
            support: self.tol_support.unwrap_or(d.support),
            mc_sigmas: self.tol_mc_sigmas.unwrap_or(d.mc_sigmas),
        }
    }
}

fn usage_error(msg: impl std::fmt::Display) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn require(ok: bool, msg: &str) {
    if !ok {
        usage_error(msg);
    }
}

fn validate(cmd: &Command) {
    let common = match cmd {
        Command::Bounds {
            n, m, l, common, ..
        } => {
            require(n.is_some() == m.is_some(), "--n and --m go together");
            if let (Some(n), Some(m)) = (n, m) {
                require(*n >= 1 && n <= m, "need 1 ≤ n ≤ m");
                require(l.is_none_or(|l| l >= *m), "need m ≤ l");
            } else {
                require(l.is_none(), "--l needs --n and --m");
            }
            common
        }
        Command::Clone {
            n,
            m,
            samples,
            common,
            ..
        } => {
            require(*n >= 1 && n <= m, "need 1 ≤ n ≤ m");
            require(*m <= qclone::symspace::MAX_DICKE_QUBITS, "m is at most 60");
            require(*samples >= 1, "samples must be at least 1");
            common
        }
        Command::Estimate {
            m,
            l,
            samples: _,
            shots,
            common,
        } => {
            require(
                *m >= 1 && *m <= commands::ESTIMATE_EXACT_MAX,
                "need 1 ≤ m ≤ 20",
            );
            require(
                *shots == 0 || *m <= commands::ESTIMATE_MC_MAX,
                "Monte Carlo needs m ≤ 12 (pass --shots 0 to skip it)",
            );
            require(l.is_none_or(|l| l >= *m && l <= 10), "need m ≤ l ≤ 10");
            common
        }
        Command::Concat {
            n, m, l, common, ..
        } => {
            require(*n >= 1 && n <= m && m <= l, "need 1 ≤ n ≤ m ≤ l");
            require(*l <= qclone::symspace::MAX_DICKE_QUBITS, "l is at most 60");
            common
        }
        Command::VerifyAll {
            samples,
            shots,
            common,
        } => {
            require(
                *samples >= 1 && *shots >= 1,
                "samples and shots must be at least 1",
            );
            common
        }
    };
    let t = common.tolerances();
    require(
        [
            t.physics,
            t.estimation,
            t.trace,
            t.positivity,
            t.support,
            t.mc_sigmas,
        ]
        .iter()
        .all(|x| x.is_finite() && *x >= 0.0),
        "tolerances must be finite and non-negative",
    );
}

fn config(cmd: &Command) -> (&Common, Value) {
    let base = |name: &str, common: &Common| {
        json!({
            "command": name,
            "seed": common.seed,
            "format": common.format.name(),
            "tolerances": common.tolerances(),
        })
    };
    let (common, mut cfg, extra) = match cmd {
        Command::Bounds {
            n,
            m,
            l,
            max_exact,
            common,
        } => (
            common,
            base("bounds", common),
            json!({"n": n, "m": m, "l": l.or(*m), "max_exact": max_exact}),
        ),
        Command::Clone {
            n,
            m,
            samples,
            mixed,
            common,
        } => (
            common,
            base("clone", common),
            json!({"n": n, "m": m, "samples": samples, "mixed": mixed}),
        ),
        Command::Estimate {
            m,
            l,
            samples,
            shots,
            common,
        } => (
            common,
            base("estimate", common),
            json!({"m": m, "l": l, "samples": samples, "shots": shots}),
        ),
        Command::Concat {
            n,
            m,
            l,
            samples,
            mixed,
            common,
        } => (
            common,
            base("concat", common),
            json!({"n": n, "m": m, "l": l, "samples": samples, "mixed": mixed}),
        ),
        Command::VerifyAll {
            samples,
            shots,
            common,
        } => (
            common,
            base("verify-all", common),
            json!({"samples": samples, "shots": shots, "grid": Grid::default()}),
        ),
    };
    if let (Value::Object(c), Value::Object(e)) = (&mut cfg, extra) {
        c.extend(e);
    }
    (common, cfg)
}

fn jobs<'a>(cmd: &'a Command, tol: &'a Tolerances) -> Vec<Job<'a>> {
    use commands::*;
    match cmd {
        Command::Bounds {
            n: Some(n),
            m: Some(m),
            l,
            ..
        } => {
            let l = l.unwrap_or(*m);
            vec![("bounds", Box::new(move || bounds_cell(*n, *m, l)))]
        }
        Command::Bounds { max_exact, .. } => {
            let g = Grid::default();
            vec![
                (
                    "bounds",
                    Box::new(move || {
                        let mut sec = Section::default();
                        for (n, m, l) in chains(g.max_n, g.max_l) {
                            sec.extend(bounds_cell(n, m, l)?);
                        }
                        Ok(sec)
                    }),
                ),
                ("exact-grids", Box::new(move || Ok(exact_grids(*max_exact)))),
            ]
        }
        Command::Clone {
            n,
            m,
            samples,
            mixed,
            common,
        } => vec![(
            "clone",
            Box::new(move || clone_cell(*n, *m, *samples, *mixed, common.seed, tol)),
        )],
        Command::Estimate {
            m,
            l,
            samples,
            shots,
            common,
        } => {
            let mut v: Vec<Job<'a>> = vec![(
                "estimate-exact",
                Box::new(move || estimate_exact_cell(*m, *samples, 3, common.seed, tol)),
            )];
            if *shots > 0 {
                v.push((
                    "estimate-monte-carlo",
                    Box::new(move || estimate_mc_cell(*m, *shots, common.seed, tol)),
                ));
            }
            if let Some(l) = l {
                v.push((
                    "composition",
                    Box::new(move || composition_cell(*m, *l, tol)),
                ));
            }
            v
        }
        Command::Concat {
            n,
            m,
            l,
            samples,
            mixed,
            common,
        } => vec![(
            "concat",
            Box::new(move || concat_cell(*n, *m, *l, *samples, *mixed, common.seed, tol)),
        )],
        Command::VerifyAll {
            samples,
            shots,
            common,
        } => verify_all_sections(&Grid::default(), *samples, *shots, common.seed, tol),
    }
}

fn is_usage(e: &qclone::Error) -> bool {
    matches!(
        e,
        qclone::Error::InvalidArgument(_) | qclone::Error::DimensionMismatch { .. }
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    validate(&cli.command);
    let (common, cfg) = config(&cli.command);
    let tol = common.tolerances();

    let started = Instant::now();
    let mut sections = serde_json::Map::new();
    let mut all = Section::default();
    for (name, job) in jobs(&cli.command, &tol) {
        let t0 = Instant::now();
        match job() {
            Ok(sec) => all.extend(sec),
            Err(e) if is_usage(&e) => usage_error(e),
            Err(e) => {
                eprintln!("error in {name}: {e}");
                return ExitCode::from(1);
            }
        }
        sections.insert(name.into(), json!(t0.elapsed().as_secs_f64()));
    }
    let timing = if common.timing {
        json!({"recorded": true, "total_seconds": started.elapsed().as_secs_f64(), "sections": sections})
    } else {
        json!({"recorded": false})
    };

    let report = Report {
        config: cfg,
        results: all
            .rows
            .iter()
            .map(|r| Value::Object(r.fields().clone()))
            .collect(),
        checks: all.checks,
        timing,
    };

    let to_stdout = common.output.is_none();
    let color = common.format == Format::Table
        && to_stdout
        && std::io::stdout().is_terminal()
        && std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty());
    let text = match common.format {
        Format::Json => render::json(&report),
        Format::Csv => render::csv(&report),
        Format::Table => render::table(&report, color),
    };
    let written = match &common.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(3);
    }

    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{} check(s) failed:", report.failures().count());
        for c in report.failures() {
            eprintln!(
                "  FAIL {} (n={}, m={}, l={}): expected {}, actual {}, tolerance {}",
                c.name,
                c.n.map_or("-".into(), |v| v.to_string()),
                c.m.map_or("-".into(), |v| v.to_string()),
                c.l.map_or("-".into(), |v| v.to_string()),
                c.expected_exact
                    .clone()
                    .unwrap_or_else(|| c.expected.to_string()),
                c.actual_exact
                    .clone()
                    .unwrap_or_else(|| c.actual.to_string()),
                c.tolerance
            );
        }
        ExitCode::from(1)
    }
}
