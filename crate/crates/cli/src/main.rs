//! `hkr`: batch front end for graph enumeration, weights, the twisted
//! formality map and the verification suites. Every command prints a
//! versioned JSON report.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Overrides, RunConfig};
use crate::error::CliError;
use crate::report::Report;

#[derive(Parser, Debug)]
#[command(name = "hkr", version, about = "Twisted HKR formality toolkit on the formal disk")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// JSON run configuration; flags given here take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the report here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Weight cache (JSON lines).
    #[arg(long, global = true, value_name = "PATH", default_value = "weights.jsonl")]
    cache: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the admissible graphs with n aerial and m ground vertices.
    Graphs {
        n: usize,
        m: usize,
        #[arg(default_value_t = 0)]
        epsilon: i64,
        /// Attach vanishing-lemma tags.
        #[arg(long)]
        tags: bool,
    },
    /// Exact wheel weights or Monte-Carlo graph weights.
    Weights {
        #[command(subcommand)]
        mode: WeightsMode,
    },
    /// Graph side and closed form of the twisted first Taylor coefficient.
    Formality(FormalityArgs),
    /// Maurer-Cartan residuals and twisting.
    Twist(TwistArgs),
    /// Run a verification suite; exit code 1 on any failure.
    Verify(VerifyArgs),
    /// Todd and modified Todd series.
    Todd {
        #[arg(long, default_value_t = 10)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WeightsMode {
    /// W_1..W_L from the modified Bernoulli numbers.
    Closed { max_l: usize },
    /// Monte-Carlo integral of one graph, served from the cache when possible.
    Mc(McArgs),
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct McArgs {
    /// Graph JSON file.
    #[arg(long, value_name = "PATH")]
    graph: Option<PathBuf>,
    /// The graph Γ_0 with one aerial vertex and this many grounds.
    #[arg(long, value_name = "M")]
    gamma0: Option<usize>,
    /// A single wheel with this many spokes around its center.
    #[arg(long, value_name = "L")]
    wheel: Option<usize>,
}

#[derive(Args, Debug)]
struct FormalityArgs {
    /// Maurer-Cartan form JSON; defaults to ω_1 = t_2 t_3 ∂_1, ω_2 = t_1 t_3 ∂_2.
    #[arg(long, value_name = "PATH")]
    omega: Option<PathBuf>,
    /// Poly-vector field JSON.
    #[arg(long, value_name = "PATH", conflicts_with = "indices")]
    gamma: Option<PathBuf>,
    /// Basis poly-vector field by 1-based axes, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
    indices: Vec<usize>,
    #[arg(long)]
    cap: Option<i32>,
}

#[derive(Args, Debug)]
struct TwistArgs {
    /// Maurer-Cartan form JSON; defaults to ω_1 = t_2 t_3 ∂_1, ω_2 = t_1 t_3 ∂_2.
    #[arg(long, value_name = "PATH", conflicts_with = "toy")]
    omega: Option<PathBuf>,
    /// Push ω = η_1 a + η_2 b through the toy quadratic morphism instead.
    #[arg(long)]
    toy: bool,
    #[arg(long)]
    cap: Option<i32>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(value_enum)]
    suite: Suite,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    cap: Option<i32>,
    #[arg(long)]
    instances: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Gerstenhaber,
    Derivation,
    ClosedForm,
    Twisting,
    Todd,
    Hkr,
    WheelWeights,
    WheelClassification,
    McWeights,
    All,
}

fn overrides(cli: &Cli) -> Overrides {
    let mut o = Overrides {
        seed: cli.global.seed,
        samples: cli.global.samples,
        workers: cli.global.workers,
        ..Overrides::default()
    };
    match &cli.command {
        Command::Formality(a) => o.cap = a.cap,
        Command::Twist(a) => o.cap = a.cap,
        Command::Verify(a) => {
            o.d = a.d;
            o.s = a.s;
            o.cap = a.cap;
            o.instances = a.instances;
        }
        _ => {}
    }
    o
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let start = Instant::now();
    let cfg = RunConfig::load(cli.global.config.as_deref(), &overrides(cli))?;
    let (name, passed, result) = match &cli.command {
        Command::Graphs { n, m, epsilon, tags } => ("graphs", None, commands::graphs(*n, *m, *epsilon, *tags)?),
        Command::Weights { mode: WeightsMode::Closed { max_l } } => ("weights", None, commands::weights_closed(*max_l)?),
        Command::Weights { mode: WeightsMode::Mc(a) } => {
            let graph = commands::pick_graph(a.graph.as_deref(), a.gamma0, a.wheel)?;
            ("weights", None, commands::weights_mc(&graph, &cfg, &cli.global.cache)?)
        }
        Command::Formality(a) => {
            let (ok, v) = commands::formality(a.omega.as_deref(), a.gamma.as_deref(), &a.indices, &cfg)?;
            ("formality", Some(ok), v)
        }
        Command::Twist(a) => {
            let v = commands::twist(a.omega.as_deref(), a.toy, &cfg)?;
            let passed = a.toy.then(|| v["maurer_cartan"] == true);
            ("twist", passed, v)
        }
        Command::Verify(a) => {
            let (ok, v) = commands::verify(a.suite, &cfg)?;
            ("verify", Some(ok), v)
        }
        Command::Todd { order } => {
            let (ok, v) = commands::todd(*order)?;
            ("todd", Some(ok), v)
        }
    };
    Ok(Report::new(name, &cfg, passed, result, start.elapsed().as_secs_f64()))
}

fn emit(report: &Report, out: Option<&std::path::Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Output {
            path: p.display().to_string(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn status(outcome: &Result<Option<bool>, CliError>) -> u8 {
    match outcome {
        Ok(Some(false)) => 1,
        Ok(_) => 0,
        Err(e) => e.exit_code(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.global.out.as_deref();
    let outcome = run(&cli).and_then(|report| emit(&report, out).map(|_| report.passed));
    if let Err(e) = &outcome {
        eprintln!("hkr: {e}");
    }
    ExitCode::from(status(&outcome))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_statuses() {
        assert_eq!(status(&Ok(None)), 0);
        assert_eq!(status(&Ok(Some(true))), 0);
        assert_eq!(status(&Ok(Some(false))), 1);
        assert_eq!(status(&Err(CliError::Usage("x".into()))), 2);
        let io = std::io::Error::other("disk full");
        assert_eq!(status(&Err(CliError::Output { path: "r.json".into(), source: io })), 1);
    }
}
