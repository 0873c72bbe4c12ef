use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{info, LevelFilter};

use wbf::commands::{self, GraphSource};
use wbf::{exit, CliError, Format, Output, Runner, DEFAULT_SEED};
use wbf_core::routing::Variant;
use wbf_core::trust::RedundancyMode;

const NODE_HELP: &str = "Node literal `(level,bits)`, e.g. `(6,0110111)`: exactly m binary digits, \
bit 0 rightmost. Parentheses are optional.";

/// Wrap-around butterfly topology, trust-bounded redundancy, multipath
/// routing and adversarial fault simulation.
///
/// Exit codes: 0 success, 1 I/O error, 2 usage error, 3 precondition not
/// met (e.g. endpoints closer than 2h), 4 a verification failed.
#[derive(Parser)]
#[command(name = "wbf", version, about, long_about)]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads for simulations (default: all cores). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// More log output on stderr (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Endpoints {
    /// Source node [default: (0,0...0)].
    #[arg(long, long_help = NODE_HELP)]
    v: Option<String>,
    /// Destination node.
    #[arg(long, long_help = NODE_HELP)]
    w: String,
}

#[derive(Subcommand)]
enum Command {
    /// Emit WBF(m).
    Build {
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum, default_value = "edges")]
        format: Format,
    },
    /// Unipath (bit-fixing) route.
    Route {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        ends: Endpoints,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The 2^h independent routes and their independence verdict.
    Multipath {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        ends: Endpoints,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Use the identity S-pattern assignment (exhibits shared nodes).
        #[arg(long)]
        literal: bool,
    },
    /// Effective redundancy of a pair, or of the whole graph with --all.
    Redundancy {
        /// Undirected edge list: two labels per line, `#` comments.
        #[arg(long, conflicts_with = "butterfly", required_unless_present = "butterfly")]
        graph: Option<PathBuf>,
        /// Use WBF(M) instead of a file.
        #[arg(long, value_name = "M")]
        butterfly: Option<u32>,
        #[arg(long)]
        h: u32,
        /// Source (a label from the file, or a node literal).
        #[arg(long)]
        v: Option<String>,
        #[arg(long)]
        w: Option<String>,
        /// Minimum over all pairs instead of one pair.
        #[arg(long)]
        all: bool,
        /// With --all, sample this many pairs instead of all of them.
        #[arg(long, requires = "all")]
        sample: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Exact and simulated failure probability over every (k, c), as CSV.
    Sweep {
        #[arg(long)]
        delta: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Network-level attack on a multipath route set, as a JSON report.
    Simulate {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        h: u32,
        #[command(flatten)]
        ends: Endpoints,
        /// Copies sent.
        #[arg(long)]
        k: u32,
        /// Cut nodes compromised.
        #[arg(long)]
        c: u32,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Route-construction property suite over a grid of dimensions.
    Verify {
        #[arg(long, default_value_t = 4)]
        min_m: u32,
        #[arg(long, default_value_t = 8)]
        max_m: u32,
        /// Destinations per (m, h).
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        literal: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn variant(literal: bool) -> Variant {
    if literal {
        Variant::Literal
    } else {
        Variant::Repaired
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let done = |text: String| Ok(Output { text, verified: true });
    match &cli.command {
        Command::Build { m, format } => done(commands::cmd_build(*m, *format)?),
        Command::Route { m, ends, format } => done(commands::cmd_route(*m, ends.v.as_deref(), &ends.w, *format)?),
        Command::Multipath { m, h, ends, format, literal } => {
            commands::cmd_multipath(*m, *h, ends.v.as_deref(), &ends.w, *format, variant(*literal))
        }
        Command::Redundancy { graph, butterfly, h, v, w, all, sample, seed, format } => {
            let source = match (graph, butterfly) {
                (Some(p), _) => GraphSource::File(p),
                (None, Some(m)) => GraphSource::Butterfly(*m),
                (None, None) => return Err(CliError::Usage("one of --graph or --butterfly is required".into())),
            };
            let mode = all.then(|| match sample {
                Some(pairs) => RedundancyMode::Sampled { pairs: *pairs, seed: *seed },
                None => RedundancyMode::Exhaustive,
            });
            done(commands::cmd_redundancy(source, *h, v.as_deref(), w.as_deref(), mode, *format)?)
        }
        Command::Sweep { delta, trials, seed } => {
            let runner = Runner::new(cli.workers)?;
            info!("sweep delta={delta} trials={trials} seed={seed}");
            done(commands::cmd_sweep(*delta, *trials, *seed, &runner)?)
        }
        Command::Simulate { m, h, ends, k, c, trials, seed } => {
            let runner = Runner::new(cli.workers)?;
            info!("simulate m={m} h={h} k={k} c={c} trials={trials} seed={seed}");
            done(commands::cmd_simulate(*m, *h, ends.v.as_deref(), &ends.w, *k, *c, *trials, *seed, &runner)?)
        }
        Command::Verify { min_m, max_m, samples, seed, literal, format } => {
            commands::cmd_verify(*min_m, *max_m, *samples, *seed, variant(*literal), *format)
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })?;
            info!("wrote {} bytes to {}", text.len(), path.display());
            Ok(())
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => LevelFilter::Warn,
        1 => LevelFilter::Info,
        _ => LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();

    let code = match run(&cli).and_then(|out| emit(&cli, &out.text).map(|_| out.verified)) {
        Ok(true) => exit::OK,
        Ok(false) => {
            eprintln!("wbf: verification failed");
            exit::VERIFICATION
        }
        Err(e) => {
            eprintln!("wbf: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
