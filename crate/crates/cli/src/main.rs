//! `mipvu`: command-line front end for the lexicon, corpus, prediction and
//! evaluation pipeline.
//!
//! Exit status: 0 success, 1 other failure, 2 usage, 3 missing input file,
//! 4 invalid input (schema or validation).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};
use mipvu_core::config::RunConfig;

mod cmd;
mod fail;

use fail::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "mipvu",
    disable_version_flag = true,
    about = "Chinese metaphor identification toolkit"
)]
struct Cli {
    /// `key = value` run configuration; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// More log output (repeat for more).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,

    /// Print toolkit and format-schema versions.
    #[arg(long)]
    version: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a dictionary dump, resolve cross-references and write the
    /// resolved table, statistics and encoder worklist.
    DictBuild {
        #[arg(long)]
        dump: Option<PathBuf>,
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Lexicon statistics from a resolved table.
    DictStats {
        #[arg(long)]
        resolved: PathBuf,
        /// Adds the corpus coverage row.
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Write the statistics as JSON here instead of a table on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Share of corpus vocabulary found among dictionary headwords.
    Coverage {
        #[arg(long)]
        resolved: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Inspect an embedding store.
    Store {
        #[command(subcommand)]
        action: StoreAction,
    },
    /// Document-level train/dev/test split.
    Split {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated train,dev,test ratios.
        #[arg(long)]
        ratios: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corpus statistics per register and, with a split, per partition.
    Stats {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        split: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode raw model predictions into per-token labels.
    ParsePreds {
        #[arg(long)]
        preds: Option<PathBuf>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        tau: Option<f64>,
    },
    /// Score one run's labels against gold.
    Eval(EvalArgs),
    /// Mean and standard deviation over seeds, per model.
    Aggregate {
        /// Glob patterns matching run score files.
        #[arg(long, num_args = 1.., required = true)]
        runs: Vec<String>,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Render aggregates as a result table.
    Report {
        #[arg(long, value_name = "DIR")]
        aggregates: PathBuf,
        #[arg(long, default_value = "md")]
        format: String,
        #[arg(long, default_value = "main")]
        layout: String,
        /// Report path; a `.json` companion is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum StoreAction {
    /// Check header, payload and index consistency.
    Validate {
        #[arg(long, value_name = "DIR")]
        dir: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Print a token's vector, or the zero vector when it is not a headword.
    Lookup {
        token: String,
        #[arg(long, value_name = "DIR")]
        dir: PathBuf,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Gold corpus.
    #[arg(long)]
    gold: Option<PathBuf>,
    #[arg(long)]
    labels: PathBuf,
    #[arg(long)]
    split: Option<PathBuf>,
    #[arg(long, default_value = "test")]
    partition: String,
    #[arg(long)]
    register_breakdown: bool,
    /// Defaults to the labels file stem.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn version_text() -> String {
    format!(
        "mipvu {}\nformat-schema {}\nstore-format {}",
        env!("CARGO_PKG_VERSION"),
        mipvu_core::FORMAT_VERSION,
        mipvu_core::store::STORE_VERSION
    )
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let Some(command) = cli.command else {
        return Err(Failure::usage("no subcommand given (see --help)"));
    };
    match command {
        Command::DictBuild { dump, out } => cmd::dict_build(&cfg, dump, out),
        Command::DictStats {
            resolved,
            corpus,
            out,
        } => cmd::dict_stats(&resolved, corpus.as_deref(), out.as_deref()),
        Command::Coverage {
            resolved,
            corpus,
            out,
        } => cmd::coverage(&cfg, &resolved, corpus, out.as_deref()),
        Command::Store { action } => match action {
            StoreAction::Validate { dir, dim } => cmd::store_validate(&dir, dim),
            StoreAction::Lookup { token, dir, dim } => cmd::store_lookup(&dir, dim, &token),
        },
        Command::Split {
            corpus,
            seed,
            ratios,
            out,
        } => cmd::split(&cfg, corpus, seed, ratios.as_deref(), out),
        Command::Stats { corpus, split, out } => cmd::stats(&cfg, corpus, split, out.as_deref()),
        Command::ParsePreds {
            preds,
            corpus,
            out,
            tau,
        } => cmd::parse_preds(&cfg, preds, corpus, out, tau),
        Command::Eval(a) => cmd::eval(
            &cfg,
            cmd::EvalRequest {
                gold: a.gold,
                labels: a.labels,
                split: a.split,
                partition: a.partition,
                register_breakdown: a.register_breakdown,
                model: a.model,
                seed: a.seed,
                out: a.out,
            },
        ),
        Command::Aggregate { runs, out } => cmd::aggregate(&runs, &out),
        Command::Report {
            aggregates,
            format,
            layout,
            out,
        } => cmd::report(&aggregates, &format, &layout, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() {
                fail::EXIT_USAGE as u8
            } else {
                0
            });
        }
    };
    if cli.version {
        println!("{}", version_text());
        return ExitCode::SUCCESS;
    }
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        2 => log::LevelFilter::Debug,
        _ => log::LevelFilter::Trace,
    };
    env_logger::Builder::new()
        .filter_level(level)
        .format_timestamp(None)
        .init();

    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code as u8)
        }
    }
}
