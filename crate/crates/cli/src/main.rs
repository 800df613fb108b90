//! `smellval`: detect smell candidates in Java sources, review them, and
//! report on the reviews.

mod codebook;
mod failure;
mod inspect;
mod interactive;
mod report;
mod scan;

use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use smellval_core::catalog::{all_items, catalog_json};
use smellval_server::{router, AppState};

use failure::{input, Failure};

#[derive(Parser)]
#[command(name = "smellval", version, about = "Human-in-the-loop validation of Java code smells")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CatalogFormat {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Parse Java sources and list smell candidates.
    Scan {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// Detection thresholds (TOML or JSON).
        #[arg(long, env = "SMELLVAL_CONFIG")]
        config: Option<PathBuf>,
        /// Write the candidates file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Metrics and item evidence for named entities.
    Inspect {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, env = "SMELLVAL_CONFIG")]
        config: Option<PathBuf>,
        /// `pkg.Type` or `pkg.Type#method(P1, P2)`; repeatable.
        #[arg(long = "entity", required = true)]
        entities: Vec<String>,
        /// Only this smell's items.
        #[arg(long)]
        smell: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Review candidates one by one in the terminal.
    Review {
        /// Session file; resumed if it exists.
        #[arg(long)]
        session: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        /// Require an existing session file.
        #[arg(long)]
        resume: bool,
        #[arg(long, env = "USER", default_value = "reviewer")]
        reviewer: String,
    },
    /// Argument statistics and code frequency tables.
    Report {
        #[arg(required = true)]
        sessions: Vec<PathBuf>,
        #[arg(long)]
        codebook: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Also write CSV files into this directory.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Fleiss' kappa across reviewers of the same candidates.
    Agree {
        #[arg(required = true)]
        sessions: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the validation item catalog.
    ExportCatalog {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: CatalogFormat,
        /// Leave out derived items.
        #[arg(long)]
        published: bool,
    },
    /// Serve the review API (and optionally a UI bundle).
    Serve {
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        sessions: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Directory with the built UI.
        #[arg(long = "static")]
        static_dir: Option<PathBuf>,
        /// Open the UI in a browser once listening.
        #[arg(long)]
        open: bool,
    },
    /// Curate heuristic codes over reviewer arguments.
    Codebook {
        /// Codebook file.
        file: PathBuf,
        #[command(subcommand)]
        action: codebook::Action,
    },
    /// Mark an argument as discarded (or restore it with --undo).
    Discard {
        #[arg(long)]
        session: PathBuf,
        candidate: String,
        index: usize,
        #[arg(long)]
        undo: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if matches!(cli.command, Command::Serve { .. }) {
        tracing_subscriber::filter::LevelFilter::INFO
    } else {
        tracing_subscriber::filter::LevelFilter::WARN
    };
    tracing_subscriber::fmt()
        .with_max_level(level)
        .with_writer(std::io::stderr)
        .init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(e.downcast_ref::<Failure>().map_or(failure::INTERNAL, |f| f.code))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Scan { paths, config, out, format } => scan::run(&paths, config.as_deref(), out.as_deref(), format),
        Command::Inspect { paths, config, entities, smell, format } => {
            inspect::run(&paths, config.as_deref(), &entities, smell.as_deref(), format)
        }
        Command::Review { session, candidates, resume, reviewer } => {
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            interactive::run(&session, &candidates, resume, &reviewer, &mut stdin.lock(), &mut stdout.lock())
        }
        Command::Report { sessions, codebook, format, csv } => {
            report::report(&sessions, codebook.as_deref(), format, csv.as_deref())
        }
        Command::Agree { sessions, format, csv } => report::agree(&sessions, format, csv.as_deref()),
        Command::ExportCatalog { out, format, published } => export_catalog(out, format, published),
        Command::Serve { candidates, sessions, port, bind, static_dir, open } => {
            let state = AppState::open(&candidates, &sessions).map_err(|e| input(format!("{e:#}")))?;
            let app = router(Arc::new(state), static_dir);
            let addr = SocketAddr::new(bind, port);
            if open {
                open_browser(&format!("http://{addr}/"));
            }
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(smellval_server::serve(addr, app))
        }
        Command::Codebook { file, action } => codebook::run(&file, action),
        Command::Discard { session, candidate, index, undo } => {
            let mut s = report::load_session(&session)?;
            s.set_discarded(&candidate, index, !undo).map_err(|e| input(e.to_string()))?;
            s.save(&session)?;
            Ok(())
        }
    }
}

fn export_catalog(out: Option<PathBuf>, format: CatalogFormat, published: bool) -> anyhow::Result<()> {
    let text = match format {
        CatalogFormat::Json if !published => catalog_json(),
        CatalogFormat::Json => {
            let items: Vec<_> = all_items().iter().filter(|i| !i.derived).collect();
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "schemaVersion": smellval_core::catalog::CATALOG_SCHEMA_VERSION,
                "items": items,
            }))?;
            s.push('\n');
            s
        }
        CatalogFormat::Tsv => all_items()
            .iter()
            .filter(|i| !(published && i.derived))
            .map(|i| format!("{}\t{}\n", i.id, i.text))
            .collect(),
    };
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn open_browser(url: &str) {
    let opener = if cfg!(target_os = "macos") { "open" } else { "xdg-open" };
    if std::process::Command::new(opener).arg(url).spawn().is_err() {
        eprintln!("open {url} in a browser");
    }
}
