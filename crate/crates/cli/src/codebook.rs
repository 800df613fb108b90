//! `smellval codebook FILE ...`: add, tag, merge and split heuristic codes.

use std::path::{Path, PathBuf};

use clap::Subcommand;
use smellval_core::review::{save_codebook, ArgumentRef, Codebook, ReviewSession, Stance};
use smellval_core::SmellKind;

use crate::failure::input;
use crate::report::{load_codebook, load_session};

#[derive(Subcommand)]
pub enum Action {
    /// Create a code; prints its id. Creates the file if needed.
    Add {
        #[arg(long)]
        smell: String,
        #[arg(long, value_parser = parse_stance)]
        stance: Stance,
        label: String,
    },
    /// Tag an argument (`session/candidate/index`) with a code.
    Tag {
        #[arg(long = "session", required = true)]
        sessions: Vec<PathBuf>,
        argument: String,
        code: String,
    },
    /// Merge two or more codes into a new one.
    Merge {
        #[arg(long)]
        label: String,
        #[arg(required = true, num_args = 2..)]
        codes: Vec<String>,
    },
    /// Split a code. Each `--part LABEL[=ARG,ARG...]` becomes a new code;
    /// unlisted arguments go to the first part.
    Split {
        code: String,
        #[arg(long = "part", required = true)]
        parts: Vec<String>,
    },
    /// List active codes.
    List {
        /// Include retired codes.
        #[arg(long)]
        all: bool,
    },
}

fn parse_stance(s: &str) -> Result<Stance, String> {
    match s {
        "accepting" | "accept" => Ok(Stance::Accepting),
        "rejecting" | "reject" => Ok(Stance::Rejecting),
        _ => Err(format!("`{s}` is not accepting or rejecting")),
    }
}

fn open(file: &Path, create: bool) -> anyhow::Result<Codebook> {
    if create && !file.exists() {
        return Ok(Codebook::new());
    }
    load_codebook(file)
}

pub fn run(file: &Path, action: Action) -> anyhow::Result<()> {
    let mut cb = open(file, matches!(action, Action::Add { .. }))?;
    let fail = |e: smellval_core::review::CodebookError| input(e.to_string());
    match action {
        Action::Add { smell, stance, label } => {
            let smell: SmellKind = smell.parse().map_err(|e: smellval_core::smell::UnknownSmellKind| input(e.to_string()))?;
            println!("{}", cb.add_code(&label, smell, stance));
        }
        Action::Tag { sessions, argument, code } => {
            let loaded: Vec<ReviewSession> = sessions.iter().map(|p| load_session(p)).collect::<anyhow::Result<_>>()?;
            let arg: ArgumentRef = argument.parse().map_err(fail)?;
            cb.code_argument(&loaded, &arg, &code).map_err(fail)?;
        }
        Action::Merge { label, codes } => {
            let ids: Vec<&str> = codes.iter().map(String::as_str).collect();
            println!("{}", cb.merge_codes(&ids, &label).map_err(fail)?);
        }
        Action::Split { code, parts } => {
            let mut parsed: Vec<(String, Vec<ArgumentRef>)> = Vec::new();
            for p in &parts {
                let (label, refs) = p.split_once('=').unwrap_or((p.as_str(), ""));
                let refs = refs
                    .split(',')
                    .filter(|r| !r.is_empty())
                    .map(|r| r.parse())
                    .collect::<Result<Vec<ArgumentRef>, _>>()
                    .map_err(fail)?;
                parsed.push((label.to_string(), refs));
            }
            let borrowed: Vec<(&str, Vec<ArgumentRef>)> =
                parsed.iter().map(|(l, r)| (l.as_str(), r.clone())).collect();
            for id in cb.split_code(&code, &borrowed).map_err(fail)? {
                println!("{id}");
            }
        }
        Action::List { all } => {
            for c in cb.codes.values().filter(|c| all || !c.retired) {
                let stance = match c.stance {
                    Stance::Accepting => "accepting",
                    Stance::Rejecting => "rejecting",
                };
                let retired = if c.retired { " (retired)" } else { "" };
                println!("{}\t{}\t{stance}\t{}{retired}", c.code_id, c.smell.item_prefix(), c.label);
            }
            return Ok(());
        }
    }
    save_codebook(&cb, file)?;
    Ok(())
}
