//! The terminal review loop behind `smellval review`.
//!
//! Input is line based so the loop can be driven from a pipe. End of input
//! behaves like `q`: the session is saved and the command exits cleanly.

use std::io::{BufRead, Write};
use std::path::Path;

use anyhow::Context;
use smellval_core::catalog::{evaluate_evidence, items_for, Answer, EvidenceResult, Finding, ValidationItem};
use smellval_core::detector::{explain, CandidateFile, SmellCandidate};
use smellval_core::review::{create_session, Argument, CandidateEntry, Decision, ItemAnswer, ReviewSession, Verdict};
use smellval_core::source::{locate, ProjectModel};

use crate::failure::{input, mismatch};

/// Longest source excerpt shown before eliding.
const MAX_EXCERPT: usize = 40;

pub fn run<R: BufRead, W: Write>(
    session_path: &Path,
    candidates_path: &Path,
    resume: bool,
    reviewer: &str,
    inp: &mut R,
    out: &mut W,
) -> anyhow::Result<()> {
    let candidates = CandidateFile::load(candidates_path).map_err(|e| input(e.to_string()))?;
    let model = candidates.load_model().map_err(|e| input(e.to_string()))?;
    let mut session = open_session(session_path, &candidates, resume, reviewer)?;
    let total = session.candidate_set.len();
    writeln!(
        out,
        "session {} ({}): {} of {} candidates left",
        session.session_id,
        session.reviewer_id,
        session.pending_count(),
        total
    )?;

    while let Some(entry) = session.next_pending().cloned() {
        let c = candidates
            .find(&entry.id)
            .ok_or_else(|| mismatch(format!("candidate `{}` missing from candidates file", entry.id)))?;
        let position = total - session.pending_count() + 1;
        writeln!(out, "\n[{position}/{total}] {}", explain(c))?;
        show_source(out, &model, &candidates, c)?;
        if !answer_items(inp, out, &mut session, &model, &candidates, c)? {
            break;
        }
        match ask_verdict(inp, out)? {
            None => break,
            Some(verdict) => {
                session
                    .record_verdict(&c.id, verdict, None)
                    .context("recording verdict")?;
                session.save(session_path)?;
            }
        }
    }
    session.save(session_path)?;
    writeln!(
        out,
        "\n{} of {} candidates reviewed; saved {}",
        total - session.pending_count(),
        total,
        session_path.display()
    )?;
    Ok(())
}

fn open_session(
    path: &Path,
    candidates: &CandidateFile,
    resume: bool,
    reviewer: &str,
) -> anyhow::Result<ReviewSession> {
    if path.exists() {
        let s = ReviewSession::load(path).map_err(|e| input(e.to_string()))?;
        if let Some(c) = s.candidate_set.iter().find(|c| candidates.find(&c.id).is_none()) {
            return Err(mismatch(format!(
                "session {} reviews candidate `{}`, which is not in the candidates file",
                path.display(),
                c.id
            )));
        }
        return Ok(s);
    }
    if resume {
        return Err(input(format!("no session to resume at {}", path.display())));
    }
    let entries: Vec<CandidateEntry> = candidates.candidates.iter().map(CandidateEntry::from).collect();
    let (s, warnings) = create_session(&entries, reviewer).map_err(|e| input(e.to_string()))?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    s.save(path)?;
    Ok(s)
}

fn show_source<W: Write>(
    out: &mut W,
    model: &ProjectModel,
    candidates: &CandidateFile,
    c: &SmellCandidate,
) -> anyhow::Result<()> {
    if model.find_entity(&c.entity).is_none() {
        writeln!(out, "  (this entity no longer exists in the sources)")?;
    }
    let Some(path) = locate(&candidates.root_paths(), &c.file) else {
        writeln!(out, "  (source file {} not found)", c.file)?;
        return Ok(());
    };
    let text = String::from_utf8_lossy(&std::fs::read(&path)?).into_owned();
    let span = c.source_span;
    let lines: Vec<&str> = text
        .lines()
        .skip(span.start as usize - 1)
        .take(span.len() as usize)
        .collect();
    for (i, l) in lines.iter().take(MAX_EXCERPT).enumerate() {
        writeln!(out, "  {:>5} | {l}", span.start as usize + i)?;
    }
    if lines.len() > MAX_EXCERPT {
        writeln!(out, "        ... {} more lines", lines.len() - MAX_EXCERPT)?;
    }
    Ok(())
}

fn describe_finding(item: &ValidationItem, ev: &EvidenceResult) -> String {
    let supports = |a: Answer| {
        if a == item.polarity {
            "supports accepting"
        } else {
            "argues against"
        }
    };
    match ev.finding {
        Finding::Yes => format!("yes ({})", supports(Answer::Yes)),
        Finding::No => format!("no ({})", supports(Answer::No)),
        Finding::Indeterminate => "indeterminate".to_string(),
        Finding::HumanOnly => "your judgment".to_string(),
    }
}

/// Returns false when input ended.
fn answer_items<R: BufRead, W: Write>(
    inp: &mut R,
    out: &mut W,
    session: &mut ReviewSession,
    model: &ProjectModel,
    candidates: &CandidateFile,
    c: &SmellCandidate,
) -> anyhow::Result<bool> {
    for item in items_for(c.smell) {
        writeln!(out, "\n  {} {}", item.id, item.text)?;
        match evaluate_evidence(model, c, item, &candidates.config) {
            Ok(ev) => {
                writeln!(out, "    finding: {}", describe_finding(item, &ev))?;
                for f in &ev.facts {
                    let v = match &f.value {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    writeln!(out, "    {}: {v}", f.label)?;
                }
            }
            Err(e) => writeln!(out, "    no evidence: {e}")?,
        }
        let answer = loop {
            let Some(line) = ask(inp, out, "  answer [y]es [n]o [?]unsure [s]kip: ")? else {
                return Ok(false);
            };
            match line.as_str() {
                "y" | "yes" => break ItemAnswer::Yes,
                "n" | "no" => break ItemAnswer::No,
                "?" | "unsure" => break ItemAnswer::Unsure,
                "s" | "skip" | "" => break ItemAnswer::Skipped,
                _ => writeln!(out, "  please type y, n, ? or s")?,
            }
        };
        session.record_answer(&c.id, item.id, answer)?;
    }
    Ok(true)
}

/// `None` means quit.
fn ask_verdict<R: BufRead, W: Write>(inp: &mut R, out: &mut W) -> anyhow::Result<Option<Verdict>> {
    let decision = loop {
        let Some(line) = ask(inp, out, "\nverdict [a]ccept [r]eject [s]kip [q]uit: ")? else {
            return Ok(None);
        };
        match line.as_str() {
            "a" | "accept" => break Decision::Accept,
            "r" | "reject" => break Decision::Reject,
            "s" | "skip" => return Ok(Some(Verdict::new(Decision::Skip, Vec::new()))),
            "q" | "quit" => return Ok(None),
            _ => writeln!(out, "please type a, r, s or q")?,
        }
    };
    loop {
        writeln!(out, "arguments, one per line; empty line to finish:")?;
        let mut arguments = Vec::new();
        while let Some(line) = ask(inp, out, "> ")? {
            if line.is_empty() {
                break;
            }
            arguments.push(Argument::new(line));
        }
        if !arguments.is_empty() {
            return Ok(Some(Verdict::new(decision, arguments)));
        }
        match ask(inp, out, "no arguments given; record as unjustified? [y/n]: ")?.as_deref() {
            Some("y" | "yes") => return Ok(Some(Verdict::unjustified(decision))),
            None => return Ok(None),
            _ => {}
        }
    }
}

/// One trimmed line, or `None` at end of input.
fn ask<R: BufRead, W: Write>(inp: &mut R, out: &mut W, prompt: &str) -> anyhow::Result<Option<String>> {
    write!(out, "{prompt}")?;
    out.flush()?;
    let mut line = String::new();
    if inp.read_line(&mut line)? == 0 {
        writeln!(out)?;
        return Ok(None);
    }
    Ok(Some(line.trim().to_string()))
}
