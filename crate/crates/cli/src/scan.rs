//! `smellval scan`.

use std::path::{Path, PathBuf};

use smellval_core::detector::{detect, CandidateFile, DetectionConfig, SmellCandidate};
use smellval_core::source::{load_units, resolve_project, LoadError};

use crate::failure::input;
use crate::Format;

pub fn run(paths: &[PathBuf], config: Option<&Path>, out: Option<&Path>, format: Format) -> anyhow::Result<()> {
    let cfg = match config {
        Some(p) => DetectionConfig::load(p).map_err(|e| input(e.to_string()))?,
        None => DetectionConfig::default(),
    };
    let mut roots = Vec::new();
    for p in paths {
        let abs = p
            .canonicalize()
            .map_err(|e| input(format!("cannot read {}: {e}", p.display())))?;
        roots.push(abs);
    }
    let units = load_units(&roots, &cfg.parse).map_err(|e| match e {
        LoadError::Io { .. } => input(e.to_string()),
        other => other.into(),
    })?;
    for u in &units {
        for d in &u.diagnostics {
            eprintln!("warning: {}:{}: {}", u.path, d.line, d.message);
        }
    }
    let files = units.len();
    let model = resolve_project(units).map_err(|e| input(e.to_string()))?;
    let candidates = detect(&model, &cfg);
    let doc = CandidateFile::new(roots.iter().map(|r| r.display().to_string()).collect(), cfg, candidates);
    if let Some(out) = out {
        std::fs::write(out, doc.to_json()).map_err(|e| input(format!("cannot write {}: {e}", out.display())))?;
    }
    match format {
        Format::Json => print!("{}", doc.to_json()),
        Format::Text => print!("{}", table(&doc.candidates, files)),
    }
    Ok(())
}

fn table(candidates: &[SmellCandidate], files: usize) -> String {
    let rows: Vec<[String; 5]> = candidates
        .iter()
        .map(|c| {
            let triggers: Vec<String> = c.triggered_by.iter().map(|t| t.to_string()).collect();
            [
                c.id.clone(),
                c.smell.label().to_string(),
                c.entity.clone(),
                format!("{}:{}-{}", c.file, c.source_span.start, c.source_span.end),
                triggers.join("; "),
            ]
        })
        .collect();
    let header = ["ID", "SMELL", "ENTITY", "LOCATION", "TRIGGERED BY"];
    let mut widths = header.map(str::len);
    for r in &rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[&str]| {
        let mut s = String::new();
        for (i, cell) in cells.iter().enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(&format!("{cell:<w$}  ", w = widths[i]));
            }
        }
        s.push('\n');
        s
    };
    let mut out = String::new();
    if !rows.is_empty() {
        out.push_str(&line(&header));
        for r in &rows {
            out.push_str(&line(&r.each_ref().map(String::as_str)));
        }
    }
    out.push_str(&format!("{} candidates in {} files\n", rows.len(), files));
    out
}
