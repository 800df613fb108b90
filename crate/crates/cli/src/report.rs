//! `smellval report` and `smellval agree`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use smellval_core::review::{agreement, session_stats, AgreementError, Codebook, FrequencyTable, ReviewSession};
use smellval_core::SmellKind;

use crate::failure::{input, mismatch};
use crate::Format;

pub fn load_session(path: &Path) -> anyhow::Result<ReviewSession> {
    ReviewSession::load(path).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn load_sessions(paths: &[PathBuf]) -> anyhow::Result<Vec<ReviewSession>> {
    let sessions: Vec<ReviewSession> = paths.iter().map(|p| load_session(p)).collect::<anyhow::Result<_>>()?;
    let mut seen = BTreeSet::new();
    for s in &sessions {
        if !seen.insert(&s.session_id) {
            return Err(mismatch(format!("session `{}` given more than once", s.session_id)));
        }
    }
    Ok(sessions)
}

pub fn load_codebook(path: &Path) -> anyhow::Result<Codebook> {
    let text = std::fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Codebook::from_json(&text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn write_csv(dir: &Path, name: &str, text: &str) -> anyhow::Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

pub fn report(paths: &[PathBuf], codebook: Option<&Path>, format: Format, csv: Option<&Path>) -> anyhow::Result<()> {
    let sessions = load_sessions(paths)?;
    let stats = session_stats(&sessions);
    let tables: Vec<FrequencyTable> = match codebook {
        Some(p) => {
            let cb = load_codebook(p)?;
            SmellKind::ALL
                .iter()
                .map(|s| cb.frequency_table(&sessions, *s))
                .filter(|t| !t.is_empty())
                .collect()
        }
        None => Vec::new(),
    };
    if let Some(dir) = csv {
        let v = serde_json::to_value(&stats)?;
        let mut rows = String::from("metric,value\n");
        for (k, val) in v.as_object().into_iter().flatten() {
            rows.push_str(&format!("{k},{val}\n"));
        }
        write_csv(dir, "stats.csv", &rows)?;
        for t in &tables {
            write_csv(dir, &format!("frequency-{}.csv", t.smell.item_prefix()), &t.to_csv())?;
        }
    }
    match format {
        Format::Json => {
            let doc = json!({ "stats": stats, "frequencyTables": tables });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        Format::Text => {
            print!("{}", stats.to_text());
            for t in &tables {
                print!("\n{}", t.to_text());
            }
        }
    }
    Ok(())
}

pub fn agree(paths: &[PathBuf], format: Format, csv: Option<&Path>) -> anyhow::Result<()> {
    if paths.len() < 2 {
        return Err(input("agreement needs at least two session files"));
    }
    let sessions = load_sessions(paths)?;
    let reports = agreement(&sessions).map_err(|e| match e {
        AgreementError::TooFewSessions(_) => input(e.to_string()),
        AgreementError::DisjointCandidateSets(..) => mismatch(e.to_string()),
    })?;
    if let Some(dir) = csv {
        let mut rows = String::from("scope,raters,subjects,dropped,kappa\n");
        for r in &reports {
            let k = r.kappa.map_or("undefined".to_string(), |k| k.to_string());
            rows.push_str(&format!("{},{},{},{},{k}\n", r.scope(), r.raters, r.subjects, r.dropped));
            let name = r.smell.map_or("all", |s| s.item_prefix());
            write_csv(dir, &format!("matrix-{name}.csv"), &r.matrix_csv())?;
        }
        write_csv(dir, "agreement.csv", &rows)?;
    }
    match format {
        Format::Json => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).unwrap_or(Value::Null);
                    v["scope"] = json!(r.scope());
                    v
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&json!({ "reports": rows }))?);
        }
        Format::Text => {
            println!("{:<24} {:>6} {:>8} {:>7} {:>9}", "SCOPE", "RATERS", "SUBJECTS", "DROPPED", "KAPPA");
            for r in &reports {
                let k = r.kappa.map_or("undefined".to_string(), |k| format!("{k:.4}"));
                println!("{:<24} {:>6} {:>8} {:>7} {:>9}", r.scope(), r.raters, r.subjects, r.dropped, k);
            }
        }
    }
    Ok(())
}
