//! `smellval inspect`: metrics and item evidence for named entities.

use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use smellval_core::catalog::{evaluate_item, items_for};
use smellval_core::detector::{allowed_kinds, DetectionConfig};
use smellval_core::metrics::compute_metrics;
use smellval_core::source::load_project_with;
use smellval_core::SmellKind;

use crate::failure::input;
use crate::Format;

pub fn run(
    paths: &[PathBuf],
    config: Option<&Path>,
    entities: &[String],
    smell: Option<&str>,
    format: Format,
) -> anyhow::Result<()> {
    let cfg = match config {
        Some(p) => DetectionConfig::load(p).map_err(|e| input(e.to_string()))?,
        None => DetectionConfig::default(),
    };
    let smell: Option<SmellKind> = smell
        .map(|s| s.parse())
        .transpose()
        .map_err(|e: smellval_core::smell::UnknownSmellKind| input(e.to_string()))?;
    let model = load_project_with(paths, &cfg.parse).map_err(|e| input(e.to_string()))?;
    let mut docs = Vec::new();
    for name in entities {
        let e = model
            .find_entity(name)
            .ok_or_else(|| input(format!("no entity named `{name}`")))?;
        let metrics = compute_metrics(&model, &e)?;
        let mut evidence = Vec::new();
        for s in SmellKind::ALL {
            if smell.is_some_and(|x| x != s) || !allowed_kinds(s).contains(&e.kind()) {
                continue;
            }
            for item in items_for(s) {
                evidence.push(evaluate_item(&model, &e, item, &cfg)?);
            }
        }
        docs.push(json!({
            "entity": model.entity_name(&e),
            "kind": e.kind(),
            "metrics": metrics,
            "evidence": evidence,
        }));
    }
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&Value::Array(docs))?),
        Format::Text => {
            for d in &docs {
                println!("{} ({})", d["entity"].as_str().unwrap_or("?"), d["kind"].as_str().unwrap_or("?"));
                for (k, v) in d["metrics"].as_object().into_iter().flatten() {
                    println!("  {k} = {v}");
                }
                for ev in d["evidence"].as_array().into_iter().flatten() {
                    println!("  {}: {}", ev["item"].as_str().unwrap_or("?"), ev["finding"].as_str().unwrap_or("?"));
                }
            }
        }
    }
    Ok(())
}
