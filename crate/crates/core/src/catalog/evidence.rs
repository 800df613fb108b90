//! Evidence evaluators. Auto items get a finding computed from metrics;
//! assistive and judgment items get facts for the reviewer to weigh.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Mode, ValidationItem};
use crate::detector::{DetectionConfig, SmellCandidate};
use crate::metrics::{
    classify_accessor, compute_metrics, external_data_access, inherited_unused, AccessorKind,
    MetricId, MetricSet,
};
use crate::smell::SmellKind;
use crate::source::{EntityKind, EntityRef, MethodDecl, ProjectModel, TypeDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Finding {
    Yes,
    No,
    Indeterminate,
    HumanOnly,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    pub label: String,
    pub value: Value,
}

fn fact(label: &str, value: impl Into<Value>) -> Fact {
    Fact {
        label: label.to_string(),
        value: value.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EvidenceResult {
    pub item: String,
    pub finding: Finding,
    pub facts: Vec<Fact>,
    pub computed_from: Vec<MetricId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvidenceError {
    #[error("entity `{0}` no longer exists in the model")]
    EntityVanished(String),
    #[error("item {item} does not apply to {smell}")]
    ItemMismatch { item: String, smell: SmellKind },
}

fn yes_if(cond: bool) -> Finding {
    if cond {
        Finding::Yes
    } else {
        Finding::No
    }
}

/// Metrics an auto or assistive item reads.
fn inputs(item_id: &str, kind: EntityKind) -> Vec<MetricId> {
    use MetricId::*;
    match (item_id, kind) {
        ("DC-1", _) => vec![NonAccessorMethodCount],
        ("DC-2", _) => vec![Nom],
        ("DC-3", _) => vec![ExternalDataAccessCount],
        ("FE-1", _) => vec![ForeignCallCount, ForeignProviderCount],
        ("GC-3", _) => vec![Loc, Nom],
        ("LPL-1", _) => vec![ParamCount],
        ("LPL-2", _) => vec![ComplexParamCount],
        ("LPL-4", _) => vec![UnusedParamCount],
        ("MM-2", _) => vec![DelegationRatio],
        ("RB-2", _) => vec![InheritedUnusedCount, LocalAncestorCount],
        ("RB-4", _) => vec![OverrideCount, Nom, OverrideRatio],
        ("SG-1", EntityKind::Type) => vec![ConcreteMethodCount],
        ("SG-3", _) => vec![ReverseRefCount],
        _ => Vec::new(),
    }
}

/// The finding of an auto item, from metrics and thresholds alone.
/// Non-auto items yield `humanOnly` (judgment) or `indeterminate`.
pub fn finding_from_metrics(
    item: &ValidationItem,
    kind: EntityKind,
    ms: &MetricSet,
    cfg: &DetectionConfig,
) -> Finding {
    use MetricId::*;
    match item.mode {
        Mode::Judgment => return Finding::HumanOnly,
        Mode::Assistive => return Finding::Indeterminate,
        Mode::Auto => {}
    }
    let count = |m| ms.count(m);
    match (item.id, kind) {
        ("DC-1", _) => yes_if(count(NonAccessorMethodCount) > 0),
        ("DC-2", _) => yes_if(count(Nom) > 0),
        ("DC-3", _) => yes_if(count(ExternalDataAccessCount) > 0),
        ("FE-1", _) => yes_if(count(ForeignCallCount) >= cfg.envy_min_foreign_calls),
        ("LPL-1", _) => yes_if(count(ParamCount) >= cfg.lpl_min_params),
        ("LPL-2", _) => yes_if(count(ComplexParamCount) >= cfg.lpl_min_complex_params),
        ("LPL-4", _) => yes_if(count(UnusedParamCount) == 0),
        ("MM-2", _) => yes_if(ms.get(DelegationRatio) >= cfg.middle_min_delegation_ratio),
        ("RB-2", _) if count(LocalAncestorCount) == 0 => Finding::Indeterminate,
        ("RB-2", _) => yes_if(count(InheritedUnusedCount) >= 1),
        ("RB-4", _) => yes_if(ms.get(OverrideRatio) >= cfg.bequest_min_override_ratio),
        ("SG-1", EntityKind::Type) => yes_if(count(ConcreteMethodCount) == 0),
        ("SG-3", _) => yes_if(count(ReverseRefCount) > 0),
        _ => Finding::Indeterminate,
    }
}

/// Evaluates an item for a candidate.
pub fn evaluate_evidence(
    model: &ProjectModel,
    c: &SmellCandidate,
    item: &ValidationItem,
    cfg: &DetectionConfig,
) -> Result<EvidenceResult, EvidenceError> {
    if item.smell != c.smell {
        return Err(EvidenceError::ItemMismatch {
            item: item.id.to_string(),
            smell: c.smell,
        });
    }
    let entity = model
        .find_entity(&c.entity)
        .filter(|e| e.kind() == c.entity_kind)
        .ok_or_else(|| EvidenceError::EntityVanished(c.entity.clone()))?;
    evaluate_item(model, &entity, item, cfg)
}

/// Evaluates an item for any entity, candidate or not.
pub fn evaluate_item(
    model: &ProjectModel,
    entity: &EntityRef,
    item: &ValidationItem,
    cfg: &DetectionConfig,
) -> Result<EvidenceResult, EvidenceError> {
    let vanished = || EvidenceError::EntityVanished(format!("{entity:?}"));
    let ms = compute_metrics(model, entity).map_err(|_| vanished())?;
    let t = model.type_decl(entity.type_name()).ok_or_else(vanished)?;
    let method = match entity {
        EntityRef::Method(r) => Some(model.method(r).ok_or_else(vanished)?),
        EntityRef::Type(_) => None,
    };
    let kind = entity.kind();
    let finding = finding_from_metrics(item, kind, &ms, cfg);
    let computed_from = inputs(item.id, kind);
    let facts = facts_for(model, item.id, t, method, &ms);
    Ok(EvidenceResult {
        item: item.id.to_string(),
        finding,
        facts,
        computed_from,
    })
}

fn names<'a>(it: impl IntoIterator<Item = &'a str>) -> Value {
    Value::from(it.into_iter().map(str::to_string).collect::<Vec<_>>())
}

fn param_list(m: &MethodDecl) -> Value {
    names(m.params.iter().map(|p| p.name.as_str()))
}

fn facts_for(
    model: &ProjectModel,
    item_id: &str,
    t: &TypeDecl,
    m: Option<&MethodDecl>,
    ms: &MetricSet,
) -> Vec<Fact> {
    use MetricId::*;
    let n = |id| json!(ms.count(id));
    match item_id {
        "DC-1" => {
            let others: Vec<&str> = t
                .plain_methods()
                .filter(|(_, m)| classify_accessor(m) == AccessorKind::Other)
                .map(|(_, m)| m.name.as_str())
                .collect();
            vec![
                fact("non-accessor methods", n(NonAccessorMethodCount)),
                fact("accessors", n(AccessorCount)),
                fact("non-accessor method names", names(others)),
            ]
        }
        "DC-2" => vec![
            fact("methods excluding constructors", n(Nom)),
            fact("constructors", n(ConstructorCount)),
        ],
        "DC-3" => {
            let sites: Vec<String> = external_data_access(model, t)
                .iter()
                .filter_map(|r| {
                    let md = model.method(r)?;
                    Some(format!("{}#{}", r.type_name, md.name))
                })
                .collect();
            vec![
                fact("external methods touching fields or accessors", n(ExternalDataAccessCount)),
                fact("accessing methods", json!(sites)),
            ]
        }
        "FE-1" | "FE-2" => {
            let mut facts = vec![
                fact("foreign calls", n(ForeignCallCount)),
                fact("own accesses", n(OwnAccessCount)),
                fact("foreign providers", n(ForeignProviderCount)),
            ];
            if let Some(m) = m {
                let p = m.profile();
                let mut per: BTreeMap<&str, u32> = BTreeMap::new();
                for ((recv, _), c) in p.qualified_calls.iter().chain(&p.foreign_accesses) {
                    *per.entry(recv.as_str()).or_default() += c;
                }
                facts.push(fact("uses per receiver", json!(per)));
                if item_id == "FE-2" {
                    facts.push(fact("own fields", names(t.fields.iter().map(|f| f.name.as_str()))));
                }
            }
            facts
        }
        "GC-1" | "GC-2" => {
            let clusters = method_clusters(t);
            vec![
                fact("method clusters", json!(clusters.len())),
                fact("clusters", json!(clusters)),
                fact("loc", n(Loc)),
                fact("methods", n(Nom)),
            ]
        }
        "GC-3" => vec![
            fact("loc", n(Loc)),
            fact("methods", n(Nom)),
            fact("fields", n(Noa)),
        ],
        "LPL-1" => vec![fact("parameters", n(ParamCount))],
        "LPL-2" => {
            let complex: Vec<String> = m
                .map(|m| {
                    m.params
                        .iter()
                        .filter(|p| !p.is_primitive)
                        .map(|p| format!("{} {}", p.type_name, p.name))
                        .collect()
                })
                .unwrap_or_default();
            vec![
                fact("complex parameters", n(ComplexParamCount)),
                fact("complex parameter list", json!(complex)),
            ]
        }
        "LPL-3" => {
            let typed: Vec<String> = m
                .map(|m| m.params.iter().map(|p| format!("{} {}", p.type_name, p.name)).collect())
                .unwrap_or_default();
            vec![fact("parameters", json!(typed))]
        }
        "LPL-4" | "LPL-5" => {
            let unused: Vec<&str> = m
                .map(|m| {
                    m.params
                        .iter()
                        .filter(|p| m.has_body() && !p.used_in_body)
                        .map(|p| p.name.as_str())
                        .collect()
                })
                .unwrap_or_default();
            let mut facts = vec![
                fact("unused parameters", n(UnusedParamCount)),
                fact("unused parameter names", names(unused)),
            ];
            if let Some(m) = m {
                facts.push(fact("has body", json!(m.has_body())));
                facts.push(fact("parameter names", param_list(m)));
            }
            facts
        }
        "LPL-6" => {
            let mut by_type: BTreeMap<String, Vec<&str>> = BTreeMap::new();
            if let Some(m) = m {
                for p in &m.params {
                    by_type.entry(p.type_name.clone()).or_default().push(&p.name);
                }
            }
            vec![
                fact("parameters by type", json!(by_type)),
                fact("primitive parameter ratio", json!(ms.get(PrimitiveParamRatio))),
            ]
        }
        "MM-1" | "MM-2" => {
            let (fwd, own): (Vec<&MethodDecl>, Vec<&MethodDecl>) = t
                .plain_methods()
                .map(|(_, m)| m)
                .partition(|m| m.body.as_ref().is_some_and(|p| p.single_forward));
            vec![
                fact("delegation ratio", json!(ms.get(DelegationRatio))),
                fact("delegating methods", names(fwd.iter().map(|m| m.name.as_str()))),
                fact("other methods", names(own.iter().map(|m| m.name.as_str()))),
            ]
        }
        "PO-1" | "PO-2" => {
            let vars: Vec<(&str, &str)> = match m {
                Some(m) => m
                    .params
                    .iter()
                    .filter(|p| p.is_primitive)
                    .map(|p| (p.name.as_str(), p.type_name.as_str()))
                    .collect(),
                None => t
                    .fields
                    .iter()
                    .filter(|f| f.is_primitive)
                    .map(|f| (f.name.as_str(), f.type_name.as_str()))
                    .collect(),
            };
            let listed: Vec<String> = vars.iter().map(|(n, ty)| format!("{ty} {n}")).collect();
            vec![
                fact("primitive variables", json!(listed)),
                fact("groups by name prefix", json!(prefix_groups(vars.iter().map(|v| v.0)))),
            ]
        }
        "RB-1" | "RB-2" | "RB-3" | "RB-4" => {
            let unused: Vec<String> = inherited_unused(model, t)
                .iter()
                .map(|(owner, md)| format!("{owner}#{}", md.name))
                .collect();
            let overridden: Vec<&str> = t
                .plain_methods()
                .filter(|(_, m)| m.is_override)
                .map(|(_, m)| m.name.as_str())
                .collect();
            let refusing: Vec<&str> = t
                .plain_methods()
                .filter(|(_, m)| m.is_override && only_throws(m))
                .map(|(_, m)| m.name.as_str())
                .collect();
            let parents: Vec<String> = model
                .inheritance_edges
                .iter()
                .filter(|e| e.child == t.qualified_name)
                .map(|e| {
                    if e.external {
                        format!("{} (external)", e.parent)
                    } else {
                        e.parent.clone()
                    }
                })
                .collect();
            vec![
                fact("parents", json!(parents)),
                fact("inherited methods never used", n(InheritedUnusedCount)),
                fact("unused inherited methods", json!(unused)),
                fact("overridden methods", names(overridden)),
                fact("overrides that only throw", names(refusing)),
                fact("override ratio", json!(ms.get(OverrideRatio))),
            ]
        }
        "SG-1" | "SG-2" | "SG-4" | "SG-3" => {
            let mut facts = Vec::new();
            match m {
                Some(m) => {
                    facts.push(fact("statements", n(StatementCount)));
                    facts.push(fact("references", n(ReverseRefCount)));
                    facts.push(fact("overrides", json!(m.is_override)));
                }
                None => {
                    facts.push(fact("concrete methods", n(ConcreteMethodCount)));
                    facts.push(fact("project subtypes", json!(model.local_subtypes(&t.qualified_name))));
                    facts.push(fact("using types", json!(model.users_of(&t.qualified_name))));
                    facts.push(fact("abstract", json!(t.is_abstract())));
                }
            }
            facts
        }
        _ => Vec::new(),
    }
}

fn only_throws(m: &MethodDecl) -> bool {
    m.body.as_ref().is_some_and(|p| p.statement_count == 1)
        && m.body_text.as_deref().is_some_and(|b| b.trim_start().starts_with("throw "))
}

/// Groups methods that share own fields (directly or transitively).
fn method_clusters(t: &TypeDecl) -> Vec<Vec<String>> {
    let methods: Vec<&MethodDecl> = t.plain_methods().map(|(_, m)| m).collect();
    let mut parent: Vec<usize> = (0..methods.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    let mut field_owner: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, m) in methods.iter().enumerate() {
        let Some(p) = &m.body else { continue };
        let touched = p.own_field_reads.keys().chain(p.own_field_writes.keys());
        for f in touched {
            match field_owner.get(f.as_str()) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    field_owner.insert(f.as_str(), i);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (i, m) in methods.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(m.name.clone());
    }
    groups.into_values().collect()
}

fn name_prefix(name: &str) -> String {
    let end = name
        .char_indices()
        .skip(1)
        .find(|(_, c)| c.is_uppercase() || *c == '_')
        .map_or(name.len(), |(i, _)| i);
    name[..end].to_lowercase()
}

/// Variables sharing a leading camel-case word, groups of two or more.
fn prefix_groups<'a>(names: impl Iterator<Item = &'a str>) -> BTreeMap<String, Vec<String>> {
    let mut groups: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for n in names {
        groups.entry(name_prefix(n)).or_default().push(n.to_string());
    }
    groups.retain(|_, v| v.len() >= 2);
    groups
}
