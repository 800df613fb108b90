//! Metric values computed from a resolved [`ProjectModel`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::source::{EntityRef, MemberKind, MethodDecl, MethodRef, ProjectModel, TypeDecl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MetricId {
    Loc,
    Nom,
    Noa,
    ParamCount,
    ComplexParamCount,
    UnusedParamCount,
    AccessorCount,
    NonAccessorMethodCount,
    DelegationRatio,
    ForeignCallCount,
    OwnAccessCount,
    ForeignProviderCount,
    OverrideCount,
    InheritedUnusedCount,
    PrimitiveFieldCount,
    PrimitiveParamRatio,
    ConstructorCount,
    OverrideRatio,
    OwnAccessRatio,
    LocalSubtypeCount,
    ConcreteMethodCount,
    ReverseRefCount,
    StatementCount,
    ExternalDataAccessCount,
    LocalAncestorCount,
}

impl MetricId {
    pub const TYPE_METRICS: [MetricId; 18] = [
        MetricId::Loc,
        MetricId::Nom,
        MetricId::Noa,
        MetricId::AccessorCount,
        MetricId::NonAccessorMethodCount,
        MetricId::DelegationRatio,
        MetricId::OverrideCount,
        MetricId::InheritedUnusedCount,
        MetricId::PrimitiveFieldCount,
        MetricId::ConstructorCount,
        MetricId::OverrideRatio,
        MetricId::LocalSubtypeCount,
        MetricId::ConcreteMethodCount,
        MetricId::ReverseRefCount,
        MetricId::ForeignCallCount,
        MetricId::OwnAccessCount,
        MetricId::ExternalDataAccessCount,
        MetricId::LocalAncestorCount,
    ];

    pub const METHOD_METRICS: [MetricId; 11] = [
        MetricId::Loc,
        MetricId::ParamCount,
        MetricId::ComplexParamCount,
        MetricId::UnusedParamCount,
        MetricId::ForeignCallCount,
        MetricId::OwnAccessCount,
        MetricId::ForeignProviderCount,
        MetricId::PrimitiveParamRatio,
        MetricId::OwnAccessRatio,
        MetricId::ReverseRefCount,
        MetricId::StatementCount,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MetricId::Loc => "loc",
            MetricId::Nom => "nom",
            MetricId::Noa => "noa",
            MetricId::ParamCount => "paramCount",
            MetricId::ComplexParamCount => "complexParamCount",
            MetricId::UnusedParamCount => "unusedParamCount",
            MetricId::AccessorCount => "accessorCount",
            MetricId::NonAccessorMethodCount => "nonAccessorMethodCount",
            MetricId::DelegationRatio => "delegationRatio",
            MetricId::ForeignCallCount => "foreignCallCount",
            MetricId::OwnAccessCount => "ownAccessCount",
            MetricId::ForeignProviderCount => "foreignProviderCount",
            MetricId::OverrideCount => "overrideCount",
            MetricId::InheritedUnusedCount => "inheritedUnusedCount",
            MetricId::PrimitiveFieldCount => "primitiveFieldCount",
            MetricId::PrimitiveParamRatio => "primitiveParamRatio",
            MetricId::ConstructorCount => "constructorCount",
            MetricId::OverrideRatio => "overrideRatio",
            MetricId::OwnAccessRatio => "ownAccessRatio",
            MetricId::LocalSubtypeCount => "localSubtypeCount",
            MetricId::ConcreteMethodCount => "concreteMethodCount",
            MetricId::ReverseRefCount => "reverseRefCount",
            MetricId::StatementCount => "statementCount",
            MetricId::ExternalDataAccessCount => "externalDataAccessCount",
            MetricId::LocalAncestorCount => "localAncestorCount",
        }
    }

    pub fn is_ratio(self) -> bool {
        matches!(
            self,
            MetricId::DelegationRatio
                | MetricId::PrimitiveParamRatio
                | MetricId::OverrideRatio
                | MetricId::OwnAccessRatio
        )
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricSet(BTreeMap<MetricId, f64>);

impl MetricSet {
    /// Value of a metric; zero when the metric does not apply.
    pub fn get(&self, id: MetricId) -> f64 {
        self.0.get(&id).copied().unwrap_or(0.0)
    }

    pub fn try_get(&self, id: MetricId) -> Option<f64> {
        self.0.get(&id).copied()
    }

    pub fn count(&self, id: MetricId) -> u32 {
        self.get(id) as u32
    }

    pub fn iter(&self) -> impl Iterator<Item = (MetricId, f64)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    fn set(&mut self, id: MetricId, value: f64) {
        self.0.insert(id, value);
    }

    fn set_count(&mut self, id: MetricId, value: usize) {
        self.0.insert(id, value as f64);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unknown method {0}#{1}")]
    UnknownMethod(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AccessorKind {
    Getter,
    Setter,
    Constructor,
    Other,
}

fn has_prefix(name: &str, prefix: &str) -> bool {
    name.strip_prefix(prefix)
        .and_then(|rest| rest.chars().next())
        .is_some_and(|c| !c.is_lowercase())
}

/// Classifies a method from its shape and body profile alone.
pub fn classify_accessor(m: &MethodDecl) -> AccessorKind {
    if m.is_constructor {
        return AccessorKind::Constructor;
    }
    let Some(p) = &m.body else {
        return AccessorKind::Other;
    };
    let calls = p.local_call_count() + p.qualified_call_count();
    if (has_prefix(&m.name, "get") || has_prefix(&m.name, "is"))
        && m.params.is_empty()
        && p.statement_count == 1
        && p.own_read_count() == 1
        && p.own_write_count() == 0
        && calls == 0
        && p.foreign_access_count() == 0
    {
        return AccessorKind::Getter;
    }
    if has_prefix(&m.name, "set") && m.params.len() == 1 && p.own_write_count() == 1 && calls == 0 {
        return AccessorKind::Setter;
    }
    AccessorKind::Other
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Type-level metrics.
pub fn compute_type_metrics(model: &ProjectModel, t: &str) -> Result<MetricSet, MetricsError> {
    let decl = model
        .type_decl(t)
        .ok_or_else(|| MetricsError::UnknownType(t.to_string()))?;
    let mut ms = MetricSet::default();
    let plain: Vec<&MethodDecl> = decl.plain_methods().map(|(_, m)| m).collect();
    let nom = plain.len();
    let kinds: Vec<AccessorKind> = plain.iter().map(|m| classify_accessor(m)).collect();
    let accessors = kinds
        .iter()
        .filter(|k| matches!(k, AccessorKind::Getter | AccessorKind::Setter))
        .count();
    let delegating = plain
        .iter()
        .filter(|m| m.body.as_ref().is_some_and(|p| p.single_forward))
        .count();
    let overrides = plain.iter().filter(|m| m.is_override).count();

    ms.set_count(MetricId::Loc, decl.span.len() as usize);
    ms.set_count(MetricId::Nom, nom);
    ms.set_count(MetricId::Noa, decl.fields.len());
    ms.set_count(MetricId::AccessorCount, accessors);
    ms.set_count(MetricId::NonAccessorMethodCount, nom - accessors);
    ms.set_count(MetricId::ConstructorCount, decl.methods.len() - nom);
    ms.set(MetricId::DelegationRatio, ratio(delegating, nom));
    ms.set_count(MetricId::OverrideCount, overrides);
    ms.set(MetricId::OverrideRatio, ratio(overrides, nom));
    ms.set_count(MetricId::InheritedUnusedCount, inherited_unused(model, decl).len());
    ms.set_count(
        MetricId::PrimitiveFieldCount,
        decl.fields.iter().filter(|f| f.is_primitive).count(),
    );
    ms.set_count(MetricId::LocalSubtypeCount, model.local_subtypes(t).len());
    ms.set_count(
        MetricId::ConcreteMethodCount,
        plain.iter().filter(|m| m.has_body()).count(),
    );
    ms.set_count(MetricId::ReverseRefCount, model.users_of(t).len());
    ms.set_count(MetricId::ExternalDataAccessCount, external_data_access(model, decl).len());
    ms.set_count(MetricId::LocalAncestorCount, model.ancestors(t).len());

    let mut foreign = 0;
    let mut own = 0;
    for i in 0..decl.methods.len() {
        let r = MethodRef {
            type_name: t.to_string(),
            index: i,
        };
        let mm = compute_method_metrics(model, &r)?;
        foreign += mm.count(MetricId::ForeignCallCount) as usize;
        own += mm.count(MetricId::OwnAccessCount) as usize;
    }
    ms.set_count(MetricId::ForeignCallCount, foreign);
    ms.set_count(MetricId::OwnAccessCount, own);
    Ok(ms)
}

/// Public concrete instance methods inherited from project ancestors, not
/// redeclared by `t`, and never referenced through `t`, its own methods, or
/// a receiver of unknown type. Nearest declaration wins.
pub fn inherited_unused<'m>(model: &'m ProjectModel, t: &TypeDecl) -> Vec<(String, &'m MethodDecl)> {
    let tq = t.qualified_name.as_str();
    let mut seen: BTreeSet<(String, usize)> = t
        .plain_methods()
        .map(|(_, m)| (m.name.clone(), m.params.len()))
        .collect();
    let mut out = Vec::new();
    for a in model.ancestors(tq) {
        let Some(ad) = model.type_decl(&a) else { continue };
        for (_, am) in ad.plain_methods() {
            if am.is_static() || !am.is_public() || !am.has_body() {
                continue;
            }
            if !seen.insert((am.name.clone(), am.params.len())) {
                continue;
            }
            let used = model
                .refs_to(&a, &am.name, MemberKind::Method)
                .iter()
                .any(|s| s.via.is_none() || s.via.as_deref() == Some(tq) || s.from.type_name == tq);
            if !used {
                out.push((a.clone(), am));
            }
        }
    }
    out
}

/// Methods of other types that touch `t`'s fields or accessors. Sites with
/// an unresolved receiver count, as for every name-based reference.
pub fn external_data_access(model: &ProjectModel, t: &TypeDecl) -> BTreeSet<MethodRef> {
    let tq = t.qualified_name.as_str();
    let mut members: Vec<(&str, MemberKind)> =
        t.fields.iter().map(|f| (f.name.as_str(), MemberKind::Field)).collect();
    for (_, m) in t.plain_methods() {
        if matches!(classify_accessor(m), AccessorKind::Getter | AccessorKind::Setter) {
            members.push((m.name.as_str(), MemberKind::Method));
        }
    }
    let mut out = BTreeSet::new();
    for (name, kind) in members {
        for s in model.refs_to(tq, name, kind) {
            let through_t = s.via.as_deref().is_none_or(|v| v == tq);
            if s.from.type_name != tq && through_t {
                out.insert(s.from.clone());
            }
        }
    }
    out
}

/// Receiver names that denote the method's own object.
fn own_receivers(model: &ProjectModel, t: &TypeDecl, m: &MethodDecl) -> BTreeSet<String> {
    let mut own: BTreeSet<String> = ["this", "super"].into_iter().map(String::from).collect();
    let locals: BTreeSet<&String> = m
        .body
        .as_ref()
        .map(|p| p.local_types.keys().collect())
        .unwrap_or_default();
    let mut fields: Vec<&str> = t.fields.iter().map(|f| f.name.as_str()).collect();
    for a in model.ancestors(&t.qualified_name) {
        if let Some(ad) = model.type_decl(&a) {
            fields.extend(ad.fields.iter().map(|f| f.name.as_str()));
        }
    }
    for f in fields {
        if !locals.contains(&f.to_string()) {
            own.insert(f.to_string());
        }
    }
    own
}

/// Method-level metrics.
pub fn compute_method_metrics(model: &ProjectModel, r: &MethodRef) -> Result<MetricSet, MetricsError> {
    let unknown = || MetricsError::UnknownMethod(r.type_name.clone(), r.index);
    let t = model.type_decl(&r.type_name).ok_or_else(unknown)?;
    let m = t.methods.get(r.index).ok_or_else(unknown)?;
    let mut ms = MetricSet::default();
    let params = m.params.len();
    let primitive = m.params.iter().filter(|p| p.is_primitive).count();
    ms.set_count(MetricId::Loc, m.span.len() as usize);
    ms.set_count(MetricId::ParamCount, params);
    ms.set_count(MetricId::ComplexParamCount, params - primitive);
    ms.set(MetricId::PrimitiveParamRatio, ratio(primitive, params));

    let p = m.profile();
    let unused = if m.has_body() {
        m.params.iter().filter(|p| !p.used_in_body).count()
    } else {
        0
    };
    ms.set_count(MetricId::UnusedParamCount, unused);

    let own_names = own_receivers(model, t, m);
    let mut foreign_calls = 0;
    let mut providers = BTreeSet::new();
    for ((recv, _), n) in &p.qualified_calls {
        if !own_names.contains(recv) {
            foreign_calls += *n as usize;
            providers.insert(recv.clone());
        }
    }
    for (recv, _) in p.foreign_accesses.keys() {
        if !own_names.contains(recv) {
            providers.insert(recv.clone());
        }
    }
    let own = (p.own_read_count() + p.own_write_count() + p.local_call_count()) as usize;
    ms.set_count(MetricId::ForeignCallCount, foreign_calls);
    ms.set_count(MetricId::OwnAccessCount, own);
    ms.set_count(MetricId::ForeignProviderCount, providers.len());
    ms.set(MetricId::OwnAccessRatio, ratio(own, own + foreign_calls));
    ms.set_count(MetricId::ReverseRefCount, method_reverse_refs(model, r, m));
    ms.set_count(MetricId::StatementCount, p.statement_count as usize);
    Ok(ms)
}

/// References reaching this method's name on its type or, for overrides,
/// on the ancestors declaring it. Self-references are excluded.
fn method_reverse_refs(model: &ProjectModel, r: &MethodRef, m: &MethodDecl) -> usize {
    if m.is_constructor {
        return 0;
    }
    let mut owners = vec![r.type_name.clone()];
    if m.is_override {
        owners.extend(model.ancestors(&r.type_name));
    }
    let mut sites = BTreeSet::new();
    for o in owners {
        for s in model.refs_to(&o, &m.name, MemberKind::Method) {
            if s.from != *r {
                sites.insert(s.from.clone());
            }
        }
    }
    sites.len()
}

/// Metrics for either kind of entity.
pub fn compute_metrics(model: &ProjectModel, e: &EntityRef) -> Result<MetricSet, MetricsError> {
    match e {
        EntityRef::Type(t) => compute_type_metrics(model, t),
        EntityRef::Method(m) => compute_method_metrics(model, m),
    }
}
