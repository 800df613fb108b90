//! Threshold rules turning metrics into smell candidates.
//!
//! Candidates are suspicions for a reviewer to confirm or dismiss, never
//! verdicts. Every default threshold is an engineering starting point and
//! can be overridden from a config file.

use std::cmp::Ordering;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::metrics::{compute_method_metrics, compute_type_metrics, MetricId, MetricSet};
use crate::smell::SmellKind;
use crate::source::{
    load_project_with, EntityKind, EntityRef, LineRange, LoadError, MethodRef, ParseOptions, ProjectModel, TypeDecl, TypeKind,
};

pub const CANDIDATES_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct SpecGenFlags {
    /// Types declaring no methods.
    pub empty_types: bool,
    /// Abstract types and interfaces with at most one project subtype.
    pub lone_abstractions: bool,
    /// Methods with an empty body that nothing references.
    pub unused_empty_methods: bool,
}

impl Default for SpecGenFlags {
    fn default() -> Self {
        Self {
            empty_types: true,
            lone_abstractions: true,
            unused_empty_methods: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct DetectionConfig {
    pub lpl_min_params: u32,
    /// Used by the evidence for "complex types" questions, not by detection.
    pub lpl_min_complex_params: u32,
    pub god_min_loc: u32,
    pub god_min_nom: u32,
    pub data_max_non_accessor: u32,
    pub middle_min_delegation_ratio: f64,
    pub middle_min_nom: u32,
    pub envy_min_foreign_calls: u32,
    pub envy_max_own_ratio: f64,
    pub bequest_min_unused_inherited: u32,
    pub bequest_min_override_ratio: f64,
    pub prim_obs_min_primitive_fields: u32,
    pub prim_obs_min_params: u32,
    pub spec_gen: SpecGenFlags,
    pub parse: ParseOptions,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        Self {
            lpl_min_params: 5,
            lpl_min_complex_params: 3,
            god_min_loc: 200,
            god_min_nom: 15,
            data_max_non_accessor: 0,
            middle_min_delegation_ratio: 0.5,
            middle_min_nom: 3,
            envy_min_foreign_calls: 5,
            envy_max_own_ratio: 0.33,
            bequest_min_unused_inherited: 2,
            bequest_min_override_ratio: 0.5,
            prim_obs_min_primitive_fields: 6,
            prim_obs_min_params: 4,
            spec_gen: SpecGenFlags::default(),
            parse: ParseOptions::default(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Parse(String),
    #[error("invalid config: `{field}` {problem}")]
    OutOfRange { field: &'static str, problem: &'static str },
}

impl DetectionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let counts = [
            ("lplMinParams", self.lpl_min_params),
            ("lplMinComplexParams", self.lpl_min_complex_params),
            ("godMinLoc", self.god_min_loc),
            ("godMinNom", self.god_min_nom),
            ("middleMinNom", self.middle_min_nom),
            ("envyMinForeignCalls", self.envy_min_foreign_calls),
            ("bequestMinUnusedInherited", self.bequest_min_unused_inherited),
            ("primObsMinPrimitiveFields", self.prim_obs_min_primitive_fields),
            ("primObsMinParams", self.prim_obs_min_params),
        ];
        for (field, v) in counts {
            if v == 0 {
                return Err(ConfigError::OutOfRange {
                    field,
                    problem: "must be positive",
                });
            }
        }
        let ratios = [
            ("middleMinDelegationRatio", self.middle_min_delegation_ratio),
            ("envyMaxOwnRatio", self.envy_max_own_ratio),
            ("bequestMinOverrideRatio", self.bequest_min_override_ratio),
        ];
        for (field, v) in ratios {
            if !(0.0..=1.0).contains(&v) {
                return Err(ConfigError::OutOfRange {
                    field,
                    problem: "must lie in [0, 1]",
                });
            }
        }
        Ok(())
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        if path.extension().is_some_and(|e| e == "json") {
            let cfg: Self =
                serde_json::from_str(&text).map_err(|e| ConfigError::Parse(e.to_string()))?;
            cfg.validate()?;
            return Ok(cfg);
        }
        Self::from_toml(&text)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Op {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl Op {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Op::Ge => value >= threshold,
            Op::Le => value <= threshold,
            Op::Gt => value > threshold,
            Op::Eq => value == threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Op::Ge => "≥",
            Op::Le => "≤",
            Op::Gt => ">",
            Op::Eq => "=",
        }
    }
}

/// One satisfied rule condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trigger {
    pub metric: MetricId,
    pub value: f64,
    pub op: Op,
    pub threshold: f64,
}

pub fn format_number(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

impl fmt::Display for Trigger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            self.metric,
            format_number(self.value),
            self.op.symbol(),
            format_number(self.threshold)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CandidateError {
    #[error("candidate has no triggering metric")]
    EmptyTrigger,
    #[error("{smell} cannot target a {kind}")]
    EntityKindMismatch { smell: SmellKind, kind: EntityKind },
}

/// Entity kinds each smell can be reported on.
pub fn allowed_kinds(smell: SmellKind) -> &'static [EntityKind] {
    match smell {
        SmellKind::LongParameterList | SmellKind::FeatureEnvy => &[EntityKind::Method],
        SmellKind::DataClass | SmellKind::GodClass | SmellKind::MiddleMan | SmellKind::RefusedBequest => {
            &[EntityKind::Type]
        }
        SmellKind::PrimitiveObsession | SmellKind::SpeculativeGenerality => {
            &[EntityKind::Type, EntityKind::Method]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", try_from = "RawCandidate")]
pub struct SmellCandidate {
    pub id: String,
    pub smell: SmellKind,
    /// `pkg.Type` or `pkg.Type#method(P1, P2)`.
    pub entity: String,
    pub entity_kind: EntityKind,
    /// Declaring file, relative to its source root.
    pub file: String,
    pub triggered_by: Vec<Trigger>,
    pub source_span: LineRange,
}

#[derive(Deserialize)]
#[serde(rename_all = "camelCase")]
struct RawCandidate {
    id: String,
    smell: SmellKind,
    entity: String,
    entity_kind: EntityKind,
    file: String,
    triggered_by: Vec<Trigger>,
    source_span: LineRange,
}

impl TryFrom<RawCandidate> for SmellCandidate {
    type Error = CandidateError;

    fn try_from(r: RawCandidate) -> Result<Self, Self::Error> {
        let mut c = SmellCandidate::new(
            r.smell,
            r.entity,
            r.entity_kind,
            r.file,
            r.triggered_by,
            r.source_span,
        )?;
        c.id = r.id;
        Ok(c)
    }
}

/// Stable identifier of a (smell, entity, file) triple.
pub fn candidate_id(smell: SmellKind, entity: &str, file: &str) -> String {
    let mut h = Sha256::new();
    h.update(smell.name().as_bytes());
    h.update([0]);
    h.update(entity.as_bytes());
    h.update([0]);
    h.update(file.as_bytes());
    hex::encode(&h.finalize()[..8])
}

impl SmellCandidate {
    pub fn new(
        smell: SmellKind,
        entity: String,
        entity_kind: EntityKind,
        file: String,
        mut triggered_by: Vec<Trigger>,
        source_span: LineRange,
    ) -> Result<Self, CandidateError> {
        if triggered_by.is_empty() {
            return Err(CandidateError::EmptyTrigger);
        }
        if !allowed_kinds(smell).contains(&entity_kind) {
            return Err(CandidateError::EntityKindMismatch {
                smell,
                kind: entity_kind,
            });
        }
        triggered_by.sort_by(|a, b| a.metric.cmp(&b.metric));
        Ok(Self {
            id: candidate_id(smell, &entity, &file),
            smell,
            entity,
            entity_kind,
            file,
            triggered_by,
            source_span,
        })
    }
}

/// Rationale text naming every triggered metric with its threshold.
pub fn explain(c: &SmellCandidate) -> String {
    let reasons: Vec<String> = c.triggered_by.iter().map(Trigger::to_string).collect();
    format!(
        "{} suspected in {} ({}:{}-{}): {}",
        c.smell.label(),
        c.entity,
        c.file,
        c.source_span.start,
        c.source_span.end,
        reasons.join("; ")
    )
}

/// Checks a condition and records it when it holds.
fn check(ms: &MetricSet, metric: MetricId, op: Op, threshold: f64) -> Option<Trigger> {
    let value = ms.get(metric);
    op.holds(value, threshold).then_some(Trigger {
        metric,
        value,
        op,
        threshold,
    })
}

/// All conditions must hold; returns them all, or nothing.
fn all(conds: Vec<Option<Trigger>>) -> Vec<Trigger> {
    if conds.iter().all(Option::is_some) {
        conds.into_iter().flatten().collect()
    } else {
        Vec::new()
    }
}

fn type_rules(model: &ProjectModel, t: &TypeDecl, ms: &MetricSet, cfg: &DetectionConfig) -> Vec<(SmellKind, Vec<Trigger>)> {
    let f = |v: u32| v as f64;
    let mut out = Vec::new();
    let is_class = t.kind == TypeKind::Class;

    if is_class {
        out.push((
            SmellKind::GodClass,
            all(vec![
                check(ms, MetricId::Loc, Op::Ge, f(cfg.god_min_loc)),
                check(ms, MetricId::Nom, Op::Ge, f(cfg.god_min_nom)),
            ]),
        ));
        out.push((
            SmellKind::DataClass,
            all(vec![
                check(ms, MetricId::Nom, Op::Gt, 0.0),
                check(ms, MetricId::NonAccessorMethodCount, Op::Le, f(cfg.data_max_non_accessor)),
            ]),
        ));
        out.push((
            SmellKind::MiddleMan,
            all(vec![
                check(ms, MetricId::DelegationRatio, Op::Ge, cfg.middle_min_delegation_ratio),
                check(ms, MetricId::Nom, Op::Ge, f(cfg.middle_min_nom)),
            ]),
        ));
        if model.local_superclass(&t.qualified_name).is_some() {
            let triggers: Vec<Trigger> = [
                check(ms, MetricId::InheritedUnusedCount, Op::Ge, f(cfg.bequest_min_unused_inherited)),
                check(ms, MetricId::OverrideRatio, Op::Ge, cfg.bequest_min_override_ratio),
            ]
            .into_iter()
            .flatten()
            .collect();
            out.push((SmellKind::RefusedBequest, triggers));
        }
    }
    out.push((
        SmellKind::PrimitiveObsession,
        check(ms, MetricId::PrimitiveFieldCount, Op::Ge, f(cfg.prim_obs_min_primitive_fields))
            .into_iter()
            .collect(),
    ));

    let mut sg = Vec::new();
    if cfg.spec_gen.empty_types && t.kind != TypeKind::Enum {
        sg.extend(check(ms, MetricId::Nom, Op::Eq, 0.0));
    }
    if cfg.spec_gen.lone_abstractions && t.is_abstract() {
        sg.extend(check(ms, MetricId::LocalSubtypeCount, Op::Le, 1.0));
    }
    out.push((SmellKind::SpeculativeGenerality, sg));
    out
}

fn method_rules(
    m: &crate::source::MethodDecl,
    ms: &MetricSet,
    cfg: &DetectionConfig,
) -> Vec<(SmellKind, Vec<Trigger>)> {
    let f = |v: u32| v as f64;
    let mut out = vec![(
        SmellKind::LongParameterList,
        check(ms, MetricId::ParamCount, Op::Ge, f(cfg.lpl_min_params))
            .into_iter()
            .collect(),
    )];
    out.push((
        SmellKind::PrimitiveObsession,
        all(vec![
            check(ms, MetricId::ParamCount, Op::Ge, f(cfg.prim_obs_min_params)),
            check(ms, MetricId::PrimitiveParamRatio, Op::Eq, 1.0),
        ]),
    ));
    if !m.is_constructor {
        out.push((
            SmellKind::FeatureEnvy,
            all(vec![
                check(ms, MetricId::ForeignCallCount, Op::Ge, f(cfg.envy_min_foreign_calls)),
                check(ms, MetricId::OwnAccessRatio, Op::Le, cfg.envy_max_own_ratio),
            ]),
        ));
        if cfg.spec_gen.unused_empty_methods && m.has_body() {
            out.push((
                SmellKind::SpeculativeGenerality,
                all(vec![
                    check(ms, MetricId::StatementCount, Op::Eq, 0.0),
                    check(ms, MetricId::ReverseRefCount, Op::Eq, 0.0),
                ]),
            ));
        }
    }
    out
}

fn candidates_for(
    model: &ProjectModel,
    entity: EntityRef,
    rules: Vec<(SmellKind, Vec<Trigger>)>,
    span: LineRange,
) -> Vec<SmellCandidate> {
    let name = model.entity_name(&entity).unwrap_or_default();
    let file = model.entity_path(&entity).unwrap_or_default().to_string();
    rules
        .into_iter()
        .filter_map(|(smell, triggers)| {
            SmellCandidate::new(smell, name.clone(), entity.kind(), file.clone(), triggers, span).ok()
        })
        .collect()
}

/// Orders candidates by file, line, then smell kind.
pub fn candidate_order(a: &SmellCandidate, b: &SmellCandidate) -> Ordering {
    (&a.file, a.source_span.start, a.smell, &a.entity).cmp(&(&b.file, b.source_span.start, b.smell, &b.entity))
}

/// Runs every rule over every type and method of the model.
pub fn detect(model: &ProjectModel, cfg: &DetectionConfig) -> Vec<SmellCandidate> {
    let types: Vec<&TypeDecl> = model.types().collect();
    let mut out: Vec<SmellCandidate> = types
        .par_iter()
        .flat_map_iter(|t| {
            let mut found = Vec::new();
            if let Ok(ms) = compute_type_metrics(model, &t.qualified_name) {
                let rules = type_rules(model, t, &ms, cfg);
                found.extend(candidates_for(
                    model,
                    EntityRef::Type(t.qualified_name.clone()),
                    rules,
                    t.span,
                ));
            }
            for (index, m) in t.methods.iter().enumerate() {
                let r = MethodRef {
                    type_name: t.qualified_name.clone(),
                    index,
                };
                if let Ok(ms) = compute_method_metrics(model, &r) {
                    let rules = method_rules(m, &ms, cfg);
                    found.extend(candidates_for(model, EntityRef::Method(r), rules, m.span));
                }
            }
            found
        })
        .collect();
    out.sort_by(candidate_order);
    out
}

/// The `candidates.json` document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateFile {
    pub schema_version: u32,
    /// Source roots scanned, used to rebuild the model.
    pub roots: Vec<String>,
    pub config: DetectionConfig,
    pub candidates: Vec<SmellCandidate>,
}

impl CandidateFile {
    pub fn new(roots: Vec<String>, config: DetectionConfig, candidates: Vec<SmellCandidate>) -> Self {
        Self {
            schema_version: CANDIDATES_SCHEMA_VERSION,
            roots,
            config,
            candidates,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("candidate file serializes");
        s.push('\n');
        s
    }

    pub fn find(&self, id: &str) -> Option<&SmellCandidate> {
        self.candidates.iter().find(|c| c.id == id)
    }

    pub fn from_json(text: &str) -> Result<Self, CandidateFileError> {
        let f: Self = serde_json::from_str(text).map_err(|e| CandidateFileError::Parse(e.to_string()))?;
        if f.schema_version != CANDIDATES_SCHEMA_VERSION {
            return Err(CandidateFileError::SchemaVersion(f.schema_version));
        }
        f.config
            .validate()
            .map_err(|e| CandidateFileError::Parse(e.to_string()))?;
        Ok(f)
    }

    pub fn load(path: &Path) -> Result<Self, CandidateFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| CandidateFileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn root_paths(&self) -> Vec<PathBuf> {
        self.roots.iter().map(PathBuf::from).collect()
    }

    /// Rebuilds the project model from the recorded roots.
    pub fn load_model(&self) -> Result<ProjectModel, LoadError> {
        load_project_with(&self.root_paths(), &self.config.parse)
    }

    /// Candidates whose entity no longer exists in `model`.
    pub fn stale<'a>(&'a self, model: &ProjectModel) -> Vec<&'a SmellCandidate> {
        self.candidates
            .iter()
            .filter(|c| model.find_entity(&c.entity).is_none())
            .collect()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CandidateFileError {
    #[error("cannot read candidates file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed candidates file: {0}")]
    Parse(String),
    #[error("unsupported candidates schema version {0}")]
    SchemaVersion(u32),
}
