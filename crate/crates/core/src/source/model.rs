//! Structural model of parsed Java source.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// Inclusive 1-based line range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LineRange {
    pub start: u32,
    pub end: u32,
}

impl LineRange {
    pub fn new(start: u32, end: u32) -> Self {
        debug_assert!(start >= 1 && start <= end);
        Self { start, end }
    }

    /// Number of physical lines covered.
    pub fn len(&self) -> u32 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, other: &LineRange) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseDiagnostic {
    pub line: u32,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SourceUnit {
    pub path: String,
    pub package: String,
    pub imports: Vec<String>,
    pub types: Vec<TypeDecl>,
    pub diagnostics: Vec<ParseDiagnostic>,
    /// Total physical lines in the file.
    pub line_count: u32,
}

impl SourceUnit {
    /// Depth-first walk over every type in the unit, nested ones included.
    pub fn all_types(&self) -> Vec<&TypeDecl> {
        fn walk<'a>(t: &'a TypeDecl, out: &mut Vec<&'a TypeDecl>) {
            out.push(t);
            for n in &t.nested {
                walk(n, out);
            }
        }
        let mut out = Vec::new();
        for t in &self.types {
            walk(t, &mut out);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeDecl {
    pub name: String,
    pub qualified_name: String,
    pub kind: TypeKind,
    pub modifiers: BTreeSet<String>,
    pub superclass: Option<String>,
    pub interfaces: Vec<String>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub nested: Vec<TypeDecl>,
    pub span: LineRange,
}

impl TypeDecl {
    pub fn is_abstract(&self) -> bool {
        self.kind == TypeKind::Interface || self.modifiers.contains("abstract")
    }

    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Methods excluding constructors.
    pub fn plain_methods(&self) -> impl Iterator<Item = (usize, &MethodDecl)> {
        self.methods
            .iter()
            .enumerate()
            .filter(|(_, m)| !m.is_constructor)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FieldDecl {
    pub name: String,
    pub type_name: String,
    pub is_primitive: bool,
    pub modifiers: BTreeSet<String>,
    pub line: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParamDecl {
    pub name: String,
    pub type_name: String,
    pub is_primitive: bool,
    pub used_in_body: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodDecl {
    pub name: String,
    pub params: Vec<ParamDecl>,
    /// Absent for constructors.
    pub return_type: Option<String>,
    pub modifiers: BTreeSet<String>,
    pub is_constructor: bool,
    pub is_override: bool,
    pub throws: Vec<String>,
    /// `None` for abstract and interface methods.
    pub body: Option<BodyProfile>,
    pub span: LineRange,
    /// Raw body text between the braces, kept for pretty-printing.
    #[serde(skip)]
    pub body_text: Option<String>,
}

impl MethodDecl {
    pub fn has_body(&self) -> bool {
        self.body.is_some()
    }

    pub fn is_public(&self) -> bool {
        self.modifiers.contains("public")
    }

    pub fn is_static(&self) -> bool {
        self.modifiers.contains("static")
    }

    pub fn profile(&self) -> BodyProfile {
        self.body.clone().unwrap_or_default()
    }
}

/// Reference counts extracted from a method body by token pattern scanning.
///
/// Multisets are stored as name -> count maps.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BodyProfile {
    /// Receiverless or `this.`-qualified calls.
    pub local_call_names: BTreeMap<String, u32>,
    /// `receiver.method(` calls; the receiver is the head identifier of the
    /// access chain (`this.f.m()` has receiver `f`, `super.m()` has `super`).
    #[serde(with = "pair_counts")]
    pub qualified_calls: BTreeMap<(String, String), u32>,
    pub own_field_reads: BTreeMap<String, u32>,
    pub own_field_writes: BTreeMap<String, u32>,
    /// `receiver.member` accesses that are not calls.
    #[serde(with = "pair_counts")]
    pub foreign_accesses: BTreeMap<(String, String), u32>,
    pub statement_count: u32,
    pub line_count: u32,
    /// Declared types of parameters and recognizable locals, used to
    /// resolve call receivers.
    pub local_types: BTreeMap<String, String>,
    /// Body is exactly one qualified call (optionally returned) whose
    /// arguments are plain names or literals.
    pub single_forward: bool,
    /// Type names mentioned in the body (`new T(`, `T.member`, declarations).
    pub type_mentions: BTreeSet<String>,
}

pub(crate) fn total(map: &BTreeMap<impl Ord, u32>) -> u32 {
    map.values().sum()
}

impl BodyProfile {
    pub fn local_call_count(&self) -> u32 {
        total(&self.local_call_names)
    }

    pub fn qualified_call_count(&self) -> u32 {
        total(&self.qualified_calls)
    }

    pub fn own_read_count(&self) -> u32 {
        total(&self.own_field_reads)
    }

    pub fn own_write_count(&self) -> u32 {
        total(&self.own_field_writes)
    }

    pub fn foreign_access_count(&self) -> u32 {
        total(&self.foreign_accesses)
    }
}

/// JSON object keys must be strings, so pair-keyed multisets go out as
/// `[{"receiver", "member", "count"}]`.
mod pair_counts {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        receiver: String,
        member: String,
        count: u32,
    }

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(String, String), u32>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        map.iter()
            .map(|((receiver, member), count)| Entry {
                receiver: receiver.clone(),
                member: member.clone(),
                count: *count,
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<(String, String), u32>, D::Error> {
        let entries = Vec::<Entry>::deserialize(d)?;
        Ok(entries
            .into_iter()
            .map(|e| ((e.receiver, e.member), e.count))
            .collect())
    }
}
