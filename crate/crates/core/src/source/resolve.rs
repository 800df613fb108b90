//! Project-wide resolution: type index, inheritance edges, signature-based
//! override marking and approximate reverse references.
//!
//! Reverse references are name-based. A call or access is attributed to a
//! project member when its receiver resolves to a project type declaring
//! (or inheriting) a member of that name. When the receiver's type cannot
//! be determined, every project type declaring a member of that name gets a
//! reference with an unknown `via`. Receivers of known external types
//! (`String`, `List`, ...) never produce references.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::model::{MethodDecl, SourceUnit, TypeDecl, TypeKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error("duplicate type name `{name}` declared in {first} and {second}")]
    DuplicateTypeName {
        name: String,
        first: String,
        second: String,
    },
    #[error("inheritance cycle: {}", .cycle.join(" -> "))]
    InheritanceCycle { cycle: Vec<String> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Extends,
    Implements,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct InheritanceEdge {
    pub child: String,
    /// Qualified name when local, the name as written otherwise.
    pub parent: String,
    pub kind: EdgeKind,
    pub external: bool,
}

/// A method identified by its declaring type and position in it.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MethodRef {
    pub type_name: String,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MemberKind {
    Field,
    Method,
}

/// A named member of a project type. Overloads share one key.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MemberKey {
    pub type_name: String,
    pub member: String,
    pub kind: MemberKind,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RefSite {
    pub from: MethodRef,
    /// Static type of the receiver, when it resolved to a project type.
    pub via: Option<String>,
}

/// Either a type or a method of the project.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityRef {
    Type(String),
    Method(MethodRef),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntityKind {
    Type,
    Method,
}

impl EntityRef {
    pub fn kind(&self) -> EntityKind {
        match self {
            EntityRef::Type(_) => EntityKind::Type,
            EntityRef::Method(_) => EntityKind::Method,
        }
    }

    pub fn type_name(&self) -> &str {
        match self {
            EntityRef::Type(t) => t,
            EntityRef::Method(m) => &m.type_name,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TypeLoc {
    pub unit: usize,
    /// Index into `unit.types`, then into successive `nested` lists.
    pub path: Vec<usize>,
}

enum Resolution {
    Local(String),
    External,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ProjectModel {
    pub units: Vec<SourceUnit>,
    pub type_index: BTreeMap<String, TypeLoc>,
    pub inheritance_edges: Vec<InheritanceEdge>,
    #[serde(serialize_with = "serialize_refs")]
    pub reverse_refs: BTreeMap<MemberKey, Vec<RefSite>>,
    /// Used type -> project types that mention it outside of inheritance.
    pub type_usages: BTreeMap<String, BTreeSet<String>>,
    #[serde(skip)]
    enclosing: BTreeMap<String, String>,
}

fn serialize_refs<S: serde::Serializer>(
    refs: &BTreeMap<MemberKey, Vec<RefSite>>,
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        #[serde(flatten)]
        key: &'a MemberKey,
        sites: &'a [RefSite],
    }
    s.collect_seq(refs.iter().map(|(key, sites)| Entry { key, sites }))
}

/// Strips generics and array dimensions but keeps qualification.
fn erase(type_name: &str) -> String {
    let mut out = String::new();
    let mut depth = 0usize;
    for c in type_name.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out.replace("[]", "").replace("...", "").trim().to_string()
}

/// Declared type with generic arguments removed, arrays kept.
fn erase_generics(type_name: &str) -> String {
    let mut out = String::new();
    let mut depth = 0usize;
    for c in type_name.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            _ if depth == 0 => out.push(c),
            _ => {}
        }
    }
    out.trim().to_string()
}

/// Builds the model. Fails on duplicate qualified names and on inheritance
/// cycles among project types.
pub fn resolve_project(units: Vec<SourceUnit>) -> Result<ProjectModel, ResolveError> {
    let mut model = ProjectModel {
        units,
        type_index: BTreeMap::new(),
        inheritance_edges: Vec::new(),
        reverse_refs: BTreeMap::new(),
        type_usages: BTreeMap::new(),
        enclosing: BTreeMap::new(),
    };
    model.index_types()?;
    model.link_inheritance();
    model.check_cycles()?;
    model.mark_signature_overrides();
    model.collect_references();
    Ok(model)
}

impl ProjectModel {
    fn index_types(&mut self) -> Result<(), ResolveError> {
        fn walk(
            t: &TypeDecl,
            loc: TypeLoc,
            enclosing: Option<&str>,
            out: &mut Vec<(String, TypeLoc, Option<String>)>,
        ) {
            out.push((t.qualified_name.clone(), loc.clone(), enclosing.map(str::to_string)));
            for (i, n) in t.nested.iter().enumerate() {
                let mut path = loc.path.clone();
                path.push(i);
                let child = TypeLoc {
                    unit: loc.unit,
                    path,
                };
                walk(n, child, Some(&t.qualified_name), out);
            }
        }
        let mut entries = Vec::new();
        for (u, unit) in self.units.iter().enumerate() {
            for (i, t) in unit.types.iter().enumerate() {
                let loc = TypeLoc {
                    unit: u,
                    path: vec![i],
                };
                walk(t, loc, None, &mut entries);
            }
        }
        for (name, loc, enclosing) in entries {
            if let Some(prev) = self.type_index.get(&name) {
                return Err(ResolveError::DuplicateTypeName {
                    name,
                    first: self.units[prev.unit].path.clone(),
                    second: self.units[loc.unit].path.clone(),
                });
            }
            if let Some(outer) = enclosing {
                self.enclosing.insert(name.clone(), outer);
            }
            self.type_index.insert(name, loc);
        }
        Ok(())
    }

    pub fn type_decl(&self, qualified_name: &str) -> Option<&TypeDecl> {
        let loc = self.type_index.get(qualified_name)?;
        let unit = &self.units[loc.unit];
        let mut t = unit.types.get(loc.path[0])?;
        for &i in &loc.path[1..] {
            t = t.nested.get(i)?;
        }
        Some(t)
    }

    fn type_decl_mut(&mut self, qualified_name: &str) -> Option<&mut TypeDecl> {
        let loc = self.type_index.get(qualified_name)?.clone();
        let unit = &mut self.units[loc.unit];
        let mut t = unit.types.get_mut(loc.path[0])?;
        for &i in &loc.path[1..] {
            t = t.nested.get_mut(i)?;
        }
        Some(t)
    }

    pub fn unit_of(&self, qualified_name: &str) -> Option<&SourceUnit> {
        self.type_index
            .get(qualified_name)
            .map(|loc| &self.units[loc.unit])
    }

    pub fn method(&self, m: &MethodRef) -> Option<&MethodDecl> {
        self.type_decl(&m.type_name)?.methods.get(m.index)
    }

    /// All types in index order.
    pub fn types(&self) -> impl Iterator<Item = &TypeDecl> {
        self.type_index.keys().filter_map(|k| self.type_decl(k))
    }

    /// All methods, constructors included, in index order.
    pub fn methods(&self) -> impl Iterator<Item = (MethodRef, &MethodDecl)> {
        self.types().flat_map(|t| {
            t.methods.iter().enumerate().map(|(i, m)| {
                (
                    MethodRef {
                        type_name: t.qualified_name.clone(),
                        index: i,
                    },
                    m,
                )
            })
        })
    }

    /// Stable textual name: `pkg.Type` or `pkg.Type#name(P1, P2)`.
    pub fn entity_name(&self, e: &EntityRef) -> Option<String> {
        match e {
            EntityRef::Type(t) => self.type_decl(t).map(|d| d.qualified_name.clone()),
            EntityRef::Method(m) => {
                let decl = self.method(m)?;
                let params: Vec<String> =
                    decl.params.iter().map(|p| erase_generics(&p.type_name)).collect();
                Some(format!("{}#{}({})", m.type_name, decl.name, params.join(", ")))
            }
        }
    }

    /// Looks up an entity by its stable name. `pkg.Type#name` without a
    /// parameter list matches when the name is not overloaded.
    pub fn find_entity(&self, name: &str) -> Option<EntityRef> {
        let Some((type_name, member)) = name.split_once('#') else {
            return self
                .type_index
                .contains_key(name)
                .then(|| EntityRef::Type(name.to_string()));
        };
        let t = self.type_decl(type_name)?;
        let refs: Vec<EntityRef> = (0..t.methods.len())
            .map(|index| {
                EntityRef::Method(MethodRef {
                    type_name: type_name.to_string(),
                    index,
                })
            })
            .collect();
        if member.contains('(') {
            return refs
                .into_iter()
                .find(|r| self.entity_name(r).as_deref() == Some(name));
        }
        let mut matching = refs
            .into_iter()
            .filter(|r| matches!(r, EntityRef::Method(m) if t.methods[m.index].name == member));
        let first = matching.next()?;
        matching.next().is_none().then_some(first)
    }

    /// File (relative to its root) declaring the entity.
    pub fn entity_path(&self, e: &EntityRef) -> Option<&str> {
        self.unit_of(e.type_name()).map(|u| u.path.as_str())
    }

    pub fn enclosing_type(&self, qualified_name: &str) -> Option<&str> {
        self.enclosing.get(qualified_name).map(String::as_str)
    }

    fn resolve_in(&self, context: &str, written: &str) -> Resolution {
        let name = erase(written);
        if name.is_empty() {
            return Resolution::Unknown;
        }
        let Some(unit) = self.unit_of(context) else {
            return Resolution::Unknown;
        };
        if self.type_index.contains_key(&name) && name.contains('.') {
            return Resolution::Local(name);
        }
        let (first, rest) = match name.split_once('.') {
            Some((f, r)) => (f.to_string(), Some(r.to_string())),
            None => (name.clone(), None),
        };
        let extend = |base: String| match &rest {
            Some(r) => format!("{base}.{r}"),
            None => base,
        };
        let found = |q: String| -> Option<Resolution> {
            let q = extend(q);
            self.type_index
                .contains_key(&q)
                .then_some(Resolution::Local(q))
        };

        // Enclosing scopes, innermost first, including the types themselves
        // and their members.
        let mut scope = Some(context.to_string());
        while let Some(s) = scope {
            if s.rsplit('.').next() == Some(first.as_str()) {
                if let Some(r) = found(s.clone()) {
                    return r;
                }
            }
            if let Some(r) = found(format!("{s}.{first}")) {
                return r;
            }
            for anc in self.ancestors(&s) {
                if let Some(r) = found(format!("{anc}.{first}")) {
                    return r;
                }
            }
            scope = self.enclosing.get(&s).cloned();
        }
        for imp in &unit.imports {
            if imp.starts_with("static ") {
                continue;
            }
            if imp.rsplit('.').next() == Some(first.as_str()) {
                return found(imp.clone()).unwrap_or(Resolution::External);
            }
        }
        let in_package = if unit.package.is_empty() {
            first.clone()
        } else {
            format!("{}.{}", unit.package, first)
        };
        if let Some(r) = found(in_package) {
            return r;
        }
        for imp in &unit.imports {
            if let Some(pkg) = imp.strip_suffix(".*") {
                if let Some(r) = found(format!("{pkg}.{first}")) {
                    return r;
                }
            }
        }
        if super::types::is_java_primitive(&first) || first.chars().next().is_some_and(char::is_uppercase) {
            Resolution::External
        } else {
            Resolution::Unknown
        }
    }

    /// Resolves a type name as written inside `context` to a project type.
    pub fn resolve_type_name(&self, context: &str, written: &str) -> Option<String> {
        match self.resolve_in(context, written) {
            Resolution::Local(q) => Some(q),
            _ => None,
        }
    }

    fn link_inheritance(&mut self) {
        let mut edges = Vec::new();
        for t in self.types() {
            let mut parents: Vec<(&String, EdgeKind)> = Vec::new();
            if let Some(s) = &t.superclass {
                parents.push((s, EdgeKind::Extends));
            }
            let iface_kind = if t.kind == TypeKind::Interface {
                EdgeKind::Extends
            } else {
                EdgeKind::Implements
            };
            parents.extend(t.interfaces.iter().map(|i| (i, iface_kind)));
            for (written, kind) in parents {
                // Parents resolve in the scope enclosing the child, since a
                // type's own members are not visible in its header.
                let scope = self
                    .enclosing
                    .get(&t.qualified_name)
                    .cloned()
                    .unwrap_or_else(|| t.qualified_name.clone());
                let resolved = self.resolve_header(&scope, &t.qualified_name, written);
                edges.push(match resolved {
                    Some(q) => InheritanceEdge {
                        child: t.qualified_name.clone(),
                        parent: q,
                        kind,
                        external: false,
                    },
                    None => InheritanceEdge {
                        child: t.qualified_name.clone(),
                        parent: erase(written),
                        kind,
                        external: true,
                    },
                });
            }
        }
        edges.sort();
        self.inheritance_edges = edges;
    }

    /// Header resolution cannot consult ancestors (they are being built),
    /// so it walks lexical scopes and imports only.
    fn resolve_header(&self, scope: &str, child: &str, written: &str) -> Option<String> {
        let name = erase(written);
        if self.type_index.contains_key(&name) && name.contains('.') {
            return Some(name);
        }
        let unit = self.unit_of(child)?;
        let (first, rest) = match name.split_once('.') {
            Some((f, r)) => (f.to_string(), Some(r.to_string())),
            None => (name.clone(), None),
        };
        let found = |q: String| -> Option<String> {
            let q = match &rest {
                Some(r) => format!("{q}.{r}"),
                None => q,
            };
            (self.type_index.contains_key(&q) && q != child).then_some(q)
        };
        if scope != child {
            let mut s = Some(scope.to_string());
            while let Some(cur) = s {
                if cur.rsplit('.').next() == Some(first.as_str()) {
                    if let Some(q) = found(cur.clone()) {
                        return Some(q);
                    }
                }
                if let Some(q) = found(format!("{cur}.{first}")) {
                    return Some(q);
                }
                s = self.enclosing.get(&cur).cloned();
            }
        }
        for imp in &unit.imports {
            if !imp.starts_with("static ") && imp.rsplit('.').next() == Some(first.as_str()) {
                return found(imp.clone());
            }
        }
        let in_package = if unit.package.is_empty() {
            first.clone()
        } else {
            format!("{}.{}", unit.package, first)
        };
        if let Some(q) = found(in_package) {
            return Some(q);
        }
        unit.imports
            .iter()
            .filter_map(|imp| imp.strip_suffix(".*"))
            .find_map(|pkg| found(format!("{pkg}.{first}")))
    }

    fn check_cycles(&self) -> Result<(), ResolveError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Open,
            Done,
        }
        fn visit(
            model: &ProjectModel,
            t: &str,
            marks: &mut BTreeMap<String, Mark>,
            stack: &mut Vec<String>,
        ) -> Result<(), ResolveError> {
            match marks.get(t) {
                Some(Mark::Done) => return Ok(()),
                Some(Mark::Open) => {
                    let start = stack.iter().position(|s| s == t).unwrap_or(0);
                    let mut cycle = stack[start..].to_vec();
                    cycle.push(t.to_string());
                    return Err(ResolveError::InheritanceCycle { cycle });
                }
                None => {}
            }
            marks.insert(t.to_string(), Mark::Open);
            stack.push(t.to_string());
            for p in model.local_parents(t) {
                visit(model, p, marks, stack)?;
            }
            stack.pop();
            marks.insert(t.to_string(), Mark::Done);
            Ok(())
        }
        let mut marks = BTreeMap::new();
        for t in self.type_index.keys() {
            visit(self, t, &mut marks, &mut Vec::new())?;
        }
        Ok(())
    }

    /// Direct project-local supertypes.
    pub fn local_parents<'a>(&'a self, t: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.inheritance_edges
            .iter()
            .filter(move |e| e.child == t && !e.external)
            .map(|e| e.parent.as_str())
    }

    /// The project-local superclass (`extends` of a class), if any.
    pub fn local_superclass(&self, t: &str) -> Option<&str> {
        let decl = self.type_decl(t)?;
        if decl.kind == TypeKind::Interface {
            return None;
        }
        self.inheritance_edges
            .iter()
            .find(|e| e.child == t && !e.external && e.kind == EdgeKind::Extends)
            .map(|e| e.parent.as_str())
    }

    /// Direct project-local subtypes.
    pub fn local_subtypes(&self, t: &str) -> Vec<&str> {
        self.inheritance_edges
            .iter()
            .filter(|e| e.parent == t && !e.external)
            .map(|e| e.child.as_str())
            .collect()
    }

    /// Transitive project-local supertypes, nearest first.
    pub fn ancestors(&self, t: &str) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut queue: VecDeque<String> = self.local_parents(t).map(str::to_string).collect();
        while let Some(p) = queue.pop_front() {
            if p == t || !seen.insert(p.clone()) {
                continue;
            }
            queue.extend(self.local_parents(&p).map(str::to_string));
            out.push(p);
        }
        out
    }

    /// Marks methods that match a name and arity declared by a project
    /// ancestor, independent of `@Override`.
    fn mark_signature_overrides(&mut self) {
        let mut marks: Vec<(String, usize)> = Vec::new();
        for t in self.types() {
            let ancestors = self.ancestors(&t.qualified_name);
            for (i, m) in t.methods.iter().enumerate() {
                if m.is_constructor || m.is_static() || m.is_override {
                    continue;
                }
                let overrides = ancestors.iter().filter_map(|a| self.type_decl(a)).any(|a| {
                    a.methods.iter().any(|am| {
                        !am.is_constructor
                            && !am.is_static()
                            && !am.modifiers.contains("private")
                            && am.name == m.name
                            && am.params.len() == m.params.len()
                    })
                });
                if overrides {
                    marks.push((t.qualified_name.clone(), i));
                }
            }
        }
        for (t, i) in marks {
            if let Some(decl) = self.type_decl_mut(&t) {
                decl.methods[i].is_override = true;
            }
        }
    }

    /// Types searched for members reachable from `t`: itself, then its
    /// ancestors.
    fn member_scope(&self, t: &str) -> Vec<String> {
        let mut out = vec![t.to_string()];
        out.extend(self.ancestors(t));
        out
    }

    fn find_member(&self, t: &str, name: &str, kind: MemberKind) -> Option<String> {
        self.member_scope(t).into_iter().find(|s| {
            self.type_decl(s).is_some_and(|d| match kind {
                MemberKind::Field => d.field(name).is_some(),
                MemberKind::Method => d.methods.iter().any(|m| !m.is_constructor && m.name == name),
            })
        })
    }

    /// Lexically visible member: own type and ancestors, then enclosing types.
    fn find_visible(&self, t: &str, name: &str, kind: MemberKind) -> Option<String> {
        let mut scope = Some(t.to_string());
        while let Some(s) = scope {
            if let Some(found) = self.find_member(&s, name, kind) {
                return Some(found);
            }
            scope = self.enclosing.get(&s).cloned();
        }
        None
    }

    fn declarers(&self, name: &str, kind: MemberKind) -> Vec<String> {
        self.types()
            .filter(|d| match kind {
                MemberKind::Field => d.field(name).is_some(),
                MemberKind::Method => d.methods.iter().any(|m| !m.is_constructor && m.name == name),
            })
            .map(|d| d.qualified_name.clone())
            .collect()
    }

    /// Static type of a receiver identifier inside method `m` of `t`.
    fn receiver_type(&self, t: &TypeDecl, m: &MethodDecl, receiver: &str) -> Resolution {
        let profile = m.body.as_ref();
        if receiver == "super" {
            return match self.local_superclass(&t.qualified_name) {
                Some(s) => Resolution::Local(s.to_string()),
                None => Resolution::External,
            };
        }
        if receiver == "<literal>" {
            return Resolution::External;
        }
        if let Some(ty) = receiver.strip_prefix("new ") {
            return self.resolve_in(&t.qualified_name, ty);
        }
        if let Some(ty) = profile.and_then(|p| p.local_types.get(receiver)) {
            return self.resolve_in(&t.qualified_name, ty);
        }
        if let Some(owner) = self.find_visible(&t.qualified_name, receiver, MemberKind::Field) {
            if let Some(f) = self.type_decl(&owner).and_then(|d| d.field(receiver)) {
                return self.resolve_in(&owner, &f.type_name);
            }
        }
        if receiver.chars().next().is_some_and(char::is_uppercase) {
            return self.resolve_in(&t.qualified_name, receiver);
        }
        Resolution::Unknown
    }

    fn add_ref(&mut self, owner: String, member: &str, kind: MemberKind, site: RefSite) {
        self.reverse_refs
            .entry(MemberKey {
                type_name: owner,
                member: member.to_string(),
                kind,
            })
            .or_default()
            .push(site);
    }

    fn collect_references(&mut self) {
        let mut refs: Vec<(String, String, MemberKind, RefSite)> = Vec::new();
        let mut usages: Vec<(String, String)> = Vec::new();

        for t in self.types() {
            let tq = &t.qualified_name;
            let mut mentioned: Vec<&str> = t.fields.iter().map(|f| f.type_name.as_str()).collect();
            for (i, m) in t.methods.iter().enumerate() {
                let from = MethodRef {
                    type_name: tq.clone(),
                    index: i,
                };
                mentioned.extend(m.params.iter().map(|p| p.type_name.as_str()));
                mentioned.extend(m.return_type.as_deref());
                let Some(p) = &m.body else { continue };
                mentioned.extend(p.type_mentions.iter().map(String::as_str));
                mentioned.extend(p.local_types.values().map(String::as_str));

                for name in p.local_call_names.keys() {
                    if let Some(owner) = self.find_visible(tq, name, MemberKind::Method) {
                        let site = RefSite {
                            from: from.clone(),
                            via: Some(tq.clone()),
                        };
                        refs.push((owner, name.clone(), MemberKind::Method, site));
                    }
                }
                let own = p.own_field_reads.keys().chain(p.own_field_writes.keys());
                for name in own.collect::<BTreeSet<_>>() {
                    let site = RefSite {
                        from: from.clone(),
                        via: Some(tq.clone()),
                    };
                    refs.push((tq.clone(), name.clone(), MemberKind::Field, site));
                }
                let qualified = p
                    .qualified_calls
                    .keys()
                    .map(|k| (k, MemberKind::Method))
                    .chain(p.foreign_accesses.keys().map(|k| (k, MemberKind::Field)));
                for ((receiver, member), kind) in qualified {
                    match self.receiver_type(t, m, receiver) {
                        Resolution::Local(r) => {
                            if r != *tq {
                                usages.push((r.clone(), tq.clone()));
                            }
                            if let Some(owner) = self.find_member(&r, member, kind) {
                                let via = if receiver == "super" { tq.clone() } else { r };
                                let site = RefSite {
                                    from: from.clone(),
                                    via: Some(via),
                                };
                                refs.push((owner, member.clone(), kind, site));
                            }
                        }
                        Resolution::External => {}
                        Resolution::Unknown => {
                            for owner in self.declarers(member, kind) {
                                let site = RefSite {
                                    from: from.clone(),
                                    via: None,
                                };
                                refs.push((owner, member.clone(), kind, site));
                            }
                        }
                    }
                }
            }
            for written in mentioned {
                if let Resolution::Local(u) = self.resolve_in(tq, written) {
                    if u != *tq {
                        usages.push((u, tq.clone()));
                    }
                }
            }
        }

        for (owner, member, kind, site) in refs {
            self.add_ref(owner, &member, kind, site);
        }
        for sites in self.reverse_refs.values_mut() {
            sites.sort();
            sites.dedup();
        }
        for (used, user) in usages {
            self.type_usages.entry(used).or_default().insert(user);
        }
    }

    /// Reference sites of a named member (all overloads).
    pub fn refs_to(&self, type_name: &str, member: &str, kind: MemberKind) -> &[RefSite] {
        self.reverse_refs
            .get(&MemberKey {
                type_name: type_name.to_string(),
                member: member.to_string(),
                kind,
            })
            .map_or(&[], Vec::as_slice)
    }

    /// Project types mentioning `t` other than through inheritance.
    pub fn users_of(&self, t: &str) -> BTreeSet<&str> {
        self.type_usages
            .get(t)
            .map(|s| s.iter().map(String::as_str).collect())
            .unwrap_or_default()
    }

    /// Pretty JSON dump for debugging.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).unwrap_or_default()
    }
}

impl fmt::Display for EntityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntityKind::Type => "type",
            EntityKind::Method => "method",
        })
    }
}
