//! Canonical Java rendering of a parsed unit.
//!
//! Only what the model keeps is printed: field initializers, enum
//! constants, initializer blocks and unsupported declarations are dropped.
//! Method bodies are reproduced verbatim. Parsing the output yields the
//! same declarations, so `to_java(parse(to_java(u))) == to_java(u)`.

use std::collections::BTreeSet;
use std::fmt::Write;

use super::model::{MethodDecl, SourceUnit, TypeDecl, TypeKind};

const MODIFIER_ORDER: &[&str] = &[
    "public",
    "protected",
    "private",
    "abstract",
    "static",
    "final",
    "sealed",
    "non-sealed",
    "transient",
    "volatile",
    "synchronized",
    "native",
    "strictfp",
];

pub fn to_java(unit: &SourceUnit) -> String {
    let mut out = String::new();
    if !unit.package.is_empty() {
        let _ = writeln!(out, "package {};\n", unit.package);
    }
    for import in &unit.imports {
        let _ = writeln!(out, "import {import};");
    }
    if !unit.imports.is_empty() {
        out.push('\n');
    }
    for (i, t) in unit.types.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        write_type(&mut out, t, 0);
    }
    out
}

fn modifiers(set: &BTreeSet<String>, skip: &[&str]) -> String {
    let mut out = String::new();
    for m in MODIFIER_ORDER {
        if set.contains(*m) && !skip.contains(m) {
            out.push_str(m);
            out.push(' ');
        }
    }
    out
}

fn write_type(out: &mut String, t: &TypeDecl, depth: usize) {
    let pad = "    ".repeat(depth);
    let inner = "    ".repeat(depth + 1);
    let keyword = match t.kind {
        TypeKind::Class => "class",
        TypeKind::Interface => "interface",
        TypeKind::Enum => "enum",
    };
    let _ = write!(out, "{pad}{}{keyword} {}", modifiers(&t.modifiers, &[]), t.name);
    if let Some(sup) = &t.superclass {
        let _ = write!(out, " extends {sup}");
    }
    if !t.interfaces.is_empty() {
        let word = if t.kind == TypeKind::Interface {
            "extends"
        } else {
            "implements"
        };
        let _ = write!(out, " {word} {}", t.interfaces.join(", "));
    }
    out.push_str(" {\n");
    if t.kind == TypeKind::Enum {
        let _ = writeln!(out, "{inner};");
    }
    let interface = t.kind == TypeKind::Interface;
    for f in &t.fields {
        let _ = writeln!(
            out,
            "{inner}{}{} {};",
            modifiers(&f.modifiers, &[]),
            f.type_name,
            f.name
        );
    }
    for m in &t.methods {
        write_method(out, m, &t.name, interface, &inner);
    }
    for n in &t.nested {
        write_type(out, n, depth + 1);
    }
    let _ = writeln!(out, "{pad}}}");
}

fn write_method(out: &mut String, m: &MethodDecl, type_name: &str, interface: bool, pad: &str) {
    if m.is_override {
        let _ = writeln!(out, "{pad}@Override");
    }
    out.push_str(pad);
    out.push_str(&modifiers(&m.modifiers, &[]));
    if interface && m.modifiers.contains("default") {
        out.push_str("default ");
    }
    match &m.return_type {
        Some(rt) => {
            let _ = write!(out, "{rt} {}", m.name);
        }
        None => out.push_str(type_name),
    }
    let params: Vec<String> = m
        .params
        .iter()
        .map(|p| match p.type_name.strip_suffix("...") {
            Some(base) => format!("{base}... {}", p.name),
            None => format!("{} {}", p.type_name, p.name),
        })
        .collect();
    let _ = write!(out, "({})", params.join(", "));
    if !m.throws.is_empty() {
        let _ = write!(out, " throws {}", m.throws.join(", "));
    }
    match (&m.body, &m.body_text) {
        (Some(_), Some(text)) => {
            let _ = writeln!(out, " {{{text}}}");
        }
        (Some(_), None) => out.push_str(" {}\n"),
        (None, _) => out.push_str(";\n"),
    }
}
