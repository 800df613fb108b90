//! Type-name helpers shared by the parser and the metrics.

use serde::{Deserialize, Serialize};

const JAVA_PRIMITIVES: &[&str] = &[
    "byte", "short", "int", "long", "float", "double", "boolean", "char",
];

pub fn is_java_primitive(name: &str) -> bool {
    JAVA_PRIMITIVES.contains(&name)
}

/// Options that influence how declarations are classified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct ParseOptions {
    /// Treat `String` as primitive-like.
    pub string_is_primitive: bool,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self {
            string_is_primitive: true,
        }
    }
}

/// Strips generic arguments, array dimensions, varargs and package
/// qualification: `java.util.List<String>[]` becomes `List`.
pub fn raw_type_name(type_name: &str) -> String {
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
    let out = out.replace("[]", "").replace("...", "");
    let out = out.trim();
    out.rsplit('.').next().unwrap_or(out).trim().to_string()
}

/// Pure function of the type name and options.
pub fn is_primitive_like(type_name: &str, opts: &ParseOptions) -> bool {
    let raw = raw_type_name(type_name);
    is_java_primitive(&raw) || (opts.string_is_primitive && raw == "String")
}
