//! Method-body scanning. Bodies are never parsed into trees; the profile is
//! read off token patterns (`name(` is a call, `recv.member` a qualified
//! access, `this.field` an own access).

use std::collections::BTreeSet;

use super::lexer::{Token, TokenKind};
use super::model::{BodyProfile, ParamDecl};
use super::types::raw_type_name;

/// Words that can precede `(` or an identifier without being a call or a
/// declared type.
const NON_CALL_WORDS: &[&str] = &[
    "if", "for", "while", "switch", "catch", "synchronized", "return", "new", "throw", "assert",
    "else", "do", "try", "finally", "case", "default", "instanceof", "this", "super", "class",
    "yield", "break", "continue",
];

const CONTROL_WORDS: &[&str] = &["if", "for", "while", "do", "switch", "try", "synchronized"];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<="];

fn is_word(t: &Token) -> bool {
    t.kind == TokenKind::Ident && !NON_CALL_WORDS.contains(&t.text.as_str())
}

fn starts_upper(s: &str) -> bool {
    s.chars().next().is_some_and(char::is_uppercase)
}

pub(crate) struct BodyScan {
    pub profile: BodyProfile,
    pub used_params: BTreeSet<String>,
}

/// Scans the tokens strictly between a body's braces.
pub(crate) fn scan_body(
    toks: &[Token],
    own_fields: &BTreeSet<String>,
    params: &[ParamDecl],
    open_line: u32,
    close_line: u32,
) -> BodyScan {
    let mut p = BodyProfile {
        line_count: close_line - open_line + 1,
        ..BodyProfile::default()
    };
    let param_names: BTreeSet<&str> = params.iter().map(|p| p.name.as_str()).collect();
    for param in params {
        p.local_types
            .insert(param.name.clone(), raw_type_name(&param.type_name));
    }
    let mut locals: BTreeSet<String> = BTreeSet::new();
    let mut used_params = BTreeSet::new();

    let text = |i: usize| toks.get(i).map(|t| t.text.as_str()).unwrap_or("");
    let mut paren_depth = 0i32;

    for (i, tok) in toks.iter().enumerate() {
        match tok.text.as_str() {
            "(" => paren_depth += 1,
            ")" => paren_depth -= 1,
            ";" if paren_depth <= 0 => p.statement_count += 1,
            w if tok.is_ident() && CONTROL_WORDS.contains(&w) => p.statement_count += 1,
            _ => {}
        }
        if !tok.is_ident() {
            continue;
        }
        let name = tok.text.as_str();
        let prev = if i > 0 { text(i - 1) } else { "" };
        let next = text(i + 1);

        if prev == "." {
            member_segment(toks, i, &mut p);
            continue;
        }
        if param_names.contains(name) && next != "(" {
            used_params.insert(name.to_string());
        }
        if matches!(name, "this" | "super") {
            continue;
        }
        if NON_CALL_WORDS.contains(&name) {
            continue;
        }

        if next == "(" {
            if prev == "new" {
                p.type_mentions.insert(name.to_string());
            } else {
                *p.local_call_names.entry(name.to_string()).or_default() += 1;
            }
            continue;
        }

        let shadowed = locals.contains(name) || param_names.contains(name);
        if next == "." {
            if !shadowed && own_fields.contains(name) {
                *p.own_field_reads.entry(name.to_string()).or_default() += 1;
            } else if !shadowed && starts_upper(name) {
                p.type_mentions.insert(name.to_string());
            }
            continue;
        }

        if let Some(ty) = declared_local_type(toks, i) {
            if starts_upper(&ty) {
                p.type_mentions.insert(ty.clone());
            }
            locals.insert(name.to_string());
            p.local_types.insert(name.to_string(), ty);
            continue;
        }
        if next == "->" {
            locals.insert(name.to_string());
            continue;
        }

        if !shadowed && own_fields.contains(name) {
            if is_write(toks, i, i) {
                *p.own_field_writes.entry(name.to_string()).or_default() += 1;
            } else {
                *p.own_field_reads.entry(name.to_string()).or_default() += 1;
            }
        } else if !shadowed && starts_upper(name) {
            p.type_mentions.insert(name.to_string());
        }
    }

    p.single_forward = is_single_forward(toks);
    BodyScan {
        profile: p,
        used_params,
    }
}

/// Token at `i` is an assignment target: followed by an assignment or
/// increment operator, or preceded (at `head`) by a prefix increment.
fn is_write(toks: &[Token], head: usize, i: usize) -> bool {
    let next = toks.get(i + 1).map(|t| t.text.as_str()).unwrap_or("");
    let before = if head > 0 { toks[head - 1].text.as_str() } else { "" };
    ASSIGN_OPS.contains(&next) || matches!(next, "++" | "--") || matches!(before, "++" | "--")
}

/// Handles `<chain>.name` where `toks[i]` is `name` and `toks[i-1]` is `.`.
fn member_segment(toks: &[Token], i: usize, p: &mut BodyProfile) {
    let member = toks[i].text.clone();
    let is_call = toks.get(i + 1).is_some_and(|t| t.is("("));
    let Some((head, first_after_head)) = chain_head(toks, i - 1) else {
        return;
    };
    let head_text = toks[head].text.as_str();

    // `this.x` / `super.x`, directly.
    if first_after_head == i && matches!(head_text, "this" | "super") {
        if is_call {
            if head_text == "this" {
                *p.local_call_names.entry(member).or_default() += 1;
            } else {
                *p.qualified_calls
                    .entry(("super".into(), member))
                    .or_default() += 1;
            }
        } else if is_write(toks, head, i) {
            *p.own_field_writes.entry(member).or_default() += 1;
        } else {
            *p.own_field_reads.entry(member).or_default() += 1;
        }
        return;
    }

    let receiver = match head_text {
        // `this.f.m()`: the receiver is the own field `f`.
        "this" => toks[first_after_head].text.clone(),
        "super" => "super".to_string(),
        _ if toks[head].kind == TokenKind::Literal || toks[head].kind == TokenKind::Number => {
            "<literal>".to_string()
        }
        _ if toks[head].kind == TokenKind::Punct => "<expr>".to_string(),
        _ if head > 0 && toks[head - 1].is("new") => format!("new {head_text}"),
        _ => head_text.to_string(),
    };
    let key = (receiver, member);
    if is_call {
        *p.qualified_calls.entry(key).or_default() += 1;
    } else {
        *p.foreign_accesses.entry(key).or_default() += 1;
    }
}

/// Walks back from the `.` at `dot` to the first token of the access chain.
/// Returns the head index and the index of the identifier right after the
/// head's dot.
fn chain_head(toks: &[Token], dot: usize) -> Option<(usize, usize)> {
    let mut dot = dot;
    loop {
        if dot == 0 {
            return None;
        }
        let mut k = dot - 1;
        // Skip a call's argument list or an index expression.
        if toks[k].is(")") || toks[k].is("]") {
            let (open, close) = if toks[k].is(")") { ("(", ")") } else { ("[", "]") };
            let mut depth = 0i32;
            loop {
                if toks[k].is(close) {
                    depth += 1;
                } else if toks[k].is(open) {
                    depth -= 1;
                    if depth == 0 {
                        break;
                    }
                }
                if k == 0 {
                    return None;
                }
                k -= 1;
            }
            if k == 0 {
                return None;
            }
            k -= 1;
            if !toks[k].is_ident() {
                // Parenthesized expression or array literal as head.
                return Some((k + 1, dot + 1));
            }
        }
        match toks[k].kind {
            TokenKind::Ident | TokenKind::Literal | TokenKind::Number => {}
            _ => return None,
        }
        if k > 0 && toks[k - 1].is(".") {
            dot = k - 1;
            continue;
        }
        return Some((k, dot + 1));
    }
}

/// Recognizes `Type name` in declaration position and returns the raw type.
fn declared_local_type(toks: &[Token], i: usize) -> Option<String> {
    let next = toks.get(i + 1).map(|t| t.text.as_str()).unwrap_or("");
    if !matches!(next, "=" | ";" | "," | ":" | ")") {
        return None;
    }
    if i == 0 {
        return None;
    }
    let prev = &toks[i - 1];
    if prev.is(">") || prev.is("]") {
        // Walk back over generic arguments / array dims to the base name.
        let mut k = i - 1;
        let mut depth = 0i32;
        loop {
            let t = toks[k].text.as_str();
            match t {
                ">" | "]" => depth += 1,
                "<" | "[" => depth -= 1,
                _ => {}
            }
            if depth == 0 && toks[k].is_ident() {
                break;
            }
            if k == 0 {
                return None;
            }
            k -= 1;
        }
        let base = &toks[k];
        if !is_word(base) {
            return None;
        }
        // Generic: the opener before the declared name must follow the base.
        if prev.is(">") && !toks.get(k + 1).is_some_and(|t| t.is("<")) {
            return None;
        }
        if prev.is("]") && !toks.get(k + 1).is_some_and(|t| t.is("[") || t.is("<")) {
            return None;
        }
        if k > 0 && toks[k - 1].is(".") {
            return None;
        }
        return Some(base.text.clone());
    }
    if is_word(prev) {
        if i >= 2 && toks[i - 2].is(".") {
            return None;
        }
        // `a b;` needs `a` to look like a type: primitive, var, or capitalized.
        if starts_upper(&prev.text) || super::types::is_java_primitive(&prev.text) || prev.is("var")
        {
            return Some(prev.text.clone());
        }
    }
    None
}

fn is_single_forward(toks: &[Token]) -> bool {
    let mut k = 0;
    let at = |k: usize, s: &str| toks.get(k).is_some_and(|t| t.is(s));
    if at(k, "return") {
        k += 1;
    }
    if at(k, "this") && at(k + 1, ".") {
        k += 2;
    }
    let ident = |k: usize| toks.get(k).is_some_and(is_word);
    if !(ident(k) && at(k + 1, ".") && ident(k + 2) && at(k + 3, "(")) {
        return false;
    }
    k += 4;
    let mut expect_arg = true;
    let mut saw_arg = false;
    loop {
        let Some(t) = toks.get(k) else { return false };
        if t.is(")") {
            if saw_arg && expect_arg {
                return false;
            }
            k += 1;
            break;
        }
        if expect_arg {
            let simple = matches!(t.kind, TokenKind::Literal | TokenKind::Number)
                || (t.kind == TokenKind::Ident && !NON_CALL_WORDS.contains(&t.text.as_str()))
                || t.is("this");
            if !simple {
                return false;
            }
            saw_arg = true;
            expect_arg = false;
        } else if t.is(",") {
            expect_arg = true;
        } else {
            return false;
        }
        k += 1;
    }
    at(k, ";") && k + 1 == toks.len()
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn scan(body: &str, fields: &[&str], params: &[(&str, &str)]) -> BodyScan {
        let toks = tokenize(body).tokens;
        let fields = fields.iter().map(|s| s.to_string()).collect();
        let params: Vec<ParamDecl> = params
            .iter()
            .map(|(t, n)| ParamDecl {
                name: n.to_string(),
                type_name: t.to_string(),
                is_primitive: false,
                used_in_body: false,
            })
            .collect();
        scan_body(&toks, &fields, &params, 1, 1)
    }

    #[test]
    fn getter_body() {
        let s = scan("return x;", &["x"], &[]);
        assert_eq!(s.profile.own_read_count(), 1);
        assert_eq!(s.profile.own_write_count(), 0);
        assert_eq!(s.profile.statement_count, 1);
        assert_eq!(s.profile.local_call_count(), 0);
    }

    #[test]
    fn setter_with_log_call() {
        let s = scan("x = v; log();", &["x"], &[("int", "v")]);
        assert_eq!(s.profile.own_write_count(), 1);
        assert_eq!(s.profile.local_call_names.get("log"), Some(&1));
        assert!(s.used_params.contains("v"));
    }

    #[test]
    fn this_qualified_accesses() {
        let s = scan("this.x = x; this.y++; this.go(); return this.z;", &["x", "y"], &[("int", "x")]);
        assert_eq!(s.profile.own_field_writes.get("x"), Some(&1));
        assert_eq!(s.profile.own_field_writes.get("y"), Some(&1));
        assert_eq!(s.profile.own_field_reads.get("z"), Some(&1));
        assert_eq!(s.profile.local_call_names.get("go"), Some(&1));
        assert!(s.used_params.contains("x"));
    }

    #[test]
    fn foreign_receivers_and_chains() {
        let s = scan(
            "int t = other.a + other.b; return other.sum().round() + helper.f(t);",
            &["helper"],
            &[("Other", "other")],
        );
        let p = &s.profile;
        assert_eq!(p.foreign_accesses.get(&("other".into(), "a".into())), Some(&1));
        assert_eq!(p.foreign_accesses.get(&("other".into(), "b".into())), Some(&1));
        assert_eq!(p.qualified_calls.get(&("other".into(), "sum".into())), Some(&1));
        assert_eq!(p.qualified_calls.get(&("other".into(), "round".into())), Some(&1));
        assert_eq!(p.qualified_calls.get(&("helper".into(), "f".into())), Some(&1));
        assert_eq!(p.own_field_reads.get("helper"), Some(&1));
        assert_eq!(p.local_types.get("t").map(String::as_str), Some("int"));
        assert_eq!(p.local_types.get("other").map(String::as_str), Some("Other"));
    }

    #[test]
    fn locals_shadow_fields() {
        let s = scan("String name = \"a\"; name = name + 1; return name;", &["name"], &[]);
        assert_eq!(s.profile.own_read_count(), 0);
        assert_eq!(s.profile.own_write_count(), 0);
    }

    #[test]
    fn generic_and_foreach_locals() {
        let s = scan(
            "List<String> out = new ArrayList<>(); for (String t : tasks) { out.add(t); } return out;",
            &["tasks"],
            &[],
        );
        let p = &s.profile;
        assert_eq!(p.local_types.get("out").map(String::as_str), Some("List"));
        assert_eq!(p.local_types.get("t").map(String::as_str), Some("String"));
        assert_eq!(p.own_field_reads.get("tasks"), Some(&1));
        assert!(p.type_mentions.contains("ArrayList"));
        // for + 2 declarations/statements + return
        assert_eq!(p.statement_count, 4);
    }

    #[test]
    fn single_forward_shapes() {
        let fwd = |b: &str| scan(b, &["d"], &[]).profile.single_forward;
        assert!(fwd("return d.get(a, 1);"));
        assert!(fwd("d.run();"));
        assert!(fwd("return this.d.get(a);"));
        assert!(!fwd("return d.get(a).b();"));
        assert!(!fwd("return d.get(a + 1);"));
        assert!(!fwd("return super.get(a);"));
        assert!(!fwd("x(); d.run();"));
        assert!(!fwd(""));
    }

    #[test]
    fn super_calls_are_qualified() {
        let s = scan("super.close(); super(1);", &[], &[]);
        assert_eq!(
            s.profile.qualified_calls.get(&("super".into(), "close".into())),
            Some(&1)
        );
        assert_eq!(s.profile.local_call_count(), 0);
    }

    #[test]
    fn constructor_calls_are_type_mentions() {
        let s = scan("return new Point(x, y);", &["x", "y"], &[]);
        assert!(s.profile.type_mentions.contains("Point"));
        assert_eq!(s.profile.local_call_count(), 0);
        assert_eq!(s.profile.own_read_count(), 2);
    }
}
