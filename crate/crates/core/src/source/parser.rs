//! Tolerant recursive-descent parser for the declaration layer of Java.
//!
//! Recognized: package and import declarations, class/interface/enum
//! headers with extends/implements, fields, methods and constructors with
//! modifiers, parameters and throws clauses, `@Override`, and nested types.
//! Anything else is skipped with a diagnostic; nothing here aborts a unit.

use std::collections::BTreeSet;

use super::body::scan_body;
use super::lexer::{tokenize, Token, TokenKind};
use super::model::{
    FieldDecl, LineRange, MethodDecl, ParamDecl, ParseDiagnostic, SourceUnit, TypeDecl, TypeKind,
};
use super::types::{is_primitive_like, ParseOptions};

const MODIFIERS: &[&str] = &[
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "sealed",
    "default",
];

/// Parses one compilation unit with default options.
pub fn parse_unit(text: &[u8], path: &str) -> SourceUnit {
    parse_unit_with(text, path, &ParseOptions::default())
}

pub fn parse_unit_with(text: &[u8], path: &str, opts: &ParseOptions) -> SourceUnit {
    let mut diagnostics = Vec::new();
    let src = match std::str::from_utf8(text) {
        Ok(s) => std::borrow::Cow::Borrowed(s),
        Err(e) => {
            let line = text[..e.valid_up_to()].iter().filter(|b| **b == b'\n').count() as u32 + 1;
            diagnostics.push(ParseDiagnostic {
                line,
                message: "invalid UTF-8; decoded lossily".into(),
            });
            String::from_utf8_lossy(text)
        }
    };
    parse_source_inner(&src, path, opts, diagnostics)
}

/// Parses already-decoded source text.
pub fn parse_source(src: &str, path: &str, opts: &ParseOptions) -> SourceUnit {
    parse_source_inner(src, path, opts, Vec::new())
}

fn parse_source_inner(
    src: &str,
    path: &str,
    opts: &ParseOptions,
    mut diagnostics: Vec<ParseDiagnostic>,
) -> SourceUnit {
    let lexed = tokenize(src);
    diagnostics.extend(lexed.diagnostics);
    let mut parser = Parser {
        src,
        toks: &lexed.tokens,
        pos: 0,
        opts,
        diagnostics,
        package: String::new(),
    };
    let mut unit = SourceUnit {
        path: path.to_string(),
        package: String::new(),
        imports: Vec::new(),
        types: Vec::new(),
        diagnostics: Vec::new(),
        line_count: lexed.line_count,
    };

    if src.trim().is_empty() {
        parser.diag(1, "empty unit");
    } else {
        parser.compilation_unit(&mut unit);
        if unit.types.is_empty() && parser.diagnostics.is_empty() {
            parser.diag(1, "no type declarations found");
        }
    }
    unit.package = parser.package.clone();
    parser.diagnostics.sort_by_key(|d| d.line);
    unit.diagnostics = parser.diagnostics;
    unit
}

struct Parser<'a> {
    src: &'a str,
    toks: &'a [Token],
    pos: usize,
    opts: &'a ParseOptions,
    diagnostics: Vec<ParseDiagnostic>,
    package: String,
}

/// Leading annotations and modifiers of a declaration.
#[derive(Default)]
struct Preamble {
    modifiers: BTreeSet<String>,
    is_override: bool,
    start_line: Option<u32>,
}

impl<'a> Parser<'a> {
    fn diag(&mut self, line: u32, message: impl Into<String>) {
        self.diagnostics.push(ParseDiagnostic {
            line,
            message: message.into(),
        });
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + offset)
    }

    fn at(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text))
    }

    fn at_offset(&self, offset: usize, text: &str) -> bool {
        self.peek_at(offset).is_some_and(|t| t.is(text))
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.at(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn line(&self) -> u32 {
        self.peek()
            .or_else(|| self.toks.last())
            .map_or(1, |t| t.line)
    }

    fn ident(&mut self) -> Option<String> {
        let t = self.peek()?;
        if t.kind == TokenKind::Ident {
            self.pos += 1;
            Some(t.text.clone())
        } else {
            None
        }
    }

    /// Skips a balanced group starting at the current opener. Returns the
    /// index of the matching closer, or `None` at end of input.
    fn skip_balanced(&mut self, open: &str, close: &str) -> Option<usize> {
        debug_assert!(self.at(open));
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            if t.is(open) {
                depth += 1;
            } else if t.is(close) {
                depth -= 1;
                if depth == 0 {
                    let idx = self.pos;
                    self.pos += 1;
                    return Some(idx);
                }
            }
            self.pos += 1;
        }
        None
    }

    /// Skips `<...>` type arguments/parameters.
    fn skip_angles(&mut self) {
        let mut depth = 0usize;
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => {
                    depth -= 1;
                    if depth == 0 {
                        self.pos += 1;
                        return;
                    }
                }
                ";" | "{" | "}" | "(" | ")" | "=" => return,
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn compilation_unit(&mut self, unit: &mut SourceUnit) {
        let mut skipping = false;
        while self.peek().is_some() {
            if self.at("package") && !self.at_offset(1, ";") {
                let line = self.line();
                self.pos += 1;
                match self.qualified_name(false) {
                    Some(name) if self.eat(";") => {
                        self.package = name;
                        skipping = false;
                        continue;
                    }
                    _ => self.diag(line, "malformed package declaration"),
                }
                continue;
            }
            if self.at("import") {
                let line = self.line();
                self.pos += 1;
                let is_static = self.eat("static");
                match self.qualified_name(true) {
                    Some(name) if self.eat(";") => {
                        unit.imports.push(if is_static {
                            format!("static {name}")
                        } else {
                            name
                        });
                        skipping = false;
                        continue;
                    }
                    _ => self.diag(line, "malformed import declaration"),
                }
                continue;
            }
            if self.eat(";") {
                continue;
            }
            let start = self.pos;
            if let Some(decl) = self.type_declaration("") {
                skipping = false;
                if unit.types.iter().any(|t| t.qualified_name == decl.qualified_name) {
                    let line = decl.span.start;
                    self.diag(line, format!("duplicate type `{}` ignored", decl.qualified_name));
                } else {
                    unit.types.push(decl);
                }
                continue;
            }
            self.pos = start;
            if !skipping {
                let line = self.line();
                self.diag(line, "unrecognized tokens skipped");
                skipping = true;
            }
            self.pos += 1;
        }
    }

    /// `a.b.c`, optionally ending in `.*`.
    fn qualified_name(&mut self, allow_star: bool) -> Option<String> {
        let mut name = self.ident()?;
        while self.at(".") {
            if allow_star && self.at_offset(1, "*") {
                self.pos += 2;
                name.push_str(".*");
                return Some(name);
            }
            self.pos += 1;
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Some(name)
    }

    /// Annotations and modifiers. Leaves `pos` at the first token after.
    fn preamble(&mut self) -> Preamble {
        let mut pre = Preamble::default();
        loop {
            let Some(t) = self.peek() else { break };
            if t.is("@") && !self.at_offset(1, "interface") {
                pre.start_line.get_or_insert(t.line);
                self.pos += 1;
                let name = self.qualified_name(false).unwrap_or_default();
                if name == "Override" || name == "java.lang.Override" {
                    pre.is_override = true;
                }
                if self.at("(") {
                    self.skip_balanced("(", ")");
                }
                continue;
            }
            if t.kind == TokenKind::Ident && MODIFIERS.contains(&t.text.as_str()) {
                // `default:` inside a switch never reaches here; an interface
                // `default` method does.
                pre.start_line.get_or_insert(t.line);
                pre.modifiers.insert(t.text.clone());
                self.pos += 1;
                continue;
            }
            if t.is("non") && self.at_offset(1, "-") && self.at_offset(2, "sealed") {
                pre.start_line.get_or_insert(t.line);
                pre.modifiers.insert("non-sealed".into());
                self.pos += 3;
                continue;
            }
            break;
        }
        pre
    }

    fn type_keyword(&self) -> Option<TypeKind> {
        let kind = match self.peek()?.text.as_str() {
            "class" => TypeKind::Class,
            "interface" => TypeKind::Interface,
            "enum" => TypeKind::Enum,
            _ => return None,
        };
        self.peek_at(1)
            .filter(|t| t.kind == TokenKind::Ident)
            .map(|_| kind)
    }

    /// Parses a type declaration at `pos` (preamble included). Returns
    /// `None`, with `pos` unspecified, when no header is recognizable.
    fn type_declaration(&mut self, enclosing: &str) -> Option<TypeDecl> {
        let pre = self.preamble();
        let kind = self.type_keyword()?;
        self.type_after_preamble(pre, kind, enclosing)
    }

    fn type_after_preamble(
        &mut self,
        pre: Preamble,
        kind: TypeKind,
        enclosing: &str,
    ) -> Option<TypeDecl> {
        let keyword_line = self.line();
        let start_line = pre.start_line.unwrap_or(keyword_line);
        self.pos += 1;
        let name = self.ident()?;
        let qualified_name = if !enclosing.is_empty() {
            format!("{enclosing}.{name}")
        } else if self.package.is_empty() {
            name.clone()
        } else {
            format!("{}.{}", self.package, name)
        };
        if self.at("<") {
            self.skip_angles();
        }

        let mut superclass = None;
        let mut interfaces = Vec::new();
        loop {
            if self.eat("extends") {
                let list = self.type_list();
                if kind == TypeKind::Interface {
                    interfaces.extend(list);
                } else {
                    superclass = list.into_iter().next();
                }
            } else if self.eat("implements") {
                interfaces.extend(self.type_list());
            } else if self.eat("permits") {
                self.type_list();
            } else {
                break;
            }
        }
        if !self.at("{") {
            self.diag(keyword_line, format!("type `{name}` has no recognizable body"));
            return None;
        }
        let open = self.pos;
        self.pos += 1;

        let mut decl = TypeDecl {
            name,
            qualified_name,
            kind,
            modifiers: pre.modifiers,
            superclass,
            interfaces,
            fields: Vec::new(),
            methods: Vec::new(),
            nested: Vec::new(),
            span: LineRange::new(start_line, start_line),
        };
        let mut bodies: Vec<Option<(usize, usize)>> = Vec::new();

        if kind == TypeKind::Enum {
            self.enum_constants();
        }
        let close = self.members(&mut decl, &mut bodies);
        let end_line = match close {
            Some(idx) => self.toks[idx].line,
            None => {
                self.diag(self.toks[open].line, format!("type `{}` is never closed", decl.name));
                self.toks.last().map_or(start_line, |t| t.line)
            }
        };
        decl.span = LineRange::new(start_line, end_line.max(start_line));
        self.fill_bodies(&mut decl, &bodies);
        Some(decl)
    }

    fn type_list(&mut self) -> Vec<String> {
        let mut out = Vec::new();
        loop {
            match self.type_ref() {
                Some(t) => out.push(t),
                None => break,
            }
            if !self.eat(",") {
                break;
            }
        }
        out
    }

    /// A type reference rendered compactly: `Map<String, List<Foo>>[]`.
    fn type_ref(&mut self) -> Option<String> {
        while self.at("@") {
            self.pos += 1;
            self.qualified_name(false)?;
            if self.at("(") {
                self.skip_balanced("(", ")");
            }
        }
        let first = self.peek()?;
        if first.kind != TokenKind::Ident || first.is("this") || first.is("super") {
            return None;
        }
        let start = self.pos;
        self.pos += 1;
        loop {
            if self.at("<") {
                self.skip_angles();
            }
            if self.at(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Ident) {
                self.pos += 2;
                continue;
            }
            break;
        }
        while self.at("[") && self.at_offset(1, "]") {
            self.pos += 2;
        }
        Some(render_tokens(&self.toks[start..self.pos]))
    }

    fn enum_constants(&mut self) {
        loop {
            while self.at("@") {
                self.preamble();
            }
            let Some(t) = self.peek() else { return };
            if t.is(";") {
                self.pos += 1;
                return;
            }
            if t.is("}") {
                return;
            }
            if t.kind != TokenKind::Ident {
                let line = t.line;
                self.diag(line, "unrecognized enum constant");
                self.pos += 1;
                continue;
            }
            self.pos += 1;
            if self.at("(") {
                self.skip_balanced("(", ")");
            }
            if self.at("{") {
                self.skip_balanced("{", "}");
            }
            if !self.eat(",") && !self.at(";") && !self.at("}") {
                let line = self.line();
                self.diag(line, "unrecognized enum constant");
                return;
            }
        }
    }

    /// Parses members up to the closing brace; returns its index.
    fn members(
        &mut self,
        decl: &mut TypeDecl,
        bodies: &mut Vec<Option<(usize, usize)>>,
    ) -> Option<usize> {
        loop {
            let t = self.peek()?;
            if t.is("}") {
                let idx = self.pos;
                self.pos += 1;
                return Some(idx);
            }
            if t.is(";") {
                self.pos += 1;
                continue;
            }
            if t.is("{") {
                self.skip_balanced("{", "}")?;
                continue;
            }
            if t.is("static") && self.at_offset(1, "{") {
                self.pos += 1;
                self.skip_balanced("{", "}")?;
                continue;
            }
            let member_start = self.pos;
            if !self.member(decl, bodies) {
                self.pos = member_start;
                let line = self.line();
                self.diag(line, format!("unrecognized member in `{}` skipped", decl.name));
                self.recover_member();
            }
        }
    }

    /// Skips to just past the next `;` or balanced block at this level, or
    /// up to (not past) the type's closing brace.
    fn recover_member(&mut self) {
        let mut consumed = false;
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                ";" => {
                    self.pos += 1;
                    return;
                }
                "{" => {
                    self.skip_balanced("{", "}");
                    return;
                }
                "(" => {
                    if self.skip_balanced("(", ")").is_none() {
                        return;
                    }
                }
                "}" if consumed => return,
                "}" => {
                    return;
                }
                _ => self.pos += 1,
            }
            consumed = true;
        }
    }

    /// One member declaration. Returns false when nothing recognizable
    /// starts here.
    fn member(&mut self, decl: &mut TypeDecl, bodies: &mut Vec<Option<(usize, usize)>>) -> bool {
        let mut pre = self.preamble();
        if decl.kind == TypeKind::Interface && !pre.modifiers.contains("private") {
            // Interface members are implicitly public.
            pre.modifiers.insert("public".into());
        }
        let start_line = pre.start_line.unwrap_or_else(|| self.line());

        if self.at("@") && self.at_offset(1, "interface") {
            self.diag(start_line, "annotation type declarations are not supported");
            self.pos += 2;
            return self.skip_declaration_body();
        }
        if self.at("record") && self.peek_at(1).is_some_and(Token::is_ident) {
            self.diag(start_line, "record declarations are not supported");
            return self.skip_declaration_body();
        }
        if let Some(kind) = self.type_keyword() {
            let prefix = decl.qualified_name.clone();
            return match self.type_after_preamble(pre, kind, &prefix) {
                Some(nested) => {
                    if decl.nested.iter().any(|n| n.name == nested.name) {
                        self.diag(start_line, format!("duplicate nested type `{}`", nested.name));
                    } else {
                        decl.nested.push(nested);
                    }
                    true
                }
                None => false,
            };
        }

        if self.at("<") {
            self.skip_angles();
        }

        // Constructor: `Name(`.
        if self.peek().is_some_and(|t| t.is(&decl.name)) && self.at_offset(1, "(") {
            let name = decl.name.clone();
            self.pos += 1;
            return self.method_rest(decl, bodies, pre, start_line, name, None);
        }

        let Some(type_name) = self.type_ref() else {
            return false;
        };
        let Some(name) = self.ident() else {
            return false;
        };
        if self.at("(") {
            return self.method_rest(decl, bodies, pre, start_line, name, Some(type_name));
        }
        self.field_rest(decl, pre, type_name, name)
    }

    fn skip_declaration_body(&mut self) -> bool {
        while let Some(t) = self.peek() {
            if t.is("{") {
                self.skip_balanced("{", "}");
                return true;
            }
            if t.is("(") {
                self.skip_balanced("(", ")");
                continue;
            }
            if t.is(";") || t.is("}") {
                return t.is(";") && self.eat(";");
            }
            self.pos += 1;
        }
        true
    }

    fn field_rest(
        &mut self,
        decl: &mut TypeDecl,
        pre: Preamble,
        type_name: String,
        first_name: String,
    ) -> bool {
        let mut name = first_name;
        loop {
            let line = self.toks[self.pos - 1].line;
            let mut ty = type_name.clone();
            while self.at("[") && self.at_offset(1, "]") {
                self.pos += 2;
                ty.push_str("[]");
            }
            let is_primitive = is_primitive_like(&ty, self.opts);
            if decl.field(&name).is_some() {
                self.diag(line, format!("duplicate field `{name}`"));
            } else {
                decl.fields.push(FieldDecl {
                    name: name.clone(),
                    type_name: ty,
                    is_primitive,
                    modifiers: pre.modifiers.clone(),
                    line,
                });
            }
            if self.eat("=") {
                self.skip_initializer();
            }
            if self.eat(";") {
                return true;
            }
            if self.eat(",") {
                match self.ident() {
                    Some(n) => name = n,
                    None => return false,
                }
                continue;
            }
            return false;
        }
    }

    /// Skips an initializer expression up to a declarator `,` or `;`.
    fn skip_initializer(&mut self) {
        let mut depth = 0i32;
        while let Some(t) = self.peek() {
            match t.text.as_str() {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" => depth -= 1,
                "}" => {
                    if depth == 0 {
                        return;
                    }
                    depth -= 1;
                }
                ";" if depth <= 0 => return,
                "," if depth <= 0 => {
                    // A following `name =`, `name,` or `name;` starts the next
                    // declarator; anything else is a comma inside generics.
                    let next_is_declarator = self.peek_at(1).is_some_and(Token::is_ident)
                        && self
                            .peek_at(2)
                            .is_some_and(|t| matches!(t.text.as_str(), "=" | "," | ";" | "["));
                    if next_is_declarator {
                        return;
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn method_rest(
        &mut self,
        decl: &mut TypeDecl,
        bodies: &mut Vec<Option<(usize, usize)>>,
        pre: Preamble,
        start_line: u32,
        name: String,
        return_type: Option<String>,
    ) -> bool {
        let Some(params) = self.params() else {
            return false;
        };
        while self.at("[") && self.at_offset(1, "]") {
            self.pos += 2;
        }
        let mut throws = Vec::new();
        if self.eat("throws") {
            throws = self.type_list();
        }
        let (body, end_line) = if self.at("{") {
            let open = self.pos;
            match self.skip_balanced("{", "}") {
                Some(close) => (Some((open, close)), self.toks[close].line),
                None => {
                    let line = self.toks[open].line;
                    self.diag(line, format!("body of `{name}` is never closed"));
                    return false;
                }
            }
        } else if self.at(";") {
            let line = self.line();
            self.pos += 1;
            (None, line)
        } else if self.at("default") {
            // Annotation element default value.
            while self.peek().is_some_and(|t| !t.is(";")) {
                self.pos += 1;
            }
            let line = self.line();
            self.eat(";");
            (None, line)
        } else {
            return false;
        };

        let is_constructor = return_type.is_none();
        let mut modifiers = pre.modifiers;
        if decl.kind == TypeKind::Interface && body.is_some() && !modifiers.contains("static") {
            modifiers.insert("default".into());
        }
        decl.methods.push(MethodDecl {
            name,
            params,
            return_type,
            modifiers,
            is_constructor,
            is_override: pre.is_override,
            throws,
            body: None,
            span: LineRange::new(start_line, end_line.max(start_line)),
            body_text: None,
        });
        bodies.push(body);
        true
    }

    fn params(&mut self) -> Option<Vec<ParamDecl>> {
        let open_line = self.line();
        if !self.eat("(") {
            return None;
        }
        let mut params: Vec<ParamDecl> = Vec::new();
        if self.eat(")") {
            return Some(params);
        }
        loop {
            let _ = self.preamble();
            let mut ty = self.type_ref()?;
            if self.eat("...") {
                ty.push_str("...");
            }
            let name = self.ident()?;
            while self.at("[") && self.at_offset(1, "]") {
                self.pos += 2;
                ty.push_str("[]");
            }
            // Receiver parameter `Foo this` is not a real parameter.
            if name != "this" {
                if params.iter().any(|p| p.name == name) {
                    self.diag(open_line, format!("duplicate parameter `{name}` ignored"));
                } else {
                    params.push(ParamDecl {
                        is_primitive: is_primitive_like(&ty, self.opts),
                        type_name: ty,
                        name,
                        used_in_body: false,
                    });
                }
            }
            if self.eat(",") {
                continue;
            }
            if self.eat(")") {
                return Some(params);
            }
            return None;
        }
    }

    /// Scans method bodies once the type's own fields are known.
    fn fill_bodies(&self, decl: &mut TypeDecl, bodies: &[Option<(usize, usize)>]) {
        let own_fields: BTreeSet<String> = decl.fields.iter().map(|f| f.name.clone()).collect();
        for (method, body) in decl.methods.iter_mut().zip(bodies) {
            let Some((open, close)) = *body else { continue };
            let inner = &self.toks[open + 1..close];
            let scan = scan_body(
                inner,
                &own_fields,
                &method.params,
                self.toks[open].line,
                self.toks[close].line,
            );
            for p in &mut method.params {
                p.used_in_body = scan.used_params.contains(&p.name);
            }
            method.body = Some(scan.profile);
            method.body_text = Some(
                self.src[self.toks[open].end..self.toks[close].start].to_string(),
            );
        }
    }
}

/// Joins tokens, spacing only where two words meet and after commas.
pub(crate) fn render_tokens(toks: &[Token]) -> String {
    let mut out = String::new();
    let mut prev_word = false;
    for t in toks {
        let word = t.kind == TokenKind::Ident || t.is("?");
        if word && prev_word {
            out.push(' ');
        }
        out.push_str(&t.text);
        if t.is(",") || t.is("&") {
            out.push(' ');
        }
        prev_word = word;
    }
    out
}
