//! Java tokenizer. Comments and whitespace are dropped; every token keeps its
//! line and byte range so callers can slice the original text.

use super::model::ParseDiagnostic;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// Identifiers and keywords alike.
    Ident,
    Number,
    /// String, char and text-block literals.
    Literal,
    Punct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    pub line: u32,
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is(&self, text: &str) -> bool {
        self.text == text
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }
}

// `>>` and `>>>` are deliberately absent so nested generic closers stay
// separate tokens.
const OPERATORS: &[&str] = &[
    "...", "<<=", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=", ">=", "+=", "-=", "*=",
    "/=", "%=", "&=", "|=", "^=", "<<",
];

pub struct Lexed {
    pub tokens: Vec<Token>,
    pub diagnostics: Vec<ParseDiagnostic>,
    pub line_count: u32,
}

pub fn tokenize(src: &str) -> Lexed {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut diagnostics = Vec::new();
    let mut line: u32 = 1;
    let mut i = 0;

    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b'\n' => {
                line += 1;
                i += 1;
            }
            b' ' | b'\t' | b'\r' | 0x0c => i += 1,
            b'/' if bytes.get(i + 1) == Some(&b'/') => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'/' if bytes.get(i + 1) == Some(&b'*') => {
                let open_line = line;
                i += 2;
                let mut closed = false;
                while i < bytes.len() {
                    if bytes[i] == b'*' && bytes.get(i + 1) == Some(&b'/') {
                        i += 2;
                        closed = true;
                        break;
                    }
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                if !closed {
                    diagnostics.push(ParseDiagnostic {
                        line: open_line,
                        message: "unterminated block comment".into(),
                    });
                }
            }
            b'"' if src[i..].starts_with("\"\"\"") => {
                let start = i;
                let open_line = line;
                i += 3;
                let mut closed = false;
                while i < bytes.len() {
                    if bytes[i] == b'\\' {
                        i += 2;
                        continue;
                    }
                    if src[i..].starts_with("\"\"\"") {
                        i += 3;
                        closed = true;
                        break;
                    }
                    if bytes[i] == b'\n' {
                        line += 1;
                    }
                    i += 1;
                }
                let end = i.min(bytes.len());
                if !closed {
                    diagnostics.push(ParseDiagnostic {
                        line: open_line,
                        message: "unterminated text block".into(),
                    });
                }
                tokens.push(Token {
                    kind: TokenKind::Literal,
                    text: src[start..end].to_string(),
                    line: open_line,
                    start,
                    end,
                });
            }
            b'"' | b'\'' => {
                let quote = c;
                let start = i;
                i += 1;
                let mut closed = false;
                while i < bytes.len() && bytes[i] != b'\n' {
                    if bytes[i] == b'\\' {
                        i += 2;
                        continue;
                    }
                    if bytes[i] == quote {
                        i += 1;
                        closed = true;
                        break;
                    }
                    i += 1;
                }
                let end = i.min(bytes.len());
                if !closed {
                    diagnostics.push(ParseDiagnostic {
                        line,
                        message: "unterminated literal".into(),
                    });
                }
                tokens.push(Token {
                    kind: TokenKind::Literal,
                    text: src[start..end].to_string(),
                    line,
                    start,
                    end,
                });
            }
            c if c.is_ascii_digit()
                || (c == b'.' && bytes.get(i + 1).is_some_and(|b| b.is_ascii_digit())) =>
            {
                let start = i;
                i += 1;
                while i < bytes.len() {
                    let b = bytes[i];
                    let exponent_sign = (b == b'+' || b == b'-')
                        && matches!(bytes[i - 1], b'e' | b'E' | b'p' | b'P')
                        && !src[start..i].starts_with("0x");
                    if b.is_ascii_alphanumeric() || b == b'_' || b == b'.' || exponent_sign {
                        i += 1;
                    } else {
                        break;
                    }
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    text: src[start..i].to_string(),
                    line,
                    start,
                    end: i,
                });
            }
            c if c.is_ascii_alphabetic() || c == b'_' || c == b'$' || c >= 0x80 => {
                let start = i;
                while i < bytes.len() {
                    let b = bytes[i];
                    if b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b >= 0x80 {
                        i += 1;
                    } else {
                        break;
                    }
                }
                // Non-ASCII runs are split on char boundaries only.
                while !src.is_char_boundary(i) {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident,
                    text: src[start..i].to_string(),
                    line,
                    start,
                    end: i,
                });
            }
            _ => {
                let start = i;
                let op = OPERATORS.iter().find(|op| src[i..].starts_with(**op));
                let len = match op {
                    Some(op) => op.len(),
                    None => src[i..].chars().next().map_or(1, char::len_utf8),
                };
                i += len;
                tokens.push(Token {
                    kind: TokenKind::Punct,
                    text: src[start..i].to_string(),
                    line,
                    start,
                    end: i,
                });
            }
        }
    }

    Lexed {
        tokens,
        diagnostics,
        line_count: line,
    }
}
