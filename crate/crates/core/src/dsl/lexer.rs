use std::sync::Arc;

use super::diag::{Diagnostic, Pos};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Sym(String),
    Str(String),
    Tag(u32),
    Param(String),
    LBrack,
    RBrack,
    LParen,
    RParen,
    Colon,
    Comma,
    Eq,
    Define,
    Lt,
    Amp,
    Bar,
    Dot,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Tag(t) => format!("tag #{t}"),
            Tok::Param(p) => format!("parameter ${p}"),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Define => "`:=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub pos: Pos,
}

pub fn is_symbol_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '_' | '+' | '*' | '\'')
}

pub fn lex(file: &Arc<str>, text: &str) -> Result<Vec<Token>, Vec<Diagnostic>> {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos::new(file, line, col);
        if c.is_whitespace() {
            bump!();
            continue;
        }
        if c == ';' {
            while i < chars.len() && chars[i] != '\n' {
                bump!();
            }
            continue;
        }
        let simple = match c {
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '<' => Some(Tok::Lt),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Bar),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(tok) = simple {
            bump!();
            out.push(Token { tok, pos });
            continue;
        }
        match c {
            ':' => {
                bump!();
                if i < chars.len() && chars[i] == '=' {
                    bump!();
                    out.push(Token { tok: Tok::Define, pos });
                } else {
                    out.push(Token { tok: Tok::Colon, pos });
                }
            }
            '"' => {
                bump!();
                let mut s = String::new();
                let mut closed = false;
                while i < chars.len() {
                    match chars[i] {
                        '"' => {
                            bump!();
                            closed = true;
                            break;
                        }
                        '\\' if i + 1 < chars.len() => {
                            bump!();
                            s.push(match chars[i] {
                                'n' => '\n',
                                other => other,
                            });
                            bump!();
                        }
                        '\n' => break,
                        other => {
                            s.push(other);
                            bump!();
                        }
                    }
                }
                if !closed {
                    errors.push(Diagnostic::error(pos, "unterminated string"));
                    continue;
                }
                out.push(Token { tok: Tok::Str(s), pos });
            }
            '#' => {
                bump!();
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    bump!();
                }
                let digits: String = chars[start..i].iter().collect();
                match digits.parse() {
                    Ok(n) => out.push(Token { tok: Tok::Tag(n), pos }),
                    Err(_) => errors.push(Diagnostic::error(pos, "expected digits after `#`")),
                }
            }
            '$' => {
                bump!();
                let start = i;
                while i < chars.len() && is_symbol_char(chars[i]) {
                    bump!();
                }
                if start == i {
                    errors.push(Diagnostic::error(pos, "expected a name after `$`"));
                } else {
                    out.push(Token { tok: Tok::Param(chars[start..i].iter().collect()), pos });
                }
            }
            c if is_symbol_char(c) => {
                let start = i;
                while i < chars.len() && is_symbol_char(chars[i]) {
                    bump!();
                }
                out.push(Token { tok: Tok::Sym(chars[start..i].iter().collect()), pos });
            }
            other => {
                errors.push(Diagnostic::error(pos, format!("unexpected character {other:?}")));
                bump!();
            }
        }
    }
    if errors.is_empty() {
        Ok(out)
    } else {
        Err(errors)
    }
}

/// Reports the outermost open bracket of any statement that ends (or any
/// input that ends) before its brackets close.
pub fn check_brackets(tokens: &[Token]) -> Vec<Diagnostic> {
    let mut diags = Vec::new();
    let mut open: Vec<&Pos> = Vec::new();
    for t in tokens {
        match t.tok {
            Tok::LBrack => open.push(&t.pos),
            Tok::RBrack => {
                if open.pop().is_none() {
                    diags.push(Diagnostic::error(t.pos.clone(), "unmatched `]`"));
                }
            }
            Tok::Dot if !open.is_empty() => {
                diags.push(Diagnostic::error(open[0].clone(), "unterminated `[`"));
                open.clear();
            }
            _ => {}
        }
    }
    if let Some(first) = open.first() {
        diags.push(Diagnostic::error((*first).clone(), "unterminated `[`"));
    }
    diags
}
