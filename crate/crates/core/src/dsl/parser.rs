//! Statement parser for `.cfl` lexicon files.
//!
//! ```text
//! type optional-edible < optional = nil | edible-obj.
//! type noun-phrase < argument [CAT: cat, HEAD: nominal, MOD: top].
//! concept female < human.
//! marker "demet" : female.
//! constraint DIR-OBJ-IS-ACC morphological := [ARGUMENTS: [DIR-OBJ: [HEAD: [CASE: acc]]]].
//! constraint DIR-OBJ-IS($t) co-occurrence := [ARGUMENTS: [DIR-OBJ: $t]].
//! semantics SEM-EAT := [...].
//! sense SENSE-EAT1 := VERB-IS-YE & DIR-OBJ-IS(optional-edible) & SEM-EAT priority 0.
//! include "other.cfl".
//! ```

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::diag::{Diagnostic, Pos};
use super::lexer::{check_brackets, lex, Tok, Token};
use super::Tier;
use crate::avm::Avm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ref {
    pub name: String,
    pub arg: Option<String>,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Include { path: String, pos: Pos },
    Type { name: String, parents: Vec<String>, features: Vec<(String, String)>, children: Vec<String>, pos: Pos },
    Concept { name: String, parents: Vec<String>, pos: Pos },
    Marker { stem: String, concepts: Vec<String>, pos: Pos },
    Constraint { name: String, param: Option<String>, tier: Tier, body: Avm, pos: Pos },
    Semantics { name: String, body: Avm, pos: Pos },
    Sense { name: String, refs: Vec<Ref>, priority: Option<i64>, pos: Pos },
}

impl Decl {
    pub fn pos(&self) -> &Pos {
        match self {
            Decl::Include { pos, .. }
            | Decl::Type { pos, .. }
            | Decl::Concept { pos, .. }
            | Decl::Marker { pos, .. }
            | Decl::Constraint { pos, .. }
            | Decl::Semantics { pos, .. }
            | Decl::Sense { pos, .. } => pos,
        }
    }
}

struct Parser<'t> {
    tokens: &'t [Token],
    at: usize,
    eof: Pos,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'t> Parser<'t> {
    fn peek(&self) -> Option<&'t Tok> {
        self.tokens.get(self.at).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&'t Tok> {
        self.tokens.get(self.at + 1).map(|t| &t.tok)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.at).map(|t| t.pos.clone()).unwrap_or_else(|| self.eof.clone())
    }

    fn next(&mut self) -> PResult<&'t Token> {
        let t =
            self.tokens.get(self.at).ok_or_else(|| Diagnostic::error(self.eof.clone(), "unexpected end of input"))?;
        self.at += 1;
        Ok(t)
    }

    fn unexpected(&self, expected: &str) -> Diagnostic {
        match self.tokens.get(self.at) {
            Some(t) => Diagnostic::error(t.pos.clone(), format!("expected {expected}, found {}", t.tok.describe())),
            None => Diagnostic::error(self.eof.clone(), format!("expected {expected}, found end of input")),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if self.peek() == Some(&tok) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.unexpected(what))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn symbol(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Sym(s)) => {
                self.at += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn string(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(Tok::Str(s)) => {
                self.at += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn value(&mut self) -> PResult<Avm> {
        let t = self.next()?;
        match &t.tok {
            Tok::Sym(s) => Ok(Avm::Atom(s.clone())),
            Tok::Str(s) => Ok(Avm::Str(s.clone())),
            Tok::Param(p) => Ok(Avm::Param(p.clone())),
            Tok::Tag(n) => {
                if self.eat(&Tok::Eq) {
                    Ok(Avm::Tag(*n, Some(Box::new(self.value()?))))
                } else {
                    Ok(Avm::Tag(*n, None))
                }
            }
            Tok::LBrack => {
                let ty = match (self.peek(), self.peek2()) {
                    (Some(Tok::Sym(s)), Some(next)) if *next != Tok::Colon => {
                        self.at += 1;
                        Some(s.clone())
                    }
                    _ => None,
                };
                let mut features = Vec::new();
                loop {
                    if self.eat(&Tok::RBrack) {
                        break;
                    }
                    let f = self.symbol("a feature name or `]`")?;
                    self.expect(Tok::Colon, "`:` after feature name")?;
                    let v = self.value()?;
                    features.push((f, v));
                    self.eat(&Tok::Comma);
                }
                Ok(Avm::Node { ty, features })
            }
            other => {
                self.at -= 1;
                let _ = other;
                Err(self.unexpected("a value"))
            }
        }
    }

    fn parents(&mut self) -> PResult<Vec<String>> {
        let mut out = Vec::new();
        if self.eat(&Tok::Lt) {
            out.push(self.symbol("a parent type")?);
            while self.eat(&Tok::Amp) {
                out.push(self.symbol("a parent type")?);
            }
        }
        Ok(out)
    }

    fn statement(&mut self) -> PResult<Decl> {
        let pos = self.pos();
        let kw = self.symbol("a statement keyword")?;
        let decl = match kw.as_str() {
            "include" => Decl::Include { path: self.string("a quoted file name")?, pos },
            "type" => {
                let name = self.symbol("a type name")?;
                let parents = self.parents()?;
                let mut features = Vec::new();
                if self.eat(&Tok::LBrack) {
                    loop {
                        if self.eat(&Tok::RBrack) {
                            break;
                        }
                        let f = self.symbol("a feature name")?;
                        self.expect(Tok::Colon, "`:`")?;
                        let v = self.symbol("a value type")?;
                        features.push((f, v));
                        self.eat(&Tok::Comma);
                    }
                }
                let mut children = Vec::new();
                if self.eat(&Tok::Eq) {
                    children.push(self.symbol("a subtype")?);
                    while self.eat(&Tok::Bar) {
                        children.push(self.symbol("a subtype")?);
                    }
                }
                Decl::Type { name, parents, features, children, pos }
            }
            "concept" => {
                let name = self.symbol("a concept name")?;
                let parents = self.parents()?;
                Decl::Concept { name, parents, pos }
            }
            "marker" => {
                let stem = self.string("a quoted word stem")?;
                self.expect(Tok::Colon, "`:`")?;
                let mut concepts = vec![self.symbol("a concept")?];
                while self.eat(&Tok::Comma) {
                    concepts.push(self.symbol("a concept")?);
                }
                Decl::Marker { stem, concepts, pos }
            }
            "constraint" => {
                let name = self.symbol("a constraint name")?;
                let param = if self.eat(&Tok::LParen) {
                    let p = match self.next()?.tok.clone() {
                        Tok::Param(p) => p,
                        _ => {
                            self.at -= 1;
                            return Err(self.unexpected("a `$parameter`"));
                        }
                    };
                    self.expect(Tok::RParen, "`)`")?;
                    Some(p)
                } else {
                    None
                };
                let tier_pos = self.pos();
                let tier_name = self.symbol("a constraint tier")?;
                let tier = Tier::parse(&tier_name).ok_or_else(|| {
                    Diagnostic::error(
                        tier_pos,
                        format!("unknown tier `{tier_name}` (expected verb-feature, morphological, co-occurrence, lexical or semantic)"),
                    )
                })?;
                self.expect(Tok::Define, "`:=`")?;
                let body = self.value()?;
                Decl::Constraint { name, param, tier, body, pos }
            }
            "semantics" => {
                let name = self.symbol("a semantics name")?;
                self.expect(Tok::Define, "`:=`")?;
                let body = self.value()?;
                Decl::Semantics { name, body, pos }
            }
            "sense" => {
                let name = self.symbol("a sense name")?;
                self.expect(Tok::Define, "`:=`")?;
                let mut refs = vec![self.reference()?];
                while self.eat(&Tok::Amp) {
                    refs.push(self.reference()?);
                }
                let priority = if self.peek() == Some(&Tok::Sym("priority".into())) {
                    self.at += 1;
                    let p = self.pos();
                    let n = self.symbol("an integer priority")?;
                    Some(n.parse::<i64>().map_err(|_| Diagnostic::error(p, format!("`{n}` is not an integer")))?)
                } else {
                    None
                };
                Decl::Sense { name, refs, priority, pos }
            }
            other => {
                return Err(Diagnostic::error(pos, format!("unknown statement `{other}`")));
            }
        };
        self.expect(Tok::Dot, "`.` ending the statement")?;
        Ok(decl)
    }

    fn reference(&mut self) -> PResult<Ref> {
        let pos = self.pos();
        let name = self.symbol("a constraint name")?;
        let arg = if self.eat(&Tok::LParen) {
            let a = self.symbol("a type argument")?;
            self.expect(Tok::RParen, "`)`")?;
            Some(a)
        } else {
            None
        };
        Ok(Ref { name, arg, pos })
    }

    fn skip_statement(&mut self) {
        while let Some(t) = self.peek() {
            self.at += 1;
            if *t == Tok::Dot {
                break;
            }
        }
    }
}

fn eof_pos(file: &Arc<str>, text: &str) -> Pos {
    let line = text.lines().count().max(1) as u32;
    let col = text.lines().last().map(|l| l.chars().count() as u32 + 1).unwrap_or(1);
    Pos::new(file, line, col)
}

/// Parses one source text. Include statements are returned, not followed.
pub fn parse(file: &str, text: &str) -> Result<Vec<Decl>, Vec<Diagnostic>> {
    let file: Arc<str> = Arc::from(file);
    let tokens = lex(&file, text)?;
    let bracket = check_brackets(&tokens);
    if !bracket.is_empty() {
        return Err(bracket);
    }
    let mut p = Parser { tokens: &tokens, at: 0, eof: eof_pos(&file, text) };
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    while p.peek().is_some() {
        match p.statement() {
            Ok(d) => decls.push(d),
            Err(d) => {
                diags.push(d);
                p.skip_statement();
            }
        }
    }
    if diags.is_empty() {
        Ok(decls)
    } else {
        Err(diags)
    }
}

/// Parses a single AVM value (a frame file).
pub fn parse_value_text(file: &str, text: &str) -> Result<Avm, Diagnostic> {
    let file: Arc<str> = Arc::from(file);
    let tokens = lex(&file, text).map_err(|mut d| d.remove(0))?;
    if let Some(d) = check_brackets(&tokens).into_iter().next() {
        return Err(d);
    }
    let mut p = Parser { tokens: &tokens, at: 0, eof: eof_pos(&file, text) };
    let v = p.value()?;
    if p.peek().is_some() {
        return Err(p.unexpected("end of input"));
    }
    Ok(v)
}

/// Parses the given files and everything they include, in order. Each file
/// is read once even if included several times.
pub fn parse_files<P: AsRef<Path>>(paths: &[P]) -> Result<Vec<Decl>, Vec<Diagnostic>> {
    let mut seen = Vec::new();
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    for p in paths {
        let path = p.as_ref();
        match fs::read_to_string(path) {
            Ok(text) => expand(path, &text, &mut seen, &mut decls, &mut diags),
            Err(e) => diags.push(Diagnostic::error(
                Pos::new(&Arc::from(path.display().to_string()), 1, 1),
                format!("cannot read lexicon: {e}"),
            )),
        }
    }
    if diags.is_empty() {
        Ok(decls)
    } else {
        Err(diags)
    }
}

/// Parses `text` as if read from `path`, following includes relative to it.
pub fn parse_source_with_includes(path: &Path, text: &str) -> Result<Vec<Decl>, Vec<Diagnostic>> {
    let mut seen = Vec::new();
    let mut decls = Vec::new();
    let mut diags = Vec::new();
    expand(path, text, &mut seen, &mut decls, &mut diags);
    if diags.is_empty() {
        Ok(decls)
    } else {
        Err(diags)
    }
}

fn expand(path: &Path, text: &str, seen: &mut Vec<PathBuf>, decls: &mut Vec<Decl>, diags: &mut Vec<Diagnostic>) {
    let key = path.canonicalize().unwrap_or_else(|_| path.to_path_buf());
    if seen.contains(&key) {
        return;
    }
    seen.push(key);
    let parsed = match parse(&path.display().to_string(), text) {
        Ok(d) => d,
        Err(d) => {
            diags.extend(d);
            return;
        }
    };
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    for d in parsed {
        if let Decl::Include { path: inc, pos } = &d {
            let target = dir.join(inc);
            match fs::read_to_string(&target) {
                Ok(t) => expand(&target, &t, seen, decls, diags),
                Err(e) => diags.push(Diagnostic::error(pos.clone(), format!("cannot include \"{inc}\": {e}"))),
            }
        } else {
            decls.push(d);
        }
    }
}
