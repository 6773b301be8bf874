//! Attribute-value matrix syntax: the text form of feature structures.
//!
//! ```text
//! [case-frame
//!   ARGUMENTS: [arguments
//!     SUBJ: #1=[noun-phrase
//!       CAT: NP]]
//!   SEMANTICS: [semantics
//!     ROLES: [roles
//!       AGENT: #1]]]
//! ```
//!
//! `#n=` introduces a tag and `#n` refers back to it. Quoted strings are
//! string atoms; bare symbols are types. Features may be separated by
//! whitespace or commas. `;` starts a comment.

use std::collections::HashMap;
use std::fmt::Write;

use serde_json::{json, Map, Value};

use crate::dsl::diag::Diagnostic;
use crate::dsl::parser;
use crate::fs::FeatureStructure;
use crate::types::{Ty, TypeLattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Avm {
    Node {
        ty: Option<String>,
        features: Vec<(String, Avm)>,
    },
    Atom(String),
    Str(String),
    Tag(u32, Option<Box<Avm>>),
    /// Template placeholder, `$name`.
    Param(String),
}

impl Avm {
    /// Parses a single value; trailing input is an error.
    pub fn parse(text: &str) -> Result<Avm, Diagnostic> {
        parser::parse_value_text("<input>", text)
    }

    pub fn parse_named(file: &str, text: &str) -> Result<Avm, Diagnostic> {
        parser::parse_value_text(file, text)
    }

    /// Replaces every `$param` with `with`.
    pub fn substitute(&self, param: &str, with: &Avm) -> Avm {
        match self {
            Avm::Param(p) if p == param => with.clone(),
            Avm::Node { ty, features } => Avm::Node {
                ty: ty.clone(),
                features: features.iter().map(|(f, v)| (f.clone(), v.substitute(param, with))).collect(),
            },
            Avm::Tag(t, Some(v)) => Avm::Tag(*t, Some(Box::new(v.substitute(param, with)))),
            other => other.clone(),
        }
    }

    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut Vec<String>) {
        match self {
            Avm::Param(p) => out.push(p.clone()),
            Avm::Node { features, .. } => features.iter().for_each(|(_, v)| v.collect_params(out)),
            Avm::Tag(_, Some(v)) => v.collect_params(out),
            _ => {}
        }
    }

    /// Replaces (or creates) the value at `path`. Intermediate values that
    /// are atoms are turned into nodes of that type.
    pub fn replace_at(&mut self, path: &[&str], value: Avm) {
        let Some((first, rest)) = path.split_first() else {
            *self = value;
            return;
        };
        if let Avm::Tag(_, Some(inner)) = self {
            inner.replace_at(path, value);
            return;
        }
        if let Avm::Atom(t) = self {
            *self = Avm::Node { ty: Some(t.clone()), features: Vec::new() };
        }
        if !matches!(self, Avm::Node { .. }) {
            *self = Avm::Node { ty: None, features: Vec::new() };
        }
        let Avm::Node { features, .. } = self else { unreachable!() };
        match features.iter_mut().find(|(f, _)| f == first) {
            Some((_, v)) => v.replace_at(rest, value),
            None => {
                let mut v = Avm::Node { ty: None, features: Vec::new() };
                v.replace_at(rest, value);
                features.push((first.to_string(), v));
            }
        }
    }

    /// Syntactic normal form: features sorted and tags renumbered by first
    /// appearance. No type information is needed.
    pub fn normalized(&self) -> Avm {
        let mut renumber = HashMap::new();
        self.normalize_rec(&mut renumber)
    }

    fn normalize_rec(&self, renumber: &mut HashMap<u32, u32>) -> Avm {
        match self {
            Avm::Node { ty, features } => {
                let mut fs: Vec<&(String, Avm)> = features.iter().collect();
                fs.sort_by(|a, b| a.0.cmp(&b.0));
                Avm::Node {
                    ty: ty.clone(),
                    features: fs.into_iter().map(|(f, v)| (f.clone(), v.normalize_rec(renumber))).collect(),
                }
            }
            Avm::Tag(t, v) => {
                let next = renumber.len() as u32 + 1;
                let n = *renumber.entry(*t).or_insert(next);
                Avm::Tag(n, v.as_ref().map(|v| Box::new(v.normalize_rec(renumber))))
            }
            other => other.clone(),
        }
    }

    /// Multi-line text rendering; nodes with features put one feature per
    /// line, indented by two spaces per level.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(&mut out, 0);
        out
    }

    /// Single-line rendering, used inside DSL statements and diagnostics.
    pub fn to_inline(&self) -> String {
        match self {
            Avm::Node { ty, features } => {
                let mut parts: Vec<String> = ty.iter().cloned().collect();
                parts.extend(features.iter().map(|(f, v)| format!("{f}: {}", v.to_inline())));
                format!("[{}]", parts.join(" "))
            }
            Avm::Atom(a) => a.clone(),
            Avm::Str(s) => quote(s),
            Avm::Tag(t, None) => format!("#{t}"),
            Avm::Tag(t, Some(v)) => format!("#{t}={}", v.to_inline()),
            Avm::Param(p) => format!("${p}"),
        }
    }

    fn write_text(&self, out: &mut String, indent: usize) {
        match self {
            Avm::Node { ty, features } => {
                out.push('[');
                if let Some(t) = ty {
                    out.push_str(t);
                }
                for (i, (f, v)) in features.iter().enumerate() {
                    if i > 0 || ty.is_some() {
                        out.push('\n');
                        out.push_str(&" ".repeat(indent + 2));
                    }
                    let _ = write!(out, "{f}: ");
                    v.write_text(out, indent + 2);
                }
                out.push(']');
            }
            Avm::Tag(t, Some(v)) => {
                let _ = write!(out, "#{t}=");
                v.write_text(out, indent);
            }
            other => out.push_str(&other.to_inline()),
        }
    }
}

pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Canonical AVM text for a feature structure. Byte-stable: isomorphic
/// structures render identically.
pub fn render_avm(lat: &TypeLattice, fs: &FeatureStructure) -> String {
    fs.to_avm(lat).to_text()
}

/// Machine-readable rendering: nested records with sorted keys. Shared
/// nodes carry `"tag"` at their first occurrence and are `{"ref": n}`
/// afterwards.
pub fn render_tree(lat: &TypeLattice, fs: &FeatureStructure) -> Value {
    let deg = fs.in_degrees();
    let mut tags = HashMap::new();
    tree_rec(lat, fs, 0, &deg, &mut tags)
}

fn tree_rec(lat: &TypeLattice, fs: &FeatureStructure, id: u32, deg: &[usize], tags: &mut HashMap<u32, u32>) -> Value {
    if let Some(t) = tags.get(&id) {
        return json!({ "ref": t });
    }
    let node = fs.node(id);
    let mut rec = Map::new();
    match node.ty() {
        Ty::Named(t) => {
            rec.insert("type".into(), json!(lat.name(*t)));
        }
        Ty::Str(s) => {
            rec.insert("type".into(), json!("string"));
            rec.insert("value".into(), json!(s.as_ref()));
        }
    }
    if deg[id as usize] > 1 {
        let t = tags.len() as u32 + 1;
        tags.insert(id, t);
        rec.insert("tag".into(), json!(t));
    }
    if !node.is_leaf() {
        let mut feats = Map::new();
        for (f, c) in node.arcs() {
            feats.insert(f.to_string(), tree_rec(lat, fs, c.id(), deg, tags));
        }
        rec.insert("features".into(), Value::Object(feats));
    }
    Value::Object(rec)
}
