//! The lexicon definition language: parsing, loading and validation.
//!
//! Loading is atomic. [`Lexicon::from_decls`] either returns a fully linked
//! and validated lexicon or the complete list of positioned diagnostics.

pub mod diag;
pub mod lexer;
pub mod parser;

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt::Write;
use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

pub use diag::{Diagnostic, Pos, Severity};
pub use parser::{parse, parse_files, Decl, Ref};

use crate::avm::Avm;
use crate::fs::{unify, BuildError, Feature, FeatureStructure, UnifyFailure};
use crate::ontology::{Ontology, MAJOR_CONCEPTS, SEM_ROOT};
use crate::types::{LatticeBuilder, TypeId, TypeLattice, STRING, TOP};

pub const CASE_FRAME: &str = "case-frame";

/// The five constraint kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tier {
    VerbFeature,
    Morphological,
    CoOccurrence,
    Lexical,
    Semantic,
}

const MORPHOLOGICAL_FEATURES: [&str; 6] = ["CASE", "POSS", "AGR", "VOICE", "VFORM", "PFORM"];

impl Tier {
    pub fn parse(s: &str) -> Option<Tier> {
        Some(match s {
            "verb-feature" => Tier::VerbFeature,
            "morphological" => Tier::Morphological,
            "co-occurrence" => Tier::CoOccurrence,
            "lexical" => Tier::Lexical,
            "semantic" => Tier::Semantic,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Tier::VerbFeature => "verb-feature",
            Tier::Morphological => "morphological",
            Tier::CoOccurrence => "co-occurrence",
            Tier::Lexical => "lexical",
            Tier::Semantic => "semantic",
        }
    }

    /// Whether a constraint of this tier may constrain the value at `path`
    /// (a path from the frame root to a leaf).
    pub fn admits(self, path: &[Feature]) -> bool {
        let last = path.last().map(Feature::as_str);
        match self {
            Tier::VerbFeature => path.first().is_some_and(|f| f.as_str() == "VERB"),
            Tier::Morphological => last.is_some_and(|l| MORPHOLOGICAL_FEATURES.contains(&l)),
            Tier::CoOccurrence => path.len() == 2 && path[0].as_str() == "ARGUMENTS",
            Tier::Lexical => matches!(last, Some("LEX" | "STEM")),
            Tier::Semantic => last == Some("SEM"),
        }
    }
}

/// Root-to-leaf paths of a structure, following shared nodes on every path.
pub fn leaf_paths(fs: &FeatureStructure) -> Vec<Vec<Feature>> {
    let mut out = Vec::new();
    let mut stack = vec![(fs.root(), Vec::new())];
    while let Some((node, path)) = stack.pop() {
        if node.is_leaf() {
            if !path.is_empty() {
                out.push(path);
            }
            continue;
        }
        for (f, c) in node.arcs() {
            let mut p = path.clone();
            p.push(f.clone());
            stack.push((c, p));
        }
    }
    out.sort();
    out
}

#[derive(Debug, Clone)]
pub struct ConstraintDef {
    pub name: String,
    pub tier: Tier,
    pub body: FeatureStructure,
    pub provenance: Pos,
    /// `(template, argument)` for instantiated parameterized constraints.
    pub instance_of: Option<(String, String)>,
}

impl ConstraintDef {
    /// False for constraints that add no information (e.g. a slot typed `top`).
    pub fn is_vacuous(&self) -> bool {
        self.body.node_count() <= 1
    }
}

#[derive(Debug, Clone)]
pub struct Template {
    pub name: String,
    pub param: String,
    pub tier: Tier,
    pub body: Avm,
    pub provenance: Pos,
}

#[derive(Debug, Clone)]
pub struct SemanticsDef {
    pub name: String,
    pub body: FeatureStructure,
    pub provenance: Pos,
}

#[derive(Debug, Clone)]
pub struct SenseDef {
    pub name: String,
    pub constraints: Vec<Arc<ConstraintDef>>,
    pub semantics: Arc<SemanticsDef>,
    pub priority: i64,
    /// Number of non-vacuous constraints in the conjunction.
    pub specificity: usize,
    /// The unification of every constraint body and the semantics.
    pub compiled: FeatureStructure,
    pub provenance: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("template `{name}` cannot take `{arg}`: {reason}")]
    Instantiation { name: String, arg: String, reason: String },
}

/// A loaded, validated, immutable lexicon.
#[derive(Debug, Clone)]
pub struct Lexicon {
    lattice: TypeLattice,
    ontology: Ontology,
    case_frame: Option<TypeId>,
    constraints: BTreeMap<String, Arc<ConstraintDef>>,
    templates: BTreeMap<String, Template>,
    semantics: BTreeMap<String, Arc<SemanticsDef>>,
    senses: Vec<SenseDef>,
}

impl Lexicon {
    pub fn load_files<P: AsRef<Path>>(paths: &[P]) -> Result<Lexicon, Vec<Diagnostic>> {
        Lexicon::from_decls(parse_files(paths)?)
    }

    /// Loads source text as if it were the file at `path`; includes are
    /// resolved relative to that path.
    pub fn load_source(path: &Path, text: &str) -> Result<Lexicon, Vec<Diagnostic>> {
        Lexicon::from_decls(parser::parse_source_with_includes(path, text)?)
    }

    pub fn from_decls(decls: Vec<Decl>) -> Result<Lexicon, Vec<Diagnostic>> {
        Loader::default().load(decls)
    }

    pub fn lattice(&self) -> &TypeLattice {
        &self.lattice
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    pub fn case_frame_type(&self) -> Option<TypeId> {
        self.case_frame
    }

    pub fn senses(&self) -> &[SenseDef] {
        &self.senses
    }

    pub fn sense(&self, name: &str) -> Option<&SenseDef> {
        self.senses.iter().find(|s| s.name == name)
    }

    pub fn constraint(&self, name: &str) -> Option<&Arc<ConstraintDef>> {
        self.constraints.get(name)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Arc<ConstraintDef>> {
        self.constraints.values()
    }

    pub fn templates(&self) -> impl Iterator<Item = &Template> {
        self.templates.values()
    }

    pub fn semantics(&self, name: &str) -> Option<&Arc<SemanticsDef>> {
        self.semantics.get(name)
    }

    /// Reads a case frame in AVM syntax; the root is typed `case-frame`.
    pub fn read_frame(&self, file: &str, text: &str) -> Result<FeatureStructure, Diagnostic> {
        let avm = Avm::parse_named(file, text)?;
        self.build_frame(&avm).map_err(|e| Diagnostic::error(Pos::new(&Arc::from(file), 1, 1), e.to_string()))
    }

    pub fn build_frame(&self, avm: &Avm) -> Result<FeatureStructure, BuildError> {
        FeatureStructure::from_avm(&self.lattice, avm, self.case_frame)
    }

    /// Instantiates a parameterized constraint with a type argument.
    pub fn instantiate(&self, name: &str, arg: &str) -> Result<ConstraintDef, LexiconError> {
        let t = self.templates.get(name).ok_or_else(|| LexiconError::UnknownTemplate(name.to_string()))?;
        instantiate(&self.lattice, self.case_frame, t, arg)
    }

    /// Prints the lexicon back as DSL source.
    pub fn to_source(&self) -> String {
        let lat = &self.lattice;
        let mut out = String::new();
        let concept_ids = self.ontology.concepts();
        for t in lat.types() {
            let name = lat.name(t);
            if name == TOP || name == STRING || concept_ids.contains(&t) {
                continue;
            }
            let _ = write!(out, "type {name}");
            let parents: Vec<&str> = lat.parents(t).iter().map(|p| lat.name(*p)).collect();
            if parents != [TOP] && !parents.is_empty() {
                let _ = write!(out, " < {}", parents.join(" & "));
            }
            let feats = lat.declared_features(t);
            if !feats.is_empty() {
                let list: Vec<String> = feats.iter().map(|(f, v)| format!("{f}: {}", lat.name(*v))).collect();
                let _ = write!(out, " [{}]", list.join(", "));
            }
            out.push_str(".\n");
        }
        for t in lat.types().filter(|t| concept_ids.contains(t)) {
            let parents: Vec<&str> = lat.parents(t).iter().map(|p| lat.name(*p)).collect();
            let _ = writeln!(out, "concept {} < {}.", lat.name(t), parents.join(" & "));
        }
        for (stem, cs) in self.ontology.markers() {
            let names: Vec<&str> = cs.iter().map(|c| lat.name(*c)).collect();
            let _ = writeln!(out, "marker {} : {}.", crate::avm::quote(stem), names.join(", "));
        }
        for t in self.templates.values() {
            let _ = writeln!(out, "constraint {}(${}) {} := {}.", t.name, t.param, t.tier.name(), t.body.to_inline());
        }
        for c in self.constraints.values().filter(|c| c.instance_of.is_none()) {
            let _ = writeln!(out, "constraint {} {} := {}.", c.name, c.tier.name(), c.body.to_avm(lat).to_inline());
        }
        for s in self.semantics.values() {
            let _ = writeln!(out, "semantics {} := {}.", s.name, s.body.to_avm(lat).to_inline());
        }
        for s in &self.senses {
            let refs: Vec<&str> = s
                .constraints
                .iter()
                .map(|c| c.name.as_str())
                .chain(std::iter::once(s.semantics.name.as_str()))
                .collect();
            let _ = writeln!(out, "sense {} := {} priority {}.", s.name, refs.join(" & "), s.priority);
        }
        out
    }
}

fn instantiate(
    lat: &TypeLattice,
    root: Option<TypeId>,
    t: &Template,
    arg: &str,
) -> Result<ConstraintDef, LexiconError> {
    lat.id(arg).map_err(|_| LexiconError::UnknownType(arg.to_string()))?;
    let avm = t.body.substitute(&t.param, &Avm::Atom(arg.to_string()));
    let fail = |reason: String| LexiconError::Instantiation { name: t.name.clone(), arg: arg.to_string(), reason };
    let body = FeatureStructure::from_avm(lat, &avm, root).map_err(|e| fail(e.to_string()))?;
    if let Some(p) = leaf_paths(&body).into_iter().find(|p| !t.tier.admits(p)) {
        return Err(fail(tier_message(t.tier, &p)));
    }
    Ok(ConstraintDef {
        name: format!("{}({arg})", t.name),
        tier: t.tier,
        body,
        provenance: t.provenance.clone(),
        instance_of: Some((t.name.clone(), arg.to_string())),
    })
}

fn tier_message(tier: Tier, path: &[Feature]) -> String {
    let p: Vec<&str> = path.iter().map(Feature::as_str).collect();
    format!("{} constraint may not constrain {}", tier.name(), p.join("."))
}

fn failure_text(f: &UnifyFailure) -> String {
    format!("{:?} at {} ({} vs {})", f.reason, f.path, f.left, f.right).to_lowercase_first()
}

trait LowerFirst {
    fn to_lowercase_first(self) -> String;
}

impl LowerFirst for String {
    fn to_lowercase_first(self) -> String {
        let mut c = self.chars();
        match c.next() {
            Some(f) => f.to_lowercase().chain(c).collect(),
            None => self,
        }
    }
}

#[derive(Default)]
struct Loader {
    diags: Vec<Diagnostic>,
}

impl Loader {
    fn err(&mut self, pos: &Pos, msg: impl Into<String>) {
        self.diags.push(Diagnostic::error(pos.clone(), msg));
    }

    fn finish<T>(&mut self, value: T) -> Result<T, Vec<Diagnostic>> {
        if self.diags.is_empty() {
            Ok(value)
        } else {
            let mut d = std::mem::take(&mut self.diags);
            d.sort_by(|a, b| a.pos.cmp(&b.pos));
            d.dedup();
            Err(d)
        }
    }

    fn load(mut self, decls: Vec<Decl>) -> Result<Lexicon, Vec<Diagnostic>> {
        // Pass 1: the lattice.
        let mut defined: HashMap<String, Pos> = HashMap::new();
        let mut mentioned: HashSet<String> = [TOP, STRING].iter().map(|s| s.to_string()).collect();
        let mut concept_names = Vec::new();
        for d in &decls {
            match d {
                Decl::Type { name, children, pos, .. } => {
                    self.define(&mut defined, name, pos);
                    mentioned.insert(name.clone());
                    mentioned.extend(children.iter().cloned());
                }
                Decl::Concept { name, pos, .. } => {
                    self.define(&mut defined, name, pos);
                    mentioned.insert(name.clone());
                    concept_names.push(name.clone());
                }
                _ => {}
            }
        }
        let mut builder = LatticeBuilder::new();
        let mut decl_pos: HashMap<String, Pos> = HashMap::new();
        for d in &decls {
            match d {
                Decl::Type { name, children, .. } => {
                    builder.declare(name);
                    for c in children {
                        builder.declare(c);
                    }
                }
                Decl::Concept { name, .. } => {
                    builder.declare(name);
                }
                _ => {}
            }
        }
        for d in &decls {
            match d {
                Decl::Type { name, parents, features, children, pos } => {
                    decl_pos.entry(name.clone()).or_insert_with(|| pos.clone());
                    builder.declare(name);
                    for p in parents {
                        if !mentioned.contains(p) {
                            self.err(pos, format!("type `{name}` names unknown parent `{p}`"));
                        } else {
                            builder.subtype(name, p);
                        }
                    }
                    let mut seen_f = HashSet::new();
                    for (f, v) in features {
                        if !seen_f.insert(f) {
                            self.err(pos, format!("feature {f} declared twice on `{name}`"));
                        } else if !mentioned.contains(v) {
                            self.err(pos, format!("feature {f} of `{name}` has unknown value type `{v}`"));
                        } else {
                            builder.feature(name, f, v);
                        }
                    }
                    for c in children {
                        decl_pos.entry(c.clone()).or_insert_with(|| pos.clone());
                        builder.subtype(c, name);
                    }
                }
                Decl::Concept { name, parents, pos } => {
                    decl_pos.entry(name.clone()).or_insert_with(|| pos.clone());
                    if !mentioned.contains(SEM_ROOT) {
                        self.err(pos, format!("concept `{name}` requires a `{SEM_ROOT}` type"));
                        continue;
                    }
                    if parents.is_empty() {
                        builder.subtype(name, SEM_ROOT);
                    }
                    for p in parents {
                        if !mentioned.contains(p) {
                            self.err(pos, format!("concept `{name}` names undeclared parent concept `{p}`"));
                        } else {
                            builder.subtype(name, p);
                        }
                    }
                }
                _ => {}
            }
        }
        if !self.diags.is_empty() {
            return self.finish(unreachable_lexicon());
        }
        let lattice = builder.build();
        let first_pos =
            decls.first().map(|d| d.pos().clone()).unwrap_or_else(|| Pos::new(&Arc::from("<lexicon>"), 1, 1));
        for v in lattice.validate() {
            let pos = v
                .involved()
                .iter()
                .filter_map(|t| decl_pos.get(*t))
                .max()
                .cloned()
                .unwrap_or_else(|| first_pos.clone());
            self.err(&pos, format!("invalid type hierarchy: {v}"));
        }
        if !self.diags.is_empty() {
            return self.finish(unreachable_lexicon());
        }

        // Pass 2: ontology.
        let sem_root = lattice.id(SEM_ROOT).ok();
        let mut concepts = BTreeSet::new();
        for name in &concept_names {
            let t = lattice.id(name).expect("declared");
            concepts.insert(t);
        }
        for d in &decls {
            if let Decl::Concept { name, pos, .. } = d {
                let t = lattice.id(name).expect("declared");
                if let Some(r) = sem_root {
                    if !lattice.is_subtype(t, r) {
                        self.err(pos, format!("concept `{name}` is not below `{SEM_ROOT}`"));
                    }
                }
            }
        }
        if !concept_names.is_empty() {
            let pos = decls.iter().find(|d| matches!(d, Decl::Concept { .. })).map(|d| d.pos().clone()).unwrap();
            for major in MAJOR_CONCEPTS {
                if !concept_names.iter().any(|c| c == major) {
                    self.err(&pos, format!("ontology lacks the major concept `{major}`"));
                }
            }
        }
        let mut markers: BTreeMap<String, Vec<TypeId>> = BTreeMap::new();
        for d in &decls {
            if let Decl::Marker { stem, concepts: cs, pos } = d {
                if markers.contains_key(stem) {
                    self.err(pos, format!("duplicate marker entry for \"{stem}\""));
                    continue;
                }
                let mut ids = Vec::new();
                for c in cs {
                    match lattice.id(c) {
                        Err(_) => self.err(pos, format!("marker \"{stem}\" names undeclared concept `{c}`")),
                        Ok(t) if !concepts.contains(&t) && Some(t) != sem_root => {
                            self.err(pos, format!("marker \"{stem}\" names `{c}`, which is not a concept"))
                        }
                        Ok(t) => ids.push(t),
                    }
                }
                markers.insert(stem.clone(), ids);
            }
        }
        let ontology = Ontology::new(sem_root, concepts, markers);

        // Pass 3: constraints, templates, semantics.
        let case_frame = lattice.id(CASE_FRAME).ok();
        let needs_frame =
            decls.iter().any(|d| matches!(d, Decl::Constraint { .. } | Decl::Semantics { .. } | Decl::Sense { .. }));
        if needs_frame && case_frame.is_none() {
            self.err(&first_pos, format!("constraints and senses require a `{CASE_FRAME}` type"));
            return self.finish(unreachable_lexicon());
        }
        let mut names: HashMap<String, Pos> = HashMap::new();
        let mut constraints: BTreeMap<String, Arc<ConstraintDef>> = BTreeMap::new();
        let mut templates: BTreeMap<String, Template> = BTreeMap::new();
        let mut semantics: BTreeMap<String, Arc<SemanticsDef>> = BTreeMap::new();
        for d in &decls {
            match d {
                Decl::Constraint { name, param, tier, body, pos } => {
                    if !self.define(&mut names, name, pos) {
                        continue;
                    }
                    match param {
                        Some(p) => {
                            let found = body.params();
                            if found.len() != 1 || found[0] != *p {
                                self.err(pos, format!("template `{name}` must use `${p}` exactly once"));
                                continue;
                            }
                            let t = Template {
                                name: name.clone(),
                                param: p.clone(),
                                tier: *tier,
                                body: body.clone(),
                                provenance: pos.clone(),
                            };
                            if let Err(e) = instantiate(&lattice, case_frame, &t, TOP) {
                                self.err(pos, e.to_string());
                                continue;
                            }
                            templates.insert(name.clone(), t);
                        }
                        None => match FeatureStructure::from_avm(&lattice, body, case_frame) {
                            Err(e) => self.err(pos, format!("constraint `{name}`: {}", build_text(&e))),
                            Ok(fs) => {
                                if let Some(p) = leaf_paths(&fs).into_iter().find(|p| !tier.admits(p)) {
                                    self.err(pos, format!("constraint `{name}`: {}", tier_message(*tier, &p)));
                                    continue;
                                }
                                constraints.insert(
                                    name.clone(),
                                    Arc::new(ConstraintDef {
                                        name: name.clone(),
                                        tier: *tier,
                                        body: fs,
                                        provenance: pos.clone(),
                                        instance_of: None,
                                    }),
                                );
                            }
                        },
                    }
                }
                Decl::Semantics { name, body, pos } => {
                    if !self.define(&mut names, name, pos) {
                        continue;
                    }
                    match FeatureStructure::from_avm(&lattice, body, case_frame) {
                        Err(e) => self.err(pos, format!("semantics `{name}`: {}", build_text(&e))),
                        Ok(fs) => {
                            semantics.insert(
                                name.clone(),
                                Arc::new(SemanticsDef { name: name.clone(), body: fs, provenance: pos.clone() }),
                            );
                        }
                    }
                }
                _ => {}
            }
        }

        // Pass 4: senses.
        let mut senses = Vec::new();
        for d in &decls {
            let Decl::Sense { name, refs, priority, pos } = d else { continue };
            if !self.define(&mut names, name, pos) {
                continue;
            }
            let mut parts: Vec<Arc<ConstraintDef>> = Vec::new();
            let mut sems: Vec<Arc<SemanticsDef>> = Vec::new();
            let mut ok = true;
            for r in refs {
                match &r.arg {
                    Some(arg) => {
                        let key = format!("{}({arg})", r.name);
                        if let Some(c) = constraints.get(&key) {
                            parts.push(c.clone());
                            continue;
                        }
                        let Some(t) = templates.get(&r.name) else {
                            self.err(&r.pos, format!("unknown parameterized constraint `{}`", r.name));
                            ok = false;
                            continue;
                        };
                        match instantiate(&lattice, case_frame, t, arg) {
                            Ok(c) => {
                                let c = Arc::new(c);
                                constraints.insert(key, c.clone());
                                parts.push(c);
                            }
                            Err(e) => {
                                self.err(&r.pos, e.to_string());
                                ok = false;
                            }
                        }
                    }
                    None => {
                        if let Some(c) = constraints.get(&r.name) {
                            parts.push(c.clone());
                        } else if let Some(s) = semantics.get(&r.name) {
                            sems.push(s.clone());
                        } else {
                            self.err(&r.pos, format!("sense `{name}` references unknown constraint `{}`", r.name));
                            ok = false;
                        }
                    }
                }
            }
            if !ok {
                continue;
            }
            if sems.len() != 1 {
                self.err(
                    pos,
                    format!("sense `{name}` must reference exactly one semantics definition, found {}", sems.len()),
                );
                continue;
            }
            let semantics_def = sems.pop().unwrap();
            let mut compiled =
                FeatureStructure::from_avm(&lattice, &Avm::Node { ty: None, features: vec![] }, case_frame)
                    .expect("empty frame");
            let mut failed = false;
            for body in parts.iter().map(|c| &c.body).chain(std::iter::once(&semantics_def.body)) {
                match unify(&lattice, &compiled, body) {
                    Ok(c) => compiled = c,
                    Err(f) => {
                        self.err(pos, format!("sense `{name}` is self-contradictory: {}", failure_text(&f)));
                        failed = true;
                        break;
                    }
                }
            }
            if failed {
                continue;
            }
            if let Some(role) = unshared_role(&compiled) {
                self.err(pos, format!("sense `{name}`: role {role} is not tag-shared with an argument slot"));
                continue;
            }
            let specificity = parts.iter().filter(|c| !c.is_vacuous()).count();
            senses.push(SenseDef {
                name: name.clone(),
                constraints: parts,
                semantics: semantics_def,
                priority: priority.unwrap_or(0),
                specificity,
                compiled,
                provenance: pos.clone(),
            });
        }

        let lexicon = Lexicon { lattice, ontology, case_frame, constraints, templates, semantics, senses };
        self.finish(lexicon)
    }

    /// Records a definition; reports and returns false on duplicates.
    fn define(&mut self, names: &mut HashMap<String, Pos>, name: &str, pos: &Pos) -> bool {
        if let Some(prev) = names.get(name) {
            let msg = format!("duplicate definition of `{name}` (first defined at {prev})");
            self.err(pos, msg);
            return false;
        }
        names.insert(name.to_string(), pos.clone());
        true
    }
}

fn build_text(e: &BuildError) -> String {
    match e {
        BuildError::Unify(f) => failure_text(f),
        other => other.to_string(),
    }
}

/// First role under SEMANTICS.ROLES whose node is not also reachable under
/// ARGUMENTS.
fn unshared_role(fs: &FeatureStructure) -> Option<String> {
    let roles = fs.get_str("SEMANTICS.ROLES")?;
    let mut under_args = HashSet::new();
    if let Some(args) = fs.get_str("ARGUMENTS") {
        let mut stack = vec![args];
        while let Some(n) = stack.pop() {
            if under_args.insert(n.id()) {
                stack.extend(n.arcs().map(|(_, c)| c));
            }
        }
    }
    roles.arcs().find(|(_, n)| !under_args.contains(&n.id())).map(|(f, _)| f.to_string())
}

// Placeholder returned alongside diagnostics; `finish` discards it.
fn unreachable_lexicon() -> Lexicon {
    Lexicon {
        lattice: LatticeBuilder::new().build(),
        ontology: Ontology::default(),
        case_frame: None,
        constraints: BTreeMap::new(),
        templates: BTreeMap::new(),
        semantics: BTreeMap::new(),
        senses: Vec::new(),
    }
}
