//! Type lattice with multiple inheritance, greatest lower bounds and
//! feature appropriateness.
//!
//! Types are declared through a [`LatticeBuilder`] and frozen into a
//! [`TypeLattice`]. Two builtin types always exist: `top`, the most general
//! type, and `string`, the supertype of every string atom. String atoms are
//! not declared; they live implicitly below `string` and are represented by
//! [`Ty::Str`]. Failure of a greatest lower bound (conceptually `bottom`) is
//! reported as `None`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::fs::Feature;

pub const TOP: &str = "top";
pub const STRING: &str = "string";
/// Reserved name for the failure marker; it is never a declared type.
pub const BOTTOM: &str = "bottom";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub(crate) u32);

impl TypeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The type carried by a feature-structure node: either a declared type or
/// a string atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Named(TypeId),
    Str(Arc<str>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unknown type `{0}`")]
    Unknown(String),
    #[error("types `{0}` and `{1}` have no unique greatest lower bound")]
    Ambiguous(String, String),
}

/// A well-formedness problem found by [`TypeLattice::validate`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    Cycle { types: Vec<String> },
    Unreachable { ty: String },
    AmbiguousGlb { a: String, b: String, candidates: Vec<String> },
    NonNarrowing { ty: String, feature: String, inherited: String, declared: String },
    FeatureConflict { ty: String, feature: String, left: String, right: String },
    StringSubtype { ty: String },
}

impl Violation {
    /// The type the violation is best attributed to, for positioned reports.
    pub fn subject(&self) -> &str {
        match self {
            Violation::Cycle { types } => &types[0],
            Violation::Unreachable { ty } => ty,
            Violation::AmbiguousGlb { a, .. } => a,
            Violation::NonNarrowing { ty, .. } => ty,
            Violation::FeatureConflict { ty, .. } => ty,
            Violation::StringSubtype { ty } => ty,
        }
    }

    /// Every type involved in the violation.
    pub fn involved(&self) -> Vec<&str> {
        match self {
            Violation::Cycle { types } => types.iter().map(String::as_str).collect(),
            Violation::AmbiguousGlb { a, b, candidates } => {
                [a.as_str(), b.as_str()].into_iter().chain(candidates.iter().map(String::as_str)).collect()
            }
            other => vec![other.subject()],
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Cycle { types } => write!(f, "subtype cycle through {}", types.join(" < ")),
            Violation::Unreachable { ty } => write!(f, "type `{ty}` is not reachable from `top`"),
            Violation::AmbiguousGlb { a, b, candidates } => {
                write!(f, "types `{a}` and `{b}` have several maximal common subtypes: {}", candidates.join(", "))
            }
            Violation::NonNarrowing { ty, feature, inherited, declared } => write!(
                f,
                "type `{ty}` redeclares {feature} as `{declared}`, which does not narrow inherited `{inherited}`"
            ),
            Violation::FeatureConflict { ty, feature, left, right } => {
                write!(f, "type `{ty}` inherits incompatible value types `{left}` and `{right}` for {feature}")
            }
            Violation::StringSubtype { ty } => {
                write!(f, "type `{ty}` is declared below `string`, which admits only string atoms")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GlbEntry {
    Type(TypeId),
    Fail,
    Ambiguous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet(vec![0; n.div_ceil(64).max(1)])
    }
    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }
}

#[derive(Debug, Clone, Default)]
struct TypeDecl {
    parents: Vec<String>,
    features: Vec<(String, String)>,
}

/// Collects type declarations before the lattice is frozen.
#[derive(Debug, Clone)]
pub struct LatticeBuilder {
    order: Vec<String>,
    decls: HashMap<String, TypeDecl>,
}

impl Default for LatticeBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl LatticeBuilder {
    pub fn new() -> Self {
        let mut b = LatticeBuilder { order: Vec::new(), decls: HashMap::new() };
        b.declare(TOP);
        b.declare(STRING);
        b
    }

    /// Makes sure `name` exists. Returns false when it was already declared.
    pub fn declare(&mut self, name: &str) -> bool {
        if self.decls.contains_key(name) {
            return false;
        }
        self.order.push(name.to_string());
        self.decls.insert(name.to_string(), TypeDecl::default());
        true
    }

    pub fn contains(&self, name: &str) -> bool {
        self.decls.contains_key(name)
    }

    /// Declares `child` immediately below `parent`. Both are created if needed.
    pub fn subtype(&mut self, child: &str, parent: &str) -> &mut Self {
        self.declare(child);
        self.declare(parent);
        let d = self.decls.get_mut(child).unwrap();
        if !d.parents.iter().any(|p| p == parent) {
            d.parents.push(parent.to_string());
        }
        self
    }

    /// Declares `feature` appropriate for `ty` with values of type `value`.
    pub fn feature(&mut self, ty: &str, feature: &str, value: &str) -> &mut Self {
        self.declare(ty);
        self.declare(value);
        self.decls.get_mut(ty).unwrap().features.push((feature.to_string(), value.to_string()));
        self
    }

    pub fn build(&self) -> TypeLattice {
        let n = self.order.len();
        let index: HashMap<String, TypeId> =
            self.order.iter().enumerate().map(|(i, name)| (name.clone(), TypeId(i as u32))).collect();
        let top = index[TOP];
        let mut parents: Vec<Vec<TypeId>> = vec![Vec::new(); n];
        for (i, name) in self.order.iter().enumerate() {
            let decl = &self.decls[name];
            if name == TOP {
                parents[i] = decl.parents.iter().map(|p| index[p]).collect();
                continue;
            }
            if decl.parents.is_empty() {
                parents[i].push(top);
            } else {
                parents[i] = decl.parents.iter().map(|p| index[p]).collect();
            }
        }
        let declared: Vec<Vec<(Feature, TypeId)>> = self
            .order
            .iter()
            .map(|name| self.decls[name].features.iter().map(|(f, v)| (Feature::new(f), index[v])).collect())
            .collect();
        TypeLattice::assemble(self.order.clone(), index, parents, declared)
    }
}

/// An immutable type hierarchy.
#[derive(Debug, Clone)]
pub struct TypeLattice {
    names: Vec<String>,
    index: HashMap<String, TypeId>,
    parents: Vec<Vec<TypeId>>,
    children: Vec<Vec<TypeId>>,
    /// `ancestors[t]` holds every type `u` with `t <= u`, including `t`.
    ancestors: Vec<BitSet>,
    descendants: Vec<BitSet>,
    glb: Vec<GlbEntry>,
    declared: Vec<Vec<(Feature, TypeId)>>,
    approp: Vec<BTreeMap<Feature, TypeId>>,
    feature_conflicts: Vec<Violation>,
    introducers: BTreeMap<Feature, Vec<TypeId>>,
}

impl TypeLattice {
    fn assemble(
        names: Vec<String>,
        index: HashMap<String, TypeId>,
        parents: Vec<Vec<TypeId>>,
        declared: Vec<Vec<(Feature, TypeId)>>,
    ) -> Self {
        let n = names.len();
        let mut children = vec![Vec::new(); n];
        for (c, ps) in parents.iter().enumerate() {
            for p in ps {
                children[p.index()].push(TypeId(c as u32));
            }
        }
        let ancestors: Vec<BitSet> = (0..n)
            .map(|t| {
                let mut set = BitSet::new(n);
                let mut stack = vec![t];
                while let Some(x) = stack.pop() {
                    if set.contains(x) {
                        continue;
                    }
                    set.insert(x);
                    stack.extend(parents[x].iter().map(|p| p.index()));
                }
                set
            })
            .collect();
        let mut descendants = vec![BitSet::new(n); n];
        for (t, anc) in ancestors.iter().enumerate() {
            for a in anc.iter() {
                descendants[a].insert(t);
            }
        }
        let mut lat = TypeLattice {
            names,
            index,
            parents,
            children,
            ancestors,
            descendants,
            glb: Vec::new(),
            declared,
            approp: vec![BTreeMap::new(); n],
            feature_conflicts: Vec::new(),
            introducers: BTreeMap::new(),
        };
        lat.glb = lat.compute_glb_table();
        lat.compute_appropriateness();
        lat
    }

    fn compute_glb_table(&self) -> Vec<GlbEntry> {
        let n = self.names.len();
        let mut table = vec![GlbEntry::Fail; n * n];
        for a in 0..n {
            for b in a..n {
                let e = if self.ancestors[a].contains(b) {
                    GlbEntry::Type(TypeId(a as u32))
                } else if self.ancestors[b].contains(a) {
                    GlbEntry::Type(TypeId(b as u32))
                } else {
                    let maximal = self.maximal_common(a, b);
                    match maximal.len() {
                        0 => GlbEntry::Fail,
                        1 => GlbEntry::Type(TypeId(maximal[0] as u32)),
                        _ => GlbEntry::Ambiguous,
                    }
                };
                table[a * n + b] = e;
                table[b * n + a] = e;
            }
        }
        table
    }

    fn maximal_common(&self, a: usize, b: usize) -> Vec<usize> {
        let common = self.descendants[a].and(&self.descendants[b]);
        let members: Vec<usize> = common.iter().collect();
        members
            .iter()
            .copied()
            .filter(|&c| {
                !members.iter().any(|&d| d != c && self.ancestors[c].contains(d) && !self.ancestors[d].contains(c))
            })
            .collect()
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.names.len();
        let mut indeg: Vec<usize> = self.parents.iter().map(|p| p.len()).collect();
        let mut ready: Vec<usize> = (0..n).filter(|&t| indeg[t] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(t) = ready.pop() {
            out.push(t);
            for c in &self.children[t] {
                indeg[c.index()] -= 1;
                if indeg[c.index()] == 0 {
                    ready.push(c.index());
                }
            }
        }
        (out.len() == n).then_some(out)
    }

    fn compute_appropriateness(&mut self) {
        let Some(order) = self.topological_order() else {
            return;
        };
        let mut conflicts = Vec::new();
        for t in order {
            let mut merged: BTreeMap<Feature, TypeId> = BTreeMap::new();
            for p in &self.parents[t] {
                for (f, v) in &self.approp[p.index()] {
                    match merged.get(f) {
                        None => {
                            merged.insert(f.clone(), *v);
                        }
                        Some(&old) if old == *v => {}
                        Some(&old) => match self.glb_entry(old, *v) {
                            GlbEntry::Type(g) => {
                                merged.insert(f.clone(), g);
                            }
                            _ => conflicts.push(Violation::FeatureConflict {
                                ty: self.names[t].clone(),
                                feature: f.to_string(),
                                left: self.names[old.index()].clone(),
                                right: self.names[v.index()].clone(),
                            }),
                        },
                    }
                }
            }
            for (f, v) in self.declared[t].clone() {
                if let Some(&inherited) = merged.get(&f) {
                    if !self.is_subtype(v, inherited) {
                        conflicts.push(Violation::NonNarrowing {
                            ty: self.names[t].clone(),
                            feature: f.to_string(),
                            inherited: self.names[inherited.index()].clone(),
                            declared: self.names[v.index()].clone(),
                        });
                        continue;
                    }
                }
                merged.insert(f.clone(), v);
                let intro = self.introducers.entry(f).or_default();
                if !intro.contains(&TypeId(t as u32)) {
                    intro.push(TypeId(t as u32));
                }
            }
            self.approp[t] = merged;
        }
        self.feature_conflicts = conflicts;
    }

    fn glb_entry(&self, a: TypeId, b: TypeId) -> GlbEntry {
        self.glb[a.index() * self.names.len() + b.index()]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn top(&self) -> TypeId {
        self.index[TOP]
    }

    pub fn string(&self) -> TypeId {
        self.index[STRING]
    }

    pub fn id(&self, name: &str) -> Result<TypeId, TypeError> {
        self.index.get(name).copied().ok_or_else(|| TypeError::Unknown(name.to_string()))
    }

    pub fn name(&self, t: TypeId) -> &str {
        &self.names[t.index()]
    }

    pub fn types(&self) -> impl Iterator<Item = TypeId> + '_ {
        (0..self.names.len() as u32).map(TypeId)
    }

    pub fn parents(&self, t: TypeId) -> &[TypeId] {
        &self.parents[t.index()]
    }

    pub fn children(&self, t: TypeId) -> &[TypeId] {
        &self.children[t.index()]
    }

    /// Reflexive-transitive subtype test.
    pub fn is_subtype(&self, a: TypeId, b: TypeId) -> bool {
        self.ancestors[a.index()].contains(b.index())
    }

    pub fn is_subtype_named(&self, a: &str, b: &str) -> Result<bool, TypeError> {
        Ok(self.is_subtype(self.id(a)?, self.id(b)?))
    }

    /// Greatest lower bound; `Ok(None)` when the types share no subtype.
    pub fn glb(&self, a: TypeId, b: TypeId) -> Result<Option<TypeId>, TypeError> {
        match self.glb_entry(a, b) {
            GlbEntry::Type(t) => Ok(Some(t)),
            GlbEntry::Fail => Ok(None),
            GlbEntry::Ambiguous => Err(TypeError::Ambiguous(self.name(a).to_string(), self.name(b).to_string())),
        }
    }

    pub fn glb_named(&self, a: &str, b: &str) -> Result<Option<String>, TypeError> {
        Ok(self.glb(self.id(a)?, self.id(b)?)?.map(|t| self.name(t).to_string()))
    }

    pub fn ty_is_subtype(&self, a: &Ty, b: &Ty) -> bool {
        match (a, b) {
            (Ty::Named(a), Ty::Named(b)) => self.is_subtype(*a, *b),
            (Ty::Str(a), Ty::Str(b)) => a == b,
            (Ty::Str(_), Ty::Named(b)) => self.is_subtype(self.string(), *b),
            (Ty::Named(_), Ty::Str(_)) => false,
        }
    }

    pub fn ty_glb(&self, a: &Ty, b: &Ty) -> Result<Option<Ty>, TypeError> {
        match (a, b) {
            (Ty::Named(a), Ty::Named(b)) => Ok(self.glb(*a, *b)?.map(Ty::Named)),
            (Ty::Str(x), Ty::Str(y)) => Ok((x == y).then(|| a.clone())),
            (Ty::Str(_), Ty::Named(t)) => Ok(self.is_subtype(self.string(), *t).then(|| a.clone())),
            (Ty::Named(t), Ty::Str(_)) => Ok(self.is_subtype(self.string(), *t).then(|| b.clone())),
        }
    }

    pub fn ty_name(&self, t: &Ty) -> String {
        match t {
            Ty::Named(id) => self.name(*id).to_string(),
            Ty::Str(s) => format!("{:?}", s.as_ref()),
        }
    }

    /// Value type of `feature` on `t`, if the feature is appropriate.
    pub fn approp(&self, t: TypeId, feature: &Feature) -> Option<TypeId> {
        self.approp[t.index()].get(feature).copied()
    }

    /// Declarations on `t` and all its ancestors; narrowed redeclarations
    /// shadow inherited ones.
    pub fn appropriate_features(&self, t: TypeId) -> &BTreeMap<Feature, TypeId> {
        &self.approp[t.index()]
    }

    pub fn declared_features(&self, t: TypeId) -> &[(Feature, TypeId)] {
        &self.declared[t.index()]
    }

    /// The unique most general subtype of `t` on which `feature` is
    /// appropriate. `None` if there is no such type or several.
    pub fn introducer_below(&self, t: TypeId, feature: &Feature) -> Option<TypeId> {
        if self.approp(t, feature).is_some() {
            return Some(t);
        }
        let intro = self.introducers.get(feature)?;
        let mut candidates: Vec<TypeId> = Vec::new();
        for d in intro {
            if let Ok(Some(g)) = self.glb(t, *d) {
                if !candidates.contains(&g) {
                    candidates.push(g);
                }
            }
        }
        let maximal: Vec<TypeId> = candidates
            .iter()
            .copied()
            .filter(|&c| !candidates.iter().any(|&d| d != c && self.is_subtype(c, d)))
            .collect();
        match maximal.as_slice() {
            [one] => Some(*one),
            _ => None,
        }
    }

    /// Checks every lattice invariant; an empty list means the lattice is
    /// well formed.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.names.len();
        let mut out = Vec::new();

        let mut in_cycle = BTreeSet::new();
        for t in 0..n {
            if in_cycle.contains(&t) {
                continue;
            }
            let members: Vec<usize> =
                self.descendants[t].iter().filter(|&d| d != t && self.ancestors[t].contains(d)).collect();
            let self_loop = self.parents[t].iter().any(|p| p.index() == t);
            if !members.is_empty() || self_loop {
                let mut cyc = vec![t];
                cyc.extend(members);
                cyc.sort();
                in_cycle.extend(cyc.iter().copied());
                out.push(Violation::Cycle { types: cyc.iter().map(|&i| self.names[i].clone()).collect() });
            }
        }

        let top = self.top().index();
        for t in 0..n {
            if !self.ancestors[t].contains(top) {
                out.push(Violation::Unreachable { ty: self.names[t].clone() });
            }
        }

        let string = self.string().index();
        for t in self.descendants[string].iter() {
            if t != string {
                out.push(Violation::StringSubtype { ty: self.names[t].clone() });
            }
        }

        if in_cycle.is_empty() {
            for a in 0..n {
                for b in a + 1..n {
                    if self.glb[a * n + b] == GlbEntry::Ambiguous {
                        let mut candidates: Vec<String> =
                            self.maximal_common(a, b).iter().map(|&c| self.names[c].clone()).collect();
                        candidates.sort();
                        out.push(Violation::AmbiguousGlb {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            candidates,
                        });
                    }
                }
            }
        }

        out.extend(self.feature_conflicts.iter().cloned());
        out
    }
}
