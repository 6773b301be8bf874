//! Typed feature structures: rooted acyclic graphs with reentrancy.
//!
//! A [`FeatureStructure`] is always kept in canonical form: nodes are
//! numbered in depth-first preorder from the root (arcs visited in feature
//! order), and arcs to vacuous leaves are dropped. A leaf is vacuous when it
//! is unshared and its type is exactly the value type its parent declares for
//! that feature, so it carries no information. Two structures are therefore
//! isomorphic iff they are equal.
//!
//! All operations are non-destructive: unification copies both inputs into a
//! scratch arena, merges nodes there with union-find, and extracts a fresh
//! canonical structure.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::avm::Avm;
use crate::types::{Ty, TypeError, TypeId, TypeLattice};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Feature(Arc<str>);

impl Feature {
    pub fn new(name: &str) -> Self {
        Feature(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A sequence of features, written `A.B.C` (the `A|B|C` form is accepted too).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeaturePath(pub Vec<Feature>);

impl FeaturePath {
    pub fn parse(text: &str) -> Option<Self> {
        let segs: Vec<&str> = text.split(['.', '|']).map(str::trim).collect();
        if segs.iter().any(|s| s.is_empty()) {
            return None;
        }
        Some(FeaturePath(segs.into_iter().map(Feature::new).collect()))
    }

    pub fn root() -> Self {
        FeaturePath(Vec::new())
    }

    pub fn child(&self, f: &Feature) -> Self {
        let mut v = self.0.clone();
        v.push(f.clone());
        FeaturePath(v)
    }

    pub fn join(&self, other: &FeaturePath) -> Self {
        FeaturePath(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> Option<&Feature> {
        self.0.last()
    }
}

impl fmt::Display for FeaturePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<root>");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(s.as_str())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FailureReason {
    /// Two types have no common subtype.
    Clash,
    /// Merging would make a node its own descendant.
    Cycle,
    /// A feature is not appropriate for the node's type.
    Inappropriate,
    /// The lattice has no unique greatest lower bound for the pair.
    Ambiguous,
}

/// Why a unification failed, and where.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{reason:?} at {path}: {left} vs {right}")]
pub struct UnifyFailure {
    pub path: FeaturePath,
    pub left: String,
    pub right: String,
    pub reason: FailureReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("unsubstituted parameter `${0}`")]
    Param(String),
    #[error("{0}")]
    Unify(#[from] UnifyFailure),
}

pub type NodeId = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    ty: Ty,
    arcs: Vec<(Feature, NodeId)>,
}

/// Immutable, canonical typed feature structure. Node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FeatureStructure {
    nodes: Vec<Node>,
}

/// Borrowed view of one node.
#[derive(Clone, Copy)]
pub struct NodeRef<'a> {
    fs: &'a FeatureStructure,
    id: NodeId,
}

impl<'a> NodeRef<'a> {
    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn ty(&self) -> &'a Ty {
        &self.fs.nodes[self.id as usize].ty
    }

    pub fn arcs(&self) -> impl Iterator<Item = (&'a Feature, NodeRef<'a>)> + 'a {
        let fs = self.fs;
        fs.nodes[self.id as usize].arcs.iter().map(move |(f, c)| (f, NodeRef { fs, id: *c }))
    }

    pub fn get(&self, feature: &str) -> Option<NodeRef<'a>> {
        self.fs.nodes[self.id as usize]
            .arcs
            .iter()
            .find(|(f, _)| f.as_str() == feature)
            .map(|(_, c)| NodeRef { fs: self.fs, id: *c })
    }

    pub fn is_leaf(&self) -> bool {
        self.fs.nodes[self.id as usize].arcs.is_empty()
    }

    pub fn as_str(&self) -> Option<&'a str> {
        match self.ty() {
            Ty::Str(s) => Some(s),
            Ty::Named(_) => None,
        }
    }
}

impl fmt::Debug for NodeRef<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NodeRef({}, {:?})", self.id, self.ty())
    }
}

impl FeatureStructure {
    /// A single node of type `ty` with no arcs.
    pub fn atom(ty: Ty) -> Self {
        FeatureStructure { nodes: vec![Node { ty, arcs: Vec::new() }] }
    }

    pub fn root(&self) -> NodeRef<'_> {
        NodeRef { fs: self, id: 0 }
    }

    pub fn root_type(&self) -> &Ty {
        &self.nodes[0].ty
    }

    pub fn node(&self, id: NodeId) -> NodeRef<'_> {
        NodeRef { fs: self, id }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Follows `path` from the root.
    pub fn get(&self, path: &FeaturePath) -> Option<NodeRef<'_>> {
        let mut cur = self.root();
        for f in &path.0 {
            cur = cur.get(f.as_str())?;
        }
        Some(cur)
    }

    pub fn get_str(&self, path: &str) -> Option<NodeRef<'_>> {
        self.get(&FeaturePath::parse(path)?)
    }

    /// An isomorphic fresh structure. Structures are values, so this is a
    /// deep clone.
    pub fn copy(&self) -> Self {
        self.clone()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for n in &self.nodes {
            for (_, c) in &n.arcs {
                deg[*c as usize] += 1;
            }
        }
        deg
    }

    /// True when no arc leads back to an ancestor and every node is
    /// reachable from the root.
    pub fn is_acyclic_dag(&self) -> bool {
        let n = self.nodes.len();
        let mut color = vec![0u8; n];
        let mut stack = vec![(0usize, 0usize)];
        color[0] = 1;
        while let Some(&mut (node, ref mut next)) = stack.last_mut() {
            if let Some((_, c)) = self.nodes[node].arcs.get(*next) {
                *next += 1;
                let c = *c as usize;
                match color[c] {
                    0 => {
                        color[c] = 1;
                        stack.push((c, 0));
                    }
                    1 => return false,
                    _ => {}
                }
            } else {
                color[node] = 2;
                stack.pop();
            }
        }
        color.iter().all(|&c| c == 2)
    }

    /// Every path (in canonical order) at which a node can be reached; the
    /// first path found for each node.
    pub fn first_paths(&self) -> Vec<FeaturePath> {
        let mut paths: Vec<Option<FeaturePath>> = vec![None; self.nodes.len()];
        paths[0] = Some(FeaturePath::root());
        let mut stack = vec![0usize];
        let mut order = Vec::new();
        while let Some(n) = stack.pop() {
            order.push(n);
            let here = paths[n].clone().unwrap();
            for (f, c) in self.nodes[n].arcs.iter().rev() {
                if paths[*c as usize].is_none() {
                    paths[*c as usize] = Some(here.child(f));
                    stack.push(*c as usize);
                }
            }
        }
        paths.into_iter().map(|p| p.unwrap_or_default()).collect()
    }

    /// The substructure rooted at `path`, re-canonicalized.
    pub fn subgraph(&self, lat: &TypeLattice, path: &FeaturePath) -> Option<FeatureStructure> {
        let node = self.get(path)?.id();
        let mut arena = Arena::new(lat);
        let base = arena.import(self);
        Some(arena.finish(base + node as usize))
    }

    /// Builds a structure from its syntax tree. Untyped nodes start at
    /// `top`; the root is additionally constrained to `root_type`. Types of
    /// inner nodes are inferred from feature appropriateness.
    pub fn from_avm(lat: &TypeLattice, avm: &Avm, root_type: Option<TypeId>) -> Result<Self, BuildError> {
        let mut arena = Arena::new(lat);
        let mut tags = HashMap::new();
        let mut pending = Vec::new();
        let root = arena.add_avm(avm, &mut tags, &mut pending)?;
        if let Some(rt) = root_type {
            let r = arena.add(Ty::Named(rt));
            pending.push((root, r));
        }
        for (a, b) in pending {
            arena.union(a, b, FeaturePath::root())?;
        }
        arena.settle(root)?;
        Ok(arena.finish(root))
    }

    /// Minimal structure of type `ty` holding each value at its path.
    /// Tags shared between assignments create reentrancy.
    pub fn make(lat: &TypeLattice, ty: TypeId, assignments: &[(FeaturePath, Avm)]) -> Result<Self, BuildError> {
        let features = assignments.iter().map(|(p, v)| nest(p, v.clone())).collect::<Vec<_>>();
        let avm = Avm::Node { ty: None, features: features.into_iter().flatten().collect() };
        Self::from_avm(lat, &avm, Some(ty))
    }

    /// Syntax tree for this structure; shared nodes become tags numbered
    /// in order of first appearance.
    pub fn to_avm(&self, lat: &TypeLattice) -> Avm {
        let deg = self.in_degrees();
        let mut tags: HashMap<NodeId, u32> = HashMap::new();
        self.to_avm_rec(lat, 0, &deg, &mut tags)
    }

    fn to_avm_rec(&self, lat: &TypeLattice, id: NodeId, deg: &[usize], tags: &mut HashMap<NodeId, u32>) -> Avm {
        if let Some(t) = tags.get(&id) {
            return Avm::Tag(*t, None);
        }
        let shared = deg[id as usize] > 1;
        let tag = shared.then(|| {
            let t = tags.len() as u32 + 1;
            tags.insert(id, t);
            t
        });
        let node = &self.nodes[id as usize];
        let body = if node.arcs.is_empty() {
            match &node.ty {
                Ty::Str(s) => Avm::Str(s.to_string()),
                Ty::Named(t) => Avm::Atom(lat.name(*t).to_string()),
            }
        } else {
            let ty = match &node.ty {
                Ty::Named(t) => lat.name(*t).to_string(),
                Ty::Str(s) => format!("{s:?}"),
            };
            Avm::Node {
                ty: Some(ty),
                features: node.arcs.iter().map(|(f, c)| (f.to_string(), self.to_avm_rec(lat, *c, deg, tags))).collect(),
            }
        };
        match tag {
            Some(t) => Avm::Tag(t, Some(Box::new(body))),
            None => body,
        }
    }
}

fn nest(path: &FeaturePath, value: Avm) -> Option<(String, Avm)> {
    let (first, rest) = path.0.split_first()?;
    let mut v = value;
    for f in rest.iter().rev() {
        v = Avm::Node { ty: None, features: vec![(f.to_string(), v)] };
    }
    Some((first.to_string(), v))
}

/// Most general structure subsumed by both inputs.
pub fn unify(lat: &TypeLattice, a: &FeatureStructure, b: &FeatureStructure) -> Result<FeatureStructure, UnifyFailure> {
    let mut arena = Arena::new(lat);
    let ra = arena.import(a);
    let rb = arena.import(b);
    arena.union(ra, rb, FeaturePath::root())?;
    arena.settle(ra)?;
    Ok(arena.finish(ra))
}

/// Unifies `b` into the node of `a` at `path`, creating the path if absent.
pub fn unify_at(
    lat: &TypeLattice,
    a: &FeatureStructure,
    path: &FeaturePath,
    b: &FeatureStructure,
) -> Result<FeatureStructure, UnifyFailure> {
    let mut arena = Arena::new(lat);
    let ra = arena.import(a);
    let target = arena.descend_or_create(ra, path);
    let rb = arena.import(b);
    arena.union(target, rb, path.clone())?;
    arena.settle(ra)?;
    Ok(arena.finish(ra))
}

/// True iff `b` carries all of `a`'s information.
pub fn subsumes(lat: &TypeLattice, a: &FeatureStructure, b: &FeatureStructure) -> bool {
    let deg_a = a.in_degrees();
    let mut map: Vec<Option<NodeId>> = vec![None; a.nodes.len()];
    let mut stack = vec![(0 as NodeId, 0 as NodeId)];
    while let Some((x, y)) = stack.pop() {
        match map[x as usize] {
            Some(prev) if prev != y => return false,
            Some(_) => continue,
            None => map[x as usize] = Some(y),
        }
        let nx = &a.nodes[x as usize];
        let ny = &b.nodes[y as usize];
        if !lat.ty_is_subtype(&ny.ty, &nx.ty) {
            return false;
        }
        for (f, cx) in &nx.arcs {
            match ny.arcs.iter().find(|(g, _)| g == f) {
                Some((_, cy)) => stack.push((*cx, *cy)),
                None => {
                    // b holds an implicit leaf of its declared value type.
                    let child = &a.nodes[*cx as usize];
                    if !child.arcs.is_empty() || deg_a[*cx as usize] > 1 {
                        return false;
                    }
                    let implied = match &ny.ty {
                        Ty::Named(t) => lat.approp(*t, f),
                        Ty::Str(_) => None,
                    };
                    match implied {
                        Some(v) if lat.ty_is_subtype(&Ty::Named(v), &child.ty) => {}
                        _ => return false,
                    }
                }
            }
        }
    }
    true
}

/// Scratch graph used for construction and unification.
struct Arena<'l> {
    lat: &'l TypeLattice,
    ty: Vec<Ty>,
    arcs: Vec<BTreeMap<Feature, usize>>,
    fwd: Vec<usize>,
}

impl<'l> Arena<'l> {
    fn new(lat: &'l TypeLattice) -> Self {
        Arena { lat, ty: Vec::new(), arcs: Vec::new(), fwd: Vec::new() }
    }

    fn add(&mut self, ty: Ty) -> usize {
        let id = self.ty.len();
        self.ty.push(ty);
        self.arcs.push(BTreeMap::new());
        self.fwd.push(id);
        id
    }

    fn find(&mut self, mut x: usize) -> usize {
        let mut root = x;
        while self.fwd[root] != root {
            root = self.fwd[root];
        }
        while self.fwd[x] != root {
            let next = self.fwd[x];
            self.fwd[x] = root;
            x = next;
        }
        root
    }

    fn import(&mut self, fs: &FeatureStructure) -> usize {
        let base = self.ty.len();
        for n in &fs.nodes {
            let id = self.add(n.ty.clone());
            self.arcs[id] = n.arcs.iter().map(|(f, c)| (f.clone(), base + *c as usize)).collect();
        }
        base
    }

    fn add_avm(
        &mut self,
        avm: &Avm,
        tags: &mut HashMap<u32, usize>,
        pending: &mut Vec<(usize, usize)>,
    ) -> Result<usize, BuildError> {
        match avm {
            Avm::Atom(name) => Ok(self.add(Ty::Named(self.lat.id(name)?))),
            Avm::Str(s) => Ok(self.add(Ty::Str(Arc::from(s.as_str())))),
            Avm::Param(p) => Err(BuildError::Param(p.clone())),
            Avm::Tag(t, value) => {
                let node = match value {
                    Some(v) => self.add_avm(v, tags, pending)?,
                    None => self.add(Ty::Named(self.lat.top())),
                };
                match tags.get(t) {
                    Some(&prev) => pending.push((prev, node)),
                    None => {
                        tags.insert(*t, node);
                    }
                }
                Ok(node)
            }
            Avm::Node { ty, features } => {
                let t = match ty {
                    Some(name) => self.lat.id(name)?,
                    None => self.lat.top(),
                };
                let node = self.add(Ty::Named(t));
                for (f, v) in features {
                    let child = self.add_avm(v, tags, pending)?;
                    let f = Feature::new(f);
                    match self.arcs[node].get(&f) {
                        Some(&prev) => pending.push((prev, child)),
                        None => {
                            self.arcs[node].insert(f, child);
                        }
                    }
                }
                Ok(node)
            }
        }
    }

    fn descend_or_create(&mut self, from: usize, path: &FeaturePath) -> usize {
        let mut cur = self.find(from);
        for f in &path.0 {
            let next = match self.arcs[cur].get(f) {
                Some(&c) => self.find(c),
                None => {
                    let c = self.add(Ty::Named(self.lat.top()));
                    self.arcs[cur].insert(f.clone(), c);
                    c
                }
            };
            cur = next;
        }
        cur
    }

    fn glb(&self, a: &Ty, b: &Ty, path: &FeaturePath) -> Result<Ty, UnifyFailure> {
        let fail =
            |reason| UnifyFailure { path: path.clone(), left: self.lat.ty_name(a), right: self.lat.ty_name(b), reason };
        match self.lat.ty_glb(a, b) {
            Ok(Some(t)) => Ok(t),
            Ok(None) => Err(fail(FailureReason::Clash)),
            Err(_) => Err(fail(FailureReason::Ambiguous)),
        }
    }

    fn union(&mut self, a: usize, b: usize, path: FeaturePath) -> Result<(), UnifyFailure> {
        let mut stack = vec![(a, b, path)];
        while let Some((x, y, p)) = stack.pop() {
            let x = self.find(x);
            let y = self.find(y);
            if x == y {
                continue;
            }
            let t = self.glb(&self.ty[x], &self.ty[y], &p)?;
            self.ty[x] = t;
            self.fwd[y] = x;
            let yarcs = std::mem::take(&mut self.arcs[y]);
            for (f, c) in yarcs {
                match self.arcs[x].get(&f) {
                    Some(&xc) => stack.push((xc, c, p.child(&f))),
                    None => {
                        self.arcs[x].insert(f, c);
                    }
                }
            }
        }
        Ok(())
    }

    fn reachable(&mut self, root: usize) -> Vec<usize> {
        let root = self.find(root);
        let mut seen = vec![false; self.ty.len()];
        let mut out = Vec::new();
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(n) = stack.pop() {
            out.push(n);
            let kids: Vec<usize> = self.arcs[n].values().copied().collect();
            for c in kids {
                let c = self.find(c);
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        out
    }

    fn path_to(&mut self, root: usize, target: usize) -> FeaturePath {
        let root = self.find(root);
        let target = self.find(target);
        let mut prev: HashMap<usize, (usize, Feature)> = HashMap::new();
        let mut queue = VecDeque::from([root]);
        let mut seen = std::collections::HashSet::from([root]);
        while let Some(n) = queue.pop_front() {
            if n == target {
                break;
            }
            let kids: Vec<(Feature, usize)> = self.arcs[n].iter().map(|(f, c)| (f.clone(), *c)).collect();
            for (f, c) in kids {
                let c = self.find(c);
                if seen.insert(c) {
                    prev.insert(c, (n, f));
                    queue.push_back(c);
                }
            }
        }
        let mut feats = Vec::new();
        let mut cur = target;
        while let Some((p, f)) = prev.get(&cur) {
            feats.push(f.clone());
            cur = *p;
        }
        feats.reverse();
        FeaturePath(feats)
    }

    /// Enforces appropriateness to a fixpoint, then rejects cycles.
    fn settle(&mut self, root: usize) -> Result<(), UnifyFailure> {
        self.well_type(root)?;
        self.check_acyclic(root)
    }

    fn well_type(&mut self, root: usize) -> Result<(), UnifyFailure> {
        let mut work = self.reachable(root);
        work.reverse();
        let mut stuck: Vec<(usize, Feature)> = Vec::new();
        loop {
            let mut progress = false;
            while let Some(n) = work.pop() {
                let n = self.find(n);
                let arcs: Vec<(Feature, usize)> = self.arcs[n].iter().map(|(f, c)| (f.clone(), *c)).collect();
                for (f, c) in arcs {
                    let value = match &self.ty[n] {
                        Ty::Named(t) => match self.lat.approp(*t, &f) {
                            Some(v) => v,
                            None => match self.lat.introducer_below(*t, &f) {
                                Some(narrowed) => {
                                    self.ty[n] = Ty::Named(narrowed);
                                    progress = true;
                                    work.push(n);
                                    break;
                                }
                                None => {
                                    stuck.push((n, f));
                                    break;
                                }
                            },
                        },
                        Ty::Str(_) => return Err(self.inappropriate(root, n, &f)),
                    };
                    let c = self.find(c);
                    let current = self.ty[c].clone();
                    let narrowed = match self.lat.ty_glb(&current, &Ty::Named(value)) {
                        Ok(Some(t)) => t,
                        res => {
                            let path = self.path_to(root, c);
                            return Err(UnifyFailure {
                                path,
                                left: self.lat.ty_name(&current),
                                right: self.lat.name(value).to_string(),
                                reason: if res.is_err() { FailureReason::Ambiguous } else { FailureReason::Clash },
                            });
                        }
                    };
                    if narrowed != current {
                        self.ty[c] = narrowed;
                        progress = true;
                        work.push(c);
                    }
                }
            }
            if stuck.is_empty() {
                return Ok(());
            }
            if !progress {
                let (n, f) = stuck.swap_remove(0);
                return Err(self.inappropriate(root, n, &f));
            }
            work.extend(stuck.drain(..).map(|(n, _)| n));
        }
    }

    fn inappropriate(&mut self, root: usize, n: usize, f: &Feature) -> UnifyFailure {
        let path = self.path_to(root, n).child(f);
        UnifyFailure {
            path,
            left: self.lat.ty_name(&self.ty[n]),
            right: f.to_string(),
            reason: FailureReason::Inappropriate,
        }
    }

    fn check_acyclic(&mut self, root: usize) -> Result<(), UnifyFailure> {
        let root = self.find(root);
        let mut color: HashMap<usize, u8> = HashMap::new();
        let mut stack: Vec<(usize, Vec<usize>)> = Vec::new();
        let kids = |a: &mut Self, n: usize| -> Vec<usize> {
            let raw: Vec<usize> = a.arcs[n].values().copied().collect();
            raw.into_iter().map(|c| a.find(c)).rev().collect()
        };
        color.insert(root, 1);
        let k = kids(self, root);
        stack.push((root, k));
        while let Some((node, pending)) = stack.last_mut() {
            let node = *node;
            match pending.pop() {
                Some(c) => match color.get(&c).copied().unwrap_or(0) {
                    0 => {
                        color.insert(c, 1);
                        let k = kids(self, c);
                        stack.push((c, k));
                    }
                    1 => {
                        let path = self.path_to(root, c);
                        return Err(UnifyFailure {
                            path,
                            left: self.lat.ty_name(&self.ty[c]),
                            right: self.lat.ty_name(&self.ty[node]),
                            reason: FailureReason::Cycle,
                        });
                    }
                    _ => {}
                },
                None => {
                    color.insert(node, 2);
                    stack.pop();
                }
            }
        }
        Ok(())
    }

    /// Extracts the canonical structure rooted at `root`.
    fn finish(mut self, root: usize) -> FeatureStructure {
        let root = self.find(root);
        let reach = self.reachable(root);
        // Resolve all arcs to representatives once.
        let mut arcs: HashMap<usize, Vec<(Feature, usize)>> = HashMap::new();
        for &n in &reach {
            let raw: Vec<(Feature, usize)> = self.arcs[n].iter().map(|(f, c)| (f.clone(), *c)).collect();
            let resolved = raw.into_iter().map(|(f, c)| (f, self.find(c))).collect();
            arcs.insert(n, resolved);
        }
        let mut indeg: HashMap<usize, usize> = HashMap::new();
        for list in arcs.values() {
            for (_, c) in list {
                *indeg.entry(*c).or_default() += 1;
            }
        }

        // Post-order: decide which arcs survive.
        let mut kept: HashMap<usize, Vec<(Feature, usize)>> = HashMap::new();
        let mut pruned: HashMap<usize, bool> = HashMap::new();
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if kept.contains_key(&n) {
                continue;
            }
            if !expanded {
                stack.push((n, true));
                for (_, c) in &arcs[&n] {
                    if !kept.contains_key(c) {
                        stack.push((*c, false));
                    }
                }
                continue;
            }
            let mut survive = Vec::new();
            for (f, c) in &arcs[&n] {
                let prunable = indeg[c] == 1
                    && kept.get(c).is_some_and(|k| k.is_empty())
                    && match &self.ty[n] {
                        Ty::Named(t) => self.lat.approp(*t, f).map(Ty::Named).as_ref() == Some(&self.ty[*c]),
                        Ty::Str(_) => false,
                    };
                if prunable {
                    pruned.insert(*c, true);
                } else {
                    survive.push((f.clone(), *c));
                }
            }
            kept.insert(n, survive);
        }

        let mut number: HashMap<usize, NodeId> = HashMap::new();
        let mut order = Vec::new();
        let mut stack = vec![root];
        while let Some(n) = stack.pop() {
            if number.contains_key(&n) {
                continue;
            }
            number.insert(n, order.len() as NodeId);
            order.push(n);
            for (_, c) in kept[&n].iter().rev() {
                if !number.contains_key(c) {
                    stack.push(*c);
                }
            }
        }
        let nodes = order
            .iter()
            .map(|n| Node {
                ty: self.ty[*n].clone(),
                arcs: kept[n].iter().map(|(f, c)| (f.clone(), number[c])).collect(),
            })
            .collect();
        FeatureStructure { nodes }
    }
}
