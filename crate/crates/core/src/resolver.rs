//! Sense resolution: unify a partially specified case frame with every
//! sense of the lexicon and rank the instantiated frames.
//!
//! Before matching, each argument head carrying a `STEM` is enriched with
//! `LEX` (a copy of the stem) and `SEM` (the stem's marker). A stem with
//! several markers yields one alternative input per marker. Embedded
//! clauses in argument slots are resolved first and every combination of
//! their readings is tried against the outer frame.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::avm::Avm;
use crate::dsl::{Lexicon, SenseDef, Tier};
use crate::fs::{unify, unify_at, Feature, FeaturePath, FeatureStructure, UnifyFailure};
use crate::types::{Ty, TypeId};

pub const DEFAULT_DEPTH_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("embedded clause at {0} exceeds the depth limit")]
    DepthExceeded(FeaturePath),
    #[error("unknown sense `{0}`")]
    UnknownSense(String),
    #[error("depth limit must be at least 1")]
    ZeroDepth,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Flag {
    /// A head whose stem has no marker had its SEM narrowed by the sense.
    ReliedOnUnmarkedStem(FeaturePath),
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flag::ReliedOnUnmarkedStem(p) => write!(f, "relied-on-unmarked-stem at {p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accept,
    Fail(UnifyFailure),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRecord {
    pub name: String,
    /// `None` for the semantics definition.
    pub tier: Option<Tier>,
    pub outcome: Outcome,
}

impl fmt::Display for TraceRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tier = self.tier.map_or("semantics", Tier::name);
        match &self.outcome {
            Outcome::Accept => write!(f, "{} ({tier}): accept", self.name),
            Outcome::Fail(u) => write!(f, "{} ({tier}): fail at {} ({} vs {})", self.name, u.path, u.left, u.right),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ResolutionResult {
    pub sense: String,
    pub rank: usize,
    pub priority: i64,
    pub specificity: usize,
    pub frame: FeatureStructure,
    pub trace: Vec<TraceRecord>,
    pub flags: Vec<Flag>,
}

impl ResolutionResult {
    pub fn has_flag_kind(&self, kind: &str) -> bool {
        self.flags.iter().any(|f| f.to_string().starts_with(kind))
    }
}

/// A reading before ranking; `seq` orders readings of the same sense.
#[derive(Clone)]
struct Reading {
    sense: usize,
    frame: FeatureStructure,
    seq: Vec<usize>,
    flags: BTreeSet<Flag>,
}

/// Ordering key: priority desc, specificity desc, name asc, then `seq`.
fn rank_readings(lex: &Lexicon, mut readings: Vec<Reading>) -> Vec<Reading> {
    let senses = lex.senses();
    readings.sort_by(|a, b| {
        let (sa, sb) = (&senses[a.sense], &senses[b.sense]);
        sb.priority
            .cmp(&sa.priority)
            .then(sb.specificity.cmp(&sa.specificity))
            .then(sa.name.cmp(&sb.name))
            .then(a.seq.cmp(&b.seq))
    });
    let mut out: Vec<Reading> = Vec::new();
    for r in readings {
        if !out.iter().any(|o| o.sense == r.sense && o.frame == r.frame) {
            out.push(r);
        }
    }
    out
}

fn into_results(lex: &Lexicon, readings: Vec<Reading>) -> Vec<ResolutionResult> {
    rank_readings(lex, readings)
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let s = &lex.senses()[r.sense];
            ResolutionResult {
                sense: s.name.clone(),
                rank: i + 1,
                priority: s.priority,
                specificity: s.specificity,
                frame: r.frame,
                trace: accepted_trace(s),
                flags: r.flags.into_iter().collect(),
            }
        })
        .collect()
}

fn accepted_trace(s: &SenseDef) -> Vec<TraceRecord> {
    s.constraints
        .iter()
        .map(|c| TraceRecord { name: c.name.clone(), tier: Some(c.tier), outcome: Outcome::Accept })
        .chain(std::iter::once(TraceRecord { name: s.semantics.name.clone(), tier: None, outcome: Outcome::Accept }))
        .collect()
}

fn arguments() -> Feature {
    Feature::new("ARGUMENTS")
}

fn is_frame(lex: &Lexicon, ty: &Ty) -> bool {
    match (ty, lex.case_frame_type()) {
        (Ty::Named(t), Some(cf)) => lex.lattice().is_subtype(*t, cf),
        _ => false,
    }
}

/// Argument slots holding embedded clauses, in feature order.
fn embedded_slots(lex: &Lexicon, frame: &FeatureStructure) -> Vec<Feature> {
    let Some(args) = frame.get_str("ARGUMENTS") else { return Vec::new() };
    args.arcs().filter(|(_, n)| is_frame(lex, n.ty())).map(|(f, _)| f.clone()).collect()
}

/// One argument head with a stem, and the enrichment alternatives for it.
struct Head {
    slot: Feature,
    stem: String,
    add_lex: bool,
    /// Empty when SEM is already given or the stem is unmarked.
    markers: Vec<TypeId>,
    unmarked: bool,
}

fn stem_heads(lex: &Lexicon, frame: &FeatureStructure) -> Vec<Head> {
    let Some(args) = frame.get_str("ARGUMENTS") else { return Vec::new() };
    let mut out = Vec::new();
    for (slot, np) in args.arcs() {
        let Some(head) = np.get("HEAD") else { continue };
        let Some(stem) = head.get("STEM").and_then(|s| s.as_str()) else { continue };
        let markers = lex.ontology().sem_of(stem);
        let has_sem = head.get("SEM").is_some();
        out.push(Head {
            slot: slot.clone(),
            stem: stem.to_string(),
            add_lex: head.get("LEX").is_none(),
            markers: if has_sem { Vec::new() } else { markers.to_vec() },
            unmarked: !has_sem && markers.is_empty(),
        })
    }
    out
}

/// Every combination of one marker per head, in declaration order.
fn marker_choices(heads: &[Head]) -> Vec<Vec<Option<TypeId>>> {
    let mut combos: Vec<Vec<Option<TypeId>>> = vec![Vec::new()];
    for h in heads {
        let options: Vec<Option<TypeId>> =
            if h.markers.is_empty() { vec![None] } else { h.markers.iter().copied().map(Some).collect() };
        combos = combos
            .into_iter()
            .flat_map(|c| {
                options.iter().map(move |o| {
                    let mut c = c.clone();
                    c.push(*o);
                    c
                })
            })
            .collect();
    }
    combos
}

fn head_path(slot: &Feature) -> FeaturePath {
    FeaturePath(vec![arguments(), slot.clone(), Feature::new("HEAD")])
}

/// Marks heads with unmarked stems whose SEM ended up below the ontology
/// root.
fn unmarked_flags(lex: &Lexicon, heads: &[Head], result: &FeatureStructure, prefix: &FeaturePath) -> BTreeSet<Flag> {
    let lat = lex.lattice();
    let Some(root) = lex.ontology().root() else { return BTreeSet::new() };
    let sem = Feature::new("SEM");
    let mut out = BTreeSet::new();
    for h in heads.iter().filter(|h| h.unmarked) {
        let path = head_path(&h.slot);
        let Some(head) = result.get(&path) else { continue };
        let effective = match head.get("SEM") {
            Some(n) => n.ty().clone(),
            None => match head.ty() {
                Ty::Named(t) => Ty::Named(lat.approp(*t, &sem).unwrap_or(root)),
                other => other.clone(),
            },
        };
        if effective != Ty::Named(root) {
            out.insert(Flag::ReliedOnUnmarkedStem(prefix.join(&path)));
        }
    }
    out
}

/// Resolves `input` against every sense of the lexicon.
pub fn resolve(
    lex: &Lexicon,
    input: &FeatureStructure,
    depth_limit: usize,
) -> Result<Vec<ResolutionResult>, ResolveError> {
    if depth_limit == 0 {
        return Err(ResolveError::ZeroDepth);
    }
    if lex.senses().is_empty() {
        return Ok(Vec::new());
    }
    let index = SenseIndex::new(lex);
    let readings = resolve_frame(lex, &index, input, &FeaturePath::root(), 1, depth_limit)?;
    Ok(into_results(lex, readings))
}

struct SenseIndex {
    by_stem: BTreeMap<String, Vec<usize>>,
    any_stem: Vec<usize>,
}

impl SenseIndex {
    fn new(lex: &Lexicon) -> Self {
        let mut by_stem: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut any_stem = Vec::new();
        for (i, s) in lex.senses().iter().enumerate() {
            match s.compiled.get_str("VERB.STEM").and_then(|n| n.as_str()) {
                Some(stem) => by_stem.entry(stem.to_string()).or_default().push(i),
                None => any_stem.push(i),
            }
        }
        SenseIndex { by_stem, any_stem }
    }

    fn candidates(&self, lex: &Lexicon, frame: &FeatureStructure) -> Vec<usize> {
        let stem = frame.get_str("VERB.STEM").and_then(|n| n.as_str());
        let mut out: Vec<usize> = match stem {
            Some(s) => self.by_stem.get(s).cloned().unwrap_or_default(),
            None => (0..lex.senses().len()).collect(),
        };
        if stem.is_some() {
            out.extend(&self.any_stem);
            out.sort_unstable();
        }
        out
    }
}

fn resolve_frame(
    lex: &Lexicon,
    index: &SenseIndex,
    frame: &FeatureStructure,
    at: &FeaturePath,
    depth: usize,
    limit: usize,
) -> Result<Vec<Reading>, ResolveError> {
    let lat = lex.lattice();
    let slots = embedded_slots(lex, frame);
    let mut inner: Vec<(FeaturePath, Vec<Reading>)> = Vec::new();
    for slot in &slots {
        let rel = FeaturePath(vec![arguments(), slot.clone()]);
        let abs = at.join(&rel);
        if depth + 1 > limit {
            return Err(ResolveError::DepthExceeded(abs));
        }
        let sub = frame.subgraph(lat, &rel).expect("slot exists");
        let readings = rank_readings(lex, resolve_frame(lex, index, &sub, &abs, depth + 1, limit)?);
        if readings.is_empty() {
            return Ok(Vec::new());
        }
        inner.push((rel, readings));
    }

    // Every combination of embedded readings, as (frame, ranks, flags).
    let mut bases: Vec<(FeatureStructure, Vec<usize>, BTreeSet<Flag>)> =
        vec![(frame.clone(), Vec::new(), BTreeSet::new())];
    for (rel, readings) in &inner {
        let mut next = Vec::new();
        for (base, ranks, flags) in &bases {
            for (i, r) in readings.iter().enumerate() {
                if let Ok(merged) = unify_at(lat, base, rel, &r.frame) {
                    let mut ranks = ranks.clone();
                    ranks.push(i);
                    let mut flags = flags.clone();
                    flags.extend(r.flags.iter().cloned());
                    next.push((merged, ranks, flags));
                }
            }
        }
        bases = next;
    }

    let mut out = Vec::new();
    for (base, ranks, inner_flags) in bases {
        let heads = stem_heads(lex, &base);
        let candidates = index.candidates(lex, &base);
        for (alt, choice) in marker_choices(&heads).into_iter().enumerate() {
            let Some(enriched) = enrich(lex, &base, &heads, &choice) else { continue };
            for &si in &candidates {
                let Ok(result) = unify(lat, &enriched, &lex.senses()[si].compiled) else { continue };
                let mut flags = inner_flags.clone();
                flags.extend(unmarked_flags(lex, &heads, &result, at));
                let mut seq = vec![alt];
                seq.extend(&ranks);
                out.push(Reading { sense: si, frame: result, seq, flags });
            }
        }
    }
    Ok(out)
}

/// Adds LEX and SEM to every stem head in one unification.
fn enrich(
    lex: &Lexicon,
    frame: &FeatureStructure,
    heads: &[Head],
    choice: &[Option<TypeId>],
) -> Option<FeatureStructure> {
    let lat = lex.lattice();
    let mut assignments = Vec::new();
    for (h, m) in heads.iter().zip(choice) {
        let path = head_path(&h.slot);
        if h.add_lex {
            assignments.push((path.child(&Feature::new("LEX")), Avm::Str(h.stem.clone())));
        }
        if let Some(m) = m {
            assignments.push((path.child(&Feature::new("SEM")), Avm::Atom(lat.name(*m).to_string())));
        }
    }
    if assignments.is_empty() {
        return Some(frame.clone());
    }
    let root = lex.case_frame_type()?;
    let extra = FeatureStructure::make(lat, root, &assignments).ok()?;
    unify(lat, frame, &extra).ok()
}

/// Brute-force reference implementation of [`resolve`]: no index, no
/// precompiled senses. Every constraint of every sense is unified in turn
/// for every embedded-reading combination.
pub fn resolve_oracle(
    lex: &Lexicon,
    input: &FeatureStructure,
    depth_limit: usize,
) -> Result<Vec<ResolutionResult>, ResolveError> {
    if depth_limit == 0 {
        return Err(ResolveError::ZeroDepth);
    }
    let readings = oracle_frame(lex, input, &FeaturePath::root(), 1, depth_limit)?;
    Ok(into_results(lex, readings))
}

fn oracle_frame(
    lex: &Lexicon,
    frame: &FeatureStructure,
    at: &FeaturePath,
    depth: usize,
    limit: usize,
) -> Result<Vec<Reading>, ResolveError> {
    let lat = lex.lattice();
    let mut stack: Vec<(FeatureStructure, Vec<usize>, BTreeSet<Flag>)> =
        vec![(frame.clone(), Vec::new(), BTreeSet::new())];
    for path in frame.first_paths() {
        if path.len() != 2 || path.0[0] != arguments() {
            continue;
        }
        let Some(node) = frame.get(&path) else { continue };
        if !is_frame(lex, node.ty()) {
            continue;
        }
        let abs = at.join(&path);
        if depth >= limit {
            return Err(ResolveError::DepthExceeded(abs));
        }
        let sub = frame.subgraph(lat, &path).expect("path exists");
        let readings = rank_readings(lex, oracle_frame(lex, &sub, &abs, depth + 1, limit)?);
        let mut next = Vec::new();
        for (base, ranks, flags) in stack {
            for (i, r) in readings.iter().enumerate() {
                if let Ok(merged) = unify_at(lat, &base, &path, &r.frame) {
                    let mut ranks = ranks.clone();
                    ranks.push(i);
                    let mut flags = flags.clone();
                    flags.extend(r.flags.iter().cloned());
                    next.push((merged, ranks, flags));
                }
            }
        }
        stack = next;
    }

    let mut out = Vec::new();
    for (base, ranks, inner_flags) in stack {
        let heads = stem_heads(lex, &base);
        for (alt, choice) in marker_choices(&heads).into_iter().enumerate() {
            let mut enriched = Some(base.clone());
            for (h, m) in heads.iter().zip(&choice) {
                enriched = enriched.and_then(|e| oracle_enrich_head(lex, &e, h, *m));
            }
            let Some(enriched) = enriched else { continue };
            for (si, sense) in lex.senses().iter().enumerate() {
                let Some(result) = fold_sense(lex, &enriched, sense) else { continue };
                let mut flags = inner_flags.clone();
                flags.extend(unmarked_flags(lex, &heads, &result, at));
                let mut seq = vec![alt];
                seq.extend(&ranks);
                out.push(Reading { sense: si, frame: result, seq, flags });
            }
        }
    }
    Ok(out)
}

fn oracle_enrich_head(
    lex: &Lexicon,
    frame: &FeatureStructure,
    h: &Head,
    marker: Option<TypeId>,
) -> Option<FeatureStructure> {
    let lat = lex.lattice();
    let path = head_path(&h.slot);
    let Ty::Named(head_ty) = frame.get(&path)?.ty().clone() else { return None };
    let mut assignments = Vec::new();
    if h.add_lex {
        assignments.push((FeaturePath::parse("LEX")?, Avm::Str(h.stem.clone())));
    }
    if let Some(m) = marker {
        assignments.push((FeaturePath::parse("SEM")?, Avm::Atom(lat.name(m).to_string())));
    }
    let fragment = FeatureStructure::make(lat, head_ty, &assignments).ok()?;
    unify_at(lat, frame, &path, &fragment).ok()
}

fn fold_sense(lex: &Lexicon, input: &FeatureStructure, sense: &SenseDef) -> Option<FeatureStructure> {
    let lat = lex.lattice();
    let mut acc = input.clone();
    for c in &sense.constraints {
        acc = unify(lat, &acc, &c.body).ok()?;
    }
    unify(lat, &acc, &sense.semantics.body).ok()
}

/// A frame produced by [`generate`].
#[derive(Debug, Clone)]
pub struct Generated {
    pub sense: String,
    pub rank: usize,
    pub frame: FeatureStructure,
}

/// Most general frames for every sense whose structure is compatible with
/// `query`, ranked like [`resolve`].
pub fn generate(lex: &Lexicon, query: &FeatureStructure) -> Vec<Generated> {
    let lat = lex.lattice();
    let readings: Vec<Reading> = lex
        .senses()
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            let frame = unify(lat, &s.compiled, query).ok()?;
            Some(Reading { sense: i, frame, seq: Vec::new(), flags: BTreeSet::new() })
        })
        .collect();
    rank_readings(lex, readings)
        .into_iter()
        .enumerate()
        .map(|(i, r)| Generated { sense: lex.senses()[r.sense].name.clone(), rank: i + 1, frame: r.frame })
        .collect()
}

/// Per-constraint account of matching `input` against one sense. After a
/// failure, later constraints are tried against the last accepted state.
pub fn explain(lex: &Lexicon, input: &FeatureStructure, sense: &str) -> Result<Vec<TraceRecord>, ResolveError> {
    let s = lex.sense(sense).ok_or_else(|| ResolveError::UnknownSense(sense.to_string()))?;
    let heads = stem_heads(lex, input);
    let mut first = None;
    for choice in marker_choices(&heads) {
        let Some(enriched) = enrich(lex, input, &heads, &choice) else { continue };
        let trace = trace_sense(lex, &enriched, s);
        if trace.iter().all(|r| r.outcome == Outcome::Accept) {
            return Ok(trace);
        }
        first.get_or_insert(trace);
    }
    Ok(first.unwrap_or_else(|| trace_sense(lex, input, s)))
}

fn trace_sense(lex: &Lexicon, input: &FeatureStructure, s: &SenseDef) -> Vec<TraceRecord> {
    let lat = lex.lattice();
    let mut acc = input.clone();
    let mut out = Vec::new();
    let steps = s.constraints.iter().map(|c| (c.name.clone(), Some(c.tier), &c.body)).chain(std::iter::once((
        s.semantics.name.clone(),
        None,
        &s.semantics.body,
    )));
    for (name, tier, body) in steps {
        let outcome = match unify(lat, &acc, body) {
            Ok(next) => {
                acc = next;
                Outcome::Accept
            }
            Err(f) => Outcome::Fail(f),
        };
        out.push(TraceRecord { name, tier, outcome });
    }
    out
}
