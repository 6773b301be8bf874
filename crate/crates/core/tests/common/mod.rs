#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use caseframe::avm::Avm;
use caseframe::fs::FeatureStructure;
use caseframe::types::{LatticeBuilder, TypeLattice, TOP};
use caseframe::Lexicon;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

pub fn reference_path() -> PathBuf {
    corpus_dir().join("lexicons").join("reference.cfl")
}

pub fn manifest_path() -> PathBuf {
    corpus_dir().join("manifest")
}

pub fn reference() -> Lexicon {
    match Lexicon::load_files(&[reference_path()]) {
        Ok(l) => l,
        Err(ds) => panic!("reference lexicon: {ds:?}"),
    }
}

pub fn frame_input(case: &str) -> PathBuf {
    corpus_dir().join("frames").join(case).join("input.avm")
}

pub fn read_frame(lex: &Lexicon, case: &str) -> FeatureStructure {
    let path = frame_input(case);
    let text = std::fs::read_to_string(&path).unwrap();
    lex.read_frame(&path.display().to_string(), &text).unwrap()
}

pub fn frame(lex: &Lexicon, text: &str) -> FeatureStructure {
    lex.read_frame("<test>", text).unwrap_or_else(|d| panic!("{d}"))
}

pub fn golden_cases() -> Vec<String> {
    let text = std::fs::read_to_string(manifest_path()).unwrap();
    text.lines().filter_map(|l| l.strip_prefix("golden ")).map(|s| s.trim().to_string()).collect()
}

/// Small lattice with multiple inheritance, used for algebraic properties.
pub fn algebra_lattice() -> TypeLattice {
    let mut b = LatticeBuilder::new();
    b.subtype("t1", TOP)
        .subtype("t2", "t1")
        .subtype("t3", "t1")
        .subtype("t4", "t2")
        .subtype("t4", "t3")
        .subtype("atom", TOP)
        .subtype("x", "atom")
        .subtype("y", "atom")
        .subtype("z", "atom")
        .feature("t1", "F", TOP)
        .feature("t1", "G", TOP)
        .feature("t2", "H", TOP)
        .feature("t3", "K", "atom");
    b.build()
}

const ALGEBRA_FEATURES: [(&str, &[&str]); 4] =
    [("t1", &["F", "G"]), ("t2", &["F", "G", "H"]), ("t3", &["F", "G", "K"]), ("t4", &["F", "G", "H", "K"])];

fn random_value(rng: &mut ChaCha8Rng, budget: &mut usize, tags: &mut u32, depth: usize) -> Avm {
    *budget = budget.saturating_sub(1);
    let roll = rng.gen_range(0..10);
    if *tags > 0 && roll == 0 {
        return Avm::Tag(rng.gen_range(1..=*tags), None);
    }
    if *budget == 0 || depth > 3 || roll < 4 {
        return match rng.gen_range(0..5) {
            0 => Avm::Str(["a", "b"].choose(rng).unwrap().to_string()),
            1 => Avm::Node { ty: None, features: Vec::new() },
            _ => Avm::Atom(["x", "y", "z", "atom", "t1"].choose(rng).unwrap().to_string()),
        };
    }
    let (ty, feats) = ALGEBRA_FEATURES.choose(rng).unwrap();
    let mut features = Vec::new();
    for f in feats.iter() {
        if *budget > 0 && rng.gen_bool(0.5) {
            let v = random_value(rng, budget, tags, depth + 1);
            features.push((f.to_string(), v));
        }
    }
    let node = Avm::Node { ty: rng.gen_bool(0.7).then(|| ty.to_string()), features };
    if rng.gen_bool(0.25) {
        *tags += 1;
        Avm::Tag(*tags, Some(Box::new(node)))
    } else {
        node
    }
}

/// A random well-formed structure of at most `max_nodes` nodes.
pub fn random_structure(rng: &mut ChaCha8Rng, lat: &TypeLattice, max_nodes: usize) -> FeatureStructure {
    loop {
        let mut budget = max_nodes;
        let mut tags = 0;
        let avm = random_value(rng, &mut budget, &mut tags, 0);
        let avm = match avm {
            Avm::Node { .. } => avm,
            other => Avm::Node { ty: Some("t1".into()), features: vec![("F".into(), other)] },
        };
        if let Ok(fs) = FeatureStructure::from_avm(lat, &avm, None) {
            if fs.node_count() <= max_nodes {
                return fs;
            }
        }
    }
}

/// Declared parent lists; index 0 is `top`.
pub struct RandomLattice {
    pub names: Vec<String>,
    pub parents: Vec<Vec<usize>>,
}

impl RandomLattice {
    pub fn generate(rng: &mut ChaCha8Rng, max_types: usize, multi: f64) -> RandomLattice {
        let n = rng.gen_range(2..=max_types);
        let mut names = vec![TOP.to_string()];
        let mut parents = vec![Vec::new()];
        for i in 1..n {
            names.push(format!("ty{i}"));
            let mut ps = vec![rng.gen_range(0..i)];
            if i > 2 && rng.gen_bool(multi) {
                let q = rng.gen_range(1..i);
                if !ps.contains(&q) {
                    ps.push(q);
                }
            }
            parents.push(ps);
        }
        RandomLattice { names, parents }
    }

    pub fn build(&self) -> TypeLattice {
        let mut b = LatticeBuilder::new();
        for (i, ps) in self.parents.iter().enumerate().skip(1) {
            b.declare(&self.names[i]);
            for p in ps {
                b.subtype(&self.names[i], &self.names[*p]);
            }
        }
        b.build()
    }

    /// Reflexive ancestor set of each type, by direct traversal.
    pub fn ancestors(&self) -> Vec<BTreeSet<usize>> {
        (0..self.names.len())
            .map(|t| {
                let mut seen = BTreeSet::new();
                let mut stack = vec![t];
                while let Some(x) = stack.pop() {
                    if seen.insert(x) {
                        stack.extend(&self.parents[x]);
                    }
                }
                seen
            })
            .collect()
    }

    /// Maximal common lower bounds of `a` and `b`, by exhaustive search.
    pub fn brute_glb(&self, anc: &[BTreeSet<usize>], a: usize, b: usize) -> Vec<usize> {
        let lower: Vec<usize> = (0..self.names.len()).filter(|&t| anc[t].contains(&a) && anc[t].contains(&b)).collect();
        lower.iter().copied().filter(|&t| !lower.iter().any(|&u| u != t && anc[t].contains(&u))).collect()
    }

    pub fn is_valid(&self) -> bool {
        let anc = self.ancestors();
        let n = self.names.len();
        (0..n).all(|a| (0..n).all(|b| self.brute_glb(&anc, a, b).len() <= 1))
    }
}

const STEMS: [&str; 16] = [
    "adam", "demet", "pasta", "para", "dolar", "kafa", "baş", "hak", "ekmek", "dolap", "çatal", "ev", "anne", "otobüs",
    "lira", "şirket",
];
const VERBS: [&str; 7] = ["ye", "şaş", "geç", "götür", "tut", "düş", "zzz"];
const SLOTS: [&str; 8] = ["SUBJ", "DIR-OBJ", "OBL-ABL", "OBL-DAT", "OBL-LOC", "BENEF", "INST", "VALUE"];
const CASES: [&str; 6] = ["nom", "acc", "dat", "abl", "ins", "gen"];

fn random_np(rng: &mut ChaCha8Rng) -> String {
    let mut head = format!("CAT: N STEM: \"{}\"", STEMS.choose(rng).unwrap());
    if rng.gen_bool(0.8) {
        head += &format!(" CASE: {}", CASES.choose(rng).unwrap());
    }
    if rng.gen_bool(0.5) {
        head += &format!(" POSS: {}", ["none", "p1sg", "p3sg"].choose(rng).unwrap());
    }
    if rng.gen_bool(0.1) {
        head += " PFORM: için";
    }
    format!("[CAT: NP HEAD: [{head}] MOD: nil]")
}

fn random_frame_text(rng: &mut ChaCha8Rng, depth: usize) -> String {
    let mut verb = format!("CAT: V STEM: \"{}\"", VERBS.choose(rng).unwrap());
    if rng.gen_bool(0.4) {
        verb += &format!(" VOICE: {}", ["active", "passive", "causative"].choose(rng).unwrap());
    }
    if rng.gen_bool(0.4) {
        verb += &format!(" AGR: {}", ["1sg", "3sg"].choose(rng).unwrap());
    }
    if depth > 1 {
        verb += " VFORM: future-participle";
    }
    let mut args = Vec::new();
    for slot in SLOTS {
        match rng.gen_range(0..10) {
            0..=3 => {}
            4..=5 => args.push(format!("{slot}: nil")),
            6 if slot == "SUBJ" && depth < 3 => args.push(format!("{slot}: {}", random_frame_text(rng, depth + 1))),
            _ => args.push(format!("{slot}: {}", random_np(rng))),
        }
    }
    format!("[VERB: [{verb}] ARGUMENTS: [{}]]", args.join(" "))
}

/// A random input frame over the reference schema.
pub fn random_frame(rng: &mut ChaCha8Rng, lex: &Lexicon) -> FeatureStructure {
    loop {
        let text = random_frame_text(rng, 1);
        if let Ok(fs) = lex.read_frame("<random>", &text) {
            return fs;
        }
    }
}

/// Copies the reference lexicon into a scratch directory, rewrites `file`
/// with `edit` and loads the result.
pub fn load_corrupted(
    file: &str,
    edit: impl FnOnce(String) -> String,
) -> (tempfile::TempDir, Result<Lexicon, Vec<caseframe::Diagnostic>>) {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(corpus_dir().join("lexicons")).unwrap() {
        let p = entry.unwrap().path();
        std::fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let target = dir.path().join(file);
    let text = std::fs::read_to_string(&target).unwrap();
    std::fs::write(&target, edit(text)).unwrap();
    let result = Lexicon::load_files(&[dir.path().join("reference.cfl")]);
    (dir, result)
}

/// A corrupted variant of the reference lexicon: text appended to a file
/// and a fragment of the diagnostic it must produce.
pub struct Corruption {
    pub label: &'static str,
    pub file: &'static str,
    pub extra: &'static str,
    pub needle: &'static str,
}

pub const CORRUPTIONS: [Corruption; 10] = [
    Corruption {
        label: "unknown constraint",
        file: "ye.cfl",
        extra: "sense SENSE-X := VERB-IS-YE & NO-SUCH-THING & SEM-EAT.",
        needle: "unknown constraint `NO-SUCH-THING`",
    },
    Corruption {
        label: "contradictory sense",
        file: "ye.cfl",
        extra: "sense SENSE-X := VERB-IS-YE & DIR-OBJ-IS-ACC & DIR-OBJ-IS-NOM & SEM-EAT.",
        needle: "self-contradictory",
    },
    Corruption {
        label: "tier violation",
        file: "ye.cfl",
        extra: "constraint BAD-LEX lexical := [ARGUMENTS: [DIR-OBJ: [HEAD: [CASE: acc]]]].",
        needle: "lexical constraint may not constrain ARGUMENTS.DIR-OBJ.HEAD.CASE",
    },
    Corruption {
        label: "undeclared concept",
        file: "ontology.cfl",
        extra: "marker \"kitap\" : book.",
        needle: "undeclared concept `book`",
    },
    Corruption {
        label: "duplicate name",
        file: "ye.cfl",
        extra: "constraint VERB-IS-YE verb-feature := [VERB: [STEM: \"ye\"]].",
        needle: "duplicate definition of `VERB-IS-YE`",
    },
    Corruption {
        label: "type cycle",
        file: "schema.cfl",
        extra: "type loop-a < loop-b.\ntype loop-b < loop-a.",
        needle: "cycle",
    },
    Corruption {
        label: "GLB ambiguity",
        file: "schema.cfl",
        extra: "type amb-1 < case & voice.\ntype amb-2 < case & voice.",
        needle: "several maximal common subtypes",
    },
    Corruption {
        label: "bad marker",
        file: "ontology.cfl",
        extra: "marker \"kitap\" : nominal.",
        needle: "not a concept",
    },
    Corruption {
        label: "unterminated AVM",
        file: "ye.cfl",
        extra: "constraint BROKEN verb-feature := [VERB: [STEM: \"ye\"].",
        needle: "unterminated",
    },
    Corruption {
        label: "dangling include",
        file: "reference.cfl",
        extra: "include \"missing.cfl\".",
        needle: "missing.cfl",
    },
];

/// Loads the corrupted variant and checks that loading failed as a whole
/// with the expected diagnostic positioned inside the appended lines.
pub fn check_corruption(c: &Corruption) -> Result<(), String> {
    let (dir, result) = load_corrupted(c.file, |s| format!("{s}{}\n", c.extra));
    let diags = match result {
        Ok(_) => return Err(format!("{}: corrupted lexicon loaded", c.label)),
        Err(d) => d,
    };
    let last = std::fs::read_to_string(dir.path().join(c.file)).unwrap().lines().count() as u32;
    let first = last + 1 - c.extra.lines().count() as u32;
    let hit = diags
        .iter()
        .any(|d| d.message.contains(c.needle) && d.pos.file.ends_with(c.file) && (first..=last).contains(&d.pos.line));
    if hit {
        Ok(())
    } else {
        Err(format!("{}: no diagnostic containing {:?} at {}:{first}..{last}: {diags:?}", c.label, c.needle, c.file))
    }
}
