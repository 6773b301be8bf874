//! Golden-corpus checking.
//!
//! A manifest is a line-oriented file:
//!
//! ```text
//! lexicon lexicons/reference.cfl
//! golden demet-pasta
//! negative kafa-deranged ARGUMENTS.DIR-OBJ.HEAD.POSS p3sg !SENSE-GET-MENTALLY-DERANGED
//! ```
//!
//! Paths are relative to the manifest. A golden case `c` reads
//! `frames/c/input.avm` and passes when resolution yields exactly the
//! readings in `frames/c/expected-1.avm`, `expected-2.avm`, ... in order.
//! A negative case replaces one value of the input and passes when the
//! named sense no longer appears.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::avm::Avm;
use crate::dsl::{Diagnostic, Lexicon};
use crate::fs::FeatureStructure;
use crate::resolver::{resolve, ResolutionResult, DEFAULT_DEPTH_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseKind {
    Golden,
    Negative { path: String, value: String, sense: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseSpec {
    pub name: String,
    pub kind: CaseKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Manifest {
    pub root: PathBuf,
    pub lexicons: Vec<PathBuf>,
    pub cases: Vec<CaseSpec>,
}

impl Manifest {
    pub fn read(path: &Path) -> Result<Manifest, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let root = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        let mut m = Manifest { root: root.clone(), lexicons: Vec::new(), cases: Vec::new() };
        for (i, line) in text.lines().enumerate() {
            let line = line.split(';').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let words: Vec<&str> = line.split_whitespace().collect();
            let bad = || format!("{}:{}: malformed manifest line", path.display(), i + 1);
            match words.as_slice() {
                ["lexicon", p] => m.lexicons.push(root.join(p)),
                ["golden", c] => m.cases.push(CaseSpec { name: c.to_string(), kind: CaseKind::Golden }),
                ["negative", c, p, v, s] if s.starts_with('!') => m.cases.push(CaseSpec {
                    name: c.to_string(),
                    kind: CaseKind::Negative { path: p.to_string(), value: v.to_string(), sense: s[1..].to_string() },
                }),
                _ => return Err(bad()),
            }
        }
        Ok(m)
    }

    pub fn frame_dir(&self, case: &str) -> PathBuf {
        self.root.join("frames").join(case)
    }

    /// Expected files of a golden case, in rank order.
    pub fn expected_files(&self, case: &str) -> Vec<PathBuf> {
        let dir = self.frame_dir(case);
        (1..).map(|i| dir.join(format!("expected-{i}.avm"))).take_while(|p| p.exists()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub case: String,
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(|e| e.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| !e.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let status = if e.passed { "pass" } else { "FAIL" };
            writeln!(f, "{status} {}", e.label)?;
            if !e.passed {
                writeln!(f, "     {}", e.detail)?;
            }
        }
        Ok(())
    }
}

/// Sense named in an expected file's `; rank N SENSE` header.
pub fn expected_sense(text: &str) -> Option<&str> {
    let header = text.lines().find(|l| l.starts_with("; rank"))?;
    header.split_whitespace().nth(3)
}

/// Runs every case of the manifest. Problems are report entries, never
/// errors; an unloadable lexicon fails every case.
pub fn corpus_check(manifest: &Manifest) -> Report {
    let mut report = Report::default();
    let lex = match Lexicon::load_files(&manifest.lexicons) {
        Ok(l) => l,
        Err(ds) => {
            let detail = ds.iter().map(Diagnostic::to_string).collect::<Vec<_>>().join("; ");
            for c in &manifest.cases {
                report.entries.push(Entry {
                    case: c.name.clone(),
                    label: label(c),
                    passed: false,
                    detail: detail.clone(),
                });
            }
            return report;
        }
    };
    for c in &manifest.cases {
        let outcome = match &c.kind {
            CaseKind::Golden => check_golden(&lex, manifest, &c.name),
            CaseKind::Negative { path, value, sense } => check_negative(&lex, manifest, &c.name, path, value, sense),
        };
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        report.entries.push(Entry { case: c.name.clone(), label: label(c), passed, detail });
    }
    report
}

fn label(c: &CaseSpec) -> String {
    match &c.kind {
        CaseKind::Golden => format!("golden {}", c.name),
        CaseKind::Negative { path, value, sense } => format!("negative {} {path}={value} !{sense}", c.name),
    }
}

fn read_frame_file(lex: &Lexicon, path: &Path) -> Result<FeatureStructure, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    lex.read_frame(&path.display().to_string(), &text).map_err(|d| d.to_string())
}

fn resolve_input(lex: &Lexicon, input: &FeatureStructure) -> Result<Vec<ResolutionResult>, String> {
    resolve(lex, input, DEFAULT_DEPTH_LIMIT).map_err(|e| e.to_string())
}

fn check_golden(lex: &Lexicon, m: &Manifest, case: &str) -> Result<(), String> {
    let input = read_frame_file(lex, &m.frame_dir(case).join("input.avm"))?;
    let results = resolve_input(lex, &input)?;
    let expected = m.expected_files(case);
    let got: Vec<&str> = results.iter().map(|r| r.sense.as_str()).collect();
    let mut want = Vec::new();
    for p in &expected {
        let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
        let sense =
            expected_sense(&text).ok_or_else(|| format!("{}: missing `; rank` header", p.display()))?.to_string();
        let frame = lex.read_frame(&p.display().to_string(), &text).map_err(|d| d.to_string())?;
        want.push((sense, frame));
    }
    let want_names: Vec<&str> = want.iter().map(|(s, _)| s.as_str()).collect();
    if got != want_names {
        return Err(format!("expected readings {want_names:?}, got {got:?}"));
    }
    for (r, (_, frame)) in results.iter().zip(&want) {
        if &r.frame != frame {
            return Err(format!("rank {} {} is not isomorphic to the expected frame", r.rank, r.sense));
        }
    }
    Ok(())
}

fn check_negative(lex: &Lexicon, m: &Manifest, case: &str, path: &str, value: &str, sense: &str) -> Result<(), String> {
    let file = m.frame_dir(case).join("input.avm");
    let text = std::fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
    let mut avm = Avm::parse_named(&file.display().to_string(), &text).map_err(|d| d.to_string())?;
    let replacement = Avm::parse(value).map_err(|d| d.to_string())?;
    let steps: Vec<&str> = path.split('.').collect();
    avm.replace_at(&steps, replacement);
    let input = lex.build_frame(&avm).map_err(|e| format!("mutated input is ill-formed: {e}"))?;
    let results = resolve_input(lex, &input)?;
    match results.iter().find(|r| r.sense == sense) {
        Some(r) => Err(format!("{sense} still resolves at rank {}", r.rank)),
        None => Ok(()),
    }
}
