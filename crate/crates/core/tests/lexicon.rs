mod common;

use caseframe::avm::render_avm;
use caseframe::dsl::{parse, Lexicon, Tier};
use caseframe::fs::FeatureStructure;
use caseframe::types::Violation;
use common::{check_corruption, corpus_dir, load_corrupted, reference, Corruption, CORRUPTIONS};

/// Type identifiers depend on load order, so structures from different
/// loads are compared by their rendering.
fn rendered(lex: &Lexicon, fs: &FeatureStructure) -> String {
    render_avm(lex.lattice(), fs)
}

fn expect_failure(file: &'static str, extra: &'static str, needle: &'static str) {
    let c = Corruption { label: "variant", file, extra, needle };
    if let Err(e) = check_corruption(&c) {
        panic!("{e}");
    }
}

#[test]
fn reference_loads_cleanly() {
    let lex = reference();
    assert_eq!(lex.senses().len(), 17);
    assert!(lex.lattice().validate().is_empty());
}

#[test]
fn corrupted_variants_fail_with_positioned_diagnostics() {
    for c in &CORRUPTIONS {
        if let Err(e) = check_corruption(c) {
            panic!("{e}");
        }
    }
}

#[test]
fn undeclared_parent_concept() {
    expect_failure("ontology.cfl", "concept gadget < gizmo.", "gizmo");
}

#[test]
fn role_without_argument_is_rejected() {
    expect_failure(
        "ye.cfl",
        "semantics SEM-LOOSE := [SEMANTICS: [PRED: \"x\" ROLES: [AGENT: [CAT: NP]]]].\nsense SENSE-LOOSE := VERB-IS-YE & SEM-LOOSE.",
        "not tag-shared",
    );
}

#[test]
fn missing_major_concept() {
    let (_dir, result) = load_corrupted("ontology.cfl", |s| s.replace("concept Measure < non-human.\n", ""));
    let diags = result.unwrap_err();
    assert!(diags.iter().any(|d| d.message.contains("Measure")), "{diags:?}");
}

#[test]
fn loading_is_order_independent() {
    let dir = tempfile::tempdir().unwrap();
    let lexicons = corpus_dir().join("lexicons");
    let mut reversed = String::new();
    for f in ["dus", "tut", "gotur", "gec", "sas", "ye", "ontology", "schema"] {
        reversed += &format!("include \"{}\".\n", lexicons.join(format!("{f}.cfl")).display());
    }
    let path = dir.path().join("rev.cfl");
    std::fs::write(&path, reversed).unwrap();
    let lex = Lexicon::load_files(&[path]).unwrap();
    let reference = reference();
    for s in reference.senses() {
        assert_eq!(rendered(&lex, &lex.sense(&s.name).unwrap().compiled), rendered(&reference, &s.compiled));
    }
}

#[test]
fn printed_source_reloads_to_the_same_lexicon() {
    let lex = reference();
    let src = lex.to_source();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("printed.cfl");
    std::fs::write(&path, &src).unwrap();
    let again = Lexicon::load_files(&[&path]).unwrap_or_else(|d| panic!("{d:?}\n{src}"));
    assert_eq!(again.senses().len(), lex.senses().len());
    for s in lex.senses() {
        let t = again.sense(&s.name).unwrap();
        assert_eq!(rendered(&again, &t.compiled), rendered(&lex, &s.compiled), "{}", s.name);
        assert_eq!((t.priority, t.specificity), (s.priority, s.specificity));
    }
    for c in lex.constraints() {
        assert_eq!(rendered(&again, &again.constraint(&c.name).unwrap().body), rendered(&lex, &c.body), "{}", c.name);
    }
    let names = |l: &Lexicon| l.lattice().types().map(|t| l.lattice().name(t).to_string()).collect::<Vec<_>>();
    let mut a = names(&lex);
    let mut b = names(&again);
    a.sort();
    b.sort();
    assert_eq!(a, b);
    let second = again.to_source();
    std::fs::write(&path, &second).unwrap();
    assert_eq!(Lexicon::load_files(&[&path]).unwrap().to_source(), second);
}

#[test]
fn instantiated_templates_are_shared() {
    let lex = reference();
    let a = lex.sense("SENSE-EAT1").unwrap();
    let b = lex.sense("SENSE-EAT-OUT-OF").unwrap();
    let find = |s: &caseframe::dsl::SenseDef| {
        s.constraints.iter().find(|c| c.name == "DIR-OBJ-IS(optional-edible)").cloned().unwrap()
    };
    assert!(std::sync::Arc::ptr_eq(&find(a), &find(b)));

    let inst = lex.instantiate("DIR-OBJ-IS", "optional-container").unwrap();
    assert_eq!(inst.tier, Tier::CoOccurrence);
    assert_eq!(inst.name, "DIR-OBJ-IS(optional-container)");
    let node = inst.body.get_str("ARGUMENTS.DIR-OBJ").unwrap();
    assert_eq!(lex.lattice().ty_name(node.ty()), "optional-container");
    assert!(lex.instantiate("DIR-OBJ-IS", "no-such-type").is_err());
    assert!(lex.instantiate("NO-TEMPLATE", "nil").is_err());
}

#[test]
fn parse_errors_are_positioned() {
    let err = parse("t.cfl", "type a <.").unwrap_err();
    assert_eq!(err[0].to_string(), "t.cfl:1:9: error: expected a parent type, found `.`");
}

#[test]
fn lattice_violations_map_to_declarations() {
    let decls = parse("v.cfl", "type a.\ntype b < a [F: a].\ntype c < b [F: top].").unwrap();
    let diags = Lexicon::from_decls(decls).unwrap_err();
    assert!(diags.iter().any(|d| d.pos.line == 3 && d.message.contains("F")), "{diags:?}");
    let lat = {
        let mut b = caseframe::types::LatticeBuilder::new();
        b.subtype("a", "top").subtype("b", "a").feature("b", "F", "a").subtype("c", "b").feature("c", "F", "top");
        b.build()
    };
    assert!(lat.validate().iter().any(|v| matches!(v, Violation::NonNarrowing { .. })));
}
