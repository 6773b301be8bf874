mod common;

use caseframe::fs::{subsumes, unify, FeatureStructure};
use caseframe::resolver::{explain, generate, resolve, resolve_oracle, Outcome, ResolutionResult, ResolveError};
use caseframe::{FeaturePath, Lexicon};
use common::{frame, golden_cases, random_frame, read_frame, reference};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn senses(results: &[ResolutionResult]) -> Vec<&str> {
    results.iter().map(|r| r.sense.as_str()).collect()
}

fn same_node(fs: &FeatureStructure, a: &str, b: &str) -> bool {
    match (fs.get_str(a), fs.get_str(b)) {
        (Some(x), Some(y)) => x.id() == y.id(),
        _ => false,
    }
}

fn pred(fs: &FeatureStructure) -> Option<&str> {
    fs.get_str("SEMANTICS.PRED").and_then(|n| n.as_str())
}

#[test]
fn demet_pasta_resolves_to_eat() {
    let lex = reference();
    let results = resolve(&lex, &read_frame(&lex, "demet-pasta"), 4).unwrap();
    assert_eq!(senses(&results), ["SENSE-EAT1"]);
    let f = &results[0].frame;
    assert_eq!(pred(f), Some("to eat"));
    assert!(same_node(f, "SEMANTICS.ROLES.AGENT", "ARGUMENTS.SUBJ"));
    assert!(same_node(f, "SEMANTICS.ROLES.THEME", "ARGUMENTS.DIR-OBJ"));
    assert!(same_node(f, "SEMANTICS.ROLES.SOURCE", "ARGUMENTS.OBL-ABL"));
    assert!(same_node(f, "SEMANTICS.ROLES.INSTRUMENT", "ARGUMENTS.INST"));
    let lat = lex.lattice();
    assert_eq!(lat.ty_name(f.get_str("ARGUMENTS.OBL-ABL").unwrap().ty()), "nil");
}

#[test]
fn kafa_resolves_to_mentally_deranged() {
    let lex = reference();
    let results = resolve(&lex, &read_frame(&lex, "kafa-deranged"), 4).unwrap();
    assert_eq!(senses(&results), ["SENSE-GET-MENTALLY-DERANGED"]);
    let f = &results[0].frame;
    assert_eq!(pred(f), Some("get mentally deranged"));
    assert!(same_node(f, "SEMANTICS.ROLES.EXPERIENCER", "ARGUMENTS.SUBJ"));
    assert_eq!(f.get_str("SEMANTICS.ROLES.EXPERIENCER.HEAD.STEM").and_then(|n| n.as_str()), Some("adam"));
}

#[test]
fn sas_senses_follow_the_single_object() {
    let lex = reference();
    for (case, sense) in
        [("sas-deviate", "SENSE-DEVIATE"), ("sas-surprised", "SENSE-SURPRISED"), ("sas-confused", "SENSE-CONFUSED")]
    {
        let results = resolve(&lex, &read_frame(&lex, case), 4).unwrap();
        assert_eq!(senses(&results), [sense], "{case}");
    }
    assert!(resolve(&lex, &read_frame(&lex, "sas-two-objects"), 4).unwrap().is_empty());
}

#[test]
fn gec_see_off_outranks_literal_pass() {
    let lex = reference();
    let results = resolve(&lex, &read_frame(&lex, "gec-see-off"), 4).unwrap();
    assert_eq!(senses(&results), ["SENSE-SEE-OFF", "SENSE-PASS"]);
    assert_eq!(results[0].rank, 1);
    assert_eq!(results[1].rank, 2);
    let with_abl = resolve(&lex, &read_frame(&lex, "gec-pass-with-abl"), 4).unwrap();
    assert_eq!(senses(&with_abl), ["SENSE-PASS"]);
}

#[test]
fn tut_resolves_the_embedded_clause_too() {
    let lex = reference();
    let results = resolve(&lex, &read_frame(&lex, "tut-feel-like"), 4).unwrap();
    assert_eq!(senses(&results), ["SENSE-FEEL-LIKE"]);
    let f = &results[0].frame;
    assert_eq!(pred(f), Some("to feel like doing"));
    assert_eq!(f.get_str("ARGUMENTS.SUBJ.SEMANTICS.PRED").and_then(|n| n.as_str()), Some("to eat"));
    assert!(same_node(f, "SEMANTICS.ROLES.EXPERIENCER", "ARGUMENTS.SUBJ.ARGUMENTS.SUBJ"));
    assert!(same_node(f, "SEMANTICS.ROLES.THEME", "ARGUMENTS.SUBJ"));
}

#[test]
fn depth_limit_names_the_embedded_path() {
    let lex = reference();
    let input = read_frame(&lex, "tut-feel-like");
    let err = resolve(&lex, &input, 1).unwrap_err();
    assert_eq!(err, ResolveError::DepthExceeded(FeaturePath::parse("ARGUMENTS.SUBJ").unwrap()));
    assert_eq!(resolve_oracle(&lex, &input, 1).unwrap_err(), err);
    assert!(resolve(&lex, &input, 2).is_ok());
}

#[test]
fn unknown_animacy_yields_both_para_readings_flagged() {
    let lex = reference();
    let results = resolve(&lex, &read_frame(&lex, "para-unknown-subject"), 4).unwrap();
    assert_eq!(senses(&results), ["SENSE-ACCEPT-BRIBE", "SENSE-COST-A-LOT"]);
    assert!(results.iter().all(|r| r.has_flag_kind("relied-on-unmarked-stem")));
    let marked = resolve(&lex, &read_frame(&lex, "para-bribe"), 4).unwrap();
    assert!(marked[0].flags.is_empty());
}

#[test]
fn unknown_verb_gives_no_results() {
    let lex = reference();
    let input = frame(&lex, r#"[VERB: [STEM: "zzz"] ARGUMENTS: [SUBJ: [HEAD: [STEM: "adam"]]]]"#);
    assert!(resolve(&lex, &input, 4).unwrap().is_empty());
}

#[test]
fn passive_blocks_spend_and_deranged() {
    let lex = reference();
    for (case, sense) in [("dolar-spend", "SENSE-SPEND-MONEY"), ("kafa-deranged", "SENSE-GET-MENTALLY-DERANGED")] {
        let text = std::fs::read_to_string(common::frame_input(case)).unwrap();
        let passive = text.replacen("STEM: \"ye\"", "STEM: \"ye\" VOICE: passive", 1);
        let results = resolve(&lex, &frame(&lex, &passive), 4).unwrap();
        assert!(!senses(&results).contains(&sense), "{case}");
    }
}

#[test]
fn results_are_sound() {
    let lex = reference();
    let lat = lex.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut inputs: Vec<FeatureStructure> = golden_cases().iter().map(|c| read_frame(&lex, c)).collect();
    inputs.extend((0..150).map(|_| random_frame(&mut rng, &lex)));
    for input in &inputs {
        for r in resolve(&lex, input, 4).unwrap() {
            assert!(subsumes(lat, input, &r.frame), "{} does not extend its input", r.sense);
            let compiled = &lex.sense(&r.sense).unwrap().compiled;
            assert_eq!(unify(lat, &r.frame, compiled).as_ref(), Ok(&r.frame));
            assert!(r.frame.is_acyclic_dag());
        }
    }
}

#[test]
fn resolve_agrees_with_oracle() {
    let lex = reference();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut inputs: Vec<FeatureStructure> = golden_cases().iter().map(|c| read_frame(&lex, c)).collect();
    inputs.extend((0..500).map(|_| random_frame(&mut rng, &lex)));
    let mut nonempty = 0;
    for input in &inputs {
        let fast = resolve(&lex, input, 4);
        let slow = resolve_oracle(&lex, input, 4);
        match (fast, slow) {
            (Ok(a), Ok(b)) => {
                assert_eq!(senses(&a), senses(&b));
                for (x, y) in a.iter().zip(&b) {
                    assert_eq!(x.rank, y.rank);
                    assert_eq!(x.frame, y.frame);
                    assert_eq!(x.flags, y.flags);
                }
                nonempty += usize::from(!a.is_empty());
            }
            (Err(a), Err(b)) => assert_eq!(a, b),
            (a, b) => panic!("resolve {:?} vs oracle {:?}", a.map(|r| r.len()), b.map(|r| r.len())),
        }
    }
    assert!(nonempty > 50, "random frames rarely resolve: {nonempty}");
}

#[test]
fn empty_lexicon_resolves_nothing() {
    let lex = Lexicon::from_decls(Vec::new()).unwrap();
    let input = FeatureStructure::from_avm(lex.lattice(), &caseframe::Avm::parse("[]").unwrap(), None).unwrap();
    assert!(resolve(&lex, &input, 4).unwrap().is_empty());
    assert!(resolve_oracle(&lex, &input, 4).unwrap().is_empty());
}

#[test]
fn refining_the_input_never_adds_senses() {
    let lex = reference();
    let lat = lex.lattice();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..200 {
        let a = random_frame(&mut rng, &lex);
        let b = random_frame(&mut rng, &lex);
        let Ok(refined) = unify(lat, &a, &b) else { continue };
        let (Ok(general), Ok(specific)) = (resolve(&lex, &a, 4), resolve(&lex, &refined, 4)) else { continue };
        let allowed = senses(&general);
        for s in senses(&specific) {
            assert!(allowed.contains(&s), "{s} appeared after refinement");
        }
    }
}

#[test]
fn dative_object_excludes_no_dat_senses() {
    let lex = reference();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let excluded: Vec<&str> = lex
        .senses()
        .iter()
        .filter(|s| s.constraints.iter().any(|c| c.name == "NO-DAT-OBL-OBJ"))
        .map(|s| s.name.as_str())
        .collect();
    assert!(excluded.len() >= 3);
    let dative = frame(&lex, r#"[ARGUMENTS: [OBL-DAT: [CAT: NP HEAD: [CASE: dat]]]]"#);
    for _ in 0..200 {
        let Ok(input) = unify(lex.lattice(), &random_frame(&mut rng, &lex), &dative) else { continue };
        for r in resolve(&lex, &input, 4).unwrap() {
            assert!(!excluded.contains(&r.sense.as_str()), "{}", r.sense);
        }
    }
}

#[test]
fn identical_inputs_rank_identically() {
    let lex = reference();
    let input = read_frame(&lex, "dolap-out-of");
    let a = resolve(&lex, &input, 4).unwrap();
    let b = resolve(&lex, &input.copy(), 4).unwrap();
    assert_eq!(senses(&a), senses(&b));
    assert_eq!(senses(&a), ["SENSE-EAT-OUT-OF", "SENSE-EAT1"]);
}

#[test]
fn generate_from_pred() {
    let lex = reference();
    let q = frame(&lex, r#"[SEMANTICS: [PRED: "get mentally deranged"]]"#);
    let out = generate(&lex, &q);
    assert_eq!(out.len(), 1);
    let f = &out[0].frame;
    let lat = lex.lattice();
    let s = |p: &str| f.get_str(p).and_then(|n| n.as_str().map(str::to_string));
    let t = |p: &str| f.get_str(p).map(|n| lat.ty_name(n.ty()));
    assert_eq!(s("VERB.STEM").as_deref(), Some("ye"));
    assert_eq!(s("ARGUMENTS.DIR-OBJ.HEAD.LEX").as_deref(), Some("kafa"));
    assert_eq!(t("ARGUMENTS.DIR-OBJ.HEAD.CASE").as_deref(), Some("acc"));
    assert_eq!(t("ARGUMENTS.DIR-OBJ.HEAD.POSS").as_deref(), Some("none"));
    assert_eq!(t("ARGUMENTS.OBL-DAT").as_deref(), Some("nil"));
    assert_eq!(t("ARGUMENTS.SUBJ.HEAD.SEM").as_deref(), Some("human"));

    let eat = generate(&lex, &frame(&lex, r#"[SEMANTICS: [PRED: "to eat"]]"#));
    assert_eq!(eat.len(), 1);
    let lat = lex.lattice();
    assert_eq!(lat.ty_name(eat[0].frame.get_str("ARGUMENTS.DIR-OBJ").unwrap().ty()), "optional-edible");
    assert_eq!(lat.ty_name(eat[0].frame.get_str("ARGUMENTS.OBL-DAT").unwrap().ty()), "nil");

    assert!(generate(&lex, &frame(&lex, r#"[SEMANTICS: [PRED: "to fly"]]"#)).is_empty());
}

#[test]
fn generation_round_trips_every_sense() {
    let lex = reference();
    for s in lex.senses() {
        let p = s.compiled.get_str("SEMANTICS.PRED").and_then(|n| n.as_str()).unwrap();
        let q = frame(&lex, &format!("[SEMANTICS: [PRED: {}]]", caseframe::avm::quote(p)));
        let generated = generate(&lex, &q);
        assert_eq!(generated[0].sense, s.name);
        let back = resolve(&lex, &generated[0].frame, 4).unwrap();
        assert_eq!(back.first().map(|r| r.sense.as_str()), Some(s.name.as_str()));
    }
}

#[test]
fn explain_reports_the_clash() {
    let lex = reference();
    let input = read_frame(&lex, "demet-pasta");
    let trace = explain(&lex, &input, "SENSE-GET-MENTALLY-DERANGED").unwrap();
    let lex_fail = trace.iter().find(|r| r.name == "DIR-OBJ-LEX-KAFA").unwrap();
    match &lex_fail.outcome {
        Outcome::Fail(f) => {
            assert_eq!(f.path.to_string(), "ARGUMENTS.DIR-OBJ.HEAD.LEX");
            assert_eq!((f.left.as_str(), f.right.as_str()), ("\"pasta\"", "\"kafa\""));
        }
        Outcome::Accept => panic!("kafa constraint accepted pasta"),
    }
    assert!(explain(&lex, &input, "SENSE-EAT1").unwrap().iter().all(|r| r.outcome == Outcome::Accept));

    let other = frame(&lex, r#"[VERB: [STEM: "tut"]]"#);
    let trace = explain(&lex, &other, "SENSE-EAT1").unwrap();
    assert_eq!(trace[0].name, "VERB-IS-YE");
    assert!(matches!(trace[0].outcome, Outcome::Fail(_)));

    assert_eq!(explain(&lex, &input, "SENSE-NONE").unwrap_err(), ResolveError::UnknownSense("SENSE-NONE".into()));
}
