mod common;

use std::collections::BTreeMap;

use common::*;
use scopeforge::disambig::{DrsBox, DrsCond, PluralPolicy, Reading};
use scopeforge::modeleval::{evaluate, evaluate_box, Model, ModelError};
use scopeforge::pipeline::{self, DirectiveSpec};

fn model(name: &str) -> Model {
    let src = std::fs::read_to_string(data_dir().join(format!("models/{name}.model"))).unwrap();
    Model::parse(&src).unwrap()
}

fn readings(sentence: &str, specs: &[&str], policy: PluralPolicy) -> Vec<Reading> {
    let specs: Vec<DirectiveSpec> = specs
        .iter()
        .map(|s| if s.contains('=') { DirectiveSpec::parse(s) } else { DirectiveSpec::parse_cumulative(s) }.unwrap())
        .collect();
    pipeline::sentence_readings(&lex(), sentence, &specs, policy).unwrap()
}

#[test]
fn empty_box_is_true() {
    assert_eq!(evaluate_box(&DrsBox::default(), &Model::default()), Ok(true));
    assert_eq!(evaluate_box(&DrsBox::default(), &model("s01_some_attend")), Ok(true));
}

#[test]
fn negation_scope_is_told_apart() {
    let rs = readings(S01, &[], PluralPolicy::Branch);
    let every_over_not = rs
        .iter()
        .find(|r| outscopes(&r.root, &|c| is_every(c), &|c| matches!(c, DrsCond::Neg(_))))
        .unwrap();
    let not_over_every = rs.iter().find(|r| r != &every_over_not).unwrap();
    let nobody = model("s01_nobody_attends");
    assert_eq!(evaluate(every_over_not, &nobody), Ok(true));
    assert_eq!(evaluate(not_over_every, &nobody), Ok(true));
    let some = model("s01_some_attend");
    assert_eq!(evaluate(every_over_not, &some), Ok(false));
    assert_eq!(evaluate(not_over_every, &some), Ok(true));
}

#[test]
fn lawyers_collective_and_distributive() {
    let joint = model("s11_joint_hire");
    let np = "die Rechtsanwälte";
    let col = readings(S11, &[&format!("{np}=collective")], PluralPolicy::Fixed);
    assert_eq!(evaluate(&col[0], &joint), Ok(true));
    for r in readings(S11, &[&format!("{np}=distributive")], PluralPolicy::Fixed) {
        assert_eq!(evaluate(&r, &joint), Ok(false), "{}", r.text);
    }
}

#[test]
fn gathered_holds_of_the_group_only() {
    let rs = readings(S10, &[], PluralPolicy::Branch);
    assert_eq!(evaluate(&rs[0], &model("s10_gathered")), Ok(true));
    let partial = Model::parse(
        "entity g1 g2 g3 gd\ngroup M = {g1,g2,g3}\ngroup N = {g1,g2}\nrel mädchen: (M)\nrel garden: (gd)\nrel gather: (N,gd)\n",
    )
    .unwrap();
    assert_eq!(evaluate(&rs[0], &partial), Ok(false));
}

/// Every sentence with several readings ships models that tell each pair
/// of readings apart.
#[test]
fn shipped_models_separate_readings() {
    let cases: [(&str, &[&str], PluralPolicy, &[&str]); 4] = [
        (S01, &[], PluralPolicy::Branch, &["s01_some_attend", "s01_nobody_attends"]),
        (S20, &[], PluralPolicy::Branch, &["s20_pairwise", "s20_one_applicant"]),
        (S11, &[], PluralPolicy::Branch, &["s11_joint_hire", "s11_each_own", "s11_each_same"]),
        (S25B, &["die Gemälde=distributive"], PluralPolicy::Fixed, &["s25_paintings"]),
    ];
    for (s, specs, policy, models) in cases {
        let rs = readings(s, specs, policy);
        assert!(rs.len() > 1, "{s}");
        let ms: Vec<Model> = models.iter().map(|m| model(m)).collect();
        let table: Vec<Vec<bool>> =
            rs.iter().map(|r| ms.iter().map(|m| evaluate(r, m).unwrap()).collect()).collect();
        for i in 0..rs.len() {
            for j in i + 1..rs.len() {
                assert_ne!(table[i], table[j], "{s}: readings {} and {} agree on every model", i + 1, j + 1);
            }
        }
    }
}

#[test]
fn cumulative_truth_values() {
    let rs = readings(S17, &["three breweries,five inns"], PluralPolicy::Fixed);
    assert_eq!(rs.len(), 1);
    let expect = BTreeMap::from([
        ("s17_true_spread", true),
        ("s17_true_hub", true),
        ("s17_false_idle_brewery", false),
        ("s17_false_unsupplied_inns", false),
    ]);
    for (m, want) in expect {
        assert_eq!(evaluate(&rs[0], &model(m)), Ok(want), "{m}");
    }
}

#[test]
fn generic_readings_are_not_evaluated() {
    let rs = readings(S11, &["die Rechtsanwälte=generic"], PluralPolicy::Fixed);
    assert!(!rs.is_empty());
    for r in rs {
        assert!(r.root.has_gen());
        assert_eq!(evaluate(&r, &model("s11_joint_hire")), Err(ModelError::GenNotEvaluable));
    }
}

#[test]
fn propositional_arguments_are_reported() {
    let rs = readings(S24, &["die Kinder=distributive"], PluralPolicy::Fixed);
    let m = Model::parse("entity a\nrel mann: (a)\n").unwrap();
    assert_eq!(evaluate(&rs[0], &m), Err(ModelError::PropNotEvaluable("glauben".into())));
}

#[test]
fn arity_mismatch() {
    let rs = readings(S01, &[], PluralPolicy::Branch);
    let m = Model::parse("entity a b\nrel pay_attention: (a,b)\n").unwrap();
    assert!(matches!(evaluate(&rs[0], &m), Err(ModelError::ArityMismatch { expected: 2, found: 1, .. })));
}

#[test]
fn model_schema_errors_carry_lines() {
    let bad = [
        ("entity a\nfoo b\n", 2),
        ("entity a a\n", 1),
        ("entity a\ngroup G = {}\n", 2),
        ("entity a\ngroup G = {b}\n", 2),
        ("entity a b\nrel r: (a); (a,b)\n", 2),
        ("entity a\nrel r: a\n", 2),
        ("# ok\nentity a\n\nrel r: (c)\n", 4),
        ("group G = a\n", 1),
        ("entity\n", 1),
    ];
    for (src, line) in bad {
        match Model::parse(src) {
            Err(ModelError::Schema { line: l, .. }) => assert_eq!(l, line, "{src:?}"),
            other => panic!("{src:?}: {other:?}"),
        }
    }
}

#[test]
fn model_comments_and_groups() {
    let m = Model::parse("# people\nentity a b # two\ngroup G = {a, b}\nrel r: (G); (a)\n").unwrap();
    assert_eq!(m.entities(), ["a".to_string(), "b".to_string()]);
}
