use super::text::{parse, print, print_canonical};
use super::*;

const EIGHT: &str = "\
ls : l_top l_top
l_1 : l_1_1 => l_1_2
l_1_1 : dref x
l_2 : not l_2_1
l_3 : pay_attention(x)
l_1 <= l_top
l_2 <= l_top
l_3 <= l_1_2
l_3 <= l_2_1
";

fn lbl(u: &UdrsStore, name: &str) -> Label {
    u.labels()
        .into_iter()
        .find(|l| text::label_name(u, *l) == name)
        .unwrap_or_else(|| panic!("no label {name}"))
}

#[test]
fn eight_round_trips() {
    let u = parse(EIGHT).unwrap();
    assert_eq!(print(&u), EIGHT);
    assert_eq!(print_canonical(&u), EIGHT);
}

#[test]
fn merge_of_empties_is_empty() {
    let e = UdrsStore::empty();
    let m = UdrsStore::merge(&e, &e, Selector::First).unwrap();
    assert_eq!(m.cond_count(), 0);
    assert_eq!(m.constraint_count(), 0);
}

#[test]
fn merge_detects_cycle() {
    let a = parse("l_1 <= l_2\n").unwrap();
    let mut b = a.clone();
    b.insert_constraint(SubordConstraint::Lt(lbl(&a, "l_2"), lbl(&a, "l_1")), Provenance::User)
        .unwrap();
    let only_b = {
        let mut s = UdrsStore::empty();
        s.insert_constraint(SubordConstraint::Lt(lbl(&a, "l_2"), lbl(&a, "l_1")), Provenance::User)
            .unwrap();
        s
    };
    assert!(matches!(
        UdrsStore::merge(&a, &only_b, Selector::First),
        Err(UdrsError::InconsistentStore(_))
    ));
    assert!(b.check_consistent().is_err());
}

#[test]
fn merge_rejects_different_tops() {
    let a = UdrsStore::empty();
    let mut b = UdrsStore::empty();
    b.top = Label(99);
    assert_eq!(UdrsStore::merge(&a, &b, Selector::First), Err(UdrsError::TopMismatch));
}

#[test]
fn adding_scope_constraint_to_eight() {
    let u = parse(EIGHT).unwrap();
    let c = SubordConstraint::Leq(lbl(&u, "l_2"), lbl(&u, "l_1_2"));
    let v = u.add_constraint(c).unwrap();
    assert_eq!(v.cond_count(), u.cond_count());
    assert_eq!(v.constraint_count(), u.constraint_count() + 1);
    let back = SubordConstraint::Lt(lbl(&u, "l_1_2"), lbl(&u, "l_2"));
    assert!(matches!(v.add_constraint(back), Err(UdrsError::InconsistentStore(_))));
}

#[test]
fn reflexive_constraint_keeps_closure() {
    let u = parse(EIGHT).unwrap();
    let l = lbl(&u, "l_3");
    let v = u.add_constraint(SubordConstraint::Leq(l, l)).unwrap();
    assert_eq!(u.closure().pairs(), v.closure().pairs());
}

#[test]
fn closure_of_six() {
    let six = "\
l_top : l_1_1 => l_1_2
l_1_1 : dref x
l_1_2 : not l_2_1
l_3 : pay_attention(x)
l_2 <= l_1_2
l_3 <= l_2_1
";
    let u = parse(six).unwrap();
    let cl = u.closure();
    assert!(cl.leq(lbl(&u, "l_2_1"), lbl(&u, "l_1_2")));
    assert!(cl.leq(lbl(&u, "l_1_1"), u.top));
    assert!(cl.leq(lbl(&u, "l_2_1"), u.top));
    assert!(cl.lt(lbl(&u, "l_3"), u.top));
}

#[test]
fn closure_single_atom() {
    let u = parse("l_1 : p(x)\n").unwrap();
    let l = lbl(&u, "l_1");
    let pairs: Vec<_> = u.closure().pairs().into_iter().map(|(a, b, _)| (a, b)).collect();
    assert_eq!(pairs, vec![(u.top, u.top), (l, u.top), (l, l)]);
}

#[test]
fn scope_and_res_of_quantifier() {
    let u = parse(EIGHT).unwrap();
    let l1 = lbl(&u, "l_1");
    assert_eq!(u.scope_of(l1), Some(lbl(&u, "l_1_2")));
    assert_eq!(u.res_of(l1), Some(lbl(&u, "l_1_1")));
    assert_eq!(u.classify(l1), ScopeClass::ScopeBearing);
    let l2 = lbl(&u, "l_2");
    assert_eq!(u.scope_of(l2), Some(lbl(&u, "l_2_1")));
    assert_eq!(u.classify(lbl(&u, "l_3")), ScopeClass::NotScopeBearing);
}

#[test]
fn plural_is_potentially_scope_bearing() {
    let u = parse("l_1 : dref X\nl_1 : lawyer(X)\nl_2 <= l_1\n").unwrap();
    let l1 = lbl(&u, "l_1");
    assert_eq!(u.scope_of(l1), None);
    assert_eq!(u.classify(l1), ScopeClass::PotentiallyScopeBearing);
    let v = u.add_constraint(SubordConstraint::Eq(l1, lbl(&u, "l_2"))).unwrap();
    assert_eq!(v.classify(l1), ScopeClass::NotScopeBearing);
}

#[test]
fn dref_of_and_duplicates() {
    let u = parse(EIGHT).unwrap();
    let x = u.dref_of(lbl(&u, "l_1_1")).unwrap().unwrap();
    assert_eq!(x.sort, Sort::Individual);
    assert_eq!(u.dref_of(lbl(&u, "l_3")).unwrap(), None);
    let bad = parse("l_1 : dref x\nl_1 : dref y\n").unwrap();
    assert!(matches!(bad.dref_of(lbl(&bad, "l_1")), Err(UdrsError::DuplicateIntro(_))));
}

#[test]
fn dref_res_clauses() {
    let u = parse(
        "l_1 : dref y\nl_1 = l_1\nl_2 : dref X\nl_3 <= l_2\nl_4 : l_4_1 => l_4_2\nl_4_1 : dref x\nl_4_1 < l_4\nl_4_2 < l_4\n",
    )
    .unwrap();
    let slot = |max: &str, min: &str| {
        let mut s = DeferredSlot::new(SlotId(1000));
        s.source_ls = Some(Ls::new(lbl(&u, max), lbl(&u, min)));
        s
    };
    match u.dref_res(&slot("l_1", "l_1")).unwrap() {
        DrefRes::Resolved { referent, .. } => assert_eq!(u.ref_hint(referent), Some("y")),
        other => panic!("{other:?}"),
    }
    assert_eq!(u.dref_res(&slot("l_2", "l_3")).unwrap(), DrefRes::Pending);
    match u.dref_res(&slot("l_4", "l_4_2")).unwrap() {
        DrefRes::Resolved { referent, trigger } => {
            assert_eq!(u.ref_hint(referent), Some("x"));
            assert!(matches!(trigger, SubordConstraint::Lt(..)));
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        u.dref_res(&slot("l_1", "l_3")),
        Err(UdrsError::NoMatchingClause(..))
    ));
}

#[test]
fn preset_trigger_resolves_group() {
    let u = parse("l_1 : dref X\nl_2 <= l_1\n").unwrap();
    let mut s = DeferredSlot::new(SlotId(1000));
    s.source_ls = Some(Ls::new(lbl(&u, "l_1"), lbl(&u, "l_2")));
    s.trigger = Some(SubordConstraint::Eq(lbl(&u, "l_1"), lbl(&u, "l_2")));
    match u.dref_res(&s).unwrap() {
        DrefRes::Resolved { referent, .. } => assert_eq!(referent.sort, Sort::Group),
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_conditions_rejected() {
    assert!(parse("l_1 : l_1 => l_2\n").is_err());
    assert!(parse("l_1 : X in y\n").is_err());
    let mut u = UdrsStore::empty();
    let deep = SubordConstraint::cond(
        Label(1),
        Label(2),
        SubordConstraint::cond(
            Label(3),
            Label(4),
            SubordConstraint::cond(Label(5), Label(6), SubordConstraint::Leq(Label(1), Label(2))),
        ),
    );
    assert_eq!(u.insert_constraint(deep, Provenance::User), Err(UdrsError::ConditionTooDeep));
}

#[test]
fn resolved_slot_is_frozen() {
    let mut u = parse("l_1 : p(dref_res(l_2,l_3))\nl_3 <= l_2\n").unwrap();
    let id = u.slots().next().unwrap().id;
    let x = Referent::individual(500);
    u.resolve_slot(id, x, SubordConstraint::Eq(Label(1), Label(1))).unwrap();
    assert_eq!(
        u.resolve_slot(id, x, SubordConstraint::Eq(Label(1), Label(1))),
        Err(UdrsError::SlotAlreadyResolved(id.0))
    );
}

#[test]
fn parse_errors_carry_line_numbers() {
    let err = parse("l_1 : p(x)\nl_1 ~ l_2\n").unwrap_err();
    assert!(matches!(err, text::TextError::Syntax { line: 2, .. }));
}

#[test]
fn conditional_constraints_round_trip() {
    let src = "\
ls : l_1 l_2
l_1 : dref X
(l_2 < l_1) -> ((l_4 < l_3) -> (l_3 <= l_2))
(l_2 < l_1) -> (l_1 <= l_top)
l_2 <= l_1
";
    let u = parse(src).unwrap();
    assert_eq!(print(&u), src);
}

#[test]
fn isomorphism_ignores_names() {
    let a = parse(EIGHT).unwrap();
    let b = parse(&EIGHT.replace("l_3", "l_9").replace('x', "y")).unwrap();
    assert!(iso::is_isomorphic(&a, &b));
    let c = parse(&EIGHT.replace("l_3 <= l_2_1\n", "")).unwrap();
    assert!(!iso::is_isomorphic(&a, &c));
}
