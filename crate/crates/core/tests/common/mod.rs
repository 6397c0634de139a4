#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use rand::Rng;
use scopeforge::disambig::{DrsArg, DrsBox, DrsCond, Reading};
use scopeforge::lexicon::Lexicon;
use scopeforge::pipeline::{self, Analysis};
use scopeforge::udrs::{
    Arg, CondBody, Condition, DeferredSlot, Label, Ls, Provenance, SubordConstraint, UdrsStore,
};

pub const S01: &str = "Everybody didn't pay attention";
pub const S20: &str = "Mindestens einen Bewerber habe ich fast jedem Mitarbeiter vorgestellt";
pub const S22: &str = "Ich habe fast jedem Mitarbeiter mindestens einen Bewerber vorgestellt";
pub const S24: &str = "Mindestens ein Mann glaubte, daß die Kinder Klingelputz gemacht haben.";
pub const S25A: &str = "weil der Mann mindestens einer Frau die Gemälde gezeigt hat";
pub const S25B: &str = "weil der Mann die Gemälde mindestens einer Frau gezeigt hat";
pub const S11: &str = "Die Rechtsanwälte stellten eine Sekretärin ein";
pub const S10: &str = "Die Mädchen gathered in the garden";
pub const S17: &str = "Three breweries supplied five inns";

pub const SENTENCES: [&str; 9] = [S01, S20, S22, S24, S25A, S25B, S11, S10, S17];

pub fn lex() -> Lexicon {
    Lexicon::fragment()
}

pub fn analysis(sentence: &str) -> Analysis {
    let mut a = pipeline::analyze(&lex(), sentence).expect("sentence parses");
    assert_eq!(a.len(), 1, "{sentence}: expected one derivation");
    a.remove(0)
}

pub fn store(sentence: &str) -> UdrsStore {
    analysis(sentence).store
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn golden(name: &str) -> String {
    std::fs::read_to_string(golden_dir().join(name)).expect("golden file")
}

pub fn texts(rs: &[Reading]) -> BTreeSet<String> {
    rs.iter().map(|r| r.text.clone()).collect()
}

pub fn child_boxes(c: &DrsCond) -> Vec<&DrsBox> {
    match c {
        DrsCond::Atom { args, .. } => args
            .iter()
            .filter_map(|a| match a {
                DrsArg::Prop(b) => Some(b),
                DrsArg::Ref(_) => None,
            })
            .collect(),
        DrsCond::Neg(b) => vec![b],
        DrsCond::Implies(a, b) | DrsCond::Gen(a, b) | DrsCond::Diamond { restr: a, scope: b, .. } => {
            vec![a, b]
        }
        _ => Vec::new(),
    }
}

pub fn is_distribution(c: &DrsCond) -> bool {
    matches!(c, DrsCond::Implies(r, _) if r.conds.iter().any(|k| matches!(k, DrsCond::Member { .. })))
}

pub fn is_every(c: &DrsCond) -> bool {
    matches!(c, DrsCond::Implies(..)) && !is_distribution(c)
}

pub fn is_diamond(c: &DrsCond) -> bool {
    matches!(c, DrsCond::Diamond { .. })
}

pub fn is_belief(c: &DrsCond) -> bool {
    matches!(c, DrsCond::Atom { args, .. } if args.iter().any(|a| matches!(a, DrsArg::Prop(_))))
}

fn any_in(b: &DrsBox, p: &dyn Fn(&DrsCond) -> bool) -> bool {
    b.conds.iter().any(|c| p(c) || child_boxes(c).into_iter().any(|k| any_in(k, p)))
}

/// Some condition matching `outer` has a condition matching `inner` inside
/// one of its sub-boxes.
pub fn outscopes(b: &DrsBox, outer: &dyn Fn(&DrsCond) -> bool, inner: &dyn Fn(&DrsCond) -> bool) -> bool {
    b.conds.iter().any(|c| {
        (outer(c) && child_boxes(c).into_iter().any(|k| any_in(k, inner)))
            || child_boxes(c).into_iter().any(|k| outscopes(k, outer, inner))
    })
}

/// Whether some condition matching `p` sits directly in `b`.
pub fn at_top(b: &DrsBox, p: &dyn Fn(&DrsCond) -> bool) -> bool {
    b.conds.iter().any(p)
}

/// Standard DRT accessibility over the rendered box tree.
pub fn drs_closed(b: &DrsBox) -> bool {
    fn walk(b: &DrsBox, outer: &BTreeSet<scopeforge::udrs::Referent>) -> bool {
        let mut acc = outer.clone();
        acc.extend(b.universe.iter().copied());
        for c in &b.conds {
            let ok = match c {
                DrsCond::Atom { args, .. } => args.iter().all(|a| match a {
                    DrsArg::Ref(r) => acc.contains(r),
                    DrsArg::Prop(p) => walk(p, &acc),
                }),
                DrsCond::Member { elem, group } => acc.contains(elem) && acc.contains(group),
                DrsCond::Card { group, .. } => acc.contains(group),
                DrsCond::Neg(i) => walk(i, &acc),
                DrsCond::Implies(r, s) | DrsCond::Gen(r, s) | DrsCond::Diamond { restr: r, scope: s, .. } => {
                    let mut inner = acc.clone();
                    inner.extend(r.universe.iter().copied());
                    walk(r, &acc) && walk(s, &inner)
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }
    walk(b, &BTreeSet::new())
}

#[derive(Clone, Copy)]
struct Unit {
    max: Label,
    scope: Label,
}

/// A random consistent store with at most `max_scoped` scope-bearing or
/// potentially scope-bearing units (at most two plurals) sharing one verb
/// atom, shaped like the output of the grammar.
pub fn random_store<R: Rng>(rng: &mut R, max_scoped: usize) -> UdrsStore {
    let mut u = UdrsStore::empty();
    let mut g = u.id_gen();
    let top = u.top;
    let v = g.label();
    let mut args = Vec::new();
    let mut units: Vec<Unit> = Vec::new();
    let mut plurals = 0;
    let n = rng.gen_range(1..=max_scoped);
    let add = |u: &mut UdrsStore, c: SubordConstraint, p: Provenance| u.insert_constraint(c, p).unwrap();
    for i in 0..n {
        let mut kind = rng.gen_range(0..4);
        if kind == 3 && plurals == 2 {
            kind = 0;
        }
        match kind {
            0 | 1 => {
                let (l, r, s) = (g.label(), g.label(), g.label());
                let x = g.individual();
                let body = if kind == 0 {
                    CondBody::Implies { restr: r, scope: s }
                } else {
                    CondBody::Diamond { at_least: 1, restr: r, scope: s }
                };
                u.insert_condition(Condition::new(l, body)).unwrap();
                u.insert_condition(Condition::new(r, CondBody::Intro(x))).unwrap();
                u.insert_condition(Condition::new(r, CondBody::Atom { rel: format!("p{i}"), args: vec![Arg::Ref(x)] }))
                    .unwrap();
                add(&mut u, SubordConstraint::Lt(r, l), Provenance::Lex);
                add(&mut u, SubordConstraint::Lt(s, l), Provenance::Lex);
                add(&mut u, SubordConstraint::Leq(l, top), Provenance::QuantifierScope);
                add(&mut u, SubordConstraint::Leq(v, s), Provenance::ClosedFormula);
                args.push(Arg::Ref(x));
                units.push(Unit { max: l, scope: s });
            }
            2 => {
                let (l, inner) = (g.label(), g.label());
                u.insert_condition(Condition::new(l, CondBody::Neg(inner))).unwrap();
                add(&mut u, SubordConstraint::Lt(inner, l), Provenance::Lex);
                add(&mut u, SubordConstraint::Leq(l, top), Provenance::QuantifierScope);
                add(&mut u, SubordConstraint::Leq(v, inner), Provenance::ClosedFormula);
                units.push(Unit { max: l, scope: inner });
            }
            _ => {
                plurals += 1;
                let (l1, l12) = (g.label(), g.label());
                let xs = g.group();
                let slot = g.slot();
                u.insert_condition(Condition::new(l1, CondBody::Intro(xs))).unwrap();
                u.insert_condition(Condition::new(l1, CondBody::Atom { rel: format!("q{i}"), args: vec![Arg::Ref(xs)] }))
                    .unwrap();
                add(&mut u, SubordConstraint::Leq(l12, l1), Provenance::Lex);
                add(&mut u, SubordConstraint::Leq(v, l12), Provenance::ClosedFormula);
                add(
                    &mut u,
                    SubordConstraint::cond(l12, l1, SubordConstraint::Leq(l1, top)),
                    Provenance::QuantifierScope,
                );
                let mut s = DeferredSlot::new(slot);
                s.source_ls = Some(Ls::new(l1, l12));
                u.insert_slot(s);
                args.push(Arg::Slot(slot));
                units.push(Unit { max: l1, scope: l12 });
            }
        }
    }
    if n <= 3 && rng.gen_bool(0.5) {
        let l = g.label();
        let y = g.individual();
        u.insert_condition(Condition::new(l, CondBody::Intro(y))).unwrap();
        u.insert_condition(Condition::new(l, CondBody::Atom { rel: "r".into(), args: vec![Arg::Ref(y)] }))
            .unwrap();
        add(&mut u, SubordConstraint::Leq(v, l), Provenance::ClosedFormula);
        args.push(Arg::Ref(y));
    }
    u.insert_condition(Condition::new(v, CondBody::Atom { rel: "v".into(), args })).unwrap();
    for _ in 0..rng.gen_range(0..=2) {
        let a = units[rng.gen_range(0..units.len())];
        let b = units[rng.gen_range(0..units.len())];
        if a.max != b.max {
            if let Ok(next) = u.add_constraint_with(SubordConstraint::Leq(a.max, b.scope), Provenance::ComplementScope) {
                u = next;
            }
        }
    }
    u.reserve_ids(&g);
    u
}

/// A random subordination constraint over the labels of `u`.
pub fn random_constraint<R: Rng>(rng: &mut R, u: &UdrsStore) -> SubordConstraint {
    let labels: Vec<Label> = u.labels().into_iter().collect();
    let a = labels[rng.gen_range(0..labels.len())];
    let b = labels[rng.gen_range(0..labels.len())];
    match rng.gen_range(0..4) {
        0 | 1 => SubordConstraint::Leq(a, b),
        2 => SubordConstraint::Lt(a, b),
        _ => SubordConstraint::Eq(a, b),
    }
}
