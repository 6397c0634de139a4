//! Structural isomorphism of stores modulo label and referent renaming.
//!
//! Two stores are isomorphic when there is a bijection on condition labels
//! (fixing top) and on referents that maps the condition sets onto each
//! other, and the closures restricted to condition labels agree.

use std::collections::{BTreeMap, BTreeSet};

use super::{Arg, CondBody, Label, Referent, UdrsStore};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Term {
    Label(Label),
    Ref(Referent),
    Pending,
    Num(u32),
}

#[derive(Clone, Debug)]
struct Shape {
    kind: String,
    terms: Vec<Term>,
}

fn shapes(u: &UdrsStore) -> Vec<Shape> {
    u.conds()
        .map(|c| {
            let (kind, mut rest) = match &c.body {
                CondBody::Atom { rel, args } => (
                    format!("atom:{}:{}", rel, args.len()),
                    args.iter()
                        .map(|a| match a {
                            Arg::Prop(l) => Term::Label(*l),
                            other => u.arg_referent(other).map(Term::Ref).unwrap_or(Term::Pending),
                        })
                        .collect(),
                ),
                CondBody::Intro(r) => ("intro".to_string(), vec![Term::Ref(*r)]),
                CondBody::Implies { restr, scope } => {
                    ("implies".to_string(), vec![Term::Label(*restr), Term::Label(*scope)])
                }
                CondBody::Neg(l) => ("neg".to_string(), vec![Term::Label(*l)]),
                CondBody::Diamond { at_least, restr, scope } => (
                    "diamond".to_string(),
                    vec![Term::Num(*at_least), Term::Label(*restr), Term::Label(*scope)],
                ),
                CondBody::Gen { restr, scope } => {
                    ("gen".to_string(), vec![Term::Label(*restr), Term::Label(*scope)])
                }
                CondBody::Member { elem, group } => {
                    ("member".to_string(), vec![Term::Ref(*elem), Term::Ref(*group)])
                }
                CondBody::Card { group, n } => {
                    ("card".to_string(), vec![Term::Ref(*group), Term::Num(*n)])
                }
            };
            let mut terms = vec![Term::Label(c.label)];
            terms.append(&mut rest);
            Shape { kind, terms }
        })
        .collect()
}

#[derive(Clone, Default)]
struct Mapping {
    labels: BTreeMap<Label, Label>,
    labels_rev: BTreeMap<Label, Label>,
    refs: BTreeMap<Referent, Referent>,
    refs_rev: BTreeMap<Referent, Referent>,
}

impl Mapping {
    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        match (a, b) {
            (Term::Pending, Term::Pending) => true,
            (Term::Num(x), Term::Num(y)) => x == y,
            (Term::Label(x), Term::Label(y)) => {
                match (self.labels.get(x), self.labels_rev.get(y)) {
                    (Some(m), _) => m == y,
                    (None, Some(_)) => false,
                    (None, None) => {
                        self.labels.insert(*x, *y);
                        self.labels_rev.insert(*y, *x);
                        true
                    }
                }
            }
            (Term::Ref(x), Term::Ref(y)) => {
                if x.sort != y.sort {
                    return false;
                }
                match (self.refs.get(x), self.refs_rev.get(y)) {
                    (Some(m), _) => m == y,
                    (None, Some(_)) => false,
                    (None, None) => {
                        self.refs.insert(*x, *y);
                        self.refs_rev.insert(*y, *x);
                        true
                    }
                }
            }
            _ => false,
        }
    }
}

fn cond_labels(u: &UdrsStore) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    out.insert(u.top);
    for c in u.conds() {
        out.insert(c.label);
        out.extend(c.children());
    }
    out
}

/// Returns the label mapping from `a` to `b` if the stores are isomorphic.
pub fn isomorphism(a: &UdrsStore, b: &UdrsStore) -> Option<BTreeMap<Label, Label>> {
    let sa = shapes(a);
    let sb = shapes(b);
    if sa.len() != sb.len() {
        return None;
    }
    let la = cond_labels(a);
    let lb = cond_labels(b);
    if la.len() != lb.len() {
        return None;
    }
    let ca = a.closure();
    let cb = b.closure();
    let mut init = Mapping::default();
    init.unify(&Term::Label(a.top), &Term::Label(b.top));
    let mut used = vec![false; sb.len()];
    let mut found = None;
    search(&sa, &sb, 0, &mut used, init, &mut |m| {
        let ok = la.iter().all(|x| {
            la.iter().all(|y| {
                let (fx, fy) = (m.labels[x], m.labels[y]);
                ca.leq(*x, *y) == cb.leq(fx, fy) && ca.lt(*x, *y) == cb.lt(fx, fy)
            })
        });
        if ok {
            found = Some(m.labels.clone());
        }
        ok
    });
    found
}

pub fn is_isomorphic(a: &UdrsStore, b: &UdrsStore) -> bool {
    isomorphism(a, b).is_some()
}

fn search(
    sa: &[Shape],
    sb: &[Shape],
    i: usize,
    used: &mut [bool],
    m: Mapping,
    accept: &mut dyn FnMut(&Mapping) -> bool,
) -> bool {
    if i == sa.len() {
        return accept(&m);
    }
    for j in 0..sb.len() {
        if used[j] || sb[j].kind != sa[i].kind || sb[j].terms.len() != sa[i].terms.len() {
            continue;
        }
        let mut next = m.clone();
        if sa[i].terms.iter().zip(&sb[j].terms).all(|(x, y)| next.unify(x, y)) {
            used[j] = true;
            if search(sa, sb, i + 1, used, next, accept) {
                return true;
            }
            used[j] = false;
        }
    }
    false
}
