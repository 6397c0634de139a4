//! Fully scoped DRSs built from a placement, with canonical naming.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::udrs::{text, Arg, CondBody, Label, Referent, Sort, UdrsStore};

use super::place::{collective_labels, Placement};

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct DrsBox {
    pub universe: Vec<Referent>,
    pub conds: Vec<DrsCond>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DrsArg {
    Ref(Referent),
    Prop(DrsBox),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DrsCond {
    Atom { rel: String, args: Vec<DrsArg> },
    Member { elem: Referent, group: Referent },
    Card { group: Referent, n: u32 },
    Neg(DrsBox),
    Implies(DrsBox, DrsBox),
    Diamond { at_least: u32, restr: DrsBox, scope: DrsBox },
    Gen(DrsBox, DrsBox),
}

/// One fully scoped reading.
#[derive(Clone, Debug)]
pub struct Reading {
    pub root: DrsBox,
    pub placement: Placement,
    /// Canonical box notation; two readings are the same iff their texts are.
    pub text: String,
    /// Canonical name of every referent.
    pub names: BTreeMap<Referent, String>,
}

impl PartialEq for Reading {
    fn eq(&self, other: &Self) -> bool {
        self.text == other.text
    }
}

impl Eq for Reading {}

impl DrsBox {
    pub fn is_empty(&self) -> bool {
        self.universe.is_empty() && self.conds.is_empty()
    }

    /// Whether any condition is a generic duplex.
    pub fn has_gen(&self) -> bool {
        self.conds.iter().any(|c| match c {
            DrsCond::Gen(..) => true,
            DrsCond::Neg(b) => b.has_gen(),
            DrsCond::Implies(a, b) | DrsCond::Diamond { restr: a, scope: b, .. } => a.has_gen() || b.has_gen(),
            DrsCond::Atom { args, .. } => args.iter().any(|a| matches!(a, DrsArg::Prop(b) if b.has_gen())),
            _ => false,
        })
    }
}

struct Builder<'a> {
    u: &'a UdrsStore,
    /// Labels whose conditions go into each box.
    members: BTreeMap<Label, Vec<Label>>,
}

impl Builder<'_> {
    fn build(&self, hole: Label) -> DrsBox {
        let mut b = DrsBox::default();
        for l in self.members.get(&hole).into_iter().flatten() {
            for c in self.u.conds_at(*l) {
                match &c.body {
                    CondBody::Intro(r) => b.universe.push(*r),
                    CondBody::Atom { rel, args } => {
                        let args = args
                            .iter()
                            .map(|a| match a {
                                Arg::Prop(p) => DrsArg::Prop(self.build(*p)),
                                other => DrsArg::Ref(self.referent(other)),
                            })
                            .collect();
                        b.conds.push(DrsCond::Atom { rel: rel.clone(), args });
                    }
                    CondBody::Member { elem, group } => {
                        b.conds.push(DrsCond::Member { elem: *elem, group: *group })
                    }
                    CondBody::Card { group, n } => b.conds.push(DrsCond::Card { group: *group, n: *n }),
                    CondBody::Neg(i) => b.conds.push(DrsCond::Neg(self.build(*i))),
                    CondBody::Implies { restr, scope } => {
                        b.conds.push(DrsCond::Implies(self.build(*restr), self.build(*scope)))
                    }
                    CondBody::Gen { restr, scope } => {
                        b.conds.push(DrsCond::Gen(self.build(*restr), self.build(*scope)))
                    }
                    CondBody::Diamond { at_least, restr, scope } => b.conds.push(DrsCond::Diamond {
                        at_least: *at_least,
                        restr: self.build(*restr),
                        scope: self.build(*scope),
                    }),
                }
            }
        }
        b
    }

    fn referent(&self, a: &Arg) -> Referent {
        match a {
            Arg::Slot(s) => self
                .u
                .slot(*s)
                .and_then(|s| s.resolved_to)
                .expect("slots are resolved before rendering"),
            other => self.u.arg_referent(other).expect("referent argument"),
        }
    }
}

/// Builds the DRS described by `p`. Material of collectively read plurals
/// goes into the top box whatever its placement.
pub(crate) fn render(u: &UdrsStore, p: Placement) -> Reading {
    let hoisted = collective_labels(u);
    let mut members: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    let with_conds: BTreeSet<Label> = u.conds().map(|c| c.label).collect();
    for l in with_conds {
        let b = if hoisted.contains(&l) { u.top } else { p.boxes.get(&l).copied().unwrap_or(l) };
        members.entry(b).or_default().push(l);
    }
    let root = Builder { u, members }.build(u.top);
    let names = canonical_names(&root);
    let text = box_text(&root, &names, 0);
    Reading { root, placement: p, text, names }
}

fn shape_arg(a: &DrsArg, names: &BTreeMap<Referent, String>) -> String {
    match a {
        DrsArg::Ref(r) => names.get(r).cloned().unwrap_or_else(|| "_".into()),
        DrsArg::Prop(b) => inline(b, names),
    }
}

fn ref_name(r: &Referent, names: &BTreeMap<Referent, String>) -> String {
    names.get(r).cloned().unwrap_or_else(|| "_".into())
}

fn inline(b: &DrsBox, names: &BTreeMap<Referent, String>) -> String {
    let mut u: Vec<String> = b.universe.iter().map(|r| ref_name(r, names)).collect();
    u.sort();
    let mut cs: Vec<String> = b.conds.iter().map(|c| cond_inline(c, names)).collect();
    cs.sort();
    format!("[{}|{}]", u.join(" "), cs.join(","))
}

fn cond_inline(c: &DrsCond, names: &BTreeMap<Referent, String>) -> String {
    match c {
        DrsCond::Atom { rel, args } => {
            let a: Vec<String> = args.iter().map(|a| shape_arg(a, names)).collect();
            format!("{rel}({})", a.join(","))
        }
        DrsCond::Member { elem, group } => format!("{} in {}", ref_name(elem, names), ref_name(group, names)),
        DrsCond::Card { group, n } => format!("|{}| = {n}", ref_name(group, names)),
        DrsCond::Neg(b) => format!("not {}", inline(b, names)),
        DrsCond::Implies(a, b) => format!("{} => {}", inline(a, names), inline(b, names)),
        DrsCond::Gen(a, b) => format!("{} GEN {}", inline(a, names), inline(b, names)),
        DrsCond::Diamond { at_least, restr, scope } => {
            format!("{} <atleast{at_least}> {}", inline(restr, names), inline(scope, names))
        }
    }
}

fn preorder_refs(c: &DrsCond, out: &mut Vec<Referent>) {
    fn boxed(b: &DrsBox, out: &mut Vec<Referent>) {
        for c in &b.conds {
            preorder_refs(c, out);
        }
    }
    match c {
        DrsCond::Atom { args, .. } => {
            for a in args {
                match a {
                    DrsArg::Ref(r) => out.push(*r),
                    DrsArg::Prop(b) => boxed(b, out),
                }
            }
        }
        DrsCond::Member { elem, group } => out.extend([*elem, *group]),
        DrsCond::Card { group, .. } => out.push(*group),
        DrsCond::Neg(b) => boxed(b, out),
        DrsCond::Implies(a, b) | DrsCond::Gen(a, b) | DrsCond::Diamond { restr: a, scope: b, .. } => {
            boxed(a, out);
            boxed(b, out);
        }
    }
}

fn child_boxes(c: &DrsCond) -> Vec<&DrsBox> {
    match c {
        DrsCond::Atom { args, .. } => args
            .iter()
            .filter_map(|a| match a {
                DrsArg::Prop(b) => Some(b),
                _ => None,
            })
            .collect(),
        DrsCond::Neg(b) => vec![b],
        DrsCond::Implies(a, b) | DrsCond::Gen(a, b) | DrsCond::Diamond { restr: a, scope: b, .. } => vec![a, b],
        _ => Vec::new(),
    }
}

/// Breadth-first naming: within a box, conditions are ordered by their
/// shape with still-unnamed referents blanked, and universe referents are
/// named in order of first use.
fn canonical_names(root: &DrsBox) -> BTreeMap<Referent, String> {
    let mut names: BTreeMap<Referent, String> = BTreeMap::new();
    let mut counts: BTreeMap<Sort, usize> = BTreeMap::new();
    let mut queue: VecDeque<&DrsBox> = VecDeque::from([root]);
    while let Some(b) = queue.pop_front() {
        let mut conds: Vec<&DrsCond> = b.conds.iter().collect();
        conds.sort_by_cached_key(|c| cond_inline(c, &names));
        let mut order: Vec<Referent> = Vec::new();
        for c in &conds {
            let mut rs = Vec::new();
            preorder_refs(c, &mut rs);
            for r in rs {
                if b.universe.contains(&r) && !order.contains(&r) {
                    order.push(r);
                }
            }
        }
        let mut rest: Vec<Referent> = b.universe.iter().filter(|r| !order.contains(r)).copied().collect();
        rest.sort();
        order.extend(rest);
        for r in order {
            if names.contains_key(&r) {
                continue;
            }
            let n = counts.entry(r.sort).or_insert(0);
            names.insert(r, text::nth_referent_name(r.sort, *n));
            *n += 1;
        }
        for c in conds {
            queue.extend(child_boxes(c));
        }
    }
    names
}

fn has_nested(b: &DrsBox) -> bool {
    b.conds.iter().any(|c| !child_boxes(c).is_empty())
}

fn box_text(b: &DrsBox, names: &BTreeMap<Referent, String>, depth: usize) -> String {
    let mut u: Vec<String> = b.universe.iter().map(|r| ref_name(r, names)).collect();
    u.sort();
    let head = if u.is_empty() { "[ |".to_string() } else { format!("[ {} |", u.join(" ")) };
    if !has_nested(b) {
        let mut cs: Vec<String> = b.conds.iter().map(|c| cond_inline(c, names)).collect();
        cs.sort();
        return if cs.is_empty() { format!("{head} ]") } else { format!("{head} {} ]", cs.join(", ")) };
    }
    let pad = "  ".repeat(depth + 1);
    let mut cs: Vec<String> = b.conds.iter().map(|c| cond_text(c, names, depth + 1)).collect();
    cs.sort();
    let mut out = head;
    for c in cs {
        let _ = write!(out, "\n{pad}{c}");
    }
    let _ = write!(out, "\n{}]", "  ".repeat(depth));
    out
}

fn cond_text(c: &DrsCond, names: &BTreeMap<Referent, String>, depth: usize) -> String {
    match c {
        DrsCond::Atom { rel, args } => {
            let a: Vec<String> = args
                .iter()
                .map(|a| match a {
                    DrsArg::Ref(r) => ref_name(r, names),
                    DrsArg::Prop(b) => box_text(b, names, depth),
                })
                .collect();
            format!("{rel}({})", a.join(","))
        }
        DrsCond::Neg(b) => format!("not {}", box_text(b, names, depth)),
        DrsCond::Implies(a, b) => format!("{} => {}", box_text(a, names, depth), box_text(b, names, depth)),
        DrsCond::Gen(a, b) => format!("{} GEN {}", box_text(a, names, depth), box_text(b, names, depth)),
        DrsCond::Diamond { at_least, restr, scope } => format!(
            "{} <atleast{at_least}> {}",
            box_text(restr, names, depth),
            box_text(scope, names, depth)
        ),
        other => cond_inline(other, names),
    }
}
