//! Placements of labels into the boxes of a scoped DRS, their validity and
//! the two enumerators.

use std::collections::{BTreeMap, BTreeSet};

use crate::udrs::{Arg, CondBody, Label, Referent, Sort, SubordConstraint, UdrsStore};

use super::render::{render, Reading};
use super::{plural_branches, promote_conditionals, settle_slots, DisambigError, PluralPolicy};

/// Upper bound on the number of assignments the exhaustive oracle visits.
pub const BRUTE_FORCE_LIMIT: u128 = 5_000_000;

/// Maps every label to the box (a hole label) it ends up in.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Placement {
    pub boxes: BTreeMap<Label, Label>,
}

/// The fixed part of a placement problem: holes and who owns them.
pub(crate) struct Frame {
    pub top: Label,
    pub holes: Vec<Label>,
    /// Owner label of each hole other than top.
    pub owner: BTreeMap<Label, Label>,
    pub free: Vec<Label>,
}

impl Frame {
    pub fn new(u: &UdrsStore) -> Frame {
        let mut holes = vec![u.top];
        let mut owner = BTreeMap::new();
        for c in u.conds() {
            for ch in c.children() {
                if ch != u.top && !owner.contains_key(&ch) {
                    owner.insert(ch, c.label);
                    holes.push(ch);
                }
            }
        }
        let hole_set: BTreeSet<Label> = holes.iter().copied().collect();
        let free = u.labels().into_iter().filter(|l| !hole_set.contains(l)).collect();
        Frame { top: u.top, holes, owner, free }
    }

    fn is_hole(&self, l: Label) -> bool {
        l == self.top || self.owner.contains_key(&l)
    }
}

/// Partial box assignment with tree queries.
pub(crate) struct Boxes<'a> {
    frame: &'a Frame,
    pub at: BTreeMap<Label, Label>,
}

impl<'a> Boxes<'a> {
    pub fn new(frame: &'a Frame) -> Self {
        Boxes { frame, at: BTreeMap::new() }
    }

    pub fn box_of(&self, l: Label) -> Option<Label> {
        if self.frame.is_hole(l) {
            Some(l)
        } else {
            self.at.get(&l).copied()
        }
    }

    /// Path from the box of `l` up to top, or `None` if some owner on the
    /// way is unplaced. `Err` on a cycle.
    pub fn chain(&self, l: Label) -> Result<Option<Vec<Label>>, ()> {
        let Some(mut b) = self.box_of(l) else { return Ok(None) };
        let mut path = vec![b];
        while b != self.frame.top {
            let o = self.frame.owner[&b];
            match self.box_of(o) {
                None => return Ok(None),
                Some(p) => b = p,
            }
            if path.contains(&b) {
                return Err(());
            }
            path.push(b);
        }
        Ok(Some(path))
    }

    /// Truth of a constraint, `None` while undetermined.
    pub fn holds(&self, c: &SubordConstraint) -> Result<Option<bool>, ()> {
        let rel = |a: Label, b: Label, strict: bool| -> Result<Option<bool>, ()> {
            let (Some(pa), Some(bb)) = (self.chain(a)?, self.box_of(b)) else { return Ok(None) };
            if strict {
                Ok(Some(pa[1..].contains(&bb)))
            } else {
                Ok(Some(pa.contains(&bb)))
            }
        };
        match c {
            SubordConstraint::Leq(a, b) => rel(*a, *b, false),
            SubordConstraint::Lt(a, b) => rel(*a, *b, true),
            SubordConstraint::Eq(a, b) => Ok(match (self.box_of(*a), self.box_of(*b)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            }),
            SubordConstraint::Cond { ante, cons } => match rel(ante.0, ante.1, true)? {
                None => Ok(None),
                Some(false) => Ok(Some(true)),
                Some(true) => self.holds(cons),
            },
        }
    }
}

fn referent_of(u: &UdrsStore, a: &Arg) -> Result<Option<Referent>, DisambigError> {
    match a {
        Arg::Slot(s) => match u.slot(*s) {
            Some(slot) => slot.resolved_to.map(Some).ok_or(DisambigError::UnresolvedSlot(s.0)),
            None => Err(DisambigError::UnresolvedSlot(s.0)),
        },
        other => Ok(u.arg_referent(other)),
    }
}

/// Every referent occurrence sits in a box from which its introduction is
/// accessible.
pub fn accessible(u: &UdrsStore, p: &Placement) -> Result<bool, DisambigError> {
    let frame = Frame::new(u);
    let mut bx = Boxes::new(&frame);
    bx.at = p.boxes.clone();
    let mut intro_box: BTreeMap<Referent, Label> = BTreeMap::new();
    let mut restr_of_scope: BTreeMap<Label, Label> = BTreeMap::new();
    for c in u.conds() {
        match c.body {
            CondBody::Intro(r) => {
                if let Some(b) = bx.box_of(c.label) {
                    intro_box.insert(r, b);
                }
            }
            CondBody::Implies { restr, scope }
            | CondBody::Diamond { restr, scope, .. }
            | CondBody::Gen { restr, scope } => {
                restr_of_scope.insert(scope, restr);
            }
            _ => {}
        }
    }
    for c in u.conds() {
        let mut used = Vec::new();
        match &c.body {
            CondBody::Atom { args, .. } => {
                for a in args {
                    used.extend(referent_of(u, a)?);
                }
            }
            CondBody::Member { elem, group } => used.extend([*elem, *group]),
            CondBody::Card { group, .. } => used.push(*group),
            _ => {}
        }
        if used.is_empty() {
            continue;
        }
        let Ok(Some(path)) = bx.chain(c.label) else { return Ok(false) };
        let mut visible: BTreeSet<Label> = path.iter().copied().collect();
        for b in &path {
            if let Some(r) = restr_of_scope.get(b) {
                visible.insert(*r);
            }
        }
        for r in used {
            match intro_box.get(&r) {
                Some(b) if visible.contains(b) => {}
                _ => return Ok(false),
            }
        }
    }
    Ok(true)
}

fn check_all(bx: &Boxes<'_>, cs: &[SubordConstraint]) -> bool {
    cs.iter().all(|c| matches!(bx.holds(c), Ok(Some(true))))
}

fn tree_ok(bx: &Boxes<'_>, frame: &Frame) -> bool {
    frame.holes.iter().all(|h| matches!(bx.chain(*h), Ok(Some(_))))
}

/// Placements that satisfy the subordination constraints, before the
/// accessibility filter. Backtracks over `=`-classes of free labels,
/// checking each constraint as soon as it is decided.
pub fn candidate_placements(u: &UdrsStore) -> Result<Vec<Placement>, DisambigError> {
    let frame = Frame::new(u);
    let cl = u.closure();
    let constraints: Vec<SubordConstraint> = u.constraints().cloned().collect();

    // Classes of free labels; a class containing a hole is pinned to it.
    let mut pinned: BTreeMap<Label, Label> = BTreeMap::new();
    let mut groups: BTreeMap<usize, Vec<Label>> = BTreeMap::new();
    for l in &frame.free {
        let cls = cl.class_of(*l).expect("label in closure");
        let hole = cl.classes()[cls].iter().copied().filter(|m| frame.is_hole(*m)).collect::<Vec<_>>();
        match hole.as_slice() {
            [] => groups.entry(cls).or_default().push(*l),
            [h] => {
                pinned.insert(*l, *h);
            }
            _ => return Ok(Vec::new()),
        }
    }
    let groups: Vec<Vec<Label>> = groups.into_values().collect();
    let options: Vec<Vec<Label>> = groups
        .iter()
        .map(|g| {
            frame
                .holes
                .iter()
                .copied()
                .filter(|h| !cl.lt(*h, g[0]))
                .collect()
        })
        .collect();

    let mut bx = Boxes::new(&frame);
    bx.at = pinned;
    let mut out = Vec::new();
    search(&frame, &groups, &options, &constraints, 0, &mut bx, &mut out);
    Ok(out)
}

fn search(
    frame: &Frame,
    groups: &[Vec<Label>],
    options: &[Vec<Label>],
    cs: &[SubordConstraint],
    k: usize,
    bx: &mut Boxes<'_>,
    out: &mut Vec<Placement>,
) {
    if cs.iter().any(|c| matches!(bx.holds(c), Ok(Some(false)) | Err(()))) {
        return;
    }
    if k == groups.len() {
        if tree_ok(bx, frame) && check_all(bx, cs) {
            out.push(full_placement(bx, frame));
        }
        return;
    }
    for h in &options[k] {
        for l in &groups[k] {
            bx.at.insert(*l, *h);
        }
        search(frame, groups, options, cs, k + 1, bx, out);
    }
    for l in &groups[k] {
        bx.at.remove(l);
    }
}

fn full_placement(bx: &Boxes<'_>, frame: &Frame) -> Placement {
    let mut boxes = BTreeMap::new();
    for h in &frame.holes {
        boxes.insert(*h, *h);
    }
    for (l, b) in &bx.at {
        boxes.insert(*l, *b);
    }
    Placement { boxes }
}

fn prepare(u: &UdrsStore, policy: PluralPolicy) -> Result<Vec<UdrsStore>, DisambigError> {
    let mut out = Vec::new();
    for mut s in plural_branches(u, policy)? {
        settle_slots(&mut s)?;
        if let Some(p) = s.slots().find(|s| !s.is_resolved()) {
            return Err(DisambigError::UnresolvedSlot(p.id.0));
        }
        out.push(s);
    }
    Ok(out)
}

fn collect(into: &mut BTreeMap<String, Reading>, r: Reading) {
    into.entry(r.text.clone()).or_insert(r);
}

/// All readings of `u`, one per distinct DRS, in canonical order.
pub fn enumerate_readings(u: &UdrsStore, policy: PluralPolicy) -> Result<Vec<Reading>, DisambigError> {
    u.check_consistent()?;
    let mut found = BTreeMap::new();
    for s in prepare(u, policy)? {
        let s = promote_conditionals(&s)?;
        for p in candidate_placements(&s)? {
            if accessible(&s, &p)? {
                collect(&mut found, render(&s, p));
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Exhaustive oracle: tries every assignment of free labels to holes and
/// checks all constraints directly, conditionals as material implications.
pub fn brute_force_readings(u: &UdrsStore, policy: PluralPolicy) -> Result<Vec<Reading>, DisambigError> {
    let mut found = BTreeMap::new();
    for s in prepare(u, policy)? {
        let frame = Frame::new(&s);
        let constraints: Vec<SubordConstraint> = s.constraints().cloned().collect();
        // Union of labels linked by a literal `=`.
        let mut rep: BTreeMap<Label, Label> = s.labels().into_iter().map(|l| (l, l)).collect();
        fn find(rep: &BTreeMap<Label, Label>, mut l: Label) -> Label {
            while rep[&l] != l {
                l = rep[&l];
            }
            l
        }
        for c in &constraints {
            if let SubordConstraint::Eq(a, b) = c {
                let (ra, rb) = (find(&rep, *a), find(&rep, *b));
                if ra != rb {
                    let (lo, hi) = if frame.is_hole(rb) { (ra, rb) } else { (rb, ra) };
                    rep.insert(lo, hi);
                }
            }
        }
        let mut units: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
        for l in &frame.free {
            units.entry(find(&rep, *l)).or_default().push(*l);
        }
        let units: Vec<(Label, Vec<Label>)> = units.into_iter().collect();
        let free_units: Vec<&Vec<Label>> =
            units.iter().filter(|(r, _)| !frame.is_hole(*r)).map(|(_, v)| v).collect();
        let n = frame.holes.len() as u128;
        let total = n.checked_pow(free_units.len() as u32).unwrap_or(u128::MAX);
        if total > BRUTE_FORCE_LIMIT {
            return Err(DisambigError::ScaleExceeded(total));
        }
        let mut base = Boxes::new(&frame);
        for (r, ls) in &units {
            if frame.is_hole(*r) {
                for l in ls {
                    base.at.insert(*l, *r);
                }
            }
        }
        for code in 0..total {
            let mut bx = Boxes::new(&frame);
            bx.at = base.at.clone();
            let mut c = code;
            for unit in &free_units {
                let h = frame.holes[(c % n) as usize];
                c /= n;
                for l in unit.iter() {
                    bx.at.insert(*l, h);
                }
            }
            if !tree_ok(&bx, &frame) || !check_all(&bx, &constraints) {
                continue;
            }
            let p = full_placement(&bx, &frame);
            if accessible(&s, &p)? {
                collect(&mut found, render(&s, p));
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Whether `r` is a group referent introduced by a plural whose reading
/// came out collective; such material is rendered in the top box.
pub(crate) fn collective_labels(u: &UdrsStore) -> BTreeSet<Label> {
    let mut out = BTreeSet::new();
    for c in u.conds() {
        if let CondBody::Intro(r) = c.body {
            if r.sort == Sort::Group
                && u.classify(c.label) == crate::udrs::ScopeClass::NotScopeBearing
            {
                out.insert(c.label);
            }
        }
    }
    out
}
