//! Labels, labeled conditions and subordination constraints.
//!
//! A [`UdrsStore`] is a set of labeled partial DRS conditions together with a
//! set of subordination constraints over their labels. Stores are values:
//! every operation returns a new store and never drops information from its
//! inputs.

mod closure;
pub mod iso;
pub mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub use closure::Closure;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Label(pub u32);

impl Label {
    pub const TOP: Label = Label(0);
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Sort {
    Individual,
    Group,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Referent {
    pub id: u32,
    pub sort: Sort,
}

impl Referent {
    pub fn individual(id: u32) -> Self {
        Referent { id, sort: Sort::Individual }
    }

    pub fn group(id: u32) -> Self {
        Referent { id, sort: Sort::Group }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SlotId(pub u32);

/// An argument position of an atomic condition.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Arg {
    Ref(Referent),
    /// Filled by `dref_res` once the contributing NP is disambiguated.
    Slot(SlotId),
    /// A propositional argument: the label of an embedded sub-DRS.
    Prop(Label),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CondBody {
    Atom { rel: String, args: Vec<Arg> },
    Intro(Referent),
    Implies { restr: Label, scope: Label },
    Neg(Label),
    /// Generalized-quantifier duplex; `at_least` is the minimum number of
    /// restrictor verifiers that must extend to the scope.
    Diamond { at_least: u32, restr: Label, scope: Label },
    Gen { restr: Label, scope: Label },
    Member { elem: Referent, group: Referent },
    /// Cardinality of a group referent (numeral plurals).
    Card { group: Referent, n: u32 },
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Condition {
    pub label: Label,
    pub body: CondBody,
}

impl Condition {
    pub fn new(label: Label, body: CondBody) -> Self {
        Condition { label, body }
    }

    /// Labels of the sub-DRSs this condition embeds.
    pub fn children(&self) -> Vec<Label> {
        match &self.body {
            CondBody::Implies { restr, scope }
            | CondBody::Diamond { restr, scope, .. }
            | CondBody::Gen { restr, scope } => vec![*restr, *scope],
            CondBody::Neg(inner) => vec![*inner],
            CondBody::Atom { args, .. } => args
                .iter()
                .filter_map(|a| match a {
                    Arg::Prop(l) => Some(*l),
                    _ => None,
                })
                .collect(),
            _ => Vec::new(),
        }
    }

    pub fn is_duplex(&self) -> bool {
        matches!(
            self.body,
            CondBody::Implies { .. } | CondBody::Diamond { .. } | CondBody::Gen { .. }
        )
    }

    /// Referents occurring in argument positions (not introductions).
    pub fn referent_uses(&self) -> Vec<Referent> {
        match &self.body {
            CondBody::Atom { args, .. } => args
                .iter()
                .filter_map(|a| match a {
                    Arg::Ref(r) => Some(*r),
                    _ => None,
                })
                .collect(),
            CondBody::Member { elem, group } => vec![*elem, *group],
            CondBody::Card { group, .. } => vec![*group],
            _ => Vec::new(),
        }
    }
}

/// A subordination constraint, always written lower-first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SubordConstraint {
    Leq(Label, Label),
    Lt(Label, Label),
    Eq(Label, Label),
    /// `lower < upper` implies the consequent.
    Cond {
        ante: (Label, Label),
        cons: Box<SubordConstraint>,
    },
}

impl SubordConstraint {
    pub fn cond(lower: Label, upper: Label, cons: SubordConstraint) -> Self {
        SubordConstraint::Cond { ante: (lower, upper), cons: Box::new(cons) }
    }

    pub fn is_conditional(&self) -> bool {
        matches!(self, SubordConstraint::Cond { .. })
    }

    /// Number of nested conditional layers.
    pub fn depth(&self) -> usize {
        match self {
            SubordConstraint::Cond { cons, .. } => 1 + cons.depth(),
            _ => 0,
        }
    }

    pub fn labels(&self) -> Vec<Label> {
        match self {
            SubordConstraint::Leq(a, b) | SubordConstraint::Lt(a, b) | SubordConstraint::Eq(a, b) => {
                vec![*a, *b]
            }
            SubordConstraint::Cond { ante, cons } => {
                let mut v = vec![ante.0, ante.1];
                v.extend(cons.labels());
                v
            }
        }
    }
}

/// Which principle introduced a constraint. Used for audit output.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Provenance {
    Lex,
    ClosedFormula,
    QuantifierScope,
    ComplementScope,
    PlDis,
    User,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::Lex => "lex",
            Provenance::ClosedFormula => "IV",
            Provenance::QuantifierScope => "V",
            Provenance::ComplementScope => "VI",
            Provenance::PlDis => "pl_dis",
            Provenance::User => "user",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Distinguished upper and lower bound labels of a phrase.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Ls {
    pub l_max: Label,
    pub l_min: Label,
}

impl Ls {
    pub fn new(l_max: Label, l_min: Label) -> Self {
        Ls { l_max, l_min }
    }

    pub fn top() -> Self {
        Ls { l_max: Label::TOP, l_min: Label::TOP }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeferredSlot {
    pub id: SlotId,
    pub source_ls: Option<Ls>,
    pub trigger: Option<SubordConstraint>,
    pub resolved_to: Option<Referent>,
}

impl DeferredSlot {
    pub fn new(id: SlotId) -> Self {
        DeferredSlot { id, source_ls: None, trigger: None, resolved_to: None }
    }

    pub fn is_resolved(&self) -> bool {
        self.resolved_to.is_some()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ScopeClass {
    ScopeBearing,
    NotScopeBearing,
    PotentiallyScopeBearing,
}

/// Outcome of an argument-slot resolution attempt.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum DrefRes {
    Resolved { referent: Referent, trigger: SubordConstraint },
    Pending,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UdrsError {
    #[error("stores have different top labels")]
    TopMismatch,
    #[error("inconsistent store: label {0} is strictly below itself")]
    InconsistentStore(String),
    #[error("label {0} carries two distinct referent introductions")]
    DuplicateIntro(String),
    #[error("no dref_res clause matches the argument with labels {0}/{1}")]
    NoMatchingClause(String, String),
    #[error("malformed condition: {0}")]
    InvalidCondition(String),
    #[error("conditional constraint nests deeper than two levels")]
    ConditionTooDeep,
    #[error("unknown slot {0}")]
    UnknownSlot(u32),
    #[error("slot {0} is already resolved")]
    SlotAlreadyResolved(u32),
}

/// Monotonic source of fresh ids for one analysis.
#[derive(Clone, Debug)]
pub struct IdGen {
    next: u32,
}

impl IdGen {
    pub fn new() -> Self {
        IdGen { next: 1 }
    }

    pub fn starting_at(next: u32) -> Self {
        IdGen { next: next.max(1) }
    }

    pub fn next_raw(&mut self) -> u32 {
        let id = self.next;
        self.next += 1;
        id
    }

    pub fn label(&mut self) -> Label {
        Label(self.next_raw())
    }

    pub fn individual(&mut self) -> Referent {
        Referent::individual(self.next_raw())
    }

    pub fn group(&mut self) -> Referent {
        Referent::group(self.next_raw())
    }

    pub fn slot(&mut self) -> SlotId {
        SlotId(self.next_raw())
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

impl Default for IdGen {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UdrsStore {
    pub ls: Ls,
    pub top: Label,
    subord: BTreeMap<SubordConstraint, Provenance>,
    conds: BTreeSet<Condition>,
    deferred: BTreeMap<SlotId, DeferredSlot>,
    label_hints: BTreeMap<Label, String>,
    ref_hints: BTreeMap<Referent, String>,
    next_id: u32,
}

impl Default for UdrsStore {
    fn default() -> Self {
        Self::empty()
    }
}

impl UdrsStore {
    pub fn empty() -> Self {
        UdrsStore {
            ls: Ls::top(),
            top: Label::TOP,
            subord: BTreeMap::new(),
            conds: BTreeSet::new(),
            deferred: BTreeMap::new(),
            label_hints: BTreeMap::new(),
            ref_hints: BTreeMap::new(),
            next_id: 1,
        }
    }

    pub fn with_ls(mut self, ls: Ls) -> Self {
        self.ls = ls;
        self
    }

    pub fn conds(&self) -> impl Iterator<Item = &Condition> {
        self.conds.iter()
    }

    pub fn subord(&self) -> impl Iterator<Item = (&SubordConstraint, Provenance)> {
        self.subord.iter().map(|(c, p)| (c, *p))
    }

    pub fn constraints(&self) -> impl Iterator<Item = &SubordConstraint> {
        self.subord.keys()
    }

    pub fn contains_constraint(&self, c: &SubordConstraint) -> bool {
        self.subord.contains_key(c)
    }

    pub fn provenance(&self, c: &SubordConstraint) -> Option<Provenance> {
        self.subord.get(c).copied()
    }

    pub fn slots(&self) -> impl Iterator<Item = &DeferredSlot> {
        self.deferred.values()
    }

    pub fn slot(&self, id: SlotId) -> Option<&DeferredSlot> {
        self.deferred.get(&id)
    }

    pub fn cond_count(&self) -> usize {
        self.conds.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.subord.len()
    }

    pub fn label_hint(&self, l: Label) -> Option<&str> {
        self.label_hints.get(&l).map(String::as_str)
    }

    pub fn ref_hint(&self, r: Referent) -> Option<&str> {
        self.ref_hints.get(&r).map(String::as_str)
    }

    pub fn set_label_hint(&mut self, l: Label, hint: impl Into<String>) {
        self.label_hints.insert(l, hint.into());
    }

    pub fn set_ref_hint(&mut self, r: Referent, hint: impl Into<String>) {
        self.ref_hints.insert(r, hint.into());
    }

    pub(crate) fn replace_hints(
        &mut self,
        labels: BTreeMap<Label, String>,
        refs: BTreeMap<Referent, String>,
    ) {
        self.label_hints = labels;
        self.ref_hints = refs;
    }

    /// Reserves the id space used by `gen` so later fresh ids cannot clash.
    pub fn reserve_ids(&mut self, gen: &IdGen) {
        self.next_id = self.next_id.max(gen.peek());
    }

    pub fn id_gen(&self) -> IdGen {
        IdGen::starting_at(self.next_id)
    }

    fn bump(&mut self, id: u32) {
        self.next_id = self.next_id.max(id + 1);
    }

    /// Adds a condition without checking consistency of the order.
    pub fn insert_condition(&mut self, c: Condition) -> Result<(), UdrsError> {
        validate_condition(&c)?;
        self.bump(c.label.0);
        for l in c.children() {
            self.bump(l.0);
        }
        match &c.body {
            CondBody::Intro(r) => self.bump(r.id),
            CondBody::Atom { args, .. } => {
                for a in args {
                    match a {
                        Arg::Ref(r) => self.bump(r.id),
                        Arg::Slot(s) => {
                            self.bump(s.0);
                            self.deferred.entry(*s).or_insert_with(|| DeferredSlot::new(*s));
                        }
                        Arg::Prop(_) => {}
                    }
                }
            }
            CondBody::Member { elem, group } => {
                self.bump(elem.id);
                self.bump(group.id);
            }
            CondBody::Card { group, .. } => self.bump(group.id),
            _ => {}
        }
        self.conds.insert(c);
        Ok(())
    }

    /// Adds a constraint without running the acyclicity check.
    pub fn insert_constraint(
        &mut self,
        c: SubordConstraint,
        prov: Provenance,
    ) -> Result<(), UdrsError> {
        if c.depth() > 2 {
            return Err(UdrsError::ConditionTooDeep);
        }
        for l in c.labels() {
            self.bump(l.0);
        }
        self.subord.entry(c).or_insert(prov);
        Ok(())
    }

    pub(crate) fn remove_constraint(&mut self, c: &SubordConstraint) -> Option<Provenance> {
        self.subord.remove(c)
    }

    /// Copy without one constraint. Not a monotonic operation; meant for
    /// mutation tests.
    pub fn without(&self, c: &SubordConstraint) -> UdrsStore {
        let mut out = self.clone();
        out.subord.remove(c);
        out
    }

    pub fn insert_slot(&mut self, slot: DeferredSlot) {
        self.bump(slot.id.0);
        self.deferred.insert(slot.id, slot);
    }

    pub(crate) fn slot_mut(&mut self, id: SlotId) -> Option<&mut DeferredSlot> {
        self.deferred.get_mut(&id)
    }

    /// Every label mentioned anywhere in the store, including `top`.
    pub fn labels(&self) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        out.insert(self.top);
        out.insert(self.ls.l_max);
        out.insert(self.ls.l_min);
        for c in &self.conds {
            out.insert(c.label);
            out.extend(c.children());
        }
        for c in self.subord.keys() {
            out.extend(c.labels());
        }
        for s in self.deferred.values() {
            if let Some(ls) = s.source_ls {
                out.insert(ls.l_max);
                out.insert(ls.l_min);
            }
        }
        out
    }

    pub fn referents(&self) -> BTreeSet<Referent> {
        let mut out = BTreeSet::new();
        for c in &self.conds {
            if let CondBody::Intro(r) = c.body {
                out.insert(r);
            }
            out.extend(c.referent_uses());
        }
        for s in self.deferred.values() {
            out.extend(s.resolved_to);
        }
        out
    }

    pub fn conds_at(&self, l: Label) -> impl Iterator<Item = &Condition> {
        self.conds.iter().filter(move |c| c.label == l)
    }

    pub fn closure(&self) -> Closure {
        Closure::compute(self)
    }

    pub fn check_consistent(&self) -> Result<(), UdrsError> {
        let cl = self.closure();
        match cl.strict_cycle() {
            Some(l) => Err(UdrsError::InconsistentStore(text::label_name(self, l))),
            None => Ok(()),
        }
    }

    /// Union of two stores sharing a top label; `ls` comes from `ls_from`.
    pub fn merge(a: &UdrsStore, b: &UdrsStore, ls_from: Selector) -> Result<UdrsStore, UdrsError> {
        if a.top != b.top {
            return Err(UdrsError::TopMismatch);
        }
        let mut out = a.clone();
        out.ls = match ls_from {
            Selector::First => a.ls,
            Selector::Second => b.ls,
        };
        for c in &b.conds {
            out.conds.insert(c.clone());
        }
        for (c, p) in &b.subord {
            out.subord.entry(c.clone()).or_insert(*p);
        }
        for (id, s) in &b.deferred {
            match out.deferred.get(id) {
                Some(existing) if existing.is_resolved() => {}
                _ => {
                    out.deferred.insert(*id, s.clone());
                }
            }
        }
        for (l, h) in &b.label_hints {
            out.label_hints.entry(*l).or_insert_with(|| h.clone());
        }
        for (r, h) in &b.ref_hints {
            out.ref_hints.entry(*r).or_insert_with(|| h.clone());
        }
        out.next_id = a.next_id.max(b.next_id);
        out.check_consistent()?;
        Ok(out)
    }

    /// Monotonically adds one constraint.
    pub fn add_constraint(&self, c: SubordConstraint) -> Result<UdrsStore, UdrsError> {
        self.add_constraint_with(c, Provenance::User)
    }

    pub fn add_constraint_with(
        &self,
        c: SubordConstraint,
        prov: Provenance,
    ) -> Result<UdrsStore, UdrsError> {
        let mut out = self.clone();
        out.insert_constraint(c, prov)?;
        out.check_consistent()?;
        Ok(out)
    }

    fn complex_at(&self, l: Label) -> Option<&Condition> {
        self.conds_at(l)
            .find(|c| c.is_duplex() || matches!(c.body, CondBody::Neg(_)))
    }

    /// Partner label `m` of a plural label `l`. Taken from a slot sourced at
    /// `l` if there is one, else from a weak constraint `m <= l` whose lower
    /// label carries no conditions.
    pub fn weak_partner(&self, l: Label) -> Option<Label> {
        if let Some(ls) = self.deferred.values().filter_map(|s| s.source_ls).find(|ls| ls.l_max == l) {
            if ls.l_min != l {
                return Some(ls.l_min);
            }
        }
        self.subord.keys().find_map(|c| match c {
            SubordConstraint::Leq(m, u) if *u == l && *m != l && self.conds_at(*m).next().is_none() => Some(*m),
            _ => None,
        })
    }

    fn has_group_intro(&self, l: Label) -> bool {
        self.conds_at(l)
            .any(|c| matches!(c.body, CondBody::Intro(r) if r.sort == Sort::Group))
    }

    /// `(scope, res)` of a label, or `None` where undefined.
    pub fn scope_res(&self, l: Label) -> Option<(Label, Label)> {
        if let Some(c) = self.complex_at(l) {
            return match c.body {
                CondBody::Neg(inner) => Some((inner, inner)),
                CondBody::Implies { restr, scope }
                | CondBody::Diamond { restr, scope, .. }
                | CondBody::Gen { restr, scope } => Some((scope, restr)),
                _ => unreachable!(),
            };
        }
        if self.has_group_intro(l) {
            let partner = self.weak_partner(l)?;
            if self.closure().eq(partner, l) {
                return Some((l, l));
            }
            return None;
        }
        Some((l, l))
    }

    pub fn scope_of(&self, l: Label) -> Option<Label> {
        self.scope_res(l).map(|(s, _)| s)
    }

    pub fn res_of(&self, l: Label) -> Option<Label> {
        self.scope_res(l).map(|(_, r)| r)
    }

    pub fn classify(&self, l: Label) -> ScopeClass {
        match self.scope_res(l) {
            Some((s, _)) if s != l => ScopeClass::ScopeBearing,
            Some((s, r)) if s == l && r == l => ScopeClass::NotScopeBearing,
            _ => ScopeClass::PotentiallyScopeBearing,
        }
    }

    /// The unique referent introduced at `l`.
    pub fn dref_of(&self, l: Label) -> Result<Option<Referent>, UdrsError> {
        let mut found: Option<Referent> = None;
        for c in self.conds_at(l) {
            if let CondBody::Intro(r) = c.body {
                match found {
                    Some(prev) if prev != r => {
                        return Err(UdrsError::DuplicateIntro(text::label_name(self, l)))
                    }
                    _ => found = Some(r),
                }
            }
        }
        Ok(found)
    }

    /// Attempts to resolve `slot` against the store of the NP that fills it.
    pub fn dref_res(&self, slot: &DeferredSlot) -> Result<DrefRes, UdrsError> {
        let ls = slot
            .source_ls
            .ok_or_else(|| UdrsError::NoMatchingClause("?".into(), "?".into()))?;
        let (max, min) = (ls.l_max, ls.l_min);
        let eq = SubordConstraint::Eq(max, min);
        let lt = SubordConstraint::Lt(min, max);
        let trigger = match &slot.trigger {
            Some(t) => Some(t.clone()),
            None if max == min
                || self.contains_constraint(&eq)
                || self.contains_constraint(&SubordConstraint::Eq(min, max)) =>
            {
                Some(eq)
            }
            None if self.contains_constraint(&lt) => Some(lt),
            None if self.contains_constraint(&SubordConstraint::Leq(min, max)) => None,
            None => {
                return Err(UdrsError::NoMatchingClause(
                    text::label_name(self, max),
                    text::label_name(self, min),
                ))
            }
        };
        let Some(trigger) = trigger else {
            return Ok(DrefRes::Pending);
        };
        let holder = match trigger {
            SubordConstraint::Eq(..) => max,
            _ => match self.res_of(max) {
                Some(r) => r,
                None => return Ok(DrefRes::Pending),
            },
        };
        match self.dref_of(holder)? {
            Some(referent) => Ok(DrefRes::Resolved { referent, trigger }),
            None => Err(UdrsError::NoMatchingClause(
                text::label_name(self, max),
                text::label_name(self, min),
            )),
        }
    }

    /// Records a resolution on a slot. A resolved slot never changes.
    pub fn resolve_slot(
        &mut self,
        id: SlotId,
        referent: Referent,
        trigger: SubordConstraint,
    ) -> Result<(), UdrsError> {
        let slot = self.deferred.get_mut(&id).ok_or(UdrsError::UnknownSlot(id.0))?;
        if slot.is_resolved() {
            return Err(UdrsError::SlotAlreadyResolved(id.0));
        }
        slot.trigger = Some(trigger);
        slot.resolved_to = Some(referent);
        Ok(())
    }

    /// Copy with ids substituted; unmapped ids are kept. Display hints are
    /// dropped.
    pub fn renamed(
        &self,
        labels: &BTreeMap<Label, Label>,
        refs: &BTreeMap<Referent, Referent>,
        slots: &BTreeMap<SlotId, SlotId>,
    ) -> UdrsStore {
        let l = |x: Label| *labels.get(&x).unwrap_or(&x);
        let r = |x: Referent| *refs.get(&x).unwrap_or(&x);
        let s = |x: SlotId| *slots.get(&x).unwrap_or(&x);
        let mut out = UdrsStore::empty();
        out.top = l(self.top);
        out.ls = Ls::new(l(self.ls.l_max), l(self.ls.l_min));
        out.next_id = self.next_id;
        for c in &self.conds {
            let body = match &c.body {
                CondBody::Atom { rel, args } => CondBody::Atom {
                    rel: rel.clone(),
                    args: args
                        .iter()
                        .map(|a| match a {
                            Arg::Ref(x) => Arg::Ref(r(*x)),
                            Arg::Slot(x) => Arg::Slot(s(*x)),
                            Arg::Prop(x) => Arg::Prop(l(*x)),
                        })
                        .collect(),
                },
                CondBody::Intro(x) => CondBody::Intro(r(*x)),
                CondBody::Implies { restr, scope } => {
                    CondBody::Implies { restr: l(*restr), scope: l(*scope) }
                }
                CondBody::Neg(x) => CondBody::Neg(l(*x)),
                CondBody::Diamond { at_least, restr, scope } => {
                    CondBody::Diamond { at_least: *at_least, restr: l(*restr), scope: l(*scope) }
                }
                CondBody::Gen { restr, scope } => CondBody::Gen { restr: l(*restr), scope: l(*scope) },
                CondBody::Member { elem, group } => {
                    CondBody::Member { elem: r(*elem), group: r(*group) }
                }
                CondBody::Card { group, n } => CondBody::Card { group: r(*group), n: *n },
            };
            let c = Condition::new(l(c.label), body);
            out.bump_all(&c);
            out.conds.insert(c);
        }
        for (c, p) in &self.subord {
            let c = rename_constraint(c, &l);
            for x in c.labels() {
                out.bump(x.0);
            }
            out.subord.entry(c).or_insert(*p);
        }
        for slot in self.deferred.values() {
            let id = s(slot.id);
            out.bump(id.0);
            out.deferred.insert(
                id,
                DeferredSlot {
                    id,
                    source_ls: slot.source_ls.map(|ls| Ls::new(l(ls.l_max), l(ls.l_min))),
                    trigger: slot.trigger.as_ref().map(|t| rename_constraint(t, &l)),
                    resolved_to: slot.resolved_to.map(r),
                },
            );
        }
        for x in labels.values() {
            out.bump(x.0);
        }
        for x in refs.values() {
            out.bump(x.id);
        }
        out
    }

    fn bump_all(&mut self, c: &Condition) {
        self.bump(c.label.0);
        for l in c.children() {
            self.bump(l.0);
        }
        for x in c.referent_uses() {
            self.bump(x.id);
        }
        match &c.body {
            CondBody::Intro(x) => self.bump(x.id),
            CondBody::Atom { args, .. } => {
                for a in args {
                    if let Arg::Slot(s) = a {
                        self.bump(s.0);
                    }
                }
            }
            _ => {}
        }
    }

    /// Value of an atom argument after slot resolution.
    pub fn arg_referent(&self, a: &Arg) -> Option<Referent> {
        match a {
            Arg::Ref(r) => Some(*r),
            Arg::Slot(s) => self.deferred.get(s).and_then(|s| s.resolved_to),
            Arg::Prop(_) => None,
        }
    }
}

/// Which merge input supplies the distinguished labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Selector {
    First,
    Second,
}

fn rename_constraint(c: &SubordConstraint, l: &dyn Fn(Label) -> Label) -> SubordConstraint {
    match c {
        SubordConstraint::Leq(a, b) => SubordConstraint::Leq(l(*a), l(*b)),
        SubordConstraint::Lt(a, b) => SubordConstraint::Lt(l(*a), l(*b)),
        SubordConstraint::Eq(a, b) => SubordConstraint::Eq(l(*a), l(*b)),
        SubordConstraint::Cond { ante, cons } => {
            SubordConstraint::cond(l(ante.0), l(ante.1), rename_constraint(cons, l))
        }
    }
}

fn validate_condition(c: &Condition) -> Result<(), UdrsError> {
    if c.children().contains(&c.label) {
        return Err(UdrsError::InvalidCondition(
            "embedded label equals the condition's own label".into(),
        ));
    }
    if let CondBody::Member { elem, group } = c.body {
        if elem.sort != Sort::Individual || group.sort != Sort::Group {
            return Err(UdrsError::InvalidCondition(
                "membership needs an individual element and a group".into(),
            ));
        }
    }
    if let CondBody::Card { group, .. } = c.body {
        if group.sort != Sort::Group {
            return Err(UdrsError::InvalidCondition("cardinality of an individual".into()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
