//! Semantic composition at syntactic combination.
//!
//! Every combination merges the daughters' stores (conditions, constraints
//! and distinguished labels of the head). Head-argument combinations then
//! add the closed-formula constraint (tag `IV`), the local-domain bound for
//! quantifiers and plurals (`V`) and the c-command constraints between
//! arguments (`VI`). For plurals the last two are conditional on the plural
//! turning out scope bearing.

use crate::lexicon::{ArgSlot, Category, HeadType, Select};
use crate::syntax::{LocRecord, Sign};
use crate::udrs::{
    DeferredSlot, DrefRes, Label, Ls, Provenance, Referent, Selector, SlotId, SubordConstraint,
    UdrsError, UdrsStore,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum NpKind {
    Quant,
    Plural,
    Other,
}

impl NpKind {
    pub fn of(cat: &Category) -> NpKind {
        match cat.head_type {
            HeadType::DetQuant => NpKind::Quant,
            HeadType::DetDefPlural => NpKind::Plural,
            _ => NpKind::Other,
        }
    }

    fn scoped(self) -> bool {
        self != NpKind::Other
    }
}

/// An argument already saturated on a verbal projection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgRec {
    pub position: usize,
    pub ls: Ls,
    pub kind: NpKind,
}

/// Upper bound of the local domain of a finite clause.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DomainBinding {
    pub l_max: Label,
}

/// Bookkeeping carried along a head projection.
#[derive(Clone, Debug, Default)]
pub struct SemState {
    pub anchor: Option<Label>,
    pub referent: Option<Referent>,
    pub args: Vec<ArgSlot>,
    pub owner: Option<usize>,
    pub select: Option<Select>,
    pub saturated: Vec<ArgRec>,
    pub negs: Vec<Ls>,
    pub domain: Option<DomainBinding>,
}

/// The argument side of a head-argument combination.
pub struct ArgView<'a> {
    pub category: &'a Category,
    pub udrs: &'a UdrsStore,
}

pub fn closed_formula(head_ls: Ls, arg_ls: Ls) -> SubordConstraint {
    SubordConstraint::Leq(head_ls.l_min, arg_ls.l_min)
}

/// The quantifier's maximal label stays inside the local domain; for a
/// plural only once it is scope bearing.
pub fn quantifier_scope(
    kind: NpKind,
    arg_ls: Ls,
    domain: DomainBinding,
) -> Option<SubordConstraint> {
    let bound = SubordConstraint::Leq(arg_ls.l_max, domain.l_max);
    match kind {
        NpKind::Quant => Some(bound),
        NpKind::Plural => Some(SubordConstraint::cond(arg_ls.l_min, arg_ls.l_max, bound)),
        NpKind::Other => None,
    }
}

/// Wide scope of the argument over every scope-bearing element after it on
/// SUBCAT whose LOC is not in SLASH.
pub fn complement_scope(
    kind: NpKind,
    arg_ls: Ls,
    tail: &[ArgRec],
    slashed: &dyn Fn(usize) -> bool,
) -> Vec<SubordConstraint> {
    if !kind.scoped() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for alpha in tail {
        if !alpha.kind.scoped() || slashed(alpha.position) {
            continue;
        }
        let mut c = SubordConstraint::Leq(alpha.ls.l_max, arg_ls.l_min);
        if alpha.kind == NpKind::Plural {
            c = SubordConstraint::cond(alpha.ls.l_min, alpha.ls.l_max, c);
        }
        if kind == NpKind::Plural {
            c = SubordConstraint::cond(arg_ls.l_min, arg_ls.l_max, c);
        }
        out.push(c);
    }
    out
}

/// Points a verb slot at the argument's distinguished labels and tries to
/// resolve it against the argument's own store.
pub fn wire_argument_slot(
    u: &mut UdrsStore,
    slot: SlotId,
    arg: &UdrsStore,
    collective: bool,
) -> Result<(), UdrsError> {
    let ls = arg.ls;
    let mut s = DeferredSlot::new(slot);
    s.source_ls = Some(ls);
    if collective {
        let eq = SubordConstraint::Eq(ls.l_max, ls.l_min);
        s.trigger = Some(eq.clone());
        u.insert_constraint(eq, Provenance::Lex)?;
    }
    let res = arg.dref_res(&s)?;
    let target = u.slot_mut(slot).ok_or(UdrsError::UnknownSlot(slot.0))?;
    target.source_ls = Some(ls);
    if let DrefRes::Resolved { referent, trigger } = res {
        u.resolve_slot(slot, referent, trigger)?;
    }
    Ok(())
}

fn add(u: &mut UdrsStore, c: SubordConstraint, p: Provenance) -> Result<(), UdrsError> {
    u.insert_constraint(c, p)
}

/// Semantics of a head-complement or head-subject step.
pub fn compose_argument(
    head: &Sign,
    arg: ArgView<'_>,
    position: usize,
    slash: &[LocRecord],
) -> Result<(UdrsStore, SemState), UdrsError> {
    let mut u = UdrsStore::merge(&head.udrs, arg.udrs, Selector::First)?;
    let mut sem = head.sem.clone();
    let arg_ls = arg.udrs.ls;
    let kind = NpKind::of(arg.category);
    match sem.args.get(position) {
        Some(ArgSlot::Slot(s)) => {
            let collective = position == 0 && sem.select == Some(Select::Collective);
            wire_argument_slot(&mut u, *s, arg.udrs, collective)?;
        }
        Some(ArgSlot::Prop(p)) => add(&mut u, SubordConstraint::Eq(*p, arg_ls.l_max), Provenance::Lex)?,
        None => {}
    }
    let clausal = arg.category.head_type == HeadType::FuncComp;
    if !clausal {
        add(&mut u, closed_formula(head.udrs.ls, arg_ls), Provenance::ClosedFormula)?;
    }
    if let Some(d) = sem.domain {
        if let Some(c) = quantifier_scope(kind, arg_ls, d) {
            add(&mut u, c, Provenance::QuantifierScope)?;
        }
    }
    let owner = sem.owner;
    let slashed = |pos: usize| {
        slash.iter().any(|r| Some(r.index.owner) == owner && r.index.position == pos)
    };
    let tail: Vec<ArgRec> = sem.saturated.iter().filter(|a| a.position > position).cloned().collect();
    for c in complement_scope(kind, arg_ls, &tail, &slashed) {
        add(&mut u, c, Provenance::ComplementScope)?;
    }
    sem.saturated.push(ArgRec { position, ls: arg_ls, kind });
    u.check_consistent()?;
    Ok((u, sem))
}

/// Fixes the local domain of a clause and emits the pending domain bounds.
pub fn bind_domain(u: &mut UdrsStore, sem: &mut SemState, d: DomainBinding) -> Result<(), UdrsError> {
    let ls = u.ls;
    add(u, SubordConstraint::Eq(ls.l_max, d.l_max), Provenance::QuantifierScope)?;
    add(u, SubordConstraint::Leq(ls.l_min, d.l_max), Provenance::QuantifierScope)?;
    for a in &sem.saturated {
        if let Some(c) = quantifier_scope(a.kind, a.ls, d) {
            add(u, c, Provenance::QuantifierScope)?;
        }
    }
    for n in &sem.negs {
        add(u, SubordConstraint::Leq(n.l_max, d.l_max), Provenance::QuantifierScope)?;
    }
    sem.domain = Some(d);
    u.check_consistent()
}

/// Functional head plus its verbal complement: the clause's labels are
/// inherited from the complement and the local domain is bound.
pub fn compose_func(
    func: &Sign,
    comp: &Sign,
    fresh: Label,
) -> Result<(UdrsStore, SemState), UdrsError> {
    let mut u = UdrsStore::merge(&func.udrs, &comp.udrs, Selector::Second)?;
    let mut sem = comp.sem.clone();
    let d = match func.category.head_type {
        HeadType::FuncVfin => u.top,
        _ => fresh,
    };
    bind_domain(&mut u, &mut sem, DomainBinding { l_max: d })?;
    Ok((u, sem))
}

/// Negation adjoined to a verbal projection.
pub fn compose_neg(neg: &Sign, head: &Sign) -> Result<(UdrsStore, SemState), UdrsError> {
    let mut u = UdrsStore::merge(&head.udrs, &neg.udrs, Selector::First)?;
    let mut sem = head.sem.clone();
    let nls = neg.udrs.ls;
    add(&mut u, SubordConstraint::Leq(head.udrs.ls.l_min, nls.l_min), Provenance::Lex)?;
    match sem.domain {
        Some(d) => add(&mut u, SubordConstraint::Leq(nls.l_max, d.l_max), Provenance::QuantifierScope)?,
        None => sem.negs.push(nls),
    }
    u.check_consistent()?;
    Ok((u, sem))
}

/// Binds the matrix domain to top.
pub fn finalize_root(sign: &mut Sign) -> Result<(), UdrsError> {
    let top = sign.udrs.top;
    match sign.sem.domain {
        None => bind_domain(&mut sign.udrs, &mut sign.sem, DomainBinding { l_max: top }),
        Some(d) if d.l_max != top => {
            add(&mut sign.udrs, SubordConstraint::Eq(d.l_max, top), Provenance::QuantifierScope)?;
            sign.sem.domain = Some(DomainBinding { l_max: top });
            sign.udrs.check_consistent()
        }
        Some(_) => Ok(()),
    }
}
