//! Plural disambiguation, conditional-constraint promotion and reading
//! enumeration.

mod dot;
mod place;
mod render;

use std::fmt;

use thiserror::Error;

use crate::udrs::{
    text, Arg, CondBody, Condition, Label, Ls, Provenance, Referent, ScopeClass, SlotId,
    SubordConstraint, UdrsError, UdrsStore,
};

pub use dot::dot;
pub use place::{
    accessible, brute_force_readings, candidate_placements, enumerate_readings, Placement,
    BRUTE_FORCE_LIMIT,
};
pub use render::{DrsArg, DrsBox, DrsCond, Reading};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum PluralReading {
    Collective,
    Distributive,
    Generic,
    Cumulative,
    None,
}

impl PluralReading {
    pub fn parse(s: &str) -> Option<PluralReading> {
        Some(match s {
            "collective" => PluralReading::Collective,
            "distributive" => PluralReading::Distributive,
            "generic" => PluralReading::Generic,
            "cumulative" => PluralReading::Cumulative,
            "none" => PluralReading::None,
            _ => return None,
        })
    }
}

impl fmt::Display for PluralReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PluralReading::Collective => "collective",
            PluralReading::Distributive => "distributive",
            PluralReading::Generic => "generic",
            PluralReading::Cumulative => "cumulative",
            PluralReading::None => "none",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Target {
    Single(Label),
    Pair(Label, Label),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Directive {
    pub target: Target,
    pub reading: PluralReading,
}

impl Directive {
    pub fn new(l_max: Label, reading: PluralReading) -> Self {
        Directive { target: Target::Single(l_max), reading }
    }

    pub fn cumulative(a: Label, b: Label) -> Self {
        Directive { target: Target::Pair(a, b), reading: PluralReading::Cumulative }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PluralPolicy {
    Fixed,
    Branch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisambigError {
    #[error("label {0} is not an underspecified plural")]
    NotUnderspecified(String),
    #[error("argument slot {0} is still unresolved")]
    UnresolvedSlot(u32),
    #[error("store too large for exhaustive generation ({0} candidate placements)")]
    ScaleExceeded(u128),
    #[error("cumulative reading needs two plurals sharing one verb atom")]
    NoSharedAtom,
    #[error(transparent)]
    Store(#[from] UdrsError),
}

/// An undisambiguated plural NP: group referent `group` introduced at
/// `ls.l_max`, weakly subordinated `ls.l_min`, and the verb slot it fills.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct PluralSite {
    pub ls: Ls,
    pub group: Referent,
    pub slot: Option<SlotId>,
}

fn pending_slot_for(u: &UdrsStore, ls: Ls) -> Option<SlotId> {
    u.slots().find(|s| s.source_ls == Some(ls) && !s.is_resolved()).map(|s| s.id)
}

/// Locates the plural whose maximal label is `l_max`.
pub fn plural_site(u: &UdrsStore, l_max: Label) -> Result<PluralSite, DisambigError> {
    let not = || DisambigError::NotUnderspecified(text::label_name(u, l_max));
    if u.classify(l_max) != ScopeClass::PotentiallyScopeBearing {
        return Err(not());
    }
    let group = u.dref_of(l_max)?.ok_or_else(not)?;
    let from_slot = u
        .slots()
        .filter(|s| !s.is_resolved())
        .filter_map(|s| s.source_ls)
        .find(|ls| ls.l_max == l_max);
    let ls = match from_slot {
        Some(ls) => ls,
        None => Ls::new(l_max, u.weak_partner(l_max).ok_or_else(not)?),
    };
    if !u.contains_constraint(&SubordConstraint::Leq(ls.l_min, ls.l_max)) {
        return Err(not());
    }
    Ok(PluralSite { ls, group, slot: pending_slot_for(u, ls) })
}

/// Every plural of the store that is still underspecified.
pub fn plural_sites(u: &UdrsStore) -> Vec<PluralSite> {
    let mut out: Vec<PluralSite> = Vec::new();
    for c in u.conds() {
        if let CondBody::Intro(r) = c.body {
            if r.sort == crate::udrs::Sort::Group && !out.iter().any(|p| p.ls.l_max == c.label) {
                if let Ok(site) = plural_site(u, c.label) {
                    out.push(site);
                }
            }
        }
    }
    out
}

fn distribute(
    u: &mut UdrsStore,
    site: PluralSite,
    generic: bool,
) -> Result<(Label, Referent), DisambigError> {
    let mut gen = u.id_gen();
    let l11 = gen.label();
    let x = gen.individual();
    let (l1, l12) = (site.ls.l_max, site.ls.l_min);
    let body = if generic {
        CondBody::Gen { restr: l11, scope: l12 }
    } else {
        CondBody::Implies { restr: l11, scope: l12 }
    };
    u.insert_condition(Condition::new(l1, body))?;
    u.insert_condition(Condition::new(l11, CondBody::Intro(x)))?;
    u.insert_condition(Condition::new(l11, CondBody::Member { elem: x, group: site.group }))?;
    u.insert_constraint(SubordConstraint::Lt(l11, l1), Provenance::PlDis)?;
    let trigger = SubordConstraint::Lt(l12, l1);
    u.insert_constraint(trigger.clone(), Provenance::PlDis)?;
    if let Some(s) = site.slot {
        u.resolve_slot(s, x, trigger)?;
    }
    Ok((l11, x))
}

/// Applies a plural directive. The result only adds to `u`.
pub fn pl_dis(u: &UdrsStore, d: Directive) -> Result<UdrsStore, DisambigError> {
    let mut out = u.clone();
    match (d.target, d.reading) {
        (Target::Single(l), PluralReading::None) => {
            plural_site(u, l)?;
        }
        (Target::Single(l), PluralReading::Collective) => {
            let site = plural_site(u, l)?;
            let eq = SubordConstraint::Eq(site.ls.l_max, site.ls.l_min);
            out.insert_constraint(eq.clone(), Provenance::PlDis)?;
            if let Some(s) = site.slot {
                out.resolve_slot(s, site.group, eq)?;
            }
        }
        (Target::Single(l), PluralReading::Distributive | PluralReading::Generic) => {
            let site = plural_site(u, l)?;
            distribute(&mut out, site, d.reading == PluralReading::Generic)?;
        }
        (Target::Pair(a, b), PluralReading::Cumulative) => cumulate(&mut out, a, b)?,
        (Target::Single(l), PluralReading::Cumulative) | (Target::Pair(l, _), _) => {
            return Err(DisambigError::NotUnderspecified(text::label_name(u, l)))
        }
    }
    out.check_consistent()?;
    Ok(out)
}

/// Two-duplex bi-coverage rendering of a cumulative reading: every member
/// of the first group stands in the relation to some member of the second,
/// and every member of the second to some member of the first.
fn cumulate(u: &mut UdrsStore, a: Label, b: Label) -> Result<(), DisambigError> {
    let sa = plural_site(u, a)?;
    let sb = plural_site(u, b)?;
    let (Some(slot_a), Some(slot_b)) = (sa.slot, sb.slot) else {
        return Err(DisambigError::NoSharedAtom);
    };
    let atom = u
        .conds()
        .find(|c| match &c.body {
            CondBody::Atom { args, .. } => {
                args.contains(&Arg::Slot(slot_a)) && args.contains(&Arg::Slot(slot_b))
            }
            _ => false,
        })
        .cloned()
        .ok_or(DisambigError::NoSharedAtom)?;
    let CondBody::Atom { rel, args } = &atom.body else { unreachable!() };
    let mut gen = u.id_gen();
    let (a1, b1, a2, b2) = (gen.label(), gen.label(), gen.label(), gen.label());
    let (x, y, y2, x2) = (gen.individual(), gen.individual(), gen.individual(), gen.individual());
    let (l1, l2) = (sa.ls.l_max, sb.ls.l_max);
    let p = Provenance::PlDis;
    u.insert_constraint(SubordConstraint::Eq(l1, sa.ls.l_min), p)?;
    u.insert_constraint(SubordConstraint::Eq(l2, sb.ls.l_min), p)?;
    u.insert_constraint(SubordConstraint::Leq(l1, l2), p)?;
    u.insert_constraint(SubordConstraint::Leq(l2, l1), p)?;

    u.insert_condition(Condition::new(l1, CondBody::Implies { restr: a1, scope: b1 }))?;
    u.insert_condition(Condition::new(a1, CondBody::Intro(x)))?;
    u.insert_condition(Condition::new(a1, CondBody::Member { elem: x, group: sa.group }))?;
    u.insert_condition(Condition::new(b1, CondBody::Intro(y)))?;
    u.insert_condition(Condition::new(b1, CondBody::Member { elem: y, group: sb.group }))?;
    u.insert_constraint(SubordConstraint::Lt(a1, l1), p)?;
    u.insert_constraint(SubordConstraint::Lt(b1, l1), p)?;
    u.insert_constraint(SubordConstraint::Eq(atom.label, b1), p)?;
    u.resolve_slot(slot_a, x, SubordConstraint::Lt(a1, l1))?;
    u.resolve_slot(slot_b, y, SubordConstraint::Lt(b1, l1))?;

    u.insert_condition(Condition::new(l2, CondBody::Implies { restr: a2, scope: b2 }))?;
    u.insert_condition(Condition::new(a2, CondBody::Intro(y2)))?;
    u.insert_condition(Condition::new(a2, CondBody::Member { elem: y2, group: sb.group }))?;
    u.insert_condition(Condition::new(b2, CondBody::Intro(x2)))?;
    u.insert_condition(Condition::new(b2, CondBody::Member { elem: x2, group: sa.group }))?;
    let mirrored: Vec<Arg> = args
        .iter()
        .map(|arg| match arg {
            Arg::Slot(s) if *s == slot_a => Arg::Ref(x2),
            Arg::Slot(s) if *s == slot_b => Arg::Ref(y2),
            other => other.clone(),
        })
        .collect();
    u.insert_condition(Condition::new(b2, CondBody::Atom { rel: rel.clone(), args: mirrored }))?;
    u.insert_constraint(SubordConstraint::Lt(a2, l2), p)?;
    u.insert_constraint(SubordConstraint::Lt(b2, l2), p)?;
    Ok(())
}

/// Promotes every conditional constraint whose antecedent the
/// unconditional closure entails, and drops those whose antecedent is
/// refuted by an identity. Runs to a fixpoint.
pub fn promote_conditionals(u: &UdrsStore) -> Result<UdrsStore, DisambigError> {
    let mut out = u.clone();
    loop {
        let cl = out.closure();
        let mut changed = false;
        let conds: Vec<(SubordConstraint, Provenance)> = out
            .subord()
            .filter(|(c, _)| c.is_conditional())
            .map(|(c, p)| (c.clone(), p))
            .collect();
        for (c, p) in conds {
            let SubordConstraint::Cond { ante, cons } = &c else { continue };
            if cl.lt(ante.0, ante.1) {
                out.remove_constraint(&c);
                out.insert_constraint((**cons).clone(), p)?;
                changed = true;
            } else if cl.leq(ante.1, ante.0) {
                out.remove_constraint(&c);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    out.check_consistent()?;
    Ok(out)
}

/// Resolves every remaining slot that `dref_res` can now decide.
pub fn settle_slots(u: &mut UdrsStore) -> Result<(), DisambigError> {
    let pending: Vec<_> = u.slots().filter(|s| !s.is_resolved()).cloned().collect();
    for s in pending {
        if s.source_ls.is_none() {
            continue;
        }
        if let crate::udrs::DrefRes::Resolved { referent, trigger } = u.dref_res(&s)? {
            u.resolve_slot(s.id, referent, trigger)?;
        }
    }
    Ok(())
}

/// Stores to enumerate under `policy`: one per combination of plural
/// choices when branching, the store itself otherwise.
pub fn plural_branches(u: &UdrsStore, policy: PluralPolicy) -> Result<Vec<UdrsStore>, DisambigError> {
    let mut stores = vec![u.clone()];
    if policy == PluralPolicy::Branch {
        for site in plural_sites(u) {
            let mut next = Vec::new();
            for s in &stores {
                for r in [PluralReading::Collective, PluralReading::Distributive] {
                    match pl_dis(s, Directive::new(site.ls.l_max, r)) {
                        Ok(v) => next.push(v),
                        Err(DisambigError::Store(UdrsError::InconsistentStore(_))) => {}
                        Err(e) => return Err(e),
                    }
                }
            }
            stores = next;
        }
    }
    Ok(stores)
}
