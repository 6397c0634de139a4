//! Binary-branching derivations with order-sensitive valence, traces and
//! SLASH.
//!
//! Parsing runs in two phases. A chart parser over purely syntactic items
//! finds all derivations; each derivation is then replayed through the
//! schema functions below, which build full [`Sign`]s and call into
//! [`crate::interface`] for the semantics. Fillers are built before the
//! derivation is replayed so a trace can share its filler's LOC record.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::rc::Rc;

use thiserror::Error;

use crate::interface::{self, ArgView, SemState};
use crate::lexicon::{
    self, ArgSpec, ArgType, Case, Category, HeadType, LexEntry, Lexicon, Token, UnknownWord,
};
use crate::udrs::{Arg, CondBody, Condition, IdGen, Ls, UdrsError, UdrsStore};

/// Identifies a trace by its verb (token index) and SUBCAT position.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TraceId {
    pub owner: usize,
    pub position: usize,
}

/// What a trace and its filler share.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocRecord {
    pub index: TraceId,
    pub spec: ArgSpec,
    pub category: Category,
    pub udrs: UdrsStore,
}

#[derive(Clone, Debug)]
pub struct Sign {
    pub category: Category,
    pub head_subcat: Vec<ArgSpec>,
    pub subj: Vec<ArgSpec>,
    pub comps: Vec<ArgSpec>,
    pub slash: Vec<LocRecord>,
    pub udrs: UdrsStore,
    /// Token span.
    pub phon: (usize, usize),
    pub lex: bool,
    pub head_initial: bool,
    pub sem: SemState,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("valence mismatch: expected {expected}, found {found}")]
    ValenceMismatch { expected: String, found: String },
    #[error("subject combined before complements are saturated")]
    SaturationError,
    #[error("filler matches no SLASH element")]
    NoMatchingSlash,
    #[error("no parse; best partial analysis: {best}")]
    NoParse { best: String },
    #[error(transparent)]
    UnknownWord(#[from] UnknownWord),
    #[error(transparent)]
    Semantic(#[from] UdrsError),
}

/// Moves the first SUBCAT element to SUBJ and the rest to COMPS.
pub fn vip(mut sign: Sign) -> Sign {
    if let Some((first, rest)) = sign.head_subcat.split_first() {
        sign.subj = vec![*first];
        sign.comps = rest.to_vec();
    }
    sign
}

/// A lexical sign with fresh labels and referents.
pub fn instantiate(entry: &LexEntry, gen: &mut IdGen, phon: (usize, usize), owner: usize) -> Sign {
    let inst = lexicon::instantiate_template(entry, gen);
    let sign = Sign {
        category: entry.category,
        head_subcat: entry.subcat.clone(),
        subj: Vec::new(),
        comps: Vec::new(),
        slash: Vec::new(),
        udrs: inst.store,
        phon,
        lex: true,
        head_initial: entry.head_initial,
        sem: SemState {
            anchor: inst.anchor,
            referent: inst.referent,
            args: inst.args,
            owner: Some(owner),
            select: entry.selects_plural_reading,
            ..SemState::default()
        },
    };
    if entry.category.head_type == HeadType::Verb {
        vip(sign)
    } else {
        sign
    }
}

fn is_nominal(t: HeadType) -> bool {
    t.is_det() || matches!(t, HeadType::ProperName | HeadType::Pronoun)
}

/// Whether a phrase of category `cat` can fill `spec`.
pub fn satisfies(spec: ArgSpec, cat: &Category) -> bool {
    match spec.ty {
        ArgType::Dp => is_nominal(cat.head_type) && cat.case == spec.case && cat.case != Some(Case::Loc),
        ArgType::Pp => is_nominal(cat.head_type) && cat.case == Some(Case::Loc) && spec.case == cat.case,
        ArgType::Cp => cat.head_type == HeadType::FuncComp,
    }
}

fn describe(cat: &Category) -> String {
    format!("{:?}{}", cat.head_type, cat.case.map(|c| format!(":{c}")).unwrap_or_default())
}

/// Either an overt phrase or a trace standing for a displaced one.
pub enum Dtr<'a> {
    Overt(&'a Sign),
    Trace(&'a LocRecord),
}

impl Dtr<'_> {
    fn parts(&self) -> (&Category, &UdrsStore, (usize, usize)) {
        match self {
            Dtr::Overt(s) => (&s.category, &s.udrs, s.phon),
            Dtr::Trace(r) => (&r.category, &r.udrs, (usize::MAX, usize::MAX)),
        }
    }
}

fn span_union(a: (usize, usize), b: (usize, usize)) -> (usize, usize) {
    if b.0 == usize::MAX {
        return a;
    }
    (a.0.min(b.0), a.1.max(b.1))
}

fn with_arg(head: &Sign, dtr: Dtr<'_>, spec: ArgSpec, position: usize) -> Result<Sign, SyntaxError> {
    let (cat, udrs, phon) = dtr.parts();
    if !satisfies(spec, cat) {
        return Err(SyntaxError::ValenceMismatch { expected: spec.to_string(), found: describe(cat) });
    }
    let mut slash = head.slash.clone();
    match &dtr {
        Dtr::Trace(r) => slash.push((*r).clone()),
        Dtr::Overt(s) => slash.extend(s.slash.iter().cloned()),
    }
    let (u, sem) = interface::compose_argument(head, ArgView { category: cat, udrs }, position, &slash)?;
    Ok(Sign {
        slash,
        udrs: u,
        sem,
        phon: span_union(head.phon, phon),
        lex: false,
        ..head.clone()
    })
}

/// Saturates the last COMPS element.
pub fn head_comp(head: &Sign, dtr: Dtr<'_>) -> Result<Sign, SyntaxError> {
    let Some(spec) = head.comps.last().copied() else {
        return Err(SyntaxError::ValenceMismatch { expected: "nothing".into(), found: describe(dtr.parts().0) });
    };
    let position = head.comps.len();
    let mut s = with_arg(head, dtr, spec, position)?;
    s.comps.pop();
    Ok(s)
}

/// Saturates the subject; COMPS must already be empty.
pub fn head_subj(head: &Sign, dtr: Dtr<'_>) -> Result<Sign, SyntaxError> {
    if !head.comps.is_empty() {
        return Err(SyntaxError::SaturationError);
    }
    let Some(spec) = head.subj.first().copied() else {
        return Err(SyntaxError::ValenceMismatch { expected: "nothing".into(), found: describe(dtr.parts().0) });
    };
    let mut s = with_arg(head, dtr, spec, 0)?;
    s.subj.clear();
    Ok(s)
}

/// Discharges the SLASH element shared with the filler. The filler's
/// content already entered the store at the trace.
pub fn head_filler(head: &Sign, filler: &Sign, index: TraceId) -> Result<Sign, SyntaxError> {
    let pos = head
        .slash
        .iter()
        .position(|r| r.index == index && r.udrs == filler.udrs && r.category == filler.category)
        .ok_or(SyntaxError::NoMatchingSlash)?;
    let mut s = head.clone();
    s.slash.remove(pos);
    s.phon = span_union(head.phon, filler.phon);
    s.lex = false;
    Ok(s)
}

/// Functional head (complementizer or finite verb in second position) with
/// its verbal complement.
pub fn func_comb(func: &Sign, comp: &Sign, gen: &mut IdGen) -> Result<Sign, SyntaxError> {
    let fresh = gen.label();
    let (u, sem) = interface::compose_func(func, comp, fresh)?;
    Ok(Sign {
        category: func.category,
        udrs: u,
        sem,
        phon: span_union(func.phon, comp.phon),
        lex: false,
        head_initial: true,
        ..comp.clone()
    })
}

pub fn neg_adjunct(neg: &Sign, head: &Sign) -> Result<Sign, SyntaxError> {
    let (u, sem) = interface::compose_neg(neg, head)?;
    Ok(Sign { udrs: u, sem, phon: span_union(head.phon, neg.phon), lex: false, ..head.clone() })
}

/// Determiner with its noun: the noun predicate goes to the determiner's
/// anchor label.
pub fn det_noun(det: &Sign, noun: &LexEntry, noun_phon: (usize, usize)) -> Result<Sign, SyntaxError> {
    let mut s = det.clone();
    let (Some(anchor), Some(r)) = (det.sem.anchor, det.sem.referent) else {
        return Err(SyntaxError::ValenceMismatch { expected: "determiner".into(), found: describe(&det.category) });
    };
    let rel = noun.rel.clone().unwrap_or_else(|| noun.form.clone());
    s.udrs.insert_condition(Condition::new(anchor, CondBody::Atom { rel, args: vec![Arg::Ref(r)] }))?;
    s.phon = span_union(det.phon, noun_phon);
    s.lex = false;
    Ok(s)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Schema {
    HeadComp,
    HeadSubj,
    HeadFiller(TraceId),
    FuncComb,
    NegAdjunct,
    DetNoun,
}

impl Schema {
    fn name(self) -> &'static str {
        match self {
            Schema::HeadComp => "head-comp",
            Schema::HeadSubj => "head-subj",
            Schema::HeadFiller(_) => "head-filler",
            Schema::FuncComb => "func",
            Schema::NegAdjunct => "head-adj",
            Schema::DetNoun => "det-noun",
        }
    }
}

/// A derivation tree.
#[derive(Debug)]
pub enum Deriv {
    Lex { token: usize, entry: usize },
    Trace(TraceId),
    Node { schema: Schema, head: Rc<Deriv>, dtr: Rc<Deriv>, dtr_left: bool },
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct SlashItem {
    id: TraceId,
    spec: ArgSpec,
    at: usize,
}

#[derive(Clone, Debug)]
struct Item {
    cat: Category,
    subj: Vec<ArgSpec>,
    comps: Vec<ArgSpec>,
    slash: Vec<SlashItem>,
    head_initial: bool,
    owner: usize,
    /// Complete noun phrase.
    np: bool,
    /// Bare determiner still wanting its noun.
    det: bool,
    lex: bool,
}

impl Item {
    fn verbal(&self) -> bool {
        self.cat.head_type == HeadType::Verb
    }
}

type Cell = Vec<(Item, Rc<Deriv>)>;

#[derive(Debug, Clone)]
pub struct Derivation {
    pub tokens: Vec<Token>,
    pub root: Rc<Deriv>,
}

/// All derivations of `sentence`, leftmost-lowest first.
pub fn parse(lex: &Lexicon, sentence: &str) -> Result<Vec<Derivation>, SyntaxError> {
    let tokens = lexicon::segment(lex, sentence)?;
    let n = tokens.len();
    if n == 0 {
        return Err(SyntaxError::NoParse { best: "empty input".into() });
    }
    let mut chart: Vec<Vec<Cell>> = vec![vec![Vec::new(); n + 1]; n + 1];
    for (i, t) in tokens.iter().enumerate() {
        for (k, e) in t.entries.iter().enumerate() {
            let ht = e.category.head_type;
            let (subj, comps) = match e.subcat.split_first() {
                Some((f, r)) if ht == HeadType::Verb => (vec![*f], r.to_vec()),
                _ => (Vec::new(), Vec::new()),
            };
            let item = Item {
                cat: e.category,
                subj,
                comps,
                slash: Vec::new(),
                head_initial: e.head_initial,
                owner: i,
                np: matches!(ht, HeadType::ProperName | HeadType::Pronoun) || (ht.is_det() && e.standalone),
                det: ht.is_det() && !e.standalone,
                lex: true,
            };
            chart[i][i + 1].push((item, Rc::new(Deriv::Lex { token: i, entry: k })));
        }
        add_traces(&mut chart[i][i + 1], i);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell = Vec::new();
            for k in i + 1..j {
                for (l, ld) in &chart[i][k] {
                    for (r, rd) in &chart[k][j] {
                        combine(&tokens, l, ld, r, rd, i, k, &mut cell);
                    }
                }
            }
            add_traces(&mut cell, i);
            chart[i][j] = cell;
        }
    }
    let roots: Vec<Derivation> = chart[0][n]
        .iter()
        .filter(|(it, _)| {
            it.subj.is_empty()
                && it.comps.is_empty()
                && it.slash.is_empty()
                && matches!(it.cat.head_type, HeadType::Verb | HeadType::FuncVfin | HeadType::FuncComp)
        })
        .map(|(_, d)| Derivation { tokens: tokens.clone(), root: d.clone() })
        .collect();
    if roots.is_empty() {
        return Err(SyntaxError::NoParse { best: best_partial(&chart, &tokens) });
    }
    Ok(roots)
}

fn best_partial(chart: &[Vec<Cell>], tokens: &[Token]) -> String {
    let n = tokens.len();
    for len in (1..=n).rev() {
        for i in 0..=n - len {
            if let Some((it, d)) = chart[i][i + len].first() {
                let text: Vec<&str> = tokens[i..i + len].iter().map(|t| t.text.as_str()).collect();
                let _ = (it, d);
                return format!("[{} {}]", describe(&it.cat), text.join(" "));
            }
        }
    }
    String::new()
}

fn add_traces(cell: &mut Cell, at: usize) {
    let mut idx = 0;
    while idx < cell.len() {
        let (it, d) = &cell[idx];
        if it.verbal() && !it.head_initial {
            if let Some(spec) = it.comps.last().copied() {
                if spec.ty == ArgType::Dp {
                    let id = TraceId { owner: it.owner, position: it.comps.len() };
                    let mut next = it.clone();
                    next.comps.pop();
                    next.slash.push(SlashItem { id, spec, at });
                    next.lex = false;
                    let deriv = Rc::new(Deriv::Node {
                        schema: Schema::HeadComp,
                        head: d.clone(),
                        dtr: Rc::new(Deriv::Trace(id)),
                        dtr_left: true,
                    });
                    cell.push((next, deriv));
                }
            }
        }
        idx += 1;
    }
}

fn node(schema: Schema, head: &Rc<Deriv>, dtr: &Rc<Deriv>, dtr_left: bool) -> Rc<Deriv> {
    Rc::new(Deriv::Node { schema, head: head.clone(), dtr: dtr.clone(), dtr_left })
}

fn complete_cp(it: &Item) -> bool {
    it.cat.head_type == HeadType::FuncComp && it.subj.is_empty() && it.comps.is_empty() && it.slash.is_empty()
}

fn fills(spec: ArgSpec, it: &Item) -> bool {
    (it.np || complete_cp(it)) && satisfies(spec, &it.cat)
}

#[allow(clippy::too_many_arguments)]
fn combine(
    tokens: &[Token],
    l: &Item,
    ld: &Rc<Deriv>,
    r: &Item,
    rd: &Rc<Deriv>,
    i: usize,
    k: usize,
    out: &mut Cell,
) {
    // Determiner + noun.
    if l.det && r.lex && r.cat.head_type == HeadType::Noun {
        let agree = match (l.cat.num, r.cat.num) {
            (Some(a), Some(b)) => a == b,
            _ => true,
        };
        if agree {
            let it = Item { np: true, det: false, lex: false, ..l.clone() };
            out.push((it, node(Schema::DetNoun, ld, rd, false)));
        }
    }
    // Head-final complement.
    if r.verbal() && !r.head_initial {
        if let Some(spec) = r.comps.last() {
            if fills(*spec, l) {
                let mut it = r.clone();
                it.comps.pop();
                it.slash.extend(l.slash.iter().cloned());
                it.lex = false;
                out.push((it, node(Schema::HeadComp, rd, ld, true)));
            }
        }
    }
    // Head-initial complement.
    if l.verbal() && l.head_initial {
        if let Some(spec) = l.comps.last() {
            if fills(*spec, r) {
                let mut it = l.clone();
                it.comps.pop();
                it.slash.extend(r.slash.iter().cloned());
                it.lex = false;
                out.push((it, node(Schema::HeadComp, ld, rd, false)));
            }
        }
    }
    // Subject.
    if (r.verbal() || r.cat.head_type == HeadType::FuncVfin) && r.comps.is_empty() {
        if let Some(spec) = r.subj.first() {
            if fills(*spec, l) {
                let mut it = r.clone();
                it.subj.clear();
                it.slash.extend(l.slash.iter().cloned());
                it.lex = false;
                out.push((it, node(Schema::HeadSubj, rd, ld, true)));
            }
        }
    }
    // Filler.
    if l.np && l.slash.is_empty() {
        for (n, s) in r.slash.iter().enumerate() {
            if s.at != k && satisfies(s.spec, &l.cat) {
                let mut it = r.clone();
                it.slash.remove(n);
                it.lex = false;
                out.push((it, node(Schema::HeadFiller(s.id), rd, ld, true)));
            }
        }
    }
    // Functional head.
    if l.lex && l.cat.head_type.is_func() && r.verbal() && r.comps.is_empty() {
        let ok = l.cat.head_type == HeadType::FuncVfin || r.subj.is_empty();
        if ok {
            let it = Item {
                cat: l.cat,
                subj: r.subj.clone(),
                comps: Vec::new(),
                slash: r.slash.clone(),
                head_initial: true,
                owner: r.owner,
                np: false,
                det: false,
                lex: false,
            };
            out.push((it, node(Schema::FuncComb, ld, rd, true)));
        }
    }
    // Negation.
    if l.lex && l.cat.head_type == HeadType::Neg && r.verbal() && r.comps.is_empty() {
        let mut it = r.clone();
        it.lex = false;
        out.push((it, node(Schema::NegAdjunct, rd, ld, true)));
    }
    let _ = (tokens, i);
}

/// Replays a derivation through the schema functions.
pub fn build(d: &Derivation, gen: &mut IdGen) -> Result<Built, SyntaxError> {
    let mut cx = Ctx { gen, nps: Vec::new() };
    let mut fillers: BTreeMap<TraceId, Sign> = BTreeMap::new();
    collect_fillers(d, &d.root, &mut cx, &mut fillers)?;
    let mut sign = build_node(d, &d.root, &mut cx, &fillers)?;
    interface::finalize_root(&mut sign)?;
    let mut nps = cx.nps;
    nps.sort_by_key(|n| n.span);
    Ok(Built { sign, nps })
}

/// A noun phrase of the sentence with its distinguished labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NpInfo {
    pub span: (usize, usize),
    /// Lowercased surface string.
    pub text: String,
    pub ls: Ls,
    pub category: Category,
}

#[derive(Clone, Debug)]
pub struct Built {
    pub sign: Sign,
    pub nps: Vec<NpInfo>,
}

struct Ctx<'a> {
    gen: &'a mut IdGen,
    nps: Vec<NpInfo>,
}

impl Ctx<'_> {
    fn record(&mut self, d: &Derivation, s: &Sign) {
        let words: Vec<&str> = d.tokens[s.phon.0..s.phon.1].iter().map(|t| t.text.as_str()).collect();
        self.nps.push(NpInfo {
            span: s.phon,
            text: words.join(" ").to_lowercase(),
            ls: s.udrs.ls,
            category: s.category,
        });
    }
}

fn collect_fillers(
    d: &Derivation,
    n: &Rc<Deriv>,
    cx: &mut Ctx<'_>,
    out: &mut BTreeMap<TraceId, Sign>,
) -> Result<(), SyntaxError> {
    if let Deriv::Node { schema, head, dtr, .. } = n.as_ref() {
        if let Schema::HeadFiller(id) = schema {
            let s = build_node(d, dtr, cx, out)?;
            out.insert(*id, s);
        } else {
            collect_fillers(d, dtr, cx, out)?;
        }
        collect_fillers(d, head, cx, out)?;
    }
    Ok(())
}

fn trace_record(id: TraceId, head: &Sign, fillers: &BTreeMap<TraceId, Sign>) -> Result<LocRecord, SyntaxError> {
    let f = fillers.get(&id).ok_or(SyntaxError::NoMatchingSlash)?;
    let spec = *head.comps.last().ok_or(SyntaxError::NoMatchingSlash)?;
    Ok(LocRecord { index: id, spec, category: f.category, udrs: f.udrs.clone() })
}

fn build_node(
    d: &Derivation,
    n: &Rc<Deriv>,
    cx: &mut Ctx<'_>,
    fillers: &BTreeMap<TraceId, Sign>,
) -> Result<Sign, SyntaxError> {
    match n.as_ref() {
        Deriv::Lex { token, entry } => {
            let t = &d.tokens[*token];
            let e = &t.entries[*entry];
            let s = instantiate(e, cx.gen, (*token, token + 1), *token);
            if matches!(e.category.head_type, HeadType::ProperName | HeadType::Pronoun) || e.standalone {
                cx.record(d, &s);
            }
            Ok(s)
        }
        Deriv::Trace(_) => Err(SyntaxError::NoMatchingSlash),
        Deriv::Node { schema, head, dtr, .. } => match schema {
            Schema::DetNoun => {
                let det = build_node(d, head, cx, fillers)?;
                let Deriv::Lex { token, entry } = dtr.as_ref() else {
                    return Err(SyntaxError::NoMatchingSlash);
                };
                let s = det_noun(&det, &d.tokens[*token].entries[*entry], (*token, token + 1))?;
                cx.record(d, &s);
                Ok(s)
            }
            Schema::HeadComp | Schema::HeadSubj => {
                let h = build_node(d, head, cx, fillers)?;
                let comp;
                let rec;
                let dt = match dtr.as_ref() {
                    Deriv::Trace(id) => {
                        rec = trace_record(*id, &h, fillers)?;
                        Dtr::Trace(&rec)
                    }
                    _ => {
                        comp = build_node(d, dtr, cx, fillers)?;
                        Dtr::Overt(&comp)
                    }
                };
                if *schema == Schema::HeadComp {
                    head_comp(&h, dt)
                } else {
                    head_subj(&h, dt)
                }
            }
            Schema::HeadFiller(id) => {
                let h = build_node(d, head, cx, fillers)?;
                let f = fillers.get(id).ok_or(SyntaxError::NoMatchingSlash)?;
                head_filler(&h, f, *id)
            }
            Schema::FuncComb => {
                let f = build_node(d, head, cx, fillers)?;
                let c = build_node(d, dtr, cx, fillers)?;
                func_comb(&f, &c, cx.gen)
            }
            Schema::NegAdjunct => {
                let h = build_node(d, head, cx, fillers)?;
                let neg = build_node(d, dtr, cx, fillers)?;
                neg_adjunct(&neg, &h)
            }
        },
    }
}

impl Derivation {
    fn trace_numbers(&self) -> BTreeMap<TraceId, usize> {
        fn walk(n: &Deriv, out: &mut BTreeMap<TraceId, usize>) {
            match n {
                Deriv::Trace(id) => {
                    let k = out.len() + 1;
                    out.entry(*id).or_insert(k);
                }
                Deriv::Node { schema, head, dtr, dtr_left } => {
                    if let Schema::HeadFiller(id) = schema {
                        let k = out.len() + 1;
                        out.entry(*id).or_insert(k);
                    }
                    let (a, b) = if *dtr_left { (dtr, head) } else { (head, dtr) };
                    walk(a, out);
                    walk(b, out);
                }
                Deriv::Lex { .. } => {}
            }
        }
        let mut out = BTreeMap::new();
        walk(&self.root, &mut out);
        out
    }

    fn words(&self, n: &Deriv, nums: &BTreeMap<TraceId, usize>, out: &mut Vec<String>) {
        match n {
            Deriv::Lex { token, .. } => out.push(self.tokens[*token].text.clone()),
            Deriv::Trace(id) => out.push(format!("t_{}", nums[id])),
            Deriv::Node { head, dtr, dtr_left, .. } => {
                let (a, b) = if *dtr_left { (dtr, head) } else { (head, dtr) };
                self.words(a, nums, out);
                self.words(b, nums, out);
            }
        }
    }

    fn label(&self, n: &Deriv) -> Option<String> {
        match n {
            Deriv::Lex { token, entry } => {
                let e = &self.tokens[*token].entries[*entry];
                Some(match e.category.head_type {
                    HeadType::Verb => "V".into(),
                    HeadType::FuncComp => "C".into(),
                    HeadType::FuncVfin => "I".into(),
                    HeadType::Neg => "NEG".into(),
                    HeadType::Noun => "N".into(),
                    ht if ht.is_det() && !e.standalone => "D".into(),
                    _ => format!("DP:{}", e.category.case.map(|c| c.to_string()).unwrap_or_default()),
                })
            }
            Deriv::Node { schema: Schema::DetNoun, head, .. } => match head.as_ref() {
                Deriv::Lex { token, entry } => {
                    let e = &self.tokens[*token].entries[*entry];
                    Some(format!("DP:{}", e.category.case.map(|c| c.to_string()).unwrap_or_default()))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// Indented bracketing with schema names and trace indices.
    pub fn dump(&self) -> String {
        let nums = self.trace_numbers();
        let mut out = String::new();
        self.dump_node(&self.root, &nums, 0, None, &mut out);
        out
    }

    fn dump_node(&self, n: &Deriv, nums: &BTreeMap<TraceId, usize>, depth: usize, index: Option<usize>, out: &mut String) {
        let pad = "  ".repeat(depth);
        let suffix = index.map(|k| format!("_{k}")).unwrap_or_default();
        if let Some(lbl) = self.label(n) {
            let mut ws = Vec::new();
            self.words(n, nums, &mut ws);
            let _ = writeln!(out, "{pad}[{lbl} {}]{suffix}", ws.join(" "));
            return;
        }
        match n {
            Deriv::Trace(id) => {
                let _ = writeln!(out, "{pad}t_{}", nums[id]);
            }
            Deriv::Node { schema, head, dtr, dtr_left } => {
                let _ = writeln!(out, "{pad}[{}", schema.name());
                let filler_index = match schema {
                    Schema::HeadFiller(id) => Some(nums[id]),
                    _ => None,
                };
                let (a, ai, b, bi) = if *dtr_left {
                    (dtr, filler_index, head, None)
                } else {
                    (head, None, dtr, filler_index)
                };
                self.dump_node(a, nums, depth + 1, ai, out);
                self.dump_node(b, nums, depth + 1, bi, out);
                let _ = writeln!(out, "{pad}]");
            }
            Deriv::Lex { .. } => {}
        }
    }

    /// Surface bracketing: fillers and the complements of functional heads
    /// are bracketed, everything else is flat.
    pub fn bracketing(&self) -> String {
        let nums = self.trace_numbers();
        let mut out = Vec::new();
        self.bracket(&self.root, &nums, &mut out);
        format!("[{}]", out.join(" "))
    }

    fn bracket(&self, n: &Deriv, nums: &BTreeMap<TraceId, usize>, out: &mut Vec<String>) {
        match n {
            Deriv::Node { schema: Schema::HeadFiller(id), head, dtr, .. } => {
                let mut ws = Vec::new();
                self.words(dtr, nums, &mut ws);
                out.push(format!("[{}]_{}", ws.join(" "), nums[id]));
                self.bracket(head, nums, out);
            }
            Deriv::Node { schema: Schema::FuncComb, head, dtr, .. } => {
                self.words(head, nums, out);
                let mut inner = Vec::new();
                self.bracket(dtr, nums, &mut inner);
                out.push(format!("[{}]", inner.join(" ")));
            }
            Deriv::Node { head, dtr, dtr_left, .. } => {
                let (a, b) = if *dtr_left { (dtr, head) } else { (head, dtr) };
                self.bracket(a, nums, out);
                self.bracket(b, nums, out);
            }
            _ => self.words(n, nums, out),
        }
    }
}
