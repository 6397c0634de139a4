//! File-driven lexical entries.
//!
//! The lexicon is a TOML document holding a list of `[[entry]]` tables:
//!
//! | field          | kinds            | meaning                                                  |
//! |----------------|------------------|----------------------------------------------------------|
//! | `form`         | all              | surface form, possibly several tokens                    |
//! | `kind`         | all              | `verb`, `det_quant`, `det_indef`, `det_def_plural`, `noun`, `proper_name`, `pronoun`, `func_comp`, `func_vfin`, `neg` |
//! | `case`         | NPs, dets        | `nom`, `dat`, `acc`, `loc`, or a list of these           |
//! | `num`          | dets, nouns      | `sg` or `pl` (required on determiners)                   |
//! | `vform`        | verbs            | `fin` or `inf` (required on verbs)                       |
//! | `subcat`       | verbs            | list of `{ case, type }`, `type` one of `dp`, `pp`, `cp` |
//! | `rel`          | verbs, nouns, names | predicate name                                        |
//! | `select`       | verbs            | `collective` or `distributive` reading of the subject    |
//! | `quant`        | `det_quant`      | `every` or `at_least`                                    |
//! | `card`         | dets             | numeral: bound for `at_least`, group size for plurals    |
//! | `standalone`   | `det_quant`      | the determiner is a complete NP (`everybody`)            |
//! | `head_initial` | verbs            | complements follow the verb                              |
//! | `subord`       | all              | extra template constraints over the kind's placeholders  |
//!
//! Placeholders usable in `subord`: `top` everywhere; verbs `l`, `lmax`
//! and `p1`, `p2`, ... for clausal arguments; `det_quant` `l1 l11 l12`;
//! `det_indef` `l1`; `det_def_plural` `l1 l12`; names and pronouns `ln`;
//! negation `l2 l21`.

use std::collections::BTreeMap;
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::udrs::{
    Arg, CondBody, Condition, IdGen, Label, Ls, Provenance, Referent, SlotId, SubordConstraint,
    UdrsStore,
};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum HeadType {
    Verb,
    DetQuant,
    DetIndef,
    DetDefPlural,
    Noun,
    ProperName,
    FuncComp,
    FuncVfin,
    Neg,
    Pronoun,
}

impl HeadType {
    fn parse(s: &str) -> Option<HeadType> {
        Some(match s {
            "verb" => HeadType::Verb,
            "det_quant" => HeadType::DetQuant,
            "det_indef" => HeadType::DetIndef,
            "det_def_plural" => HeadType::DetDefPlural,
            "noun" => HeadType::Noun,
            "proper_name" => HeadType::ProperName,
            "func_comp" => HeadType::FuncComp,
            "func_vfin" => HeadType::FuncVfin,
            "neg" => HeadType::Neg,
            "pronoun" => HeadType::Pronoun,
            _ => return None,
        })
    }

    pub fn is_det(self) -> bool {
        matches!(self, HeadType::DetQuant | HeadType::DetIndef | HeadType::DetDefPlural)
    }

    pub fn is_func(self) -> bool {
        matches!(self, HeadType::FuncComp | HeadType::FuncVfin)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Case {
    Nom,
    Dat,
    Acc,
    Loc,
}

impl Case {
    fn parse(s: &str) -> Option<Case> {
        Some(match s {
            "nom" => Case::Nom,
            "dat" => Case::Dat,
            "acc" => Case::Acc,
            "loc" => Case::Loc,
            _ => return None,
        })
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::Nom => "nom",
            Case::Dat => "dat",
            Case::Acc => "acc",
            Case::Loc => "loc",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Num {
    Sg,
    Pl,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum VForm {
    Fin,
    Inf,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Category {
    pub head_type: HeadType,
    pub case: Option<Case>,
    pub num: Option<Num>,
    pub vform: Option<VForm>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ArgType {
    Dp,
    Pp,
    Cp,
}

/// One SUBCAT element: the case and phrase type the verb expects.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArgSpec {
    pub case: Option<Case>,
    pub ty: ArgType,
}

impl fmt::Display for ArgSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = match self.ty {
            ArgType::Dp => "DP",
            ArgType::Pp => "PP",
            ArgType::Cp => "CP",
        };
        match self.case {
            Some(c) => write!(f, "{t}:{c}"),
            None => f.write_str(t),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Select {
    Collective,
    Distributive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum QuantForce {
    Every,
    AtLeast(u32),
}

/// A verb argument position in the template atom.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArgSlot {
    Slot(SlotId),
    Prop(Label),
}

/// Skeleton store with placeholder ids plus the ids instantiation needs to
/// know about.
#[derive(Clone, Debug)]
pub struct Template {
    pub store: UdrsStore,
    /// Where a noun complement's condition goes.
    pub anchor: Option<Label>,
    pub referent: Option<Referent>,
    pub args: Vec<ArgSlot>,
}

#[derive(Clone, Debug)]
pub struct LexEntry {
    pub form: String,
    pub category: Category,
    pub subcat: Vec<ArgSpec>,
    pub rel: Option<String>,
    pub selects_plural_reading: Option<Select>,
    pub quant: Option<QuantForce>,
    pub card: Option<u32>,
    pub standalone: bool,
    pub head_initial: bool,
    pub template: Template,
    pub line: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LexiconError {
    #[error("line {line}: field `{field}`: {msg}")]
    Schema { line: usize, field: String, msg: String },
    #[error("line {line}: template of `{form}` is inconsistent")]
    InconsistentTemplate { line: usize, form: String },
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<LexEntry>>,
    max_tokens: usize,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawArg {
    case: Option<String>,
    #[serde(rename = "type")]
    ty: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    form: String,
    kind: String,
    case: Option<OneOrMany>,
    num: Option<String>,
    vform: Option<String>,
    subcat: Option<Vec<RawArg>>,
    rel: Option<String>,
    select: Option<String>,
    quant: Option<String>,
    card: Option<u32>,
    standalone: Option<bool>,
    head_initial: Option<bool>,
    subord: Option<Vec<String>>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    entry: Vec<toml::Spanned<RawEntry>>,
}

const FRAGMENT: &str = include_str!("../data/fragment.toml");

fn line_of(src: &str, offset: usize) -> usize {
    src[..offset.min(src.len())].matches('\n').count() + 1
}

impl Lexicon {
    /// The lexicon covering the example sentences shipped with the crate.
    pub fn fragment() -> Lexicon {
        Lexicon::load(FRAGMENT).expect("bundled lexicon is valid")
    }

    pub fn load(src: &str) -> Result<Lexicon, LexiconError> {
        let raw: RawFile = toml::from_str(src).map_err(|e| LexiconError::Schema {
            line: e.span().map(|s| line_of(src, s.start)).unwrap_or(0),
            field: String::new(),
            msg: e.message().to_string(),
        })?;
        let mut lex = Lexicon::default();
        for spanned in raw.entry {
            let line = line_of(src, spanned.span().start);
            for e in build_entries(spanned.into_inner(), line)? {
                lex.insert(e);
            }
        }
        Ok(lex)
    }

    pub fn insert(&mut self, e: LexEntry) {
        self.max_tokens = self.max_tokens.max(e.form.split_whitespace().count());
        self.entries.entry(e.form.clone()).or_default().push(e);
    }

    /// Number of entries (a form with several case variants counts once per
    /// variant).
    pub fn len(&self) -> usize {
        self.entries.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, form: &str) -> &[LexEntry] {
        self.entries.get(form).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn max_tokens(&self) -> usize {
        self.max_tokens
    }

    pub fn entries(&self) -> impl Iterator<Item = &LexEntry> {
        self.entries.values().flatten()
    }
}

fn schema(line: usize, field: &str, msg: impl Into<String>) -> LexiconError {
    LexiconError::Schema { line, field: field.to_string(), msg: msg.into() }
}

fn build_entries(raw: RawEntry, line: usize) -> Result<Vec<LexEntry>, LexiconError> {
    let form = raw
        .form
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ");
    if form.is_empty() {
        return Err(schema(line, "form", "empty form"));
    }
    let head_type = HeadType::parse(&raw.kind)
        .ok_or_else(|| schema(line, "kind", format!("unknown kind `{}`", raw.kind)))?;
    let cases: Vec<Option<Case>> = match &raw.case {
        None => vec![None],
        Some(OneOrMany::One(c)) => vec![Some(parse_case(c, line)?)],
        Some(OneOrMany::Many(cs)) if cs.is_empty() => {
            return Err(schema(line, "case", "empty case list"))
        }
        Some(OneOrMany::Many(cs)) => {
            cs.iter().map(|c| parse_case(c, line).map(Some)).collect::<Result<_, _>>()?
        }
    };
    let num = match raw.num.as_deref() {
        None => None,
        Some("sg") => Some(Num::Sg),
        Some("pl") => Some(Num::Pl),
        Some(o) => return Err(schema(line, "num", format!("unknown number `{o}`"))),
    };
    let vform = match raw.vform.as_deref() {
        None => None,
        Some("fin") => Some(VForm::Fin),
        Some("inf") => Some(VForm::Inf),
        Some(o) => return Err(schema(line, "vform", format!("unknown verb form `{o}`"))),
    };
    if head_type.is_det() && num.is_none() {
        return Err(schema(line, "num", "determiners must carry num"));
    }
    if head_type == HeadType::Verb && vform.is_none() {
        return Err(schema(line, "vform", "verbs must carry vform"));
    }
    let mut subcat = Vec::new();
    for a in raw.subcat.iter().flatten() {
        let ty = match a.ty.as_str() {
            "dp" => ArgType::Dp,
            "pp" => ArgType::Pp,
            "cp" => ArgType::Cp,
            o => return Err(schema(line, "subcat", format!("unknown argument type `{o}`"))),
        };
        let case = a.case.as_deref().map(|c| parse_case(c, line)).transpose()?;
        match (ty, case) {
            (ArgType::Cp, Some(_)) => {
                return Err(schema(line, "subcat", "clausal arguments carry no case"))
            }
            (ArgType::Dp | ArgType::Pp, None) => {
                return Err(schema(line, "subcat", "nominal arguments need a case"))
            }
            _ => {}
        }
        subcat.push(ArgSpec { case, ty });
    }
    if head_type == HeadType::Verb && subcat.is_empty() {
        return Err(schema(line, "subcat", "verbs need at least one argument"));
    }
    if head_type != HeadType::Verb && raw.subcat.is_some() {
        return Err(schema(line, "subcat", "only verbs subcategorize"));
    }
    if matches!(head_type, HeadType::Verb | HeadType::Noun | HeadType::ProperName)
        && raw.rel.is_none()
    {
        return Err(schema(line, "rel", "missing predicate name"));
    }
    if let Some(rel) = &raw.rel {
        if rel.is_empty() || !rel.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(schema(line, "rel", format!("bad predicate name `{rel}`")));
        }
    }
    let select = match raw.select.as_deref() {
        None => None,
        Some(_) if head_type != HeadType::Verb => {
            return Err(schema(line, "select", "only verbs select plural readings"))
        }
        Some("collective") => Some(Select::Collective),
        Some("distributive") => Some(Select::Distributive),
        Some(o) => return Err(schema(line, "select", format!("unknown reading `{o}`"))),
    };
    let quant = match (head_type, raw.quant.as_deref()) {
        (HeadType::DetQuant, Some("every")) => Some(QuantForce::Every),
        (HeadType::DetQuant, Some("at_least")) => Some(QuantForce::AtLeast(raw.card.unwrap_or(1))),
        (HeadType::DetQuant, Some(o)) => {
            return Err(schema(line, "quant", format!("unknown quantifier `{o}`")))
        }
        (HeadType::DetQuant, None) => return Err(schema(line, "quant", "missing quantifier force")),
        (_, Some(_)) => return Err(schema(line, "quant", "only det_quant entries quantify")),
        (_, None) => None,
    };
    if raw.card == Some(0) {
        return Err(schema(line, "card", "numerals start at 1"));
    }
    let standalone = raw.standalone.unwrap_or(false);
    if standalone && head_type != HeadType::DetQuant {
        return Err(schema(line, "standalone", "only det_quant entries can stand alone"));
    }
    let head_initial = raw.head_initial.unwrap_or(false);
    if head_initial && head_type != HeadType::Verb {
        return Err(schema(line, "head_initial", "only verbs have a head direction"));
    }

    let mut out = Vec::new();
    for case in cases {
        let category = Category { head_type, case, num, vform };
        let mut entry = LexEntry {
            form: form.clone(),
            category,
            subcat: subcat.clone(),
            rel: raw.rel.clone(),
            selects_plural_reading: select,
            quant,
            card: raw.card,
            standalone,
            head_initial,
            template: Template {
                store: UdrsStore::empty(),
                anchor: None,
                referent: None,
                args: Vec::new(),
            },
            line,
        };
        entry.template = build_template(&entry, raw.subord.as_deref().unwrap_or(&[]))?;
        out.push(entry);
    }
    Ok(out)
}

fn parse_case(s: &str, line: usize) -> Result<Case, LexiconError> {
    Case::parse(s).ok_or_else(|| schema(line, "case", format!("unknown case `{s}`")))
}

fn build_template(e: &LexEntry, extra: &[String]) -> Result<Template, LexiconError> {
    let mut gen = IdGen::new();
    let mut u = UdrsStore::empty();
    let mut names: BTreeMap<String, Label> = BTreeMap::new();
    names.insert("top".into(), Label::TOP);
    let mut anchor = None;
    let mut referent = None;
    let mut args = Vec::new();
    let bad = |_| LexiconError::InconsistentTemplate { line: e.line, form: e.form.clone() };
    let add = |u: &mut UdrsStore, c| u.insert_constraint(c, Provenance::Lex).map_err(bad);
    match e.category.head_type {
        HeadType::Verb => {
            let lmax = gen.label();
            let l = gen.label();
            names.insert("lmax".into(), lmax);
            names.insert("l".into(), l);
            let mut atom_args = Vec::new();
            for (i, a) in e.subcat.iter().enumerate() {
                if a.ty == ArgType::Cp {
                    let p = gen.label();
                    names.insert(format!("p{}", i + 1), p);
                    add(&mut u, SubordConstraint::Lt(p, l))?;
                    atom_args.push(Arg::Prop(p));
                    args.push(ArgSlot::Prop(p));
                } else {
                    let s = gen.slot();
                    atom_args.push(Arg::Slot(s));
                    args.push(ArgSlot::Slot(s));
                }
            }
            let rel = e.rel.clone().expect("validated");
            insert(&mut u, l, CondBody::Atom { rel, args: atom_args }, e)?;
            u.ls = Ls::new(lmax, l);
        }
        HeadType::DetQuant => {
            let l1 = gen.label();
            let l11 = gen.label();
            let l12 = gen.label();
            let x = gen.individual();
            names.insert("l1".into(), l1);
            names.insert("l11".into(), l11);
            names.insert("l12".into(), l12);
            let body = match e.quant.expect("validated") {
                QuantForce::Every => CondBody::Implies { restr: l11, scope: l12 },
                QuantForce::AtLeast(n) => CondBody::Diamond { at_least: n, restr: l11, scope: l12 },
            };
            insert(&mut u, l1, body, e)?;
            insert(&mut u, l11, CondBody::Intro(x), e)?;
            add(&mut u, SubordConstraint::Lt(l11, l1))?;
            add(&mut u, SubordConstraint::Lt(l12, l1))?;
            u.ls = Ls::new(l1, l12);
            anchor = Some(l11);
            referent = Some(x);
        }
        HeadType::DetIndef => {
            let l1 = gen.label();
            let x = gen.individual();
            names.insert("l1".into(), l1);
            insert(&mut u, l1, CondBody::Intro(x), e)?;
            add(&mut u, SubordConstraint::Eq(l1, l1))?;
            u.ls = Ls::new(l1, l1);
            anchor = Some(l1);
            referent = Some(x);
        }
        HeadType::DetDefPlural => {
            let l1 = gen.label();
            let l12 = gen.label();
            let xs = gen.group();
            names.insert("l1".into(), l1);
            names.insert("l12".into(), l12);
            insert(&mut u, l1, CondBody::Intro(xs), e)?;
            if let Some(n) = e.card {
                insert(&mut u, l1, CondBody::Card { group: xs, n }, e)?;
            }
            add(&mut u, SubordConstraint::Leq(l12, l1))?;
            u.ls = Ls::new(l1, l12);
            anchor = Some(l1);
            referent = Some(xs);
        }
        HeadType::ProperName | HeadType::Pronoun => {
            let ln = gen.label();
            let x = gen.individual();
            names.insert("ln".into(), ln);
            insert(&mut u, ln, CondBody::Intro(x), e)?;
            let rel = e.rel.clone().unwrap_or_else(|| e.form.replace(' ', "_"));
            insert(&mut u, ln, CondBody::Atom { rel, args: vec![Arg::Ref(x)] }, e)?;
            add(&mut u, SubordConstraint::Eq(ln, Label::TOP))?;
            u.ls = Ls::new(ln, ln);
            anchor = Some(ln);
            referent = Some(x);
        }
        HeadType::Neg => {
            let l2 = gen.label();
            let l21 = gen.label();
            names.insert("l2".into(), l2);
            names.insert("l21".into(), l21);
            insert(&mut u, l2, CondBody::Neg(l21), e)?;
            add(&mut u, SubordConstraint::Lt(l21, l2))?;
            u.ls = Ls::new(l2, l21);
        }
        HeadType::Noun | HeadType::FuncComp | HeadType::FuncVfin => {}
    }
    for s in extra {
        let c = parse_placeholder_constraint(s, &names).ok_or_else(|| {
            schema(e.line, "subord", format!("bad constraint or undeclared placeholder in `{s}`"))
        })?;
        add(&mut u, c)?;
    }
    u.reserve_ids(&gen);
    u.check_consistent()
        .map_err(|_| LexiconError::InconsistentTemplate { line: e.line, form: e.form.clone() })?;
    Ok(Template { store: u, anchor, referent, args })
}

fn insert(u: &mut UdrsStore, l: Label, body: CondBody, e: &LexEntry) -> Result<(), LexiconError> {
    u.insert_condition(Condition::new(l, body))
        .map_err(|err| schema(e.line, "kind", err.to_string()))
}

fn parse_placeholder_constraint(s: &str, names: &BTreeMap<String, Label>) -> Option<SubordConstraint> {
    let w: Vec<&str> = s.split_whitespace().collect();
    let [a, op, b] = w.as_slice() else { return None };
    let (a, b) = (*names.get(*a)?, *names.get(*b)?);
    Some(match *op {
        "<=" => SubordConstraint::Leq(a, b),
        "<" => SubordConstraint::Lt(a, b),
        "=" => SubordConstraint::Eq(a, b),
        _ => return None,
    })
}

/// A lexical item with fresh ids.
#[derive(Clone, Debug)]
pub struct Instance {
    pub store: UdrsStore,
    pub anchor: Option<Label>,
    pub referent: Option<Referent>,
    pub args: Vec<ArgSlot>,
}

/// Replaces every placeholder of the entry's template with fresh ids.
pub fn instantiate_template(entry: &LexEntry, gen: &mut IdGen) -> Instance {
    let t = &entry.template;
    let mut labels = BTreeMap::new();
    for l in t.store.labels() {
        if l != Label::TOP {
            labels.insert(l, gen.label());
        }
    }
    let mut refs = BTreeMap::new();
    for r in t.store.referents() {
        let fresh = match r.sort {
            crate::udrs::Sort::Individual => gen.individual(),
            crate::udrs::Sort::Group => gen.group(),
        };
        refs.insert(r, fresh);
    }
    let mut slots = BTreeMap::new();
    for s in t.store.slots() {
        slots.insert(s.id, gen.slot());
    }
    let mut store = t.store.renamed(&labels, &refs, &slots);
    store.reserve_ids(gen);
    let map_l = |l: Label| *labels.get(&l).unwrap_or(&l);
    Instance {
        store,
        anchor: t.anchor.map(map_l),
        referent: t.referent.map(|r| refs[&r]),
        args: t
            .args
            .iter()
            .map(|a| match a {
                ArgSlot::Slot(s) => ArgSlot::Slot(slots[s]),
                ArgSlot::Prop(p) => ArgSlot::Prop(map_l(*p)),
            })
            .collect(),
    }
}

/// One matched lexical item in the input.
#[derive(Clone, Debug)]
pub struct Token {
    pub start: usize,
    pub end: usize,
    pub text: String,
    pub entries: Vec<LexEntry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown word `{word}` at position {position}")]
pub struct UnknownWord {
    pub word: String,
    pub position: usize,
}

/// Splits a sentence into words, dropping punctuation.
pub fn words(sentence: &str) -> Vec<String> {
    sentence
        .split_whitespace()
        .map(|w| w.trim_matches(|c: char| matches!(c, ',' | '.' | '!' | '?' | ';' | ':' | '"')))
        .filter(|w| !w.is_empty())
        .map(str::to_string)
        .collect()
}

/// Greedy longest-first segmentation into lexical items.
pub fn segment(lex: &Lexicon, sentence: &str) -> Result<Vec<Token>, UnknownWord> {
    let ws = words(sentence);
    let lower: Vec<String> = ws.iter().map(|w| w.to_lowercase()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < ws.len() {
        let mut matched = None;
        for k in (1..=lex.max_tokens().min(ws.len() - i)).rev() {
            let form = lower[i..i + k].join(" ");
            let entries = lex.lookup(&form);
            if !entries.is_empty() {
                matched = Some((k, entries.to_vec()));
                break;
            }
        }
        let (k, entries) = matched.ok_or_else(|| UnknownWord { word: ws[i].clone(), position: i })?;
        out.push(Token { start: i, end: i + k, text: ws[i..i + k].join(" "), entries });
        i += k;
    }
    Ok(out)
}
