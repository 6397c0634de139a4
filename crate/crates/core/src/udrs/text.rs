//! Line-oriented text format for stores.
//!
//! ```text
//! ls : l_1 l_1_2
//! l_1 : l_1_1 => l_1_2
//! l_1_1 : dref x
//! l_3 : pay_attention(x)
//! l_3 <= l_1_2
//! (l_4 < l_2) -> (l_2 <= l_top)
//! ```
//!
//! Condition lines come first, then constraint lines; each group is sorted
//! lexicographically. Parsing and printing round-trip on that canonical form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use super::{
    Arg, CondBody, Condition, DeferredSlot, IdGen, Label, Ls, Provenance, Referent, Sort,
    SubordConstraint, UdrsError, UdrsStore,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Store { line: usize, source: UdrsError },
}

pub fn label_name(store: &UdrsStore, l: Label) -> String {
    if let Some(h) = store.label_hint(l) {
        return h.to_string();
    }
    if l == store.top {
        "l_top".to_string()
    } else {
        format!("l_{}", l.0)
    }
}

pub fn referent_name(store: &UdrsStore, r: Referent) -> String {
    if let Some(h) = store.ref_hint(r) {
        return h.to_string();
    }
    match r.sort {
        Sort::Individual => format!("x_{}", r.id),
        Sort::Group => format!("X_{}", r.id),
    }
}

/// Sequential referent names: x y z u v w x7 x8 ... (upper case for groups).
pub fn nth_referent_name(sort: Sort, n: usize) -> String {
    const BASE: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
    let s = if n < BASE.len() { BASE[n].to_string() } else { format!("x{}", n + 1) };
    match sort {
        Sort::Individual => s,
        Sort::Group => s.to_uppercase(),
    }
}

fn arg_text(store: &UdrsStore, a: &Arg) -> String {
    match a {
        Arg::Ref(r) => referent_name(store, *r),
        Arg::Prop(l) => format!("{{{}}}", label_name(store, *l)),
        Arg::Slot(s) => match store.slot(*s) {
            Some(slot) if slot.is_resolved() => {
                referent_name(store, slot.resolved_to.expect("resolved"))
            }
            Some(DeferredSlot { source_ls: Some(ls), .. }) => format!(
                "dref_res({},{})",
                label_name(store, ls.l_max),
                label_name(store, ls.l_min)
            ),
            _ => "dref_res()".to_string(),
        },
    }
}

pub fn condition_text(store: &UdrsStore, c: &Condition) -> String {
    let l = |x: Label| label_name(store, x);
    let r = |x: Referent| referent_name(store, x);
    let body = match &c.body {
        CondBody::Atom { rel, args } => {
            let a: Vec<String> = args.iter().map(|a| arg_text(store, a)).collect();
            format!("{}({})", rel, a.join(", "))
        }
        CondBody::Intro(x) => format!("dref {}", r(*x)),
        CondBody::Implies { restr, scope } => format!("{} => {}", l(*restr), l(*scope)),
        CondBody::Neg(inner) => format!("not {}", l(*inner)),
        CondBody::Diamond { at_least, restr, scope } => {
            format!("{} <atleast{}> {}", l(*restr), at_least, l(*scope))
        }
        CondBody::Gen { restr, scope } => format!("gen {} {}", l(*restr), l(*scope)),
        CondBody::Member { elem, group } => format!("{} in {}", r(*elem), r(*group)),
        CondBody::Card { group, n } => format!("|{}| = {}", r(*group), n),
    };
    format!("{} : {}", l(c.label), body)
}

pub fn constraint_text(store: &UdrsStore, c: &SubordConstraint) -> String {
    let l = |x: Label| label_name(store, x);
    match c {
        SubordConstraint::Leq(a, b) => format!("{} <= {}", l(*a), l(*b)),
        SubordConstraint::Lt(a, b) => format!("{} < {}", l(*a), l(*b)),
        SubordConstraint::Eq(a, b) => format!("{} = {}", l(*a), l(*b)),
        SubordConstraint::Cond { ante, cons } => format!(
            "({} < {}) -> ({})",
            l(ante.0),
            l(ante.1),
            constraint_text(store, cons)
        ),
    }
}

/// Prints the store with its current label and referent names.
pub fn print(store: &UdrsStore) -> String {
    let mut conds: Vec<String> = store.conds().map(|c| condition_text(store, c)).collect();
    conds.sort();
    let mut cons: Vec<String> = store.constraints().map(|c| constraint_text(store, c)).collect();
    cons.sort();
    cons.dedup();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "ls : {} {}",
        label_name(store, store.ls.l_max),
        label_name(store, store.ls.l_min)
    );
    for line in conds.iter().chain(cons.iter()) {
        out.push_str(line);
        out.push('\n');
    }
    out
}

/// Constraint lines tagged with the principle that introduced them.
pub fn audit(store: &UdrsStore) -> String {
    let mut rows: Vec<(Provenance, String)> = store
        .subord()
        .map(|(c, p)| (p, constraint_text(store, c)))
        .collect();
    rows.sort();
    let mut out = String::new();
    for (p, t) in rows {
        let _ = writeln!(out, "{:<6} {}", p.tag(), t);
    }
    out
}

/// Renames labels and referents deterministically.
///
/// Labels that are not embedded by any condition are numbered `l_1, l_2, ...`
/// in creation order; embedded labels are named after their parent
/// (`l_1_1` restrictor, `l_1_2` scope). Referents are named `x, y, z, ...`
/// (groups `X, Y, ...`) in the order of the labels introducing them.
pub fn canonicalize(store: &UdrsStore) -> UdrsStore {
    let mut children: BTreeMap<Label, Vec<Label>> = BTreeMap::new();
    let mut embedded: BTreeSet<Label> = BTreeSet::new();
    for c in store.conds() {
        let ch = c.children();
        embedded.extend(ch.iter().copied());
        children.entry(c.label).or_default().extend(ch);
    }
    let mut names: BTreeMap<Label, String> = BTreeMap::new();
    let mut order: Vec<Label> = Vec::new();
    fn visit(
        l: Label,
        name: String,
        children: &BTreeMap<Label, Vec<Label>>,
        names: &mut BTreeMap<Label, String>,
        order: &mut Vec<Label>,
    ) {
        if names.contains_key(&l) {
            return;
        }
        names.insert(l, name.clone());
        order.push(l);
        if let Some(ch) = children.get(&l) {
            let mut k = 0;
            for c in ch {
                if !names.contains_key(c) {
                    k += 1;
                    visit(*c, format!("{}_{}", name, k), children, names, order);
                }
            }
        }
    }
    visit(store.top, "l_top".to_string(), &children, &mut names, &mut order);
    let mut n = 0;
    for l in store.labels() {
        if l == store.top || embedded.contains(&l) || names.contains_key(&l) {
            continue;
        }
        n += 1;
        visit(l, format!("l_{}", n), &children, &mut names, &mut order);
    }
    // Embedded labels whose parent was itself unreachable (cyclic input).
    for l in store.labels() {
        if !names.contains_key(&l) {
            n += 1;
            visit(l, format!("l_{}", n), &children, &mut names, &mut order);
        }
    }

    let rank: BTreeMap<Label, usize> = order.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    let mut refs: Vec<(usize, Referent)> = store
        .referents()
        .into_iter()
        .map(|r| {
            let at = store
                .conds()
                .find(|c| c.body == CondBody::Intro(r))
                .map(|c| rank[&c.label])
                .unwrap_or(usize::MAX);
            (at, r)
        })
        .collect();
    refs.sort();
    let mut counts = [0usize; 2];
    let mut ref_names = BTreeMap::new();
    for (_, r) in refs {
        let k = match r.sort {
            Sort::Individual => 0,
            Sort::Group => 1,
        };
        ref_names.insert(r, nth_referent_name(r.sort, counts[k]));
        counts[k] += 1;
    }
    let mut out = store.clone();
    out.replace_hints(names, ref_names);
    out
}

pub fn print_canonical(store: &UdrsStore) -> String {
    print(&canonicalize(store))
}

struct Names {
    labels: BTreeMap<String, Label>,
    refs: BTreeMap<String, Referent>,
    gen: IdGen,
}

impl Names {
    fn label(&mut self, name: &str, line: usize) -> Result<Label, TextError> {
        if !is_label_name(name) {
            return Err(syntax(line, format!("expected a label, found `{name}`")));
        }
        if name == "l_top" {
            return Ok(Label::TOP);
        }
        Ok(*self.labels.entry(name.to_string()).or_insert_with(|| self.gen.label()))
    }

    fn referent(&mut self, name: &str, line: usize) -> Result<Referent, TextError> {
        let first = name
            .chars()
            .next()
            .ok_or_else(|| syntax(line, "empty referent name".into()))?;
        if !first.is_alphabetic() || is_label_name(name) || !name.chars().all(is_ident_char) {
            return Err(syntax(line, format!("bad referent name `{name}`")));
        }
        let sort = if first.is_uppercase() { Sort::Group } else { Sort::Individual };
        if let Some(r) = self.refs.get(name) {
            return Ok(*r);
        }
        let r = Referent { id: self.gen.next_raw(), sort };
        self.refs.insert(name.to_string(), r);
        Ok(r)
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_label_name(s: &str) -> bool {
    s.len() > 2 && s.starts_with("l_") && s.chars().all(is_ident_char)
}

fn syntax(line: usize, msg: String) -> TextError {
    TextError::Syntax { line, msg }
}

/// Parses the text format. Every condition and constraint gets provenance
/// `user`; names become display hints.
pub fn parse(text: &str) -> Result<UdrsStore, TextError> {
    let mut names = Names { labels: BTreeMap::new(), refs: BTreeMap::new(), gen: IdGen::new() };
    let mut store = UdrsStore::empty();
    let mut ls: Option<Ls> = None;
    let mut conds = Vec::new();
    let mut cons = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(rest) = t.strip_prefix("ls : ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 2 {
                return Err(syntax(line, "ls needs two labels".into()));
            }
            ls = Some(Ls::new(names.label(parts[0], line)?, names.label(parts[1], line)?));
            continue;
        }
        if t.starts_with('(') {
            cons.push((line, parse_constraint(t, &mut names, line)?));
            continue;
        }
        let head = t.split_whitespace().next().unwrap_or("");
        let after = t[head.len()..].trim_start();
        if let Some(rest) = after.strip_prefix(": ") {
            let label = names.label(head, line)?;
            let body = parse_body(rest.trim(), &mut names, &mut store, line)?;
            conds.push((line, Condition::new(label, body)));
        } else {
            cons.push((line, parse_constraint(t, &mut names, line)?));
        }
    }
    for (line, c) in conds {
        store
            .insert_condition(c)
            .map_err(|source| TextError::Store { line, source })?;
    }
    for (line, c) in cons {
        store
            .insert_constraint(c, Provenance::User)
            .map_err(|source| TextError::Store { line, source })?;
    }
    if let Some(ls) = ls {
        store.ls = ls;
    }
    for (n, l) in &names.labels {
        store.set_label_hint(*l, n.clone());
    }
    for (n, r) in &names.refs {
        store.set_ref_hint(*r, n.clone());
    }
    store.reserve_ids(&names.gen);
    Ok(store)
}

fn parse_body(
    s: &str,
    names: &mut Names,
    store: &mut UdrsStore,
    line: usize,
) -> Result<CondBody, TextError> {
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        ["dref", x] => return Ok(CondBody::Intro(names.referent(x, line)?)),
        ["not", a] => return Ok(CondBody::Neg(names.label(a, line)?)),
        ["gen", a, b] => {
            return Ok(CondBody::Gen { restr: names.label(a, line)?, scope: names.label(b, line)? })
        }
        [a, "=>", b] => {
            return Ok(CondBody::Implies {
                restr: names.label(a, line)?,
                scope: names.label(b, line)?,
            })
        }
        [a, q, b] if q.starts_with("<atleast") && q.ends_with('>') => {
            let n: u32 = q["<atleast".len()..q.len() - 1]
                .parse()
                .map_err(|_| syntax(line, format!("bad quantifier `{q}`")))?;
            return Ok(CondBody::Diamond {
                at_least: n,
                restr: names.label(a, line)?,
                scope: names.label(b, line)?,
            });
        }
        [x, "in", g] => {
            return Ok(CondBody::Member {
                elem: names.referent(x, line)?,
                group: names.referent(g, line)?,
            })
        }
        [g, "=", n] if g.starts_with('|') && g.ends_with('|') && g.len() > 2 => {
            let n: u32 = n.parse().map_err(|_| syntax(line, format!("bad cardinality `{n}`")))?;
            return Ok(CondBody::Card { group: names.referent(&g[1..g.len() - 1], line)?, n });
        }
        _ => {}
    }
    let open = s.find('(').ok_or_else(|| syntax(line, format!("unrecognized condition `{s}`")))?;
    if !s.ends_with(')') {
        return Err(syntax(line, "atom must end with `)`".into()));
    }
    let rel = &s[..open];
    if rel.is_empty() || !rel.chars().all(is_ident_char) {
        return Err(syntax(line, format!("bad relation name `{rel}`")));
    }
    let inner = &s[open + 1..s.len() - 1];
    let mut args = Vec::new();
    for piece in split_args(inner) {
        let a = piece.trim();
        if a.is_empty() {
            return Err(syntax(line, "empty argument".into()));
        }
        if let Some(rest) = a.strip_prefix("dref_res(") {
            let rest = rest
                .strip_suffix(')')
                .ok_or_else(|| syntax(line, "unterminated dref_res".into()))?;
            let mut slot = DeferredSlot::new(names.gen.slot());
            if !rest.trim().is_empty() {
                let parts: Vec<&str> = rest.split(',').map(str::trim).collect();
                if parts.len() != 2 {
                    return Err(syntax(line, "dref_res takes two labels".into()));
                }
                slot.source_ls =
                    Some(Ls::new(names.label(parts[0], line)?, names.label(parts[1], line)?));
            }
            let id = slot.id;
            store.insert_slot(slot);
            args.push(Arg::Slot(id));
        } else if let Some(rest) = a.strip_prefix('{') {
            let rest = rest.strip_suffix('}').ok_or_else(|| syntax(line, "unterminated `{`".into()))?;
            args.push(Arg::Prop(names.label(rest.trim(), line)?));
        } else {
            args.push(Arg::Ref(names.referent(a, line)?));
        }
    }
    Ok(CondBody::Atom { rel: rel.to_string(), args })
}

fn split_args(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_constraint(s: &str, names: &mut Names, line: usize) -> Result<SubordConstraint, TextError> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix('(') {
        let close = rest.find(')').ok_or_else(|| syntax(line, "unterminated antecedent".into()))?;
        let ante = &rest[..close];
        let words: Vec<&str> = ante.split_whitespace().collect();
        let (a, b) = match words.as_slice() {
            [a, "<", b] => (names.label(a, line)?, names.label(b, line)?),
            _ => return Err(syntax(line, "antecedent must be `a < b`".into())),
        };
        let tail = rest[close + 1..].trim();
        let tail = tail
            .strip_prefix("->")
            .ok_or_else(|| syntax(line, "expected `->`".into()))?
            .trim();
        let inner = tail
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| syntax(line, "consequent must be parenthesized".into()))?;
        let cons = parse_constraint(inner, names, line)?;
        return Ok(SubordConstraint::cond(a, b, cons));
    }
    let words: Vec<&str> = s.split_whitespace().collect();
    match words.as_slice() {
        [a, "<=", b] => Ok(SubordConstraint::Leq(names.label(a, line)?, names.label(b, line)?)),
        [a, "<", b] => Ok(SubordConstraint::Lt(names.label(a, line)?, names.label(b, line)?)),
        [a, "=", b] => Ok(SubordConstraint::Eq(names.label(a, line)?, names.label(b, line)?)),
        _ => Err(syntax(line, format!("unrecognized constraint `{s}`"))),
    }
}
