//! Finite models and truth of scoped readings.
//!
//! Model files are line based:
//!
//! ```text
//! # comment
//! entity b1 b2 i1
//! group B = {b1,b2}
//! rel supply: (b1,i1); (b2,i1)
//! rel gather: (B,g)
//! ```
//!
//! A group name inside a tuple stands for its member set. Individual
//! referents range over entities, group referents over nonempty entity sets.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::disambig::{DrsArg, DrsBox, DrsCond, Reading};
use crate::udrs::{Referent, Sort};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Value {
    Entity(String),
    Group(BTreeSet<String>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Schema { line: usize, msg: String },
    #[error("GEN has no truth definition")]
    GenNotEvaluable,
    #[error("relation {rel} has arity {expected} in the model but is used with {found} arguments")]
    ArityMismatch { rel: String, expected: usize, found: usize },
    #[error("relation {0} takes a propositional argument")]
    PropNotEvaluable(String),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Model {
    entities: Vec<String>,
    groups: BTreeMap<String, BTreeSet<String>>,
    rels: BTreeMap<String, (usize, BTreeSet<Vec<Value>>)>,
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '-')
}

impl Model {
    pub fn parse(src: &str) -> Result<Model, ModelError> {
        let mut m = Model::default();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let err = |msg: String| ModelError::Schema { line, msg };
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (kw, rest) = text.split_once(char::is_whitespace).unwrap_or((text, ""));
            let rest = rest.trim();
            match kw {
                "entity" => {
                    if rest.is_empty() {
                        return Err(err("entity needs a name".into()));
                    }
                    for name in rest.split_whitespace() {
                        if !is_name(name) {
                            return Err(err(format!("bad entity name {name:?}")));
                        }
                        if m.entities.iter().any(|e| e == name) || m.groups.contains_key(name) {
                            return Err(err(format!("duplicate name {name}")));
                        }
                        m.entities.push(name.to_string());
                    }
                }
                "group" => {
                    let (name, set) = rest.split_once('=').ok_or_else(|| err("expected group NAME = {..}".into()))?;
                    let name = name.trim();
                    if !is_name(name) || m.groups.contains_key(name) || m.entities.iter().any(|e| e == name) {
                        return Err(err(format!("bad or duplicate group name {name:?}")));
                    }
                    let set = set.trim();
                    let inner = set
                        .strip_prefix('{')
                        .and_then(|s| s.strip_suffix('}'))
                        .ok_or_else(|| err("group members must be in braces".into()))?;
                    let mut members = BTreeSet::new();
                    for e in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                        if !m.entities.iter().any(|x| x == e) {
                            return Err(err(format!("unknown entity {e}")));
                        }
                        members.insert(e.to_string());
                    }
                    if members.is_empty() {
                        return Err(err(format!("group {name} is empty")));
                    }
                    m.groups.insert(name.to_string(), members);
                }
                "rel" => {
                    let (name, tuples) = rest.split_once(':').ok_or_else(|| err("expected rel NAME: (..); ..".into()))?;
                    let name = name.trim();
                    if !is_name(name) {
                        return Err(err(format!("bad relation name {name:?}")));
                    }
                    let mut arity = m.rels.get(name).map(|r| r.0);
                    let mut ext = m.rels.get(name).map(|r| r.1.clone()).unwrap_or_default();
                    for t in tuples.split(';').map(str::trim).filter(|s| !s.is_empty()) {
                        let inner = t
                            .strip_prefix('(')
                            .and_then(|s| s.strip_suffix(')'))
                            .ok_or_else(|| err(format!("tuple {t:?} must be in parentheses")))?;
                        let mut tuple = Vec::new();
                        for a in inner.split(',').map(str::trim) {
                            tuple.push(m.value_of(a).ok_or_else(|| err(format!("unknown name {a:?}")))?);
                        }
                        match arity {
                            Some(n) if n != tuple.len() => {
                                return Err(err(format!("relation {name} mixes arities {n} and {}", tuple.len())))
                            }
                            _ => arity = Some(tuple.len()),
                        }
                        ext.insert(tuple);
                    }
                    m.rels.insert(name.to_string(), (arity.unwrap_or(0), ext));
                }
                other => return Err(err(format!("unknown keyword {other:?}"))),
            }
        }
        Ok(m)
    }

    fn value_of(&self, name: &str) -> Option<Value> {
        if let Some(g) = self.groups.get(name) {
            return Some(Value::Group(g.clone()));
        }
        self.entities.iter().any(|e| e == name).then(|| Value::Entity(name.to_string()))
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    fn domain(&self, sort: Sort) -> Vec<Value> {
        match sort {
            Sort::Individual => self.entities.iter().cloned().map(Value::Entity).collect(),
            Sort::Group => {
                let n = self.entities.len().min(16);
                (1u32..(1 << n))
                    .map(|mask| {
                        Value::Group(
                            (0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.entities[i].clone()).collect(),
                        )
                    })
                    .collect()
            }
        }
    }

    fn holds(&self, rel: &str, tuple: &[Value]) -> Result<bool, ModelError> {
        match self.rels.get(rel) {
            None => Ok(false),
            Some((n, _)) if *n != tuple.len() && *n != 0 => {
                Err(ModelError::ArityMismatch { rel: rel.to_string(), expected: *n, found: tuple.len() })
            }
            Some((_, ext)) => Ok(ext.contains(tuple)),
        }
    }
}

type Env = BTreeMap<Referent, Value>;

fn refs_of(c: &DrsCond) -> Vec<Referent> {
    match c {
        DrsCond::Atom { args, .. } => args
            .iter()
            .filter_map(|a| match a {
                DrsArg::Ref(r) => Some(*r),
                DrsArg::Prop(_) => None,
            })
            .collect(),
        DrsCond::Member { elem, group } => vec![*elem, *group],
        DrsCond::Card { group, .. } => vec![*group],
        _ => Vec::new(),
    }
}

fn is_simple(c: &DrsCond) -> bool {
    matches!(c, DrsCond::Member { .. } | DrsCond::Card { .. })
        || matches!(c, DrsCond::Atom { args, .. } if args.iter().all(|a| matches!(a, DrsArg::Ref(_))))
}

struct Eval<'a> {
    m: &'a Model,
}

impl Eval<'_> {
    fn simple(&self, c: &DrsCond, g: &Env) -> Result<bool, ModelError> {
        match c {
            DrsCond::Atom { rel, args } => {
                let mut tuple = Vec::new();
                for a in args {
                    match a {
                        DrsArg::Ref(r) => tuple.push(g[r].clone()),
                        DrsArg::Prop(_) => return Err(ModelError::PropNotEvaluable(rel.clone())),
                    }
                }
                self.m.holds(rel, &tuple)
            }
            DrsCond::Member { elem, group } => Ok(match (&g[elem], &g[group]) {
                (Value::Entity(e), Value::Group(s)) => s.contains(e),
                _ => false,
            }),
            DrsCond::Card { group, n } => Ok(matches!(&g[group], Value::Group(s) if s.len() == *n as usize)),
            _ => unreachable!(),
        }
    }

    fn complex(&self, c: &DrsCond, g: &Env) -> Result<bool, ModelError> {
        match c {
            DrsCond::Neg(b) => Ok(self.embeddings(b, g, Some(1))?.is_empty()),
            DrsCond::Implies(r, s) => {
                for e in self.embeddings(r, g, None)? {
                    if self.embeddings(s, &e, Some(1))?.is_empty() {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            DrsCond::Diamond { at_least, restr, scope } => {
                let mut n = 0u32;
                for e in self.embeddings(restr, g, None)? {
                    if !self.embeddings(scope, &e, Some(1))?.is_empty() {
                        n += 1;
                        if n >= *at_least {
                            return Ok(true);
                        }
                    }
                }
                Ok(n >= *at_least)
            }
            DrsCond::Gen(..) => Err(ModelError::GenNotEvaluable),
            DrsCond::Atom { rel, .. } => Err(ModelError::PropNotEvaluable(rel.clone())),
            _ => self.simple(c, g),
        }
    }

    /// Extensions of `g` over the box universe verifying all conditions,
    /// stopping after `limit` of them.
    fn embeddings(&self, b: &DrsBox, g: &Env, limit: Option<usize>) -> Result<Vec<Env>, ModelError> {
        let mut out = Vec::new();
        let mut env = g.clone();
        self.extend(b, 0, &mut env, limit, &mut out)?;
        Ok(out)
    }

    fn extend(
        &self,
        b: &DrsBox,
        k: usize,
        env: &mut Env,
        limit: Option<usize>,
        out: &mut Vec<Env>,
    ) -> Result<(), ModelError> {
        if limit.is_some_and(|n| out.len() >= n) {
            return Ok(());
        }
        // Simple conditions whose referents are now all bound are checked early.
        let bound = |r: &Referent, env: &Env| env.contains_key(r) && !b.universe[k..].contains(r);
        for c in b.conds.iter().filter(|c| is_simple(c)) {
            let rs = refs_of(c);
            let newly = k > 0 && rs.contains(&b.universe[k - 1]);
            if (newly || k == 0) && rs.iter().all(|r| bound(r, env)) && !self.simple(c, env)? {
                return Ok(());
            }
        }
        if k == b.universe.len() {
            for c in b.conds.iter().filter(|c| !is_simple(c)) {
                if !self.complex(c, env)? {
                    return Ok(());
                }
            }
            out.push(env.clone());
            return Ok(());
        }
        let r = b.universe[k];
        let saved = env.get(&r).cloned();
        for v in self.m.domain(r.sort) {
            env.insert(r, v);
            self.extend(b, k + 1, env, limit, out)?;
        }
        match saved {
            Some(v) => env.insert(r, v),
            None => env.remove(&r),
        };
        Ok(())
    }
}

/// Whether `r` is true in `m`.
pub fn evaluate(r: &Reading, m: &Model) -> Result<bool, ModelError> {
    if r.root.has_gen() {
        return Err(ModelError::GenNotEvaluable);
    }
    let ev = Eval { m };
    Ok(!ev.embeddings(&r.root, &Env::new(), Some(1))?.is_empty())
}

/// Truth of a bare box, for readings built by hand.
pub fn evaluate_box(b: &DrsBox, m: &Model) -> Result<bool, ModelError> {
    if b.has_gen() {
        return Err(ModelError::GenNotEvaluable);
    }
    Ok(!Eval { m }.embeddings(b, &Env::new(), Some(1))?.is_empty())
}
