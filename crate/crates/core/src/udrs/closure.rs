use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;

use super::{Label, SubordConstraint, UdrsStore};

/// Reflexive-transitive closure of the unconditional subordination order.
///
/// Labels are first quotiented by `=`; `<=`, `<`, structural embedding and
/// `l <= top` then live on the quotient. A path containing at least one
/// strict link is strict.
#[derive(Clone, Debug)]
pub struct Closure {
    index: BTreeMap<Label, usize>,
    classes: Vec<Vec<Label>>,
    top: usize,
    leq: Vec<Vec<bool>>,
    lt: Vec<Vec<bool>>,
}

impl Closure {
    pub fn compute(store: &UdrsStore) -> Closure {
        Self::compute_with(store, &[])
    }

    /// Closure of the store plus extra unconditional constraints.
    pub fn compute_with(store: &UdrsStore, extra: &[SubordConstraint]) -> Closure {
        let labels: Vec<Label> = store.labels().into_iter().collect();
        let pos: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let unconditional: Vec<&SubordConstraint> = store
            .constraints()
            .chain(extra.iter())
            .filter(|c| !c.is_conditional())
            .collect();

        let mut uf = UnionFind::<usize>::new(labels.len());
        for c in &unconditional {
            if let SubordConstraint::Eq(a, b) = c {
                if let (Some(&i), Some(&j)) = (pos.get(a), pos.get(b)) {
                    uf.union(i, j);
                }
            }
        }
        let mut rep_to_class: BTreeMap<usize, usize> = BTreeMap::new();
        let mut classes: Vec<Vec<Label>> = Vec::new();
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            let rep = uf.find(i);
            let next = classes.len();
            let cls = *rep_to_class.entry(rep).or_insert(next);
            if cls == classes.len() {
                classes.push(Vec::new());
            }
            classes[cls].push(*l);
            index.insert(*l, cls);
        }
        let n = classes.len();
        let top = index[&store.top];

        let mut weak = vec![vec![false; n]; n];
        let mut strict_edge = vec![vec![false; n]; n];
        for (i, row) in weak.iter_mut().enumerate() {
            row[i] = true;
            row[top] = true;
        }
        for c in &unconditional {
            match c {
                SubordConstraint::Leq(a, b) => weak[index[a]][index[b]] = true,
                SubordConstraint::Lt(a, b) => strict_edge[index[a]][index[b]] = true,
                _ => {}
            }
        }
        for cond in store.conds() {
            let parent = index[&cond.label];
            for child in cond.children() {
                strict_edge[index[&child]][parent] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if strict_edge[i][j] {
                    weak[i][j] = true;
                }
            }
        }
        // Warshall on the weak relation.
        for k in 0..n {
            for i in 0..n {
                if weak[i][k] {
                    for j in 0..n {
                        if weak[k][j] {
                            weak[i][j] = true;
                        }
                    }
                }
            }
        }
        // lt = weak ; strict_edge ; weak
        let mut lt = vec![vec![false; n]; n];
        for a in 0..n {
            for b in 0..n {
                if !strict_edge[a][b] {
                    continue;
                }
                for i in 0..n {
                    if !weak[i][a] {
                        continue;
                    }
                    for j in 0..n {
                        if weak[b][j] {
                            lt[i][j] = true;
                        }
                    }
                }
            }
        }
        Closure { index, classes, top, leq: weak, lt }
    }

    pub fn class_of(&self, l: Label) -> Option<usize> {
        self.index.get(&l).copied()
    }

    pub fn classes(&self) -> &[Vec<Label>] {
        &self.classes
    }

    pub fn top_class(&self) -> usize {
        self.top
    }

    pub fn class_leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn class_lt(&self, a: usize, b: usize) -> bool {
        self.lt[a][b]
    }

    pub fn leq(&self, a: Label, b: Label) -> bool {
        if a == b {
            return true;
        }
        match (self.class_of(a), self.class_of(b)) {
            (Some(i), Some(j)) => self.leq[i][j],
            (_, Some(j)) => j == self.top,
            _ => false,
        }
    }

    pub fn lt(&self, a: Label, b: Label) -> bool {
        match (self.class_of(a), self.class_of(b)) {
            (Some(i), Some(j)) => self.lt[i][j],
            _ => false,
        }
    }

    pub fn eq(&self, a: Label, b: Label) -> bool {
        a == b
            || matches!((self.class_of(a), self.class_of(b)), (Some(i), Some(j)) if i == j)
    }

    /// A label lying strictly below itself, if any.
    pub fn strict_cycle(&self) -> Option<Label> {
        (0..self.classes.len())
            .find(|&i| self.lt[i][i])
            .map(|i| self.classes[i][0])
    }

    pub fn is_consistent(&self) -> bool {
        self.strict_cycle().is_none()
    }

    /// All `(a, b, strict)` pairs over labels with `a <= b`.
    pub fn pairs(&self) -> Vec<(Label, Label, bool)> {
        let mut out = Vec::new();
        for (a, &i) in &self.index {
            for (b, &j) in &self.index {
                if self.leq[i][j] {
                    out.push((*a, *b, self.lt[i][j]));
                }
            }
        }
        out
    }
}
