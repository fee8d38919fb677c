//! Depth-truncated fragments of the functional Beth model.
//!
//! Branching numbers range over `0..B`, node lengths over `0..=D` and the
//! positions `n` of a table over `0..D`. Node components of level `k >= 1`
//! are drawn from a fixed finite basis of `a_k`: `K^k`, `N^k(K^k)`, the path
//! reader `nu_k(id)`, the path reader shifted by one, and the functional
//! `g^k` that reads the first entry of the path.

mod domain;
mod format;
mod interp;
pub mod lemmas;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use itertools::Itertools;
use thiserror::Error;

/// Successor tables kept per model, keyed by the source table.
const SUCC_CACHE_LIMIT: usize = 1 << 14;

pub use domain::{
    choice_witness_m1, classify, columns, enumerate_domain, extension, lambda_transport,
    lawless_extend, nu, permutations_of, shortest, Class, Domain, Permutation, Transport,
};
pub use format::{parse_node, parse_table, print_node, print_table};
pub use interp::{force_all, force_bounded, interp_expr, val_atomic, Carriers, Env, Verdict};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BsError {
    #[error("invalid truncation: {0}")]
    Params(String),
    #[error("enumeration needs {needed} objects, over the cap of {cap}")]
    Blowup { needed: String, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("incomplete table: {0}")]
    Incomplete(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unbound {0}")]
    Unbound(String),
    #[error("sort mismatch: {0}")]
    Sort(String),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationParams {
    pub s: u32,
    pub depth: u32,
    pub base: u32,
    /// Largest number of objects any enumeration may produce.
    pub cap: usize,
}

impl TruncationParams {
    pub const DEFAULT_CAP: usize = 2_000_000;

    pub fn new(s: u32, depth: u32, base: u32) -> Result<TruncationParams, BsError> {
        let p = TruncationParams { s, depth, base, cap: Self::DEFAULT_CAP };
        p.validate()?;
        Ok(p)
    }

    pub fn with_cap(self, cap: usize) -> TruncationParams {
        TruncationParams { cap, ..self }
    }

    pub fn validate(&self) -> Result<(), BsError> {
        if self.s < 1 {
            return Err(BsError::Params("s must be at least 1".into()));
        }
        if self.depth < 1 {
            return Err(BsError::Params("depth must be at least 1".into()));
        }
        if self.base < 2 {
            return Err(BsError::Params("base must be at least 2".into()));
        }
        Ok(())
    }
}

/// An element of some `a_k`: a number or a functional table.
#[derive(Debug, Clone)]
pub enum Elem {
    Num(u32),
    Fun(Arc<Table>),
}

impl Elem {
    pub fn level(&self) -> u32 {
        match self {
            Elem::Num(_) => 0,
            Elem::Fun(t) => t.level,
        }
    }

    pub fn as_num(&self) -> Option<u32> {
        match self {
            Elem::Num(n) => Some(*n),
            Elem::Fun(_) => None,
        }
    }

    pub fn as_table(&self) -> Option<&Arc<Table>> {
        match self {
            Elem::Num(_) => None,
            Elem::Fun(t) => Some(t),
        }
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Elem) -> bool {
        match (self, other) {
            (Elem::Num(a), Elem::Num(b)) => a == b,
            (Elem::Fun(a), Elem::Fun(b)) => Arc::ptr_eq(a, b) || **a == **b,
            _ => false,
        }
    }
}

impl Eq for Elem {}

impl Hash for Elem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Elem::Num(n) => {
                0u8.hash(state);
                n.hash(state);
            }
            Elem::Fun(t) => {
                1u8.hash(state);
                t.hash(state);
            }
        }
    }
}

/// A partial table `(x, n) -> a_{k-1}` over the truncated `d_{k-1}`, stored
/// densely as `entries[x * depth + n]`.
#[derive(Debug, Clone)]
pub struct Table {
    pub level: u32,
    pub depth: u32,
    pub entries: Vec<Option<Elem>>,
    /// Set when the table was built as `nu_k(xi)`.
    pub certificate: Option<Permutation>,
}

impl Table {
    pub fn new(level: u32, depth: u32, entries: Vec<Option<Elem>>) -> Table {
        Table { level, depth, entries, certificate: None }
    }

    pub fn get(&self, x: usize, n: u32) -> Option<&Elem> {
        if n >= self.depth {
            return None;
        }
        self.entries.get(x * self.depth as usize + n as usize)?.as_ref()
    }

    pub fn nodes(&self) -> usize {
        self.entries.len() / self.depth as usize
    }
}

impl PartialEq for Table {
    fn eq(&self, other: &Table) -> bool {
        self.level == other.level && self.depth == other.depth && self.entries == other.entries
    }
}

impl Eq for Table {}

impl Hash for Table {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.entries.hash(state);
    }
}

/// A node: `s` component sequences of equal length. Component 0 holds
/// numbers, component `i >= 1` holds indices into the basis of `a_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeB {
    pub comps: Vec<Vec<u32>>,
}

impl NodeB {
    pub fn root(components: usize) -> NodeB {
        NodeB { comps: vec![Vec::new(); components] }
    }

    pub fn lh(&self) -> usize {
        self.comps.first().map_or(0, Vec::len)
    }

    /// The first `k` components.
    pub fn prefix(&self, k: usize) -> NodeB {
        NodeB { comps: self.comps[..k].to_vec() }
    }

    /// The initial node of length `len`.
    pub fn truncate(&self, len: usize) -> NodeB {
        NodeB { comps: self.comps.iter().map(|c| c[..len].to_vec()).collect() }
    }

    /// `self` is later than or equal to `other`: every component of `other`
    /// is an initial segment of the corresponding component of `self`.
    pub fn extends(&self, other: &NodeB) -> bool {
        self.comps.len() == other.comps.len()
            && self.comps.iter().zip(&other.comps).all(|(a, b)| a.starts_with(b))
    }
}

/// The truncated `d_j`: nodes with `j + 1` components and length at most `D`,
/// listed parents first.
#[derive(Debug, Clone)]
pub struct Tree {
    pub level: usize,
    pub nodes: Vec<NodeB>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    /// Projection to `d_{j-1}` (empty for `j = 0`).
    pub down: Vec<usize>,
    index: HashMap<NodeB, usize>,
    depth: usize,
}

impl Tree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn find(&self, node: &NodeB) -> Option<usize> {
        self.index.get(node).copied()
    }

    pub fn lh(&self, i: usize) -> usize {
        self.nodes[i].lh()
    }

    pub fn is_frontier(&self, i: usize) -> bool {
        self.lh(i) == self.depth
    }

    /// Ancestors of `i` from the root down to `i` itself.
    pub fn ancestors(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut cur = i;
        while let Some(p) = self.parent[cur] {
            out.push(p);
            cur = p;
        }
        out.reverse();
        out
    }

    /// The ancestor of `i` of length `len`.
    pub fn ancestor_at(&self, i: usize, len: usize) -> Option<usize> {
        let mut cur = i;
        if self.lh(cur) < len {
            return None;
        }
        while self.lh(cur) > len {
            cur = self.parent[cur]?;
        }
        Some(cur)
    }

    /// `beta` is later than or equal to `alpha`.
    pub fn later_or_eq(&self, beta: usize, alpha: usize) -> bool {
        self.ancestor_at(beta, self.lh(alpha)) == Some(alpha)
    }

    pub fn frontier(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&i| self.is_frontier(i))
    }
}

/// A materialised truncation: the node carriers and the trees `d_0..d_{s-1}`.
#[derive(Debug, Clone)]
pub struct Model {
    pub params: TruncationParams,
    /// `basis[i]` (`i < s`) is the carrier of node components of level `i`;
    /// `basis[s]` holds the same standard objects at level `s`.
    pub basis: Vec<Vec<Elem>>,
    pub names: Vec<Vec<String>>,
    pub trees: Vec<Tree>,
    khat: Vec<Arc<Table>>,
    succ_cache: Arc<Mutex<HashMap<usize, (Arc<Table>, Elem)>>>,
}

impl Model {
    pub fn new(params: TruncationParams) -> Result<Model, BsError> {
        params.validate()?;
        let s = params.s as usize;
        let mut model = Model {
            params,
            basis: vec![(0..params.base).map(Elem::Num).collect()],
            names: vec![(0..params.base).map(|n| n.to_string()).collect()],
            trees: Vec::new(),
            khat: Vec::new(),
            succ_cache: Arc::default(),
        };
        model.trees.push(model.build_tree(0)?);
        model.khat.push(model.constant_table(1, Elem::Num(0)));
        for k in 1..s {
            let (basis, names) = model.build_basis(k as u32);
            model.basis.push(basis);
            model.names.push(names);
            model.trees.push(model.build_tree(k)?);
            let prev = Elem::Fun(model.khat[k - 1].clone());
            model.khat.push(model.constant_table(k as u32 + 1, prev));
        }
        let (basis, names) = model.build_basis(s as u32);
        model.basis.push(basis);
        model.names.push(names);
        Ok(model)
    }

    pub fn depth(&self) -> u32 {
        self.params.depth
    }

    /// The domain `M = d_{s-1}`.
    pub fn m(&self) -> &Tree {
        self.trees.last().expect("s >= 1")
    }

    pub fn root(&self) -> usize {
        0
    }

    /// The table domain of level-`k` functionals.
    pub fn domain_of(&self, k: u32) -> Result<&Tree, BsError> {
        if k == 0 || k as usize > self.trees.len() {
            return Err(BsError::Sort(format!("no level-{k} functionals for s = {}", self.params.s)));
        }
        Ok(&self.trees[k as usize - 1])
    }

    /// `K^k`: zero at level 1, `K^{k-1}` everywhere above.
    pub fn khat(&self, k: u32) -> Result<Arc<Table>, BsError> {
        self.domain_of(k)?;
        Ok(self.khat[k as usize - 1].clone())
    }

    /// The table with the same value everywhere.
    pub fn constant_table(&self, level: u32, value: Elem) -> Arc<Table> {
        let n = self.trees[level as usize - 1].len() * self.depth() as usize;
        Arc::new(Table::new(level, self.depth(), vec![Some(value); n]))
    }

    fn build_basis(&self, k: u32) -> (Vec<Elem>, Vec<String>) {
        let khat = self.khat[k as usize - 1].clone();
        let succ = self.successor(k, &Elem::Fun(khat.clone())).expect("K is a table");
        let c = self.basis[k as usize - 1].len() as u32;
        let d = self.depth() as usize;
        let id = Permutation { level: k, maps: vec![(0..c).collect(); d] };
        let shift = Permutation { level: k, maps: vec![(0..c).map(|i| (i + 1) % c).collect(); d] };
        let reader = nu(self, k, &id).expect("identity is a permutation");
        let shifted = nu(self, k, &shift).expect("a shift is a permutation");
        let first = self.first_entry_reader(k);
        let candidates = [
            (Elem::Fun(khat), format!("K{k}")),
            (succ, format!("N{k}K{k}")),
            (Elem::Fun(Arc::new(reader)), format!("nu{k}")),
            (Elem::Fun(Arc::new(shifted)), format!("nus{k}")),
            (Elem::Fun(Arc::new(first)), format!("g{k}")),
        ];
        let mut elems: Vec<Elem> = Vec::new();
        let mut names = Vec::new();
        for (e, name) in candidates {
            if !elems.contains(&e) {
                elems.push(e);
                names.push(name);
            }
        }
        (elems, names)
    }

    /// `g(x, n) = <<x>_{k-1}>_0` once the path is nonempty.
    pub fn first_entry_reader(&self, k: u32) -> Table {
        let tree = &self.trees[k as usize - 1];
        let carrier = &self.basis[k as usize - 1];
        let d = self.depth() as usize;
        let mut entries = vec![None; tree.len() * d];
        for (x, node) in tree.nodes.iter().enumerate() {
            if let Some(&c) = node.comps[k as usize - 1].first() {
                for n in 0..d {
                    entries[x * d + n] = Some(carrier[c as usize].clone());
                }
            }
        }
        Table::new(k, self.depth(), entries)
    }

    fn build_tree(&self, level: usize) -> Result<Tree, BsError> {
        let d = self.depth() as usize;
        let branching: u128 = self.basis[..=level].iter().map(|b| b.len() as u128).product();
        let total: u128 = (0..=d as u32).map(|m| branching.saturating_pow(m)).fold(0, u128::saturating_add);
        if total > self.params.cap as u128 {
            return Err(BsError::Blowup { needed: format!("{total} nodes of d_{level}"), cap: self.params.cap });
        }
        let choices: Vec<Vec<u32>> = self.basis[..=level]
            .iter()
            .map(|b| (0..b.len() as u32).collect())
            .collect();
        let steps: Vec<Vec<u32>> = choices.into_iter().multi_cartesian_product().collect();
        let mut tree = Tree {
            level,
            nodes: vec![NodeB::root(level + 1)],
            parent: vec![None],
            children: vec![Vec::new()],
            down: Vec::new(),
            index: HashMap::new(),
            depth: d,
        };
        let mut i = 0;
        while i < tree.nodes.len() {
            if tree.nodes[i].lh() < d {
                for step in &steps {
                    let mut node = tree.nodes[i].clone();
                    for (comp, &c) in node.comps.iter_mut().zip(step) {
                        comp.push(c);
                    }
                    let j = tree.nodes.len();
                    tree.nodes.push(node);
                    tree.parent.push(Some(i));
                    tree.children.push(Vec::new());
                    tree.children[i].push(j);
                }
            }
            i += 1;
        }
        tree.index = tree.nodes.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        if level > 0 {
            let lower = &self.trees[level - 1];
            tree.down = tree
                .nodes
                .iter()
                .map(|n| lower.find(&n.prefix(level)).expect("projection is a node"))
                .collect();
        }
        Ok(tree)
    }

    /// Projects node `i` of `d_from` to `d_to` (`to <= from`).
    pub fn project(&self, from: usize, i: usize, to: usize) -> usize {
        let mut cur = i;
        for level in (to + 1..=from).rev() {
            cur = self.trees[level].down[cur];
        }
        cur
    }

    /// `Ap^k` at node `alpha` of `M`: `f(alpha(k), n)`.
    pub fn ap(&self, f: &Table, alpha: usize, n: u32) -> Option<Elem> {
        let top = self.trees.len() - 1;
        let k = f.level as usize;
        if k == 0 || k > self.trees.len() {
            return None;
        }
        let x = self.project(top, alpha, k - 1);
        f.get(x, n).cloned()
    }

    /// `N^l` on an element of level `l`: `S^0 = S`, `S^{l+1}(f) = S^l . f`.
    pub fn successor(&self, l: u32, e: &Elem) -> Result<Elem, BsError> {
        match e {
            Elem::Num(n) if l == 0 => Ok(Elem::Num(n.saturating_add(1))),
            Elem::Fun(t) if l == t.level && l >= 1 => {
                let key = Arc::as_ptr(t) as usize;
                if let Some((_, v)) = self.succ_cache.lock().expect("cache lock").get(&key) {
                    return Ok(v.clone());
                }
                let entries = t
                    .entries
                    .iter()
                    .map(|v| v.as_ref().map(|v| self.successor(l - 1, v)).transpose())
                    .collect::<Result<Vec<_>, _>>()?;
                let v = Elem::Fun(Arc::new(Table::new(l, t.depth, entries)));
                let mut cache = self.succ_cache.lock().expect("cache lock");
                if cache.len() >= SUCC_CACHE_LIMIT {
                    cache.clear();
                }
                cache.insert(key, (t.clone(), v.clone()));
                Ok(v)
            }
            other => Err(BsError::Sort(format!("N{l} applied to a level-{} object", other.level()))),
        }
    }

    /// Every defined entry is defined with the same value at all later nodes.
    pub fn is_monotone(&self, f: &Table) -> bool {
        let Ok(tree) = self.domain_of(f.level) else { return false };
        let d = self.depth() as usize;
        f.entries.len() == tree.len() * d
            && (0..tree.len()).all(|x| {
                (0..d).all(|n| match &f.entries[x * d + n] {
                    None => true,
                    Some(v) => tree.children[x].iter().all(|&c| f.entries[c * d + n].as_ref() == Some(v)),
                })
            })
    }

    /// Every position receives a value on every maximal path by depth `D`.
    pub fn is_complete(&self, f: &Table) -> bool {
        let Ok(tree) = self.domain_of(f.level) else { return false };
        let d = self.depth() as usize;
        f.entries.len() == tree.len() * d
            && tree.frontier().all(|x| (0..d).all(|n| f.entries[x * d + n].is_some()))
    }

    /// Root column total.
    pub fn is_lawlike(&self, f: &Table) -> bool {
        (0..self.depth()).all(|n| f.get(0, n).is_some())
    }

    /// Membership in the truncated `a_k`: values in `a_{k-1}`, monotone and
    /// complete to depth `D`.
    pub fn is_member(&self, f: &Table) -> bool {
        let mut seen: HashMap<*const Table, bool> = HashMap::new();
        self.member_memo(f, &mut seen)
    }

    fn member_memo(&self, f: &Table, seen: &mut HashMap<*const Table, bool>) -> bool {
        if f.depth != self.depth() || !self.is_monotone(f) || !self.is_complete(f) {
            return false;
        }
        f.entries.iter().flatten().all(|v| match v {
            Elem::Num(_) => f.level == 1,
            Elem::Fun(t) => {
                if t.level + 1 != f.level {
                    return false;
                }
                let key = Arc::as_ptr(t);
                if let Some(&ok) = seen.get(&key) {
                    return ok;
                }
                let ok = self.member_memo(t, seen);
                seen.insert(key, ok);
                ok
            }
        })
    }

    /// Position of an element in the basis of level `level`.
    pub fn basis_index(&self, level: usize, e: &Elem) -> Option<u32> {
        self.basis.get(level)?.iter().position(|b| b == e).map(|i| i as u32)
    }

    /// Short name of a basis element, or a description of the object.
    pub fn describe(&self, e: &Elem) -> String {
        match e {
            Elem::Num(n) => n.to_string(),
            Elem::Fun(t) => match self.basis_index(t.level as usize, e) {
                Some(i) => self.names[t.level as usize][i as usize].clone(),
                None => format!("<level-{} table>", t.level),
            },
        }
    }

    /// Lowercase symbol names for the functional basis elements, as usable in
    /// formulas.
    pub fn basis_symbols(&self) -> Vec<(String, Elem)> {
        let mut out = Vec::new();
        for level in 1..self.basis.len() {
            for (name, e) in self.names[level].iter().zip(&self.basis[level]) {
                if name.starts_with(|c: char| c.is_ascii_lowercase()) {
                    out.push((name.clone(), e.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for TruncationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={} D={} B={}", self.s, self.depth, self.base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(s: u32, d: u32) -> Model {
        Model::new(TruncationParams::new(s, d, 2).unwrap()).unwrap()
    }

    #[test]
    fn tree_sizes() {
        let m = model(1, 1);
        assert_eq!(m.m().len(), 3);
        let m = model(2, 2);
        assert_eq!(m.trees[0].len(), 7);
        assert_eq!(m.m().len(), 111);
    }

    #[test]
    fn khat_is_lawlike_member() {
        for (s, d) in [(1, 1), (1, 3), (2, 2)] {
            let m = model(s, d);
            for k in 1..=s {
                let k_hat = m.khat(k).unwrap();
                assert!(m.is_member(&k_hat));
                assert!(m.is_lawlike(&k_hat));
            }
        }
    }

    #[test]
    fn basis_members() {
        let m = model(2, 2);
        for e in &m.basis[1] {
            assert!(m.is_member(e.as_table().unwrap()), "{}", m.describe(e));
        }
    }

    #[test]
    fn order_is_componentwise_prefix() {
        let m = model(2, 2);
        let t = m.m();
        for b in 0..t.len() {
            for a in 0..t.len() {
                assert_eq!(t.later_or_eq(b, a), t.nodes[b].extends(&t.nodes[a]));
            }
        }
    }

    #[test]
    fn blowup_guard() {
        let p = TruncationParams::new(3, 3, 2).unwrap().with_cap(10_000);
        assert!(matches!(Model::new(p), Err(BsError::Blowup { .. })));
    }
}
