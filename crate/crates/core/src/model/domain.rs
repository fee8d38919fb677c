//! Enumeration of the truncated carriers, permutations, lawless tables,
//! transport along permutations and the constructive choice witness.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::{BsError, Elem, Model, NodeB, Table, Tree};

/// A family `xi^[n]` (`n < D`) of bijections on the basis of `a_{level-1}`,
/// given as index maps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    pub level: u32,
    pub maps: Vec<Vec<u32>>,
}

impl Permutation {
    pub fn identity(model: &Model, level: u32) -> Result<Permutation, BsError> {
        let c = carrier_size(model, level)? as u32;
        Ok(Permutation { level, maps: vec![(0..c).collect(); model.depth() as usize] })
    }

    /// The family using the same bijection at every position.
    pub fn diagonal(model: &Model, level: u32, map: Vec<u32>) -> Permutation {
        Permutation { level, maps: vec![map; model.depth() as usize] }
    }

    pub fn validate(&self, model: &Model) -> Result<(), BsError> {
        let c = carrier_size(model, self.level)?;
        if self.maps.len() != model.depth() as usize {
            return Err(BsError::Precondition(format!(
                "a permutation needs {} positions, got {}",
                model.depth(),
                self.maps.len()
            )));
        }
        for (n, map) in self.maps.iter().enumerate() {
            let mut seen = vec![false; c];
            if map.len() != c {
                return Err(BsError::Precondition(format!("position {n}: map has {} entries, carrier {c}", map.len())));
            }
            for &v in map {
                match seen.get_mut(v as usize) {
                    Some(s) if !*s => *s = true,
                    _ => return Err(BsError::Precondition(format!("position {n}: not a bijection"))),
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, n: usize, c: u32) -> u32 {
        self.maps[n][c as usize]
    }

    pub fn inverse(&self) -> Permutation {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (i, &v) in m.iter().enumerate() {
                    inv[v as usize] = i as u32;
                }
                inv
            })
            .collect();
        Permutation { level: self.level, maps }
    }

    pub fn is_identity(&self) -> bool {
        self.maps.iter().all(|m| m.iter().enumerate().all(|(i, &v)| i as u32 == v))
    }
}

fn carrier_size(model: &Model, level: u32) -> Result<usize, BsError> {
    if level == 0 || level > model.params.s {
        return Err(BsError::Sort(format!("no level-{level} permutations for s = {}", model.params.s)));
    }
    Ok(model.basis[level as usize - 1].len())
}

/// All bijections of `0..c`.
pub fn permutations_of(c: usize) -> Vec<Vec<u32>> {
    (0..c as u32).permutations(c).collect()
}

/// Classification of a table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Class {
    Lawlike,
    Lawless(Permutation),
    Neither,
}

/// The truncated carrier `a_k`, its node tree `d_k` (for `k < s`) and the
/// lawlike and lawless members with their certificates.
#[derive(Debug, Clone)]
pub struct Domain {
    pub k: u32,
    pub carrier: Vec<Elem>,
    pub nodes: Vec<NodeB>,
    pub lawlike: Vec<usize>,
    pub lawless: Vec<(usize, Permutation)>,
}

fn subtree(tree: &Tree, x: usize, out: &mut Vec<usize>) {
    out.push(x);
    for &c in &tree.children[x] {
        subtree(tree, c, out);
    }
}

/// Monotone columns complete to depth `D`, each as a list of maximal
/// constant subtrees `(node, value index)`.
fn column_shapes(tree: &Tree, x: usize, values: u32) -> Vec<Vec<(usize, u32)>> {
    let mut out: Vec<Vec<(usize, u32)>> = (0..values).map(|v| vec![(x, v)]).collect();
    if !tree.is_frontier(x) {
        let parts: Vec<Vec<Vec<(usize, u32)>>> =
            tree.children[x].iter().map(|&c| column_shapes(tree, c, values)).collect();
        for combo in parts.iter().map(|p| p.iter()).multi_cartesian_product() {
            out.push(combo.into_iter().flatten().copied().collect());
        }
    }
    out
}

fn column_count(tree: &Tree, x: usize, values: u128) -> u128 {
    if tree.is_frontier(x) {
        return values;
    }
    tree.children[x]
        .iter()
        .map(|&c| column_count(tree, c, values))
        .fold(1u128, u128::saturating_mul)
        .saturating_add(values)
}

/// All monotone, complete columns of a level-`k` table with values in
/// `values`, as dense vectors over `d_{k-1}`.
pub fn columns(model: &Model, k: u32, values: &[Elem]) -> Result<Vec<Vec<Option<Elem>>>, BsError> {
    let tree = model.domain_of(k)?;
    let count = column_count(tree, 0, values.len() as u128);
    if count > model.params.cap as u128 {
        return Err(BsError::Blowup { needed: format!("{count} columns"), cap: model.params.cap });
    }
    let mut cache: HashMap<usize, Vec<usize>> = HashMap::new();
    let shapes = column_shapes(tree, 0, values.len() as u32);
    Ok(shapes
        .into_iter()
        .map(|shape| {
            let mut col = vec![None; tree.len()];
            for (x, v) in shape {
                let nodes = cache.entry(x).or_insert_with(|| {
                    let mut out = Vec::new();
                    subtree(tree, x, &mut out);
                    out
                });
                for &y in nodes.iter() {
                    col[y] = Some(values[v as usize].clone());
                }
            }
            col
        })
        .collect())
}

/// Assembles a table from one column per position.
pub(crate) fn table_from_columns(model: &Model, k: u32, cols: &[&Vec<Option<Elem>>]) -> Table {
    let d = model.depth() as usize;
    let nodes = cols.first().map_or(0, |c| c.len());
    let mut entries = vec![None; nodes * d];
    for (n, col) in cols.iter().enumerate() {
        for (x, v) in col.iter().enumerate() {
            entries[x * d + n] = v.clone();
        }
    }
    Table::new(k, model.depth(), entries)
}

fn carrier_count(model: &Model, k: u32) -> u128 {
    if k == 0 {
        return model.params.base as u128;
    }
    let tree = &model.trees[k as usize - 1];
    let values = carrier_count(model, k - 1);
    column_count(tree, 0, values).saturating_pow(model.depth())
}

/// Enumerates the truncated `a_k` (`k <= s`) together with `d_k`, the lawlike
/// members and the lawless members with certificates.
pub fn enumerate_domain(model: &Model, k: u32) -> Result<Domain, BsError> {
    if k > model.params.s {
        return Err(BsError::Sort(format!("k = {k} exceeds s = {}", model.params.s)));
    }
    let nodes = model.trees.get(k as usize).map(|t| t.nodes.clone()).unwrap_or_default();
    if k == 0 {
        let carrier = model.basis[0].clone();
        return Ok(Domain { k, carrier, nodes, lawlike: Vec::new(), lawless: Vec::new() });
    }
    let count = carrier_count(model, k);
    if count > model.params.cap as u128 {
        return Err(BsError::Blowup { needed: format!("{count} members of a_{k}"), cap: model.params.cap });
    }
    let values = enumerate_domain(model, k - 1)?.carrier;
    let cols = columns(model, k, &values)?;
    let d = model.depth() as usize;
    let mut carrier = Vec::new();
    let mut lawlike = Vec::new();
    let mut lawless = Vec::new();
    for combo in std::iter::repeat(cols.iter()).take(d).multi_cartesian_product() {
        let table = table_from_columns(model, k, &combo);
        match classify(model, &table)? {
            Class::Lawlike => lawlike.push(carrier.len()),
            Class::Lawless(xi) => lawless.push((carrier.len(), xi)),
            Class::Neither => {}
        }
        carrier.push(Elem::Fun(Arc::new(table)));
    }
    Ok(Domain { k, carrier, nodes, lawlike, lawless })
}

/// `nu_k(xi)(x, n) = xi^[n](<<x>_{k-1}>_n)` for `n < lh(x)`, undefined otherwise.
pub fn nu(model: &Model, k: u32, xi: &Permutation) -> Result<Table, BsError> {
    if xi.level != k {
        return Err(BsError::Sort(format!("a level-{} permutation used at level {k}", xi.level)));
    }
    xi.validate(model)?;
    let tree = model.domain_of(k)?;
    let carrier = &model.basis[k as usize - 1];
    let d = model.depth() as usize;
    let mut entries = vec![None; tree.len() * d];
    for (x, node) in tree.nodes.iter().enumerate() {
        for (n, &c) in node.comps[k as usize - 1].iter().enumerate() {
            entries[x * d + n] = Some(carrier[xi.apply(n, c) as usize].clone());
        }
    }
    let mut table = Table::new(k, model.depth(), entries);
    table.certificate = Some(xi.clone());
    Ok(table)
}

/// Lawlike when the root column is total; lawless when the table is
/// `nu_k(xi)` for a family recovered from the table itself.
pub fn classify(model: &Model, f: &Table) -> Result<Class, BsError> {
    let k = f.level;
    let tree = model.domain_of(k)?;
    if model.is_lawlike(f) {
        return Ok(Class::Lawlike);
    }
    let c = model.basis[k as usize - 1].len();
    let d = model.depth() as usize;
    let mut maps: Vec<Vec<Option<u32>>> = vec![vec![None; c]; d];
    for (x, node) in tree.nodes.iter().enumerate() {
        let path = &node.comps[k as usize - 1];
        for n in 0..d {
            match (f.get(x, n as u32), path.get(n)) {
                (None, None) => {}
                (Some(v), Some(&src)) => {
                    let Some(dst) = model.basis_index(k as usize - 1, v) else {
                        return Ok(Class::Neither);
                    };
                    match maps[n][src as usize] {
                        None => maps[n][src as usize] = Some(dst),
                        Some(prev) if prev == dst => {}
                        Some(_) => return Ok(Class::Neither),
                    }
                }
                _ => return Ok(Class::Neither),
            }
        }
    }
    let maps: Option<Vec<Vec<u32>>> = maps.into_iter().map(|m| m.into_iter().collect()).collect();
    let Some(maps) = maps else { return Ok(Class::Neither) };
    let xi = Permutation { level: k, maps };
    Ok(match xi.validate(model) {
        Ok(()) => Class::Lawless(xi),
        Err(_) => Class::Neither,
    })
}

/// The lawless `h = nu_n(xi)` agreeing with `f` at `gamma` on `0..=x`, where
/// `xi^[y]` transposes `<<gamma>_{n-1}>_y` with `f(y)` at `gamma` for `y <= x`.
pub fn lawless_extend(model: &Model, f: &Table, x: u32, gamma: usize) -> Result<Table, BsError> {
    let level = f.level;
    model.domain_of(level)?;
    if x >= model.depth() {
        return Err(BsError::Precondition(format!("x = {x} is not below the depth {}", model.depth())));
    }
    let node = model
        .m()
        .nodes
        .get(gamma)
        .ok_or_else(|| BsError::Precondition(format!("no node {gamma}")))?;
    let mut xi = Permutation::identity(model, level)?;
    for y in 0..=x {
        let v = model
            .ap(f, gamma, y)
            .ok_or_else(|| BsError::Precondition(format!("f({y}) is undefined at gamma")))?;
        let dst = model.basis_index(level as usize - 1, &v).ok_or_else(|| {
            BsError::Precondition(format!("f({y}) at gamma lies outside the truncated carrier"))
        })?;
        let src = *node.comps[level as usize - 1]
            .get(y as usize)
            .ok_or_else(|| BsError::Precondition(format!("gamma is not longer than {y}")))?;
        let map = &mut xi.maps[y as usize];
        map[src as usize] = dst;
        map[dst as usize] = src;
    }
    nu(model, level, &xi)
}

/// The maps induced by a choice of permutations `xi_0, ..., xi_{s-1}`.
pub struct Transport<'a> {
    model: &'a Model,
    xis: Vec<Permutation>,
    cache: RefCell<HashMap<usize, (Arc<Table>, Arc<Table>)>>,
}

impl<'a> Transport<'a> {
    /// `xis[i]` acts on the basis of `a_i`.
    pub fn new(model: &'a Model, xis: Vec<Permutation>) -> Result<Transport<'a>, BsError> {
        if xis.len() != model.params.s as usize {
            return Err(BsError::Precondition(format!("need {} permutations, got {}", model.params.s, xis.len())));
        }
        for (i, xi) in xis.iter().enumerate() {
            if xi.level != i as u32 + 1 {
                return Err(BsError::Sort(format!("permutation {i} must have level {}", i + 1)));
            }
            xi.validate(model)?;
        }
        Ok(Transport { model, xis, cache: RefCell::new(HashMap::new()) })
    }

    pub fn identity(model: &'a Model) -> Transport<'a> {
        let xis = (1..=model.params.s).map(|l| Permutation::identity(model, l).expect("level in range")).collect();
        Transport::new(model, xis).expect("identity permutations are valid")
    }

    /// `eta_k(x, n) = (xi_k^[n])^{-1}(x)`.
    pub fn eta(&self, k: usize) -> Permutation {
        self.xis[k].inverse()
    }

    /// Applies `xi_k^[i]` to the `i`-th entry of a sequence.
    pub fn xi_tilde_tilde(&self, k: usize, seq: &[u32]) -> Vec<u32> {
        seq.iter().enumerate().map(|(i, &c)| self.xis[k].apply(i, c)).collect()
    }

    /// `xi~_k` on node `x` of `d_k`.
    pub fn xi_tilde(&self, k: usize, x: usize) -> usize {
        let tree = &self.model.trees[k];
        let node = &tree.nodes[x];
        let image = NodeB { comps: (0..=k).map(|i| self.xi_tilde_tilde(i, &node.comps[i])).collect() };
        tree.find(&image).expect("permutations preserve the truncated carriers")
    }

    /// `Lambda_k` on an element of `a_k`.
    pub fn lambda(&self, e: &Elem) -> Elem {
        match e {
            Elem::Num(_) => e.clone(),
            Elem::Fun(t) => Elem::Fun(self.lambda_table(t)),
        }
    }

    fn lambda_table(&self, t: &Arc<Table>) -> Arc<Table> {
        let key = Arc::as_ptr(t) as usize;
        if let Some((_, out)) = self.cache.borrow().get(&key) {
            return out.clone();
        }
        let k = t.level as usize;
        let tree = &self.model.trees[k - 1];
        let d = self.model.depth() as usize;
        let mut entries = vec![None; tree.len() * d];
        for x in 0..tree.len() {
            let y = self.xi_tilde(k - 1, x);
            for n in 0..d {
                entries[x * d + n] = t.get(y, n as u32).map(|v| self.lambda(v));
            }
        }
        let out = Arc::new(Table::new(t.level, t.depth, entries));
        self.cache.borrow_mut().insert(key, (t.clone(), out.clone()));
        out
    }
}

/// `Lambda_k(f)` for the permutations `xis` (levels `1..=s`).
pub fn lambda_transport(model: &Model, xis: &[Permutation], k: u32, f: &Elem) -> Result<Elem, BsError> {
    if f.level() != k {
        return Err(BsError::Sort(format!("a level-{} object given to Lambda_{k}", f.level())));
    }
    Ok(Transport::new(model, xis.to_vec())?.lambda(f))
}

/// Pads a node of `d_{m-1}` with `K^m, ..., K^{s-1}` entries to a node of `M`.
pub fn extension(model: &Model, a: &NodeB, m: usize) -> Result<NodeB, BsError> {
    let s = model.params.s as usize;
    if m == 0 || m > s || a.comps.len() != m {
        return Err(BsError::Precondition(format!("a node of d_{} is needed for m = {m}", m.saturating_sub(1))));
    }
    let len = a.lh();
    if a.comps.iter().any(|c| c.len() != len) {
        return Err(BsError::Precondition("components of unequal length".into()));
    }
    let mut comps = a.comps.clone();
    comps.extend((m..s).map(|_| vec![0; len]));
    Ok(NodeB { comps })
}

/// The ancestor of `alpha` of least length at which the oracle holds.
pub fn shortest(model: &Model, alpha: usize, x: u32, oracle: impl Fn(usize, u32) -> bool) -> Option<usize> {
    model.m().ancestors(alpha).into_iter().find(|&b| oracle(b, x))
}

/// The level-1 choice witness for `alpha |- all x ex y psi(x, y)` with `y`
/// searched in `0..ys`: 0 off the cone of `alpha` from its length on, the
/// least witness forced at the shortest node on the cone, undefined elsewhere.
pub fn choice_witness_m1(
    model: &Model,
    alpha: usize,
    psi: impl Fn(usize, u32, u32) -> bool,
    ys: u32,
) -> Result<Table, BsError> {
    let m = model.m();
    if alpha >= m.len() {
        return Err(BsError::Precondition(format!("no node {alpha}")));
    }
    let top = model.trees.len() - 1;
    let d0 = &model.trees[0];
    let a1 = model.project(top, alpha, 0);
    let la = m.lh(alpha);
    let d = model.depth() as usize;
    let exists = |b: usize, x: u32| (0..ys).any(|y| psi(b, x, y));
    let mut entries = vec![None; d0.len() * d];
    for u in 0..d0.len() {
        let on_cone = d0.later_or_eq(u, a1);
        let ext = if on_cone {
            let node = extension(model, &d0.nodes[u], 1)?;
            Some(m.find(&node).expect("extensions stay in the truncation"))
        } else {
            None
        };
        for x in 0..d as u32 {
            entries[u * d + x as usize] = match ext {
                None if d0.lh(u) >= la => Some(Elem::Num(0)),
                None => None,
                Some(e) if exists(e, x) => {
                    let beta = shortest(model, e, x, exists).expect("oracle holds at e");
                    (0..ys).find(|&y| psi(beta, x, y)).map(Elem::Num)
                }
                Some(_) => None,
            };
        }
    }
    let table = Table::new(1, model.depth(), entries);
    if !model.is_monotone(&table) {
        return Err(BsError::Precondition("the oracle is not persistent along the order".into()));
    }
    if !model.is_complete(&table) {
        return Err(BsError::Incomplete("some position stays undefined on a path to depth D".into()));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TruncationParams;

    fn model(s: u32, d: u32) -> Model {
        Model::new(TruncationParams::new(s, d, 2).unwrap()).unwrap()
    }

    #[test]
    fn domain_s1_d1() {
        let m = model(1, 1);
        let d0 = enumerate_domain(&m, 0).unwrap();
        assert_eq!(d0.carrier, vec![Elem::Num(0), Elem::Num(1)]);
        assert_eq!(d0.nodes.len(), 3);
        assert!(d0.nodes.iter().all(|n| n.comps.len() == 1));
    }

    #[test]
    fn a1_counts() {
        let m = model(1, 1);
        assert_eq!(enumerate_domain(&m, 1).unwrap().carrier.len(), 6);
        let m = model(2, 2);
        let a1 = enumerate_domain(&m, 1).unwrap();
        assert_eq!(a1.carrier.len(), 1444);
        assert_eq!(a1.lawlike.len(), 4);
        assert_eq!(a1.lawless.len(), 4);
        assert!(a1.carrier.iter().all(|e| m.is_member(e.as_table().unwrap())));
        let khat = Elem::Fun(m.khat(1).unwrap());
        let i = a1.carrier.iter().position(|e| *e == khat).unwrap();
        assert!(a1.lawlike.contains(&i));
        let reader = Elem::Fun(Arc::new(nu(&m, 1, &Permutation::identity(&m, 1).unwrap()).unwrap()));
        let j = a1.carrier.iter().position(|e| *e == reader).unwrap();
        assert!(a1.lawless.iter().any(|(i, _)| *i == j));
    }

    #[test]
    fn a2_blows_up() {
        let m = model(2, 2);
        assert!(matches!(enumerate_domain(&m, 2), Err(BsError::Blowup { .. })));
        let m = model(1, 3);
        assert!(matches!(enumerate_domain(&m, 1), Err(BsError::Blowup { .. })));
    }

    #[test]
    fn nu_swap_at_level_one() {
        let m = model(1, 2);
        let xi = Permutation { level: 1, maps: vec![vec![1, 0], vec![0, 1]] };
        let f = nu(&m, 1, &xi).unwrap();
        let t = &m.trees[0];
        for b in 0..2 {
            let x = t.find(&NodeB { comps: vec![vec![b]] }).unwrap();
            assert_eq!(f.get(x, 0), Some(&Elem::Num(1 - b)));
            assert_eq!(f.get(x, 1), None);
        }
        assert_eq!(f.get(0, 0), None);
    }

    #[test]
    fn classification_examples() {
        let m = model(2, 2);
        assert_eq!(classify(&m, &m.khat(1).unwrap()).unwrap(), Class::Lawlike);
        let id = Permutation::identity(&m, 1).unwrap();
        let reader = nu(&m, 1, &id).unwrap();
        assert_eq!(classify(&m, &reader).unwrap(), Class::Lawless(id));
        assert_eq!(classify(&m, &m.first_entry_reader(1)).unwrap(), Class::Neither);
        assert_eq!(classify(&m, &m.first_entry_reader(2)).unwrap(), Class::Neither);
        let id2 = Permutation::identity(&m, 2).unwrap();
        assert_eq!(classify(&m, &nu(&m, 2, &id2).unwrap()).unwrap(), Class::Lawless(id2));
    }

    #[test]
    fn extend_khat() {
        let m = model(2, 2);
        let gamma = m.m().find(&NodeB { comps: vec![vec![1, 0], vec![2, 4]] }).unwrap();
        let h = lawless_extend(&m, &m.khat(1).unwrap(), 1, gamma).unwrap();
        assert!(matches!(classify(&m, &h).unwrap(), Class::Lawless(_)));
        assert_eq!(m.ap(&h, gamma, 0), Some(Elem::Num(0)));
        assert_eq!(m.ap(&h, gamma, 1), Some(Elem::Num(0)));
        let short = m.m().find(&NodeB { comps: vec![vec![1], vec![2]] }).unwrap();
        assert!(matches!(lawless_extend(&m, &m.khat(1).unwrap(), 1, short), Err(BsError::Precondition(_))));
    }

    #[test]
    fn transport_identity_and_lawlike() {
        let m = model(2, 2);
        let tr = Transport::identity(&m);
        for e in m.basis[1].iter() {
            assert_eq!(tr.lambda(e), *e);
        }
        let swap = Transport::new(
            &m,
            vec![
                Permutation::diagonal(&m, 1, vec![1, 0]),
                Permutation::diagonal(&m, 2, vec![1, 0, 2, 3, 4]),
            ],
        )
        .unwrap();
        let k1 = Elem::Fun(m.khat(1).unwrap());
        let k2 = Elem::Fun(m.khat(2).unwrap());
        assert_eq!(swap.lambda(&k1), k1);
        assert_eq!(swap.lambda(&k2), k2);
    }

    #[test]
    fn extension_pads_with_k() {
        let m = model(2, 2);
        let a = NodeB { comps: vec![vec![0]] };
        let e = extension(&m, &a, 1).unwrap();
        assert_eq!(e, NodeB { comps: vec![vec![0], vec![0]] });
        assert_eq!(m.names[1][0], "K1");
        let full = NodeB { comps: vec![vec![0], vec![3]] };
        assert_eq!(extension(&m, &full, 2).unwrap(), full);
    }

    #[test]
    fn shortest_examples() {
        let m = model(1, 3);
        let alpha = m.m().find(&NodeB { comps: vec![vec![0, 1, 1]] }).unwrap();
        assert_eq!(shortest(&m, alpha, 0, |_, _| true), Some(0));
        assert_eq!(shortest(&m, alpha, 0, |_, _| false), None);
        let b = shortest(&m, alpha, 0, |b, _| m.m().lh(b) >= 2).unwrap();
        assert_eq!(m.m().nodes[b], NodeB { comps: vec![vec![0, 1]] });
    }

    #[test]
    fn choice_examples() {
        let m = model(2, 2);
        let alpha = m.m().find(&NodeB { comps: vec![vec![1], vec![0]] }).unwrap();
        let f = choice_witness_m1(&m, alpha, |_, _, y| y == 0, 3).unwrap();
        assert!(f.entries.iter().flatten().all(|v| *v == Elem::Num(0)));
        let f = choice_witness_m1(&m, alpha, |_, x, y| y == x, 3).unwrap();
        let d0 = &m.trees[0];
        let on = d0.find(&NodeB { comps: vec![vec![1, 0]] }).unwrap();
        let off = d0.find(&NodeB { comps: vec![vec![0]] }).unwrap();
        assert_eq!(f.get(on, 1), Some(&Elem::Num(1)));
        assert_eq!(f.get(off, 1), Some(&Elem::Num(0)));
        assert_eq!(f.get(0, 1), None);
    }
}
