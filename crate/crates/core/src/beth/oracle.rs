//! Literal path-by-path forcing on explicit finite trees, used to cross-check
//! the fixpoint computation.

use std::collections::BTreeMap;

use super::{BethError, BethFrame, Env, Forcer, Token, TokenKind, Value};
use crate::syntax::Formula;

/// A finite tree cut from a frame's unfolding, in depth-first preorder.
#[derive(Debug, Clone)]
pub struct ExplicitTree {
    /// The tree as a frame of its own; state `i` is tree node `i`.
    pub frame: BethFrame,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<u32>,
    /// Number of nodes in the subtree rooted at each node.
    pub size: Vec<usize>,
    /// The walk in the original frame that each node stands for.
    pub walks: Vec<Vec<usize>>,
}

/// Unfolds `frame` into walks of at most `max_depth` steps. Walks of exactly
/// `max_depth` steps become leaves; readers become tables.
pub fn explicit_tree(frame: &BethFrame, max_depth: u32) -> ExplicitTree {
    let mut walks = Vec::new();
    let mut parent = Vec::new();
    let mut depth = Vec::new();
    let mut size = Vec::new();
    fn go(
        frame: &BethFrame,
        walk: &mut Vec<usize>,
        up: Option<usize>,
        max_depth: u32,
        out: &mut (Vec<Vec<usize>>, Vec<Option<usize>>, Vec<u32>, Vec<usize>),
    ) -> usize {
        let id = out.0.len();
        out.0.push(walk.clone());
        out.1.push(up);
        out.2.push(walk.len() as u32 - 1);
        out.3.push(1);
        if (walk.len() as u32) <= max_depth {
            let last = *walk.last().unwrap();
            for &t in &frame.succ[last] {
                walk.push(t);
                let n = go(frame, walk, Some(id), max_depth, out);
                walk.pop();
                out.3[id] += n;
            }
        }
        out.3[id]
    }
    let mut acc = (walks, parent, depth, size);
    go(frame, &mut vec![frame.root], None, max_depth, &mut acc);
    (walks, parent, depth, size) = acc;

    let n = walks.len();
    let names: Vec<String> = (0..n).map(|i| format!("w{i}")).collect();
    let names_ref: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut tree = BethFrame::new(&names_ref);
    tree.numbers = frame.numbers;
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            tree.succ[*p].push(i);
        }
        tree.props[i] = frame.props[*walks[i].last().unwrap()].clone();
    }
    for tok in &frame.tokens {
        let rows: Vec<BTreeMap<u32, Value>> = walks
            .iter()
            .map(|w| {
                let last = *w.last().unwrap();
                match &tok.kind {
                    TokenKind::Table(rows) => rows[last].clone(),
                    TokenKind::Reader(digits) => (0..w.len() - 1)
                        .map(|k| (k as u32, Value::Num(digits[w[k + 1]])))
                        .collect(),
                }
            })
            .collect();
        tree.tokens.push(Token { name: tok.name.clone(), level: tok.level, kind: TokenKind::Table(rows) });
    }
    ExplicitTree { frame: tree, parent, depth, size, walks }
}

impl ExplicitTree {
    fn leaves_below(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (a..a + self.size[a]).filter(|&i| self.size[i] == 1)
    }

    fn path_to(&self, mut u: usize) -> Vec<usize> {
        let mut p = vec![u];
        while let Some(up) = self.parent[u] {
            p.push(up);
            u = up;
        }
        p
    }

    /// For every node: does every maximal path through it meet `good`?
    fn every_path_meets(&self, good: &[bool]) -> Vec<bool> {
        let n = good.len();
        let leaf_ok: Vec<bool> = (0..n)
            .map(|l| self.size[l] == 1 && self.path_to(l).into_iter().any(|b| good[b]))
            .collect();
        (0..n).map(|a| self.leaves_below(a).all(|l| leaf_ok[l])).collect()
    }

    /// Forcing computed by the fixpoint engine on the tree, indexed by tree node.
    pub fn fixpoint_forcing(&self, phi: &Formula, env: &mut Env) -> Result<Vec<bool>, BethError> {
        let horizon = if phi.contains_proves() { self.frame.numbers } else { 0 };
        let fo = Forcer::new(&self.frame, horizon)?;
        let set = fo.eval(phi, env)?;
        let mut out = vec![false; self.walks.len()];
        for (id, node) in fo.tree.nodes.iter().enumerate() {
            out[node.state] = set[id];
        }
        Ok(out)
    }

    /// Forcing by the inductive clauses read literally: bars are checked
    /// path by path and implication scans all later nodes.
    pub fn path_forcing(&self, phi: &Formula, env: &mut Env) -> Result<Vec<bool>, BethError> {
        let forcer = Forcer::new(&self.frame, 0)?;
        // With horizon 0 each tree node is its own unfolding node.
        let node_of: Vec<usize> = {
            let mut m = vec![0; forcer.tree.nodes.len()];
            for (id, u) in forcer.tree.nodes.iter().enumerate() {
                m[u.state] = id;
            }
            m
        };
        self.clauses(&forcer, &node_of, phi, env)
    }

    fn clauses(
        &self,
        fo: &Forcer<'_>,
        node_of: &[usize],
        phi: &Formula,
        env: &mut Env,
    ) -> Result<Vec<bool>, BethError> {
        let n = self.walks.len();
        Ok(match phi {
            Formula::Falsum => vec![false; n],
            Formula::Prop(p) => {
                let val: Vec<bool> = (0..n).map(|i| self.frame.props[i].contains(p)).collect();
                self.every_path_meets(&val)
            }
            Formula::Eq(_, a, b) => {
                let mut val = vec![false; n];
                for (i, slot) in val.iter_mut().enumerate() {
                    let x = fo.term(a, env, node_of[i])?;
                    let y = fo.term(b, env, node_of[i])?;
                    *slot = x.is_some() && x == y;
                }
                self.every_path_meets(&val)
            }
            Formula::Proves(t, inner) => {
                let inner = self.clauses(fo, node_of, inner, env)?;
                let mut val = vec![false; n];
                for (i, slot) in val.iter_mut().enumerate() {
                    if let Some(Value::Num(z)) = fo.term(t, env, node_of[i])? {
                        let path = self.path_to(i);
                        let d = self.depth[i];
                        *slot = z <= d && inner[path[(d - z) as usize]];
                    }
                }
                self.every_path_meets(&val)
            }
            Formula::Mem(..) | Formula::Kleene(..) => {
                return Err(BethError::Unsupported("atom without a Beth reading".into()))
            }
            Formula::And(a, b) => {
                let x = self.clauses(fo, node_of, a, env)?;
                let y = self.clauses(fo, node_of, b, env)?;
                (0..n).map(|i| x[i] && y[i]).collect()
            }
            Formula::Or(a, b) => {
                let x = self.clauses(fo, node_of, a, env)?;
                let y = self.clauses(fo, node_of, b, env)?;
                let either: Vec<bool> = (0..n).map(|i| x[i] || y[i]).collect();
                self.every_path_meets(&either)
            }
            Formula::Implies(a, b) => {
                let x = self.clauses(fo, node_of, a, env)?;
                let y = self.clauses(fo, node_of, b, env)?;
                (0..n)
                    .map(|i| (i..i + self.size[i]).all(|j| !x[j] || y[j]))
                    .collect()
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(phi, Formula::Forall(..));
                let mut acc = vec![universal; n];
                for c in fo.carrier(v)? {
                    let old = env.insert(*v, c);
                    let got = self.clauses(fo, node_of, body, env);
                    match old {
                        Some(o) => env.insert(*v, o),
                        None => env.remove(v),
                    };
                    for (a, g) in acc.iter_mut().zip(got?) {
                        if universal {
                            *a &= g
                        } else {
                            *a |= g
                        }
                    }
                }
                if universal {
                    acc
                } else {
                    self.every_path_meets(&acc)
                }
            }
        })
    }
}

/// For every node of a successor graph: does every maximal path from it meet
/// `good`? Decided by looking for an escaping path, one that avoids `good`
/// and ends in a leaf or runs into a cycle.
pub fn barred_by_paths(succ: &[Vec<usize>], good: &[bool]) -> Vec<bool> {
    let n = succ.len();
    (0..n)
        .map(|u| {
            if good[u] {
                return true;
            }
            // Depth-first search over avoiding paths, tracking the current path.
            let mut on_path = vec![false; n];
            let mut done = vec![false; n];
            fn escapes(
                u: usize,
                succ: &[Vec<usize>],
                good: &[bool],
                on_path: &mut [bool],
                done: &mut [bool],
            ) -> bool {
                if succ[u].is_empty() {
                    return true;
                }
                on_path[u] = true;
                for &v in &succ[u] {
                    if good[v] || done[v] {
                        continue;
                    }
                    if on_path[v] || escapes(v, succ, good, on_path, done) {
                        return true;
                    }
                }
                on_path[u] = false;
                done[u] = true;
                false
            }
            !escapes(u, succ, good, &mut on_path, &mut done)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beth::{lem_fixture, mp_fixture};
    use crate::syntax::{parse_formula, Language};

    #[test]
    fn tree_shape() {
        let t = explicit_tree(&lem_fixture(), 2);
        // r; r.r, r.r.r, r.r.t; r.t
        assert_eq!(t.walks.len(), 5);
        assert_eq!(t.size[0], 5);
        assert!(t.frame.validate().is_empty());
    }

    #[test]
    fn fixpoint_matches_paths_on_trees() {
        let phis = ["p | ~p", "~~p", "p -> p", "~p"];
        let t = explicit_tree(&lem_fixture(), 5);
        let fo = Forcer::new(&t.frame, 0).unwrap();
        for s in phis {
            let phi = parse_formula(s, Language::L, 1).unwrap();
            let fix = fo.eval(&phi, &mut Env::new()).unwrap();
            let lit = t.path_forcing(&phi, &mut Env::new()).unwrap();
            assert_eq!(fix.len(), lit.len());
            assert_eq!(t.fixpoint_forcing(&phi, &mut Env::new()).unwrap(), lit, "{s}");
        }
    }

    #[test]
    fn readers_become_tables() {
        let t = explicit_tree(&mp_fixture(), 3);
        assert!(t.frame.validate().iter().all(|v| matches!(v, crate::beth::Violation::Incomplete { .. })));
    }

    #[test]
    fn escaping_paths() {
        let succ = vec![vec![0, 1], vec![]];
        assert_eq!(barred_by_paths(&succ, &[false, true]), vec![false, true]);
        let succ = vec![vec![1], vec![1]];
        assert_eq!(barred_by_paths(&succ, &[false, true]), vec![true, true]);
    }
}
