use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{BethError, BethFrame, TokenKind, Value, WalkNode};
use crate::syntax::{Expr, Formula, Var, VarKind};

pub type Env = BTreeMap<Var, Value>;

const MAX_NODES: usize = 400_000;

/// Nodes from which every maximal path meets `base` (least fixpoint).
pub(crate) fn least_bar(succ: &[Vec<usize>], base: &[bool]) -> Vec<bool> {
    let n = succ.len();
    let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pending = vec![0usize; n];
    for (u, next) in succ.iter().enumerate() {
        let mut seen: Vec<usize> = next.clone();
        seen.sort_unstable();
        seen.dedup();
        pending[u] = seen.len();
        for v in seen {
            pred[v].push(u);
        }
    }
    let mut out = base.to_vec();
    let mut queue: VecDeque<usize> = (0..n).filter(|&u| out[u]).collect();
    while let Some(v) = queue.pop_front() {
        for &u in &pred[v] {
            if out[u] {
                continue;
            }
            pending[u] -= 1;
            if pending[u] == 0 {
                out[u] = true;
                queue.push_back(u);
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct UNode {
    pub state: usize,
    /// Exact walk length below the horizon, the horizon itself beyond it.
    pub depth: u32,
    pub deep: bool,
    /// States of the walk up to the horizon.
    pub prefix: Vec<usize>,
    /// Node ids of the walk's nodes of length below the horizon, including
    /// the node itself when it is shallow.
    pub anc: Vec<usize>,
}

/// The frame's tree, with walks longer than the horizon identified when they
/// share their first `horizon` steps and their last state.
#[derive(Debug, Clone)]
pub struct Unfolding {
    pub horizon: u32,
    pub nodes: Vec<UNode>,
    pub succ: Vec<Vec<usize>>,
    pub pred: Vec<Vec<usize>>,
}

impl Unfolding {
    pub fn build(frame: &BethFrame, horizon: u32) -> Result<Unfolding, BethError> {
        let h = horizon as usize;
        let mut index: HashMap<(Vec<usize>, usize), usize> = HashMap::new();
        let mut nodes = Vec::new();
        let mut succ: Vec<Vec<usize>> = Vec::new();
        let root = frame.root;
        let root_node = UNode {
            state: root,
            depth: 0,
            deep: h == 0,
            prefix: vec![root],
            anc: if h == 0 { vec![] } else { vec![0] },
        };
        index.insert((vec![root], root), 0);
        nodes.push(root_node);
        succ.push(Vec::new());
        let mut queue = VecDeque::from([0usize]);
        while let Some(u) = queue.pop_front() {
            let node = nodes[u].clone();
            for &t in &frame.succ[node.state] {
                let (prefix, depth, deep, mut anc) = if node.deep {
                    (node.prefix.clone(), node.depth, true, node.anc.clone())
                } else {
                    let mut p = node.prefix.clone();
                    p.push(t);
                    let d = node.depth + 1;
                    (p, d, d as usize >= h, node.anc.clone())
                };
                let key = (prefix.clone(), t);
                let id = match index.get(&key) {
                    Some(&id) => id,
                    None => {
                        let id = nodes.len();
                        if id >= MAX_NODES {
                            return Err(BethError::Blowup(MAX_NODES));
                        }
                        if !deep {
                            anc.push(id);
                        }
                        index.insert(key, id);
                        nodes.push(UNode { state: t, depth, deep, prefix, anc });
                        succ.push(Vec::new());
                        queue.push_back(id);
                        id
                    }
                };
                if !succ[u].contains(&id) {
                    succ[u].push(id);
                }
            }
        }
        let mut pred = vec![Vec::new(); nodes.len()];
        for (u, next) in succ.iter().enumerate() {
            for &v in next {
                pred[v].push(u);
            }
        }
        Ok(Unfolding { horizon, nodes, succ, pred })
    }

    /// The node reached by a walk.
    pub fn locate(&self, walk: &[usize]) -> Result<usize, BethError> {
        let mut u = 0;
        if walk.first() != Some(&self.nodes[0].state) {
            return Err(BethError::Walk("walks start at the root".into()));
        }
        for &s in &walk[1..] {
            u = *self.succ[u]
                .iter()
                .find(|&&v| self.nodes[v].state == s)
                .ok_or_else(|| BethError::Walk(format!("no step to state #{s}")))?;
        }
        Ok(u)
    }
}

/// The horizon needed to decide `phi` exactly on `frame`.
pub fn horizon_for(frame: &BethFrame, phi: &Formula) -> u32 {
    if phi.contains_proves() || frame.has_readers() {
        frame.numbers
    } else {
        0
    }
}

/// Forcing over one frame, computed node-set-wise on its unfolding.
pub struct Forcer<'a> {
    pub frame: &'a BethFrame,
    pub tree: Unfolding,
}

impl<'a> Forcer<'a> {
    pub fn new(frame: &'a BethFrame, horizon: u32) -> Result<Forcer<'a>, BethError> {
        Ok(Forcer { frame, tree: Unfolding::build(frame, horizon)? })
    }

    /// A forcer whose horizon suffices for `phi`.
    pub fn for_formula(frame: &'a BethFrame, phi: &Formula) -> Result<Forcer<'a>, BethError> {
        Forcer::new(frame, horizon_for(frame, phi))
    }

    pub fn force(&self, walk: &WalkNode, phi: &Formula, env: &Env) -> Result<bool, BethError> {
        if phi.contains_proves() && self.tree.horizon < self.frame.numbers {
            return Err(BethError::Domain("horizon too small for proves atoms".into()));
        }
        let u = self.tree.locate(&walk.0)?;
        Ok(self.eval(phi, &mut env.clone())?[u])
    }

    pub fn force_root(&self, phi: &Formula) -> Result<bool, BethError> {
        Ok(self.eval(phi, &mut Env::new())?[0])
    }

    /// The set of nodes forcing `phi` under `env`.
    pub fn eval(&self, phi: &Formula, env: &mut Env) -> Result<Vec<bool>, BethError> {
        let n = self.tree.nodes.len();
        Ok(match phi {
            Formula::Falsum => vec![false; n],
            Formula::Prop(p) => {
                let val: Vec<bool> = self
                    .tree
                    .nodes
                    .iter()
                    .map(|u| self.frame.props[u.state].contains(p))
                    .collect();
                self.bar(&val)
            }
            Formula::Eq(_, a, b) => {
                let mut val = vec![false; n];
                for (u, slot) in val.iter_mut().enumerate() {
                    let x = self.term(a, env, u)?;
                    let y = self.term(b, env, u)?;
                    *slot = x.is_some() && x == y;
                }
                self.bar(&val)
            }
            Formula::Proves(t, inner) => {
                let inner = self.eval(inner, env)?;
                let mut val = vec![false; n];
                for (u, slot) in val.iter_mut().enumerate() {
                    if let Some(Value::Num(z)) = self.term(t, env, u)? {
                        let anc = &self.tree.nodes[u].anc;
                        let z = z as usize;
                        *slot = z < anc.len() && inner[anc[z]];
                    }
                }
                self.bar(&val)
            }
            Formula::Mem(..) => {
                return Err(BethError::Unsupported("membership atoms have no Beth reading here".into()))
            }
            Formula::Kleene(..) => {
                return Err(BethError::Unsupported("Kleene application atoms".into()))
            }
            Formula::And(a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                x.iter().zip(&y).map(|(p, q)| *p && *q).collect()
            }
            Formula::Or(a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                let u: Vec<bool> = x.iter().zip(&y).map(|(p, q)| *p || *q).collect();
                self.bar(&u)
            }
            Formula::Implies(a, b) => {
                let x = self.eval(a, env)?;
                let y = self.eval(b, env)?;
                let bad: Vec<bool> = x.iter().zip(&y).map(|(p, q)| *p && !*q).collect();
                let reach = self.reaches(&bad);
                reach.iter().map(|r| !r).collect()
            }
            Formula::Forall(v, body) => {
                let mut acc = vec![true; n];
                for c in self.carrier(v)? {
                    let got = self.with(env, *v, c, |s, env| s.eval(body, env))?;
                    for (a, g) in acc.iter_mut().zip(got) {
                        *a &= g;
                    }
                }
                acc
            }
            Formula::Exists(v, body) => {
                let mut acc = vec![false; n];
                for c in self.carrier(v)? {
                    let got = self.with(env, *v, c, |s, env| s.eval(body, env))?;
                    for (a, g) in acc.iter_mut().zip(got) {
                        *a |= g;
                    }
                }
                self.bar(&acc)
            }
        })
    }

    fn with<T>(
        &self,
        env: &mut Env,
        v: Var,
        c: Value,
        k: impl FnOnce(&Self, &mut Env) -> Result<T, BethError>,
    ) -> Result<T, BethError> {
        let old = env.insert(v, c);
        let r = k(self, env);
        match old {
            Some(o) => env.insert(v, o),
            None => env.remove(&v),
        };
        r
    }

    fn bar(&self, base: &[bool]) -> Vec<bool> {
        least_bar(&self.tree.succ, base)
    }

    /// Nodes with a descendant (or themselves) in `target`.
    fn reaches(&self, target: &[bool]) -> Vec<bool> {
        let mut out = target.to_vec();
        let mut stack: Vec<usize> = (0..out.len()).filter(|&u| out[u]).collect();
        while let Some(v) = stack.pop() {
            for &u in &self.tree.pred[v] {
                if !out[u] {
                    out[u] = true;
                    stack.push(u);
                }
            }
        }
        out
    }

    /// The quantification domain of a variable.
    pub fn carrier(&self, v: &Var) -> Result<Vec<Value>, BethError> {
        match v.kind {
            VarKind::Number => Ok((0..self.frame.numbers).map(Value::Num).collect()),
            VarKind::Set if v.level == 0 => Ok((0..self.frame.numbers).map(Value::Num).collect()),
            VarKind::Set => Err(BethError::Unsupported("set variables".into())),
            _ => {
                let mut out = vec![Value::K(v.level)];
                for (i, t) in self.frame.tokens.iter().enumerate() {
                    if t.level == v.level {
                        out.push(Value::Tok(i));
                    }
                }
                Ok(out)
            }
        }
    }

    fn clip(&self, n: u64) -> u32 {
        n.min(self.frame.numbers.saturating_sub(1) as u64) as u32
    }

    /// The value of a term at a node, `None` when undefined there.
    pub fn term(&self, e: &Expr, env: &Env, u: usize) -> Result<Option<Value>, BethError> {
        let num = |x: Option<Value>| match x {
            Some(Value::Num(n)) => Ok(Some(n as u64)),
            None => Ok(None),
            Some(other) => Err(BethError::Domain(format!("{other:?} used as a number"))),
        };
        Ok(match e {
            Expr::Zero => Some(Value::Num(0)),
            Expr::K(l) => Some(Value::K(*l)),
            Expr::Var(v) => Some(env.get(v).cloned().ok_or(BethError::Unbound(*v))?),
            Expr::Sym(name, l) => {
                let i = self
                    .frame
                    .token_index(name)
                    .ok_or_else(|| BethError::Domain(format!("unknown symbol '{name}'")))?;
                if self.frame.tokens[i].level != *l {
                    return Err(BethError::Domain(format!("symbol '{name}' used at level {l}")));
                }
                Some(Value::Tok(i))
            }
            Expr::Succ(a) => num(self.term(a, env, u)?)?.map(|n| Value::Num(self.clip(n + 1))),
            Expr::Plus(a, b) | Expr::Times(a, b) => {
                let x = num(self.term(a, env, u)?)?;
                let y = num(self.term(b, env, u)?)?;
                match (x, y) {
                    (Some(x), Some(y)) => {
                        let r = if matches!(e, Expr::Plus(..)) { x + y } else { x * y };
                        Some(Value::Num(self.clip(r)))
                    }
                    _ => None,
                }
            }
            Expr::N(l, a) => self.term(a, env, u)?.map(|f| Value::N(*l, Box::new(f))),
            Expr::Ap(_, f, t) => {
                let f = self.term(f, env, u)?;
                let t = num(self.term(t, env, u)?)?;
                match (f, t) {
                    (Some(f), Some(t)) => self.apply(&f, t as u32, u)?,
                    _ => None,
                }
            }
            Expr::Seg(..) | Expr::Snoc(..) => {
                return Err(BethError::Unsupported("sequence coding terms".into()))
            }
        })
    }

    fn apply(&self, f: &Value, n: u32, u: usize) -> Result<Option<Value>, BethError> {
        Ok(match f {
            Value::Num(_) => return Err(BethError::Domain("a number applied as a functional".into())),
            Value::K(1) => Some(Value::Num(0)),
            Value::K(l) => Some(Value::K(l - 1)),
            Value::N(l, inner) => match self.apply(inner, n, u)? {
                None => None,
                Some(Value::Num(m)) if *l == 1 => Some(Value::Num(self.clip(m as u64 + 1))),
                Some(v) => Some(Value::N(l - 1, Box::new(v))),
            },
            Value::Tok(i) => {
                let node = &self.tree.nodes[u];
                match &self.frame.tokens[*i].kind {
                    TokenKind::Table(rows) => rows[node.state].get(&n).cloned(),
                    TokenKind::Reader(digits) => {
                        let k = n as usize;
                        let defined = if node.deep { k < self.tree.horizon as usize } else { k < node.depth as usize };
                        if defined && k + 1 < node.prefix.len() {
                            Some(Value::Num(self.clip(digits[node.prefix[k + 1]] as u64)))
                        } else if defined {
                            return Err(BethError::Domain(format!(
                                "reader argument {n} beyond the horizon"
                            )));
                        } else {
                            None
                        }
                    }
                }
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beth::lem_fixture;
    use crate::syntax::{parse_formula, Language};

    fn f(text: &str) -> Formula {
        parse_formula(text, Language::LP, 2).unwrap()
    }

    #[test]
    fn single_leaf_forces_its_atom() {
        let mut fr = BethFrame::new(&["r"]);
        fr.props[0].insert("p".into());
        let fo = Forcer::new(&fr, 0).unwrap();
        assert!(fo.force_root(&f("p")).unwrap());
        assert!(!fo.force_root(&f("q")).unwrap());
        assert!(!fo.force_root(&f("_|_")).unwrap());
    }

    #[test]
    fn lem_fails_on_the_lasso() {
        let fr = lem_fixture();
        let fo = Forcer::new(&fr, 0).unwrap();
        assert!(!fo.force_root(&f("p | ~p")).unwrap());
        assert!(!fo.force_root(&f("p")).unwrap());
        assert!(!fo.force_root(&f("~p")).unwrap());
        assert!(fo.force_root(&f("~~p")).unwrap());
        assert!(fo.force_root(&f("p -> p")).unwrap());
    }

    #[test]
    fn bar_needs_every_path() {
        // r -> a, r -> b; p holds at both a and b but not at r.
        let mut fr = BethFrame::new(&["r", "a", "b"]);
        fr.succ[0] = vec![1, 2];
        fr.props[1].insert("p".into());
        fr.props[2].insert("p".into());
        let fo = Forcer::new(&fr, 0).unwrap();
        assert!(fo.force_root(&f("p")).unwrap());
        fr.props[2].clear();
        let fo = Forcer::new(&fr, 0).unwrap();
        assert!(!fo.force_root(&f("p")).unwrap());
    }

    #[test]
    fn proves_reads_the_prefix() {
        // r -> r | t, t -> t; p holds at t.
        let mut fr = lem_fixture();
        fr.succ[1] = vec![1];
        fr.numbers = 3;
        let fo = Forcer::for_formula(&fr, &f("proves(0, p)")).unwrap();
        assert!(!fo.force_root(&f("proves(0, p)")).unwrap());
        assert!(fo.force_root(&f("proves(0, 0 =0 0)")).unwrap());
        assert!(!fo.force_root(&f("proves(1, _|_)")).unwrap());
        let rt = WalkNode(vec![0, 1]);
        assert!(fo.force(&rt, &f("proves(1, p)"), &Env::new()).unwrap());
        let rr = WalkNode(vec![0, 0]);
        assert!(!fo.force(&rr, &f("proves(1, p)"), &Env::new()).unwrap());
        // Once the depth-1 prefix is fixed without p, no descendant gains it.
        let rrt = WalkNode(vec![0, 0, 1]);
        assert!(!fo.force(&rrt, &f("proves(1, p)"), &Env::new()).unwrap());
        assert!(fo.force(&rrt, &f("proves(2, p)"), &Env::new()).unwrap());
    }

    #[test]
    fn membership_is_unsupported() {
        let fr = lem_fixture();
        let fo = Forcer::new(&fr, 0).unwrap();
        let phi = parse_formula("all x1. x1 in0 X1_1", Language::TI, 1).unwrap();
        let mut env = Env::new();
        env.insert(Var::set(1, 1), Value::Num(0));
        assert!(matches!(fo.eval(&phi, &mut env), Err(BethError::Unsupported(_))));
    }

    #[test]
    fn functional_constants() {
        let fr = BethFrame::new(&["r"]);
        let fo = Forcer::new(&fr, 0).unwrap();
        assert!(fo.force_root(&f("Ap1(K1, 0) =0 0")).unwrap());
        assert!(!fo.force_root(&f("N1(K1) =1 K1")).unwrap());
        assert!(fo.force_root(&f("Ap2(K2, 0) =1 K1")).unwrap());
    }
}
