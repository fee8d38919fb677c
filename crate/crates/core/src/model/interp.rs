//! Term interpretation, atomic valuation and bounded forcing at the nodes of `M`.
//!
//! Forcing is computed for all nodes at once as three sets: `pos` (certainly
//! forced), `neg` (certainly not forced) and `never` (certainly not forced at
//! any later node, including those beyond depth `D`). Bars are judged on the
//! truncated tree; whatever depends on nodes beyond `D` stays unknown.

use std::collections::BTreeMap;
use std::fmt;
use super::{classify, BsError, Class, Elem, Model};
use crate::syntax::{Expr, Formula, Var, VarKind};

/// Values of free variables and named symbols.
#[derive(Debug, Clone, Default)]
pub struct Env {
    pub vars: BTreeMap<Var, Elem>,
    pub syms: BTreeMap<String, Elem>,
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    /// Binds the lowercase basis names (`nu1`, `nus1`, `g1`, ...).
    pub fn with_basis(model: &Model) -> Env {
        Env { vars: BTreeMap::new(), syms: model.basis_symbols().into_iter().collect() }
    }

    pub fn bind(mut self, v: Var, e: Elem) -> Env {
        self.vars.insert(v, e);
        self
    }

    pub fn symbol(mut self, name: &str, e: Elem) -> Env {
        self.syms.insert(name.to_string(), e);
        self
    }
}

/// Finite ranges for the quantifiers, by variable level.
#[derive(Debug, Clone)]
pub struct Carriers {
    pub numbers: Vec<u32>,
    pub functionals: BTreeMap<u32, Vec<Elem>>,
}

impl Carriers {
    /// Numbers `0..=max(D, B)` and the standard objects of each level.
    pub fn default_for(model: &Model) -> Carriers {
        let functionals = (1..=model.params.s).map(|k| (k, model.basis[k as usize].clone())).collect();
        Carriers {
            numbers: (0..=model.depth().max(model.params.base)).collect(),
            functionals,
        }
    }

    fn range(&self, model: &Model, v: &Var) -> Result<Vec<Elem>, BsError> {
        let all = || {
            self.functionals
                .get(&v.level)
                .cloned()
                .ok_or_else(|| BsError::Unsupported(format!("no carrier for level {}", v.level)))
        };
        let keep = |want_lawless: bool| -> Result<Vec<Elem>, BsError> {
            let mut out = Vec::new();
            for e in all()? {
                let t = e.as_table().expect("functional carriers hold tables");
                let class = classify(model, t)?;
                if matches!(class, Class::Lawless(_)) == want_lawless && class != Class::Neither {
                    out.push(e);
                }
            }
            Ok(out)
        };
        match v.kind {
            VarKind::Number => Ok(self.numbers.iter().map(|&n| Elem::Num(n)).collect()),
            VarKind::Functional => all(),
            VarKind::Lawlike => keep(false),
            VarKind::Lawless => keep(true),
            VarKind::Set => Err(BsError::Unsupported("set variables".into())),
        }
    }
}

fn num(e: Elem, what: &str) -> Result<u32, BsError> {
    e.as_num().ok_or_else(|| BsError::Sort(format!("{what} must be a number")))
}

/// `Z^[alpha]` at node `alpha` of `M`; `None` when undefined.
pub fn interp_expr(model: &Model, env: &Env, e: &Expr, alpha: usize) -> Result<Option<Elem>, BsError> {
    let sub = |a: &Expr| interp_expr(model, env, a, alpha);
    Ok(match e {
        Expr::Zero => Some(Elem::Num(0)),
        Expr::K(l) => Some(Elem::Fun(model.khat(*l)?)),
        Expr::Var(v) => Some(env.vars.get(v).cloned().ok_or_else(|| BsError::Unbound(v.to_string()))?),
        Expr::Sym(name, l) => {
            let v = env.syms.get(name).cloned().ok_or_else(|| BsError::Unbound(format!("symbol {name}")))?;
            if v.level() != *l {
                return Err(BsError::Sort(format!("symbol {name} has level {}, used at {l}", v.level())));
            }
            Some(v)
        }
        Expr::Succ(a) => match sub(a)? {
            Some(v) => Some(Elem::Num(num(v, "the argument of S")?.saturating_add(1))),
            None => None,
        },
        Expr::Plus(a, b) | Expr::Times(a, b) => match (sub(a)?, sub(b)?) {
            (Some(x), Some(y)) => {
                let (x, y) = (num(x, "an operand")?, num(y, "an operand")?);
                Some(Elem::Num(if matches!(e, Expr::Plus(..)) {
                    x.saturating_add(y)
                } else {
                    x.saturating_mul(y)
                }))
            }
            _ => None,
        },
        Expr::N(l, a) => match sub(a)? {
            Some(v) => Some(model.successor(*l, &v)?),
            None => None,
        },
        Expr::Ap(l, f, t) => {
            let (Some(fv), Some(tv)) = (sub(f)?, sub(t)?) else { return Ok(None) };
            let n = num(tv, "an argument")?;
            match fv {
                Elem::Fun(table) if table.level == *l => model.ap(&table, alpha, n),
                other => {
                    return Err(BsError::Sort(format!("Ap{l} applied to a level-{} object", other.level())))
                }
            }
        }
        Expr::Seg(..) | Expr::Snoc(..) => {
            return Err(BsError::Unsupported("sequence codes in the functional model".into()))
        }
    })
}

/// Three-valued verdict of bounded forcing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Forced,
    NotForced,
    UnknownAtD,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Forced => "forced",
            Verdict::NotForced => "not-forced",
            Verdict::UnknownAtD => "unknown-at-D",
        })
    }
}

/// `Val(alpha, atom)` for equations and `proves` atoms. `None` only when a
/// `proves` atom depends on a forcing question left open by the truncation.
pub fn val_atomic(
    model: &Model,
    env: &Env,
    alpha: usize,
    atom: &Formula,
    carriers: &Carriers,
) -> Result<Option<bool>, BsError> {
    match atom {
        Formula::Eq(_, a, b) => {
            let (x, y) = (interp_expr(model, env, a, alpha)?, interp_expr(model, env, b, alpha)?);
            Ok(Some(matches!((x, y), (Some(x), Some(y)) if x == y)))
        }
        Formula::Proves(t, inner) => {
            let Some(z) = interp_expr(model, env, t, alpha)? else { return Ok(Some(false)) };
            let z = num(z, "a proof stage")? as usize;
            let Some(gamma) = model.m().ancestor_at(alpha, z) else { return Ok(Some(false)) };
            Ok(match force_bounded(model, env, gamma, inner, carriers)? {
                Verdict::Forced => Some(true),
                Verdict::NotForced => Some(false),
                Verdict::UnknownAtD => None,
            })
        }
        other => Err(BsError::Unsupported(format!("{other} is not an atom of the functional model"))),
    }
}

/// Bounded forcing of `phi` at node `alpha` of `M`.
pub fn force_bounded(
    model: &Model,
    env: &Env,
    alpha: usize,
    phi: &Formula,
    carriers: &Carriers,
) -> Result<Verdict, BsError> {
    if alpha >= model.m().len() {
        return Err(BsError::Precondition(format!("no node {alpha}")));
    }
    let tri = Forcer { model, carriers }.eval(phi, &mut env.clone())?;
    Ok(tri.verdict(alpha))
}

/// Verdicts for `phi` at every node of `M`.
pub fn force_all(model: &Model, env: &Env, phi: &Formula, carriers: &Carriers) -> Result<Vec<Verdict>, BsError> {
    let tri = Forcer { model, carriers }.eval(phi, &mut env.clone())?;
    Ok((0..model.m().len()).map(|i| tri.verdict(i)).collect())
}

struct Tri {
    pos: Vec<bool>,
    neg: Vec<bool>,
    never: Vec<bool>,
}

impl Tri {
    fn verdict(&self, i: usize) -> Verdict {
        debug_assert!(!(self.pos[i] && self.neg[i]));
        if self.pos[i] {
            Verdict::Forced
        } else if self.neg[i] {
            Verdict::NotForced
        } else {
            Verdict::UnknownAtD
        }
    }
}

struct Forcer<'a> {
    model: &'a Model,
    carriers: &'a Carriers,
}

impl Forcer<'_> {
    fn n(&self) -> usize {
        self.model.m().len()
    }

    /// Bar clause: forced when every truncated path meets a witness node,
    /// refuted when some later node can never force the formula.
    fn bar(&self, witness: Vec<bool>, never: Vec<bool>) -> Tri {
        let tree = self.model.m();
        let mut pos = witness;
        let mut neg = never.clone();
        for i in (0..self.n()).rev() {
            let kids = &tree.children[i];
            if !pos[i] && !tree.is_frontier(i) && !kids.is_empty() && kids.iter().all(|&c| pos[c]) {
                pos[i] = true;
            }
            if !neg[i] && kids.iter().any(|&c| neg[c]) {
                neg[i] = true;
            }
        }
        Tri { pos, neg, never }
    }

    fn with_var<T>(
        &self,
        env: &mut Env,
        v: &Var,
        body: impl FnMut(&mut Env) -> Result<T, BsError>,
    ) -> Result<Vec<T>, BsError> {
        let mut body = body;
        let saved = env.vars.get(v).cloned();
        let mut out = Vec::new();
        for e in self.carriers.range(self.model, v)? {
            env.vars.insert(*v, e);
            out.push(body(env)?);
        }
        match saved {
            Some(e) => env.vars.insert(*v, e),
            None => env.vars.remove(v),
        };
        Ok(out)
    }

    fn eval(&self, f: &Formula, env: &mut Env) -> Result<Tri, BsError> {
        let n = self.n();
        let tree = self.model.m();
        Ok(match f {
            Formula::Falsum => Tri { pos: vec![false; n], neg: vec![true; n], never: vec![true; n] },
            Formula::Eq(_, a, b) => {
                let mut witness = vec![false; n];
                let mut never = vec![false; n];
                for i in 0..n {
                    let x = interp_expr(self.model, env, a, i)?;
                    let y = interp_expr(self.model, env, b, i)?;
                    if let (Some(x), Some(y)) = (x, y) {
                        witness[i] = x == y;
                        never[i] = x != y;
                    }
                }
                self.bar(witness, never)
            }
            Formula::Proves(t, inner) => {
                let inner = self.eval(inner, env)?;
                let mut witness = vec![false; n];
                let mut never = vec![false; n];
                for i in 0..n {
                    let Some(z) = interp_expr(self.model, env, t, i)? else { continue };
                    let z = num(z, "a proof stage")? as usize;
                    if let Some(g) = tree.ancestor_at(i, z) {
                        witness[i] = inner.pos[g];
                        never[i] = inner.neg[g];
                    }
                }
                self.bar(witness, never)
            }
            Formula::And(a, b) => {
                let (a, b) = (self.eval(a, env)?, self.eval(b, env)?);
                Tri {
                    pos: zip(&a.pos, &b.pos, |x, y| x && y),
                    neg: zip(&a.neg, &b.neg, |x, y| x || y),
                    never: zip(&a.never, &b.never, |x, y| x || y),
                }
            }
            Formula::Or(a, b) => {
                let (a, b) = (self.eval(a, env)?, self.eval(b, env)?);
                self.bar(zip(&a.pos, &b.pos, |x, y| x || y), zip(&a.never, &b.never, |x, y| x && y))
            }
            Formula::Implies(a, b) => {
                let (a, b) = (self.eval(a, env)?, self.eval(b, env)?);
                let mut pos = vec![false; n];
                let mut neg = vec![false; n];
                for i in (0..n).rev() {
                    let here = (a.neg[i] || b.pos[i]) && (!tree.is_frontier(i) || b.pos[i] || a.never[i]);
                    let kids = &tree.children[i];
                    pos[i] = here && kids.iter().all(|&c| pos[c]);
                    neg[i] = (a.pos[i] && b.neg[i]) || kids.iter().any(|&c| neg[c]);
                }
                let never = zip(&a.pos, &b.never, |x, y| x && y);
                Tri { pos, neg, never }
            }
            Formula::Forall(v, body) => {
                let parts = self.with_var(env, v, |env| self.eval(body, env))?;
                Tri {
                    pos: fold(&parts, |t| &t.pos, true, |x, y| x && y),
                    neg: fold(&parts, |t| &t.neg, false, |x, y| x || y),
                    never: fold(&parts, |t| &t.never, false, |x, y| x || y),
                }
            }
            Formula::Exists(v, body) => {
                let parts = self.with_var(env, v, |env| self.eval(body, env))?;
                self.bar(
                    fold(&parts, |t| &t.pos, false, |x, y| x || y),
                    fold(&parts, |t| &t.never, true, |x, y| x && y),
                )
            }
            other => return Err(BsError::Unsupported(format!("{other} in the functional model"))),
        })
    }
}

fn zip(a: &[bool], b: &[bool], op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    a.iter().zip(b).map(|(&x, &y)| op(x, y)).collect()
}

fn fold(parts: &[Tri], field: impl Fn(&Tri) -> &Vec<bool>, unit: bool, op: impl Fn(bool, bool) -> bool) -> Vec<bool> {
    let n = parts.first().map_or(0, |t| field(t).len());
    let mut out = vec![unit; n];
    for p in parts {
        for (o, &x) in out.iter_mut().zip(field(p)) {
            *o = op(*o, x);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{NodeB, TruncationParams};
    use crate::syntax::{parse_formula, sugar, Language};

    fn model(s: u32, d: u32) -> Model {
        Model::new(TruncationParams::new(s, d, 2).unwrap()).unwrap()
    }

    fn formula(text: &str, s: u32) -> Formula {
        parse_formula(text, Language::SLP, s).unwrap()
    }

    #[test]
    fn khat_application_is_zero() {
        let m = model(2, 2);
        let env = Env::new();
        let e = Expr::ap(1, Expr::K(1), Expr::Zero);
        for a in 0..m.m().len() {
            assert_eq!(interp_expr(&m, &env, &e, a).unwrap(), Some(Elem::Num(0)));
        }
        let succ = Expr::ap(1, Expr::n(1, Expr::K(1)), Expr::Zero);
        assert_eq!(interp_expr(&m, &env, &succ, 0).unwrap(), Some(Elem::Num(1)));
    }

    #[test]
    fn lawless_defined_below_length() {
        let m = model(1, 3);
        let env = Env::with_basis(&m);
        let alpha = m.m().find(&NodeB { comps: vec![vec![1, 0]] }).unwrap();
        let at = |n| Expr::ap(1, Expr::Sym("nu1".into(), 1), Expr::numeral(n));
        assert!(interp_expr(&m, &env, &at(1), alpha).unwrap().is_some());
        assert!(interp_expr(&m, &env, &at(2), alpha).unwrap().is_none());
    }

    #[test]
    fn atomic_values() {
        let m = model(2, 2);
        let env = Env::with_basis(&m);
        let c = Carriers::default_for(&m);
        let f = formula("K1 =1 K1", 2);
        assert_eq!(val_atomic(&m, &env, 0, &f, &c).unwrap(), Some(true));
        let f = formula("nu1(0) =0 nus1(0)", 2);
        assert_eq!(val_atomic(&m, &env, 0, &f, &c).unwrap(), Some(false));
        let f = formula("proves(0, 0 =0 0)", 2);
        assert_eq!(val_atomic(&m, &env, 0, &f, &c).unwrap(), Some(true));
    }

    #[test]
    fn forcing_examples() {
        let m = model(2, 2);
        let env = Env::with_basis(&m)
            .bind(Var::lawless(1, 1), m.basis[1][2].clone())
            .bind(Var::lawless(1, 2), m.basis[1][3].clone());
        let c = Carriers::default_for(&m);
        assert_eq!(force_bounded(&m, &env, 0, &formula("K1 =1 K1", 2), &c).unwrap(), Verdict::Forced);
        let ll2 = formula("LF1_1 =1 LF1_2 | ~LF1_1 =1 LF1_2", 2);
        assert_eq!(force_bounded(&m, &env, 0, &ll2, &c).unwrap(), Verdict::Forced);
        let pos = Formula::exists(
            Var::num(1),
            sugar::positive(&Expr::ap(1, Expr::Sym("nu1".into(), 1), Expr::Var(Var::num(1)))),
        );
        assert_eq!(force_bounded(&m, &env, 0, &pos, &c).unwrap(), Verdict::UnknownAtD);
        assert_eq!(force_bounded(&m, &env, 0, &Formula::Falsum, &c).unwrap(), Verdict::NotForced);
    }

    #[test]
    fn negation_of_defined_inequality() {
        let m = model(1, 2);
        let env = Env::with_basis(&m);
        let c = Carriers::default_for(&m);
        let f = formula("~ 0 =0 S(0)", 1);
        assert_eq!(force_bounded(&m, &env, 0, &f, &c).unwrap(), Verdict::Forced);
        let f = formula("0 =0 S(0)", 1);
        assert_eq!(force_bounded(&m, &env, 0, &f, &c).unwrap(), Verdict::NotForced);
    }
}
