use std::sync::Arc;

use super::{Arith, Assignment, EvalError, Scope, TypedUniverse};
use crate::syntax::{Expr, Formula, Var, VarKind};

/// A number or a total map on `{0..top}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FVal {
    Num(u64),
    Fun(Arc<[FVal]>),
}

impl FVal {
    pub fn as_num(&self) -> Option<u64> {
        match self {
            FVal::Num(n) => Some(*n),
            FVal::Fun(_) => None,
        }
    }

    pub fn level(&self) -> u32 {
        match self {
            FVal::Num(_) => 0,
            FVal::Fun(e) => 1 + e.first().map_or(0, FVal::level),
        }
    }
}

impl std::fmt::Display for FVal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FVal::Num(n) => write!(f, "{n}"),
            FVal::Fun(e) => {
                write!(f, "[")?;
                for (i, v) in e.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// A finite type structure of total functionals. Numbers range over
/// `{0..top}`; `carriers[k]` is the range of level-`k` variables.
#[derive(Debug, Clone)]
pub struct FunctionalUniverse {
    pub s: u32,
    pub top: u64,
    pub arith: Arith,
    carriers: Vec<Vec<FVal>>,
}

const MAX_CARRIER: usize = 1 << 16;

impl FunctionalUniverse {
    fn shell(s: u32, top: u64) -> FunctionalUniverse {
        FunctionalUniverse { s, top, arith: Arith { cap: top }, carriers: vec![Vec::new(); s as usize + 1] }
    }

    /// All total maps at every level.
    pub fn full(s: u32, top: u64) -> Result<FunctionalUniverse, EvalError> {
        let mut w = FunctionalUniverse::shell(s, top);
        let positions = top as usize + 1;
        let mut below: Vec<FVal> = (0..=top).map(FVal::Num).collect();
        for k in 1..=s as usize {
            let count = (below.len() as f64).powi(positions as i32);
            if count > MAX_CARRIER as f64 {
                return Err(EvalError::Capacity(format!("W_{k} would have {count} elements")));
            }
            let mut level = vec![Vec::new()];
            for _ in 0..positions {
                level = level
                    .into_iter()
                    .flat_map(|prefix: Vec<FVal>| {
                        below.iter().map(move |v| {
                            let mut p = prefix.clone();
                            p.push(v.clone());
                            p
                        })
                    })
                    .collect();
            }
            w.carriers[k] = level.into_iter().map(|e| FVal::Fun(e.into())).collect();
            below = w.carriers[k].clone();
        }
        Ok(w)
    }

    /// The functional images of `u`: each level ranges over the codes of the
    /// sets of that level. Numbers range over `{0..top}` with `top` the least
    /// value `>= N + 1` leaving one position per member of any set.
    pub fn companion(u: &TypedUniverse) -> Result<FunctionalUniverse, EvalError> {
        let widest = (1..=u.s).map(|k| u.size(k - 1)).max().unwrap_or(0);
        let top = (u.n + 1).max(widest.saturating_sub(1));
        let mut w = FunctionalUniverse::shell(u.s, top);
        for k in 1..=u.s {
            let codes = (0..u.size(k)).map(|x| set_to_functional(u, &w, k, x)).collect::<Result<Vec<_>, _>>()?;
            w.carriers[k as usize] = codes;
        }
        Ok(w)
    }

    pub fn carrier(&self, level: u32) -> &[FVal] {
        &self.carriers[level as usize]
    }

    /// `K^level`.
    pub fn k(&self, level: u32) -> FVal {
        let mut v = FVal::Num(0);
        for _ in 0..level {
            v = FVal::Fun(vec![v; self.top as usize + 1].into());
        }
        v
    }

    /// `N^level`, the pointwise successor.
    pub fn n(&self, v: &FVal) -> FVal {
        match v {
            FVal::Num(x) => FVal::Num(self.arith.succ(*x)),
            FVal::Fun(e) => FVal::Fun(e.iter().map(|x| self.n(x)).collect()),
        }
    }

    fn ap(&self, f: &FVal, t: u64) -> Result<FVal, EvalError> {
        match f {
            FVal::Fun(e) => Ok(e[t.min(self.top) as usize].clone()),
            FVal::Num(_) => Err(EvalError::Sort("application of a number".into())),
        }
    }

    fn num(&self, e: &Expr, scope: &Scope<FVal>) -> Result<u64, EvalError> {
        self.term(e, scope)?.as_num().ok_or_else(|| EvalError::Sort(format!("{e} is not numeric")))
    }

    fn term(&self, e: &Expr, scope: &Scope<FVal>) -> Result<FVal, EvalError> {
        let a = self.arith;
        Ok(match e {
            Expr::Zero => FVal::Num(0),
            Expr::K(l) => self.k(*l),
            Expr::Var(v) => scope.lookup(v)?.clone(),
            Expr::Succ(x) => FVal::Num(a.succ(self.num(x, scope)?)),
            Expr::Plus(x, y) => FVal::Num(a.add(self.num(x, scope)?, self.num(y, scope)?)),
            Expr::Times(x, y) => FVal::Num(a.mul(self.num(x, scope)?, self.num(y, scope)?)),
            Expr::N(_, x) => self.n(&self.term(x, scope)?),
            Expr::Ap(_, f, t) => {
                let t = self.num(t, scope)?;
                self.ap(&self.term(f, scope)?, t)?
            }
            other => return Err(EvalError::Unsupported(format!("{other} has no classical value"))),
        })
    }

    fn domain(&self, v: &Var) -> Result<Vec<FVal>, EvalError> {
        match v.kind {
            VarKind::Number => Ok((0..=self.top).map(FVal::Num).collect()),
            VarKind::Functional | VarKind::Lawlike | VarKind::Lawless if v.level <= self.s => {
                Ok(self.carriers[v.level as usize].clone())
            }
            _ => Err(EvalError::Sort(format!("{v} does not range over W"))),
        }
    }

    fn eval(&self, f: &Formula, scope: &mut Scope<FVal>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Falsum => false,
            Formula::Eq(_, a, b) => self.term(a, scope)? == self.term(b, scope)?,
            Formula::And(a, b) => self.eval(a, scope)? && self.eval(b, scope)?,
            Formula::Or(a, b) => self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Implies(a, b) => !self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let universal = matches!(f, Formula::Forall(..));
                for x in self.domain(v)? {
                    scope.push(*v, x);
                    let r = self.eval(b, scope);
                    scope.pop();
                    if r? != universal {
                        return Ok(!universal);
                    }
                }
                universal
            }
            other => return Err(EvalError::Unsupported(format!("{other} has no classical value"))),
        })
    }
}

/// Classical truth of an SLP formula in `w` under `e`.
pub fn eval_slp(w: &FunctionalUniverse, phi: &Formula, e: &Assignment<FVal>) -> Result<bool, EvalError> {
    w.eval(phi, &mut Scope::new(e))
}

/// Enumerates the members of `x` (an element of `U_level`, `level >= 1`):
/// position `i` holds the shifted code of the `i`-th member, the remaining
/// positions hold `0` or `K`.
pub fn set_to_functional(u: &TypedUniverse, w: &FunctionalUniverse, level: u32, x: u64) -> Result<FVal, EvalError> {
    if level == 0 || level > u.s || level > w.s {
        return Err(EvalError::Sort(format!("no level-{level} sets")));
    }
    let positions = w.top as usize + 1;
    let members: Vec<u64> = u.members(level, x).collect();
    if members.len() > positions {
        return Err(EvalError::Capacity(format!(
            "{} has {} members but only {positions} positions",
            u.render(level, x),
            members.len()
        )));
    }
    let mut entries = Vec::with_capacity(positions);
    for z in members {
        let code = if level == 1 { FVal::Num(z) } else { set_to_functional(u, w, level - 1, z)? };
        entries.push(w.n(&code));
    }
    entries.resize(positions, w.k(level - 1));
    Ok(FVal::Fun(entries.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Language};

    fn slp(text: &str) -> Formula {
        parse_formula(text, Language::SLP, 2).unwrap()
    }

    #[test]
    fn k_and_n() {
        let w = FunctionalUniverse::full(1, 2).unwrap();
        let e = Assignment::new();
        assert!(eval_slp(&w, &slp("Ap1(K1, 0) =0 0"), &e).unwrap());
        assert!(!eval_slp(&w, &slp("N1(K1) =1 K1"), &e).unwrap());
        assert!(eval_slp(&w, &slp("all F1_1. ~N1(F1_1) =1 K1"), &e).unwrap());
        assert_eq!(w.carrier(1).len(), 27);
        assert!(FunctionalUniverse::full(2, 3).is_err());
    }

    #[test]
    fn coding_examples() {
        let u = TypedUniverse::new(1, 2).unwrap();
        let w = FunctionalUniverse::companion(&u).unwrap();
        assert_eq!(w.top, 3);
        assert_eq!(set_to_functional(&u, &w, 1, 0).unwrap(), w.k(1));
        let zero = u.set_of(1, &[0]).unwrap();
        let code = set_to_functional(&u, &w, 1, zero).unwrap();
        assert_eq!(code.to_string(), "[1,0,0,0]");
        let e = Assignment::new().with(Var::functional(1, 1), code);
        assert!(eval_slp(&w, &slp("ex x1. Ap1(F1_1, x1) =0 S(0)"), &e).unwrap());
        assert!(!eval_slp(&w, &slp("ex x1. Ap1(F1_1, x1) =0 S(1)"), &e).unwrap());
    }

    #[test]
    fn membership_is_preserved() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let w = FunctionalUniverse::companion(&u).unwrap();
        for level in 1..=2u32 {
            for x in 0..u.size(level) {
                let code = set_to_functional(&u, &w, level, x).unwrap();
                let FVal::Fun(entries) = &code else { panic!() };
                for z in 0..u.size(level - 1) {
                    let shifted = if level == 1 {
                        w.n(&FVal::Num(z))
                    } else {
                        w.n(&set_to_functional(&u, &w, level - 1, z).unwrap())
                    };
                    assert_eq!(u.is_member(level - 1, z, x), entries.contains(&shifted));
                }
            }
        }
    }

    #[test]
    fn capacity() {
        let u = TypedUniverse::new(1, 3).unwrap();
        let mut w = FunctionalUniverse::companion(&u).unwrap();
        w.top = 1;
        assert!(matches!(set_to_functional(&u, &w, 1, 0b111), Err(EvalError::Capacity(_))));
    }
}
