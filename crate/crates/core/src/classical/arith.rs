use std::collections::HashMap;

use super::{Arith, Assignment, EvalError, TypedUniverse};
use crate::syntax::godel::{view, GodelCode, View};
use crate::syntax::Var;

/// Reads top constructors of codes, remembering each one.
struct Viewer {
    memo: HashMap<GodelCode, View>,
}

impl Viewer {
    fn get(&mut self, code: &GodelCode) -> Result<View, EvalError> {
        if let Some(v) = self.memo.get(code) {
            return Ok(v.clone());
        }
        let v = view(code)?;
        self.memo.insert(code.clone(), v.clone());
        Ok(v)
    }
}

fn arval_with(n: &GodelCode, f: &Assignment<u64>, a: Arith, vw: &mut Viewer) -> Result<u64, EvalError> {
    Ok(match vw.get(n)? {
        View::Zero => 0,
        View::Var(v) if v.level == 0 => *f.get(&v).ok_or(EvalError::Unbound(v))?,
        View::Succ(i) => a.succ(arval_with(&i, f, a, vw)?),
        View::Plus(i, j) => a.add(arval_with(&i, f, a, vw)?, arval_with(&j, f, a, vw)?),
        View::Times(i, j) => a.mul(arval_with(&i, f, a, vw)?, arval_with(&j, f, a, vw)?),
        other => return Err(EvalError::Decode(format!("{other:?} is not an arithmetic term"))),
    })
}

/// Value of the arithmetic term with code `n` under the level-0 part of `f`.
pub fn arval(n: &GodelCode, f: &Assignment<u64>, a: Arith) -> Result<u64, EvalError> {
    arval_with(n, f, a, &mut Viewer { memo: HashMap::new() })
}

struct Truth<'a> {
    u: &'a TypedUniverse,
    vw: Viewer,
}

impl Truth<'_> {
    fn object(&mut self, level: u32, n: &GodelCode, e: &Assignment<u64>) -> Result<u64, EvalError> {
        if level == 0 {
            return arval_with(n, e, self.u.arith, &mut self.vw);
        }
        match self.vw.get(n)? {
            View::Var(v) if v.level == level => e.get(&v).copied().ok_or(EvalError::Unbound(v)),
            other => Err(EvalError::Decode(format!("{other:?} is not a level-{level} term"))),
        }
    }

    fn domain(&self, v: &Var) -> Result<u64, EvalError> {
        if v.level <= self.u.s {
            Ok(self.u.size(v.level))
        } else {
            Err(EvalError::Sort(format!("{v} above level {}", self.u.s)))
        }
    }

    fn tr(&mut self, n: &GodelCode, e: &Assignment<u64>) -> Result<bool, EvalError> {
        Ok(match self.vw.get(n)? {
            View::Falsum => false,
            View::Eq(k, i, j) => self.object(k, &i, e)? == self.object(k, &j, e)?,
            View::Mem(k, i, j) => {
                let z = self.object(k, &i, e)?;
                let x = self.object(k + 1, &j, e)?;
                self.u.is_member(k, z, x)
            }
            View::And(i, j) => self.tr(&i, e)? && self.tr(&j, e)?,
            View::Or(i, j) => self.tr(&i, e)? || self.tr(&j, e)?,
            View::Implies(i, j) => !self.tr(&i, e)? || self.tr(&j, e)?,
            View::Forall(v, j) => {
                for y in 0..self.domain(&v)? {
                    if !self.tr(&j, &e.with(v, y))? {
                        return Ok(false);
                    }
                }
                true
            }
            View::Exists(v, j) => {
                for y in 0..self.domain(&v)? {
                    if self.tr(&j, &e.with(v, y))? {
                        return Ok(true);
                    }
                }
                false
            }
            other => return Err(EvalError::Decode(format!("{other:?} is not a TI formula"))),
        })
    }
}

/// Truth of the TI formula with code `n` under `e`, by recursion on codes.
pub fn tr(u: &TypedUniverse, n: &GodelCode, e: &Assignment<u64>) -> Result<bool, EvalError> {
    Truth { u, vw: Viewer { memo: HashMap::new() } }.tr(n, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::eval_ti;
    use crate::syntax::godel::{encode_expr, encode_formula};
    use crate::syntax::{parse_expr, parse_formula, Language};

    #[test]
    fn arval_clauses() {
        let a = Arith { cap: 100 };
        let f = Assignment::new().with(Var::num(1), 7).with(Var::num(2), 3);
        let code = |t: &str| encode_expr(&parse_expr(t, Language::TI, 1).unwrap());
        assert_eq!(arval(&code("0"), &f, a).unwrap(), 0);
        assert_eq!(arval(&code("x1"), &f, a).unwrap(), 7);
        assert_eq!(arval(&code("S(x1) + x2 * x2"), &f, a).unwrap(), 17);
        assert_eq!(arval(&code("x1 * x1 * x1"), &f, a).unwrap(), 100);
        assert_eq!(arval(&code("x3"), &f, a), Err(EvalError::Unbound(Var::num(3))));
        let falsum = encode_formula(&crate::syntax::Formula::Falsum);
        assert!(matches!(arval(&falsum, &f, a), Err(EvalError::Decode(_))));
    }

    #[test]
    fn tr_clauses() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let e = Assignment::new();
        let code = |t: &str| encode_formula(&parse_formula(t, Language::TI, 2).unwrap());
        assert!(!tr(&u, &code("_|_"), &e).unwrap());
        for text in [
            "0 = 0",
            "all X1_1. ex X2_1. X1_1 in1 X2_1",
            "ex X1_1. all z. (z in0 X1_1 <-> z = 0)",
            "all x1. all x2. (x1 + x2 = x2 + x1)",
            "all X1_1. all X1_2. (X1_1 = X1_2 | ~X1_1 = X1_2)",
        ] {
            let f = parse_formula(text, Language::TI, 2).unwrap();
            assert_eq!(tr(&u, &code(text), &e).unwrap(), eval_ti(&u, &f, &e).unwrap(), "{text}");
        }
        let e = Assignment::new().with(Var::set(1, 1), 0b01);
        assert!(tr(&u, &code("0 in0 X1_1 & ~S(0) in0 X1_1"), &e).unwrap());
    }
}
