//! Sorted abstract syntax for the languages L, LP, SLP and TI.

mod check;
pub mod godel;
mod parse;
mod print;
mod subst;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use check::{check_expr, check_formula};
pub use parse::{parse, parse_expr, parse_formula};
pub use subst::{
    all_vars, alpha_eq, closure, fresh_var, free_vars, free_vars_expr, rename_free, sort_of,
    strip_universals, subst, subst_expr,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("syntax error at byte {pos}: expected {expected}, found {found}")]
    Syntax {
        pos: usize,
        expected: String,
        found: String,
    },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("language error: {0}")]
    Language(String),
    #[error("decode error: {0}")]
    Decode(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Language {
    L,
    LP,
    SLP,
    TI,
}

impl Language {
    pub fn allows_proves(self) -> bool {
        matches!(self, Language::LP | Language::SLP)
    }

    pub fn is_ti(self) -> bool {
        self == Language::TI
    }
}

impl std::str::FromStr for Language {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "L" => Ok(Language::L),
            "LP" => Ok(Language::LP),
            "SLP" => Ok(Language::SLP),
            "TI" | "TISTAR" | "TI*" => Ok(Language::TI),
            other => Err(format!("unknown language {other}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarKind {
    Number,
    Functional,
    Lawlike,
    Lawless,
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Var {
    pub index: u32,
    pub level: u32,
    pub kind: VarKind,
}

impl Var {
    pub fn num(index: u32) -> Var {
        Var {
            index,
            level: 0,
            kind: VarKind::Number,
        }
    }

    pub fn functional(level: u32, index: u32) -> Var {
        Var {
            index,
            level,
            kind: VarKind::Functional,
        }
    }

    pub fn lawlike(level: u32, index: u32) -> Var {
        Var {
            index,
            level,
            kind: VarKind::Lawlike,
        }
    }

    pub fn lawless(level: u32, index: u32) -> Var {
        Var {
            index,
            level,
            kind: VarKind::Lawless,
        }
    }

    /// Set variable of TI; level 0 set variables are the numeric ones.
    pub fn set(level: u32, index: u32) -> Var {
        if level == 0 {
            Var::num(index)
        } else {
            Var {
                index,
                level,
                kind: VarKind::Set,
            }
        }
    }

    pub fn with_index(self, index: u32) -> Var {
        Var { index, ..self }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Expr {
    Zero,
    K(u32),
    Var(Var),
    /// A named frame symbol of the given level (constants supplied by a model).
    Sym(String, u32),
    Succ(Box<Expr>),
    Plus(Box<Expr>, Box<Expr>),
    Times(Box<Expr>, Box<Expr>),
    N(u32, Box<Expr>),
    Ap(u32, Box<Expr>, Box<Expr>),
    /// Code of the initial segment `F(0), ..., F(t-1)` of a 1-functional.
    Seg(Box<Expr>, Box<Expr>),
    /// Code of `y * <x>`.
    Snoc(Box<Expr>, Box<Expr>),
}

pub(crate) const UNKNOWN_LEVEL: u32 = u32::MAX;

impl Expr {
    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn succ(e: Expr) -> Expr {
        Expr::Succ(Box::new(e))
    }

    pub fn plus(a: Expr, b: Expr) -> Expr {
        Expr::Plus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Expr, b: Expr) -> Expr {
        Expr::Times(Box::new(a), Box::new(b))
    }

    pub fn n(level: u32, e: Expr) -> Expr {
        Expr::N(level, Box::new(e))
    }

    /// `Ap^level(f, t)`.
    pub fn ap(level: u32, f: Expr, t: Expr) -> Expr {
        Expr::Ap(level, Box::new(f), Box::new(t))
    }

    pub fn numeral(n: u64) -> Expr {
        let mut e = Expr::Zero;
        for _ in 0..n {
            e = Expr::succ(e);
        }
        e
    }

    /// Applies `f` to `t` and then to `0` until a numeric term is reached.
    pub fn ap_down(f: Expr, t: Expr) -> Expr {
        let level = f.level();
        let mut e = Expr::ap(level, f, t);
        for l in (1..level).rev() {
            e = Expr::ap(l, e, Expr::Zero);
        }
        e
    }

    pub fn level(&self) -> u32 {
        match self {
            Expr::Zero | Expr::Succ(_) | Expr::Plus(..) | Expr::Times(..) => 0,
            Expr::Seg(..) | Expr::Snoc(..) => 0,
            Expr::K(l) | Expr::N(l, _) | Expr::Sym(_, l) => *l,
            Expr::Var(v) => v.level,
            Expr::Ap(l, ..) => l.saturating_sub(1),
        }
    }

    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Expr::Zero => Some(0),
            Expr::Succ(e) => e.as_numeral().map(|n| n + 1),
            _ => None,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Zero | Expr::K(_) | Expr::Var(_) | Expr::Sym(..) => 1,
            Expr::Succ(e) | Expr::N(_, e) => 1 + e.size(),
            Expr::Plus(a, b)
            | Expr::Times(a, b)
            | Expr::Ap(_, a, b)
            | Expr::Seg(a, b)
            | Expr::Snoc(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Falsum,
    /// Propositional atom interpreted directly by a frame valuation.
    Prop(String),
    Eq(u32, Expr, Expr),
    Mem(u32, Expr, Expr),
    /// The creating-subject atom `|-_t phi`.
    Proves(Expr, Box<Formula>),
    /// `{e}(x) = y`; recognised in schemas only.
    Kleene(Expr, Expr, Expr),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl Formula {
    pub fn eq(level: u32, a: Expr, b: Expr) -> Formula {
        Formula::Eq(level, a, b)
    }

    pub fn mem(level: u32, a: Expr, b: Expr) -> Formula {
        Formula::Mem(level, a, b)
    }

    pub fn prop(name: &str) -> Formula {
        Formula::Prop(name.to_string())
    }

    pub fn proves(t: Expr, inner: Formula) -> Formula {
        Formula::Proves(t, Box::new(inner))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::Falsum)
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::and(Formula::imp(a.clone(), b.clone()), Formula::imp(b, a))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(
            self,
            Formula::Falsum
                | Formula::Prop(_)
                | Formula::Eq(..)
                | Formula::Mem(..)
                | Formula::Proves(..)
                | Formula::Kleene(..)
        )
    }

    /// The operand of a negation `phi -> _|_`.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Falsum => Some(a),
            _ => None,
        }
    }

    /// Splits `(a -> b) & (b -> a)` into `(a, b)`.
    pub fn as_iff(&self) -> Option<(&Formula, &Formula)> {
        if let Formula::And(l, r) = self {
            if let (Formula::Implies(a, b), Formula::Implies(c, d)) = (&**l, &**r) {
                if alpha_eq(a, d) && alpha_eq(b, c) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Falsum | Formula::Prop(_) => 1,
            Formula::Eq(_, a, b) | Formula::Mem(_, a, b) => 1 + a.size() + b.size(),
            Formula::Proves(t, f) => 1 + t.size() + f.size(),
            Formula::Kleene(a, b, c) => 1 + a.size() + b.size() + c.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.size(),
        }
    }

    /// Nesting depth of connectives and quantifiers.
    pub fn depth(&self) -> usize {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => 1 + b.depth(),
            _ => 0,
        }
    }

    pub fn contains_proves(&self) -> bool {
        match self {
            Formula::Proves(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.contains_proves() || b.contains_proves()
            }
            Formula::Forall(_, b) | Formula::Exists(_, b) => b.contains_proves(),
            _ => false,
        }
    }

    /// Propositional atom names, sorted.
    pub fn props(&self) -> Vec<String> {
        fn go(f: &Formula, out: &mut std::collections::BTreeSet<String>) {
            match f {
                Formula::Prop(p) => {
                    out.insert(p.clone());
                }
                Formula::Proves(_, g) => go(g, out),
                Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                Formula::Forall(_, b) | Formula::Exists(_, b) => go(b, out),
                _ => {}
            }
        }
        let mut out = std::collections::BTreeSet::new();
        go(self, &mut out);
        out.into_iter().collect()
    }
}

/// Either kind of syntax tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Syntax {
    Expr(Expr),
    Formula(Formula),
}

impl std::fmt::Display for Syntax {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Syntax::Expr(e) => write!(f, "{e}"),
            Syntax::Formula(p) => write!(f, "{p}"),
        }
    }
}

/// Bounded-quantifier sugar over numeric variables.
pub mod sugar {
    use super::{fresh_var, Expr, Formula, Var};

    fn avoid(es: &[&Expr], extra: &[&Formula]) -> Var {
        let mut vars = std::collections::BTreeSet::new();
        for e in es {
            vars.extend(super::free_vars_expr(e));
        }
        for f in extra {
            vars.extend(super::all_vars(f));
        }
        fresh_var(0, super::VarKind::Number, &vars)
    }

    /// `a <= b` as `ex d. a + d = b`.
    pub fn le(a: &Expr, b: &Expr) -> Formula {
        let d = avoid(&[a, b], &[]);
        Formula::exists(
            d,
            Formula::eq(0, Expr::plus(a.clone(), Expr::Var(d)), b.clone()),
        )
    }

    /// `a < b` as `ex d. a + S(d) = b`.
    pub fn lt(a: &Expr, b: &Expr) -> Formula {
        let d = avoid(&[a, b], &[]);
        Formula::exists(
            d,
            Formula::eq(
                0,
                Expr::plus(a.clone(), Expr::succ(Expr::Var(d))),
                b.clone(),
            ),
        )
    }

    /// `all y. (y <= bound -> body)`.
    pub fn all_le(y: Var, bound: &Expr, body: Formula) -> Formula {
        Formula::forall(y, Formula::imp(le(&Expr::Var(y), bound), body))
    }

    /// `all y. (y < bound -> body)`.
    pub fn all_lt(y: Var, bound: &Expr, body: Formula) -> Formula {
        Formula::forall(y, Formula::imp(lt(&Expr::Var(y), bound), body))
    }

    /// `t > 0` as `ex d. t = S(d)`.
    pub fn positive(t: &Expr) -> Formula {
        let d = avoid(&[t], &[]);
        Formula::exists(d, Formula::eq(0, t.clone(), Expr::succ(Expr::Var(d))))
    }

    /// Initial segments of two n-functionals agree below `x`:
    /// `all y. (y < x -> G(y) = H(y))`.
    pub fn segments_agree(g: &Expr, h: &Expr, x: &Expr) -> Formula {
        let level = g.level();
        let mut vars = std::collections::BTreeSet::new();
        vars.extend(super::free_vars_expr(g));
        vars.extend(super::free_vars_expr(h));
        vars.extend(super::free_vars_expr(x));
        let y = fresh_var(0, super::VarKind::Number, &vars);
        all_lt(
            y,
            x,
            Formula::eq(
                level - 1,
                Expr::ap(level, g.clone(), Expr::Var(y)),
                Expr::ap(level, h.clone(), Expr::Var(y)),
            ),
        )
    }
}
