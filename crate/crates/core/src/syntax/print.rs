use std::fmt;

use super::{Expr, Formula, Var, VarKind};

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            VarKind::Number => write!(f, "x{}", self.index),
            VarKind::Functional => write!(f, "F{}_{}", self.level, self.index),
            VarKind::Lawlike => write!(f, "A{}_{}", self.level, self.index),
            VarKind::Lawless => write!(f, "LF{}_{}", self.level, self.index),
            VarKind::Set if self.level == 0 => write!(f, "x{}", self.index),
            VarKind::Set => write!(f, "X{}_{}", self.level, self.index),
        }
    }
}

const SUM: u8 = 0;
const PROD: u8 = 1;
const ATOM: u8 = 2;

fn write_expr(e: &Expr, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if let Some(n) = e.as_numeral() {
        return write!(f, "{n}");
    }
    match e {
        Expr::Zero => write!(f, "0"),
        Expr::K(l) => write!(f, "K{l}"),
        Expr::Var(v) => write!(f, "{v}"),
        Expr::Sym(name, _) => write!(f, "{name}"),
        Expr::Succ(a) => {
            write!(f, "S(")?;
            write_expr(a, SUM, f)?;
            write!(f, ")")
        }
        Expr::Plus(a, b) => {
            if prec > SUM {
                write!(f, "(")?;
            }
            write_expr(a, SUM, f)?;
            write!(f, " + ")?;
            write_expr(b, PROD, f)?;
            if prec > SUM {
                write!(f, ")")?;
            }
            Ok(())
        }
        Expr::Times(a, b) => {
            if prec > PROD {
                write!(f, "(")?;
            }
            write_expr(a, PROD, f)?;
            write!(f, " * ")?;
            write_expr(b, ATOM, f)?;
            if prec > PROD {
                write!(f, ")")?;
            }
            Ok(())
        }
        Expr::N(l, a) => {
            write!(f, "N{l}(")?;
            write_expr(a, SUM, f)?;
            write!(f, ")")
        }
        Expr::Ap(l, a, b) => {
            write!(f, "Ap{l}(")?;
            write_expr(a, SUM, f)?;
            write!(f, ", ")?;
            write_expr(b, SUM, f)?;
            write!(f, ")")
        }
        Expr::Seg(a, b) => {
            write!(f, "seg(")?;
            write_expr(a, SUM, f)?;
            write!(f, ", ")?;
            write_expr(b, SUM, f)?;
            write!(f, ")")
        }
        Expr::Snoc(a, b) => {
            write!(f, "snoc(")?;
            write_expr(a, SUM, f)?;
            write!(f, ", ")?;
            write_expr(b, SUM, f)?;
            write!(f, ")")
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, SUM, f)
    }
}

const TOP: u8 = 0;
const IMP: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const UNARY: u8 = 4;

fn write_formula(p: &Formula, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let open = |f: &mut fmt::Formatter<'_>, cond: bool| if cond { write!(f, "(") } else { Ok(()) };
    let close = |f: &mut fmt::Formatter<'_>, cond: bool| if cond { write!(f, ")") } else { Ok(()) };
    if let Some(a) = p.negated() {
        write!(f, "~")?;
        return write_formula(a, UNARY, f);
    }
    match p {
        Formula::Falsum => write!(f, "_|_"),
        Formula::Prop(name) => write!(f, "{name}"),
        Formula::Eq(l, a, b) => write!(f, "{a} ={l} {b}"),
        Formula::Mem(l, a, b) => write!(f, "{a} in{l} {b}"),
        Formula::Proves(t, inner) => {
            write!(f, "proves({t}, ")?;
            write_formula(inner, TOP, f)?;
            write!(f, ")")
        }
        Formula::Kleene(e, x, y) => write!(f, "kleene({e}, {x}, {y})"),
        Formula::And(a, b) => {
            open(f, prec > AND)?;
            write_formula(a, AND, f)?;
            write!(f, " & ")?;
            write_formula(b, UNARY, f)?;
            close(f, prec > AND)
        }
        Formula::Or(a, b) => {
            open(f, prec > OR)?;
            write_formula(a, OR, f)?;
            write!(f, " | ")?;
            write_formula(b, AND, f)?;
            close(f, prec > OR)
        }
        Formula::Implies(a, b) => {
            open(f, prec > IMP)?;
            write_formula(a, OR, f)?;
            write!(f, " -> ")?;
            write_formula(b, IMP, f)?;
            close(f, prec > IMP)
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            let q = if matches!(p, Formula::Forall(..)) { "all" } else { "ex" };
            open(f, prec > TOP)?;
            write!(f, "{q} {v}. ")?;
            write_formula(b, TOP, f)?;
            close(f, prec > TOP)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(self, TOP, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_and_numerals() {
        let p = Formula::not(Formula::eq(0, Expr::numeral(2), Expr::Zero));
        assert_eq!(p.to_string(), "~2 =0 0");
    }

    #[test]
    fn implication_is_right_associative() {
        let a = Formula::prop("p");
        let b = Formula::prop("q");
        let left = Formula::imp(Formula::imp(a.clone(), b.clone()), a.clone());
        let right = Formula::imp(a.clone(), Formula::imp(b, a));
        assert_eq!(left.to_string(), "(p -> q) -> p");
        assert_eq!(right.to_string(), "p -> q -> p");
    }

    #[test]
    fn quantifier_operand_is_parenthesised() {
        let q = Formula::forall(Var::num(1), Formula::prop("p"));
        let f = Formula::and(q, Formula::prop("r"));
        assert_eq!(f.to_string(), "(all x1. p) & r");
    }
}
