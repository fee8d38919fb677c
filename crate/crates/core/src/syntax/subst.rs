use std::collections::BTreeSet;

use super::{Expr, Formula, Var, VarKind};

pub fn free_vars_expr(e: &Expr) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    expr_vars(e, &mut out);
    out
}

fn expr_vars(e: &Expr, out: &mut BTreeSet<Var>) {
    match e {
        Expr::Var(v) => {
            out.insert(*v);
        }
        Expr::Succ(a) | Expr::N(_, a) => expr_vars(a, out),
        Expr::Plus(a, b) | Expr::Times(a, b) | Expr::Ap(_, a, b) | Expr::Seg(a, b) | Expr::Snoc(a, b) => {
            expr_vars(a, out);
            expr_vars(b, out);
        }
        Expr::Zero | Expr::K(_) | Expr::Sym(..) => {}
    }
}

pub fn free_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    formula_free(f, &mut Vec::new(), &mut out);
    out
}

fn formula_free(f: &Formula, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
    let add = |e: &Expr, bound: &Vec<Var>, out: &mut BTreeSet<Var>| {
        for v in free_vars_expr(e) {
            if !bound.contains(&v) {
                out.insert(v);
            }
        }
    };
    match f {
        Formula::Falsum | Formula::Prop(_) => {}
        Formula::Eq(_, a, b) | Formula::Mem(_, a, b) => {
            add(a, bound, out);
            add(b, bound, out);
        }
        Formula::Proves(t, inner) => {
            add(t, bound, out);
            formula_free(inner, bound, out);
        }
        Formula::Kleene(a, b, c) => {
            add(a, bound, out);
            add(b, bound, out);
            add(c, bound, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            formula_free(a, bound, out);
            formula_free(b, bound, out);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            bound.push(*v);
            formula_free(b, bound, out);
            bound.pop();
        }
    }
}

/// Every variable occurring in `f`, bound or free.
pub fn all_vars(f: &Formula) -> BTreeSet<Var> {
    let mut out = BTreeSet::new();
    fn go(f: &Formula, out: &mut BTreeSet<Var>) {
        match f {
            Formula::Falsum | Formula::Prop(_) => {}
            Formula::Eq(_, a, b) | Formula::Mem(_, a, b) => {
                expr_vars(a, out);
                expr_vars(b, out);
            }
            Formula::Proves(t, inner) => {
                expr_vars(t, out);
                go(inner, out);
            }
            Formula::Kleene(a, b, c) => {
                expr_vars(a, out);
                expr_vars(b, out);
                expr_vars(c, out);
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                go(a, out);
                go(b, out);
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                out.insert(*v);
                go(b, out);
            }
        }
    }
    go(f, &mut out);
    out
}

/// A variable of the given level and kind whose index exceeds every index in `avoid`.
pub fn fresh_var(level: u32, kind: VarKind, avoid: &BTreeSet<Var>) -> Var {
    let index = avoid.iter().map(|v| v.index + 1).max().unwrap_or(1).max(1);
    let kind = if kind == VarKind::Set && level == 0 { VarKind::Number } else { kind };
    Var { index, level, kind }
}

pub fn subst_expr(e: &Expr, v: &Var, r: &Expr) -> Expr {
    match e {
        Expr::Var(w) if w == v => r.clone(),
        Expr::Zero | Expr::K(_) | Expr::Var(_) | Expr::Sym(..) => e.clone(),
        Expr::Succ(a) => Expr::succ(subst_expr(a, v, r)),
        Expr::N(l, a) => Expr::n(*l, subst_expr(a, v, r)),
        Expr::Plus(a, b) => Expr::plus(subst_expr(a, v, r), subst_expr(b, v, r)),
        Expr::Times(a, b) => Expr::times(subst_expr(a, v, r), subst_expr(b, v, r)),
        Expr::Ap(l, a, b) => Expr::ap(*l, subst_expr(a, v, r), subst_expr(b, v, r)),
        Expr::Seg(a, b) => Expr::Seg(Box::new(subst_expr(a, v, r)), Box::new(subst_expr(b, v, r))),
        Expr::Snoc(a, b) => Expr::Snoc(Box::new(subst_expr(a, v, r)), Box::new(subst_expr(b, v, r))),
    }
}

/// Capture-avoiding substitution of `r` for the free occurrences of `v`.
pub fn subst(f: &Formula, v: &Var, r: &Expr) -> Formula {
    let rv = free_vars_expr(r);
    subst_inner(f, v, r, &rv)
}

fn subst_inner(f: &Formula, v: &Var, r: &Expr, rv: &BTreeSet<Var>) -> Formula {
    match f {
        Formula::Falsum | Formula::Prop(_) => f.clone(),
        Formula::Eq(l, a, b) => Formula::Eq(*l, subst_expr(a, v, r), subst_expr(b, v, r)),
        Formula::Mem(l, a, b) => Formula::Mem(*l, subst_expr(a, v, r), subst_expr(b, v, r)),
        Formula::Proves(t, inner) => Formula::proves(subst_expr(t, v, r), subst_inner(inner, v, r, rv)),
        Formula::Kleene(a, b, c) => {
            Formula::Kleene(subst_expr(a, v, r), subst_expr(b, v, r), subst_expr(c, v, r))
        }
        Formula::And(a, b) => Formula::and(subst_inner(a, v, r, rv), subst_inner(b, v, r, rv)),
        Formula::Or(a, b) => Formula::or(subst_inner(a, v, r, rv), subst_inner(b, v, r, rv)),
        Formula::Implies(a, b) => Formula::imp(subst_inner(a, v, r, rv), subst_inner(b, v, r, rv)),
        Formula::Forall(w, body) | Formula::Exists(w, body) => {
            let universal = matches!(f, Formula::Forall(..));
            let rebuild = |w: Var, b: Formula| {
                if universal {
                    Formula::forall(w, b)
                } else {
                    Formula::exists(w, b)
                }
            };
            if w == v || !free_vars(body).contains(v) {
                return f.clone();
            }
            if rv.contains(w) {
                let mut avoid = all_vars(body);
                avoid.extend(rv.iter().copied());
                avoid.insert(*v);
                let w2 = fresh_var(w.level, w.kind, &avoid);
                let renamed = subst_inner(body, w, &Expr::Var(w2), &BTreeSet::from([w2]));
                rebuild(w2, subst_inner(&renamed, v, r, rv))
            } else {
                rebuild(*w, subst_inner(body, v, r, rv))
            }
        }
    }
}

/// Renames free occurrences of variables according to `map`.
pub fn rename_free(f: &Formula, map: &[(Var, Var)]) -> Formula {
    let mut out = f.clone();
    let sources: BTreeSet<Var> = map.iter().map(|(a, _)| *a).collect();
    let targets: BTreeSet<Var> = map.iter().map(|(_, b)| *b).collect();
    if sources.is_disjoint(&targets) {
        for (a, b) in map {
            out = subst(&out, a, &Expr::Var(*b));
        }
        return out;
    }
    let mut avoid = all_vars(f);
    avoid.extend(targets.iter().copied());
    let mut staged = Vec::new();
    for (a, b) in map {
        let tmp = fresh_var(a.level, a.kind, &avoid);
        avoid.insert(tmp);
        out = subst(&out, a, &Expr::Var(tmp));
        staged.push((tmp, *b));
    }
    for (tmp, b) in staged {
        out = subst(&out, &tmp, &Expr::Var(b));
    }
    out
}

/// Alpha-equivalence via positional renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    alpha(a, b, &mut Vec::new(), &mut Vec::new())
}

fn var_eq(x: &Var, y: &Var, ba: &[Var], bb: &[Var]) -> bool {
    let pa = ba.iter().rposition(|v| v == x);
    let pb = bb.iter().rposition(|v| v == y);
    match (pa, pb) {
        (Some(i), Some(j)) => i == j,
        (None, None) => x == y,
        _ => false,
    }
}

fn expr_alpha(x: &Expr, y: &Expr, ba: &[Var], bb: &[Var]) -> bool {
    match (x, y) {
        (Expr::Var(a), Expr::Var(b)) => var_eq(a, b, ba, bb),
        (Expr::Zero, Expr::Zero) => true,
        (Expr::K(a), Expr::K(b)) => a == b,
        (Expr::Sym(a, l), Expr::Sym(b, m)) => a == b && l == m,
        (Expr::Succ(a), Expr::Succ(b)) => expr_alpha(a, b, ba, bb),
        (Expr::N(l, a), Expr::N(m, b)) => l == m && expr_alpha(a, b, ba, bb),
        (Expr::Plus(a1, a2), Expr::Plus(b1, b2))
        | (Expr::Times(a1, a2), Expr::Times(b1, b2))
        | (Expr::Seg(a1, a2), Expr::Seg(b1, b2))
        | (Expr::Snoc(a1, a2), Expr::Snoc(b1, b2)) => {
            expr_alpha(a1, b1, ba, bb) && expr_alpha(a2, b2, ba, bb)
        }
        (Expr::Ap(l, a1, a2), Expr::Ap(m, b1, b2)) => {
            l == m && expr_alpha(a1, b1, ba, bb) && expr_alpha(a2, b2, ba, bb)
        }
        _ => false,
    }
}

fn alpha(a: &Formula, b: &Formula, ba: &mut Vec<Var>, bb: &mut Vec<Var>) -> bool {
    match (a, b) {
        (Formula::Falsum, Formula::Falsum) => true,
        (Formula::Prop(p), Formula::Prop(q)) => p == q,
        (Formula::Eq(l, a1, a2), Formula::Eq(m, b1, b2))
        | (Formula::Mem(l, a1, a2), Formula::Mem(m, b1, b2)) => {
            l == m && expr_alpha(a1, b1, ba, bb) && expr_alpha(a2, b2, ba, bb)
        }
        (Formula::Proves(t, f), Formula::Proves(u, g)) => {
            expr_alpha(t, u, ba, bb) && alpha(f, g, ba, bb)
        }
        (Formula::Kleene(a1, a2, a3), Formula::Kleene(b1, b2, b3)) => {
            expr_alpha(a1, b1, ba, bb) && expr_alpha(a2, b2, ba, bb) && expr_alpha(a3, b3, ba, bb)
        }
        (Formula::And(a1, a2), Formula::And(b1, b2))
        | (Formula::Or(a1, a2), Formula::Or(b1, b2))
        | (Formula::Implies(a1, a2), Formula::Implies(b1, b2)) => {
            alpha(a1, b1, ba, bb) && alpha(a2, b2, ba, bb)
        }
        (Formula::Forall(v, f), Formula::Forall(w, g)) | (Formula::Exists(v, f), Formula::Exists(w, g)) => {
            if v.level != w.level || v.kind != w.kind {
                return false;
            }
            ba.push(*v);
            bb.push(*w);
            let r = alpha(f, g, ba, bb);
            ba.pop();
            bb.pop();
            r
        }
        _ => false,
    }
}

/// Maximal level of the parameters, 0 for sentences.
pub fn sort_of(f: &Formula) -> u32 {
    free_vars(f).iter().map(|v| v.level).max().unwrap_or(0)
}

/// Universal closure; outermost quantifiers bind the highest levels first,
/// ties broken by index.
pub fn closure(f: &Formula) -> Formula {
    let mut vars: Vec<Var> = free_vars(f).into_iter().collect();
    vars.sort_by(|a, b| b.level.cmp(&a.level).then(a.index.cmp(&b.index)).then(a.kind.cmp(&b.kind)));
    let mut out = f.clone();
    for v in vars.into_iter().rev() {
        out = Formula::forall(v, out);
    }
    out
}

/// Removes the leading universal quantifiers, returning them outermost first.
pub fn strip_universals(f: &Formula) -> (Vec<Var>, &Formula) {
    let mut vars = Vec::new();
    let mut cur = f;
    while let Formula::Forall(v, b) = cur {
        vars.push(*v);
        cur = b;
    }
    (vars, cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Language};

    fn f(text: &str) -> Formula {
        parse_formula(text, Language::SLP, 3).unwrap()
    }

    fn x(i: u32) -> Var {
        Var::num(i)
    }

    #[test]
    fn sort_examples() {
        assert_eq!(sort_of(&f("all x1. x1 =0 0")), 0);
        assert_eq!(sort_of(&f("Ap1(F1_1, x1) =0 0")), 1);
        assert_eq!(sort_of(&f("all F2_1. Ap2(F2_1, x1) =1 F1_1")), 1);
    }

    #[test]
    fn closure_examples() {
        let closed = f("all x1. x1 =0 0");
        assert_eq!(closure(&closed), closed);
        let c = closure(&f("Ap1(F1_1, x1) =0 0"));
        assert_eq!(c, f("all F1_1. all x1. Ap1(F1_1, x1) =0 0"));
        let ll2 = closure(&f("LF1_1 =1 LF1_2 | ~LF1_1 =1 LF1_2"));
        assert_eq!(ll2, f("all LF1_1. all LF1_2. LF1_1 =1 LF1_2 | ~LF1_1 =1 LF1_2"));
        assert_eq!(sort_of(&ll2), 0);
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(subst(&f("x1 =0 0"), &x(1), &Expr::numeral(1)), f("1 =0 0"));
        let captured = subst(&f("ex x1. x1 =0 x2"), &x(2), &Expr::Var(x(1)));
        assert!(alpha_eq(&captured, &f("ex x3. x3 =0 x1")));
        assert!(!alpha_eq(&captured, &f("ex x1. x1 =0 x1")));
        let g = subst(
            &f("Ap1(F1_1, 0) =0 0"),
            &Var::functional(1, 1),
            &Expr::n(1, Expr::K(1)),
        );
        assert_eq!(g, f("Ap1(N1(K1), 0) =0 0"));
    }

    #[test]
    fn bound_occurrences_untouched() {
        let p = f("all x1. x1 =0 x2");
        assert_eq!(subst(&p, &x(1), &Expr::Zero), p);
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&f("all x1. x1 =0 x1"), &f("all x7. x7 =0 x7")));
        assert!(!alpha_eq(&f("all x1. x1 =0 x2"), &f("all x2. x2 =0 x2")));
        assert!(!alpha_eq(&f("all x1. p"), &f("all F1_1. p")));
    }

    #[test]
    fn simultaneous_renaming() {
        let p = f("x1 =0 x2");
        let swapped = rename_free(&p, &[(x(1), x(2)), (x(2), x(1))]);
        assert_eq!(swapped, f("x2 =0 x1"));
    }
}
