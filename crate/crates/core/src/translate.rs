//! Interpretation of TI in SLP: extensional collapse `*`, the set-to-functional
//! map `'` and the negative translation `-`, composed as `int`.

use crate::syntax::{all_vars, closure, free_vars_expr, Expr, Formula, Var, VarKind};

/// Allocator of variable indices above everything in sight.
struct Fresh {
    next: u32,
}

impl Fresh {
    fn above<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Fresh {
        Fresh { next: vars.into_iter().map(|v| v.index + 1).max().unwrap_or(1).max(1) }
    }

    fn var(&mut self, level: u32) -> Var {
        let v = Var::set(level, self.next);
        self.next += 1;
        v
    }

    fn num(&mut self) -> Var {
        let v = Var::num(self.next);
        self.next += 1;
        v
    }
}

fn all_in(z: Var, n: u32, x: &Expr, body: Formula) -> Formula {
    Formula::forall(z, Formula::imp(Formula::mem(n, Expr::Var(z), x.clone()), body))
}

fn ex_in(u: Var, n: u32, y: &Expr, body: Formula) -> Formula {
    Formula::exists(u, Formula::and(Formula::mem(n, Expr::Var(u), y.clone()), body))
}

fn approx_with(n: u32, x: &Expr, y: &Expr, fresh: &mut Fresh) -> Formula {
    if n == 0 {
        return Formula::eq(0, x.clone(), y.clone());
    }
    let half = |a: &Expr, b: &Expr, fresh: &mut Fresh| {
        let z = fresh.var(n - 1);
        let u = fresh.var(n - 1);
        let inner = approx_with(n - 1, &Expr::Var(z), &Expr::Var(u), fresh);
        all_in(z, n - 1, a, ex_in(u, n - 1, b, inner))
    };
    let l = half(x, y, fresh);
    let r = half(y, x, fresh);
    Formula::and(l, r)
}

/// `x ~n y`, fully expanded into membership and level-0 equality.
pub fn approx(n: u32, x: &Expr, y: &Expr) -> Formula {
    let vars: Vec<Var> = free_vars_expr(x).into_iter().chain(free_vars_expr(y)).collect();
    approx_with(n, x, y, &mut Fresh::above(&vars))
}

/// One `~n` introduced by `star`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub level: u32,
    pub lhs: Expr,
    pub rhs: Expr,
    pub expansion: Formula,
}

fn star_with(f: &Formula, fresh: &mut Fresh, defs: &mut Vec<Definition>) -> Formula {
    let mut def = |level: u32, lhs: &Expr, rhs: &Expr, fresh: &mut Fresh| {
        let expansion = approx_with(level, lhs, rhs, fresh);
        if level > 0 {
            defs.push(Definition { level, lhs: lhs.clone(), rhs: rhs.clone(), expansion: expansion.clone() });
        }
        expansion
    };
    match f {
        Formula::Eq(n, t, tau) => def(*n, t, tau, fresh),
        Formula::Mem(n, t, tau) => {
            let z = fresh.var(*n);
            let body = def(*n, &Expr::Var(z), t, fresh);
            ex_in(z, *n, tau, body)
        }
        Formula::And(a, b) => Formula::and(star_with(a, fresh, defs), star_with(b, fresh, defs)),
        Formula::Or(a, b) => Formula::or(star_with(a, fresh, defs), star_with(b, fresh, defs)),
        Formula::Implies(a, b) => Formula::imp(star_with(a, fresh, defs), star_with(b, fresh, defs)),
        Formula::Forall(v, b) => Formula::forall(*v, star_with(b, fresh, defs)),
        Formula::Exists(v, b) => Formula::exists(*v, star_with(b, fresh, defs)),
        other => other.clone(),
    }
}

/// Replaces equality by `~n` and membership by membership up to `~n`.
pub fn star(f: &Formula) -> Formula {
    star_with(f, &mut Fresh::above(&all_vars(f)), &mut Vec::new())
}

/// Image of a TI variable: set variables become functional variables.
pub fn prime_var(v: Var) -> Var {
    match v.kind {
        VarKind::Set => Var::functional(v.level, v.index),
        _ => v,
    }
}

pub fn prime_expr(e: &Expr) -> Expr {
    match e {
        Expr::Var(v) => Expr::Var(prime_var(*v)),
        Expr::Succ(a) => Expr::succ(prime_expr(a)),
        Expr::Plus(a, b) => Expr::plus(prime_expr(a), prime_expr(b)),
        Expr::Times(a, b) => Expr::times(prime_expr(a), prime_expr(b)),
        Expr::N(l, a) => Expr::n(*l, prime_expr(a)),
        Expr::Ap(l, a, b) => Expr::ap(*l, prime_expr(a), prime_expr(b)),
        other => other.clone(),
    }
}

fn prime_with(f: &Formula, fresh: &mut Fresh) -> Formula {
    match f {
        Formula::Eq(n, a, b) => Formula::eq(*n, prime_expr(a), prime_expr(b)),
        Formula::Mem(n, t, tau) => {
            let y = fresh.num();
            let at = Expr::ap(n + 1, prime_expr(tau), Expr::Var(y));
            let code = if *n == 0 { Expr::succ(prime_expr(t)) } else { Expr::n(*n, prime_expr(t)) };
            Formula::exists(y, Formula::eq(*n, at, code))
        }
        Formula::And(a, b) => Formula::and(prime_with(a, fresh), prime_with(b, fresh)),
        Formula::Or(a, b) => Formula::or(prime_with(a, fresh), prime_with(b, fresh)),
        Formula::Implies(a, b) => Formula::imp(prime_with(a, fresh), prime_with(b, fresh)),
        Formula::Forall(v, b) => Formula::forall(prime_var(*v), prime_with(b, fresh)),
        Formula::Exists(v, b) => Formula::exists(prime_var(*v), prime_with(b, fresh)),
        other => other.clone(),
    }
}

/// Maps a TI formula into SLP, coding membership by enumeration.
pub fn prime(f: &Formula) -> Formula {
    prime_with(f, &mut Fresh::above(&all_vars(f)))
}

/// The negative translation.
pub fn neg(f: &Formula) -> Formula {
    match f {
        Formula::Falsum => Formula::Falsum,
        Formula::And(a, b) => Formula::and(neg(a), neg(b)),
        Formula::Implies(a, b) => Formula::imp(neg(a), neg(b)),
        Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(neg(a)), Formula::not(neg(b)))),
        Formula::Forall(v, b) => Formula::forall(*v, neg(b)),
        Formula::Exists(v, b) => Formula::not(Formula::forall(*v, Formula::not(neg(b)))),
        atom => Formula::not(Formula::not(atom.clone())),
    }
}

/// Every stage of `int` applied to the closure of a TI formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationTrace {
    pub input: Formula,
    pub closed: Formula,
    pub star: Formula,
    pub prime: Formula,
    pub int: Formula,
    pub definitions: Vec<Definition>,
}

pub fn interpret(f: &Formula) -> TranslationTrace {
    let closed = closure(f);
    let mut definitions = Vec::new();
    let star = star_with(&closed, &mut Fresh::above(&all_vars(&closed)), &mut definitions);
    let prime = prime(&star);
    let int = neg(&prime);
    TranslationTrace { input: f.clone(), closed, star, prime, int, definitions }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{free_vars, parse_formula, Language};

    fn ti(text: &str) -> Formula {
        parse_formula(text, Language::TI, 2).unwrap()
    }

    fn slp(text: &str) -> Formula {
        parse_formula(text, Language::SLP, 2).unwrap()
    }

    fn x(i: u32) -> Expr {
        Expr::Var(Var::num(i))
    }

    #[test]
    fn approx_base_and_step() {
        assert_eq!(approx(0, &x(1), &x(2)), Formula::eq(0, x(1), x(2)));
        let a = Expr::Var(Var::set(1, 1));
        let b = Expr::Var(Var::set(1, 2));
        assert_eq!(
            approx(1, &a, &b),
            ti("(all x3. (x3 in0 X1_1 -> ex x4. (x4 in0 X1_2 & x3 = x4))) \
                & all x5. (x5 in0 X1_2 -> ex x6. (x6 in0 X1_1 & x5 = x6))")
        );
        let c = Expr::Var(Var::set(2, 1));
        let d = Expr::Var(Var::set(2, 2));
        assert!(approx(2, &c, &d).size() > approx(1, &a, &b).size());
    }

    #[test]
    fn star_examples() {
        assert_eq!(star(&ti("x1 = x2")), ti("x1 = x2"));
        assert_eq!(star(&ti("_|_")), Formula::Falsum);
        assert_eq!(star(&ti("x1 in0 X1_1")), ti("ex x2. (x2 in0 X1_1 & x2 = x1)"));
        let s = star(&ti("X1_1 = X1_2"));
        assert_eq!(s, approx(1, &Expr::Var(Var::set(1, 1)), &Expr::Var(Var::set(1, 2))));
    }

    #[test]
    fn prime_examples() {
        assert_eq!(prime(&ti("x1 = x2")), slp("x1 =0 x2"));
        assert_eq!(prime(&ti("x1 in0 X1_1")), slp("ex x2. Ap1(F1_1, x2) =0 S(x1)"));
        assert_eq!(prime(&ti("X1_1 in1 X2_1")), slp("ex x2. Ap2(F2_1, x2) =1 N1(F1_1)"));
        assert_eq!(prime(&ti("all X1_1. X1_1 = X1_1")), slp("all F1_1. F1_1 =1 F1_1"));
    }

    #[test]
    fn neg_examples() {
        assert_eq!(neg(&slp("0 =0 0")), slp("~~(0 =0 0)"));
        assert_eq!(neg(&slp("p | q")), slp("~(~~~p & ~~~q)"));
        assert_eq!(neg(&slp("all F1_1. p")), slp("all F1_1. ~~p"));
        assert_eq!(neg(&slp("ex x1. p")), slp("~all x1. ~~~p"));
        assert_eq!(neg(&Formula::Falsum), Formula::Falsum);
    }

    #[test]
    fn interpret_composes() {
        let t = interpret(&ti("0 = 0"));
        assert_eq!(t.int, slp("~~(0 =0 0)"));
        let f = ti("x1 in0 X1_1 | X1_1 = X1_2");
        let t = interpret(&f);
        assert_eq!(t.int, neg(&prime(&star(&t.closed))));
        assert_eq!(t.definitions.len(), 1);
        assert_eq!(t.definitions[0].level, 1);
        assert!(free_vars(&t.int).is_empty());
        let printed = t.int.to_string();
        assert_eq!(parse_formula(&printed, Language::SLP, 2).unwrap(), t.int);
    }

    #[test]
    fn free_variables_are_images() {
        let f = ti("ex X1_2. (x1 in0 X1_2 & X1_2 in1 X2_1)");
        let img: std::collections::BTreeSet<Var> = free_vars(&f).into_iter().map(prime_var).collect();
        assert_eq!(free_vars(&star(&f)), free_vars(&f));
        assert_eq!(free_vars(&prime(&star(&f))), img);
        assert_eq!(free_vars(&neg(&prime(&star(&f)))), img);
    }
}
