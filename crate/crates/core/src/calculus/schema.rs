use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{CalcError, Family, Theory};
use crate::syntax::{
    alpha_eq, all_vars, check_formula, closure, free_vars, free_vars_expr, fresh_var, sort_of,
    strip_universals, subst, sugar, Expr, Formula, Var, VarKind,
};

/// The instantiation record of a schema: its formulas, variables, levels and
/// the variant for families with two axioms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parts {
    pub phi: Option<Formula>,
    pub psi: Option<Formula>,
    pub term: Option<Expr>,
    pub x: Option<Var>,
    pub y: Option<Var>,
    pub z: Option<Var>,
    pub f: Option<Var>,
    pub g: Option<Var>,
    pub h: Option<Var>,
    pub n: Option<u32>,
    pub variant: u8,
}

/// A recognised axiom with its instantiation and the side conditions that
/// were verified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxiomId {
    pub family: Family,
    pub parts: Parts,
    pub conditions: Vec<String>,
}

fn side(msg: impl Into<String>) -> CalcError {
    CalcError::SideCondition(msg.into())
}

fn var(v: Var) -> Expr {
    Expr::Var(v)
}

fn eq0(a: Expr, b: Expr) -> Formula {
    Formula::eq(0, a, b)
}

struct Builder<'a> {
    p: &'a Parts,
    conds: Vec<String>,
    /// Skip the parameter, sort and lawless side conditions.
    lenient: bool,
}

impl<'a> Builder<'a> {
    fn get(&self, v: Option<Var>, name: &'static str) -> Result<Var, CalcError> {
        v.ok_or(CalcError::MissingPart(name))
    }

    fn num(&self, v: Option<Var>, name: &'static str) -> Result<Var, CalcError> {
        let v = self.get(v, name)?;
        if v.level != 0 {
            return Err(side(format!("{name} = {v} must be a numeric variable")));
        }
        Ok(v)
    }

    fn of_kind(
        &self,
        v: Option<Var>,
        name: &'static str,
        kind: VarKind,
    ) -> Result<Var, CalcError> {
        let v = self.get(v, name)?;
        if v.kind != kind || v.level == 0 {
            return Err(side(format!("{name} = {v} must be a {kind:?} variable of level >= 1")));
        }
        Ok(v)
    }

    /// A TI variable of the given level: numeric at level 0, a set above.
    fn ti_var(&self, v: Option<Var>, name: &'static str, level: u32) -> Result<Var, CalcError> {
        let v = self.get(v, name)?;
        let kind = if level == 0 { VarKind::Number } else { VarKind::Set };
        if v.level != level || v.kind != kind {
            return Err(side(format!("{name} = {v} must be a variable of type {level}")));
        }
        Ok(v)
    }

    fn phi(&self) -> Result<&'a Formula, CalcError> {
        self.p.phi.as_ref().ok_or(CalcError::MissingPart("phi"))
    }

    fn psi(&self) -> Result<&'a Formula, CalcError> {
        self.p.psi.as_ref().ok_or(CalcError::MissingPart("psi"))
    }

    fn level(&self) -> Result<u32, CalcError> {
        self.p.n.ok_or(CalcError::MissingPart("n"))
    }

    fn distinct(&self, vars: &[Var]) -> Result<(), CalcError> {
        let set: BTreeSet<&Var> = vars.iter().collect();
        if set.len() != vars.len() {
            return Err(side(format!(
                "variables {} must be distinct",
                vars.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(())
    }

    fn not_free(&mut self, v: Var, phi: &Formula, what: &str) -> Result<(), CalcError> {
        if free_vars(phi).contains(&v) && !self.lenient {
            return Err(side(format!("{v} is a parameter of {what}")));
        }
        self.conds.push(format!("{v} is not a parameter of {what}"));
        Ok(())
    }

    fn in_l(&mut self, phi: &Formula) -> Result<(), CalcError> {
        if phi.contains_proves() || check_formula(phi, crate::syntax::Language::L, u32::MAX).is_err() {
            return Err(side(format!("{phi} is not a formula of L")));
        }
        self.conds.push("phi is a formula of L".into());
        Ok(())
    }

    fn sort_at_most(&mut self, phi: &Formula, bound: u32) -> Result<(), CalcError> {
        let s = sort_of(phi);
        if s > bound && !self.lenient {
            return Err(side(format!("sort(phi) = {s} exceeds {bound}")));
        }
        self.conds.push(format!("sort(phi) = {s} <= {bound}"));
        Ok(())
    }

    /// The only non-lawlike parameters of type `n` are those in `allowed`.
    fn lawless_restriction(&mut self, phi: &Formula, n: u32, allowed: Var) -> Result<(), CalcError> {
        for v in free_vars(phi) {
            if v.level == n && v != allowed && v.kind != VarKind::Lawlike && !self.lenient {
                return Err(side(format!(
                    "{v} is a non-lawlike parameter of type {n} other than {allowed}"
                )));
            }
        }
        self.conds.push(format!("no non-lawlike parameters of type {n} other than {allowed}"));
        Ok(())
    }

    fn order_at_least(&mut self, m: u32, need: u32, bound: &str) -> Result<(), CalcError> {
        if m < need && !self.lenient {
            return Err(side(format!("m = {m} < {bound} = {need}")));
        }
        self.conds.push(format!("m = {m} >= {bound} = {need}"));
        Ok(())
    }

    fn variant(&self, max: u8) -> Result<u8, CalcError> {
        if self.p.variant > max {
            return Err(side(format!("unknown variant {}", self.p.variant)));
        }
        Ok(self.p.variant)
    }
}

/// `F(x)(0)...(0)` down to level `target`.
fn ap_to_level(f: Var, x: Expr, target: u32) -> Expr {
    let mut e = Expr::ap(f.level, var(f), x);
    let mut level = f.level - 1;
    while level > target {
        e = Expr::ap(level, e, Expr::Zero);
        level -= 1;
    }
    e
}

fn k_tower(n: u32) -> Expr {
    if n == 0 {
        Expr::Zero
    } else {
        Expr::K(n)
    }
}

/// `q` arises from the atom `p` by replacing some occurrences of `x` by `y`.
fn replaces_some(p: &Formula, q: &Formula, x: &Var, y: &Var) -> bool {
    fn ex(a: &Expr, b: &Expr, x: &Var, y: &Var) -> bool {
        match (a, b) {
            (Expr::Var(u), Expr::Var(w)) => u == w || (u == x && w == y),
            (Expr::Zero, Expr::Zero) => true,
            (Expr::K(l), Expr::K(m)) => l == m,
            (Expr::Sym(a, l), Expr::Sym(b, m)) => a == b && l == m,
            (Expr::Succ(a), Expr::Succ(b)) => ex(a, b, x, y),
            (Expr::N(l, a), Expr::N(m, b)) => l == m && ex(a, b, x, y),
            (Expr::Plus(a1, a2), Expr::Plus(b1, b2))
            | (Expr::Times(a1, a2), Expr::Times(b1, b2))
            | (Expr::Seg(a1, a2), Expr::Seg(b1, b2))
            | (Expr::Snoc(a1, a2), Expr::Snoc(b1, b2)) => ex(a1, b1, x, y) && ex(a2, b2, x, y),
            (Expr::Ap(l, a1, a2), Expr::Ap(m, b1, b2)) => {
                l == m && ex(a1, b1, x, y) && ex(a2, b2, x, y)
            }
            _ => false,
        }
    }
    match (p, q) {
        (Formula::Eq(l, a1, a2), Formula::Eq(m, b1, b2))
        | (Formula::Mem(l, a1, a2), Formula::Mem(m, b1, b2)) => {
            l == m && ex(a1, b1, x, y) && ex(a2, b2, x, y)
        }
        _ => false,
    }
}

fn two_part(family: Family) -> bool {
    use Family::*;
    matches!(family, L1 | L2 | L3 | L5 | L6 | TI1 | TI2 | TI3 | Equality)
}

/// The open instance of a schema, before closure, with the side conditions
/// that were checked.
fn instance_open(family: Family, p: &Parts) -> Result<(Formula, Vec<String>), CalcError> {
    instance_with(family, p, false)
}

fn instance_with(family: Family, p: &Parts, lenient: bool) -> Result<(Formula, Vec<String>), CalcError> {
    use Family::*;
    let mut b = Builder { p, conds: Vec::new(), lenient };
    let variant = b.variant(if two_part(family) { 1 } else { 0 })?;
    let f = match family {
        L1 | TI1 => {
            let x = b.num(p.x, "x")?;
            if variant == 0 {
                Formula::not(eq0(Expr::succ(var(x)), Expr::Zero))
            } else {
                let y = b.num(p.y, "y")?;
                b.distinct(&[x, y])?;
                Formula::imp(eq0(Expr::succ(var(x)), Expr::succ(var(y))), eq0(var(x), var(y)))
            }
        }
        L2 | TI2 => {
            let x = b.num(p.x, "x")?;
            if variant == 0 {
                eq0(Expr::plus(var(x), Expr::Zero), var(x))
            } else {
                let y = b.num(p.y, "y")?;
                b.distinct(&[x, y])?;
                eq0(
                    Expr::plus(var(x), Expr::succ(var(y))),
                    Expr::succ(Expr::plus(var(x), var(y))),
                )
            }
        }
        L3 | TI3 => {
            let x = b.num(p.x, "x")?;
            if variant == 0 {
                eq0(Expr::times(var(x), Expr::Zero), Expr::Zero)
            } else {
                let y = b.num(p.y, "y")?;
                b.distinct(&[x, y])?;
                eq0(
                    Expr::times(var(x), Expr::succ(var(y))),
                    Expr::plus(Expr::times(var(x), var(y)), var(x)),
                )
            }
        }
        L4 | TI4 => {
            let phi = b.phi()?;
            let x = b.num(p.x, "x")?;
            Formula::imp(
                Formula::and(
                    subst(phi, &x, &Expr::Zero),
                    Formula::forall(x, Formula::imp(phi.clone(), subst(phi, &x, &Expr::succ(var(x))))),
                ),
                Formula::forall(x, phi.clone()),
            )
        }
        L5 => {
            let n = b.level()?;
            if variant == 0 {
                let x = b.num(p.x, "x")?;
                Formula::eq(n, Expr::ap(n + 1, Expr::K(n + 1), var(x)), k_tower(n))
            } else {
                let f = b.of_kind(p.f, "F", VarKind::Functional)?;
                if f.level != n || n == 0 {
                    return Err(side(format!("F = {f} must have level n = {n} >= 1")));
                }
                Formula::not(Formula::eq(n, Expr::n(n, var(f)), Expr::K(n)))
            }
        }
        L6 => {
            let n = b.level()?;
            if variant == 0 {
                let f = b.of_kind(p.f, "F", VarKind::Functional)?;
                let x = b.num(p.x, "x")?;
                if f.level != n + 1 {
                    return Err(side(format!("F = {f} must have level n + 1 = {}", n + 1)));
                }
                let fx = Expr::ap(n + 1, var(f), var(x));
                let rhs = if n == 0 { Expr::succ(fx) } else { Expr::n(n, fx) };
                Formula::eq(n, Expr::ap(n + 1, Expr::n(n + 1, var(f)), var(x)), rhs)
            } else {
                let f = b.of_kind(p.f, "F", VarKind::Functional)?;
                let g = b.of_kind(p.g, "G", VarKind::Functional)?;
                b.distinct(&[f, g])?;
                if f.level != n || g.level != n || n == 0 {
                    return Err(side(format!("F and G must have level n = {n} >= 1")));
                }
                Formula::imp(
                    Formula::eq(n, Expr::n(n, var(f)), Expr::n(n, var(g))),
                    Formula::eq(n, var(f), var(g)),
                )
            }
        }
        L7 => {
            let a = b.of_kind(p.f, "A", VarKind::Lawlike)?;
            let x = b.num(p.x, "x")?;
            if a.level != 1 {
                return Err(side(format!("A = {a} must be a lawlike 1-functional")));
            }
            let t = p.term.as_ref().ok_or(CalcError::MissingPart("term"))?;
            if t.level() != 0 {
                return Err(side(format!("{t} is not a term")));
            }
            if has_sym(t) {
                return Err(side(format!("{t} contains a frame symbol")));
            }
            for v in free_vars_expr(t) {
                let ok = v.kind == VarKind::Number || (v.kind == VarKind::Lawlike && v.level == 1);
                if !ok {
                    return Err(side(format!(
                        "{v} in {t} is neither numeric nor a lawlike 1-functional"
                    )));
                }
                if v == a {
                    return Err(side(format!("{a} occurs in {t}")));
                }
            }
            b.conds.push("t has only numeric and lawlike 1-functional variables".into());
            Formula::exists(a, Formula::forall(x, eq0(Expr::ap(1, var(a), var(x)), t.clone())))
        }
        CS1 | CS2 | CS3 => {
            let phi = b.phi()?;
            b.in_l(phi)?;
            let z = b.num(p.z, "z")?;
            let pz = Formula::proves(var(z), phi.clone());
            match family {
                CS1 => Formula::or(pz.clone(), Formula::not(pz)),
                CS2 => {
                    let y = b.num(p.y, "y")?;
                    b.distinct(&[z, y])?;
                    Formula::imp(pz, Formula::proves(Expr::plus(var(z), var(y)), phi.clone()))
                }
                _ => {
                    b.not_free(z, phi, "phi")?;
                    Formula::iff(Formula::exists(z, pz), phi.clone())
                }
            }
        }
        LL1 => {
            let lf = b.of_kind(p.f, "lawless F", VarKind::Lawless)?;
            let f = b.of_kind(p.g, "F", VarKind::Functional)?;
            let x = b.num(p.x, "x")?;
            let y = b.num(p.y, "y")?;
            b.distinct(&[x, y])?;
            if lf.level != f.level {
                return Err(side(format!("{lf} and {f} must have the same level")));
            }
            let n = f.level;
            Formula::exists(
                lf,
                sugar::all_le(
                    y,
                    &var(x),
                    Formula::eq(n - 1, Expr::ap(n, var(lf), var(y)), Expr::ap(n, var(f), var(y))),
                ),
            )
        }
        LL2 => {
            let f = b.of_kind(p.f, "lawless F", VarKind::Lawless)?;
            let g = b.of_kind(p.g, "lawless G", VarKind::Lawless)?;
            b.distinct(&[f, g])?;
            if f.level != g.level {
                return Err(side(format!("{f} and {g} must have the same level")));
            }
            let e = Formula::eq(f.level, var(f), var(g));
            Formula::or(e.clone(), Formula::not(e))
        }
        LL3 => {
            let phi = b.phi()?;
            let h = b.of_kind(p.h, "lawless H", VarKind::Lawless)?;
            let g = b.of_kind(p.g, "lawless G", VarKind::Lawless)?;
            let x = b.num(p.x, "x")?;
            b.distinct(&[g, h])?;
            if g.level != h.level {
                return Err(side(format!("{g} and {h} must have the same level")));
            }
            let n = h.level;
            b.sort_at_most(phi, n)?;
            b.lawless_restriction(phi, n, h)?;
            b.not_free(g, phi, "phi")?;
            b.not_free(x, phi, "phi")?;
            Formula::imp(
                phi.clone(),
                Formula::exists(
                    x,
                    Formula::forall(
                        g,
                        Formula::imp(
                            sugar::segments_agree(&var(g), &var(h), &var(x)),
                            subst(phi, &h, &var(g)),
                        ),
                    ),
                ),
            )
        }
        C1 => {
            let phi = b.phi()?;
            let x = b.num(p.x, "x")?;
            let y = b.num(p.y, "y")?;
            let f = b.of_kind(p.f, "F", VarKind::Functional)?;
            b.distinct(&[x, y])?;
            let m = f.level;
            let need = sort_of(phi).max(1);
            b.order_at_least(m, need, "max(sort(phi), 1)")?;
            b.not_free(f, phi, "phi")?;
            Formula::imp(
                Formula::forall(x, Formula::exists(y, phi.clone())),
                Formula::exists(f, Formula::forall(x, subst(phi, &y, &Expr::ap_down(var(f), var(x))))),
            )
        }
        C2 => {
            let phi = b.phi()?;
            let x = b.num(p.x, "x")?;
            let g = b.of_kind(p.g, "G", VarKind::Functional)?;
            let f = b.of_kind(p.f, "F", VarKind::Functional)?;
            b.distinct(&[f, g])?;
            let n = g.level;
            let m = f.level;
            let need = sort_of(phi).max(n + 1);
            b.order_at_least(m, need, "max(sort(phi), n + 1)")?;
            b.not_free(f, phi, "phi")?;
            let mut avoid = all_vars(phi);
            avoid.insert(g);
            avoid.insert(x);
            let h = fresh_var(n, VarKind::Functional, &avoid);
            let unique = Formula::exists(
                g,
                Formula::and(
                    phi.clone(),
                    Formula::forall(h, Formula::imp(subst(phi, &g, &var(h)), Formula::eq(n, var(h), var(g)))),
                ),
            );
            Formula::imp(
                Formula::forall(x, unique),
                Formula::exists(f, Formula::forall(x, subst(phi, &g, &ap_to_level(f, var(x), n)))),
            )
        }
        KS => {
            let phi = b.phi()?;
            b.in_l(phi)?;
            let g = b.of_kind(p.g, "G", VarKind::Functional)?;
            let x = b.num(p.x, "x")?;
            let m = g.level;
            let need = sort_of(phi).max(1);
            b.order_at_least(m, need, "max(sort(phi), 1)")?;
            b.not_free(g, phi, "phi")?;
            Formula::exists(
                g,
                Formula::iff(
                    phi.clone(),
                    Formula::exists(x, Formula::not(eq0(Expr::ap_down(var(g), var(x)), Expr::Zero))),
                ),
            )
        }
        WC => {
            let phi = b.phi()?;
            let f = b.of_kind(p.f, "lawless F", VarKind::Lawless)?;
            let g = b.of_kind(p.g, "lawless G", VarKind::Lawless)?;
            let x = b.num(p.x, "x")?;
            let y = b.num(p.y, "y")?;
            b.distinct(&[f, g])?;
            b.distinct(&[x, y])?;
            if f.level != g.level {
                return Err(side(format!("{f} and {g} must have the same level")));
            }
            let n = f.level;
            b.sort_at_most(phi, n)?;
            b.lawless_restriction(phi, n, f)?;
            b.not_free(g, phi, "phi")?;
            b.not_free(y, phi, "phi")?;
            Formula::imp(
                Formula::forall(f, Formula::exists(x, phi.clone())),
                Formula::forall(
                    f,
                    Formula::exists(
                        x,
                        Formula::exists(
                            y,
                            Formula::forall(
                                g,
                                Formula::imp(
                                    sugar::segments_agree(&var(g), &var(f), &var(y)),
                                    subst(phi, &f, &var(g)),
                                ),
                            ),
                        ),
                    ),
                ),
            )
        }
        BI => {
            let phi = b.phi()?;
            let psi = b.psi()?;
            let f = b.of_kind(p.f, "F", VarKind::Functional)?;
            let x = b.num(p.x, "x")?;
            let y = b.num(p.y, "y")?;
            b.distinct(&[x, y])?;
            if f.level != 1 {
                return Err(side(format!("F = {f} must be a 1-functional")));
            }
            b.not_free(f, phi, "phi")?;
            b.not_free(x, phi, "phi")?;
            b.not_free(x, psi, "psi")?;
            let snoc = Expr::Snoc(Box::new(var(y)), Box::new(var(x)));
            let a1 = Formula::forall(
                f,
                Formula::exists(x, subst(phi, &y, &Expr::Seg(Box::new(var(f)), Box::new(var(x))))),
            );
            let a2 = Formula::forall(x, Formula::forall(y, Formula::imp(phi.clone(), subst(phi, &y, &snoc))));
            let a3 = Formula::forall(
                y,
                Formula::imp(Formula::forall(x, subst(psi, &y, &snoc)), psi.clone()),
            );
            let a4 = Formula::forall(y, Formula::imp(phi.clone(), psi.clone()));
            Formula::imp(
                Formula::and(Formula::and(Formula::and(a1, a2), a3), a4),
                subst(psi, &y, &Expr::Zero),
            )
        }
        MP => {
            let phi = b.phi()?;
            b.in_l(phi)?;
            let x = b.num(p.x, "x")?;
            let ex = Formula::exists(x, phi.clone());
            Formula::imp(
                Formula::and(
                    Formula::forall(x, Formula::or(phi.clone(), Formula::not(phi.clone()))),
                    Formula::not(Formula::not(ex.clone())),
                ),
                ex,
            )
        }
        CT => {
            let phi = b.phi()?;
            let x = b.num(p.x, "x")?;
            let y = b.num(p.y, "y")?;
            let e = b.num(p.z, "e")?;
            b.distinct(&[x, y, e])?;
            b.not_free(e, phi, "phi")?;
            Formula::imp(
                Formula::forall(x, Formula::exists(y, phi.clone())),
                Formula::exists(
                    e,
                    Formula::forall(
                        x,
                        Formula::exists(
                            y,
                            Formula::and(Formula::Kleene(var(e), var(x), var(y)), phi.clone()),
                        ),
                    ),
                ),
            )
        }
        Compr => {
            let phi = b.phi()?;
            let n = b.level()?;
            let x = b.ti_var(p.f, "x", n + 1)?;
            let z = b.ti_var(p.z, "z", n)?;
            b.sort_at_most(phi, n + 1)?;
            b.not_free(x, phi, "phi")?;
            Formula::exists(
                x,
                Formula::forall(z, Formula::iff(Formula::mem(n, var(z), var(x)), phi.clone())),
            )
        }
        Ext => {
            let n = b.level()?;
            let x = b.ti_var(p.x, "x", n + 1)?;
            let y = b.ti_var(p.y, "y", n + 1)?;
            let z = b.ti_var(p.z, "z", n)?;
            b.distinct(&[x, y])?;
            Formula::imp(
                Formula::forall(
                    z,
                    Formula::iff(Formula::mem(n, var(z), var(x)), Formula::mem(n, var(z), var(y))),
                ),
                Formula::eq(n + 1, var(x), var(y)),
            )
        }
        Equality => {
            let x = b.get(p.x, "x")?;
            if variant == 0 {
                Formula::eq(x.level, var(x), var(x))
            } else {
                let y = b.get(p.y, "y")?;
                if x.level != y.level {
                    return Err(side(format!("{x} and {y} must have the same level")));
                }
                let a = b.phi()?;
                let c = b.psi()?;
                if !replaces_some(a, c, &x, &y) {
                    return Err(side(format!(
                        "{c} is not obtained from the atom {a} by replacing {x} with {y}"
                    )));
                }
                Formula::imp(
                    Formula::eq(x.level, var(x), var(y)),
                    Formula::imp(a.clone(), c.clone()),
                )
            }
        }
    };
    Ok((f, b.conds))
}

fn has_sym(e: &Expr) -> bool {
    match e {
        Expr::Sym(..) => true,
        Expr::Zero | Expr::K(_) | Expr::Var(_) => false,
        Expr::Succ(a) | Expr::N(_, a) => has_sym(a),
        Expr::Plus(a, b) | Expr::Times(a, b) | Expr::Ap(_, a, b) | Expr::Seg(a, b) | Expr::Snoc(a, b) => {
            has_sym(a) || has_sym(b)
        }
    }
}

/// The closed instance of a schema.
pub fn instantiate_schema(family: Family, parts: &Parts) -> Result<Formula, CalcError> {
    instance_open(family, parts).map(|(f, _)| closure(&f))
}

/// The closed formula of the schema's shape with the parameter, sort and
/// lawless side conditions ignored; used to build near-miss non-instances.
pub fn instantiate_unchecked(family: Family, parts: &Parts) -> Result<Formula, CalcError> {
    instance_with(family, parts, true).map(|(f, _)| closure(&f))
}

fn as_var(e: &Expr) -> Option<Var> {
    match e {
        Expr::Var(v) => Some(*v),
        _ => None,
    }
}

fn imp(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::Implies(a, b) => Some((a, b)),
        _ => None,
    }
}

fn and(f: &Formula) -> Option<(&Formula, &Formula)> {
    match f {
        Formula::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn all(f: &Formula) -> Option<(Var, &Formula)> {
    match f {
        Formula::Forall(v, b) => Some((*v, b)),
        _ => None,
    }
}

fn ex(f: &Formula) -> Option<(Var, &Formula)> {
    match f {
        Formula::Exists(v, b) => Some((*v, b)),
        _ => None,
    }
}

/// The functional applied on the right of `all y. (y < x -> G(y) = H(y))`.
fn segment_rhs(f: &Formula) -> Option<Var> {
    let (_, body) = all(f)?;
    let (_, e) = imp(body)?;
    match e {
        Formula::Eq(_, _, Expr::Ap(_, h, _)) => as_var(h),
        _ => None,
    }
}

/// Parts read off the shape of `f`; each candidate is confirmed by
/// re-instantiating the schema.
fn candidates(family: Family, f: &Formula) -> Vec<Parts> {
    use Family::*;
    let base = Parts::default();
    let mut out = Vec::new();
    let mut push = |p: Option<Parts>| {
        if let Some(p) = p {
            out.push(p);
        }
    };
    match family {
        L1 | TI1 => {
            push((|| {
                let a = f.negated()?;
                match a {
                    Formula::Eq(0, Expr::Succ(x), Expr::Zero) => Some(Parts { x: as_var(x), ..base.clone() }),
                    _ => None,
                }
            })());
            push((|| match imp(f)?.0 {
                Formula::Eq(0, Expr::Succ(x), Expr::Succ(y)) => {
                    Some(Parts { x: as_var(x), y: as_var(y), variant: 1, ..base.clone() })
                }
                _ => None,
            })());
        }
        L2 | TI2 | L3 | TI3 => {
            if let Formula::Eq(0, lhs, _) = f {
                let (Expr::Plus(x, r) | Expr::Times(x, r)) = lhs else { return out };
                match &**r {
                    Expr::Zero => push(Some(Parts { x: as_var(x), ..base.clone() })),
                    Expr::Succ(y) => {
                        push(Some(Parts { x: as_var(x), y: as_var(y), variant: 1, ..base.clone() }))
                    }
                    _ => {}
                }
            }
        }
        L4 | TI4 => push((|| {
            let (a, _) = imp(f)?;
            let (_, step) = and(a)?;
            let (x, body) = all(step)?;
            let (phi, _) = imp(body)?;
            Some(Parts { phi: Some(phi.clone()), x: Some(x), ..base.clone() })
        })()),
        L5 => {
            if let Formula::Eq(n, Expr::Ap(_, _, x), _) = f {
                push(Some(Parts { n: Some(*n), x: as_var(x), ..base.clone() }));
            }
            if let Some(Formula::Eq(n, Expr::N(_, g), _)) = f.negated() {
                push(Some(Parts { n: Some(*n), f: as_var(g), variant: 1, ..base.clone() }));
            }
        }
        L6 => {
            if let Formula::Eq(n, Expr::Ap(_, nf, x), _) = f {
                if let Expr::N(_, g) = &**nf {
                    push(Some(Parts { n: Some(*n), f: as_var(g), x: as_var(x), ..base.clone() }));
                }
            }
            if let Some((Formula::Eq(n, Expr::N(_, a), Expr::N(_, c)), _)) = imp(f) {
                push(Some(Parts { n: Some(*n), f: as_var(a), g: as_var(c), variant: 1, ..base.clone() }));
            }
        }
        L7 => push((|| {
            let (a, body) = ex(f)?;
            let (x, e) = all(body)?;
            match e {
                Formula::Eq(_, _, t) => Some(Parts { f: Some(a), x: Some(x), term: Some(t.clone()), ..base.clone() }),
                _ => None,
            }
        })()),
        CS1 => {
            if let Formula::Or(a, _) = f {
                if let Formula::Proves(z, phi) = &**a {
                    push(Some(Parts { phi: Some((**phi).clone()), z: as_var(z), ..base.clone() }));
                }
            }
        }
        CS2 => push((|| {
            let (a, c) = imp(f)?;
            match (a, c) {
                (Formula::Proves(z, phi), Formula::Proves(Expr::Plus(_, y), _)) => Some(Parts {
                    phi: Some((**phi).clone()),
                    z: as_var(z),
                    y: as_var(y),
                    ..base.clone()
                }),
                _ => None,
            }
        })()),
        CS3 => push((|| {
            let (l, _) = and(f)?;
            let (e, phi) = imp(l)?;
            let (z, _) = ex(e)?;
            Some(Parts { phi: Some(phi.clone()), z: Some(z), ..base.clone() })
        })()),
        LL1 => push((|| {
            let (lf, body) = ex(f)?;
            let (y, body) = all(body)?;
            let (le, e) = imp(body)?;
            let (_, le) = ex(le)?;
            let x = match le {
                Formula::Eq(_, _, x) => as_var(x)?,
                _ => return None,
            };
            let g = match e {
                Formula::Eq(_, _, Expr::Ap(_, g, _)) => as_var(g)?,
                _ => return None,
            };
            Some(Parts { f: Some(lf), g: Some(g), x: Some(x), y: Some(y), ..base.clone() })
        })()),
        LL2 => {
            if let Formula::Or(a, _) = f {
                if let Formula::Eq(_, l, r) = &**a {
                    push(Some(Parts { f: as_var(l), g: as_var(r), ..base.clone() }));
                }
            }
        }
        LL3 => push((|| {
            let (phi, c) = imp(f)?;
            let (x, c) = ex(c)?;
            let (g, c) = all(c)?;
            let (seg, _) = imp(c)?;
            let h = segment_rhs(seg)?;
            Some(Parts { phi: Some(phi.clone()), x: Some(x), g: Some(g), h: Some(h), ..base.clone() })
        })()),
        C1 | CT => push((|| {
            let (a, c) = imp(f)?;
            let (x, a) = all(a)?;
            let (y, phi) = ex(a)?;
            let (w, _) = ex(c)?;
            let mut p = Parts { phi: Some(phi.clone()), x: Some(x), y: Some(y), ..base.clone() };
            if family == C1 {
                p.f = Some(w);
            } else {
                p.z = Some(w);
            }
            Some(p)
        })()),
        C2 => push((|| {
            let (a, c) = imp(f)?;
            let (x, a) = all(a)?;
            let (g, a) = ex(a)?;
            let (phi, _) = and(a)?;
            let (fv, _) = ex(c)?;
            Some(Parts { phi: Some(phi.clone()), x: Some(x), g: Some(g), f: Some(fv), ..base.clone() })
        })()),
        KS => push((|| {
            let (g, body) = ex(f)?;
            let (l, _) = and(body)?;
            let (phi, e) = imp(l)?;
            let (x, _) = ex(e)?;
            Some(Parts { phi: Some(phi.clone()), g: Some(g), x: Some(x), ..base.clone() })
        })()),
        WC => push((|| {
            let (a, c) = imp(f)?;
            let (fv, a) = all(a)?;
            let (x, phi) = ex(a)?;
            let (_, c) = all(c)?;
            let (_, c) = ex(c)?;
            let (y, c) = ex(c)?;
            let (g, _) = all(c)?;
            Some(Parts { phi: Some(phi.clone()), f: Some(fv), g: Some(g), x: Some(x), y: Some(y), ..base.clone() })
        })()),
        BI => push((|| {
            let (a, _) = imp(f)?;
            let (a, a4) = and(a)?;
            let (a, _) = and(a)?;
            let (a1, _) = and(a)?;
            let (fv, a1) = all(a1)?;
            let (x, _) = ex(a1)?;
            let (y, a4) = all(a4)?;
            let (phi, psi) = imp(a4)?;
            Some(Parts {
                phi: Some(phi.clone()),
                psi: Some(psi.clone()),
                f: Some(fv),
                x: Some(x),
                y: Some(y),
                ..base.clone()
            })
        })()),
        MP => push((|| {
            let (_, c) = imp(f)?;
            let (x, phi) = ex(c)?;
            Some(Parts { phi: Some(phi.clone()), x: Some(x), ..base.clone() })
        })()),
        Compr => push((|| {
            let (x, body) = ex(f)?;
            let (z, body) = all(body)?;
            let (l, _) = and(body)?;
            let (_, phi) = imp(l)?;
            Some(Parts { phi: Some(phi.clone()), f: Some(x), z: Some(z), n: Some(z.level), ..base.clone() })
        })()),
        Ext => push((|| {
            let (a, _) = imp(f)?;
            let (z, body) = all(a)?;
            let (l, _) = and(body)?;
            match imp(l)? {
                (Formula::Mem(_, _, x), Formula::Mem(_, _, y)) => Some(Parts {
                    x: as_var(x),
                    y: as_var(y),
                    z: Some(z),
                    n: Some(z.level),
                    ..base.clone()
                }),
                _ => None,
            }
        })()),
        Equality => {
            if let Formula::Eq(_, x, _) = f {
                push(Some(Parts { x: as_var(x), ..base.clone() }));
            }
            push((|| {
                let (e, c) = imp(f)?;
                let (a, q) = imp(c)?;
                match e {
                    Formula::Eq(_, x, y) => Some(Parts {
                        x: as_var(x),
                        y: as_var(y),
                        phi: Some(a.clone()),
                        psi: Some(q.clone()),
                        variant: 1,
                        ..base.clone()
                    }),
                    _ => None,
                }
            })());
        }
    }
    out
}

/// Recognises `f`, up to renaming of bound variables, as an instance of
/// `family` whose leading universal quantifiers close exactly its parameters.
pub fn match_schema(family: Family, f: &Formula) -> Option<AxiomId> {
    let (vars, _) = strip_universals(f);
    let mut body = f;
    for k in 0..=vars.len() {
        if k > 0 {
            let Formula::Forall(_, b) = body else { unreachable!() };
            body = b;
        }
        let bound: BTreeSet<Var> = vars[..k].iter().copied().collect();
        if bound.len() != k || free_vars(body) != bound {
            continue;
        }
        for parts in candidates(family, body) {
            if let Ok((inst, conditions)) = instance_open(family, &parts) {
                if alpha_eq(&inst, body) {
                    return Some(AxiomId { family, parts, conditions });
                }
            }
        }
    }
    None
}

/// The axiom of `th` that the closed formula `phi` instantiates, if any.
pub fn is_axiom(th: &Theory, phi: &Formula) -> Result<Option<AxiomId>, CalcError> {
    check_formula(phi, th.language(), th.s)?;
    if !free_vars(phi).is_empty() {
        return Ok(None);
    }
    Ok(Family::ALL
        .iter()
        .filter(|fam| th.admits(**fam))
        .find_map(|fam| match_schema(*fam, phi)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::TheoryId;
    use crate::syntax::{parse_formula, Language};

    fn lp(t: &str) -> Formula {
        parse_formula(t, Language::SLP, 2).unwrap()
    }

    fn ti(t: &str) -> Formula {
        parse_formula(t, Language::TI, 2).unwrap()
    }

    fn th(id: TheoryId, s: u32) -> Theory {
        Theory::new(id, s)
    }

    #[test]
    fn non_instance_is_rejected() {
        let f = parse_formula("all x1. (x1 =0 0 | ~x1 =0 0)", Language::TI, 1).unwrap();
        assert_eq!(is_axiom(&th(TheoryId::TI, 1), &f).unwrap(), None);
    }

    #[test]
    fn cs1_closure_is_recognised() {
        let f = lp("all x1. (proves(x1, 0 =0 0) | ~proves(x1, 0 =0 0))");
        let id = is_axiom(&th(TheoryId::LP, 1), &f).unwrap().unwrap();
        assert_eq!(id.family, Family::CS1);
        assert_eq!(is_axiom(&th(TheoryId::L, 1), &f).ok().flatten(), None);
    }

    #[test]
    fn comprehension_example() {
        let f = ti("ex X1_1. all x1. (x1 in0 X1_1 <-> x1 =0 0)");
        let id = is_axiom(&th(TheoryId::TI, 1), &f).unwrap().unwrap();
        assert_eq!(id.family, Family::Compr);
        assert_eq!(id.parts.n, Some(0));
        assert!(id.conditions.iter().any(|c| c.contains("sort(phi) = 0 <= 1")));
    }

    #[test]
    fn l1_closure() {
        let f = lp("all x1. ~S(x1) =0 0");
        let id = is_axiom(&th(TheoryId::L, 1), &f).unwrap().unwrap();
        assert_eq!(id.family, Family::L1);
    }

    #[test]
    fn kripke_schema_shape() {
        let p = Parts {
            phi: Some(lp("0 =0 0")),
            g: Some(Var::functional(1, 1)),
            x: Some(Var::num(1)),
            ..Default::default()
        };
        let f = instantiate_schema(Family::KS, &p).unwrap();
        assert!(alpha_eq(&f, &lp("ex F1_1. (0 =0 0 <-> ex x1. ~F1_1(x1) =0 0)")));
        assert!(match_schema(Family::KS, &f).is_some());
        let mut bad = p.clone();
        bad.phi = Some(lp("F1_1(0) =0 0"));
        assert!(matches!(instantiate_schema(Family::KS, &bad), Err(CalcError::SideCondition(_))));
    }

    #[test]
    fn choice_sort_bound() {
        let p = Parts {
            phi: Some(lp("F2_1(x1) =1 K1 & x2 =0 x1")),
            x: Some(Var::num(1)),
            y: Some(Var::num(2)),
            f: Some(Var::functional(1, 3)),
            ..Default::default()
        };
        match instantiate_schema(Family::C1, &p) {
            Err(CalcError::SideCondition(m)) => assert!(m.contains("max(sort(phi), 1)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comprehension_parameter_occurrence() {
        let p = Parts {
            phi: Some(ti("x1 in0 X1_1")),
            f: Some(Var::set(1, 1)),
            z: Some(Var::num(1)),
            n: Some(0),
            ..Default::default()
        };
        match instantiate_schema(Family::Compr, &p) {
            Err(CalcError::SideCondition(m)) => assert!(m.contains("X1_1 is a parameter")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn open_data_lawless_restriction() {
        let mut p = Parts {
            phi: Some(lp("LF1_1(0) =0 A1_1(0)")),
            h: Some(Var::lawless(1, 1)),
            g: Some(Var::lawless(1, 2)),
            x: Some(Var::num(1)),
            ..Default::default()
        };
        let f = instantiate_schema(Family::LL3, &p).unwrap();
        let id = is_axiom(&th(TheoryId::SLP, 1), &f).unwrap().unwrap();
        assert_eq!(id.family, Family::LL3);
        p.phi = Some(lp("LF1_1(0) =0 F1_1(0)"));
        assert!(instantiate_schema(Family::LL3, &p).is_err());
    }
}
