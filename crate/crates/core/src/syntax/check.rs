use super::{Expr, Formula, Language, SyntaxError, Var, VarKind, UNKNOWN_LEVEL};

fn sort(msg: String) -> SyntaxError {
    SyntaxError::Sort(msg)
}

fn lang_err(msg: String) -> SyntaxError {
    SyntaxError::Language(msg)
}

fn check_var(v: &Var, lang: Language, s: u32) -> Result<(), SyntaxError> {
    if v.level > s {
        return Err(sort(format!("{v} has level {} > s = {s}", v.level)));
    }
    match v.kind {
        VarKind::Number if v.level != 0 => Err(sort(format!("numeric variable {v} at level {}", v.level))),
        VarKind::Functional | VarKind::Lawlike | VarKind::Lawless => {
            if v.level == 0 {
                Err(sort(format!("{v}: functional variables need level >= 1")))
            } else if lang.is_ti() {
                Err(lang_err(format!("functional variable {v} in TI")))
            } else {
                Ok(())
            }
        }
        VarKind::Set if !lang.is_ti() => Err(lang_err(format!("set variable {v} outside TI"))),
        _ => Ok(()),
    }
}

fn need_level(e: &Expr, level: u32, what: &str) -> Result<(), SyntaxError> {
    if e.level() == level {
        Ok(())
    } else {
        Err(sort(format!(
            "{what} expects level {level}, but {e} has level {}",
            e.level()
        )))
    }
}

/// Checks sorts, level bounds and language membership of an expression.
pub fn check_expr(e: &Expr, lang: Language, s: u32) -> Result<(), SyntaxError> {
    let ti_forbidden = |what: &str| {
        if lang.is_ti() {
            Err(lang_err(format!("{what} is not part of TI")))
        } else {
            Ok(())
        }
    };
    match e {
        Expr::Zero => Ok(()),
        Expr::K(l) => {
            ti_forbidden("K")?;
            if *l == 0 || *l > s {
                return Err(sort(format!("K{l} outside levels 1..{s}")));
            }
            Ok(())
        }
        Expr::Var(v) => check_var(v, lang, s),
        Expr::Sym(name, l) => {
            ti_forbidden("a named symbol")?;
            if *l == UNKNOWN_LEVEL || *l > s {
                return Err(sort(format!("symbol '{name}' has no admissible level")));
            }
            Ok(())
        }
        Expr::Succ(a) => {
            need_level(a, 0, "S")?;
            check_expr(a, lang, s)
        }
        Expr::Plus(a, b) | Expr::Times(a, b) => {
            need_level(a, 0, "arithmetic")?;
            need_level(b, 0, "arithmetic")?;
            check_expr(a, lang, s)?;
            check_expr(b, lang, s)
        }
        Expr::N(l, a) => {
            ti_forbidden("N")?;
            if *l == 0 || *l > s {
                return Err(sort(format!("N{l} outside levels 1..{s}")));
            }
            need_level(a, *l, &format!("N{l}"))?;
            check_expr(a, lang, s)
        }
        Expr::Ap(l, f, t) => {
            ti_forbidden("Ap")?;
            if *l == 0 || *l > s {
                return Err(sort(format!("Ap{l} outside levels 1..{s}")));
            }
            need_level(f, *l, &format!("Ap{l}"))?;
            need_level(t, 0, &format!("argument of Ap{l}"))?;
            check_expr(f, lang, s)?;
            check_expr(t, lang, s)
        }
        Expr::Seg(f, t) => {
            ti_forbidden("seg")?;
            need_level(f, 1, "seg")?;
            need_level(t, 0, "seg")?;
            check_expr(f, lang, s)?;
            check_expr(t, lang, s)
        }
        Expr::Snoc(a, b) => {
            ti_forbidden("snoc")?;
            need_level(a, 0, "snoc")?;
            need_level(b, 0, "snoc")?;
            check_expr(a, lang, s)?;
            check_expr(b, lang, s)
        }
    }
}

/// Checks sorts, level bounds and language membership of a formula.
pub fn check_formula(f: &Formula, lang: Language, s: u32) -> Result<(), SyntaxError> {
    match f {
        Formula::Falsum => Ok(()),
        Formula::Prop(p) => {
            if lang.is_ti() {
                Err(lang_err(format!("propositional atom {p} in TI")))
            } else {
                Ok(())
            }
        }
        Formula::Eq(l, a, b) => {
            if *l > s {
                return Err(sort(format!("={l} above s = {s}")));
            }
            need_level(a, *l, &format!("={l}"))?;
            need_level(b, *l, &format!("={l}"))?;
            check_expr(a, lang, s)?;
            check_expr(b, lang, s)
        }
        Formula::Mem(l, a, b) => {
            if !lang.is_ti() {
                return Err(lang_err("membership outside TI".into()));
            }
            if l + 1 > s {
                return Err(sort(format!("in{l} needs level {} > s = {s}", l + 1)));
            }
            need_level(a, *l, &format!("in{l}"))?;
            need_level(b, l + 1, &format!("in{l}"))?;
            check_expr(a, lang, s)?;
            check_expr(b, lang, s)
        }
        Formula::Proves(t, inner) => {
            if !lang.allows_proves() {
                return Err(lang_err(format!("proves outside LP/SLP ({lang:?})")));
            }
            if inner.contains_proves() {
                return Err(lang_err("proves nested inside proves".into()));
            }
            need_level(t, 0, "proves")?;
            check_expr(t, lang, s)?;
            check_formula(inner, Language::L, s)
        }
        Formula::Kleene(e, x, y) => {
            if lang.is_ti() {
                return Err(lang_err("Kleene application in TI".into()));
            }
            for t in [e, x, y] {
                need_level(t, 0, "kleene")?;
                check_expr(t, lang, s)?;
            }
            Ok(())
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            check_formula(a, lang, s)?;
            check_formula(b, lang, s)
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            check_var(v, lang, s)?;
            check_formula(b, lang, s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_variables_only_in_ti() {
        let x = Expr::Var(Var::set(1, 1));
        assert!(check_expr(&x, Language::TI, 1).is_ok());
        assert!(matches!(check_expr(&x, Language::L, 1), Err(SyntaxError::Language(_))));
    }

    #[test]
    fn membership_levels() {
        let ok = Formula::mem(0, Expr::Var(Var::num(1)), Expr::Var(Var::set(1, 1)));
        assert!(check_formula(&ok, Language::TI, 1).is_ok());
        let bad = Formula::mem(0, Expr::Var(Var::num(1)), Expr::Var(Var::set(2, 1)));
        assert!(matches!(check_formula(&bad, Language::TI, 2), Err(SyntaxError::Sort(_))));
    }
}
