use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{is_axiom, AxiomId, CalcError, Family, Theory};
use crate::syntax::{
    alpha_eq, check_expr, check_formula, closure, free_vars, free_vars_expr, subst, Expr, Formula,
    Var, VarKind,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(context: Vec<Formula>, conclusion: Formula) -> Sequent {
        Sequent { context, conclusion }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rule {
    Assume,
    Weaken,
    AndI,
    AndE1,
    AndE2,
    OrI1,
    OrI2,
    OrE,
    ImpI,
    ImpE,
    FalsumE,
    /// Universal introduction with the eigenvariable.
    AllI(Var),
    /// Universal elimination with the instantiating expression.
    AllE(Expr),
    ExI(Expr),
    /// Existential elimination with the eigenvariable.
    ExE(Var),
    Refl,
    /// From `s = t` and `phi[x := s]` infer `phi[x := t]`.
    EqSubst(Var, Formula),
    /// Double-negation elimination; classical theories only.
    Dne,
    /// An axiom of the theory, optionally naming its family.
    Axiom(Option<Family>),
}

impl Rule {
    pub fn arity(&self) -> usize {
        match self {
            Rule::Assume | Rule::Refl | Rule::Axiom(_) => 0,
            Rule::AndI | Rule::ImpE | Rule::ExE(_) | Rule::EqSubst(..) => 2,
            Rule::OrE => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTree {
    pub id: String,
    pub rule: Rule,
    pub premises: Vec<ProofTree>,
    pub sequent: Sequent,
}

impl ProofTree {
    pub fn new(id: impl Into<String>, rule: Rule, premises: Vec<ProofTree>, sequent: Sequent) -> ProofTree {
        ProofTree { id: id.into(), rule, premises, sequent }
    }

    pub fn conclusion(&self) -> &Formula {
        &self.sequent.conclusion
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(|p| p.size()).sum::<usize>()
    }
}

/// A successfully checked proof.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checked {
    pub theory: Theory,
    pub sequent: Sequent,
    pub axioms: Vec<AxiomId>,
    pub classical: bool,
}

struct Checker<'a> {
    th: &'a Theory,
    axioms: Vec<AxiomId>,
    classical: bool,
}

fn member(f: &Formula, ctx: &[Formula]) -> bool {
    ctx.iter().any(|g| alpha_eq(f, g))
}

fn ctx_vars(ctx: &[Formula]) -> BTreeSet<Var> {
    ctx.iter().flat_map(free_vars).collect()
}

/// Whether `t` may replace a variable `x` bound by a quantifier.
fn fits(x: &Var, t: &Expr) -> bool {
    if t.level() != x.level {
        return false;
    }
    match x.kind {
        VarKind::Number | VarKind::Functional => true,
        VarKind::Lawlike => free_vars_expr(t)
            .iter()
            .all(|v| matches!(v.kind, VarKind::Number | VarKind::Lawlike | VarKind::Set)),
        VarKind::Lawless => matches!(t, Expr::Var(v) if v.kind == VarKind::Lawless),
        VarKind::Set => matches!(t, Expr::Var(v) if v.kind == VarKind::Set),
    }
}

impl Checker<'_> {
    fn fail(&self, node: &ProofTree, reason: impl Into<String>) -> CalcError {
        CalcError::Rule { node: node.id.clone(), reason: reason.into() }
    }

    fn expect(&self, node: &ProofTree, ok: bool, reason: impl FnOnce() -> String) -> Result<(), CalcError> {
        if ok {
            Ok(())
        } else {
            Err(self.fail(node, reason()))
        }
    }

    /// Every premise context lies within the conclusion context, extended by
    /// the formulas the rule discharges for that premise.
    fn contexts(&self, node: &ProofTree, discharged: &[Option<&Formula>]) -> Result<(), CalcError> {
        for (i, p) in node.premises.iter().enumerate() {
            let extra = discharged.get(i).copied().flatten();
            for a in &p.sequent.context {
                let ok = member(a, &node.sequent.context) || extra.is_some_and(|d| alpha_eq(a, d));
                self.expect(node, ok, || {
                    format!("assumption {a} of premise {} is not available here", p.id)
                })?;
            }
        }
        Ok(())
    }

    fn check(&mut self, node: &ProofTree) -> Result<(), CalcError> {
        for p in &node.premises {
            self.check(p)?;
        }
        let lang = self.th.language();
        for f in node.sequent.context.iter().chain([&node.sequent.conclusion]) {
            check_formula(f, lang, self.th.s)?;
        }
        let arity = node.rule.arity();
        self.expect(node, node.premises.len() == arity, || {
            format!("rule expects {arity} premises, found {}", node.premises.len())
        })?;
        let c = &node.sequent.conclusion;
        let prem = |i: usize| &node.premises[i].sequent.conclusion;
        match &node.rule {
            Rule::Assume => {
                self.expect(node, member(c, &node.sequent.context), || {
                    format!("{c} is not among the assumptions")
                })?;
            }
            Rule::Weaken => {
                self.expect(node, alpha_eq(prem(0), c), || "weakening changes the conclusion".into())?;
            }
            Rule::AndI => {
                let ok = matches!(c, Formula::And(a, b) if alpha_eq(a, prem(0)) && alpha_eq(b, prem(1)));
                self.expect(node, ok, || format!("{c} is not the conjunction of the premises"))?;
            }
            Rule::AndE1 | Rule::AndE2 => {
                let ok = match prem(0) {
                    Formula::And(a, b) => {
                        alpha_eq(if node.rule == Rule::AndE1 { a } else { b }, c)
                    }
                    _ => false,
                };
                self.expect(node, ok, || format!("{c} is not a conjunct of {}", prem(0)))?;
            }
            Rule::OrI1 | Rule::OrI2 => {
                let ok = match c {
                    Formula::Or(a, b) => {
                        alpha_eq(if node.rule == Rule::OrI1 { a } else { b }, prem(0))
                    }
                    _ => false,
                };
                self.expect(node, ok, || format!("{c} is not a disjunction with {}", prem(0)))?;
            }
            Rule::OrE => {
                let Formula::Or(a, b) = prem(0) else {
                    return Err(self.fail(node, format!("{} is not a disjunction", prem(0))));
                };
                let ok = alpha_eq(prem(1), c) && alpha_eq(prem(2), c);
                self.expect(node, ok, || "case branches must prove the conclusion".into())?;
                return self.contexts(node, &[None, Some(a), Some(b)]).map(|_| ());
            }
            Rule::ImpI => {
                let Formula::Implies(a, b) = c else {
                    return Err(self.fail(node, format!("{c} is not an implication")));
                };
                self.expect(node, alpha_eq(b, prem(0)), || {
                    format!("premise {} is not the consequent of {c}", prem(0))
                })?;
                return self.contexts(node, &[Some(a)]);
            }
            Rule::ImpE => {
                let ok = matches!(prem(0), Formula::Implies(a, b) if alpha_eq(a, prem(1)) && alpha_eq(b, c));
                self.expect(node, ok, || format!("{} does not detach to {c}", prem(0)))?;
            }
            Rule::FalsumE => {
                self.expect(node, *prem(0) == Formula::Falsum, || "premise is not falsum".into())?;
            }
            Rule::AllI(y) => {
                let Formula::Forall(x, body) = c else {
                    return Err(self.fail(node, format!("{c} is not universal")));
                };
                self.expect(node, y.level == x.level && y.kind == x.kind, || {
                    format!("eigenvariable {y} does not match {x}")
                })?;
                self.expect(node, alpha_eq(&subst(body, x, &Expr::Var(*y)), prem(0)), || {
                    format!("premise is not the instance of {c} at {y}")
                })?;
                let fresh = !ctx_vars(&node.premises[0].sequent.context).contains(y)
                    && !free_vars(c).contains(y);
                if !fresh {
                    return Err(CalcError::Eigenvariable { node: node.id.clone(), var: *y });
                }
            }
            Rule::AllE(t) => {
                let Formula::Forall(x, body) = prem(0) else {
                    return Err(self.fail(node, format!("{} is not universal", prem(0))));
                };
                check_expr(t, lang, self.th.s)?;
                self.expect(node, fits(x, t), || format!("{t} cannot instantiate {x}"))?;
                self.expect(node, alpha_eq(&subst(body, x, t), c), || {
                    format!("{c} is not the instance of {} at {t}", prem(0))
                })?;
            }
            Rule::ExI(t) => {
                let Formula::Exists(x, body) = c else {
                    return Err(self.fail(node, format!("{c} is not existential")));
                };
                check_expr(t, lang, self.th.s)?;
                self.expect(node, fits(x, t), || format!("{t} cannot witness {x}"))?;
                self.expect(node, alpha_eq(&subst(body, x, t), prem(0)), || {
                    format!("premise is not the instance of {c} at {t}")
                })?;
            }
            Rule::ExE(y) => {
                let ex = prem(0);
                let Formula::Exists(x, body) = ex else {
                    return Err(self.fail(node, format!("{ex} is not existential")));
                };
                self.expect(node, y.level == x.level && y.kind == x.kind, || {
                    format!("eigenvariable {y} does not match {x}")
                })?;
                self.expect(node, alpha_eq(prem(1), c), || "branch must prove the conclusion".into())?;
                let inst = subst(body, x, &Expr::Var(*y));
                let others: Vec<Formula> = node.premises[1]
                    .sequent
                    .context
                    .iter()
                    .filter(|f| !alpha_eq(f, &inst))
                    .cloned()
                    .collect();
                let fresh = !ctx_vars(&others).contains(y)
                    && !free_vars(c).contains(y)
                    && !free_vars(ex).contains(y);
                if !fresh {
                    return Err(CalcError::Eigenvariable { node: node.id.clone(), var: *y });
                }
                return self.contexts(node, &[None, Some(&inst)]);
            }
            Rule::Refl => {
                let ok = matches!(c, Formula::Eq(_, a, b) if a == b);
                self.expect(node, ok, || format!("{c} is not an identity"))?;
            }
            Rule::EqSubst(x, phi) => {
                let Formula::Eq(l, s, t) = prem(0) else {
                    return Err(self.fail(node, format!("{} is not an equation", prem(0))));
                };
                self.expect(node, *l == x.level, || format!("{x} has the wrong level"))?;
                check_formula(phi, lang, self.th.s)?;
                let ok = alpha_eq(&subst(phi, x, s), prem(1)) && alpha_eq(&subst(phi, x, t), c);
                self.expect(node, ok, || format!("{c} does not follow by replacing {s} with {t}"))?;
            }
            Rule::Dne => {
                if !self.th.is_classical() {
                    return Err(self.fail(
                        node,
                        format!("double-negation elimination is classical; {} is intuitionistic", self.th.id),
                    ));
                }
                self.classical = true;
                let ok = prem(0).negated().and_then(|f| f.negated()).is_some_and(|f| alpha_eq(f, c));
                self.expect(node, ok, || format!("{} is not the double negation of {c}", prem(0)))?;
            }
            Rule::Axiom(family) => {
                let id = is_axiom(self.th, &closure(c))?.ok_or_else(|| CalcError::Axiom {
                    node: node.id.clone(),
                    reason: format!("{c} is not an axiom of {}_{}", self.th.id, self.th.s),
                })?;
                if let Some(fam) = family {
                    if *fam != id.family {
                        return Err(CalcError::Axiom {
                            node: node.id.clone(),
                            reason: format!("cited {fam}, but the formula instantiates {}", id.family),
                        });
                    }
                }
                self.axioms.push(id);
            }
        }
        self.contexts(node, &[])
    }
}

/// Checks every node of `p` against the rules and axioms of `th`. Classical
/// rules are admitted only in classical theories.
pub fn check_proof(th: &Theory, p: &ProofTree) -> Result<Checked, CalcError> {
    let mut c = Checker { th, axioms: Vec::new(), classical: false };
    c.check(p)?;
    Ok(Checked { theory: *th, sequent: p.sequent.clone(), axioms: c.axioms, classical: c.classical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::TheoryId;
    use crate::syntax::{parse_formula, Language};

    fn f(t: &str) -> Formula {
        parse_formula(t, Language::SLP, 1).unwrap()
    }

    fn leaf(id: &str, rule: Rule, ctx: &[&str], c: &str) -> ProofTree {
        ProofTree::new(id, rule, vec![], Sequent::new(ctx.iter().map(|t| f(t)).collect(), f(c)))
    }

    fn node(id: &str, rule: Rule, prem: Vec<ProofTree>, ctx: &[&str], c: &str) -> ProofTree {
        ProofTree::new(id, rule, prem, Sequent::new(ctx.iter().map(|t| f(t)).collect(), f(c)))
    }

    const L1: Theory = Theory { id: TheoryId::L, s: 1 };

    #[test]
    fn axiom_leaf() {
        let p = leaf("a", Rule::Axiom(Some(Family::L1)), &[], "all x1. ~S(x1) =0 0");
        let ok = check_proof(&L1, &p).unwrap();
        assert_eq!(ok.axioms[0].family, Family::L1);
    }

    #[test]
    fn disjunction_then_weakening() {
        let r = leaf("r", Rule::Refl, &[], "0 =0 0");
        let o = node("o", Rule::OrI1, vec![r], &[], "0 =0 0 | _|_");
        let w = node("w", Rule::Weaken, vec![o], &["p"], "0 =0 0 | _|_");
        assert!(check_proof(&L1, &w).is_ok());
    }

    #[test]
    fn classical_rule_in_intuitionistic_theory() {
        let a = leaf("a", Rule::Assume, &["~~p"], "~~p");
        let d = node("d", Rule::Dne, vec![a], &["~~p"], "p");
        assert!(matches!(check_proof(&L1, &d), Err(CalcError::Rule { .. })));
        let ti = Theory::new(TheoryId::TI, 1);
        let a = ProofTree::new("a", Rule::Assume, vec![], Sequent::new(vec![parse_formula("~~0 =0 0", Language::TI, 1).unwrap()], parse_formula("~~0 =0 0", Language::TI, 1).unwrap()));
        let d = ProofTree::new("d", Rule::Dne, vec![a.clone()], Sequent::new(a.sequent.context.clone(), parse_formula("0 =0 0", Language::TI, 1).unwrap()));
        assert!(check_proof(&ti, &d).unwrap().classical);
    }

    #[test]
    fn eigenvariable_capture_is_rejected() {
        let a = leaf("a", Rule::Assume, &["x1 =0 0"], "x1 =0 0");
        let g = node("g", Rule::AllI(Var::num(1)), vec![a], &["x1 =0 0"], "all x2. x2 =0 0");
        assert!(matches!(check_proof(&L1, &g), Err(CalcError::Eigenvariable { .. })));
    }

    #[test]
    fn implication_discharge() {
        let a = leaf("a", Rule::Assume, &["p"], "p");
        let i = node("i", Rule::ImpI, vec![a], &[], "p -> p");
        assert!(check_proof(&L1, &i).is_ok());
        let a = leaf("a", Rule::Assume, &["q"], "q");
        let i = node("i", Rule::ImpI, vec![a], &[], "p -> q");
        assert!(check_proof(&L1, &i).is_err());
    }

    #[test]
    fn existential_elimination() {
        // ex x1. x1 = 0 |- ex x2. x2 = 0
        let e = leaf("e", Rule::Assume, &["ex x1. x1 =0 0"], "ex x1. x1 =0 0");
        let a = leaf("a", Rule::Assume, &["x3 =0 0"], "x3 =0 0");
        let i = node("i", Rule::ExI(Expr::Var(Var::num(3))), vec![a], &["x3 =0 0"], "ex x2. x2 =0 0");
        let x = node("x", Rule::ExE(Var::num(3)), vec![e, i], &["ex x1. x1 =0 0"], "ex x2. x2 =0 0");
        assert!(check_proof(&L1, &x).is_ok());
    }

    #[test]
    fn l_proofs_check_in_extensions() {
        let p = leaf("a", Rule::Axiom(None), &[], "all x1. x1 + 0 =0 x1");
        for id in [TheoryId::L, TheoryId::LP, TheoryId::SLP] {
            assert!(check_proof(&Theory::new(id, 1), &p).is_ok());
        }
    }
}
