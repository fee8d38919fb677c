//! Seeded generators of test material: Beth frames, natural-deduction proofs,
//! closed TI formulas, arithmetic terms, syntax trees and schema instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::beth::{graphs, upsets, BethFrame};
use crate::calculus::{instantiate_schema, instantiate_unchecked, Family, Parts, ProofTree, Rule, Sequent};
use crate::syntax::{alpha_eq, all_vars, free_vars, subst, Expr, Formula, Var};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A frame with `1..=max_states` states, a monotone valuation of `props` and
/// numbers `0..c` for `c` in `1..=max_carrier`.
pub fn random_frame(rng: &mut impl Rng, props: &[&str], max_states: usize, max_carrier: u32) -> BethFrame {
    let n = rng.gen_range(1..=max_states);
    let succ = graphs(n).choose(rng).cloned().expect("graphs are nonempty");
    let ups = upsets(&succ);
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut frame = BethFrame::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    frame.succ = succ;
    frame.numbers = rng.gen_range(1..=max_carrier);
    for p in props {
        let up = ups.choose(rng).expect("upsets are nonempty");
        for (s, &holds) in up.iter().enumerate() {
            if holds {
                frame.props[s].insert(p.to_string());
            }
        }
    }
    frame
}

fn numeral(k: u64) -> Expr {
    Expr::numeral(k)
}

/// A level-0 term over `vars` of the given depth.
pub fn random_term(rng: &mut impl Rng, vars: &[Var], depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match vars.choose(rng) {
            Some(v) if rng.gen_bool(0.7) => Expr::Var(*v),
            _ => numeral(rng.gen_range(0..3)),
        };
    }
    match rng.gen_range(0..3) {
        0 => Expr::succ(random_term(rng, vars, depth - 1)),
        1 => Expr::plus(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)),
        _ => Expr::times(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)),
    }
}

/// `n` arithmetic terms over `x1..x3` of depth at most 4.
pub fn arith_terms(seed: u64, n: usize) -> Vec<Expr> {
    let mut r = rng(seed);
    let vars = [Var::num(1), Var::num(2), Var::num(3)];
    (0..n)
        .map(|_| {
            let depth = r.gen_range(0..=4);
            random_term(&mut r, &vars, depth)
        })
        .collect()
}

const PROOF_VARS: [u32; 3] = [1, 2, 3];

fn l_atom(rng: &mut impl Rng) -> Formula {
    match rng.gen_range(0..5) {
        0 => Formula::prop("p"),
        1 => Formula::prop("q"),
        2 => Formula::prop("r"),
        _ => {
            let vars: Vec<Var> = PROOF_VARS.iter().map(|&i| Var::num(i)).collect();
            Formula::eq(0, random_term(rng, &vars, 1), random_term(rng, &vars, 1))
        }
    }
}

/// A formula of L over the atoms `p, q, r` and level-0 equations.
pub fn random_l_formula(rng: &mut impl Rng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.35) {
        return if rng.gen_bool(0.05) { Formula::Falsum } else { l_atom(rng) };
    }
    let d = depth - 1;
    let x = Var::num(*PROOF_VARS.choose(rng).unwrap());
    match rng.gen_range(0..7) {
        0 => Formula::and(random_l_formula(rng, d), random_l_formula(rng, d)),
        1 => Formula::or(random_l_formula(rng, d), random_l_formula(rng, d)),
        2 => Formula::imp(random_l_formula(rng, d), random_l_formula(rng, d)),
        3 => Formula::not(random_l_formula(rng, d)),
        4 => Formula::forall(x, random_l_formula(rng, d)),
        5 => Formula::exists(x, random_l_formula(rng, d)),
        _ => l_atom(rng),
    }
}

fn union(a: &[Formula], b: &[Formula]) -> Vec<Formula> {
    let mut out = a.to_vec();
    for f in b {
        if !out.iter().any(|g| alpha_eq(f, g)) {
            out.push(f.clone());
        }
    }
    out
}

fn without(ctx: &[Formula], f: &Formula) -> Vec<Formula> {
    ctx.iter().filter(|g| !alpha_eq(f, g)).cloned().collect()
}

fn ctx_free(ctx: &[Formula]) -> BTreeSet<Var> {
    ctx.iter().flat_map(free_vars).collect()
}

fn above(vars: impl IntoIterator<Item = Var>) -> Var {
    Var::num(vars.into_iter().map(|v| v.index + 1).max().unwrap_or(1).max(10))
}

/// Builds intuitionistic natural-deduction proofs forward from assumptions.
struct ProofGen<'r, R: Rng> {
    rng: &'r mut R,
    next: usize,
    pool: Vec<ProofTree>,
}

const MAX_FORMULA: usize = 40;

impl<R: Rng> ProofGen<'_, R> {
    fn node(&mut self, rule: Rule, premises: Vec<ProofTree>, ctx: Vec<Formula>, c: Formula) -> ProofTree {
        self.next += 1;
        ProofTree::new(format!("n{}", self.next), rule, premises, Sequent::new(ctx, c))
    }

    fn assume(&mut self, a: Formula, extra: &[Formula]) -> ProofTree {
        let ctx = union(&[a.clone()], extra);
        self.node(Rule::Assume, vec![], ctx, a)
    }

    fn pick(&mut self) -> ProofTree {
        self.pool.choose(self.rng).cloned().expect("pool is nonempty")
    }

    fn pick_where(&mut self, f: impl Fn(&ProofTree) -> bool) -> Option<ProofTree> {
        let found: Vec<&ProofTree> = self.pool.iter().filter(|p| f(p)).collect();
        found.choose(self.rng).map(|p| (*p).clone())
    }

    fn discharge_choice(&mut self, ctx: &[Formula]) -> Formula {
        match ctx.choose(self.rng) {
            Some(a) if self.rng.gen_bool(0.8) => a.clone(),
            _ => random_l_formula(self.rng, 1),
        }
    }

    fn step(&mut self) -> Option<ProofTree> {
        let r = &mut *self.rng;
        Some(match r.gen_range(0..15) {
            0 => {
                let a = random_l_formula(r, 2);
                let extra = if r.gen_bool(0.3) { vec![random_l_formula(r, 1)] } else { vec![] };
                self.assume(a, &extra)
            }
            1 => {
                let (p, q) = (self.pick(), self.pick());
                let c = Formula::and(p.conclusion().clone(), q.conclusion().clone());
                let ctx = union(&p.sequent.context, &q.sequent.context);
                self.node(Rule::AndI, vec![p, q], ctx, c)
            }
            2 => {
                let p = self.pick_where(|p| matches!(p.conclusion(), Formula::And(..)))?;
                let Formula::And(a, b) = p.conclusion().clone() else { unreachable!() };
                let (rule, c) = if self.rng.gen_bool(0.5) { (Rule::AndE1, *a) } else { (Rule::AndE2, *b) };
                let ctx = p.sequent.context.clone();
                self.node(rule, vec![p], ctx, c)
            }
            3 => {
                let p = self.pick();
                let other = random_l_formula(self.rng, 1);
                let (rule, c) = if self.rng.gen_bool(0.5) {
                    (Rule::OrI1, Formula::or(p.conclusion().clone(), other))
                } else {
                    (Rule::OrI2, Formula::or(other, p.conclusion().clone()))
                };
                let ctx = p.sequent.context.clone();
                self.node(rule, vec![p], ctx, c)
            }
            4 => {
                let p1 = self.pick();
                let c = p1.conclusion().clone();
                let p2 = self.pick_where(|q| alpha_eq(q.conclusion(), &c)).unwrap_or_else(|| p1.clone());
                let a = self.discharge_choice(&p1.sequent.context);
                let b = self.discharge_choice(&p2.sequent.context);
                let major = self.assume(Formula::or(a.clone(), b.clone()), &[]);
                let ctx = union(
                    &union(&without(&p1.sequent.context, &a), &without(&p2.sequent.context, &b)),
                    &major.sequent.context,
                );
                self.node(Rule::OrE, vec![major, p1, p2], ctx, c)
            }
            5 | 6 => {
                let p = self.pick();
                let a = self.discharge_choice(&p.sequent.context);
                let c = Formula::imp(a.clone(), p.conclusion().clone());
                let ctx = without(&p.sequent.context, &a);
                self.node(Rule::ImpI, vec![p], ctx, c)
            }
            7 => {
                let p = self.pick();
                let imp = self.pick_where(|q| {
                    matches!(q.conclusion(), Formula::Implies(a, _) if alpha_eq(a, p.conclusion()))
                });
                let major = match imp {
                    Some(m) => m,
                    None => {
                        let b = random_l_formula(self.rng, 1);
                        self.assume(Formula::imp(p.conclusion().clone(), b), &[])
                    }
                };
                let Formula::Implies(_, b) = major.conclusion().clone() else { unreachable!() };
                let ctx = union(&major.sequent.context, &p.sequent.context);
                self.node(Rule::ImpE, vec![major, p], ctx, *b)
            }
            8 => {
                let p = self.pick();
                let neg = self.assume(Formula::not(p.conclusion().clone()), &[]);
                let ctx = union(&neg.sequent.context, &p.sequent.context);
                let bot = self.node(Rule::ImpE, vec![neg, p], ctx.clone(), Formula::Falsum);
                let c = random_l_formula(self.rng, 2);
                self.node(Rule::FalsumE, vec![bot], ctx, c)
            }
            9 => {
                let p = self.pick();
                let used = ctx_free(&p.sequent.context);
                let cands: Vec<Var> = free_vars(p.conclusion()).into_iter().filter(|v| !used.contains(v)).collect();
                let x = *cands.choose(self.rng)?;
                let c = Formula::forall(x, p.conclusion().clone());
                let ctx = p.sequent.context.clone();
                self.node(Rule::AllI(x), vec![p], ctx, c)
            }
            10 => {
                let p = self.pick_where(|p| matches!(p.conclusion(), Formula::Forall(..)))?;
                let Formula::Forall(x, body) = p.conclusion().clone() else { unreachable!() };
                let vars: Vec<Var> = PROOF_VARS.iter().map(|&i| Var::num(i)).collect();
                let t = random_term(self.rng, &vars, 1);
                let c = subst(&body, &x, &t);
                let ctx = p.sequent.context.clone();
                self.node(Rule::AllE(t), vec![p], ctx, c)
            }
            11 => {
                let p = self.pick();
                let phi = p.conclusion().clone();
                let x = above(all_vars(&phi));
                let frees: Vec<Var> = free_vars(&phi).into_iter().collect();
                let (body, t) = match frees.choose(self.rng) {
                    Some(y) => (subst(&phi, y, &Expr::Var(x)), Expr::Var(*y)),
                    None => (phi, numeral(0)),
                };
                let ctx = p.sequent.context.clone();
                self.node(Rule::ExI(t), vec![p], ctx, Formula::exists(x, body))
            }
            12 => {
                let major = self.pick_where(|p| matches!(p.conclusion(), Formula::Exists(..)))?;
                let Formula::Exists(x, body) = major.conclusion().clone() else { unreachable!() };
                let q = self.pick();
                let mut avoid = all_vars(major.conclusion());
                avoid.extend(all_vars(q.conclusion()));
                avoid.extend(q.sequent.context.iter().flat_map(all_vars));
                let y = above(avoid);
                let inst = subst(&body, &x, &Expr::Var(y));
                let branch = if self.rng.gen_bool(0.5) {
                    let ctx = union(&q.sequent.context, &[inst.clone()]);
                    let c = q.conclusion().clone();
                    self.node(Rule::Weaken, vec![q], ctx, c)
                } else {
                    let a = self.assume(inst.clone(), &[]);
                    let other = random_l_formula(self.rng, 1);
                    let or = Formula::or(inst.clone(), other);
                    let ctx = a.sequent.context.clone();
                    let or_node = self.node(Rule::OrI1, vec![a], ctx.clone(), or.clone());
                    let z = above(all_vars(&or).into_iter().chain([y]));
                    let c = Formula::exists(z, subst(&or, &y, &Expr::Var(z)));
                    self.node(Rule::ExI(Expr::Var(y)), vec![or_node], ctx, c)
                };
                let ctx = union(&major.sequent.context, &without(&branch.sequent.context, &inst));
                let c = branch.conclusion().clone();
                self.node(Rule::ExE(y), vec![major, branch], ctx, c)
            }
            13 => {
                let p = self.pick();
                let phi = p.conclusion().clone();
                let frees: Vec<Var> = free_vars(&phi).into_iter().collect();
                let y = frees.choose(self.rng)?;
                let vars: Vec<Var> = PROOF_VARS.iter().map(|&i| Var::num(i)).collect();
                let t = random_term(self.rng, &vars, 1);
                let eq = self.assume(Formula::eq(0, Expr::Var(*y), t.clone()), &[]);
                let x = above(all_vars(&phi).into_iter().chain(free_vars(eq.conclusion())));
                let template = subst(&phi, y, &Expr::Var(x));
                let c = subst(&template, &x, &t);
                let ctx = union(&eq.sequent.context, &p.sequent.context);
                self.node(Rule::EqSubst(x, template), vec![eq, p], ctx, c)
            }
            _ => {
                if self.rng.gen_bool(0.5) {
                    let vars: Vec<Var> = PROOF_VARS.iter().map(|&i| Var::num(i)).collect();
                    let t = random_term(self.rng, &vars, 1);
                    self.node(Rule::Refl, vec![], vec![], Formula::eq(0, t.clone(), t))
                } else {
                    let p = self.pick();
                    let extra = random_l_formula(self.rng, 1);
                    let ctx = union(&p.sequent.context, &[extra]);
                    let c = p.conclusion().clone();
                    self.node(Rule::Weaken, vec![p], ctx, c)
                }
            }
        })
    }

    /// Discharges every assumption and generalises every free variable.
    fn close(&mut self, mut p: ProofTree) -> ProofTree {
        while let Some(a) = p.sequent.context.first().cloned() {
            let c = Formula::imp(a.clone(), p.conclusion().clone());
            let ctx = without(&p.sequent.context, &a);
            p = self.node(Rule::ImpI, vec![p], ctx, c);
        }
        for x in free_vars(p.conclusion()) {
            let c = Formula::forall(x, p.conclusion().clone());
            p = self.node(Rule::AllI(x), vec![p], vec![], c);
        }
        p
    }
}

/// A proof of a closed formula with an empty context, built from `steps`
/// random rule applications.
pub fn random_proof(rng: &mut impl Rng, steps: usize) -> ProofTree {
    let mut g = ProofGen { rng, next: 0, pool: Vec::new() };
    for _ in 0..2 {
        let a = random_l_formula(g.rng, 2);
        let p = g.assume(a, &[]);
        g.pool.push(p);
    }
    let mut last = g.pool[1].clone();
    for _ in 0..steps {
        if let Some(p) = g.step() {
            if p.conclusion().size() <= MAX_FORMULA && p.size() <= 200 {
                last = p.clone();
                g.pool.push(p);
            }
        }
    }
    g.close(last)
}

/// `n` closed proofs.
pub fn proofs(seed: u64, n: usize) -> Vec<ProofTree> {
    let mut r = rng(seed);
    (0..n).map(|_| random_proof(&mut r, 12)).collect()
}

/// Generator of closed TI formulas with unique bound variables.
struct TiGen<'r, R: Rng> {
    rng: &'r mut R,
    s: u32,
    next: u32,
    bound: Vec<Var>,
}

impl<R: Rng> TiGen<'_, R> {
    fn at(&self, level: u32) -> Vec<Var> {
        self.bound.iter().copied().filter(|v| v.level == level).collect()
    }

    fn num_term(&mut self, depth: u32) -> Expr {
        let vars = self.at(0);
        random_term(self.rng, &vars, depth)
    }

    fn atom(&mut self) -> Formula {
        let mut options: Vec<u32> = vec![0, 1];
        for k in 1..=self.s {
            if !self.at(k).is_empty() {
                options.push(2);
                options.push(2 + k);
            }
        }
        match *options.choose(self.rng).unwrap() {
            0 if self.rng.gen_bool(0.2) => Formula::Falsum,
            0 | 1 => {
                let (a, b) = (self.num_term(1), self.num_term(1));
                Formula::eq(0, a, b)
            }
            2 => {
                let k = self.rng.gen_range(1..=self.s);
                let xs = self.at(k);
                if xs.is_empty() {
                    let t = self.num_term(1);
                    return Formula::eq(0, t.clone(), t);
                }
                let a = *xs.choose(self.rng).unwrap();
                let b = *xs.choose(self.rng).unwrap();
                Formula::eq(k, Expr::Var(a), Expr::Var(b))
            }
            j => {
                let k = j - 2;
                let x = *self.at(k).choose(self.rng).unwrap();
                let z = if k == 1 {
                    self.num_term(1)
                } else {
                    match self.at(k - 1).choose(self.rng) {
                        Some(z) => Expr::Var(*z),
                        None => return Formula::eq(0, Expr::Zero, Expr::Zero),
                    }
                };
                Formula::mem(k - 1, z, Expr::Var(x))
            }
        }
    }

    fn formula(&mut self, depth: u32) -> Formula {
        if depth == 0 || (self.bound.len() >= 2 && self.rng.gen_bool(0.25)) {
            return self.atom();
        }
        let d = depth - 1;
        match self.rng.gen_range(0..7) {
            0 => Formula::and(self.formula(d), self.formula(d)),
            1 => Formula::or(self.formula(d), self.formula(d)),
            2 => Formula::imp(self.formula(d), self.formula(d)),
            3 => Formula::not(self.formula(d)),
            _ => {
                let level = self.rng.gen_range(0..=self.s);
                self.next += 1;
                let v = if level == 0 { Var::num(self.next) } else { Var::set(level, self.next) };
                self.bound.push(v);
                let body = self.formula(d);
                self.bound.pop();
                if self.rng.gen_bool(0.5) {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                }
            }
        }
    }
}

/// A closed TI_s formula of depth at most `depth`.
pub fn random_ti_formula(rng: &mut impl Rng, s: u32, depth: u32) -> Formula {
    TiGen { rng, s, next: 0, bound: Vec::new() }.formula(depth)
}

/// `n` closed TI_s formulas of depth at most 4.
pub fn ti_formulas(seed: u64, s: u32, n: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    (0..n).map(|_| random_ti_formula(&mut r, s, 4)).collect()
}

fn random_expr(rng: &mut impl Rng, level: u32, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    let index = rng.gen_range(1..4);
    if level == 0 {
        if leaf {
            return match rng.gen_range(0..3) {
                0 => Expr::Zero,
                _ => Expr::Var(Var::num(index)),
            };
        }
        return match rng.gen_range(0..6) {
            0 => Expr::succ(random_expr(rng, 0, depth - 1)),
            1 => Expr::plus(random_expr(rng, 0, depth - 1), random_expr(rng, 0, depth - 1)),
            2 => Expr::times(random_expr(rng, 0, depth - 1), random_expr(rng, 0, depth - 1)),
            3 => Expr::ap(1, random_expr(rng, 1, depth - 1), random_expr(rng, 0, depth - 1)),
            4 => Expr::Seg(Box::new(random_expr(rng, 1, depth - 1)), Box::new(random_expr(rng, 0, depth - 1))),
            _ => Expr::Snoc(Box::new(random_expr(rng, 0, depth - 1)), Box::new(random_expr(rng, 0, depth - 1))),
        };
    }
    if leaf {
        return match rng.gen_range(0..4) {
            0 => Expr::K(level),
            1 => Expr::Var(Var::lawlike(level, index)),
            2 => Expr::Var(Var::lawless(level, index)),
            _ => Expr::Var(Var::functional(level, index)),
        };
    }
    if level < 2 && rng.gen_bool(0.5) {
        Expr::ap(level + 1, random_expr(rng, level + 1, depth - 1), random_expr(rng, 0, depth - 1))
    } else {
        Expr::n(level, random_expr(rng, level, depth - 1))
    }
}

/// A formula of SLP_2 over every constructor of the syntax.
pub fn random_ast(rng: &mut impl Rng, depth: u32) -> Formula {
    ast_with(rng, depth, true)
}

fn ast_with(rng: &mut impl Rng, depth: u32, proves: bool) -> Formula {
    if depth == 0 || rng.gen_bool(0.2) {
        return match rng.gen_range(0..if proves { 5 } else { 4 }) {
            0 => Formula::Falsum,
            1 => Formula::prop(["p", "q", "long_name"].choose(rng).unwrap()),
            2 => {
                let level = rng.gen_range(0..=2);
                Formula::eq(level, random_expr(rng, level, 2), random_expr(rng, level, 2))
            }
            3 if proves => Formula::proves(random_expr(rng, 0, 1), ast_with(rng, depth.saturating_sub(1), false)),
            _ => Formula::eq(0, random_expr(rng, 0, 3), Expr::Zero),
        };
    }
    let d = depth - 1;
    let index = rng.gen_range(1..5);
    let level = rng.gen_range(1..=2);
    let v = match rng.gen_range(0..4) {
        0 => Var::num(index),
        1 => Var::functional(level, index),
        2 => Var::lawlike(level, index),
        _ => Var::lawless(level, index),
    };
    match rng.gen_range(0..5) {
        0 => Formula::and(ast_with(rng, d, proves), ast_with(rng, d, proves)),
        1 => Formula::or(ast_with(rng, d, proves), ast_with(rng, d, proves)),
        2 => Formula::imp(ast_with(rng, d, proves), ast_with(rng, d, proves)),
        3 => Formula::forall(v, ast_with(rng, d, proves)),
        _ => Formula::exists(v, ast_with(rng, d, proves)),
    }
}

pub fn asts(seed: u64, n: usize) -> Vec<Formula> {
    let mut r = rng(seed);
    (0..n).map(|_| random_ast(&mut r, 5)).collect()
}

/// A generated schema instance or near miss.
#[derive(Debug, Clone)]
pub struct SchemaCase {
    pub family: Family,
    pub formula: Formula,
    /// The side condition a negative case violates.
    pub violation: Option<&'static str>,
}

fn num_atom(rng: &mut impl Rng, vars: &[Var]) -> Formula {
    Formula::eq(0, random_term(rng, vars, 1), random_term(rng, vars, 1))
}

/// A propositional combination of the given atoms.
fn combine(rng: &mut impl Rng, atoms: &[Formula]) -> Formula {
    let mut f = atoms[0].clone();
    for a in &atoms[1..] {
        f = match rng.gen_range(0..3) {
            0 => Formula::and(f, a.clone()),
            1 => Formula::or(f, a.clone()),
            _ => Formula::imp(a.clone(), f),
        };
    }
    f
}

/// A formula of L whose free variables are among `x1..x4`, `y` and `extra`.
fn schema_phi(rng: &mut impl Rng, must: &[Var], extra: &[Formula]) -> Formula {
    let mut vars: Vec<Var> = (1..=4).map(Var::num).collect();
    vars.extend(must.iter().filter(|v| v.level == 0));
    let mut atoms: Vec<Formula> = must
        .iter()
        .map(|v| match v.level {
            0 => Formula::eq(0, Expr::Var(*v), random_term(rng, &vars, 1)),
            l => Formula::eq(l - 1, Expr::ap(l, Expr::Var(*v), random_term(rng, &vars, 1)), zero_at(l - 1)),
        })
        .collect();
    atoms.extend(extra.iter().cloned());
    for _ in 0..rng.gen_range(0..2) {
        atoms.push(num_atom(rng, &vars));
    }
    atoms.shuffle(rng);
    combine(rng, &atoms)
}

fn zero_at(level: u32) -> Expr {
    if level == 0 {
        Expr::Zero
    } else {
        Expr::K(level)
    }
}

fn num(i: u32) -> Option<Var> {
    Some(Var::num(i))
}

/// Positive instances of `family`, at least `per_family` of them.
pub fn schema_positives(seed: u64, family: Family, per_family: usize) -> Vec<SchemaCase> {
    let mut r = rng(seed ^ (family as u64).wrapping_mul(0x9e37_79b9));
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < per_family && tries < per_family * 20 {
        tries += 1;
        let parts = positive_parts(&mut r, family);
        if let Ok(f) = instantiate_schema(family, &parts) {
            if !out.iter().any(|c: &SchemaCase| c.formula == f) {
                out.push(SchemaCase { family, formula: f, violation: None });
            }
        }
    }
    out
}

fn positive_parts(r: &mut impl Rng, family: Family) -> Parts {
    use Family::*;
    let x = r.gen_range(5..12);
    let y = x + r.gen_range(1..3);
    let mut p = Parts { x: num(x), y: num(y), ..Parts::default() };
    let level = r.gen_range(1..=2);
    match family {
        L1 | L2 | L3 | TI1 | TI2 | TI3 => p.variant = r.gen_range(0..2),
        L4 => p.phi = Some(schema_phi(r, &[Var::num(x)], &[])),
        TI4 => {
            let s = Var::set(1, 9);
            let atom = Formula::mem(0, Expr::Var(Var::num(x)), Expr::Var(s));
            let extra = if r.gen_bool(0.5) { vec![atom] } else { vec![] };
            let vars = [Var::num(x), Var::num(1)];
            let atoms = [vec![num_atom(r, &vars)], extra].concat();
            p.phi = Some(combine(r, &atoms));
        }
        L5 => {
            p.variant = r.gen_range(0..2);
            p.n = Some(if p.variant == 0 { level - 1 } else { level });
            p.f = Some(Var::functional(level, r.gen_range(1..4)));
        }
        L6 => {
            p.variant = r.gen_range(0..2);
            if p.variant == 0 {
                p.n = Some(level - 1);
                p.f = Some(Var::functional(level, 1));
            } else {
                p.n = Some(level);
                p.f = Some(Var::functional(level, 1));
                p.g = Some(Var::functional(level, r.gen_range(2..4)));
            }
        }
        L7 => {
            let a = Var::lawlike(1, 1);
            let b = Var::lawlike(1, r.gen_range(2..4));
            p.f = Some(a);
            let vars = [Var::num(x), Var::num(1)];
            let base = random_term(r, &vars, 2);
            p.term = Some(if r.gen_bool(0.5) { Expr::plus(base, Expr::ap(1, Expr::Var(b), Expr::Var(Var::num(x)))) } else { base });
        }
        CS1 | CS2 | CS3 => {
            p.z = num(r.gen_range(8..10));
            p.y = num(10);
            let extra = random_l_formula(r, 1);
            p.phi = Some(schema_phi(r, &[], &[extra]));
        }
        LL1 => {
            p.f = Some(Var::lawless(level, 1));
            p.g = Some(Var::functional(level, r.gen_range(1..3)));
        }
        LL2 => {
            let i = r.gen_range(1..6);
            p.f = Some(Var::lawless(level, i));
            p.g = Some(Var::lawless(level, i + r.gen_range(1..4)));
        }
        LL3 | WC => {
            let h = Var::lawless(level, 1);
            let g = Var::lawless(level, 2);
            let ll = Var::lawlike(level, 3);
            let mut must = vec![h];
            if r.gen_bool(0.5) {
                must.push(ll);
            }
            if family == LL3 {
                p.h = Some(h);
                p.g = Some(g);
                p.phi = Some(schema_phi(r, &must, &[]));
            } else {
                p.f = Some(h);
                p.g = Some(g);
                must.push(Var::num(x));
                p.phi = Some(schema_phi(r, &must, &[]));
            }
        }
        C1 => {
            p.f = Some(Var::functional(level, 4));
            let mut must = vec![Var::num(x), Var::num(y)];
            if level == 2 && r.gen_bool(0.5) {
                must.push(Var::functional(2, 1));
            }
            p.phi = Some(schema_phi(r, &must, &[]));
        }
        C2 => {
            let g = Var::functional(1, 1);
            p.g = Some(g);
            p.f = Some(Var::functional(2 + r.gen_range(0..2), 4));
            p.phi = Some(schema_phi(r, &[g, Var::num(x)], &[]));
        }
        KS => {
            p.g = Some(Var::functional(level, 4));
            let extra = random_l_formula(r, 1);
            p.phi = Some(schema_phi(r, &[], &[extra]));
        }
        BI => {
            p.f = Some(Var::functional(1, 1));
            p.phi = Some(schema_phi(r, &[Var::num(y)], &[]));
            p.psi = Some(schema_phi(r, &[Var::num(y)], &[]));
        }
        MP => p.phi = Some(schema_phi(r, &[Var::num(x)], &[])),
        CT => {
            p.z = num(11);
            p.phi = Some(schema_phi(r, &[Var::num(x), Var::num(y)], &[]));
        }
        Compr => {
            let n = r.gen_range(0..=1);
            p.n = Some(n);
            p.f = Some(Var::set(n + 1, 1));
            let z = if n == 0 { Var::num(x) } else { Var::set(n, 2) };
            p.z = Some(z);
            let other = Var::set(n + 1, 3);
            let mem = Formula::mem(n, Expr::Var(z), Expr::Var(other));
            let eq = if n == 0 { num_atom(r, &[z]) } else { Formula::eq(n, Expr::Var(z), Expr::Var(z)) };
            p.phi = Some(combine(r, &[mem, eq]));
        }
        Ext => {
            let n = r.gen_range(0..=1);
            p.n = Some(n);
            let i = r.gen_range(1..5);
            p.x = Some(Var::set(n + 1, i));
            p.y = Some(Var::set(n + 1, i + r.gen_range(1..4)));
            p.z = Some(if n == 0 { Var::num(x) } else { Var::set(n, 3) });
        }
        Equality => {
            p.variant = r.gen_range(0..2);
            if p.variant == 0 {
                p.x = Some(if r.gen_bool(0.5) { Var::num(x) } else { Var::functional(level, 1) });
            } else {
                let (vx, vy) = (Var::num(x), Var::num(y));
                let other = Var::num(1);
                let a = Expr::plus(Expr::Var(vx), Expr::Var(other));
                let b = Expr::succ(Expr::Var(vx));
                p.phi = Some(Formula::eq(0, a.clone(), b.clone()));
                let a2 = if r.gen_bool(0.5) { Expr::plus(Expr::Var(vy), Expr::Var(other)) } else { a };
                p.psi = Some(Formula::eq(0, a2, if r.gen_bool(0.5) { Expr::succ(Expr::Var(vy)) } else { b }));
            }
        }
    }
    p
}

/// Near misses: formulas of a schema's shape violating one side condition.
pub fn schema_negatives(seed: u64, per_kind: usize) -> Vec<SchemaCase> {
    use Family::*;
    let mut r = rng(seed);
    let mut out = Vec::new();
    for i in 0..per_kind {
        let level = 1 + (i as u32 % 2);
        let (x, y) = (Var::num(5), Var::num(6));
        let mut push = |family, parts: Parts, violation| {
            if let Ok(f) = instantiate_unchecked(family, &parts) {
                out.push(SchemaCase { family, formula: f, violation: Some(violation) });
            }
        };
        let base = Parts { x: Some(x), y: Some(y), ..Parts::default() };

        // Sort bound.
        let high = Var::functional(2, 1);
        push(C1, Parts { f: Some(Var::functional(1, 4)), phi: Some(schema_phi(&mut r, &[x, y, high], &[])), ..base.clone() }, "sort bound");
        push(KS, Parts { g: Some(Var::functional(1, 4)), phi: Some(schema_phi(&mut r, &[high], &[])), ..base.clone() }, "sort bound");
        push(C2, Parts { g: Some(Var::functional(1, 1)), f: Some(Var::functional(2, 4)), phi: Some(schema_phi(&mut r, &[Var::functional(1, 1), x, Var::functional(3, 2)], &[])), ..base.clone() }, "sort bound");
        let lh = Var::lawless(1, 1);
        push(LL3, Parts { h: Some(lh), g: Some(Var::lawless(1, 2)), phi: Some(schema_phi(&mut r, &[lh, Var::functional(2, 3)], &[])), ..base.clone() }, "sort bound");
        let z0 = Var::num(7);
        let upper = Formula::mem(1, Expr::Var(Var::set(1, 4)), Expr::Var(Var::set(2, 5)));
        push(Compr, Parts { n: Some(0), f: Some(Var::set(1, 1)), z: Some(z0), phi: Some(Formula::and(num_atom(&mut r, &[z0]), upper)), ..base.clone() }, "sort bound");

        // Parameter occurrence.
        let f4 = Var::functional(level, 4);
        let mention = |v: Var| Formula::eq(v.level - 1, Expr::ap(v.level, Expr::Var(v), Expr::Zero), zero_at(v.level - 1));
        push(KS, Parts { g: Some(f4), phi: Some(schema_phi(&mut r, &[], &[mention(f4)])), ..base.clone() }, "parameter occurrence");
        push(C1, Parts { f: Some(f4), phi: Some(schema_phi(&mut r, &[x, y, f4], &[])), ..base.clone() }, "parameter occurrence");
        let z = Var::num(8);
        push(CS3, Parts { z: Some(z), phi: Some(schema_phi(&mut r, &[z], &[])), ..base.clone() }, "parameter occurrence");
        let x1 = Var::set(1, 1);
        push(Compr, Parts { n: Some(0), f: Some(x1), z: Some(z0), phi: Some(Formula::mem(0, Expr::Var(z0), Expr::Var(x1))), ..base.clone() }, "parameter occurrence");
        let (h, g) = (Var::lawless(level, 1), Var::lawless(level, 2));
        push(LL3, Parts { h: Some(h), g: Some(g), phi: Some(schema_phi(&mut r, &[h, g], &[])), ..base.clone() }, "parameter occurrence");
        push(BI, Parts { f: Some(Var::functional(1, 1)), phi: Some(schema_phi(&mut r, &[y, x], &[])), psi: Some(schema_phi(&mut r, &[y], &[])), ..base.clone() }, "parameter occurrence");

        // Lawless restriction.
        let other = Var::lawless(level, 3);
        push(LL3, Parts { h: Some(h), g: Some(g), phi: Some(schema_phi(&mut r, &[h, other], &[])), ..base.clone() }, "lawless restriction");
        let fun = Var::functional(level, 3);
        push(WC, Parts { f: Some(h), g: Some(g), phi: Some(schema_phi(&mut r, &[h, x, fun], &[])), ..base.clone() }, "lawless restriction");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, Theory, TheoryId};
    use crate::syntax::{check_formula, Language};

    #[test]
    fn frames_are_valid() {
        let mut r = rng(1);
        for _ in 0..100 {
            let f = random_frame(&mut r, &["p", "q"], 4, 3);
            assert!(f.validate().is_empty());
            assert!(f.states.len() <= 4 && (1..=3).contains(&f.numbers));
        }
    }

    #[test]
    fn proofs_check_and_are_closed() {
        let th = Theory::new(TheoryId::L, 1);
        for p in proofs(7, 60) {
            let c = check_proof(&th, &p).unwrap_or_else(|e| panic!("{e}\n{}", crate::calculus::print_proof(&p)));
            assert!(c.sequent.context.is_empty());
            assert!(free_vars(&c.sequent.conclusion).is_empty());
        }
    }

    #[test]
    fn ti_formulas_are_closed_and_shallow() {
        for f in ti_formulas(3, 2, 200) {
            assert!(free_vars(&f).is_empty(), "{f}");
            assert!(f.depth() <= 4);
            check_formula(&f, Language::TI, 2).unwrap();
        }
    }

    #[test]
    fn asts_are_well_sorted() {
        for f in asts(5, 200) {
            check_formula(&f, Language::SLP, 2).unwrap_or_else(|e| panic!("{f}: {e}"));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(ti_formulas(11, 2, 20), ti_formulas(11, 2, 20));
        assert_eq!(arith_terms(11, 20), arith_terms(11, 20));
    }

    #[test]
    fn every_family_has_positives() {
        let short: Vec<Family> =
            Family::ALL.into_iter().filter(|&fam| schema_positives(2, fam, 10).len() < 10).collect();
        assert!(short.is_empty(), "{short:?}");
    }
}
