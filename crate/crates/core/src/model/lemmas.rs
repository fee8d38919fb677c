//! Exhaustive property suites over a truncation.
//!
//! Instance spaces: level-1 tables are all of the truncated `a_1` when it is
//! enumerable, otherwise every monotone complete column used at all
//! positions (properties of `Ap^1(f, n)` only read column `n`). Level-2
//! tables are the constants over the basis, `g^2`, and `nu_2` of every
//! bijection of the basis used at all positions. Permutation families are
//! all families at level 1 and, at level 2, the diagonal families together
//! with all families built from transpositions.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;

use super::{
    choice_witness_m1, classify, columns, enumerate_domain, extension, interp_expr, lawless_extend, nu,
    permutations_of, shortest, BsError, Class, Elem, Env, Model, Permutation, Table, Transport,
};
use crate::syntax::{Expr, Var};

pub const SUITES: &[&str] = &[
    "ap_predicate",
    "term_int",
    "term_int_total",
    "lawless1",
    "nu_classify",
    "lawless_extend",
    "permutations",
    "extension",
    "shortest",
    "choice",
];

const KEPT_FAILURES: usize = 20;

#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub name: String,
    pub instances: usize,
    pub failed: usize,
    /// The first few failures.
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport { name: name.to_string(), instances: 0, failed: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }
}

pub fn run_suite(model: &Model, name: &str) -> Result<SuiteReport, BsError> {
    let mut r = SuiteReport::new(name);
    let mut cx = Cx::new(model);
    match name {
        "ap_predicate" => cx.ap_predicate(&mut r)?,
        "term_int" => cx.term_int(&mut r, false)?,
        "term_int_total" => cx.term_int(&mut r, true)?,
        "lawless1" => cx.lawless1(&mut r)?,
        "nu_classify" => cx.nu_classify(&mut r)?,
        "lawless_extend" => cx.lawless_extend(&mut r)?,
        "permutations" => cx.permutations(&mut r)?,
        "extension" => cx.extension(&mut r)?,
        "shortest" => cx.shortest(&mut r),
        "choice" => cx.choice(&mut r)?,
        other => return Err(BsError::Unsupported(format!("unknown suite '{other}'"))),
    }
    Ok(r)
}

pub fn run_all(model: &Model) -> Result<Vec<SuiteReport>, BsError> {
    SUITES.iter().map(|s| run_suite(model, s)).collect()
}

struct Cx<'a> {
    m: &'a Model,
    members: HashMap<usize, (Arc<Table>, bool)>,
}

impl<'a> Cx<'a> {
    fn new(m: &'a Model) -> Cx<'a> {
        Cx { m, members: HashMap::new() }
    }

    fn s(&self) -> u32 {
        self.m.params.s
    }

    fn d(&self) -> u32 {
        self.m.depth()
    }

    fn is_member(&mut self, t: &Arc<Table>) -> bool {
        let key = Arc::as_ptr(t) as usize;
        if let Some((_, ok)) = self.members.get(&key) {
            return *ok;
        }
        let ok = self.m.is_member(t);
        self.members.insert(key, (t.clone(), ok));
        ok
    }

    fn in_carrier(&mut self, e: &Elem, level: u32) -> bool {
        match e {
            Elem::Num(_) => level == 0,
            Elem::Fun(t) => t.level == level && self.is_member(t),
        }
    }

    fn level1_tables(&self) -> Result<Vec<Arc<Table>>, BsError> {
        if let Ok(dom) = enumerate_domain(self.m, 1) {
            return Ok(dom.carrier.into_iter().map(|e| e.as_table().expect("tables").clone()).collect());
        }
        let cols = columns(self.m, 1, &self.m.basis[0])?;
        let d = self.d() as usize;
        let mut out: Vec<Arc<Table>> = cols
            .iter()
            .map(|c| Arc::new(super::domain::table_from_columns(self.m, 1, &vec![c; d])))
            .collect();
        out.extend(self.m.basis[1].iter().map(|e| e.as_table().expect("tables").clone()));
        Ok(out)
    }

    fn level2_tables(&self, small: bool) -> Result<Vec<Arc<Table>>, BsError> {
        if self.s() < 2 {
            return Ok(Vec::new());
        }
        let mut out: Vec<Arc<Table>> = self.m.basis[1].iter().map(|v| self.m.constant_table(2, v.clone())).collect();
        out.push(Arc::new(self.m.first_entry_reader(2)));
        let perms = if small { transpositions(self.m.basis[1].len()) } else { permutations_of(self.m.basis[1].len()) };
        for p in perms {
            out.push(Arc::new(nu(self.m, 2, &Permutation::diagonal(self.m, 2, p))?));
        }
        Ok(out)
    }

    fn families(&self, level: u32) -> Vec<Permutation> {
        let c = self.m.basis[level as usize - 1].len();
        let d = self.d() as usize;
        let product = |choices: Vec<Vec<u32>>| -> Vec<Permutation> {
            std::iter::repeat(choices)
                .take(d)
                .multi_cartesian_product()
                .map(|maps| Permutation { level, maps })
                .collect()
        };
        if level == 1 {
            return product(permutations_of(c));
        }
        let mut out = product(transpositions(c));
        for p in permutations_of(c) {
            let diag = Permutation::diagonal(self.m, level, p);
            if !out.contains(&diag) {
                out.push(diag);
            }
        }
        out
    }

    fn ap_predicate(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let mut tables = self.level1_tables()?;
        tables.extend(self.level2_tables(false)?);
        let tree = self.m.m();
        for f in &tables {
            for a in 0..tree.len() {
                for n in 0..self.d() {
                    let Some(v) = self.m.ap(f, a, n) else { continue };
                    let ok = self.in_carrier(&v, f.level - 1)
                        && tree.children[a].iter().all(|&c| self.m.ap(f, c, n).as_ref() == Some(&v));
                    r.check(ok, || format!("level-{} table, node {a}, position {n}", f.level));
                }
            }
        }
        Ok(())
    }

    fn term_int(&mut self, r: &mut SuiteReport, total: bool) -> Result<(), BsError> {
        let f = Var::functional(1, 1);
        let g = Var::functional(2, 1);
        let d = self.d() as u64;
        let fv = || Expr::Var(f);
        let gv = || Expr::Var(g);
        let mut tf: Vec<Template> = Vec::new();
        for n in 0..d {
            let at = Expr::ap(1, fv(), Expr::numeral(n));
            tf.push(Template::new(at.clone(), 0));
            tf.push(Template::new(Expr::succ(at.clone()), 0));
            tf.push(Template::new(Expr::ap(1, Expr::n(1, fv()), Expr::numeral(n)), 0));
            tf.push(Template::new(Expr::ap(1, Expr::K(1), Expr::numeral(n)), 0));
            tf.push(Template::nested(Expr::ap(1, fv(), at.clone()), tf.len() - 4));
            for m in 0..d {
                let bt = Expr::ap(1, fv(), Expr::numeral(m));
                tf.push(Template::new(Expr::plus(at.clone(), bt.clone()), 0));
                tf.push(Template::new(Expr::times(at.clone(), bt), 0));
            }
        }
        tf.push(Template::new(fv(), 1));
        tf.push(Template::new(Expr::n(1, fv()), 1));
        for v in 0..self.m.params.base as u64 {
            tf.push(Template::new(Expr::numeral(v), 0));
        }
        let mut tg: Vec<Template> = Vec::new();
        if self.s() >= 2 {
            for n in 0..d {
                let at = Expr::ap(2, gv(), Expr::numeral(n));
                tg.push(Template::new(at.clone(), 1));
                tg.push(Template::new(Expr::ap(2, Expr::K(2), Expr::numeral(n)), 1));
                for m in 0..d {
                    tg.push(Template::new(Expr::ap(1, at.clone(), Expr::numeral(m)), 0));
                    let succ = Expr::ap(2, Expr::n(2, gv()), Expr::numeral(n));
                    tg.push(Template::new(Expr::ap(1, succ, Expr::numeral(m)), 0));
                }
            }
            tg.push(Template::new(gv(), 2));
            tg.push(Template::new(Expr::n(2, gv()), 2));
            tg.push(Template::new(Expr::K(1), 1));
        }
        let f_tables = self.level1_tables()?;
        let g_tables = self.level2_tables(false)?;
        let cases: Vec<(Var, &Arc<Table>, &Vec<Template>)> = f_tables
            .iter()
            .map(|t| (f, t, &tf))
            .chain(g_tables.iter().map(|t| (g, t, &tg)))
            .collect();
        for (var, table, templates) in cases {
            let env = Env::new().bind(var, Elem::Fun(table.clone()));
            let values: Vec<Vec<Option<Elem>>> = templates
                .iter()
                .map(|t| (0..self.m.m().len()).map(|a| interp_expr(self.m, &env, &t.expr, a)).collect())
                .collect::<Result<_, _>>()?;
            if total {
                self.check_total(r, templates, &values);
            } else {
                self.check_persistent(r, templates, &values);
            }
        }
        Ok(())
    }

    fn check_persistent(&mut self, r: &mut SuiteReport, templates: &[Template], values: &[Vec<Option<Elem>>]) {
        let tree = self.m.m();
        for (t, vals) in templates.iter().zip(values) {
            for a in 0..tree.len() {
                let Some(v) = &vals[a] else { continue };
                let ok = self.in_carrier(v, t.level)
                    && tree.children[a].iter().all(|&c| vals[c].as_ref() == Some(v));
                r.check(ok, || format!("{} at node {a}", t.expr));
            }
        }
        for i in 0..templates.len() {
            for j in i + 1..templates.len() {
                if templates[i].level != templates[j].level {
                    continue;
                }
                for a in 0..tree.len() {
                    let val = |a: usize| matches!((&values[i][a], &values[j][a]), (Some(x), Some(y)) if x == y);
                    if val(a) {
                        let ok = tree.children[a].iter().all(|&c| val(c));
                        r.check(ok, || format!("Val({} = {}) at node {a}", templates[i].expr, templates[j].expr));
                    }
                }
            }
        }
    }

    fn check_total(&mut self, r: &mut SuiteReport, templates: &[Template], values: &[Vec<Option<Elem>>]) {
        let tree = self.m.m();
        let d = self.d();
        for leaf in tree.frontier() {
            for (t, vals) in templates.iter().zip(values) {
                let required = match t.inner {
                    None => true,
                    Some(i) => values[i][leaf].as_ref().and_then(Elem::as_num).is_some_and(|n| n < d),
                };
                if required {
                    r.check(vals[leaf].is_some(), || format!("{} undefined on the path to {leaf}", t.expr));
                }
            }
        }
    }

    fn nu_families(&self) -> Vec<Permutation> {
        let mut out = self.families(1);
        if self.s() >= 2 {
            out.extend(self.families(2));
        }
        out
    }

    fn lawless1(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let tree = self.m.m();
        for xi in self.nu_families() {
            let f = nu(self.m, xi.level, &xi)?;
            for a in 0..tree.len() {
                for n in 0..self.d() + 1 {
                    let defined = self.m.ap(&f, a, n).is_some();
                    r.check(defined == ((n as usize) < tree.lh(a)), || {
                        format!("nu_{} family {:?}, node {a}, position {n}", xi.level, xi.maps)
                    });
                }
            }
        }
        Ok(())
    }

    fn nu_classify(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        for xi in self.nu_families() {
            let f = nu(self.m, xi.level, &xi)?;
            let ok = match classify(self.m, &f)? {
                Class::Lawless(found) => nu(self.m, xi.level, &found)? == f,
                _ => false,
            };
            r.check(ok, || format!("nu_{} family {:?}", xi.level, xi.maps));
        }
        let exhaustive = enumerate_domain(self.m, 1).is_ok();
        let mut lawless = 0;
        for f in self.level1_tables()? {
            if let Class::Lawless(found) = classify(self.m, &f)? {
                lawless += 1;
                r.check(nu(self.m, 1, &found)? == *f, || "certificate does not reproduce the table".into());
            }
        }
        if exhaustive {
            let expected = self.families(1).len();
            r.check(lawless == expected, || format!("{lawless} lawless tables in a_1, expected {expected}"));
        }
        Ok(())
    }

    fn lawless_extend(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let tree = self.m.m();
        let gammas1: Vec<usize> = (0..tree.len()).filter(|&g| tree.nodes[g].comps[1..].iter().all(|c| c.iter().all(|&e| e == 0))).collect();
        let mut cases: Vec<(Arc<Table>, &[usize])> = Vec::new();
        let all: Vec<usize> = (0..tree.len()).collect();
        for f in self.level1_tables()? {
            cases.push((f, &gammas1));
        }
        for f in self.level2_tables(true)? {
            cases.push((f, &all));
        }
        for (f, gammas) in cases {
            let k = f.level as usize;
            for x in 0..self.d() {
                for &g in gammas {
                    let pre = (0..=x).all(|y| {
                        (y as usize) < tree.lh(g)
                            && self.m.ap(&f, g, y).is_some_and(|v| self.m.basis_index(k - 1, &v).is_some())
                    });
                    let result = lawless_extend(self.m, &f, x, g);
                    let ok = match (pre, result) {
                        (true, Ok(h)) => {
                            matches!(classify(self.m, &h)?, Class::Lawless(_))
                                && (0..=x).all(|y| self.m.ap(&h, g, y) == self.m.ap(&f, g, y))
                        }
                        (false, Err(BsError::Precondition(_))) => true,
                        _ => false,
                    };
                    r.check(ok, || format!("level-{k} table, x = {x}, gamma = {g}"));
                }
            }
        }
        Ok(())
    }

    fn permutations(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let ids: Vec<Permutation> = (1..=self.s()).map(|l| Permutation::identity(self.m, l)).collect::<Result<_, _>>()?;
        let d0 = &self.m.trees[0];
        for xi0 in self.families(1) {
            let mut xis = ids.clone();
            xis[0] = xi0.clone();
            let tr = Transport::new(self.m, xis)?;
            let image: Vec<usize> = (0..d0.len()).map(|x| tr.xi_tilde(0, x)).collect();
            let bijective = image.iter().sorted().dedup().count() == d0.len();
            r.check(bijective, || format!("xi~_0 for {:?} is not a bijection", xi0.maps));
            for y in 0..d0.len() {
                for x in 0..d0.len() {
                    let ok = d0.later_or_eq(y, x) == d0.later_or_eq(image[y], image[x]);
                    r.check(ok, || format!("xi~_0 for {:?} breaks the order at ({y}, {x})", xi0.maps));
                }
            }
            let eta = tr.eta(0);
            let round = (0..d0.len()).all(|x| {
                let node = &d0.nodes[image[x]];
                let back: Vec<u32> = node.comps[0].iter().enumerate().map(|(i, &c)| eta.apply(i, c)).collect();
                back == d0.nodes[x].comps[0]
            });
            r.check(round, || "eta_0 does not invert xi~~_0".into());
        }
        if self.s() >= 2 {
            let d1 = &self.m.trees[1];
            for xi0 in self.families(1) {
                for xi1 in self.families(2) {
                    let mut xis = ids.clone();
                    xis[0] = xi0.clone();
                    xis[1] = xi1.clone();
                    let tr = Transport::new(self.m, xis)?;
                    let image: Vec<usize> = (0..d1.len()).map(|x| tr.xi_tilde(1, x)).collect();
                    let mut seen = vec![false; d1.len()];
                    let mut ok = true;
                    for x in 0..d1.len() {
                        ok &= !std::mem::replace(&mut seen[image[x]], true);
                        ok &= d1.parent[x].map(|p| image[p]) == d1.parent[image[x]];
                    }
                    r.check(ok, || format!("xi~_1 for {:?}, {:?}", xi0.maps, xi1.maps));
                }
            }
        }
        let level1 = self.level1_tables()?;
        for xi0 in self.families(1) {
            let mut xis = ids.clone();
            xis[0] = xi0.clone();
            let tr = Transport::new(self.m, xis)?;
            for f in &level1 {
                let member = self.m.is_member(f);
                let image = tr.lambda(&Elem::Fun(f.clone()));
                let ok = self.m.is_member(image.as_table().expect("table")) == member;
                r.check(ok, || format!("Lambda_1 for {:?}", xi0.maps));
                for mutant in mutants(self.m, f) {
                    let image = tr.lambda(&Elem::Fun(Arc::new(mutant.clone())));
                    let ok = self.m.is_member(image.as_table().expect("table")) == self.m.is_member(&mutant);
                    r.check(ok, || format!("Lambda_1 on a non-member for {:?}", xi0.maps));
                }
            }
            let k1 = Elem::Fun(self.m.khat(1)?);
            r.check(tr.lambda(&k1) == k1, || "Lambda_1 moves K1".into());
        }
        if self.s() >= 2 {
            let level2 = self.level2_tables(true)?;
            let small: Vec<Permutation> = transpositions(self.m.basis[1].len())
                .into_iter()
                .map(|p| Permutation::diagonal(self.m, 2, p))
                .collect();
            for xi0 in self.families(1) {
                for xi1 in &small {
                    let mut xis = ids.clone();
                    xis[0] = xi0.clone();
                    xis[1] = xi1.clone();
                    let tr = Transport::new(self.m, xis)?;
                    for f in &level2 {
                        let image = tr.lambda(&Elem::Fun(f.clone()));
                        let ok = self.m.is_member(image.as_table().expect("table")) == self.m.is_member(f);
                        r.check(ok, || format!("Lambda_2 for {:?}, {:?}", xi0.maps, xi1.maps));
                    }
                    let k2 = Elem::Fun(self.m.khat(2)?);
                    r.check(tr.lambda(&k2) == k2, || "Lambda_2 moves K2".into());
                }
            }
        }
        Ok(())
    }

    fn extension(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let s = self.s() as usize;
        let m = self.m.m();
        for k in 1..=s {
            for a in &self.m.trees[k - 1].nodes {
                let e = extension(self.m, a, k)?;
                let ok = e.lh() == a.lh()
                    && e.prefix(k) == *a
                    && m.find(&e).is_some()
                    && e.comps[k..].iter().all(|c| c.iter().all(|&x| x == 0))
                    && (k < s || e == *a);
                r.check(ok, || format!("extension of {a:?} at m = {k}"));
            }
        }
        Ok(())
    }

    fn shortest(&mut self, r: &mut SuiteReport) {
        let model = self.m;
        let tree = model.m();
        let mut oracles: Vec<Box<dyn Fn(usize) -> bool + '_>> = Vec::new();
        for j in 0..=self.d() as usize + 1 {
            oracles.push(Box::new(move |b| tree.lh(b) >= j));
        }
        for level in 1..self.m.basis.len() {
            for e in &self.m.basis[level] {
                let t = e.as_table().expect("tables").clone();
                for n in 0..self.d() {
                    let t = t.clone();
                    oracles.push(Box::new(move |b| model.ap(&t, b, n).is_some()));
                }
            }
        }
        for (i, o) in oracles.iter().enumerate() {
            for a in 0..tree.len() {
                let anc = tree.ancestors(a);
                let first: Vec<usize> = anc
                    .iter()
                    .enumerate()
                    .filter(|&(j, &b)| o(b) && anc[..j].iter().all(|&c| !o(c)))
                    .map(|(_, &b)| b)
                    .collect();
                let got = shortest(self.m, a, 0, |b, _| o(b));
                let ok = first.len() <= 1 && got == first.first().copied() && (got.is_none() == anc.iter().all(|&b| !o(b)));
                r.check(ok, || format!("oracle {i} at node {a}"));
            }
        }
    }

    fn choice(&mut self, r: &mut SuiteReport) -> Result<(), BsError> {
        let model = self.m;
        let tree = model.m();
        let ys = self.d().max(self.m.params.base) + 1;
        let mut readers: Vec<Arc<Table>> =
            self.m.basis[1].iter().map(|e| e.as_table().expect("tables").clone()).collect();
        for xi in self.families(1) {
            readers.push(Arc::new(nu(self.m, 1, &xi)?));
        }
        type Psi<'b> = Box<dyn Fn(usize, u32, u32) -> bool + 'b>;
        let mut psis: Vec<(String, Psi)> = vec![
            ("y = 0".into(), Box::new(|_, _, y| y == 0)),
            ("y = x".into(), Box::new(|_, x, y| y == x)),
        ];
        for (i, t) in readers.iter().enumerate() {
            let t = t.clone();
            psis.push((format!("y = F{i}(x)"), Box::new(move |b, x, y| model.ap(&t, b, x) == Some(Elem::Num(y)))));
        }
        let reader = readers[readers.len() - 1].clone();
        let bad: Psi = Box::new(move |b, x, y| model.ap(&reader, b, x + 1) == Some(Elem::Num(y)));
        let d0 = &self.m.trees[0];
        let top = self.m.trees.len() - 1;
        for a in 0..tree.len() {
            for (name, psi) in &psis {
                let f = match choice_witness_m1(self.m, a, psi, ys) {
                    Ok(f) => f,
                    Err(e) => {
                        r.check(false, || format!("{name} at node {a}: {e}"));
                        continue;
                    }
                };
                let a1 = self.m.project(top, a, 0);
                let mut ok = self.m.is_member(&f);
                for u in 0..d0.len() {
                    let on = d0.later_or_eq(u, a1);
                    for x in 0..self.d() {
                        match f.get(u, x) {
                            Some(Elem::Num(v)) if on => {
                                let e = tree.find(&extension(self.m, &d0.nodes[u], 1)?).expect("in M");
                                let beta = shortest(self.m, e, x, |b, x| (0..ys).any(|y| psi(b, x, y)));
                                ok &= beta.is_some_and(|b| psi(b, x, *v) && (0..*v).all(|y| !psi(b, x, y)));
                            }
                            Some(Elem::Num(v)) => ok &= *v == 0,
                            Some(_) => ok = false,
                            None => ok &= !(d0.lh(u) >= tree.lh(a) && !on),
                        }
                    }
                }
                for leaf in tree.frontier().filter(|&l| tree.later_or_eq(l, a)) {
                    for x in 0..self.d() {
                        ok &= self.m.ap(&f, leaf, x).and_then(|v| v.as_num()).is_some_and(|v| psi(leaf, x, v));
                    }
                }
                r.check(ok, || format!("{name} at node {a}"));
            }
            let incomplete = matches!(choice_witness_m1(self.m, a, &bad, ys), Err(BsError::Incomplete(_)));
            r.check(incomplete, || format!("shifted reader at node {a} should leave the table incomplete"));
        }
        Ok(())
    }
}

struct Template {
    expr: Expr,
    level: u32,
    /// Index of a numeric argument template that must be below `D` for the
    /// value to be required.
    inner: Option<usize>,
}

impl Template {
    fn new(expr: Expr, level: u32) -> Template {
        Template { expr, level, inner: None }
    }

    fn nested(expr: Expr, inner: usize) -> Template {
        Template { expr, level: 0, inner: Some(inner) }
    }
}

fn transpositions(c: usize) -> Vec<Vec<u32>> {
    let id: Vec<u32> = (0..c as u32).collect();
    let mut out = vec![id.clone()];
    for (i, j) in (0..c).tuple_combinations() {
        let mut p = id.clone();
        p.swap(i, j);
        out.push(p);
    }
    out
}

/// Non-members obtained from a member: one frontier entry removed, and one
/// frontier entry changed under a defined parent.
fn mutants(model: &Model, f: &Table) -> Vec<Table> {
    let tree = &model.trees[f.level as usize - 1];
    let d = model.depth() as usize;
    let mut out = Vec::new();
    if let Some(leaf) = tree.frontier().last() {
        let mut t = f.clone();
        t.entries[leaf * d] = None;
        out.push(t);
        if let (Some(p), Some(Elem::Num(v))) = (tree.parent[leaf], f.get(leaf, 0)) {
            if f.get(p, 0).is_some() {
                let mut t = f.clone();
                t.entries[leaf * d] = Some(Elem::Num(v + 1));
                out.push(t);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TruncationParams;

    #[test]
    fn suites_pass_at_small_truncations() {
        for (s, d) in [(1, 1), (1, 2), (2, 1)] {
            let m = Model::new(TruncationParams::new(s, d, 2).unwrap()).unwrap();
            for r in run_all(&m).unwrap() {
                assert!(r.passed(), "s={s} D={d} {}: {:?}", r.name, r.failures);
                assert!(r.instances > 0, "{} is empty", r.name);
            }
        }
    }

    #[test]
    fn unknown_suite() {
        let m = Model::new(TruncationParams::new(1, 1, 2).unwrap()).unwrap();
        assert!(run_suite(&m, "nope").is_err());
    }
}
