//! Acceptance criteria 1-10. Each test prints one PASS/FAIL line with its
//! running time and fails when the criterion or its time limit is missed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use beth_forge::beth::{
    countermodel_search, cs_frames, graphs, lem_fixture, mp_fixture, mp_psi, oracle::explicit_tree, valuations, Env,
    Forcer, SearchBounds,
};
use beth_forge::calculus::{
    check_proof, instantiate_schema, is_axiom, match_schema, Family, Parts, Theory, TheoryId,
};
use beth_forge::classical::{arval, eval_slp, eval_ti, tr, Arith, Assignment, Coder, FunctionalUniverse, Obj, TypedUniverse};
use beth_forge::corpus;
use beth_forge::model::{lemmas, Model, TruncationParams};
use beth_forge::syntax::godel::{decode_formula, encode_expr, encode_formula};
use beth_forge::syntax::{closure, parse_formula, Expr, Formula, Language, Var};
use beth_forge::translate::{interpret, neg};

fn report(n: u32, name: &str, limit: Duration, run: impl FnOnce() -> (bool, String)) {
    let start = Instant::now();
    let (ok, detail) = run();
    let took = start.elapsed();
    let in_time = took <= limit;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let late = if in_time { String::new() } else { " over the time limit;".into() };
    println!(
        "criterion {n:>2} {verdict} {name} ({:.2} s of {} s;{late} {detail})",
        took.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok && in_time, "criterion {n} failed: {detail}");
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn l(text: &str) -> Formula {
    parse_formula(text, Language::L, 1).unwrap()
}

fn ti(text: &str) -> Formula {
    parse_formula(text, Language::TI, 2).unwrap()
}

#[test]
fn criterion_01_proof_soundness() {
    report(1, "HPC soundness", secs(60), || {
        let th = Theory::new(TheoryId::L, 1);
        let proofs = corpus::proofs(101, 500);
        let mut r = corpus::rng(102);
        let frames: Vec<_> = (0..50).map(|_| corpus::random_frame(&mut r, &["p", "q", "r"], 4, 3)).collect();
        let (mut checked, mut cases, mut forced) = (0, 0, 0);
        let mut first_bad = None;
        for p in &proofs {
            let Ok(c) = check_proof(&th, p) else { continue };
            checked += 1;
            let phi = closure(&c.sequent.conclusion);
            for f in &frames {
                cases += 1;
                let ok = Forcer::for_formula(f, &phi).and_then(|fo| fo.force_root(&phi)).unwrap_or(false);
                if ok {
                    forced += 1;
                } else if first_bad.is_none() {
                    first_bad = Some(phi.to_string());
                }
            }
        }
        let ok = checked >= 500 && forced == cases;
        (ok, format!("{checked} checked proofs, {forced}/{cases} forced at the root{}", first_bad.map(|b| format!("; unforced: {b}")).unwrap_or_default()))
    });
}

fn schema_set() -> Vec<Formula> {
    [
        "p | ~p",
        "~~p -> p",
        "(p -> q) | (q -> p)",
        "~p | ~~p",
        "((p -> q) -> p) -> p",
        "(all x1. (p | x1 =0 0)) -> (p | all x1. x1 =0 0)",
    ]
    .iter()
    .map(|t| l(t))
    .collect()
}

#[test]
fn criterion_02_monotonicity_and_bars() {
    report(2, "forcing monotonicity and path-bar property", secs(30), || {
        let props = vec!["p".to_string(), "q".to_string()];
        let (mut frames, mut checks, mut violations) = (0usize, 0usize, 0usize);
        for n in 1..=3 {
            for g in graphs(n) {
                for numbers in 1..=2 {
                    for frame in valuations(&g, &props, numbers) {
                        frames += 1;
                        let fo = Forcer::new(&frame, 0).unwrap();
                        let tree = explicit_tree(&frame, 4);
                        for phi in schema_set() {
                            let set = fo.eval(&phi, &mut Env::new()).unwrap();
                            for (u, next) in fo.tree.succ.iter().enumerate() {
                                for &v in next {
                                    checks += 1;
                                    violations += usize::from(set[u] && !set[v]);
                                }
                            }
                            let fix = tree.fixpoint_forcing(&phi, &mut Env::new()).unwrap();
                            let paths = tree.path_forcing(&phi, &mut Env::new()).unwrap();
                            checks += 1;
                            violations += usize::from(fix != paths);
                            for (child, parent) in tree.parent.iter().enumerate() {
                                if let Some(p) = parent {
                                    checks += 1;
                                    violations += usize::from(paths[*p] && !paths[child]);
                                }
                            }
                        }
                    }
                }
            }
        }
        (violations == 0, format!("{frames} frames, {checks} checks, {violations} violations"))
    });
}

#[test]
fn criterion_03_excluded_middle() {
    report(3, "LEM countermodel", secs(10), || {
        let lem = l("p | ~p");
        let fixture = lem_fixture();
        let at_fixture = Forcer::for_formula(&fixture, &lem).unwrap().force_root(&lem).unwrap();
        let found = countermodel_search(&lem, SearchBounds { max_states: 4, max_carrier: 2 }).unwrap();
        let size = found.as_ref().map(|(f, _)| f.states.len());
        let none = countermodel_search(&l("p -> p"), SearchBounds { max_states: 4, max_carrier: 2 }).unwrap();
        let ok = !at_fixture && size.is_some_and(|s| s <= 2) && none.is_none();
        (ok, format!("fixture forces LEM: {at_fixture}; refuting frame size {size:?}; p -> p refuted: {}", none.is_some()))
    });
}

#[test]
fn criterion_04_markov() {
    report(4, "MP reproduction", secs(10), || {
        let frame = mp_fixture();
        let x = Var::num(1);
        let psi = mp_psi(&Expr::Var(x));
        let mr1 = Formula::forall(x, Formula::or(psi.clone(), Formula::not(psi.clone())));
        let ex = Formula::exists(x, psi);
        let mr2 = Formula::not(Formula::not(ex.clone()));
        let fo = Forcer::for_formula(&frame, &mr1).unwrap();
        let v1 = fo.force_root(&mr1).unwrap();
        let v2 = fo.force_root(&mr2).unwrap();
        let v3 = fo.force_root(&ex).unwrap();
        let ok = v1 && v2 && !v3;
        (ok, format!("x in 0..{}: MR1 forced {v1} (want true), MR2 forced {v2} (want true), MR3 forced {v3} (want false)", frame.numbers - 1))
    });
}

#[test]
fn criterion_05_creating_subject() {
    report(5, "CS1-CS3", secs(60), || {
        let inner = ["p", "q", "~p", "p | q", "p -> q"].map(l);
        let (z, y) = (Var::num(8), Var::num(9));
        let mut axioms = Vec::new();
        for phi in &inner {
            for fam in [Family::CS1, Family::CS2, Family::CS3] {
                let parts = Parts { phi: Some(phi.clone()), z: Some(z), y: Some(y), ..Parts::default() };
                axioms.push(instantiate_schema(fam, &parts).unwrap());
            }
        }
        let (mut cases, mut failures) = (0usize, 0usize);
        let mut first = None;
        for frame in cs_frames(4, &["p", "q"], 5) {
            for a in &axioms {
                cases += 1;
                let ok = Forcer::for_formula(&frame, a).and_then(|fo| fo.force_root(a)).unwrap_or(false);
                if !ok {
                    failures += 1;
                    first.get_or_insert_with(|| a.to_string());
                }
            }
        }
        (failures == 0, format!("{cases} cases, {failures} failures{}", first.map(|f| format!("; first: {f}")).unwrap_or_default()))
    });
}

#[test]
fn criterion_06_model_lemmas() {
    report(6, "B_s lemma suite", secs(300), || {
        let mut parts = Vec::new();
        let mut ok = true;
        for depth in 2..=3 {
            let model = Model::new(TruncationParams::new(2, depth, 2).unwrap()).unwrap();
            for r in lemmas::run_all(&model).unwrap() {
                ok &= r.passed() && r.instances > 0;
                if !r.passed() {
                    parts.push(format!("D={depth} {}: {} of {} failed: {:?}", r.name, r.failed, r.instances, r.failures.first()));
                }
            }
            parts.push(format!("D={depth} done"));
        }
        (ok, parts.join("; "))
    });
}

#[test]
fn criterion_07_translation() {
    report(7, "translation equivalence", secs(120), || {
        let u = TypedUniverse::new(2, 2).unwrap();
        let w = FunctionalUniverse::companion(&u).unwrap();
        let e = Assignment::new();
        let formulas = corpus::ti_formulas(707, 2, 300);
        let (mut int_ok, mut star_ok, mut neg_ok) = (0, 0, 0);
        let mut first = None;
        for f in &formulas {
            let truth = eval_ti(&u, f, &e).unwrap();
            let t = interpret(f);
            star_ok += usize::from(eval_ti(&u, &t.star, &e).unwrap() == truth);
            neg_ok += usize::from(eval_ti(&u, &neg(f), &e).unwrap() == truth);
            let image = eval_slp(&w, &t.int, &Assignment::new());
            if image.as_ref() == Ok(&truth) {
                int_ok += 1;
            } else {
                first.get_or_insert_with(|| format!("{f}: TI {truth}, SLP {image:?}"));
            }
        }
        let n = formulas.len();
        let pct = |k: usize| 100.0 * k as f64 / n as f64;
        let ok = n >= 300 && int_ok == n && star_ok == n && neg_ok == n;
        (
            ok,
            format!(
                "{n} formulas, top = {}: int {:.1}%, star {:.1}%, neg {:.1}%{}",
                w.top,
                pct(int_ok),
                pct(star_ok),
                pct(neg_ok),
                first.map(|f| format!("; first disagreement {f}")).unwrap_or_default()
            ),
        )
    });
}

/// Exact value of a term, capped once at the end.
fn direct(t: &Expr, e: &Assignment<u64>) -> u128 {
    match t {
        Expr::Zero => 0,
        Expr::Var(v) => *e.get(v).unwrap() as u128,
        Expr::Succ(a) => direct(a, e).saturating_add(1),
        Expr::Plus(a, b) => direct(a, e).saturating_add(direct(b, e)),
        Expr::Times(a, b) => direct(a, e).saturating_mul(direct(b, e)),
        other => panic!("{other} is not arithmetic"),
    }
}

#[test]
fn criterion_08_tarski_clauses() {
    report(8, "Tarski clauses and arval", secs(60), || {
        let u = TypedUniverse::new(2, 2).unwrap();
        let empty = Assignment::new();
        let mut formulas = corpus::ti_formulas(808, 2, 500);
        let dedicated = [
            "_|_",
            "0 = S(0)",
            "all X1_1. all X1_2. (X1_1 =1 X1_2 -> X1_2 =1 X1_1)",
            "ex X1_1. 0 in0 X1_1",
            "all X2_1. ex X1_1. (X1_1 in1 X2_1 | ~X1_1 in1 X2_1)",
            "0 = 0 & ~S(0) = 0",
            "0 = S(0) | S(0) = S(0)",
            "0 = S(0) -> _|_",
            "all x1. (x1 + 0 = x1)",
            "ex x1. (x1 * x1 = S(0))",
        ];
        formulas.extend(dedicated.iter().map(|t| ti(t)));
        let mut agree = 0;
        for f in &formulas {
            agree += usize::from(tr(&u, &encode_formula(f), &empty) == eval_ti(&u, f, &empty));
        }
        let open = ti("x1 in0 X1_1 & X1_1 =1 X1_2 -> x1 in0 X1_2 & X2_1 = X2_1");
        let mut assigned = 0;
        for x1 in 0..2 {
            for a in 0..4 {
                for b in 0..4 {
                    let e = Assignment::new()
                        .with(Var::num(1), x1)
                        .with(Var::set(1, 1), a)
                        .with(Var::set(1, 2), b)
                        .with(Var::set(2, 1), 5);
                    assigned += 1;
                    agree += usize::from(tr(&u, &encode_formula(&open), &e) == eval_ti(&u, &open, &e));
                }
            }
        }
        let terms = corpus::arith_terms(809, 200);
        let mut r = corpus::rng(810);
        let mut terms_ok = 0;
        for t in &terms {
            use rand::Rng;
            let e = (1..=3).fold(Assignment::new(), |e, i| e.with(Var::num(i), r.gen_range(0..5)));
            let a = Arith { cap: 4 };
            let want = direct(t, &e).min(4) as u64;
            terms_ok += usize::from(arval(&encode_expr(t), &e, a) == Ok(want));
        }
        let total = formulas.len() + assigned;
        let ok = agree == total && terms_ok == terms.len();
        (ok, format!("tr = eval_ti on {agree}/{total}; arval on {terms_ok}/{} terms", terms.len()))
    });
}

#[test]
fn criterion_09_codings() {
    report(9, "codings and Goedel round trip", secs(30), || {
        let u = TypedUniverse::new(2, 2).unwrap();
        let c = Coder::default();
        let (mut checks, mut bad) = (0usize, 0usize);
        for k in 0..=2 {
            let objs: Vec<Obj> = (0..u.size(k)).map(|x| Obj::from_universe(&u, k, x)).collect();
            let mut pairs = BTreeSet::new();
            let mut seqs = BTreeSet::new();
            for x in &objs {
                for y in &objs {
                    let p = c.pair(k, x, y).unwrap();
                    checks += 3;
                    bad += usize::from(p.level() != k);
                    bad += usize::from(c.unpair(k, &p).ok() != Some((x.clone(), y.clone())));
                    bad += usize::from(!pairs.insert(p));
                    for len in 0..=3 {
                        let xs: Vec<Obj> = [x, y, x].iter().take(len).map(|o| (*o).clone()).collect();
                        let s = c.seq(k, &xs).unwrap();
                        checks += 3;
                        bad += usize::from(s.level() != k);
                        bad += usize::from(c.unseq(k, &s).ok().as_ref() != Some(&xs));
                        if len == 2 {
                            bad += usize::from(!seqs.insert(s));
                        }
                    }
                }
            }
        }
        let asts = corpus::asts(909, 1000);
        let mut round = 0;
        for f in &asts {
            round += usize::from(decode_formula(&encode_formula(f)).ok().as_ref() == Some(f));
        }
        let ok = bad == 0 && round == asts.len();
        (ok, format!("{checks} coding checks, {bad} failures; Goedel round trip {round}/{}", asts.len()))
    });
}

fn theory_for(family: Family) -> Option<Theory> {
    use Family::*;
    let id = match family {
        L1 | L2 | L3 | L4 | L5 | L6 | L7 | Equality => TheoryId::L,
        CS1 | CS2 | CS3 => TheoryId::LP,
        LL1 | LL2 | LL3 | C1 | C2 | BI => TheoryId::SLP,
        TI1 | TI2 | TI3 | TI4 | Compr | Ext => TheoryId::TI,
        KS | WC | MP | CT => return None,
    };
    Some(Theory::new(id, 3))
}

fn recognised(family: Family, f: &Formula) -> bool {
    let direct = match_schema(family, f).is_some();
    match theory_for(family) {
        Some(th) => direct && matches!(is_axiom(&th, f), Ok(Some(id)) if id.family == family),
        None => direct,
    }
}

#[test]
fn criterion_10_schema_recognisers() {
    report(10, "schema recognizers", secs(60), || {
        let (mut pos, mut tp) = (0usize, 0usize);
        let mut missed = Vec::new();
        for fam in Family::ALL {
            let cases = corpus::schema_positives(1010, fam, 10);
            if cases.len() < 10 {
                missed.push(format!("{fam}: only {} instances", cases.len()));
            }
            for c in cases {
                pos += 1;
                if recognised(fam, &c.formula) {
                    tp += 1;
                } else if missed.len() < 3 {
                    missed.push(format!("{fam} rejected {}", c.formula));
                }
            }
        }
        let negatives = corpus::schema_negatives(1011, 10);
        let mut kinds = BTreeSet::new();
        let mut fp = 0;
        for c in &negatives {
            kinds.insert(c.violation.unwrap());
            let accepted = match_schema(c.family, &c.formula).is_some()
                || theory_for(c.family).is_some_and(|th| matches!(is_axiom(&th, &c.formula), Ok(Some(_))));
            if accepted {
                fp += 1;
                if missed.len() < 6 {
                    missed.push(format!("{} accepted {} ({:?})", c.family, c.formula, c.violation));
                }
            }
        }
        let ok = tp == pos && fp == 0 && missed.is_empty() && kinds.len() == 3;
        (
            ok,
            format!(
                "recall {tp}/{pos}; {fp} of {} negatives accepted over {} violation kinds{}",
                negatives.len(),
                kinds.len(),
                if missed.is_empty() { String::new() } else { format!("; {}", missed.join("; ")) }
            ),
        )
    });
}
