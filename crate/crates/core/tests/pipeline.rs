use beth_forge::beth::{parse_frame, print_frame, Forcer, WalkNode};
use beth_forge::calculus::{check_proof, parse_proof, CalcError, ProofTree, Rule, Sequent, Theory, TheoryId};
use beth_forge::classical::{eval_slp, eval_ti, Assignment, FunctionalUniverse, TypedUniverse};
use beth_forge::model::{lemmas, print_table, parse_table, Model, TruncationParams};
use beth_forge::syntax::{parse_formula, Expr, Formula, Language, Var};
use beth_forge::translate::interpret;

const LASSO: &str = "\
# excluded middle fails at r
states r t
root r
succ r -> r t
atoms t: p
";

#[test]
fn frame_file_to_verdicts() {
    let frame = parse_frame(LASSO).unwrap();
    assert!(frame.validate().is_empty());
    let lem = parse_formula("p | ~p", Language::L, 1).unwrap();
    let fo = Forcer::for_formula(&frame, &lem).unwrap();
    assert!(!fo.force_root(&lem).unwrap());
    let at_t = WalkNode::parse("r.t", &frame).unwrap();
    assert!(fo.force(&at_t, &lem, &Default::default()).unwrap());
    assert_eq!(parse_frame(&print_frame(&frame)).unwrap(), frame);
}

#[test]
fn proof_file_is_checked() {
    let text = "\
a1: assume [] |- p => p
a2: impI [a1] |- p -> p
a3: axiom L1 [] |- all x1. ~S(x1) =0 0
a4: andI [a2, a3] |- (p -> p) & all x1. ~S(x1) =0 0
";
    let th = Theory::new(TheoryId::L, 1);
    let p = parse_proof(text, &th).unwrap();
    let c = check_proof(&th, &p).unwrap();
    assert!(c.sequent.context.is_empty());
    assert_eq!(c.axioms.len(), 1);
}

#[test]
fn eigenvariable_capture_is_rejected() {
    let x = Var::num(1);
    let a = Formula::eq(0, Expr::Var(x), Expr::Zero);
    let leaf = ProofTree::new("a", Rule::Assume, vec![], Sequent::new(vec![a.clone()], a.clone()));
    let gen = ProofTree::new("b", Rule::AllI(x), vec![leaf], Sequent::new(vec![a.clone()], Formula::forall(x, a)));
    let e = check_proof(&Theory::new(TheoryId::L, 1), &gen).unwrap_err();
    assert!(matches!(e, CalcError::Eigenvariable { .. }));
}

#[test]
fn classical_rule_needs_a_classical_theory() {
    let p = Formula::eq(0, Expr::Zero, Expr::Zero);
    let nn = Formula::not(Formula::not(p.clone()));
    let leaf = ProofTree::new("a", Rule::Assume, vec![], Sequent::new(vec![nn.clone()], nn.clone()));
    let dne = ProofTree::new("b", Rule::Dne, vec![leaf], Sequent::new(vec![nn], p));
    assert!(check_proof(&Theory::new(TheoryId::SLP, 1), &dne).is_err());
    assert!(check_proof(&Theory::new(TheoryId::TI, 1), &dne).unwrap().classical);
}

#[test]
fn interpretation_of_a_bounded_formula() {
    let f = parse_formula("all z0. (z0 in0 X1_1 -> z0 = 0)", Language::TI, 1).unwrap();
    let t = interpret(&f);
    let printed = t.int.to_string();
    let back = parse_formula(&printed, Language::SLP, 1).unwrap();
    assert_eq!(back.to_string(), printed);
    let u = TypedUniverse::new(1, 2).unwrap();
    let w = FunctionalUniverse::companion(&u).unwrap();
    let e = Assignment::new();
    assert_eq!(eval_ti(&u, &t.closed, &e).unwrap(), eval_slp(&w, &t.int, &Assignment::new()).unwrap());
}

#[test]
fn model_tables_and_suites() {
    let m = Model::new(TruncationParams::new(1, 2, 2).unwrap()).unwrap();
    let table = parse_table(&m, "level 1\n<> 0 -> 0\n<0> 1 -> 0\n<1> 1 -> 1\n").unwrap();
    assert_eq!(parse_table(&m, &print_table(&m, &table).unwrap()).unwrap(), table);
    for r in lemmas::run_all(&m).unwrap() {
        assert!(r.passed(), "{}: {:?}", r.name, r.failures);
    }
}
