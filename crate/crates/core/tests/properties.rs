use beth_forge::beth::{Env, Forcer};
use beth_forge::calculus::{check_proof, match_schema, parse_proof, print_proof, Family, ProofTree, Theory, TheoryId};
use beth_forge::classical::{arval, eval_ti, tr, Arith, Assignment, TypedUniverse};
use beth_forge::corpus;
use beth_forge::syntax::godel::{decode_formula, encode_expr, encode_formula};
use beth_forge::syntax::{alpha_eq, closure, parse_formula, Expr, Language, Var};
use beth_forge::translate::neg;
use proptest::prelude::*;

fn swap_first_binary(p: &mut ProofTree) -> bool {
    if p.premises.len() >= 2 && !alpha_eq(p.premises[0].conclusion(), p.premises[1].conclusion()) {
        p.premises.swap(0, 1);
        return true;
    }
    p.premises.iter_mut().any(swap_first_binary)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn godel_codes_round_trip(seed in any::<u64>()) {
        for f in corpus::asts(seed, 10) {
            prop_assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
        }
    }

    #[test]
    fn printed_formulas_reparse(seed in any::<u64>()) {
        for f in corpus::asts(seed, 10) {
            let back = parse_formula(&f.to_string(), Language::SLP, 2).unwrap();
            prop_assert!(alpha_eq(&back, &f), "{} reparsed as {}", f, back);
        }
    }

    #[test]
    fn tr_agrees_with_direct_evaluation(seed in any::<u64>()) {
        let u = TypedUniverse::new(2, 2).unwrap();
        let e = Assignment::new();
        for f in corpus::ti_formulas(seed, 2, 10) {
            prop_assert_eq!(tr(&u, &encode_formula(&f), &e), eval_ti(&u, &f, &e));
        }
    }

    #[test]
    fn negative_translation_is_classically_transparent(seed in any::<u64>()) {
        let u = TypedUniverse::new(2, 2).unwrap();
        let e = Assignment::new();
        for f in corpus::ti_formulas(seed, 2, 10) {
            prop_assert_eq!(eval_ti(&u, &neg(&f), &e), eval_ti(&u, &f, &e));
        }
    }

    #[test]
    fn arval_is_a_homomorphism(seed in any::<u64>(), x in 0u64..4, y in 0u64..4, cap in 1u64..6) {
        let terms = corpus::arith_terms(seed, 2);
        let (a, b) = (&terms[0], &terms[1]);
        let e = Assignment::new().with(Var::num(1), x).with(Var::num(2), y).with(Var::num(3), x + y);
        let ar = Arith { cap };
        let va = arval(&encode_expr(a), &e, ar).unwrap();
        let vb = arval(&encode_expr(b), &e, ar).unwrap();
        let sum = Expr::plus(a.clone(), b.clone());
        let prod = Expr::times(a.clone(), b.clone());
        prop_assert_eq!(arval(&encode_expr(&sum), &e, ar).unwrap(), ar.add(va, vb));
        prop_assert_eq!(arval(&encode_expr(&prod), &e, ar).unwrap(), ar.mul(va, vb));
        prop_assert_eq!(arval(&encode_expr(&Expr::succ(a.clone())), &e, ar).unwrap(), ar.succ(va));
    }

    #[test]
    fn proofs_check_in_every_extension(seed in any::<u64>()) {
        for p in corpus::proofs(seed, 4) {
            for id in [TheoryId::L, TheoryId::LP, TheoryId::SLP] {
                prop_assert!(check_proof(&Theory::new(id, 2), &p).is_ok());
            }
        }
    }

    #[test]
    fn proof_files_round_trip(seed in any::<u64>()) {
        let th = Theory::new(TheoryId::L, 1);
        for p in corpus::proofs(seed, 4) {
            let back = parse_proof(&print_proof(&p), &th).unwrap();
            let c = check_proof(&th, &back).unwrap();
            prop_assert!(alpha_eq(&c.sequent.conclusion, p.conclusion()));
        }
    }

    #[test]
    fn swapped_premises_are_rejected(seed in any::<u64>()) {
        let th = Theory::new(TheoryId::L, 1);
        for mut p in corpus::proofs(seed, 4) {
            if swap_first_binary(&mut p) {
                prop_assert!(check_proof(&th, &p).is_err());
            }
        }
    }

    #[test]
    fn forcing_is_monotone(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let frame = corpus::random_frame(&mut r, &["p", "q", "r"], 4, 3);
        for _ in 0..5 {
            let phi = closure(&corpus::random_l_formula(&mut r, 3));
            let fo = Forcer::for_formula(&frame, &phi).unwrap();
            let set = fo.eval(&phi, &mut Env::new()).unwrap();
            for (u, next) in fo.tree.succ.iter().enumerate() {
                for &v in next {
                    prop_assert!(!set[u] || set[v]);
                }
            }
        }
    }

    #[test]
    fn instances_are_recognised(seed in any::<u64>()) {
        for fam in Family::ALL {
            for c in corpus::schema_positives(seed, fam, 2) {
                prop_assert!(match_schema(fam, &c.formula).is_some(), "{} {}", fam, c.formula);
            }
        }
    }
}
