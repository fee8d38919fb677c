use std::collections::BTreeSet;

use itertools::Itertools;

use super::{BethFrame, Token, TokenKind};
use crate::syntax::{sugar, Expr, Formula, Var};

/// Root `r` loops on itself or steps to the leaf `t`, where `p` holds.
pub fn lem_fixture() -> BethFrame {
    let mut f = BethFrame::new(&["r", "t"]);
    f.succ[0] = vec![0, 1];
    f.props[1].insert("p".into());
    f
}

/// Size of the numeric carrier of [`mp_fixture`].
pub const MP_NUMBERS: u32 = 7;

/// Root `z` loops or steps to `o`, which loops forever. The level-1 symbol
/// `f` reads the walk: `f(k)` is 0 if step `k + 1` stays at `z` and 1 if it
/// is at `o`, and is undefined until the walk has more than `k` steps.
pub fn mp_fixture() -> BethFrame {
    let mut f = BethFrame::new(&["z", "o"]);
    f.succ[0] = vec![0, 1];
    f.succ[1] = vec![1];
    f.numbers = MP_NUMBERS;
    f.tokens.push(Token {
        name: "f".into(),
        level: 1,
        kind: TokenKind::Reader(vec![0, 1]),
    });
    f
}

/// `psi(x) = ex k. (k < x & f(k) > 0)`.
pub fn mp_psi(x: &Expr) -> Formula {
    let k = Var::num(90);
    let fk = Expr::ap(1, Expr::Sym("f".into(), 1), Expr::Var(k));
    Formula::exists(
        k,
        Formula::and(sugar::lt(&Expr::Var(k), x), sugar::positive(&fk)),
    )
}

fn mask_edges(n: usize, mask: u32) -> Vec<Vec<usize>> {
    (0..n)
        .map(|i| (0..n).filter(|j| mask & (1 << (i * n + j)) != 0).collect())
        .collect()
}

fn permute(n: usize, mask: u32, perm: &[usize]) -> u32 {
    let mut out = 0;
    for i in 0..n {
        for j in 0..n {
            if mask & (1 << (i * n + j)) != 0 {
                out |= 1 << (perm[i] * n + perm[j]);
            }
        }
    }
    out
}

fn all_reachable(succ: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; succ.len()];
    let mut stack = vec![0];
    while let Some(s) = stack.pop() {
        if !std::mem::replace(&mut seen[s], true) {
            stack.extend(succ[s].iter().copied());
        }
    }
    seen.into_iter().all(|b| b)
}

/// Successor graphs on `n` states rooted at 0 with every state reachable,
/// one per isomorphism class.
pub fn graphs(n: usize) -> Vec<Vec<Vec<usize>>> {
    assert!((1..=4).contains(&n), "graph enumeration supports 1..=4 states");
    let perms: Vec<Vec<usize>> = (1..n)
        .permutations(n - 1)
        .map(|p| std::iter::once(0).chain(p).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << (n * n)) {
        if perms.iter().any(|p| permute(n, mask, p) < mask) {
            continue;
        }
        let succ = mask_edges(n, mask);
        if all_reachable(&succ) {
            out.push(succ);
        }
    }
    out
}

/// Acyclic graphs on `n` states with edges from lower to higher index, all
/// states reachable from 0, and every sink closed by a self-loop.
pub fn cs_graphs(n: usize) -> Vec<Vec<Vec<usize>>> {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let mut out = Vec::new();
    for mask in 0..(1u32 << pairs.len()) {
        let mut succ = vec![Vec::new(); n];
        for (b, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << b) != 0 {
                succ[i].push(j);
            }
        }
        if !all_reachable(&succ) {
            continue;
        }
        for (i, next) in succ.iter_mut().enumerate() {
            if next.is_empty() {
                next.push(i);
            }
        }
        out.push(succ);
    }
    out
}

/// Sets of states closed under successors.
pub fn upsets(succ: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = succ.len();
    (0..(1u32 << n))
        .map(|m| (0..n).map(|i| m & (1 << i) != 0).collect::<Vec<bool>>())
        .filter(|set| {
            (0..n).all(|i| !set[i] || succ[i].iter().all(|&j| set[j]))
        })
        .collect()
}

/// Every frame over `succ` with a monotone valuation of `props`.
pub fn valuations(succ: &[Vec<usize>], props: &[String], numbers: u32) -> Vec<BethFrame> {
    let n = succ.len();
    let names: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let ups = upsets(succ);
    let mut out = Vec::new();
    let choices = std::iter::repeat(0..ups.len()).take(props.len()).multi_cartesian_product();
    let choices: Vec<Vec<usize>> = if props.is_empty() { vec![vec![]] } else { choices.collect() };
    for pick in choices {
        let mut frame = BethFrame {
            states: names.clone(),
            root: 0,
            succ: succ.to_vec(),
            props: vec![BTreeSet::new(); n],
            numbers,
            tokens: Vec::new(),
        };
        for (p, &u) in props.iter().zip(&pick) {
            for (s, &holds) in ups[u].iter().enumerate() {
                if holds {
                    frame.props[s].insert(p.clone());
                }
            }
        }
        out.push(frame);
    }
    out
}

/// All frames with at most `max_states` states (up to isomorphism of the
/// graph) and monotone valuations of `props`.
pub fn small_frames(max_states: usize, props: &[&str]) -> Vec<BethFrame> {
    let props: Vec<String> = props.iter().map(|p| p.to_string()).collect();
    let mut out = Vec::new();
    for n in 1..=max_states {
        for g in graphs(n) {
            out.extend(valuations(&g, &props, 1));
        }
    }
    out
}

/// The frames on which the creating-subject axioms are checked: acyclic
/// graphs with looping sinks on at most `max_states` states, numbers `0..z_count`.
pub fn cs_frames(max_states: usize, props: &[&str], z_count: u32) -> Vec<BethFrame> {
    let props: Vec<String> = props.iter().map(|p| p.to_string()).collect();
    let mut out = Vec::new();
    for n in 1..=max_states {
        for g in cs_graphs(n) {
            out.extend(valuations(&g, &props, z_count));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_counts() {
        assert_eq!(graphs(1).len(), 2);
        // Two states: isomorphism classes with state 1 reachable.
        assert!(graphs(2).iter().all(|g| g[0].contains(&1)));
        assert_eq!(graphs(2).len(), 8);
    }

    #[test]
    fn upsets_respect_edges() {
        let succ = vec![vec![0, 1], vec![]];
        let u = upsets(&succ);
        assert_eq!(u, vec![vec![false, false], vec![false, true], vec![true, true]]);
    }

    #[test]
    fn markov_fixture_verdicts() {
        use crate::beth::Forcer;
        let frame = mp_fixture();
        let x = Var::num(1);
        let psi = mp_psi(&Expr::Var(x));
        let mr1 = Formula::forall(x, Formula::or(psi.clone(), Formula::not(psi.clone())));
        let ex = Formula::exists(x, psi);
        let mr2 = Formula::not(Formula::not(ex.clone()));
        let fo = Forcer::for_formula(&frame, &mr1).unwrap();
        assert!(fo.force_root(&mr1).unwrap());
        assert!(!fo.force_root(&ex).unwrap());
        // With x bounded by the carrier, a walk that first reaches o after
        // more steps than the carrier holds never witnesses psi, so the double
        // negation is forced only along walks that are still short enough.
        assert!(!fo.force_root(&mr2).unwrap());
        let early = crate::beth::WalkNode(vec![0, 1]);
        assert!(fo.force(&early, &mr2, &Default::default()).unwrap());
    }

    #[test]
    fn fixtures_are_valid() {
        assert!(lem_fixture().validate().is_empty());
        assert!(mp_fixture().validate().is_empty());
        for f in cs_frames(3, &["p"], 3) {
            assert!(f.validate().is_empty());
            assert!(f.succ.iter().all(|s| !s.is_empty()));
        }
    }
}
