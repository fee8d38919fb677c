use super::fixtures::{graphs, valuations};
use super::{BethError, BethFrame, Forcer, WalkNode};
use crate::syntax::{closure, Formula, VarKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_states: usize,
    /// Size of the numeric carrier tried when the formula quantifies over numbers.
    pub max_carrier: u32,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_states: 4, max_carrier: 2 }
    }
}

fn uses_numbers(f: &Formula) -> bool {
    match f {
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            v.kind == VarKind::Number || uses_numbers(b)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            uses_numbers(a) || uses_numbers(b)
        }
        Formula::Proves(..) => true,
        _ => false,
    }
}

/// The first frame, in order of size, whose root does not force the closure
/// of `phi`. Frames range over all successor graphs up to isomorphism with
/// monotone valuations of the atoms of `phi`.
pub fn countermodel_search(
    phi: &Formula,
    bounds: SearchBounds,
) -> Result<Option<(BethFrame, WalkNode)>, BethError> {
    let target = closure(phi);
    let props = target.props();
    let sizes: Vec<u32> = if uses_numbers(&target) {
        (1..=bounds.max_carrier.max(1)).collect()
    } else {
        vec![1]
    };
    for n in 1..=bounds.max_states {
        for g in graphs(n) {
            for &numbers in &sizes {
                for frame in valuations(&g, &props, numbers) {
                    let forcer = Forcer::for_formula(&frame, &target)?;
                    if !forcer.force_root(&target)? {
                        let walk = WalkNode::root(&frame);
                        return Ok(Some((frame, walk)));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Language};

    fn f(t: &str) -> Formula {
        parse_formula(t, Language::L, 1).unwrap()
    }

    #[test]
    fn lem_needs_two_states() {
        let (frame, _) = countermodel_search(&f("p | ~p"), SearchBounds::default())
            .unwrap()
            .unwrap();
        assert_eq!(frame.states.len(), 2);
    }

    #[test]
    fn identity_has_no_countermodel() {
        let b = SearchBounds { max_states: 3, max_carrier: 2 };
        assert!(countermodel_search(&f("p -> p"), b).unwrap().is_none());
    }

    #[test]
    fn double_negation_elimination_fails() {
        assert!(countermodel_search(&f("~~p -> p"), SearchBounds::default())
            .unwrap()
            .is_some());
    }
}
