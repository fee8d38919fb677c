//! Classical finite semantics for TI and SLP, the typed pair and sequence
//! codings, and evaluators working on Gödel codes.

mod arith;
mod coding;
mod functional;
mod typed;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::syntax::{SyntaxError, Var};

pub use arith::{arval, tr};
pub use coding::{cantor_pair, cantor_unpair, crosscheck_assignment, lift, Coder, Divergence, Obj};
pub use functional::{eval_slp, set_to_functional, FVal, FunctionalUniverse};
pub use typed::{eval_ti, TypedUniverse};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    Unbound(Var),
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    #[error("decode error: {0}")]
    Decode(String),
    #[error("sort error: {0}")]
    Sort(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<SyntaxError> for EvalError {
    fn from(e: SyntaxError) -> Self {
        EvalError::Decode(e.to_string())
    }
}

/// Arithmetic on a finite initial segment, saturating at `cap`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arith {
    pub cap: u64,
}

impl Arith {
    pub fn succ(self, x: u64) -> u64 {
        x.saturating_add(1).min(self.cap)
    }

    pub fn add(self, x: u64, y: u64) -> u64 {
        x.saturating_add(y).min(self.cap)
    }

    pub fn mul(self, x: u64, y: u64) -> u64 {
        x.saturating_mul(y).min(self.cap)
    }
}

/// Values of variables; `with` is the update `Sub`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment<V> {
    map: BTreeMap<Var, V>,
}

impl<V> Default for Assignment<V> {
    fn default() -> Self {
        Assignment { map: BTreeMap::new() }
    }
}

impl<V: Clone> Assignment<V> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Var) -> Option<&V> {
        self.map.get(v)
    }

    pub fn set(&mut self, v: Var, value: V) {
        self.map.insert(v, value);
    }

    pub fn with(&self, v: Var, value: V) -> Self {
        let mut out = self.clone();
        out.set(v, value);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &V)> {
        self.map.iter()
    }
}

/// Variable bindings during evaluation: the assignment plus a stack of
/// quantifier bindings searched innermost first.
pub(crate) struct Scope<'a, V> {
    base: &'a Assignment<V>,
    stack: Vec<(Var, V)>,
}

impl<'a, V: Clone> Scope<'a, V> {
    pub(crate) fn new(base: &'a Assignment<V>) -> Self {
        Scope { base, stack: Vec::new() }
    }

    pub(crate) fn lookup(&self, v: &Var) -> Result<&V, EvalError> {
        self.stack
            .iter()
            .rev()
            .find(|(w, _)| w == v)
            .map(|(_, x)| x)
            .or_else(|| self.base.get(v))
            .ok_or(EvalError::Unbound(*v))
    }

    pub(crate) fn push(&mut self, v: Var, x: V) {
        self.stack.push((v, x));
    }

    pub(crate) fn pop(&mut self) {
        self.stack.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_arithmetic() {
        let a = Arith { cap: 2 };
        assert_eq!(a.succ(1), 2);
        assert_eq!(a.succ(2), 2);
        assert_eq!(a.add(1, 2), 2);
        assert_eq!(a.mul(2, 2), 2);
        assert_eq!(a.mul(0, 2), 0);
    }

    #[test]
    fn assignment_update() {
        let e = Assignment::new().with(Var::num(1), 0u64);
        let f = e.with(Var::num(1), 1);
        assert_eq!(e.get(&Var::num(1)), Some(&0));
        assert_eq!(f.get(&Var::num(1)), Some(&1));
    }
}
