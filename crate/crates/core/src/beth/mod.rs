//! Beth frames presented as finite successor graphs, and forcing over them.
//!
//! A frame's tree is the unfolding of its successor graph from the root: the
//! nodes are the walks `root = s_0, s_1, ..., s_d`, and a walk is later than
//! each of its prefixes. The length of a walk is its number of steps `d`.

mod fixtures;
mod force;
mod format;
pub mod oracle;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::Var;

pub use fixtures::{
    cs_frames, cs_graphs, graphs, lem_fixture, mp_fixture, mp_psi, small_frames, upsets,
    valuations, MP_NUMBERS,
};
pub use force::{Env, Forcer, Unfolding};
pub use format::{parse_frame, print_frame};
pub use search::{countermodel_search, SearchBounds};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BethError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unbound variable {0}")]
    Unbound(Var),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("invalid walk: {0}")]
    Walk(String),
    #[error("unfolding exceeds {0} nodes")]
    Blowup(usize),
}

/// An element of one of a frame's carriers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Value {
    Num(u32),
    /// The constant functional `K^l`.
    K(u32),
    /// A declared token.
    Tok(usize),
    /// `N^l` applied to a functional.
    N(u32, Box<Value>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TokenKind {
    /// Per-state partial tables `n -> value`, persistent along successors.
    Table(Vec<std::collections::BTreeMap<u32, Value>>),
    /// A level-1 functional whose value at `k` is the digit of the state
    /// entered at step `k + 1` of the walk, defined once the walk is longer than `k`.
    Reader(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub name: String,
    pub level: u32,
    pub kind: TokenKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BethFrame {
    pub states: Vec<String>,
    pub root: usize,
    pub succ: Vec<Vec<usize>>,
    /// Propositional atoms true at each state.
    pub props: Vec<BTreeSet<String>>,
    /// The numeric carrier is `0..numbers`; arithmetic saturates at `numbers - 1`.
    pub numbers: u32,
    pub tokens: Vec<Token>,
}

/// A walk through the frame, as state indices starting at the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WalkNode(pub Vec<usize>);

impl WalkNode {
    pub fn root(frame: &BethFrame) -> WalkNode {
        WalkNode(vec![frame.root])
    }

    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn display(&self, frame: &BethFrame) -> String {
        self.0
            .iter()
            .map(|&s| frame.states[s].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses `r.r.t` against the frame's state names.
    pub fn parse(text: &str, frame: &BethFrame) -> Result<WalkNode, BethError> {
        let mut walk = Vec::new();
        for name in text.split('.') {
            let s = frame
                .state_index(name.trim())
                .ok_or_else(|| BethError::Walk(format!("unknown state '{name}'")))?;
            walk.push(s);
        }
        frame.check_walk(&walk)?;
        Ok(WalkNode(walk))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NoRoot,
    BadState(String),
    Monotonicity { from: String, to: String, atom: String },
    Persistence { from: String, to: String, token: String, arg: u32 },
    Incomplete { token: String, arg: u32 },
    BadValue { token: String, msg: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoRoot => write!(f, "no root"),
            Violation::BadState(m) => write!(f, "bad state reference: {m}"),
            Violation::Monotonicity { from, to, atom } => {
                write!(f, "{atom} holds at {from} but not at its successor {to}")
            }
            Violation::Persistence { from, to, token, arg } => {
                write!(f, "{token}({arg}) at {from} is lost or changed at {to}")
            }
            Violation::Incomplete { token, arg } => {
                write!(f, "{token}({arg}) stays undefined along some path")
            }
            Violation::BadValue { token, msg } => write!(f, "{token}: {msg}"),
        }
    }
}

impl BethFrame {
    /// A frame with the given states and no atoms, tokens or edges.
    pub fn new(states: &[&str]) -> BethFrame {
        BethFrame {
            states: states.iter().map(|s| s.to_string()).collect(),
            root: 0,
            succ: vec![Vec::new(); states.len()],
            props: vec![BTreeSet::new(); states.len()],
            numbers: 1,
            tokens: Vec::new(),
        }
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn token_index(&self, name: &str) -> Option<usize> {
        self.tokens.iter().position(|t| t.name == name)
    }

    pub fn has_readers(&self) -> bool {
        self.tokens
            .iter()
            .any(|t| matches!(t.kind, TokenKind::Reader(_)))
    }

    pub fn check_walk(&self, walk: &[usize]) -> Result<(), BethError> {
        if walk.first() != Some(&self.root) {
            return Err(BethError::Walk("walks start at the root".into()));
        }
        for w in walk.windows(2) {
            if !self.succ[w[0]].contains(&w[1]) {
                return Err(BethError::Walk(format!(
                    "{} is not a successor of {}",
                    self.states[w[1]], self.states[w[0]]
                )));
            }
        }
        Ok(())
    }

    /// States reachable from the root.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.states.len()];
        let mut stack = vec![self.root];
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s], true) {
                continue;
            }
            stack.extend(self.succ[s].iter().copied());
        }
        seen
    }

    pub fn render_value(&self, v: &Value) -> String {
        match v {
            Value::Num(n) => n.to_string(),
            Value::K(l) => format!("K{l}"),
            Value::Tok(i) => self.tokens[*i].name.clone(),
            Value::N(l, inner) => format!("N{l}({})", self.render_value(inner)),
        }
    }

    /// Checks monotonicity of atoms, persistence and completeness of tables.
    pub fn validate(&self) -> Vec<Violation> {
        let n = self.states.len();
        if n == 0 || self.root >= n {
            return vec![Violation::NoRoot];
        }
        let mut out = Vec::new();
        if self.succ.len() != n || self.props.len() != n {
            out.push(Violation::BadState("successor or atom lists do not match the states".into()));
            return out;
        }
        for (s, next) in self.succ.iter().enumerate() {
            for &t in next {
                if t >= n {
                    out.push(Violation::BadState(format!("{} -> #{t}", self.states[s])));
                    continue;
                }
                for p in self.props[s].difference(&self.props[t]) {
                    out.push(Violation::Monotonicity {
                        from: self.states[s].clone(),
                        to: self.states[t].clone(),
                        atom: p.clone(),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for tok in &self.tokens {
            match &tok.kind {
                TokenKind::Reader(digits) => {
                    if tok.level != 1 {
                        out.push(Violation::BadValue {
                            token: tok.name.clone(),
                            msg: "readers are level-1 functionals".into(),
                        });
                    }
                    if digits.len() != n {
                        out.push(Violation::BadValue {
                            token: tok.name.clone(),
                            msg: "reader needs one digit per state".into(),
                        });
                    }
                }
                TokenKind::Table(rows) => {
                    if rows.len() != n {
                        out.push(Violation::BadValue {
                            token: tok.name.clone(),
                            msg: "table needs one row per state".into(),
                        });
                        continue;
                    }
                    for (s, next) in self.succ.iter().enumerate() {
                        for &t in next {
                            for (arg, v) in &rows[s] {
                                if rows[t].get(arg) != Some(v) {
                                    out.push(Violation::Persistence {
                                        from: self.states[s].clone(),
                                        to: self.states[t].clone(),
                                        token: tok.name.clone(),
                                        arg: *arg,
                                    });
                                }
                            }
                        }
                    }
                    for arg in 0..self.numbers {
                        let defined: Vec<bool> = rows.iter().map(|r| r.contains_key(&arg)).collect();
                        if !self.barred(&defined)[self.root] {
                            out.push(Violation::Incomplete { token: tok.name.clone(), arg });
                        }
                    }
                }
            }
        }
        out
    }

    /// States from which every maximal path meets `base`.
    pub(crate) fn barred(&self, base: &[bool]) -> Vec<bool> {
        force::least_bar(&self.succ, base)
    }
}
