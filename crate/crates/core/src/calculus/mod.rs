//! Theories, axiom schemas and natural-deduction proof checking.

mod format;
mod proof;
mod schema;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Language, SyntaxError, Var};

pub use format::{parse_proof, print_proof};
pub use proof::{check_proof, Checked, ProofTree, Rule, Sequent};
pub use schema::{instantiate_schema, instantiate_unchecked, is_axiom, match_schema, AxiomId, Parts};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalcError {
    #[error("node {node}: {reason}")]
    Rule { node: String, reason: String },
    #[error("node {node}: eigenvariable {var} is not fresh")]
    Eigenvariable { node: String, var: Var },
    #[error("node {node}: {reason}")]
    Axiom { node: String, reason: String },
    #[error("side condition violated: {0}")]
    SideCondition(String),
    #[error("missing part '{0}' for this schema")]
    MissingPart(&'static str),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TheoryId {
    L,
    LP,
    SLP,
    TI,
    /// TI without extensionality.
    TIstar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Theory {
    pub id: TheoryId,
    pub s: u32,
}

impl Theory {
    pub fn new(id: TheoryId, s: u32) -> Theory {
        Theory { id, s }
    }

    pub fn language(&self) -> Language {
        match self.id {
            TheoryId::L => Language::L,
            TheoryId::LP => Language::LP,
            TheoryId::SLP => Language::SLP,
            TheoryId::TI | TheoryId::TIstar => Language::TI,
        }
    }

    /// Classical theories admit double-negation elimination.
    pub fn is_classical(&self) -> bool {
        matches!(self.id, TheoryId::TI | TheoryId::TIstar)
    }

    pub fn admits(&self, family: Family) -> bool {
        use Family::*;
        match self.id {
            TheoryId::L => matches!(family, L1 | L2 | L3 | L4 | L5 | L6 | L7 | Equality),
            TheoryId::LP => {
                matches!(family, L1 | L2 | L3 | L4 | L5 | L6 | L7 | Equality | CS1 | CS2 | CS3)
            }
            TheoryId::SLP => matches!(
                family,
                L1 | L2 | L3 | L4 | L5 | L6 | L7 | Equality | CS1 | CS2 | CS3 | LL1 | LL2 | LL3 | C1 | C2 | BI
            ),
            TheoryId::TI => matches!(family, TI1 | TI2 | TI3 | TI4 | Compr | Ext | Equality),
            TheoryId::TIstar => matches!(family, TI1 | TI2 | TI3 | TI4 | Compr | Equality),
        }
    }
}

impl FromStr for TheoryId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "L" => TheoryId::L,
            "LP" => TheoryId::LP,
            "SLP" => TheoryId::SLP,
            "TI" => TheoryId::TI,
            "TIstar" | "TI*" => TheoryId::TIstar,
            _ => return Err(format!("unknown theory '{s}'")),
        })
    }
}

impl fmt::Display for TheoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TheoryId::L => "L",
            TheoryId::LP => "LP",
            TheoryId::SLP => "SLP",
            TheoryId::TI => "TI",
            TheoryId::TIstar => "TIstar",
        };
        write!(f, "{s}")
    }
}

/// Axiom families. `L4` and `TI4` are the induction schemas; `Compr` and
/// `Ext` are comprehension and extensionality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    L1,
    L2,
    L3,
    L4,
    L5,
    L6,
    L7,
    CS1,
    CS2,
    CS3,
    LL1,
    LL2,
    LL3,
    C1,
    C2,
    KS,
    WC,
    BI,
    MP,
    CT,
    TI1,
    TI2,
    TI3,
    TI4,
    Compr,
    Ext,
    Equality,
}

impl Family {
    pub const ALL: [Family; 27] = [
        Family::L1,
        Family::L2,
        Family::L3,
        Family::L4,
        Family::L5,
        Family::L6,
        Family::L7,
        Family::CS1,
        Family::CS2,
        Family::CS3,
        Family::LL1,
        Family::LL2,
        Family::LL3,
        Family::C1,
        Family::C2,
        Family::KS,
        Family::WC,
        Family::BI,
        Family::MP,
        Family::CT,
        Family::TI1,
        Family::TI2,
        Family::TI3,
        Family::TI4,
        Family::Compr,
        Family::Ext,
        Family::Equality,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Induction" => return Ok(Family::L4),
            "TIInduction" => return Ok(Family::TI4),
            _ => {}
        }
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| format!("unknown axiom family '{s}'"))
    }
}
