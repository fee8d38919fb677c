//! Beth forcing, natural-deduction calculi and the functional model.

pub mod beth;
pub mod calculus;
pub mod classical;
pub mod corpus;
pub mod model;
pub mod syntax;
pub mod translate;
