//! Exact quantifier elimination and parametric solution systems for
//! existential formulas with equational constraints, by cylindrical
//! algebraic decomposition.

pub mod algnum;
pub mod cad;
pub mod formula;
pub mod poly;
pub mod projection;
pub mod realroot;
