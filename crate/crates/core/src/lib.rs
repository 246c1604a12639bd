//! Zeta functions of varieties over small finite fields, their p-adic slope
//! factors, truncated Witt vectors, and executable point-counting congruences.
pub mod arith;
pub mod checkers;
pub mod expr;
pub mod ff;
pub mod geom;
pub mod linalg;
pub mod mpoly;
pub mod padic;
pub mod upoly;
pub mod witt;
pub mod zeta;
