//! Exact computation of global and local Gröbner fans for ideals in polynomial
//! rings and rings of differential operators over the rationals.

pub mod algebra;
pub mod division;
pub mod fan;
pub mod groebner;
pub mod linalg;
pub mod local;
pub mod order;
pub mod polyhedra;
pub mod problem;
pub mod scalar;
pub(crate) mod sorted;
