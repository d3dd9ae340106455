//! Exact invariants of rational nilpotent Lie algebras and certified bounds on
//! the exponent of their systolic growth.

pub mod algebra;
pub mod bch;
pub mod bounds;
pub mod catalog;
pub mod constraints;
pub mod geometry;
pub mod lattice;
pub mod lp;
pub mod rational;
pub mod report;

pub use algebra::{LieAlgebra, RawAlgebra, Subspace};
pub use rational::{Q, Z};
