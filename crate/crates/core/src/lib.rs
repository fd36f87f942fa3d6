//! Exact finite-dimensional algebras, bimodules and Morita contexts, with
//! machinery to check the classical Morita equivalence theorems (strict
//! contexts, Kato-Müller quotient equivalence, closed objects, I-projective
//! modules and group-graded variants) on explicit module catalogs.

#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod context;
pub mod equivalence;
pub mod error;
pub mod exactlin;
pub mod graded;
pub mod module;
pub mod torsion;
pub mod validation;

pub use error::{Error, Result};
