//! Geometry and arithmetic of double covers of P3 branched along eight
//! rational planes: incidence combinatorics of the arrangement, Hodge
//! invariants of the resolved cover, point counts over prime fields, and
//! matching of L-series coefficients against weight-4 newforms.

pub mod arithmetic;
pub mod arrangement;
pub mod catalog;
pub mod deformations;
pub mod error;
pub mod fp;
pub mod invariants;
pub mod matrix;
pub mod modularity;
pub mod monomial;
pub mod rat;
pub mod report;
pub mod series;
pub mod subspace;

pub use error::{Error, Result};
