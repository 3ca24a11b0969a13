//! Covariant representations of finite-dimensional C*-correspondences.
//!
//! Correspondences over `⊕ Mat(d_b)`, interior tensor products with
//! representations, covariant representations with their tilde operators,
//! Wold-type decompositions, wandering subspaces, Cauchy duals, and product
//! systems over `ℤ_+^k`.

#![no_std]

extern crate alloc;

pub mod algebra;
pub mod correspondence;
pub mod covrep;
pub mod error;
pub mod examples;
pub mod linalg;
pub mod report;
pub mod spaces;
pub mod subspace;
pub mod product;
pub mod wold;

pub use algebra::{AlgebraElement, MatrixBlocksAlgebra, StarRepresentation};
pub use correspondence::{Correspondence, InteriorTensorSpace};
pub use error::{Error, Result};
pub use linalg::{Mat, C64};
pub use report::{Check, Report, ValidationReport};
