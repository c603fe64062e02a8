//! Exact invariants of q-matroids and rank-metric codes.
//!
//! The crate computes Whitney functions, characteristic and Tutte polynomials,
//! higher weight enumerators and support distributions of rank-metric codes,
//! projectivizations to classical matroids, and decides weak isomorphism of
//! q-matroids through their lattices of flats. All arithmetic is exact.

pub mod descriptor;
pub mod error;
pub mod gf;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod projectivization;
pub mod qmatroid;
pub mod rmcode;
pub mod weakiso;

pub use error::{Error, ErrorClass, Result};
pub use gf::{Field, FieldElement, FieldSpec};
pub use lattice::{LatticeIndex, SubspaceId};
pub use linalg::Mat;
pub use poly::{BiPoly, Outside, SubstFamily};
pub use qmatroid::{Oracle, QMatroid, WhitneyTable};
pub use rmcode::{HigherDistributions, IntMat, InvariantMatrices, RankMetricCode};
