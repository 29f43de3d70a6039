//! Finite-truncation numerics for harmonic analysis on the infinite-dimensional
//! unitary group: Young-tableau combinatorics, Schur polynomials, Haar sampling
//! and the Livšic descent, a truncated symmetric Fock space with its Hardy-side
//! closed forms, Weyl systems, and the Gaussian semigroup.

pub mod error;
pub mod fock;
pub mod hardy_wiener;
pub mod hs_algebra;
pub mod mc_harness;
pub mod partitions;
pub mod quadrature;
pub mod schrodinger;
pub mod schur;
pub mod unitary;
pub mod weyl_heisenberg;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
