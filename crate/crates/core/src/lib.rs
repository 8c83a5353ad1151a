//! Exact computation with the rank-`l` Heisenberg vertex operator algebra, all
//! of its irreducible modules `M_alpha` (`alpha` in `Q(i)^l`), and the creative
//! intertwining operators between them.
//!
//! Everything is formal and exact: coefficients live in the group algebra
//! [`Scalar`] over the Gaussian rationals, and every identity is checked
//! coefficient by coefficient on a finite exponent window.

#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod cli;
pub mod error;
pub mod fock;
pub mod form;
pub mod intertwiner;
pub mod jacobi;
pub mod lattice;
pub mod scalars;
pub mod report;
pub mod series;

pub use error::{Error, Result};
pub use scalars::{binom, branch_phase, GaussRat, Scalar, Unit};
