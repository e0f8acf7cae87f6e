//! Exact and numeric engine for two-dimensional conformal field theory.
//!
//! The crate is organised around a handful of exactly-solvable systems:
//!
//! - [`qseries`]: sparse q-expansions with rational exponents, Dedekind eta,
//!   Jacobi theta functions, and the partition-number generating function.
//! - [`virasoro`]: Verma modules over the Virasoro algebra with exact rational
//!   coefficients, Gram matrices, the Kac determinant, null vectors, and
//!   irreducible characters of the minimal models.
//! - [`fock`]: free boson and free fermion Fock spaces with the Virasoro
//!   generators realised as graded sparse operators, plus a commutator-defect
//!   checker that certifies the central charges c = 1 and c = 1/2.
//! - [`torus`]: torus partition functions (compactified boson with exact
//!   T-duality, Majorana and Dirac fermions, minimal models) and their modular
//!   behaviour.
//! - [`correlators`]: exact free-field correlation functions on the plane
//!   (vertex operators, fermions, Pfaffians, the Ising spin four-point
//!   function) and conformal n-point ansatz prefactors.
//! - [`fusion`]: affine su(2)_k fusion via the Verlinde formula and minimal
//!   model fusion generated by Phi(1,2) and Phi(2,1).
//! - [`gromov_witten`]: rational curve counts in the projective plane, the
//!   quantum cohomology of P^1 and P^2, and a WDVV associativity checker.
//!
//! Everything algebraic is done over `BigRational` and is exact; evaluation
//! maps into `Complex64` only at the boundary. Numeric routines take explicit
//! tolerances and report how they truncated.

pub mod correlators;
pub mod error;
pub mod exact_linalg;
pub mod fock;
pub mod fusion;
pub mod gromov_witten;
mod partitions;
pub mod qseries;
pub mod torus;
pub mod virasoro;

pub use error::{CftError, Result};
pub use qseries::{FractionalQSeries, TorusPoint};

pub use num_bigint::{BigInt, BigUint};
pub use num_complex::Complex64;
pub use num_rational::BigRational;
