//! Exact construction of Dirac-type equations in 1 + d dimensions (d even)
//! and of their discrete-symmetry intertwiners.
//!
//! All algebra runs over complex rationals. Floating point is used only by
//! [`spectra::density_evolve`] and the density-state helpers around it.

pub mod certificate;
pub mod clifford;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod models;
pub mod scalar;
pub mod spectra;
pub mod symmetry;

pub use clifford::{base_system, extend, monomial_basis, system_for, system_for_with, CliffordMonomial, Extension, GammaSystem};
pub use error::{AlgebraError, Error, Result};
pub use linalg::{nullspace, LinearForm, RowReducer};
pub use matrix::ExactMatrix;
pub use models::{generator, hamiltonian, square_of_hamiltonian, DiracModel, Generator, GeneratorClass, Monomial, OperatorSymbol, Variant};
pub use scalar::ExactScalar;
