//! Helmholtz waveguide solvers with transparent exterior discretizations.
//!
//! The interior of a domain is discretized with Lagrange finite elements; each
//! semi-infinite cylindrical waveguide is handled either by a complex-scaled
//! layer ([`pml`]) or by the Hardy space infinite element method ([`hardy`]).
//! Both lead to pencils `A - kappa^2 B` that are linear in `kappa^2`, so
//! diffraction problems are linear solves and resonance problems are linear
//! generalized eigenproblems ([`coupled`]).
//!
//! The [`oracles`] module contains closed-form and semi-analytic reference
//! solutions that share no code with the discretizations.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bessel;
pub mod branch;
pub mod coupled;
pub mod diagnostics;
pub mod eigen;
pub mod error;
pub mod fem1d;
pub mod hardy;
pub mod interior;
pub mod linalg;
pub mod oracles;
pub mod pml;
pub mod spectrum;

pub use diagnostics::Warning;
pub use error::{Error, Result};
pub use linalg::C64;
