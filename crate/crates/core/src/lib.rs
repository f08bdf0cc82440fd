//! Exact-arithmetic construction of modules over the N=2 superconformal
//! algebras from modules over the Weyl algebra.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`] multivariate rational functions over ℚ in named parameters;
//! * [`weyl`] normal-form arithmetic in the Weyl superalgebra `SD`;
//! * [`lie`] the N=2 algebras `Ĝ[ε]` and their N=1 subalgebras;
//! * [`morphism`] spectral flow, the realization in `SD`, the twists;
//! * [`dmodule`] the concrete catalog of D-modules;
//! * [`functor`] the superization and twisting functors producing `G`-modules;
//! * [`analysis`] finite-window verification: operator identities, span probes,
//!   submodule and isomorphism checks.

pub mod analysis;
pub mod dmodule;
mod error;
mod expr;
pub mod functor;
pub mod lie;
pub mod morphism;
pub mod report;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::Scalar;
