//! Exact Euler-form lattices of Kuznetsov components of branched double
//! covers, with the Riemann-Roch and mutation calculus that connects them
//! to the Mukai lattices of the branch K3 surfaces.
//!
//! All arithmetic is over arbitrary-precision integers and rationals.

pub mod chow;
pub mod config;
pub mod error;
pub mod expr;
pub mod functor;
pub mod grr;
pub mod k3picard;
pub mod knum;
pub mod lift;
pub mod report;
pub mod linalg;

pub use chow::{make_variety_model, GradedClass, ModelClasses, VarietyKind, VarietyModel, VarietySpec};
pub use error::{Error, Result};
pub use grr::{CoverSetup, SetupKind};
pub use knum::{KnumClass, KuBasis, KuBasisName, MukaiVector};
