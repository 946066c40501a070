//! Homogeneous models of contact metric `(κ,μ)`-spaces as matrix Lie
//! algebras, with numerical checks of their curvature, their Boeckx
//! invariant, and the symmetric base space of the Reeb fibration.
//!
//! The pipeline runs bottom-up:
//!
//! - [`liecore`]: brackets, `so(p,q)` bases, coordinates, structure constants;
//! - [`homspace`]: reductive decompositions, invariant metrics, Levi-Civita
//!   and canonical connections at the base point;
//! - [`contact`]: `(φ, ξ, η, g)`, the tensor `h`, the `(κ,μ)` fit and
//!   `D_a`-deformations;
//! - [`triple`]: Lie and Jordan triple systems and the standard
//!   (para-)complex structure of the base;
//! - [`models`]: the three matrix families and end-to-end verification;
//! - [`report`]: JSON and text rendering;
//! - [`cli`]: the `kmu` front end.

pub mod cli;
pub mod contact;
pub mod error;
pub mod homspace;
pub mod liecore;
pub mod models;
pub mod report;
pub mod trilinear;
pub mod triple;

pub use error::{Error, Result};
pub use models::{build_model, verify_model, Family, ModelSpec, Report, Tolerances};
pub use trilinear::TrilinearMap;
