//! Poisson geometry of compact symmetric spaces `U/K` as dense linear algebra.
//!
//! The Evens-Lu bivector on `X = U/K` is evaluated in its equivariant form
//! `π([u,X],[u,Y]) = tr(Ω_u(X) Y)` and, for the Grassmannians, projective spaces
//! and `SU(2)`, through explicit chart formulas. Birkhoff layers of the Cartan
//! embedding organize the symplectic leaves, and the torus action on each leaf
//! has an explicit momentum map.

pub mod error;
pub mod lie;
pub mod linalg;
pub mod momentum;
pub mod poisson;
pub mod sample;
pub mod strata;
pub mod symspace;

pub use error::{Error, Result};
pub use linalg::{CMatrix, SignedPermutation};
pub use symspace::{SymmetricSpace, TangentClass};
