//! Mixed polynomial singularities in a few variables: Newton boundaries,
//! toric charts, face classification, non-degeneracy probes, and link and
//! Milnor fibration invariants for curves.

pub mod error;
mod linalg;
pub mod mixedpoly;
pub mod newton;
pub mod toric;
pub mod classify;
mod eval;
pub mod nondegen;
pub mod invariants;
mod upoly;

pub use error::{Error, Result};
pub use mixedpoly::{
    GaussianRational, MixedMonomial, MixedPolynomial, Positivity, UnimodularMatrix, WeightVector,
};
