//! Correlation-matrix visualization toolkit for spin-1/2 systems.
//!
//! * [`spin`]: density matrices, Bloch vectors, raw and connected
//!   correlations, shape classification and irreducible decomposition.
//! * [`states`]: named two-spin states.
//! * [`models`]: closed-form pair observables for the nearest-neighbour Ising
//!   quench (with and without spontaneous emission), the free-fermion
//!   Hubbard quench and the thermal transverse-field Ising chain.
//! * [`geometry`]: quadratic and multilinear forms, their compactified
//!   level sets and mesh extraction.
//!
//! Basis convention everywhere: {↑↑, ↑↓, ↓↑, ↓↓} with σ^z|↑⟩ = +|↑⟩.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod error;
pub mod geometry;
pub mod models;
pub mod spin;
pub mod states;

pub use error::{Error, Result};
