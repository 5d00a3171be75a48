//! Brute-force reference computations for spin-chain correlations.
//!
//! Everything here works directly on state vectors, density operators or
//! many-body Hilbert spaces and shares no formula code with the closed-form
//! evaluators it is used to check.
//!
//! Site s of an N-spin register is bit N − 1 − s of the basis index, with a
//! set bit meaning ↓, so two spins reproduce the pair basis
//! {↑↑, ↑↓, ↓↑, ↓↓}.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

mod chain;
mod fermions;
mod lindblad;
mod tfim;

pub use chain::{
    ed_ising_evolve, ghz_state, partial_trace_pair, product_state, w_state, Axis, Boundary,
    SpinChainState, MAX_CHAIN_SPINS,
};
pub use fermions::{fock_hubbard_evolve, FockSpace, HubbardOracleResult, SlaterEvolution, Spinor};
pub use lindblad::{lindblad_rk4, DensityOperator, OracleError, MAX_LINDBLAD_SPINS};
pub use tfim::{ed_thermal_tfim, transfer_matrix_zz, ThermalCorrelations, MAX_TFIM_SPINS};
