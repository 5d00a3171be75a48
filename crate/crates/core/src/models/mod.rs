//! Closed-form pair observables for exactly solvable spin models.

pub mod bessel;
pub mod hubbard;
pub mod ising;
pub mod tfim;

pub use bessel::{bessel_j, bessel_j_sequence};
pub use hubbard::{
    default_bessel_cutoff, hubbard_propagator, hubbard_quench, HubbardParams, InitialState,
    TRUNCATION_TOL,
};
pub use ising::{ising_coherent, ising_dissipative, DissipativeObservables, IsingParams};
pub use tfim::{tfim_correlations, tfim_dn, TfimParams, DEFAULT_QUAD_POINTS, TFIM_AXIS_MAP};
