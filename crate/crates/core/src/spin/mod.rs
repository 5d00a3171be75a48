//! Observable algebra for spin pairs and triples.

mod density;
mod irreducible;
mod shape;
mod three;
mod types;

pub use density::{
    density_from_pair_observables, pair_observables_from_density, pauli, pauli_pair,
    TwoSpinDensityMatrix, HERMITICITY_TOL, POSITIVITY_TOL, TRACE_TOL,
};
pub use irreducible::{
    direction, irreducible_decompose, real_spherical_harmonic, spherical_profile,
    IrreducibleParts, LM_ORDER,
};
pub use shape::{classify_shape, ShapeClass, ShapeLabel, DEFAULT_SHAPE_TOL, SYMMETRY_TOL};
pub use three::{connected_three_spin, CorrelationTensorN, ThreeSpinMoments};
pub use types::{
    connected, split_symmetric_antisymmetric, BlochVector, CorrelationMatrix, PairObservables,
    Pseudovector,
};
