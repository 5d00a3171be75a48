use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::types::{CorrelationMatrix, Pseudovector};

/// (l, m) labels of the nine stored coefficients, in storage order.
pub const LM_ORDER: [(u8, i8); 9] = [
    (0, 0),
    (1, -1),
    (1, 0),
    (1, 1),
    (2, -2),
    (2, -1),
    (2, 0),
    (2, 1),
    (2, 2),
];

/// Rotation-irreducible pieces of a 3×3 correlation matrix: isotropic scalar,
/// axial vector and traceless symmetric tensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrreducibleParts {
    pub c0: f64,
    pub c1: Pseudovector,
    pub c2: CorrelationMatrix,
    /// Real spherical-harmonic coefficients in [`LM_ORDER`]. The angular
    /// profile f(ê) = c0 + c1·ê + êᵀc2ê equals Σ a_lm Y_lm(ê), sector by sector.
    pub a_lm: [f64; 9],
}

impl IrreducibleParts {
    pub fn coefficient(&self, l: u8, m: i8) -> Option<f64> {
        LM_ORDER
            .iter()
            .position(|&lm| lm == (l, m))
            .map(|k| self.a_lm[k])
    }

    /// c0·I + antisym(c1) + c2.
    pub fn reconstruct(&self) -> CorrelationMatrix {
        CorrelationMatrix::identity().scale(self.c0) + self.c1.antisymmetric() + self.c2
    }
}

pub fn irreducible_decompose(c: &CorrelationMatrix) -> IrreducibleParts {
    let c0 = c.trace() / 3.0;
    let c1 = Pseudovector::from_antisymmetric(c);
    let c2 = c.symmetrized() - CorrelationMatrix::identity().scale(c0);

    let k1 = (4.0 * PI / 3.0).sqrt();
    let k2 = (PI / 15.0).sqrt();
    let a_lm = [
        c0 * (4.0 * PI).sqrt(),
        c1.ay * k1,
        c1.az * k1,
        c1.ax * k1,
        4.0 * c2[(0, 1)] * k2,
        4.0 * c2[(1, 2)] * k2,
        2.0 * c2[(2, 2)] * (PI / 5.0).sqrt(),
        4.0 * c2[(0, 2)] * k2,
        2.0 * (c2[(0, 0)] - c2[(1, 1)]) * k2,
    ];
    IrreducibleParts { c0, c1, c2, a_lm }
}

/// Real spherical harmonic Y_lm at unit direction `e`, for l ≤ 2.
pub fn real_spherical_harmonic(l: u8, m: i8, e: [f64; 3]) -> f64 {
    let [x, y, z] = e;
    let n1 = (3.0 / (4.0 * PI)).sqrt();
    let n2 = 0.5 * (15.0 / PI).sqrt();
    match (l, m) {
        (0, 0) => 0.5 / PI.sqrt(),
        (1, -1) => n1 * y,
        (1, 0) => n1 * z,
        (1, 1) => n1 * x,
        (2, -2) => n2 * x * y,
        (2, -1) => n2 * y * z,
        (2, 0) => 0.25 * (5.0 / PI).sqrt() * (3.0 * z * z - 1.0),
        (2, 1) => n2 * x * z,
        (2, 2) => 0.5 * n2 * (x * x - y * y),
        _ => panic!("real spherical harmonic ({l}, {m}) not tabulated"),
    }
}

/// Unit vector at polar angle θ and azimuth φ.
pub fn direction(theta: f64, phi: f64) -> [f64; 3] {
    [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()]
}

/// Partial sum Σ_{l ∈ l_select} Σ_m a_lm Y_lm(θ, φ).
pub fn spherical_profile(parts: &IrreducibleParts, l_select: &[u8], theta: f64, phi: f64) -> f64 {
    let e = direction(theta, phi);
    LM_ORDER
        .iter()
        .zip(parts.a_lm)
        .filter(|((l, _), _)| l_select.contains(l))
        .map(|(&(l, m), a)| a * real_spherical_harmonic(l, m, e))
        .sum()
}
