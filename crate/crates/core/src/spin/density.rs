use nalgebra::{Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;

use super::types::{BlochVector, CorrelationMatrix, PairObservables};
use crate::error::{Error, Result};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const POSITIVITY_TOL: f64 = 1e-10;

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// σ^0 = 1, σ^x, σ^y, σ^z in the basis (↑, ↓) with σ^z|↑⟩ = +|↑⟩.
pub fn pauli(alpha: usize) -> Matrix2<Complex64> {
    let (o, l, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match alpha {
        0 => Matrix2::new(l, o, o, l),
        1 => Matrix2::new(o, l, l, o),
        2 => Matrix2::new(o, -i, i, o),
        3 => Matrix2::new(l, o, o, -l),
        _ => panic!("Pauli index {alpha} out of range"),
    }
}

/// σ^α ⊗ σ^β in the basis {↑↑, ↑↓, ↓↑, ↓↓}.
pub fn pauli_pair(alpha: usize, beta: usize) -> Matrix4<Complex64> {
    let (a, b) = (pauli(alpha), pauli(beta));
    Matrix4::from_fn(|r, s| a[(r / 2, s / 2)] * b[(r % 2, s % 2)])
}

/// Two-spin density matrix in the basis {↑↑, ↑↓, ↓↑, ↓↓}.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoSpinDensityMatrix {
    rho: Matrix4<Complex64>,
}

impl TwoSpinDensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        if rho.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonPhysicalDensity("non-finite entry".into()));
        }
        let herm = (rho - rho.adjoint()).iter().fold(0.0_f64, |m, z| m.max(z.norm()));
        if herm > HERMITICITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "not Hermitian (max |ρ − ρ†| = {herm:.3e})"
            )));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NonPhysicalDensity(format!("trace {} + {}i ≠ 1", tr.re, tr.im)));
        }
        let min = min_eigenvalue(&rho);
        if min < -POSITIVITY_TOL {
            return Err(Error::NonPhysicalDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(Self { rho })
    }

    /// |ψ⟩⟨ψ| for a normalized amplitude vector.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        Self::new(Matrix4::from_fn(|r, s| psi[r] * psi[s].conj()))
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        let mut ev: Vec<f64> = hermitian_eigenvalues(&self.rho);
        ev.sort_by(|a, b| b.total_cmp(a));
        [ev[0], ev[1], ev[2], ev[3]]
    }

    /// Tr(ρ σ^α ⊗ σ^β).
    pub fn expectation(&self, alpha: usize, beta: usize) -> f64 {
        (self.rho * pauli_pair(alpha, beta)).trace().re
    }
}

impl TryFrom<Matrix4<Complex64>> for TwoSpinDensityMatrix {
    type Error = Error;
    fn try_from(rho: Matrix4<Complex64>) -> Result<Self> {
        Self::new(rho)
    }
}

impl From<TwoSpinDensityMatrix> for Matrix4<Complex64> {
    fn from(d: TwoSpinDensityMatrix) -> Self {
        d.rho
    }
}

fn hermitian_eigenvalues(m: &Matrix4<Complex64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * c(0.5, 0.0);
    SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

fn min_eigenvalue(m: &Matrix4<Complex64>) -> f64 {
    hermitian_eigenvalues(m).into_iter().fold(f64::INFINITY, f64::min)
}

/// Reads Bloch vectors and correlations off a two-spin state through the
/// Pauli expansion coefficients S^{αβ} = Tr(ρ σ^α ⊗ σ^β).
pub fn pair_observables_from_density(rho: &TwoSpinDensityMatrix) -> PairObservables {
    let s = |a, b| rho.expectation(a, b);
    let b_i = BlochVector::new(s(1, 0), s(2, 0), s(3, 0));
    let b_j = BlochVector::new(s(0, 1), s(0, 2), s(0, 3));
    let c_raw = CorrelationMatrix::from_fn(|m, n| s(m + 1, n + 1));
    PairObservables::from_raw(b_i, b_j, c_raw, 0)
}

/// Assembles ρ = ¼ Σ S^{αβ} σ^α ⊗ σ^β from Bloch vectors and raw correlations.
pub fn density_from_pair_observables(obs: &PairObservables) -> Result<TwoSpinDensityMatrix> {
    let drift = obs.consistency_error();
    if drift > 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "connected correlations disagree with raw correlations by {drift:.3e}"
        )));
    }
    let (bi, bj) = (obs.b_i.to_array(), obs.b_j.to_array());
    let coeff = |a: usize, b: usize| match (a, b) {
        (0, 0) => 1.0,
        (a, 0) => bi[a - 1],
        (0, b) => bj[b - 1],
        (a, b) => obs.c_raw[(a - 1, b - 1)],
    };
    let mut rho = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            rho += pauli_pair(a, b) * c(0.25 * coeff(a, b), 0.0);
        }
    }
    let min = min_eigenvalue(&rho);
    if min < -POSITIVITY_TOL {
        return Err(Error::NonPhysicalObservables { min_eigenvalue: min });
    }
    TwoSpinDensityMatrix::new(rho)
}
