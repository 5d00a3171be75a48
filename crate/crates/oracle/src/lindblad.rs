use std::fmt;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use spincmv::spin::{BlochVector, CorrelationMatrix, PairObservables, TwoSpinDensityMatrix};

use crate::chain::{apply_string, site_mask, Axis, SpinChainState};

pub const MAX_LINDBLAD_SPINS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleError {
    /// The trace drifted by more than 1e−8 over the integration.
    StepSizeTooLarge { trace_drift: f64 },
    InvalidInput(String),
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::StepSizeTooLarge { trace_drift } => {
                write!(f, "step size too large (trace drift {trace_drift:.3e})")
            }
            OracleError::InvalidInput(msg) => write!(f, "invalid oracle input: {msg}"),
        }
    }
}

impl std::error::Error for OracleError {}

/// Mixed state of N ≤ 6 spins.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    pub fn from_pure(state: &SpinChainState) -> Self {
        let psi = &state.amplitudes;
        let d = psi.len();
        Self {
            n: state.n,
            matrix: DMatrix::from_fn(d, d, |a, b| psi[a] * psi[b].conj()),
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// Tr(ρ σ^{a1}_{s1} σ^{a2}_{s2} …).
    pub fn expectation(&self, ops: &[(usize, Axis)]) -> Complex64 {
        let d = self.matrix.nrows();
        let mut total = Complex64::new(0.0, 0.0);
        for a in 0..d {
            // Tr(ρ P) = Σ_a ⟨a|ρ P|a⟩ = Σ_a ρ_{b a} c where P|a⟩ = c|b⟩.
            let (c, b) = apply_string(self.n, ops, a);
            total += self.matrix[(a, b)] * c;
        }
        total
    }

    pub fn pair_observables(&self, i: usize, j: usize) -> PairObservables {
        let bloch = |s: usize| BlochVector::from_array(Axis::ALL.map(|ax| self.expectation(&[(s, ax)]).re));
        let c = CorrelationMatrix::from_fn(|m, n| {
            self.expectation(&[(i, Axis::ALL[m]), (j, Axis::ALL[n])]).re
        });
        PairObservables::from_raw(bloch(i), bloch(j), c, i.abs_diff(j) as u32)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn reduced_pair(&self, i: usize, j: usize) -> TwoSpinDensityMatrix {
        let (mi, mj) = (site_mask(self.n, i), site_mask(self.n, j));
        let d = self.matrix.nrows();
        let rest = !(mi | mj) & (d - 1);
        let idx = |a: usize| 2 * usize::from(a & mi != 0) + usize::from(a & mj != 0);
        let mut rho = Matrix4::<Complex64>::zeros();
        for a in 0..d {
            for b in 0..d {
                if a & rest == b & rest {
                    rho[(idx(a), idx(b))] += self.matrix[(a, b)];
                }
            }
        }
        TwoSpinDensityMatrix::new(rho).expect("reduced density matrix is physical")
    }
}

/// Right-hand side −i[H, ρ] + (Γ/2) Σ_s (2σ⁻ρσ⁺ − σ⁺σ⁻ρ − ρσ⁺σ⁻) with
/// H = −J Σ σ^z_s σ^z_{s+1} on an open chain; σ⁻ lowers ↑ to ↓.
fn master_rhs(n: usize, energy: &[f64], gamma: f64, rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let d = rho.nrows();
    let mi = Complex64::new(0.0, -1.0);
    DMatrix::from_fn(d, d, |a, b| {
        let mut v = mi * (energy[a] - energy[b]) * rho[(a, b)];
        if gamma != 0.0 {
            for s in 0..n {
                let m = site_mask(n, s);
                let (a_up, b_up) = (a & m == 0, b & m == 0);
                // Emission feeds ⟨a|ρ|b⟩ from the pair with site s raised.
                if !a_up && !b_up {
                    v += gamma * rho[(a ^ m, b ^ m)];
                }
                let excited = f64::from(u8::from(a_up)) + f64::from(u8::from(b_up));
                v -= 0.5 * gamma * excited * rho[(a, b)];
            }
        }
        v
    })
}

/// Classic RK4 integration of the Ising master equation from the uniform
/// product state, with step ≤ `dt` (the step is shortened so an integer
/// number of steps lands on t).
pub fn lindblad_rk4(
    n: usize,
    theta: f64,
    j: f64,
    gamma: f64,
    t: f64,
    dt: f64,
) -> Result<DensityOperator, OracleError> {
    if !(2..=MAX_LINDBLAD_SPINS).contains(&n) {
        return Err(OracleError::InvalidInput(format!("{n} spins outside 2..=6")));
    }
    let rate = j.abs().max(gamma).max(1e-300);
    if !(dt > 0.0) || dt > 1e-3 / rate * (1.0 + 1e-12) {
        return Err(OracleError::InvalidInput(format!("dt = {dt} exceeds 1e-3/max(J, Γ)")));
    }
    if !(t >= 0.0) {
        return Err(OracleError::InvalidInput(format!("t = {t} must be ≥ 0")));
    }
    let energy: Vec<f64> = (0..1usize << n)
        .map(|a| {
            let z = |s: usize| if a & site_mask(n, s) != 0 { -1.0 } else { 1.0 };
            -j * (0..n - 1).map(|s| z(s) * z(s + 1)).sum::<f64>()
        })
        .collect();

    let mut rho = DensityOperator::from_pure(&crate::chain::product_state(n, theta));
    let steps = (t / dt).ceil() as usize;
    let h = if steps == 0 { 0.0 } else { t / steps as f64 };
    let half = Complex64::new(0.5 * h, 0.0);
    let full = Complex64::new(h, 0.0);
    let sixth = Complex64::new(h / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let f = |r: &DMatrix<Complex64>| master_rhs(n, &energy, gamma, r);
    for _ in 0..steps {
        let m = &rho.matrix;
        let k1 = f(m);
        let k2 = f(&(m + &k1 * half));
        let k3 = f(&(m + &k2 * half));
        let k4 = f(&(m + &k3 * full));
        rho.matrix = m + (k1 + k2 * two + k3 * two + k4) * sixth;
    }
    let drift = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if drift > 1e-8 {
        return Err(OracleError::StepSizeTooLarge { trace_drift: drift });
    }
    Ok(rho)
}
