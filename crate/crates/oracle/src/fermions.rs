//! Spin-1/2 fermions hopping on an open chain at U = 0, released from a
//! singly occupied product state Π_j (Σ_a χ_{j,a} c†_{j,a}) |0⟩.
//!
//! Two independent routes are provided: [`SlaterEvolution`] propagates the
//! single-particle correlation matrix and applies Wick's theorem (the initial
//! state is a Slater determinant), and [`FockSpace`] diagonalizes the full
//! many-body Hamiltonian in the fixed-particle-number sector.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use spincmv::spin::{pauli, BlochVector, CorrelationMatrix, PairObservables};

/// Single-site spin amplitudes (↑, ↓).
pub type Spinor = [Complex64; 2];

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Open-chain hopping matrix h_{i,i±1} = −𝒥.
fn hopping_matrix(l: usize, hopping: f64) -> DMatrix<f64> {
    DMatrix::from_fn(l, l, |i, j| if i.abs_diff(j) == 1 { -hopping } else { 0.0 })
}

/// Single-particle propagator U = exp(−i h t) via eigendecomposition.
fn propagator(l: usize, hopping: f64, t: f64) -> DMatrix<Complex64> {
    let eig = hopping_matrix(l, hopping).symmetric_eigen();
    let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from_polar(1.0, -e * t)));
    &v * phases * v.transpose()
}

/// ⟨c†_{ia} c_{jb}⟩(t) for all modes, indexed by mode 2·site + spin.
#[derive(Debug, Clone)]
pub struct SlaterEvolution {
    pub l: usize,
    g: DMatrix<Complex64>,
}

impl SlaterEvolution {
    pub fn new(spinors: &[Spinor], hopping: f64, t: f64) -> Self {
        let l = spinors.len();
        let u = propagator(l, hopping, t);
        // c_j(t) = Σ_k U_jk c_k, so G_{ia,jb}(t) = Σ_k U*_ik U_jk χ*_{k,a} χ_{k,b}.
        let g = DMatrix::from_fn(2 * l, 2 * l, |p, q| {
            let (i, a, j, b) = (p / 2, p % 2, q / 2, q % 2);
            (0..l)
                .map(|k| u[(i, k)].conj() * u[(j, k)] * spinors[k][a].conj() * spinors[k][b])
                .sum()
        });
        Self { l, g }
    }

    fn g(&self, i: usize, a: usize, j: usize, b: usize) -> Complex64 {
        self.g[(2 * i + a, 2 * j + b)]
    }

    /// ⟨c†_{qa} c_{qb} c†_{rc} c_{rd}⟩ by Wick's theorem.
    fn four_point(&self, q: usize, r: usize, [a, b, c, d]: [usize; 4]) -> Complex64 {
        let same = if q == r && b == c { 1.0 } else { 0.0 };
        self.g(q, a, q, b) * self.g(r, c, r, d) + self.g(q, a, r, d) * (same - self.g(r, c, q, b))
    }

    pub fn particle_number(&self) -> f64 {
        self.g.trace().re
    }

    pub fn total_sz(&self) -> f64 {
        (0..self.l).map(|i| (self.g(i, 0, i, 0) - self.g(i, 1, i, 1)).re).sum()
    }

    pub fn bloch(&self, q: usize) -> BlochVector {
        let v = [1, 2, 3].map(|mu| {
            let s = pauli(mu);
            let mut total = zero();
            for a in 0..2 {
                for b in 0..2 {
                    total += s[(a, b)] * self.g(q, a, q, b);
                }
            }
            total.re
        });
        BlochVector::from_array(v)
    }

    pub fn pair_observables(&self, q: usize, r: usize) -> PairObservables {
        let sig = [pauli(1), pauli(2), pauli(3)];
        let c = CorrelationMatrix::from_fn(|mu, nu| {
            let mut total = zero();
            for idx in 0..16 {
                let [a, b, c, d] = [idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1];
                let w = sig[mu][(a, b)] * sig[nu][(c, d)];
                if w != zero() {
                    total += w * self.four_point(q, r, [a, b, c, d]);
                }
            }
            total.re
        });
        PairObservables::from_raw(self.bloch(q), self.bloch(r), c, q.abs_diff(r) as u32)
    }
}

/// Many-body Fock space of 2L modes (mode 2·site + spin, spin 0 = ↑) at fixed
/// particle number, with the open-chain hopping Hamiltonian diagonalized.
#[derive(Debug, Clone)]
pub struct FockSpace {
    pub l: usize,
    pub particles: usize,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
    energies: DVector<f64>,
    eigenvectors: DMatrix<f64>,
}

impl FockSpace {
    pub fn new(l: usize, particles: usize, hopping: f64) -> Self {
        let modes = 2 * l;
        assert!(modes <= 20, "Fock space of {modes} modes is too large");
        let states: Vec<u64> = (0u64..1 << modes)
            .filter(|s| s.count_ones() as usize == particles)
            .collect();
        let index: HashMap<u64, usize> = states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let dim = states.len();
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for (col, &s) in states.iter().enumerate() {
            for i in 0..l - 1 {
                for spin in 0..2 {
                    let (p, q) = (2 * i + spin, 2 * (i + 1) + spin);
                    for (to, from) in [(p, q), (q, p)] {
                        if let Some((sign, out)) = hop(s, to, from) {
                            h[(index[&out], col)] += -hopping * sign;
                        }
                    }
                }
            }
        }
        let eig = h.symmetric_eigen();
        Self {
            l,
            particles,
            states,
            index,
            energies: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        }
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Π_j (Σ_a χ_{j,a} c†_{j,a}) |0⟩, requiring one particle per site.
    pub fn product_state(&self, spinors: &[Spinor]) -> DVector<Complex64> {
        assert_eq!(spinors.len(), self.l);
        assert_eq!(self.particles, self.l);
        let mut psi = DVector::from_element(self.dim(), zero());
        for choice in 0u64..1 << self.l {
            let mut occ = 0u64;
            let mut amp = Complex64::new(1.0, 0.0);
            for (j, chi) in spinors.iter().enumerate() {
                let spin = (choice >> j & 1) as usize;
                occ |= 1 << (2 * j + spin);
                amp *= chi[spin];
            }
            // Creation operators already act in increasing mode order.
            psi[self.index[&occ]] += amp;
        }
        psi
    }

    pub fn evolve(&self, psi: &DVector<Complex64>, t: f64) -> DVector<Complex64> {
        let v = self.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let mut coeff = v.transpose() * psi;
        for (k, c) in coeff.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -self.energies[k] * t);
        }
        v * coeff
    }

    /// c†_p c_q |ψ⟩.
    fn apply_hop(&self, psi: &DVector<Complex64>, p: usize, q: usize) -> DVector<Complex64> {
        let mut out = DVector::from_element(self.dim(), zero());
        for (k, &s) in self.states.iter().enumerate() {
            if psi[k] == zero() {
                continue;
            }
            if let Some((sign, t)) = hop(s, p, q) {
                out[self.index[&t]] += psi[k] * sign;
            }
        }
        out
    }

    fn spin_op(&self, psi: &DVector<Complex64>, site: usize, mu: usize) -> DVector<Complex64> {
        let s = pauli(mu);
        let mut out = DVector::from_element(self.dim(), zero());
        for a in 0..2 {
            for b in 0..2 {
                if s[(a, b)] != zero() {
                    out += self.apply_hop(psi, 2 * site + a, 2 * site + b) * s[(a, b)];
                }
            }
        }
        out
    }

    pub fn pair_observables(&self, psi: &DVector<Complex64>, q: usize, r: usize) -> PairObservables {
        let bloch = |site: usize| {
            BlochVector::from_array([1, 2, 3].map(|mu| psi.dotc(&self.spin_op(psi, site, mu)).re))
        };
        let c = CorrelationMatrix::from_fn(|mu, nu| {
            let right = self.spin_op(psi, r, nu + 1);
            // S^μ is Hermitian, so ⟨ψ|S^μ S^ν|ψ⟩ = ⟨S^μ ψ|S^ν ψ⟩.
            self.spin_op(psi, q, mu + 1).dotc(&right).re
        });
        PairObservables::from_raw(bloch(q), bloch(r), c, q.abs_diff(r) as u32)
    }

    pub fn particle_number(&self, psi: &DVector<Complex64>) -> f64 {
        (0..2 * self.l).map(|m| psi.dotc(&self.apply_hop(psi, m, m)).re).sum()
    }

    pub fn total_sz(&self, psi: &DVector<Complex64>) -> f64 {
        (0..self.l)
            .map(|i| psi.dotc(&self.spin_op(psi, i, 3)).re)
            .sum()
    }
}

/// c†_p c_q on an occupation bitstring: sign from the occupied modes passed.
fn hop(s: u64, p: usize, q: usize) -> Option<(f64, u64)> {
    if s >> q & 1 == 0 {
        return None;
    }
    let below = |state: u64, m: usize| (state & ((1u64 << m) - 1)).count_ones();
    let after_annihilate = s & !(1 << q);
    if after_annihilate >> p & 1 == 1 {
        return None;
    }
    let parity = below(s, q) + below(after_annihilate, p);
    let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, after_annihilate | 1 << p))
}

/// Reference pair observables from [`fock_hubbard_evolve`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HubbardOracleResult {
    pub observables: PairObservables,
    pub particle_number: f64,
    pub total_sz: f64,
}

/// Pair observables of sites q and r after evolving the product state on an
/// open chain of L sites (L = spinors.len()). Uses the single-particle
/// propagator from exact diagonalization of the L×L hopping matrix and Wick's
/// theorem; [`FockSpace`] provides the many-body cross-check for small L.
pub fn fock_hubbard_evolve(spinors: &[Spinor], hopping: f64, t: f64, q: usize, r: usize) -> HubbardOracleResult {
    let evo = SlaterEvolution::new(spinors, hopping, t);
    HubbardOracleResult {
        observables: evo.pair_observables(q, r),
        particle_number: evo.particle_number(),
        total_sz: evo.total_sz(),
    }
}
