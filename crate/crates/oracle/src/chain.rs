use nalgebra::Matrix4;
use num_complex::Complex64;
use spincmv::spin::{BlochVector, CorrelationMatrix, PairObservables, TwoSpinDensityMatrix};

pub const MAX_CHAIN_SPINS: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Open,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

/// Mask of the bit holding site `s` in an `n`-spin register.
pub(crate) fn site_mask(n: usize, s: usize) -> usize {
    1 << (n - 1 - s)
}

/// σ^axis at site `s` applied to basis state `a`: returns (coefficient, image).
pub(crate) fn apply_pauli(n: usize, s: usize, axis: Axis, a: usize) -> (Complex64, usize) {
    let m = site_mask(n, s);
    let down = a & m != 0;
    match axis {
        Axis::X => (Complex64::new(1.0, 0.0), a ^ m),
        Axis::Y => (
            if down { Complex64::new(0.0, -1.0) } else { Complex64::new(0.0, 1.0) },
            a ^ m,
        ),
        Axis::Z => (Complex64::new(if down { -1.0 } else { 1.0 }, 0.0), a),
    }
}

/// Applies a product of single-site Pauli operators (rightmost first).
pub(crate) fn apply_string(n: usize, ops: &[(usize, Axis)], a: usize) -> (Complex64, usize) {
    ops.iter().rev().fold((Complex64::new(1.0, 0.0), a), |(c, b), &(s, ax)| {
        let (c2, b2) = apply_pauli(n, s, ax, b);
        (c * c2, b2)
    })
}

/// Pure state of N spins-1/2.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinChainState {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl SpinChainState {
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨ψ| σ^{a1}_{s1} σ^{a2}_{s2} … |ψ⟩ (sites may repeat).
    pub fn expectation(&self, ops: &[(usize, Axis)]) -> Complex64 {
        let mut total = Complex64::new(0.0, 0.0);
        for (a, amp) in self.amplitudes.iter().enumerate() {
            if *amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (c, b) = apply_string(self.n, ops, a);
            total += self.amplitudes[b].conj() * c * amp;
        }
        total
    }

    pub fn bloch(&self, s: usize) -> BlochVector {
        let v = Axis::ALL.map(|ax| self.expectation(&[(s, ax)]).re);
        BlochVector::from_array(v)
    }

    /// Bloch vectors and correlations of sites i and j measured directly on
    /// the state.
    pub fn pair_observables(&self, i: usize, j: usize) -> PairObservables {
        let c = CorrelationMatrix::from_fn(|m, n| {
            self.expectation(&[(i, Axis::ALL[m]), (j, Axis::ALL[n])]).re
        });
        PairObservables::from_raw(self.bloch(i), self.bloch(j), c, i.abs_diff(j) as u32)
    }
}

/// Uniform product state ⊗_s (cos(θ/2)|↑⟩ + sin(θ/2)|↓⟩).
pub fn product_state(n: usize, theta: f64) -> SpinChainState {
    let (s, c) = (theta / 2.0).sin_cos();
    let amplitudes = (0..1usize << n)
        .map(|a| {
            let downs = a.count_ones() as i32;
            Complex64::new(c.powi(n as i32 - downs) * s.powi(downs), 0.0)
        })
        .collect();
    SpinChainState { n, amplitudes }
}

/// Exact evolution under H = −J Σ σ^z_s σ^z_{s+1} from the uniform product
/// state: H is diagonal in the z basis, so each amplitude picks up a phase.
pub fn ed_ising_evolve(n: usize, theta: f64, j: f64, t: f64, boundary: Boundary) -> SpinChainState {
    assert!((2..=MAX_CHAIN_SPINS).contains(&n), "chain length {n} outside 2..=14");
    let mut state = product_state(n, theta);
    let bonds: Vec<(usize, usize)> = match boundary {
        Boundary::Open => (0..n - 1).map(|s| (s, s + 1)).collect(),
        Boundary::Periodic => (0..n).map(|s| (s, (s + 1) % n)).collect(),
    };
    for (a, amp) in state.amplitudes.iter_mut().enumerate() {
        let z = |s: usize| if a & site_mask(n, s) != 0 { -1.0 } else { 1.0 };
        let energy: f64 = -j * bonds.iter().map(|&(p, q)| z(p) * z(q)).sum::<f64>();
        *amp *= Complex64::from_polar(1.0, -energy * t);
    }
    state
}

/// (|↓↓↓⟩ + |↑↑↑⟩)/√2.
pub fn ghz_state() -> SpinChainState {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 8];
    amplitudes[0b000] = Complex64::new(h, 0.0);
    amplitudes[0b111] = Complex64::new(h, 0.0);
    SpinChainState { n: 3, amplitudes }
}

/// (|↓↓↑⟩ + |↓↑↓⟩ + |↑↓↓⟩)/√3.
pub fn w_state() -> SpinChainState {
    let s = 1.0 / 3.0_f64.sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 8];
    for a in [0b110, 0b101, 0b011] {
        amplitudes[a] = Complex64::new(s, 0.0);
    }
    SpinChainState { n: 3, amplitudes }
}

/// Reduced density matrix of sites i and j, in the order (i, j).
pub fn partial_trace_pair(state: &SpinChainState, i: usize, j: usize) -> TwoSpinDensityMatrix {
    assert!(i != j && i < state.n && j < state.n, "invalid pair ({i}, {j})");
    let (mi, mj) = (site_mask(state.n, i), site_mask(state.n, j));
    let pair_index = |a: usize| 2 * usize::from(a & mi != 0) + usize::from(a & mj != 0);
    let rest_mask = !(mi | mj) & ((1 << state.n) - 1);
    let mut rho = Matrix4::<Complex64>::zeros();
    for (a, amp_a) in state.amplitudes.iter().enumerate() {
        for p in 0..4 {
            let b = (a & rest_mask) | if p & 2 != 0 { mi } else { 0 } | if p & 1 != 0 { mj } else { 0 };
            rho[(pair_index(a), p)] += amp_a * state.amplitudes[b].conj();
        }
    }
    TwoSpinDensityMatrix::new(rho).expect("reduced state of a normalized vector is physical")
}
