use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

/// Single-spin Pauli expectations (⟨σ^x⟩, ⟨σ^y⟩, ⟨σ^z⟩).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub bx: f64,
    pub by: f64,
    pub bz: f64,
}

impl BlochVector {
    pub const fn new(bx: f64, by: f64, bz: f64) -> Self {
        Self { bx, by, bz }
    }

    pub const fn zero() -> Self {
        Self::new(0.0, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.bx, self.by, self.bz]
    }

    pub fn to_vector3(self) -> Vector3<f64> {
        Vector3::new(self.bx, self.by, self.bz)
    }

    pub fn norm(self) -> f64 {
        self.to_vector3().norm()
    }
}

/// A 3×3 real matrix with rows and columns indexed by x, y, z.
///
/// Used both for raw correlations c^{μν} = ⟨σ^μ_i σ^ν_j⟩ and for connected
/// correlations C^{μν} = c^{μν} − b^μ_i b^ν_j.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorrelationMatrix(pub [[f64; 3]; 3]);

impl CorrelationMatrix {
    pub const fn zero() -> Self {
        Self([[0.0; 3]; 3])
    }

    pub const fn identity() -> Self {
        Self([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    }

    pub const fn diag(x: f64, y: f64, z: f64) -> Self {
        Self([[x, 0.0, 0.0], [0.0, y, 0.0], [0.0, 0.0, z]])
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(i, j);
            }
        }
        Self(m)
    }

    /// Outer product a bᵀ.
    pub fn outer(a: BlochVector, b: BlochVector) -> Self {
        let (a, b) = (a.to_array(), b.to_array());
        Self::from_fn(|i, j| a[i] * b[j])
    }

    pub fn from_matrix3(m: &Matrix3<f64>) -> Self {
        Self::from_fn(|i, j| m[(i, j)])
    }

    pub fn to_matrix3(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.0[i][j])
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(|i, j| self.0[j][i])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_fn(|i, j| s * self.0[i][j])
    }

    /// Largest entrywise |C − Cᵀ|.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.0[i][j] - self.0[j][i]).abs());
            }
        }
        worst
    }

    pub fn symmetrized(&self) -> Self {
        Self::from_fn(|i, j| 0.5 * (self.0[i][j] + self.0[j][i]))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    /// C′ = Rᵀ C R.
    pub fn rotated(&self, r: &Matrix3<f64>) -> Self {
        Self::from_matrix3(&(r.transpose() * self.to_matrix3() * r))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for CorrelationMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for CorrelationMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for CorrelationMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] + rhs.0[i][j])
    }
}

impl Sub for CorrelationMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::from_fn(|i, j| self.0[i][j] - rhs.0[i][j])
    }
}

impl Mul<f64> for CorrelationMatrix {
    type Output = Self;
    fn mul(self, rhs: f64) -> Self {
        self.scale(rhs)
    }
}

/// The axial vector carried by an antisymmetric 3×3 matrix,
/// a^γ = ½ ε^{αβγ} A^{αβ}.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pseudovector {
    pub ax: f64,
    pub ay: f64,
    pub az: f64,
}

impl Pseudovector {
    pub const fn new(ax: f64, ay: f64, az: f64) -> Self {
        Self { ax, ay, az }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.ax, self.ay, self.az]
    }

    pub fn norm(self) -> f64 {
        Vector3::from(self.to_array()).norm()
    }

    /// Reads the axial vector from the antisymmetric part of `m`.
    pub fn from_antisymmetric(m: &CorrelationMatrix) -> Self {
        let a = |i: usize, j: usize| 0.5 * (m[(i, j)] - m[(j, i)]);
        Self::new(a(1, 2), a(2, 0), a(0, 1))
    }

    /// The antisymmetric matrix A^{αβ} = ε^{αβγ} a^γ.
    pub fn antisymmetric(&self) -> CorrelationMatrix {
        let (x, y, z) = (self.ax, self.ay, self.az);
        CorrelationMatrix([[0.0, z, -y], [-z, 0.0, x], [y, -x, 0.0]])
    }
}

/// One- and two-point data for an ordered spin pair (i, j).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairObservables {
    pub b_i: BlochVector,
    pub b_j: BlochVector,
    pub c_raw: CorrelationMatrix,
    pub c_connected: CorrelationMatrix,
    /// Site distance |i − j|; zero when the pair has no lattice embedding.
    pub separation: u32,
}

impl PairObservables {
    /// Builds the record from raw correlations, deriving the connected part.
    pub fn from_raw(
        b_i: BlochVector,
        b_j: BlochVector,
        c_raw: CorrelationMatrix,
        separation: u32,
    ) -> Self {
        Self {
            b_i,
            b_j,
            c_raw,
            c_connected: connected(&c_raw, b_i, b_j),
            separation,
        }
    }

    /// Largest deviation of `c_connected` from `c_raw − b_i b_jᵀ`.
    pub fn consistency_error(&self) -> f64 {
        connected(&self.c_raw, self.b_i, self.b_j).max_abs_diff(&self.c_connected)
    }

    /// Largest difference over Bloch vectors and both correlation matrices.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let bloch = |a: BlochVector, b: BlochVector| {
            a.to_array()
                .iter()
                .zip(b.to_array())
                .fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()))
        };
        bloch(self.b_i, other.b_i)
            .max(bloch(self.b_j, other.b_j))
            .max(self.c_raw.max_abs_diff(&other.c_raw))
            .max(self.c_connected.max_abs_diff(&other.c_connected))
    }
}

/// Connected correlations C = c − b_i b_jᵀ.
pub fn connected(c_raw: &CorrelationMatrix, b_i: BlochVector, b_j: BlochVector) -> CorrelationMatrix {
    *c_raw - CorrelationMatrix::outer(b_i, b_j)
}

/// Splits C into its symmetric part and the pseudovector of its
/// antisymmetric part.
pub fn split_symmetric_antisymmetric(c: &CorrelationMatrix) -> (CorrelationMatrix, Pseudovector) {
    (c.symmetrized(), Pseudovector::from_antisymmetric(c))
}
