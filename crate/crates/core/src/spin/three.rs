use serde::{Deserialize, Serialize};

use super::types::{connected, BlochVector, CorrelationMatrix};
use crate::error::{Error, Result};

/// Rank-N tensor over {x, y, z}^N stored row-major (last index fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationTensorN {
    pub order: usize,
    pub entries: Vec<f64>,
}

impl CorrelationTensorN {
    pub fn new(order: usize, entries: Vec<f64>) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidParameter(format!("tensor order {order} < 2")));
        }
        let expected = 3usize.pow(order as u32);
        if entries.len() != expected {
            return Err(Error::InvalidParameter(format!(
                "order-{order} tensor needs {expected} entries, got {}",
                entries.len()
            )));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite tensor entry".into()));
        }
        Ok(Self { order, entries })
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            entries: vec![0.0; 3usize.pow(order as u32)],
        }
    }

    pub fn from_matrix(c: &CorrelationMatrix) -> Self {
        Self {
            order: 2,
            entries: c.0.iter().flatten().copied().collect(),
        }
    }

    /// The order-2 tensor as a matrix, if it is one.
    pub fn as_matrix(&self) -> Option<CorrelationMatrix> {
        (self.order == 2).then(|| CorrelationMatrix::from_fn(|i, j| self.entries[3 * i + j]))
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        self.entries[flat_index(index)]
    }
}

fn flat_index(index: &[usize]) -> usize {
    index.iter().fold(0, |acc, &k| 3 * acc + k)
}

/// One-, two- and three-point Pauli moments of three spins (a, b, c).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreeSpinMoments {
    pub b_a: BlochVector,
    pub b_b: BlochVector,
    pub b_c: BlochVector,
    /// Raw ⟨σ^μ_a σ^ν_b⟩.
    pub c_ab: CorrelationMatrix,
    pub c_ac: CorrelationMatrix,
    pub c_bc: CorrelationMatrix,
    /// Raw ⟨σ^μ_a σ^ν_b σ^γ_c⟩ indexed [μ][ν][γ].
    pub c_abc: [[[f64; 3]; 3]; 3],
}

/// Joint third cumulant
/// ⟨abc⟩ − ⟨a⟩C_bc − ⟨b⟩C_ac − ⟨c⟩C_ab − ⟨a⟩⟨b⟩⟨c⟩ for every axis triple.
pub fn connected_three_spin(m: &ThreeSpinMoments) -> CorrelationTensorN {
    let (a, b, c) = (m.b_a.to_array(), m.b_b.to_array(), m.b_c.to_array());
    let k_ab = connected(&m.c_ab, m.b_a, m.b_b);
    let k_ac = connected(&m.c_ac, m.b_a, m.b_c);
    let k_bc = connected(&m.c_bc, m.b_b, m.b_c);
    let mut entries = Vec::with_capacity(27);
    for mu in 0..3 {
        for nu in 0..3 {
            for ga in 0..3 {
                entries.push(
                    m.c_abc[mu][nu][ga]
                        - a[mu] * k_bc[(nu, ga)]
                        - b[nu] * k_ac[(mu, ga)]
                        - c[ga] * k_ab[(mu, nu)]
                        - a[mu] * b[nu] * c[ga],
                );
            }
        }
    }
    CorrelationTensorN { order: 3, entries }
}
