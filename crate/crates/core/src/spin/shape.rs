use nalgebra::{SymmetricEigen, Vector3};
use serde::{Deserialize, Serialize};

use super::types::CorrelationMatrix;
use crate::error::{Error, Result};

/// Relative eigenvalue threshold below which an eigenvalue counts as zero.
pub const DEFAULT_SHAPE_TOL: f64 = 1e-8;

/// Largest |C − Cᵀ| accepted by [`classify_shape`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Topology of the signed level-set pair, fixed by the rank and sign pattern
/// of the symmetric correlation spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShapeLabel {
    Zero,
    Dumbbell,
    Disk,
    Clover,
    Ellipsoid,
    WheelAndAxle,
}

impl ShapeLabel {
    pub fn rank(self) -> usize {
        match self {
            ShapeLabel::Zero => 0,
            ShapeLabel::Dumbbell => 1,
            ShapeLabel::Disk | ShapeLabel::Clover => 2,
            ShapeLabel::Ellipsoid | ShapeLabel::WheelAndAxle => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ShapeLabel::Zero => "zero",
            ShapeLabel::Dumbbell => "dumbbell",
            ShapeLabel::Disk => "disk",
            ShapeLabel::Clover => "clover",
            ShapeLabel::Ellipsoid => "ellipsoid",
            ShapeLabel::WheelAndAxle => "wheel-and-axle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeClass {
    pub label: ShapeLabel,
    /// Eigenvalues sorted in descending order.
    pub eigenvalues: [f64; 3],
    /// Eigenvectors ordered by descending |λ|; each has its largest-magnitude
    /// component positive.
    pub principal_axes: [[f64; 3]; 3],
    /// Eigenvalues matching `principal_axes`, one per axis.
    pub axis_eigenvalues: [f64; 3],
}

impl ShapeClass {
    pub fn rank(&self) -> usize {
        self.label.rank()
    }

    /// Unit normal of the plane spanned by the two leading axes.
    pub fn plane_normal(&self) -> [f64; 3] {
        let a = Vector3::from(self.principal_axes[0]);
        let b = Vector3::from(self.principal_axes[1]);
        let n = a.cross(&b).normalize();
        [n.x, n.y, n.z]
    }
}

/// Labels a symmetric correlation matrix by the rank and signs of its
/// spectrum. Eigenvalues with |λ| ≤ tol·max(1, |λ|max) count as zero.
pub fn classify_shape(c_sym: &CorrelationMatrix, tol: f64) -> Result<ShapeClass> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("shape tolerance {tol} must be positive")));
    }
    let asymmetry = c_sym.asymmetry();
    if asymmetry > SYMMETRY_TOL || !c_sym.is_finite() {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let eig = SymmetricEigen::new(c_sym.symmetrized().to_matrix3());

    let mut order = [0usize, 1, 2];
    let ev = eig.eigenvalues;
    order.sort_by(|&a, &b| {
        ev[b].abs()
            .total_cmp(&ev[a].abs())
            .then(ev[b].total_cmp(&ev[a]))
    });

    let mut principal_axes = [[0.0; 3]; 3];
    let mut axis_eigenvalues = [0.0; 3];
    for (slot, &k) in order.iter().enumerate() {
        principal_axes[slot] = canonical_sign(eig.eigenvectors.column(k).into_owned());
        axis_eigenvalues[slot] = ev[k];
    }

    let mut eigenvalues = [ev[0], ev[1], ev[2]];
    eigenvalues.sort_by(|a, b| b.total_cmp(a));

    let largest = eigenvalues.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let threshold = tol * largest.max(1.0);
    let significant: Vec<f64> = eigenvalues.iter().copied().filter(|v| v.abs() > threshold).collect();
    let same_sign = significant.iter().all(|v| *v > 0.0) || significant.iter().all(|v| *v < 0.0);
    let label = match (significant.len(), same_sign) {
        (0, _) => ShapeLabel::Zero,
        (1, _) => ShapeLabel::Dumbbell,
        (2, true) => ShapeLabel::Disk,
        (2, false) => ShapeLabel::Clover,
        (_, true) => ShapeLabel::Ellipsoid,
        (_, false) => ShapeLabel::WheelAndAxle,
    };

    Ok(ShapeClass {
        label,
        eigenvalues,
        principal_axes,
        axis_eigenvalues,
    })
}

/// Flips `v` so its largest-magnitude component is positive; ties are broken
/// toward the earlier axis.
fn canonical_sign(v: Vector3<f64>) -> [f64; 3] {
    let v = v.normalize();
    let mut lead = 0;
    for k in 1..3 {
        if v[k].abs() > v[lead].abs() + 1e-12 {
            lead = k;
        }
    }
    let s = if v[lead] < 0.0 { -1.0 } else { 1.0 };
    [s * v.x, s * v.y, s * v.z]
}
