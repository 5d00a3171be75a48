use serde::{Deserialize, Serialize};

use super::forms::{compactified, compactified_multilinear, compactified_pseudovector, Point};
use super::mesh::{polygonize, sample, touches_boundary, GridSpec, LevelSetMesh, Sign};
use crate::error::{Error, Result};
use crate::spin::{CorrelationMatrix, CorrelationTensorN, Pseudovector};

/// The positive and negative level sets of one field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSetPair {
    pub positive: LevelSetMesh,
    pub negative: LevelSetMesh,
    /// The body above the level (for either sign) reaches the grid boundary,
    /// so the meshes are cut open there.
    pub clipped: bool,
}

impl LevelSetPair {
    pub fn mesh(&self, sign: Sign) -> &LevelSetMesh {
        match sign {
            Sign::Positive => &self.positive,
            Sign::Negative => &self.negative,
        }
    }
}

/// Level sets {field = +level} and {field = −level} of an arbitrary field.
pub fn extract_field_level_sets(
    field: &(dyn Fn(Point) -> f64 + Sync),
    level: f64,
    grid: &GridSpec,
) -> Result<LevelSetPair> {
    grid.validate()?;
    if !(level > 0.0) || !level.is_finite() {
        return Err(Error::InvalidParameter(format!("level {level} must be positive")));
    }
    let values = sample(field, grid);
    let clipped = touches_boundary(&values, grid, Sign::Positive, level)
        || touches_boundary(&values, grid, Sign::Negative, level);
    Ok(LevelSetPair {
        positive: polygonize(field, &values, grid, Sign::Positive, level),
        negative: polygonize(field, &values, grid, Sign::Negative, level),
        clipped,
    })
}

/// Signed level sets of the compactified quadratic form Q_f = ±P.
pub fn extract_level_sets(c: &CorrelationMatrix, level: f64, grid: &GridSpec) -> Result<LevelSetPair> {
    if !c.is_finite() {
        return Err(Error::InvalidParameter("correlation matrix has non-finite entries".into()));
    }
    let c = *c;
    extract_field_level_sets(&move |r| compactified(&c, r), level, grid)
}

/// Signed level sets of F/(1 + r²)^{(N+1)/2} for an order-N tensor. Order 2
/// goes through [`extract_level_sets`] so the two agree exactly.
pub fn extract_level_sets_multilinear(
    tensor: &CorrelationTensorN,
    level: f64,
    grid: &GridSpec,
) -> Result<LevelSetPair> {
    if let Some(c) = tensor.as_matrix() {
        return extract_level_sets(&c, level, grid);
    }
    let tensor = CorrelationTensorN::new(tensor.order, tensor.entries.clone())?;
    extract_field_level_sets(&move |r| compactified_multilinear(&tensor, r), level, grid)
}

/// Signed level sets of a·r/(1 + r²).
pub fn extract_pseudovector_level_sets(
    a: &Pseudovector,
    level: f64,
    grid: &GridSpec,
) -> Result<LevelSetPair> {
    let a = *a;
    extract_field_level_sets(&move |r| compactified_pseudovector(&a, r), level, grid)
}

/// Vertex counts of both meshes at the grid resolution and at twice it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridRefinementReport {
    pub coarse_vertices: [usize; 2],
    pub fine_vertices: [usize; 2],
    /// Largest relative change of the vertex count after rescaling the fine
    /// count by the squared spacing ratio (vertex density is per area).
    pub relative_change: f64,
    /// A mesh is nonempty at the base resolution and its rescaled vertex
    /// count moves by more than 20% at double resolution, or a mesh appears
    /// only after refinement.
    pub too_coarse: bool,
}

/// Re-extracts at doubled resolution and compares vertex counts.
pub fn check_grid_refinement(c: &CorrelationMatrix, level: f64, grid: &GridSpec) -> Result<GridRefinementReport> {
    let fine_grid = GridSpec::new(grid.half_extent, 2 * grid.resolution)?;
    let coarse = extract_level_sets(c, level, grid)?;
    let fine = extract_level_sets(c, level, &fine_grid)?;
    let area_ratio = (fine_grid.spacing() / grid.spacing()).powi(2);

    let coarse_vertices = [coarse.positive.vertices.len(), coarse.negative.vertices.len()];
    let fine_vertices = [fine.positive.vertices.len(), fine.negative.vertices.len()];
    let mut relative_change: f64 = 0.0;
    let mut too_coarse = false;
    for s in 0..2 {
        let (nc, nf) = (coarse_vertices[s] as f64, fine_vertices[s] as f64);
        if nc > 0.0 {
            let change = (nf * area_ratio - nc).abs() / nc;
            relative_change = relative_change.max(change);
            too_coarse |= change > 0.2;
        } else if nf > 0.0 {
            relative_change = f64::INFINITY;
            too_coarse = true;
        }
    }
    Ok(GridRefinementReport {
        coarse_vertices,
        fine_vertices,
        relative_change,
        too_coarse,
    })
}
