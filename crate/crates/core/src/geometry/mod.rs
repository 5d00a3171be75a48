//! Quadratic and multilinear correlation forms, their compactified level
//! sets, and lobe extents along a direction.

mod compare;
mod forms;
mod levelsets;
mod mesh;

pub use compare::vertex_hausdorff;
pub use forms::{
    cmv_extent, compactified, compactified_multilinear, compactified_pseudovector,
    correlation_along, extent_asymptote, multilinear_form, norm, pseudovector_form, quad_form,
    visible_shape, Extent, Point, PROFILE_PEAK,
};
pub use levelsets::{
    check_grid_refinement, extract_field_level_sets, extract_level_sets,
    extract_level_sets_multilinear, extract_pseudovector_level_sets, GridRefinementReport,
    LevelSetPair,
};
pub use mesh::{
    GridSpec, LevelSetMesh, Sign, DEFAULT_HALF_EXTENT, DEFAULT_LEVEL, DEFAULT_RESOLUTION,
};
