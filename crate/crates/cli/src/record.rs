//! Schema-versioned correlation records.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spincmv::spin::{
    classify_shape, irreducible_decompose, split_symmetric_antisymmetric, CorrelationMatrix,
    IrreducibleParts, PairObservables, Pseudovector, ShapeClass, DEFAULT_SHAPE_TOL,
};
use spincmv::geometry::{visible_shape, GridSpec};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: &str = "spincmv.record/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationRecord {
    pub schema_version: String,
    pub metadata: RunMetadata,
    pub frames: Vec<FrameRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunMetadata {
    pub generator: String,
    pub model: String,
    /// The command section of the run configuration.
    pub params: serde_json::Value,
    /// Unit of the frame times (`Jt`, `𝒥t`) or null for static inputs.
    pub time_unit: Option<String>,
    pub level: f64,
    pub grid: GridSpec,
    pub display_scale: f64,
    pub conventions: Conventions,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    pub basis: String,
    pub matrix_layout: String,
    pub pseudovector: String,
    pub shape_tolerance: f64,
    pub visible_shape: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tfim_axis_map: Option<String>,
}

impl Conventions {
    pub fn standard(tfim_axis_map: Option<&str>) -> Self {
        Self {
            basis: "uu,ud,du,dd; sigma_z|u> = +|u>".into(),
            matrix_layout: "row-major, rows and columns ordered x, y, z".into(),
            pseudovector: "a = (A_yz, A_zx, A_xy) with A = (C - C^T)/2".into(),
            shape_tolerance: DEFAULT_SHAPE_TOL,
            visible_shape: "eigenvalues with |lambda| * 2/(3 sqrt 3) < level treated as zero".into(),
            tfim_axis_map: tfim_axis_map.map(str::to_owned),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub index: usize,
    pub time: Option<f64>,
    pub pairs: Vec<PairRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairRecord {
    pub sites: [i64; 2],
    /// Absent when only a correlation matrix was supplied.
    pub observables: Option<PairObservables>,
    /// The connected matrix the shape data describe.
    pub correlation: CorrelationMatrix,
    /// Shape of the symmetric part at the exact-rank tolerance.
    pub shape: ShapeClass,
    /// Shape of the level sets actually drawn at the run's level.
    pub visible_shape: ShapeClass,
    pub pseudovector: Pseudovector,
    pub irreducible: IrreducibleParts,
    /// Mesh files written for this pair, relative to the record.
    pub meshes: Vec<String>,
    /// Whether a level set reaches the grid boundary.
    pub clipped: Option<bool>,
}

impl PairRecord {
    pub fn new(
        sites: [i64; 2],
        observables: Option<PairObservables>,
        correlation: CorrelationMatrix,
        level: f64,
    ) -> Result<Self> {
        let (symmetric, pseudovector) = split_symmetric_antisymmetric(&correlation);
        Ok(Self {
            sites,
            observables,
            correlation,
            shape: classify_shape(&symmetric, DEFAULT_SHAPE_TOL)?,
            visible_shape: visible_shape(&symmetric, level)?,
            pseudovector,
            irreducible: irreducible_decompose(&correlation),
            meshes: Vec::new(),
            clipped: None,
        })
    }
}

impl CorrelationRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// Checks the invariants a reader relies on.
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("schema version {:?}, expected {SCHEMA_VERSION:?}", self.schema_version));
        }
        for (k, frame) in self.frames.iter().enumerate() {
            if frame.index != k {
                return Err(format!("frame {k} carries index {}", frame.index));
            }
            for pair in &frame.pairs {
                if let Some(obs) = &pair.observables {
                    if obs.consistency_error() > 1e-12 {
                        return Err(format!("frame {k}: connected matrix inconsistent with raw"));
                    }
                    if obs.c_connected != pair.correlation {
                        return Err(format!("frame {k}: correlation differs from observables"));
                    }
                }
                for shape in [&pair.shape, &pair.visible_shape] {
                    if !shape.eigenvalues.windows(2).all(|w| w[0] >= w[1]) {
                        return Err(format!("frame {k}: eigenvalues not sorted"));
                    }
                }
                if pair.irreducible.reconstruct().max_abs_diff(&pair.correlation) > 1e-12 {
                    return Err(format!("frame {k}: irreducible parts do not reconstruct"));
                }
            }
        }
        Ok(())
    }
}

pub fn read_record(path: &Path) -> Result<CorrelationRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let record: CorrelationRecord = serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?;
    record.validate().map_err(|e| CliError::parse(path, e))?;
    Ok(record)
}
