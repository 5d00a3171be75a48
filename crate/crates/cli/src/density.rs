//! Two-spin density matrices stored as
//! `{"basis": "uu,ud,du,dd", "rho": [[[re, im], ...], ...]}`.

use std::path::Path;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spincmv::spin::TwoSpinDensityMatrix;

use crate::error::{CliError, Result};

pub const BASIS: &str = "uu,ud,du,dd";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityFile {
    basis: String,
    rho: [[[f64; 2]; 4]; 4],
}

/// Parses and validates a density-matrix file. Malformed files give
/// `ParseError`; well-formed matrices that are not states give
/// `NonPhysicalDensity`.
pub fn load_density(path: &Path) -> Result<TwoSpinDensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_density(&text).map_err(|e| match e {
        CliError::Parse { message, .. } => CliError::parse(path, message),
        other => other,
    })
}

pub fn parse_density(text: &str) -> Result<TwoSpinDensityMatrix> {
    let here = Path::new("<density>");
    let file: DensityFile = serde_json::from_str(text).map_err(|e| CliError::parse(here, e))?;
    if file.basis.replace(' ', "") != BASIS {
        return Err(CliError::parse(here, format!("basis must be {BASIS:?}, got {:?}", file.basis)));
    }
    let m = Matrix4::from_fn(|i, j| Complex64::new(file.rho[i][j][0], file.rho[i][j][1]));
    Ok(TwoSpinDensityMatrix::new(m)?)
}

pub fn density_json(rho: &TwoSpinDensityMatrix) -> String {
    let m = rho.matrix();
    let file = DensityFile {
        basis: BASIS.into(),
        rho: std::array::from_fn(|i| std::array::from_fn(|j| [m[(i, j)].re, m[(i, j)].im])),
    };
    serde_json::to_string_pretty(&file).expect("density serializes")
}
