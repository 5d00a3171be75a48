//! Named two-spin states: the four Bell states, pair reductions of the
//! three-spin GHZ and W states, and two classical mixtures.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix4;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::TwoSpinDensityMatrix;

// Basis indices in {↑↑, ↑↓, ↓↑, ↓↓}.
const UU: usize = 0;
const UD: usize = 1;
const DU: usize = 2;
const DD: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StatePreset {
    /// (|↓↓⟩ + |↑↑⟩)/√2
    #[serde(rename = "bell-phi+")]
    BellPhiPlus,
    /// (|↓↓⟩ − |↑↑⟩)/√2
    #[serde(rename = "bell-phi-")]
    BellPhiMinus,
    /// (|↓↑⟩ + |↑↓⟩)/√2
    #[serde(rename = "bell-psi+")]
    BellPsiPlus,
    /// (|↓↑⟩ − |↑↓⟩)/√2
    #[serde(rename = "bell-psi-")]
    BellPsiMinus,
    /// Any pair of (|↓↓↓⟩ + |↑↑↑⟩)/√2.
    #[serde(rename = "ghz3-pair")]
    Ghz3Pair,
    /// Any pair of (|↓↓↑⟩ + |↓↑↓⟩ + |↑↓↓⟩)/√3.
    #[serde(rename = "w3-pair")]
    W3Pair,
    /// (|↓↓⟩⟨↓↓| + |↑↑⟩⟨↑↑|)/2
    #[serde(rename = "mixed-zz")]
    MixedZz,
    /// (|↓↑⟩⟨↓↑| + |↑↓⟩⟨↑↓|)/2
    #[serde(rename = "mixed-updown")]
    MixedUpDown,
}

impl StatePreset {
    pub const ALL: [StatePreset; 8] = [
        StatePreset::BellPhiPlus,
        StatePreset::BellPhiMinus,
        StatePreset::BellPsiPlus,
        StatePreset::BellPsiMinus,
        StatePreset::Ghz3Pair,
        StatePreset::W3Pair,
        StatePreset::MixedZz,
        StatePreset::MixedUpDown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StatePreset::BellPhiPlus => "bell-phi+",
            StatePreset::BellPhiMinus => "bell-phi-",
            StatePreset::BellPsiPlus => "bell-psi+",
            StatePreset::BellPsiMinus => "bell-psi-",
            StatePreset::Ghz3Pair => "ghz3-pair",
            StatePreset::W3Pair => "w3-pair",
            StatePreset::MixedZz => "mixed-zz",
            StatePreset::MixedUpDown => "mixed-updown",
        }
    }

    pub fn density(self) -> TwoSpinDensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let rho = match self {
            StatePreset::BellPhiPlus => pure(&[(DD, h), (UU, h)]),
            StatePreset::BellPhiMinus => pure(&[(DD, h), (UU, -h)]),
            StatePreset::BellPsiPlus => pure(&[(DU, h), (UD, h)]),
            StatePreset::BellPsiMinus => pure(&[(DU, h), (UD, -h)]),
            StatePreset::Ghz3Pair | StatePreset::MixedZz => mixture(&[(DD, 0.5), (UU, 0.5)]),
            StatePreset::MixedUpDown => mixture(&[(DU, 0.5), (UD, 0.5)]),
            StatePreset::W3Pair => {
                // Third spin up leaves |↓↓⟩; third spin down leaves |↓↑⟩ + |↑↓⟩.
                let s = 1.0 / 3.0_f64.sqrt();
                pure(&[(DD, s)]) + pure(&[(DU, s), (UD, s)])
            }
        };
        TwoSpinDensityMatrix::new(rho).expect("preset states are physical")
    }
}

impl fmt::Display for StatePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatePreset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatePreset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown state preset {s:?}")))
    }
}

/// |ψ⟩⟨ψ| for sparse real amplitudes (possibly unnormalized).
fn pure(amps: &[(usize, f64)]) -> Matrix4<Complex64> {
    let mut psi = [0.0; 4];
    for &(k, a) in amps {
        psi[k] = a;
    }
    Matrix4::from_fn(|r, s| Complex64::new(psi[r] * psi[s], 0.0))
}

fn mixture(weights: &[(usize, f64)]) -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    for &(k, w) in weights {
        m[(k, k)] = Complex64::new(w, 0.0);
    }
    m
}
