//! Library side of the `spincmv` command: configuration, record and mesh
//! output, and the oracle verification suite.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod args;
pub mod config;
pub mod density;
pub mod error;
pub mod meshio;
pub mod record;
pub mod run;
pub mod verify;

pub use error::{CliError, Result};
