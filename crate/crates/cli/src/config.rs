//! Run configuration. The same schema is filled from command-line flags or
//! read from a JSON file with `--config`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use spincmv::geometry::{GridSpec, DEFAULT_LEVEL};
use spincmv::models::{InitialState, DEFAULT_QUAD_POINTS};
use spincmv::spin::CorrelationMatrix;
use spincmv::states::StatePreset;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: CommandConfig,
    #[serde(default)]
    pub pairs: Vec<SitePair>,
    #[serde(default)]
    pub time: TimeGrid,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    /// Multiplies mesh vertex coordinates on output only.
    #[serde(default = "default_display_scale")]
    pub display_scale: f64,
}

fn default_level() -> f64 {
    DEFAULT_LEVEL
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json]
}

fn default_display_scale() -> f64 {
    1.0
}

impl RunConfig {
    pub fn new(command: CommandConfig) -> Self {
        Self {
            command,
            pairs: Vec::new(),
            time: TimeGrid::default(),
            grid: GridSpec::default(),
            level: DEFAULT_LEVEL,
            output_dir: default_output_dir(),
            formats: default_formats(),
            display_scale: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.time.validate()?;
        self.grid.validate()?;
        if self.formats.is_empty() {
            return Err(CliError::Config("at least one output format is required".into()));
        }
        if !(self.level > 0.0) || !self.level.is_finite() {
            return Err(CliError::Config(format!("level {} must be positive", self.level)));
        }
        if !(self.display_scale > 0.0) || !self.display_scale.is_finite() {
            return Err(CliError::Config(format!(
                "display scale {} must be positive",
                self.display_scale
            )));
        }
        for p in &self.pairs {
            if p.i == p.j {
                return Err(CliError::Config(format!("pair {p} joins a site to itself")));
            }
        }
        self.command.validate()
    }

    pub fn writes_meshes(&self) -> bool {
        self.formats.iter().any(|f| f.is_mesh())
    }

    /// Pairs to evaluate, with the command's default when none are given.
    pub fn effective_pairs(&self) -> Vec<SitePair> {
        if !self.pairs.is_empty() {
            return self.pairs.clone();
        }
        match &self.command {
            CommandConfig::Hubbard(_) => vec![SitePair::new(0, 1)],
            CommandConfig::Animate(DynamicModel::Hubbard(_)) => vec![SitePair::new(0, 1)],
            _ => vec![SitePair::new(1, 2)],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandConfig {
    State(Source),
    Ising(IsingArgs),
    IsingLindblad(LindbladArgs),
    Hubbard(HubbardArgs),
    Tfim(TfimArgs),
    Classify(Source),
    Mesh(Source),
    Animate(DynamicModel),
    Verify,
}

impl CommandConfig {
    pub fn name(&self) -> &'static str {
        match self {
            CommandConfig::State(_) => "state",
            CommandConfig::Ising(_) => "ising",
            CommandConfig::IsingLindblad(_) => "ising-lindblad",
            CommandConfig::Hubbard(_) => "hubbard",
            CommandConfig::Tfim(_) => "tfim",
            CommandConfig::Classify(_) => "classify",
            CommandConfig::Mesh(_) => "mesh",
            CommandConfig::Animate(_) => "animate",
            CommandConfig::Verify => "verify",
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CommandConfig::State(s) | CommandConfig::Classify(s) | CommandConfig::Mesh(s) => s.validate(),
            CommandConfig::Hubbard(h) | CommandConfig::Animate(DynamicModel::Hubbard(h)) => h.validate(),
            _ => Ok(()),
        }
    }
}

/// Time-dependent models that `animate` can drive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicModel {
    Ising(IsingArgs),
    IsingLindblad(LindbladArgs),
    Hubbard(HubbardArgs),
}

/// Where a single pair's observables come from. Exactly one field is set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Source {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<StatePreset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<PathBuf>,
    /// A connected correlation matrix given directly (no Bloch vectors).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<CorrelationMatrix>,
}

impl Source {
    fn validate(&self) -> Result<()> {
        let set = [self.preset.is_some(), self.density.is_some(), self.matrix.is_some()]
            .into_iter()
            .filter(|&b| b)
            .count();
        if set != 1 {
            return Err(CliError::Config(
                "exactly one of preset, density or matrix must be given".into(),
            ));
        }
        Ok(())
    }
}

/// Coherent Ising quench; times are Jt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IsingArgs {
    pub theta: f64,
}

/// Dissipative Ising quench; `gamma` is Γ/J and times are Jt.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LindbladArgs {
    #[serde(default = "half_pi")]
    pub theta: f64,
    pub gamma: f64,
}

fn half_pi() -> f64 {
    FRAC_PI_2
}

/// U = 0 Hubbard quench; times are 𝒥t.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardArgs {
    /// Tipping angles repeated along the chain; the canted antiferromagnet
    /// by default.
    #[serde(default = "canted_angles")]
    pub angles: Vec<f64>,
}

fn canted_angles() -> Vec<f64> {
    InitialState::canted_afm().angles
}

impl Default for HubbardArgs {
    fn default() -> Self {
        Self {
            angles: canted_angles(),
        }
    }
}

impl HubbardArgs {
    fn validate(&self) -> Result<()> {
        if self.angles.is_empty() || self.angles.iter().any(|a| !a.is_finite()) {
            return Err(CliError::Config("hubbard angles must be a nonempty list of numbers".into()));
        }
        Ok(())
    }

    pub fn initial_state(&self) -> InitialState {
        InitialState {
            angles: self.angles.clone(),
        }
    }
}

/// Transverse-field Ising chain in equilibrium; `temperature` is T/J.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TfimArgs {
    pub g: f64,
    pub temperature: f64,
    #[serde(default = "default_quad_points")]
    pub quad_points: usize,
}

fn default_quad_points() -> usize {
    DEFAULT_QUAD_POINTS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub frames: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_start: 0.0,
            t_end: 0.0,
            frames: 1,
        }
    }
}

impl TimeGrid {
    fn validate(&self) -> Result<()> {
        if self.frames < 1 {
            return Err(CliError::Config("frames must be ≥ 1".into()));
        }
        if !(self.t_end >= self.t_start) || !self.t_start.is_finite() || !self.t_end.is_finite() {
            return Err(CliError::Config(format!(
                "time range [{}, {}] is empty",
                self.t_start, self.t_end
            )));
        }
        Ok(())
    }

    /// Evenly spaced times including both ends.
    pub fn times(&self) -> Vec<f64> {
        if self.frames == 1 {
            return vec![self.t_start];
        }
        let step = (self.t_end - self.t_start) / (self.frames - 1) as f64;
        (0..self.frames).map(|k| self.t_start + step * k as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Obj,
    Ply,
}

impl Format {
    pub fn is_mesh(self) -> bool {
        matches!(self, Format::Obj | Format::Ply)
    }

    pub fn extension(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Obj => "obj",
            Format::Ply => "ply",
        }
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "obj" => Ok(Format::Obj),
            "ply" => Ok(Format::Ply),
            _ => Err(format!("unknown format {s:?} (expected json, obj or ply)")),
        }
    }
}

/// Ordered site pair written `i:j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SitePair {
    pub i: i64,
    pub j: i64,
}

impl SitePair {
    pub fn new(i: i64, j: i64) -> Self {
        Self { i, j }
    }

    pub fn separation(&self) -> u32 {
        self.i.abs_diff(self.j) as u32
    }

    /// `1-2` in file names.
    pub fn label(&self) -> String {
        format!("{}-{}", self.i, self.j)
    }
}

impl fmt::Display for SitePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.i, self.j)
    }
}

impl FromStr for SitePair {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("pair {s:?} is not of the form i:j"))?;
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("pair {s:?}: {e}"));
        let pair = SitePair::new(parse(a)?, parse(b)?);
        if pair.i == pair.j {
            return Err(format!("pair {s:?} joins a site to itself"));
        }
        Ok(pair)
    }
}

/// Reads an angle such as `0.785`, `pi/4`, `3pi/4`, `π/2` or `-pi`.
pub fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    let t = s.trim().replace('π', "pi").to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let err = || format!("cannot read angle {s:?}");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| err())?),
        None => (t.as_str(), 1.0),
    };
    let coef = num.strip_suffix("pi").ok_or_else(err)?.trim().trim_end_matches('*');
    let coef = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| err())?,
    };
    Ok(coef * PI / den)
}
