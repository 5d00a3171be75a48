//! Command-line surface. Every invocation becomes a [`RunConfig`], either
//! read from `--config` or assembled from a subcommand.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spincmv::spin::CorrelationMatrix;
use spincmv::states::StatePreset;

use crate::config::{
    parse_angle, CommandConfig, DynamicModel, Format, HubbardArgs, IsingArgs, LindbladArgs, RunConfig,
    SitePair, Source, TfimArgs, TimeGrid,
};
use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "spincmv", version, about = "Two-spin correlation shapes and level-set meshes")]
pub struct Cli {
    /// JSON run configuration; cannot be combined with a subcommand.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Comma-separated output formats: json, obj, ply.
    #[arg(long, global = true, value_delimiter = ',')]
    pub formats: Option<Vec<Format>>,
    /// Level P of the drawn surfaces Q_f = ±P.
    #[arg(long, global = true)]
    pub level: Option<f64>,
    /// Half-width of the sampling cube.
    #[arg(long, global = true)]
    pub grid_extent: Option<f64>,
    /// Cells per cube edge.
    #[arg(long, global = true)]
    pub grid_resolution: Option<usize>,
    /// Scale applied to mesh coordinates on output.
    #[arg(long, global = true)]
    pub display_scale: Option<f64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Observables and shape of a named or loaded two-spin state.
    State(StateArgs),
    /// Coherent Ising quench from a tipped product state.
    Ising(IsingCmd),
    /// Ising quench with spontaneous emission.
    IsingLindblad(LindbladCmd),
    /// Free-fermion quench from a product state.
    Hubbard(HubbardCmd),
    /// Transverse-field Ising chain in thermal equilibrium.
    Tfim(TfimCmd),
    /// Shape classification of a state or matrix.
    Classify(SourceArgs),
    /// Level-set meshes of a state or matrix.
    Mesh(SourceArgs),
    /// Mesh sequence over a time grid.
    Animate(AnimateCmd),
    /// Runs the oracle comparisons and prints one line per criterion.
    Verify,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Also write obj meshes.
    #[arg(long)]
    pub mesh: bool,
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Named state, e.g. bell-phi+ or w3-pair.
    #[arg(long, value_parser = parse_preset, conflicts_with_all = ["density", "matrix"])]
    pub name: Option<StatePreset>,
    /// JSON density matrix file.
    #[arg(long, conflicts_with = "matrix")]
    pub density: Option<PathBuf>,
    /// Nine comma-separated entries, row major.
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    pub matrix: Option<CorrelationMatrix>,
}

#[derive(Debug, Args)]
pub struct TimeArgs {
    #[arg(long = "Jt-min", alias = "jt-min", default_value_t = 0.0)]
    pub jt_min: f64,
    #[arg(long = "Jt-max", alias = "jt-max", default_value_t = 0.0)]
    pub jt_max: f64,
    #[arg(long, default_value_t = 1)]
    pub frames: usize,
    /// Site pairs i:j, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub pairs: Vec<SitePair>,
    /// Also write obj meshes.
    #[arg(long)]
    pub mesh: bool,
}

#[derive(Debug, Args)]
pub struct IsingCmd {
    #[arg(long, value_parser = parse_angle)]
    pub theta: f64,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Args)]
pub struct LindbladCmd {
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    /// Γ/J.
    #[arg(long)]
    pub gamma: f64,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Args)]
pub struct HubbardCmd {
    /// Tipping angles repeated along the chain.
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, default_values = ["pi/4", "3pi/4"])]
    pub angles: Vec<f64>,
    #[command(flatten)]
    pub time: TimeArgs,
}

#[derive(Debug, Args)]
pub struct TfimCmd {
    /// Field ratio h/J.
    #[arg(long)]
    pub g: f64,
    /// Temperature T/J.
    #[arg(long = "T", alias = "temperature")]
    pub temperature: f64,
    /// Separations, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_value = "1")]
    pub n: Vec<u32>,
    #[arg(long, default_value_t = spincmv::models::DEFAULT_QUAD_POINTS)]
    pub quad_points: usize,
    /// Also write obj meshes.
    #[arg(long)]
    pub mesh: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnimateModel {
    Ising,
    IsingLindblad,
    Hubbard,
}

#[derive(Debug, Args)]
pub struct AnimateCmd {
    #[arg(long, value_enum)]
    pub model: AnimateModel,
    #[arg(long, value_parser = parse_angle, default_value = "pi/2")]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub gamma: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_angle, default_values = ["pi/4", "3pi/4"])]
    pub angles: Vec<f64>,
    #[command(flatten)]
    pub time: TimeArgs,
}

fn parse_preset(s: &str) -> std::result::Result<StatePreset, String> {
    s.parse::<StatePreset>().map_err(|e| e.to_string())
}

fn parse_matrix(s: &str) -> std::result::Result<CorrelationMatrix, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("matrix entry {x:?}: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != 9 {
        return Err(format!("matrix needs 9 entries, got {}", v.len()));
    }
    Ok(CorrelationMatrix::from_fn(|i, j| v[3 * i + j]))
}

impl SourceArgs {
    fn source(&self) -> Source {
        Source {
            preset: self.name,
            density: self.density.clone(),
            matrix: self.matrix,
        }
    }
}

impl TimeArgs {
    fn grid(&self) -> TimeGrid {
        TimeGrid {
            t_start: self.jt_min,
            t_end: self.jt_max,
            frames: self.frames,
        }
    }
}

/// Builds the run configuration. Returns `None` for `verify`.
pub fn resolve(cli: &Cli) -> Result<Option<RunConfig>> {
    let mut config = match (&cli.config, &cli.command) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("--config cannot be combined with a subcommand".into()))
        }
        (None, None) => return Err(CliError::Usage("a subcommand or --config is required".into())),
        (None, Some(Command::Verify)) => return Ok(None),
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let config: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?;
            if config.command == CommandConfig::Verify {
                return Ok(None);
            }
            config
        }
        (None, Some(command)) => from_command(command),
    };
    if let Some(out) = &cli.out {
        config.output_dir = out.clone();
    }
    if let Some(formats) = &cli.formats {
        config.formats = formats.clone();
    }
    if let Some(level) = cli.level {
        config.level = level;
    }
    if let Some(half_extent) = cli.grid_extent {
        config.grid.half_extent = half_extent;
    }
    if let Some(resolution) = cli.grid_resolution {
        config.grid.resolution = resolution;
    }
    if let Some(scale) = cli.display_scale {
        config.display_scale = scale;
    }
    config.validate()?;
    Ok(Some(config))
}

fn from_command(command: &Command) -> RunConfig {
    let (cmd, time, mesh): (CommandConfig, Option<&TimeArgs>, bool) = match command {
        Command::State(a) => (CommandConfig::State(a.source.source()), None, a.mesh),
        Command::Ising(a) => (CommandConfig::Ising(IsingArgs { theta: a.theta }), Some(&a.time), a.time.mesh),
        Command::IsingLindblad(a) => (
            CommandConfig::IsingLindblad(LindbladArgs {
                theta: a.theta,
                gamma: a.gamma,
            }),
            Some(&a.time),
            a.time.mesh,
        ),
        Command::Hubbard(a) => (
            CommandConfig::Hubbard(HubbardArgs {
                angles: a.angles.clone(),
            }),
            Some(&a.time),
            a.time.mesh,
        ),
        Command::Tfim(a) => (
            CommandConfig::Tfim(TfimArgs {
                g: a.g,
                temperature: a.temperature,
                quad_points: a.quad_points,
            }),
            None,
            a.mesh,
        ),
        Command::Classify(s) => (CommandConfig::Classify(s.source()), None, false),
        Command::Mesh(s) => (CommandConfig::Mesh(s.source()), None, true),
        Command::Animate(a) => {
            let model = match a.model {
                AnimateModel::Ising => DynamicModel::Ising(IsingArgs { theta: a.theta }),
                AnimateModel::IsingLindblad => DynamicModel::IsingLindblad(LindbladArgs {
                    theta: a.theta,
                    gamma: a.gamma,
                }),
                AnimateModel::Hubbard => DynamicModel::Hubbard(HubbardArgs {
                    angles: a.angles.clone(),
                }),
            };
            (CommandConfig::Animate(model), Some(&a.time), true)
        }
        Command::Verify => unreachable!("verify has no run configuration"),
    };
    let mut config = RunConfig::new(cmd);
    if let Some(t) = time {
        config.time = t.grid();
        config.pairs = t.pairs.clone();
    }
    if let Command::Tfim(a) = command {
        config.pairs = a.n.iter().map(|&n| SitePair::new(0, n as i64)).collect();
    }
    if mesh {
        config.formats.push(Format::Obj);
    }
    config
}
