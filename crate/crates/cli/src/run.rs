//! Executes a [`RunConfig`]: evaluates every (frame, pair), classifies, and
//! writes the record and meshes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use spincmv::geometry::{extract_level_sets, LevelSetMesh};
use spincmv::models::{
    hubbard_quench, ising_coherent, ising_dissipative, tfim_correlations, HubbardParams,
    IsingParams, TfimParams, TFIM_AXIS_MAP,
};
use spincmv::spin::{pair_observables_from_density, PairObservables};

use crate::config::{CommandConfig, DynamicModel, Format, RunConfig, SitePair, Source};
use crate::density::load_density;
use crate::error::{CliError, Result};
use crate::meshio::{write_obj, write_ply};
use crate::record::{Conventions, CorrelationRecord, FrameRecord, PairRecord, RunMetadata, SCHEMA_VERSION};

pub const RECORD_FILE: &str = "record.json";

#[derive(Debug)]
pub struct RunOutput {
    pub record: CorrelationRecord,
    /// Every file written, in write order.
    pub files: Vec<PathBuf>,
}

/// What one (frame, pair) evaluation produced.
enum Evaluated {
    Observables(PairObservables),
    Matrix(spincmv::spin::CorrelationMatrix),
}

/// The model part of a command, with static sources already loaded.
enum Plan {
    Static(Evaluated),
    Ising(f64),
    Lindblad { theta: f64, gamma: f64 },
    Hubbard(crate::config::HubbardArgs),
    Tfim(crate::config::TfimArgs),
}

impl Plan {
    fn time_unit(&self) -> Option<&'static str> {
        match self {
            Plan::Ising(_) | Plan::Lindblad { .. } => Some("J t"),
            Plan::Hubbard(_) => Some("hopping t"),
            Plan::Static(_) | Plan::Tfim(_) => None,
        }
    }

    fn evaluate(&self, pair: SitePair, time: Option<f64>) -> Result<Evaluated> {
        let t = time.unwrap_or(0.0);
        let n = pair.separation();
        Ok(match self {
            Plan::Static(Evaluated::Observables(o)) => Evaluated::Observables(*o),
            Plan::Static(Evaluated::Matrix(c)) => Evaluated::Matrix(*c),
            Plan::Ising(theta) => {
                Evaluated::Observables(ising_coherent(&IsingParams::coherent(1.0, *theta, t), n)?)
            }
            Plan::Lindblad { theta, gamma } => {
                let p = IsingParams {
                    j: 1.0,
                    theta: *theta,
                    gamma: *gamma,
                    t,
                };
                Evaluated::Observables(ising_dissipative(&p, n)?.observables)
            }
            Plan::Hubbard(h) => Evaluated::Observables(hubbard_quench(&HubbardParams {
                hopping: 1.0,
                t,
                q: pair.i,
                r: pair.j,
                initial_state: h.initial_state(),
                bessel_cutoff: None,
            })?),
            Plan::Tfim(a) => {
                let mut p = TfimParams::new(a.g, a.temperature, n);
                p.quad_points = a.quad_points;
                Evaluated::Observables(tfim_correlations(&p)?)
            }
        })
    }
}

fn load_source(source: &Source) -> Result<Evaluated> {
    if let Some(preset) = source.preset {
        return Ok(Evaluated::Observables(pair_observables_from_density(&preset.density())));
    }
    if let Some(path) = &source.density {
        return Ok(Evaluated::Observables(pair_observables_from_density(&load_density(path)?)));
    }
    match source.matrix {
        Some(c) if c.is_finite() => Ok(Evaluated::Matrix(c)),
        Some(_) => Err(CliError::Config("matrix has non-finite entries".into())),
        None => Err(CliError::Config("no source given".into())),
    }
}

fn plan(command: &CommandConfig) -> Result<(Plan, Vec<String>)> {
    let mut warnings = Vec::new();
    let dynamic = |m: &DynamicModel, warnings: &mut Vec<String>| match m {
        DynamicModel::Ising(a) => Plan::Ising(a.theta),
        DynamicModel::IsingLindblad(a) => {
            if a.theta != std::f64::consts::FRAC_PI_2 {
                warnings.push("dissipative closed forms are validated only for theta = pi/2".into());
            }
            Plan::Lindblad {
                theta: a.theta,
                gamma: a.gamma,
            }
        }
        DynamicModel::Hubbard(h) => Plan::Hubbard(h.clone()),
    };
    let p = match command {
        CommandConfig::State(s) | CommandConfig::Classify(s) | CommandConfig::Mesh(s) => Plan::Static(load_source(s)?),
        CommandConfig::Ising(a) => dynamic(&DynamicModel::Ising(*a), &mut warnings),
        CommandConfig::IsingLindblad(a) => dynamic(&DynamicModel::IsingLindblad(*a), &mut warnings),
        CommandConfig::Hubbard(h) => dynamic(&DynamicModel::Hubbard(h.clone()), &mut warnings),
        CommandConfig::Animate(m) => dynamic(m, &mut warnings),
        CommandConfig::Tfim(a) => Plan::Tfim(*a),
        CommandConfig::Verify => {
            return Err(CliError::Config("verify is not a record-producing command".into()))
        }
    };
    Ok((p, warnings))
}

fn model_name(command: &CommandConfig) -> &'static str {
    match command {
        CommandConfig::Animate(DynamicModel::Ising(_)) => "ising",
        CommandConfig::Animate(DynamicModel::IsingLindblad(_)) => "ising-lindblad",
        CommandConfig::Animate(DynamicModel::Hubbard(_)) => "hubbard",
        other => other.name(),
    }
}

/// Mesh formats in effect: `mesh` and `animate` always produce meshes.
fn mesh_formats(config: &RunConfig) -> Vec<Format> {
    let mut formats: Vec<Format> = config.formats.iter().copied().filter(|f| f.is_mesh()).collect();
    formats.dedup();
    if formats.is_empty() && matches!(config.command, CommandConfig::Mesh(_) | CommandConfig::Animate(_)) {
        formats.push(Format::Obj);
    }
    formats
}

pub fn mesh_file_name(frame: usize, pair: SitePair, mesh: &LevelSetMesh, format: Format) -> String {
    format!(
        "frame_{frame:04}_pair_{}_{}.{}",
        pair.label(),
        mesh.sign.suffix(),
        format.extension()
    )
}

/// Computes the record and the meshes without touching the filesystem.
pub fn compute(config: &RunConfig) -> Result<(CorrelationRecord, Vec<(String, LevelSetMesh)>)> {
    config.validate()?;
    let (plan, warnings) = plan(&config.command)?;
    let pairs = if matches!(plan, Plan::Static(_)) {
        vec![config.pairs.first().copied().unwrap_or(SitePair::new(1, 2))]
    } else {
        config.effective_pairs()
    };
    let times: Vec<Option<f64>> = match plan.time_unit() {
        Some(_) => config.time.times().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let formats = mesh_formats(config);

    type FrameOut = (FrameRecord, Vec<(String, LevelSetMesh)>);
    let frames: Vec<FrameOut> = times
        .par_iter()
        .enumerate()
        .map(|(k, &time)| -> Result<FrameOut> {
            let mut records = Vec::with_capacity(pairs.len());
            let mut meshes = Vec::new();
            for &pair in &pairs {
                let (observables, correlation) = match plan.evaluate(pair, time)? {
                    Evaluated::Observables(o) => (Some(o), o.c_connected),
                    Evaluated::Matrix(c) => (None, c),
                };
                let mut rec = PairRecord::new([pair.i, pair.j], observables, correlation, config.level)?;
                if !formats.is_empty() {
                    let sets = extract_level_sets(&correlation.symmetrized(), config.level, &config.grid)?;
                    rec.clipped = Some(sets.clipped);
                    for mesh in [sets.positive, sets.negative] {
                        for &f in &formats {
                            let name = mesh_file_name(k, pair, &mesh, f);
                            rec.meshes.push(name.clone());
                            meshes.push((name, mesh.clone()));
                        }
                    }
                }
                records.push(rec);
            }
            Ok((
                FrameRecord {
                    index: k,
                    time,
                    pairs: records,
                },
                meshes,
            ))
        })
        .collect::<Result<_>>()?;

    let tfim_map = matches!(config.command, CommandConfig::Tfim(_)).then_some(TFIM_AXIS_MAP);
    let metadata = RunMetadata {
        generator: concat!("spincmv ", env!("CARGO_PKG_VERSION")).into(),
        model: model_name(&config.command).into(),
        params: serde_json::to_value(&config.command).expect("command serializes"),
        time_unit: plan.time_unit().map(str::to_owned),
        level: config.level,
        grid: config.grid,
        display_scale: config.display_scale,
        conventions: Conventions::standard(tfim_map),
        warnings,
    };
    let mut all_meshes = Vec::new();
    let mut frame_records = Vec::with_capacity(frames.len());
    for (f, m) in frames {
        frame_records.push(f);
        all_meshes.extend(m);
    }
    let record = CorrelationRecord {
        schema_version: SCHEMA_VERSION.into(),
        metadata,
        frames: frame_records,
    };
    Ok((record, all_meshes))
}

pub fn write_mesh(mesh: &LevelSetMesh, scale: f64, path: &Path) -> Result<()> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("ply") => write_ply(mesh, scale, path),
        _ => write_obj(mesh, scale, path),
    }
}

/// Computes and writes everything the configuration asks for.
pub fn run(config: &RunConfig) -> Result<RunOutput> {
    let (record, meshes) = compute(config)?;
    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut files = Vec::new();
    for (name, mesh) in &meshes {
        let path = dir.join(name);
        write_mesh(mesh, config.display_scale, &path)?;
        files.push(path);
    }
    if config.formats.contains(&Format::Json) {
        let path = dir.join(RECORD_FILE);
        fs::write(&path, record.to_json()).map_err(|e| CliError::io(&path, e))?;
        files.push(path);
    }
    Ok(RunOutput { record, files })
}
