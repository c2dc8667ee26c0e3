//! Run configuration: a versioned JSON document with one parameter block per
//! experiment. Unknown keys are rejected at every level.

use std::path::Path;

use clap::ValueEnum;
use pathlab_core::feynman_kac::Potential;
use pathlab_core::nogo::{Bump, PhaseFunctional};
use pathlab_core::Profile;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Heat,
    Telegrapher,
    Dirac,
    Kg,
    NogoFresnel,
    NogoTv,
    NogoBochner,
    NogoKernelFit,
    NogoLevy,
    Report,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Heat => "heat",
            Experiment::Telegrapher => "telegrapher",
            Experiment::Dirac => "dirac",
            Experiment::Kg => "kg",
            Experiment::NogoFresnel => "nogo-fresnel",
            Experiment::NogoTv => "nogo-tv",
            Experiment::NogoBochner => "nogo-bochner",
            Experiment::NogoKernelFit => "nogo-kernel-fit",
            Experiment::NogoLevy => "nogo-levy",
            Experiment::Report => "report",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub experiment: Experiment,
    pub seed: u64,
    #[serde(default)]
    pub params: Value,
    pub output_path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant {
        value: f64,
    },
    Gaussian {
        center: f64,
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    Indicator {
        lo: f64,
        hi: f64,
    },
    Linear {
        slope: f64,
        intercept: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl ProfileSpec {
    pub fn build(&self) -> Profile {
        match *self {
            ProfileSpec::Constant { value } => Profile::Constant(value),
            ProfileSpec::Gaussian {
                center,
                width,
                amplitude,
            } => Profile::Gaussian {
                center,
                width,
                amplitude,
            },
            ProfileSpec::Indicator { lo, hi } => Profile::Indicator { lo, hi },
            ProfileSpec::Linear { slope, intercept } => Profile::Linear { slope, intercept },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant { value: f64 },
    Harmonic { k: f64 },
}

impl PotentialSpec {
    pub fn build(&self) -> Potential {
        match *self {
            PotentialSpec::Zero => Potential::Zero,
            PotentialSpec::Constant { value } => Potential::Constant(value),
            PotentialSpec::Harmonic { k } => Potential::Harmonic(k),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatParams {
    pub c2: f64,
    pub t: f64,
    pub potential: PotentialSpec,
    pub initial: ProfileSpec,
    pub points: Vec<f64>,
    pub n_paths: usize,
    pub n_steps: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TelegrapherParams {
    pub lambda: f64,
    pub c: f64,
    pub t: f64,
    pub initial: ProfileSpec,
    pub points: Vec<f64>,
    pub n_paths: usize,
    pub cell_length: f64,
    pub fd_cells: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiracRunParams {
    pub m: f64,
    pub cell_length: f64,
    pub n: usize,
    pub dt: f64,
    pub steps: usize,
    pub pairing_times: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgParams {
    pub m: f64,
    pub t: f64,
    pub initial: ProfileSpec,
    pub points: Vec<f64>,
    pub n_paths: usize,
    pub cell_length: f64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FresnelParams {
    pub radii: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseSpec {
    Zero,
    Quadratic,
}

impl PhaseSpec {
    pub fn build(self) -> PhaseFunctional {
        match self {
            PhaseSpec::Zero => PhaseFunctional::zero(),
            PhaseSpec::Quadratic => PhaseFunctional::quadratic(),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BumpSpec {
    Smooth,
    Gaussian,
}

impl BumpSpec {
    pub fn build(self) -> Bump {
        match self {
            BumpSpec::Smooth => Bump::smooth(),
            BumpSpec::Gaussian => Bump::gaussian(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TvParams {
    pub phase: PhaseSpec,
    pub a: f64,
    pub b: f64,
    pub depth: u32,
    pub bump: BumpSpec,
    pub eps_levels: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaSpec {
    Gaussian,
    Fresnel,
    Constant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BochnerParams {
    pub gammas: Vec<GammaSpec>,
    pub nodes: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelFitParams {
    pub t: f64,
    pub m: f64,
    pub grid_n: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevyParams {
    pub n_grid: usize,
    pub n_seeds: usize,
}

pub fn load(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: RunConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if cfg.schema_version != SCHEMA_VERSION {
        return Err(CliError::Config(format!(
            "schema_version: expected {SCHEMA_VERSION}, got {}",
            cfg.schema_version
        )));
    }
    Ok(cfg)
}

/// Decode the `params` block for one experiment; errors name the key.
pub fn params<T: for<'de> Deserialize<'de>>(cfg: &RunConfig) -> Result<T, CliError> {
    serde_json::from_value(cfg.params.clone()).map_err(|e| CliError::Config(format!("params: {e}")))
}
