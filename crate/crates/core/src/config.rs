//! Experiment configuration.
//!
//! Configs are TOML key-value files. Every key is optional; an empty file
//! yields the reference experiment (OU and fractional processes, 351 points
//! spaced 0.02, 3/5/7 % sparsity, minimum gap 5). Unknown keys are rejected.
//!
//! ```toml
//! process = "both"            # ou | fractional | both | custom
//! t0 = 0.0
//! dt = 0.02
//! n = 351
//! sparsity = [0.03, 0.05, 0.07]
//! min_gap = 5
//! noise_sd = 0.0              # observation noise added to the truth
//! gp_noise2 = 1e-6            # noise variance assumed by the GP
//! horizon = 1
//! secondary = "ar:2"          # or "sarima:p,d,q,P,D,Q,s"
//! seed = 0                    # master seed
//! epsilon = 1e-8
//! signed_mape = false
//! draws = 2
//!
//! [kernel]                    # only with process = "custom"
//! sigma2 = 1.0
//! beta = 1.0
//! lengthscales = [2.0]
//! exponents = [1.5]
//!
//! [seeds]                     # optional; overrides seeds derived from `seed`
//! simulation = 1
//! sparsify = 2
//! sampling = 3
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evaluate::{ErrorMode, EvalOptions, SecondaryModelSpec, DEFAULT_EPSILON};
use crate::kernel::KernelParams;
use crate::rng::StageSeeds;
use crate::simulate::{observation_count, TimeGrid};

pub const DEFAULT_DT: f64 = 0.02;
pub const DEFAULT_N: usize = 351;
pub const DEFAULT_SPARSITY: [f64; 3] = [0.03, 0.05, 0.07];
pub const DEFAULT_MIN_GAP: usize = 5;
pub const DEFAULT_GP_NOISE2: f64 = 1e-6;
pub const DEFAULT_SECONDARY: &str = "ar:2";
pub const DEFAULT_DRAWS: usize = 2;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub sigma2: Option<f64>,
    pub beta: Option<f64>,
    pub lengthscales: Option<Vec<f64>>,
    pub exponents: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedSection {
    pub simulation: Option<u64>,
    pub sparsify: Option<u64>,
    pub sampling: Option<u64>,
}

/// Config file as written, before defaults and validation.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub process: Option<String>,
    pub t0: Option<f64>,
    pub dt: Option<f64>,
    pub n: Option<usize>,
    pub sparsity: Option<Vec<f64>>,
    pub min_gap: Option<usize>,
    pub noise_sd: Option<f64>,
    pub gp_noise2: Option<f64>,
    pub horizon: Option<usize>,
    pub secondary: Option<String>,
    pub seed: Option<u64>,
    pub epsilon: Option<f64>,
    pub signed_mape: Option<bool>,
    pub draws: Option<usize>,
    pub kernel: Option<KernelSection>,
    pub seeds: Option<SeedSection>,
}

/// A named data-generating process.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Process {
    pub name: String,
    pub params: KernelParams<f64>,
}

/// Validated configuration with every default applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub processes: Vec<Process>,
    pub grid: TimeGrid<f64>,
    pub sparsity: Vec<f64>,
    pub min_gap: usize,
    pub noise_sd: f64,
    pub gp_noise2: f64,
    pub secondary: SecondaryModelSpec,
    pub eval: EvalOptions,
    pub draws: usize,
    pub master_seed: u64,
    pub seeds: StageSeeds,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ConfigFile::default().resolve().expect("defaults are valid")
    }
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e
                .span()
                .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
                .unwrap_or(1);
            Error::Parse {
                line,
                message: e.message().to_string(),
            }
        })
    }

    /// Applies defaults and checks every downstream precondition.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let processes = self.processes()?;

        let grid = TimeGrid::new(
            self.t0.unwrap_or(0.0),
            self.dt.unwrap_or(DEFAULT_DT),
            self.n.unwrap_or(DEFAULT_N),
        )
        .map_err(|e| match e {
            Error::Domain { field, reason } => invalid(field, reason),
            other => other,
        })?;

        let min_gap = self.min_gap.unwrap_or(DEFAULT_MIN_GAP);
        if min_gap == 0 {
            return Err(invalid("min_gap", "must be at least 1"));
        }
        let sparsity = self
            .sparsity
            .clone()
            .unwrap_or_else(|| DEFAULT_SPARSITY.to_vec());
        if sparsity.is_empty() {
            return Err(invalid("sparsity", "need at least one fraction"));
        }
        for (i, &f) in sparsity.iter().enumerate() {
            if !(f > 0.0 && f < 1.0) {
                return Err(invalid("sparsity", format!("{f} outside (0, 1)")));
            }
            if sparsity[..i].contains(&f) {
                return Err(invalid("sparsity", format!("{f} listed twice")));
            }
            let m = observation_count(f, grid.n);
            if m < 2 {
                return Err(invalid(
                    "sparsity",
                    format!("{f} of {} points leaves {m} observations", grid.n),
                ));
            }
            if (m - 1) * min_gap > grid.n - 1 {
                return Err(invalid(
                    "sparsity",
                    format!(
                        "{m} observations cannot be {min_gap} steps apart in {} points",
                        grid.n
                    ),
                ));
            }
        }

        let noise_sd = self.noise_sd.unwrap_or(0.0);
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(invalid("noise_sd", "must be finite and >= 0"));
        }
        let gp_noise2 = self.gp_noise2.unwrap_or(DEFAULT_GP_NOISE2);
        if !(gp_noise2 >= 0.0 && gp_noise2.is_finite()) {
            return Err(invalid("gp_noise2", "must be finite and >= 0"));
        }
        let horizon = self.horizon.unwrap_or(1);
        if horizon == 0 {
            return Err(invalid("horizon", "must be >= 1"));
        }
        let epsilon = self.epsilon.unwrap_or(DEFAULT_EPSILON);
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(invalid("epsilon", "must be finite and > 0"));
        }
        let secondary: SecondaryModelSpec = self
            .secondary
            .as_deref()
            .unwrap_or(DEFAULT_SECONDARY)
            .parse()?;

        let master_seed = self.seed.unwrap_or(0);
        let derived = StageSeeds::from_master(master_seed);
        let overrides = self.seeds.clone().unwrap_or_default();
        let seeds = StageSeeds {
            simulation: overrides.simulation.unwrap_or(derived.simulation),
            sparsify: overrides.sparsify.unwrap_or(derived.sparsify),
            sampling: overrides.sampling.unwrap_or(derived.sampling),
        };

        Ok(ExperimentConfig {
            processes,
            grid,
            sparsity,
            min_gap,
            noise_sd,
            gp_noise2,
            secondary,
            eval: EvalOptions {
                horizon,
                epsilon,
                mode: if self.signed_mape.unwrap_or(false) {
                    ErrorMode::Signed
                } else {
                    ErrorMode::Absolute
                },
            },
            draws: self.draws.unwrap_or(DEFAULT_DRAWS),
            master_seed,
            seeds,
        })
    }

    fn processes(&self) -> Result<Vec<Process>> {
        let named = |name: &str| -> Process {
            let params = match name {
                "ou" => KernelParams::ornstein_uhlenbeck(),
                _ => KernelParams::fractional(),
            };
            Process {
                name: name.into(),
                params,
            }
        };
        let which = self.process.as_deref().unwrap_or("both");
        if which != "custom" && self.kernel.is_some() {
            return Err(invalid(
                "kernel",
                "a [kernel] table requires process = \"custom\"",
            ));
        }
        match which {
            "both" => Ok(vec![named("ou"), named("fractional")]),
            "ou" | "fractional" => Ok(vec![named(which)]),
            "custom" => {
                let k = self.kernel.clone().ok_or_else(|| {
                    invalid("kernel", "process = \"custom\" needs a [kernel] table")
                })?;
                let params = KernelParams::new(
                    k.sigma2.unwrap_or(1.0),
                    k.beta.unwrap_or(1.0),
                    k.lengthscales.unwrap_or_else(|| vec![2.0]),
                    k.exponents.unwrap_or_else(|| vec![1.0]),
                )
                .map_err(|e| match e {
                    Error::Domain { field, reason } => invalid(&format!("kernel.{field}"), reason),
                    other => other,
                })?;
                if params.dim() != 1 {
                    return Err(invalid(
                        "kernel.lengthscales",
                        "experiments are one-dimensional (time only)",
                    ));
                }
                Ok(vec![Process {
                    name: "custom".into(),
                    params,
                }])
            }
            other => Err(invalid(
                "process",
                format!("unknown process `{other}` (expected ou, fractional, both or custom)"),
            )),
        }
    }
}

/// Parses and validates a config string.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    ConfigFile::parse(text)?.resolve()
}

/// Reads, parses and validates a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    parse_config(&std::fs::read_to_string(path)?)
}
