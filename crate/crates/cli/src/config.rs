use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use wipeplan::contact::SpongeModel;
use wipeplan::dataset::Split;
use wipeplan::geometry::ObjectKind;
use wipeplan::SCHEMA_VERSION;

use crate::args::{SpongeArgs, VERSION};
use crate::error::{CliError, CliResult};

pub const RUN_CONFIG_FILE: &str = "run_config.json";

/// Every resolved parameter of a run. Keys mirror the long flags; any of
/// them may be given in a `--config` file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub schema_version: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub version: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<ObjectKind>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rim_curvature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub objects: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contacts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cloud: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub traj: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dataset: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<Split>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_sets: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_tour: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub force_deficit: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deficit_factor: Option<f64>,

    #[serde(skip_serializing_if = "Option::is_none")]
    pub sponge: Option<SpongeModel<f64>>,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| wipeplan::Error::io(path, e))?;
        let config: RunConfig =
            serde_json::from_str(&text).map_err(|e| wipeplan::Error::json(path, e))?;
        if let Some(v) = config.schema_version {
            if v != SCHEMA_VERSION {
                return Err(wipeplan::Error::Parse {
                    path: path.to_path_buf(),
                    line: 1,
                    message: format!(
                        "schema_version {v} is not supported (expected {SCHEMA_VERSION})"
                    ),
                }
                .into());
            }
        }
        Ok(config)
    }

    /// A fresh resolved config for `command`, stamped with the versions.
    pub fn resolved(command: &str, seed: u64, threads: Option<usize>) -> Self {
        RunConfig {
            schema_version: Some(SCHEMA_VERSION),
            version: Some(VERSION.to_string()),
            command: Some(command.to_string()),
            seed: Some(seed),
            threads,
            ..RunConfig::default()
        }
    }

    /// Writes `run_config.json` into `dir`.
    pub fn write_into(&self, dir: &Path) -> CliResult<PathBuf> {
        let path = dir.join(RUN_CONFIG_FILE);
        write_json(&path, self)?;
        Ok(path)
    }
}

/// Command-line value if given, else the config-file value.
pub fn pick<T: Clone>(flag: Option<T>, file: &Option<T>) -> Option<T> {
    flag.or_else(|| file.clone())
}

pub fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| {
        CliError::Usage(format!(
            "--{flag} is required (on the command line or in --config)"
        ))
    })
}

/// Tool parameters: `base`, then the config file's tool, then individual flags.
pub fn resolve_sponge(
    base: SpongeModel<f64>,
    file: &Option<SpongeModel<f64>>,
    args: &SpongeArgs,
) -> SpongeModel<f64> {
    let mut s = file.clone().unwrap_or(base);
    if let Some(v) = args.width {
        s.width = v;
    }
    if let Some(v) = args.length {
        s.length = v;
    }
    if let Some(v) = args.height {
        s.height = v;
    }
    if let Some(v) = args.youngs_modulus {
        s.youngs_modulus = v;
    }
    if let Some(v) = args.sponge_grid {
        s.grid_nx = v;
        s.grid_ny = v;
    }
    if let Some(v) = args.target_force {
        s.target_force = v;
    }
    if let Some(v) = args.node_threshold {
        s.node_force_threshold = v;
    }
    if let Some(v) = args.tau {
        s.label_radius = v;
    }
    s
}

pub fn sponge_overridden(args: &SpongeArgs) -> bool {
    args.width.is_some()
        || args.length.is_some()
        || args.height.is_some()
        || args.youngs_modulus.is_some()
        || args.sponge_grid.is_some()
        || args.target_force.is_some()
        || args.node_threshold.is_some()
        || args.tau.is_some()
}

pub fn write_json<S: Serialize>(path: &Path, value: &S) -> CliResult<()> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| wipeplan::Error::json(path, e))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| wipeplan::Error::io(parent, e))?;
    }
    fs::write(path, text).map_err(|e| wipeplan::Error::io(path, e).into())
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| wipeplan::Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| wipeplan::Error::json(path, e).into())
}

/// Directory that holds `path`, or `.` for a bare file name.
pub fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}
