use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bench::BenchConfig;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::solver::{InitialDataSpec, PhysicalParams, RunControl};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_r: usize,
    pub n_z: usize,
    pub r_max: f64,
    pub z_len: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n_r: 256,
            n_z: 256,
            r_max: 8.0,
            z_len: 16.0,
        }
    }
}

impl GridConfig {
    pub fn build(&self) -> Result<Grid> {
        Grid::new(self.n_r, self.n_z, self.r_max, self.z_len)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControlConfig {
    pub t_end: f64,
    pub cfl_safety: f64,
    pub dt_min: f64,
    pub record_every: usize,
    pub norm_cap: f64,
    /// Steps between checkpoints; 0 keeps only the final one.
    pub checkpoint_every: usize,
    /// Seed for the bench sample families.
    pub seed: u64,
    /// Output file names inside the output directory.
    pub diagnostics_file: String,
    pub checkpoint_file: String,
}

impl Default for ControlConfig {
    fn default() -> Self {
        let rc = RunControl::default();
        ControlConfig {
            t_end: rc.t_end,
            cfl_safety: rc.cfl_safety,
            dt_min: rc.dt_min,
            record_every: rc.record_every,
            norm_cap: rc.norm_cap,
            checkpoint_every: rc.checkpoint_every,
            seed: 0,
            diagnostics_file: "diagnostics.csv".into(),
            checkpoint_file: "state.axhm".into(),
        }
    }
}

impl ControlConfig {
    /// Run control writing checkpoints into `out`, or nowhere when `out` is `None`.
    pub fn run_control(&self, out: Option<&Path>) -> RunControl {
        RunControl {
            t_end: self.t_end,
            cfl_safety: self.cfl_safety,
            dt_min: self.dt_min,
            record_every: self.record_every,
            norm_cap: self.norm_cap,
            checkpoint_every: self.checkpoint_every,
            checkpoint_path: out.map(|d| d.join(&self.checkpoint_file)),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    pub physics: PhysicalParams,
    pub initial: InitialDataSpec,
    pub control: ControlConfig,
    pub bench: BenchConfig,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let prefix = |block: &str, e: Error| Error::Config(format!("[{block}] {}", strip(&e)));
        self.grid.build().map_err(|e| prefix("grid", e))?;
        self.physics.validate().map_err(|e| prefix("physics", e))?;
        self.initial.validate().map_err(|e| prefix("initial", e))?;
        self.control.run_control(None).validate().map_err(|e| prefix("control", e))?;
        for (name, v) in [("diagnostics_file", &self.control.diagnostics_file), ("checkpoint_file", &self.control.checkpoint_file)] {
            if v.is_empty() || Path::new(v).components().count() != 1 {
                return Err(Error::Config(format!("[control] {name} must be a plain file name, got '{v}'")));
            }
        }
        self.bench.validate().map_err(|e| prefix("bench", e))?;
        Ok(())
    }

    /// The effective configuration, as written next to every output.
    pub fn echo(&self) -> String {
        toml::to_string(self).expect("config fields are plain TOML values")
    }

    pub fn write_echo(&self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("config.toml");
        std::fs::write(&path, self.echo()).map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

fn strip(e: &Error) -> String {
    match e {
        Error::InvalidArgument(m) | Error::InitialData(m) | Error::Config(m) | Error::Grid(m) => m.clone(),
        other => other.to_string(),
    }
}

/// Parses a `[block]` / `key = value` document (dotted `block.key` also works).
/// Everything not given takes its default.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let config: RunConfig = toml::from_str(text).map_err(|e| {
        let line = e
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
            .unwrap_or(1);
        Error::ConfigAt {
            line,
            msg: e.message().to_string(),
        }
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}
