use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;

use super::config::RunConfig;
use super::trend::{fit_trend, Trend};
use crate::diagnostics::write_csv;
use crate::error::{Error, Result};
use crate::solver::run;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Eps,
    Nu,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::Eps => "eps",
            SweepParam::Nu => "nu",
        }
    }

    pub fn default_values(self) -> Vec<f64> {
        match self {
            SweepParam::Eps => vec![1e-1, 1e-2, 1e-3, 1e-4],
            SweepParam::Nu => vec![1.0, 0.3, 0.1, 0.03],
        }
    }

    fn apply(self, config: &mut RunConfig, value: f64) {
        match self {
            SweepParam::Eps => config.initial.eps = value,
            SweepParam::Nu => config.physics.nu = value,
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "eps" => Ok(SweepParam::Eps),
            "nu" => Ok(SweepParam::Nu),
            other => Err(Error::UnknownName {
                kind: "sweep parameter",
                name: other.to_string(),
                known: "eps, nu".into(),
            }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// NaN when the run failed before producing a verdict.
    pub t_proxy: f64,
    /// Termination reason, or `error: ...` for failed runs.
    pub reason: String,
    pub e0: f64,
    pub steps: usize,
    /// Diagnostics CSV, relative to the sweep output directory.
    pub csv: Option<PathBuf>,
}

impl SweepRow {
    pub fn failed(&self) -> bool {
        self.reason.starts_with("error")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub param: SweepParam,
    pub t_end: f64,
    /// Sorted by ascending parameter value.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Monotonicity verdict in the direction of decreasing parameter; fewer
    /// than two usable rows are trivially monotone.
    pub fn verdict(&self) -> Trend {
        fit_trend(self).map_or(Trend::MonotoneConsistent, |s| s.verdict)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = format!("{},t_proxy,reason,E0,steps,csv\n", self.param);
        for r in &self.rows {
            let csv = r.csv.as_ref().map(|p| p.display().to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{:?},{:?},{},{:?},{},{}\n",
                r.value,
                r.t_proxy,
                r.reason.replace([',', '\n'], ";"),
                r.e0,
                r.steps,
                csv
            ));
        }
        out
    }
}

pub fn run_dir_name(param: SweepParam, value: f64) -> String {
    format!("{param}_{value:?}")
}

fn run_one(base: &RunConfig, param: SweepParam, value: f64, out: Option<&Path>) -> Result<SweepRow> {
    let mut config = base.clone();
    param.apply(&mut config, value);
    config.validate()?;
    let name = run_dir_name(param, value);
    let dir = match out {
        Some(o) => {
            let d = o.join(&name);
            std::fs::create_dir_all(&d).map_err(|e| Error::io(&d, e))?;
            config.write_echo(&d)?;
            Some(d)
        }
        None => None,
    };
    let grid = Arc::new(config.grid.build()?);
    let outcome = run(
        grid,
        &config.initial,
        config.physics,
        &config.control.run_control(dir.as_deref()),
    )?;
    let csv = match &dir {
        Some(d) => {
            write_csv(&outcome.records, &d.join(&config.control.diagnostics_file))?;
            Some(Path::new(&name).join(&config.control.diagnostics_file))
        }
        None => None,
    };
    let first = outcome.records.first().copied().unwrap_or_default();
    Ok(SweepRow {
        value,
        t_proxy: outcome.verdict.t_proxy,
        reason: outcome.reason.as_str().to_string(),
        e0: first.h3_u + first.h3_h,
        steps: outcome.steps,
        csv,
    })
}

/// Runs one simulation per value. A failing run becomes an `error` row;
/// the sweep itself only fails on an empty or non-finite value list.
pub fn sweep(base: &RunConfig, param: SweepParam, values: &[f64], out: Option<&Path>) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one value".into()));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("sweep value {v} is not finite")));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows = sorted
        .iter()
        .map(|&value| {
            run_one(base, param, value, out).unwrap_or_else(|e| SweepRow {
                value,
                t_proxy: f64::NAN,
                reason: format!("error: {e}"),
                e0: f64::NAN,
                steps: 0,
                csv: None,
            })
        })
        .collect();
    Ok(SweepResult {
        param,
        t_end: base.control.t_end,
        rows,
    })
}
