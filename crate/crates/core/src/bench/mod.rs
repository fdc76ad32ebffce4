//! Sampled checks of the functional inequalities behind the a-priori estimates.
//!
//! Each check measures a ratio `LHS / RHS` per sample; an inequality holds on
//! the sample set when every ratio is finite. Constants are reported, never
//! asserted: only their drift under refinement is.

mod elliptic;
mod families;
mod gn;
mod heat;
mod pointwise;

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use elliptic::{BiotSavartCheck, GradUrOverRCheck};
pub use families::{FamilyRegistry, Sample, SampleFamily};
pub use gn::GnCheck;
pub use heat::{heat_mode_measured, heat_mode_ratio, integrate_heat, HeatIntegrals, HeatMaxRegCheck, NuScalingCheck};

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Square `n × n` grid on `[0, r_max] × [0, z_len)`, with a multiplier on the
/// explicit time step for checks that integrate in time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resolution {
    pub n: usize,
    pub r_max: f64,
    pub z_len: f64,
    pub dt_scale: f64,
}

impl Resolution {
    pub fn new(n: usize) -> Self {
        Resolution {
            n,
            r_max: 8.0,
            z_len: 16.0,
            dt_scale: 1.0,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.n, self.n, self.r_max, self.z_len)
    }

    pub fn label(&self) -> String {
        if self.dt_scale == 1.0 {
            format!("{}x{}", self.n, self.n)
        } else {
            format!("{}x{} dt*{}", self.n, self.n, self.dt_scale)
        }
    }
}

pub trait LemmaCheck: Send + Sync {
    /// Registry name shared by all cases of one inequality.
    fn lemma(&self) -> &'static str;
    /// Unique case id, e.g. `biot_savart[p=6]`.
    fn id(&self) -> String;
    fn family(&self) -> &str;
    /// Refine by halving `dt` on the coarse grid instead of refining the grid.
    fn refines_in_time(&self) -> bool {
        false
    }
    /// `None` when the right-hand side vanishes (sample skipped).
    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub id: String,
    pub lemma: &'static str,
    pub family: String,
    /// Ratios at the finer resolution, by sample id.
    pub ratios: Vec<Option<f64>>,
    pub coarse_ratios: Vec<Option<f64>>,
    pub max_ratio: f64,
    pub median_ratio: f64,
    pub resolutions: [Resolution; 2],
    /// `|max_fine - max_coarse| / max_coarse`
    pub stability: f64,
}

fn max_of(v: &[Option<f64>]) -> f64 {
    v.iter().flatten().fold(0.0_f64, |m, &r| m.max(r))
}

fn median_of(v: &[Option<f64>]) -> f64 {
    let mut xs: Vec<f64> = v.iter().flatten().copied().collect();
    if xs.is_empty() {
        return 0.0;
    }
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        0.5 * (xs[n / 2 - 1] + xs[n / 2])
    }
}

impl RatioReport {
    /// Every evaluated ratio is finite and non-negative at both resolutions.
    pub fn holds(&self) -> bool {
        self.ratios
            .iter()
            .chain(&self.coarse_ratios)
            .flatten()
            .all(|r| r.is_finite() && *r >= 0.0)
    }

    pub fn skipped(&self) -> usize {
        self.ratios.iter().filter(|r| r.is_none()).count()
    }
}

/// Runs one check on `count` samples at the resolution pair `(coarse, fine)`.
pub fn evaluate(
    check: &dyn LemmaCheck,
    family: &dyn SampleFamily,
    count: usize,
    seed: u64,
    coarse: Resolution,
    fine: Resolution,
) -> Result<RatioReport> {
    let fine = if check.refines_in_time() {
        Resolution {
            dt_scale: 0.5 * coarse.dt_scale,
            ..coarse
        }
    } else {
        fine
    };
    let samples: Vec<Sample> = (0..count).map(|k| family.sample(seed, k)).collect();
    let at = |res: &Resolution| -> Result<Vec<Option<f64>>> { samples.iter().map(|s| check.ratio(res, s)).collect() };
    let coarse_ratios = at(&coarse)?;
    let ratios = at(&fine)?;
    let (max_c, max_f) = (max_of(&coarse_ratios), max_of(&ratios));
    let stability = if max_c > 0.0 { (max_f - max_c).abs() / max_c } else { 0.0 };
    Ok(RatioReport {
        id: check.id(),
        lemma: check.lemma(),
        family: family.name().to_string(),
        max_ratio: max_f,
        median_ratio: median_of(&ratios),
        ratios,
        coarse_ratios,
        resolutions: [coarse, fine],
        stability,
    })
}

/// Named lemma checks. The standard set registers every case the analysis uses.
pub struct LemmaRegistry {
    entries: Vec<Box<dyn LemmaCheck>>,
}

impl LemmaRegistry {
    pub fn empty() -> Self {
        LemmaRegistry { entries: Vec::new() }
    }

    pub fn standard(heat_t_end: f64, nu_t_end: f64) -> Self {
        let mut reg = LemmaRegistry::empty();
        let mut add = |c: Box<dyn LemmaCheck>| reg.register(c).expect("standard ids are distinct");
        for c in GnCheck::default_cases() {
            add(Box::new(c));
        }
        for p in [2.0, 3.0, 6.0] {
            add(Box::new(BiotSavartCheck::new(p)));
        }
        for p in [2.0, 6.0] {
            add(Box::new(GradUrOverRCheck::new(p)));
        }
        add(Box::new(HeatMaxRegCheck::new(heat_t_end)));
        for nu in NuScalingCheck::DEFAULT_NUS {
            add(Box::new(NuScalingCheck::new(nu, nu_t_end)));
        }
        reg
    }

    pub fn register(&mut self, check: Box<dyn LemmaCheck>) -> Result<()> {
        let id = check.id();
        if self.entries.iter().any(|c| c.id() == id) {
            return Err(Error::InvalidArgument(format!("lemma check '{id}' registered twice")));
        }
        self.entries.push(check);
        Ok(())
    }

    pub fn lemma_names(&self) -> Vec<&'static str> {
        let mut names: Vec<&'static str> = Vec::new();
        for c in &self.entries {
            if !names.contains(&c.lemma()) {
                names.push(c.lemma());
            }
        }
        names
    }

    /// All cases of the named lemmas, in registration order.
    pub fn select(&self, lemmas: &[String]) -> Result<Vec<&dyn LemmaCheck>> {
        let known = self.lemma_names();
        for name in lemmas {
            if !known.contains(&name.as_str()) {
                return Err(Error::UnknownName {
                    kind: "lemma",
                    name: name.clone(),
                    known: known.join(", "),
                });
            }
        }
        Ok(self
            .entries
            .iter()
            .filter(|c| lemmas.iter().any(|l| l == c.lemma()))
            .map(|c| c.as_ref())
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub lemmas: Vec<String>,
    /// Samples per check for the spatial inequalities.
    pub count: usize,
    /// Samples per check for the heat-flow inequalities.
    pub heat_count: usize,
    pub n_coarse: usize,
    pub n_fine: usize,
    pub heat_t_end: f64,
    pub nu_t_end: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            lemmas: ["gn", "biot_savart", "grad_ur_over_r", "heat_maxreg", "nu_scaling"]
                .map(String::from)
                .to_vec(),
            count: 100,
            heat_count: 6,
            n_coarse: 128,
            n_fine: 256,
            heat_t_end: 0.1,
            nu_t_end: 0.25,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.count == 0 || self.heat_count == 0 {
            return Err(Error::Config("bench sample counts must be >= 1".into()));
        }
        if self.n_coarse < 8 || self.n_fine <= self.n_coarse {
            return Err(Error::Config(format!(
                "bench needs 8 <= n_coarse < n_fine, got {} and {}",
                self.n_coarse, self.n_fine
            )));
        }
        if !(self.heat_t_end > 0.0 && self.nu_t_end > 0.0) {
            return Err(Error::Config("bench horizons must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub reports: Vec<RatioReport>,
}

impl BenchOutcome {
    /// `max C_ν / min C_ν` over the ν-scaling cases, if any ran.
    pub fn nu_spread(&self) -> Option<f64> {
        let cs: Vec<f64> = self
            .reports
            .iter()
            .filter(|r| r.lemma == "nu_scaling")
            .map(|r| r.max_ratio)
            .collect();
        if cs.is_empty() {
            return None;
        }
        let hi = cs.iter().fold(0.0_f64, |m, &c| m.max(c));
        let lo = cs.iter().fold(f64::INFINITY, |m, &c| m.min(c));
        Some(hi / lo)
    }

    pub fn all_hold(&self) -> bool {
        self.reports.iter().all(RatioReport::holds)
    }

    /// `lemma,sample,ratio` at the finer resolution; skipped samples are omitted.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::from("lemma,sample,ratio\n");
        for r in &self.reports {
            for (k, v) in r.ratios.iter().enumerate() {
                if let Some(v) = v {
                    writeln!(out, "{},{k},{v:?}", r.id).expect("writing to a String cannot fail");
                }
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            writeln!(
                out,
                "{:<44} family={:<18} samples={} skipped={} max={:.6e} median={:.6e} stability={:.4} resolutions={} -> {} holds={}",
                r.id,
                r.family,
                r.ratios.len(),
                r.skipped(),
                r.max_ratio,
                r.median_ratio,
                r.stability,
                r.resolutions[0].label(),
                r.resolutions[1].label(),
                r.holds()
            )
            .expect("writing to a String cannot fail");
        }
        if let Some(s) = self.nu_spread() {
            writeln!(out, "nu_scaling spread max/min C = {s:.4}").expect("writing to a String cannot fail");
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        let csv = dir.join("bench.csv");
        std::fs::write(&csv, self.to_csv_string()).map_err(|e| Error::io(&csv, e))?;
        let txt = dir.join("bench_summary.txt");
        std::fs::write(&txt, self.summary()).map_err(|e| Error::io(&txt, e))
    }
}

pub fn run_bench(config: &BenchConfig, seed: u64) -> Result<BenchOutcome> {
    config.validate()?;
    let lemmas = LemmaRegistry::standard(config.heat_t_end, config.nu_t_end);
    let families = FamilyRegistry::default();
    let checks = lemmas.select(&config.lemmas)?;
    let reports = checks
        .into_iter()
        .map(|c| {
            let count = if c.refines_in_time() { config.heat_count } else { config.count };
            evaluate(
                c,
                families.get(c.family())?,
                count,
                seed,
                Resolution::new(config.n_coarse),
                Resolution::new(config.n_fine),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchOutcome { reports })
}

#[cfg(test)]
mod tests;
