use std::fmt;

use super::sweep::{SweepParam, SweepResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Plateau,
    MonotoneConsistent,
    Violated,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Plateau => "plateau",
            Trend::MonotoneConsistent => "monotone-consistent",
            Trend::Violated => "violated",
        }
    }
}

impl fmt::Display for Trend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendSummary {
    pub param: SweepParam,
    pub verdict: Trend,
    /// `(value, t_proxy)` in order of decreasing parameter, failed runs dropped.
    pub series: Vec<(f64, f64)>,
    /// `t_proxy(next) / t_proxy(previous)` along `series`.
    pub ratios: Vec<f64>,
    pub t_proxy_range: (f64, f64),
    pub failed: usize,
}

const NOTE: &str = "the continuum lifespan lower bound concerns a different object and is not fitted; \
only ordering, ranges and successive ratios are reported";

impl TrendSummary {
    pub fn text(&self) -> String {
        let expect = match self.param {
            SweepParam::Eps => "non-decreasing",
            SweepParam::Nu => "non-increasing (report only)",
        };
        let mut s = format!(
            "parameter: {}\nexpected t_proxy as {} decreases: {}\nverdict: {}\nt_proxy range: [{:?}, {:?}]\nfailed runs: {}\n",
            self.param, self.param, expect, self.verdict, self.t_proxy_range.0, self.t_proxy_range.1, self.failed
        );
        for (k, r) in self.ratios.iter().enumerate() {
            s.push_str(&format!(
                "ratio t_proxy({:?})/t_proxy({:?}) = {:?}\n",
                self.series[k + 1].0,
                self.series[k].0,
                r
            ));
        }
        s.push_str("note: ");
        s.push_str(NOTE);
        s.push('\n');
        s
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = format!("from_{p},to_{p},t_proxy_from,t_proxy_to,ratio\n", p = self.param);
        for (k, r) in self.ratios.iter().enumerate() {
            let (a, ta) = self.series[k];
            let (b, tb) = self.series[k + 1];
            s.push_str(&format!("{a:?},{b:?},{ta:?},{tb:?},{r:?}\n"));
        }
        s
    }
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

pub fn fit_trend(sweep: &SweepResult) -> Result<TrendSummary> {
    let mut series: Vec<(f64, f64)> = sweep
        .rows
        .iter()
        .filter(|r| !r.failed() && r.t_proxy.is_finite())
        .map(|r| (r.value, r.t_proxy))
        .collect();
    if series.len() < 2 {
        return Err(Error::Trend(format!("need ≥ 2 rows, got {}", series.len())));
    }
    series.sort_by(|a, b| b.0.total_cmp(&a.0));
    let failed = sweep.rows.len() - series.len();

    let ratios: Vec<f64> = series.windows(2).map(|w| w[1].1 / w[0].1).collect();
    let ok_step = |prev: f64, next: f64| match sweep.param {
        SweepParam::Eps => next >= prev || same(prev, next),
        SweepParam::Nu => next <= prev || same(prev, next),
    };
    let verdict = if !series.windows(2).all(|w| ok_step(w[0].1, w[1].1)) {
        Trend::Violated
    } else if series.windows(2).all(|w| same(w[0].1, w[1].1)) {
        Trend::Plateau
    } else {
        Trend::MonotoneConsistent
    };
    let lo = series.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let hi = series.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(TrendSummary {
        param: sweep.param,
        verdict,
        series,
        ratios,
        t_proxy_range: (lo, hi),
        failed,
    })
}
