use std::sync::Arc;

use super::families::Sample;
use super::pointwise::derivative_magnitude;
use super::{LemmaCheck, Resolution};
use crate::error::{Error, Result};
use crate::norms::{lp_norm_values, Exponent};

/// Gagliardo–Nirenberg: `‖∇ʲf‖_p ≤ C ‖∇ᵐf‖_r^α ‖f‖_q^{1-α}` in three dimensions.
#[derive(Debug, Clone)]
pub struct GnCheck {
    j: usize,
    m: usize,
    p: Exponent,
    q: Exponent,
    r: Exponent,
    alpha: f64,
    family: String,
}

fn inv(e: Exponent) -> f64 {
    match e {
        Exponent::Finite(p) => 1.0 / p,
        Exponent::Infinity => 0.0,
    }
}

fn show(e: Exponent) -> String {
    match e {
        Exponent::Finite(p) => format!("{p}"),
        Exponent::Infinity => "inf".into(),
    }
}

impl GnCheck {
    pub const MAX_ORDER: usize = 2;

    pub fn new(j: usize, m: usize, p: f64, q: f64, r: f64, alpha: f64) -> Result<Self> {
        if m == 0 || m > Self::MAX_ORDER || j >= m {
            return Err(Error::Exponents(format!("need 0 <= j < m <= {}, got j={j}, m={m}", Self::MAX_ORDER)));
        }
        let (p, q, r) = (Exponent::new(p)?, Exponent::new(q)?, Exponent::new(r)?);
        let lo = j as f64 / m as f64;
        if !(alpha >= lo && alpha <= 1.0) {
            return Err(Error::Exponents(format!("alpha = {alpha} outside [{lo}, 1]")));
        }
        let residual = inv(p) - (j as f64 / 3.0 + alpha * (inv(r) - m as f64 / 3.0) + (1.0 - alpha) * inv(q));
        if residual.abs() > 1e-12 {
            return Err(Error::Exponents(format!(
                "1/p - j/3 - alpha(1/r - m/3) - (1-alpha)/q = {residual:e}"
            )));
        }
        if j == 0 && (m as f64) * r.value() < 3.0 && q == Exponent::Infinity {
            return Err(Error::Exponents("excluded case j = 0, m r < 3, q = inf".into()));
        }
        if let Exponent::Finite(rv) = r {
            let gap = m as f64 - j as f64 - 3.0 / rv;
            if rv > 1.0 && gap >= 0.0 && (gap - gap.round()).abs() < 1e-12 && alpha == 1.0 {
                return Err(Error::Exponents(format!(
                    "excluded case 1 < r < inf with m - j - 3/r = {gap} a non-negative integer and alpha = 1"
                )));
            }
        }
        Ok(GnCheck {
            j,
            m,
            p,
            q,
            r,
            alpha,
            family: "random_bandlimited".into(),
        })
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    /// The cases used by the analysis: Sobolev, Agmon and two interpolations.
    pub fn default_cases() -> Vec<GnCheck> {
        [
            (0, 1, 6.0, 2.0, 2.0, 1.0),
            (0, 2, f64::INFINITY, 2.0, 2.0, 0.75),
            (1, 2, 3.0, 2.0, 2.0, 0.75),
            (0, 1, 4.0, 2.0, 2.0, 0.75),
        ]
        .into_iter()
        .map(|(j, m, p, q, r, a)| GnCheck::new(j, m, p, q, r, a).expect("default cases satisfy the relation"))
        .collect()
    }
}

impl LemmaCheck for GnCheck {
    fn lemma(&self) -> &'static str {
        "gn"
    }

    fn id(&self) -> String {
        format!(
            "gn[j={} m={} p={} q={} r={} alpha={}]",
            self.j,
            self.m,
            show(self.p),
            show(self.q),
            show(self.r),
            self.alpha
        )
    }

    fn family(&self) -> &str {
        &self.family
    }

    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>> {
        let grid = Arc::new(res.grid()?);
        let f = sample.on_grid(&grid)?;
        let lhs = lp_norm_values(&grid, &derivative_magnitude(&f, self.j), self.p);
        let top = lp_norm_values(&grid, &derivative_magnitude(&f, self.m), self.r);
        let base = lp_norm_values(&grid, f.values(), self.q);
        let rhs = top.powf(self.alpha) * base.powf(1.0 - self.alpha);
        Ok((rhs > 0.0).then(|| lhs / rhs))
    }
}
