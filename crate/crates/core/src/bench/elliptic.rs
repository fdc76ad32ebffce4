use std::sync::Arc;

use super::families::Sample;
use super::pointwise::Derivatives;
use super::{LemmaCheck, Resolution};
use crate::error::Result;
use crate::field::{OuterGhost, Parity};
use crate::grid::Grid;
use crate::norms::{lp_norm_values, Exponent};
use crate::operators::{stencil, velocity_values, StreamSolver};

fn velocity(grid: &Arc<Grid>, omega_theta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let psi = StreamSolver::new(grid.clone())?.solve_values(omega_theta);
    let mut u_r = vec![0.0; grid.len()];
    let mut u_z = vec![0.0; grid.len()];
    velocity_values(grid, &psi, &mut u_r, &mut u_z);
    Ok((u_r, u_z))
}

/// `‖∇b‖_p / ‖ω_θ‖_p` for `b` recovered from `ω_θ = r f`.
#[derive(Debug, Clone)]
pub struct BiotSavartCheck {
    p: f64,
    family: String,
}

impl BiotSavartCheck {
    pub fn new(p: f64) -> Self {
        BiotSavartCheck {
            p,
            family: "vortex_rings".into(),
        }
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    /// Pointwise `|∇b|` and the odd vorticity it was built from.
    pub(crate) fn fields(grid: &Arc<Grid>, sample: &Sample) -> Result<(Vec<f64>, Vec<f64>)> {
        let omega = sample.on_grid(grid)?.times_r_pow(1);
        let (u_r, u_z) = velocity(grid, omega.values())?;
        let n = grid.len();
        let ex = OuterGhost::Extrapolate;
        let mut d = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        stencil::d_r(grid, &u_r, Parity::Odd.sign(), ex, &mut d[0]);
        stencil::d_z(grid, &u_r, &mut d[1]);
        stencil::d_r(grid, &u_z, Parity::Even.sign(), ex, &mut d[2]);
        stencil::d_z(grid, &u_z, &mut d[3]);
        let n_z = grid.n_z();
        let mut grad = vec![0.0; n];
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for k in i * n_z..(i + 1) * n_z {
                let hoop = u_r[k] / r;
                grad[k] = (d.iter().map(|c| c[k] * c[k]).sum::<f64>() + hoop * hoop).sqrt();
            }
        }
        Ok((grad, omega.into_values()))
    }
}

impl LemmaCheck for BiotSavartCheck {
    fn lemma(&self) -> &'static str {
        "biot_savart"
    }

    fn id(&self) -> String {
        format!("biot_savart[p={}]", self.p)
    }

    fn family(&self) -> &str {
        &self.family
    }

    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>> {
        let grid = Arc::new(res.grid()?);
        let p = Exponent::new(self.p)?;
        let (grad, omega) = Self::fields(&grid, sample)?;
        let den = lp_norm_values(&grid, &omega, p);
        Ok((den > 0.0).then(|| lp_norm_values(&grid, &grad, p) / den))
    }
}

/// `‖∇(u_r/r)‖_p / ‖Ω‖_p` with `Ω = f`.
#[derive(Debug, Clone)]
pub struct GradUrOverRCheck {
    p: f64,
    family: String,
}

impl GradUrOverRCheck {
    pub fn new(p: f64) -> Self {
        GradUrOverRCheck {
            p,
            family: "gaussian_bumps".into(),
        }
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    pub fn ratio_on(grid: &Arc<Grid>, sample: &Sample, p: f64) -> Result<Option<f64>> {
        let p = Exponent::new(p)?;
        let big_omega = sample.on_grid(grid)?;
        let (u_r, _) = velocity(grid, big_omega.times_r_pow(1).values())?;
        let n_z = grid.n_z();
        let mut q = u_r;
        for (row, &r) in q.chunks_exact_mut(n_z).zip(grid.r_nodes()) {
            row.iter_mut().for_each(|v| *v /= r);
        }
        let grad = Derivatives::of(grid, &q, OuterGhost::Extrapolate).gradient();
        let den = lp_norm_values(grid, big_omega.values(), p);
        Ok((den > 0.0).then(|| lp_norm_values(grid, &grad, p) / den))
    }
}

impl LemmaCheck for GradUrOverRCheck {
    fn lemma(&self) -> &'static str {
        "grad_ur_over_r"
    }

    fn id(&self) -> String {
        format!("grad_ur_over_r[p={}]", self.p)
    }

    fn family(&self) -> &str {
        &self.family
    }

    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>> {
        Self::ratio_on(&Arc::new(res.grid()?), sample, self.p)
    }
}
