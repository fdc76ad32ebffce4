use std::f64::consts::PI;
use std::sync::Arc;

use super::families::Sample;
use super::pointwise::Derivatives;
use super::{LemmaCheck, Resolution};
use crate::error::{Error, Result};
use crate::field::OuterGhost;
use crate::grid::Grid;
use crate::norms::l2_squared;
use crate::operators::stencil;
use crate::solver::ssp_rk3;

/// Time integrals accumulated along one heat-flow solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatIntegrals {
    /// `∫₀ᵀ ‖∇²v‖₂² dt`
    pub hessian: f64,
    /// `∫₀ᵀ ‖f‖₂² dt`
    pub forcing: f64,
    pub steps: usize,
}

fn hessian_sq(grid: &Grid, v: &[f64]) -> f64 {
    let h = Derivatives::of(grid, v, OuterGhost::Zero).hessian(grid);
    l2_squared(grid, &h)
}

/// Integrates `v_t = ν Δv + f(t)` on the 3-D axisymmetric Laplacian with SSP-RK3
/// and the explicit diffusive step limit scaled by `dt_scale`. `forcing(t, out)`
/// overwrites `out` with `f(t)`.
pub fn integrate_heat<F>(grid: &Grid, nu: f64, v0: &[f64], forcing: F, t_end: f64, dt_scale: f64) -> Result<HeatIntegrals>
where
    F: Fn(f64, &mut [f64]),
{
    if !(nu > 0.0 && t_end > 0.0 && dt_scale > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "heat flow needs nu, t_end, dt_scale > 0 (got {nu}, {t_end}, {dt_scale})"
        )));
    }
    let weights = stencil::expanded_weights(grid, 1.0, 0.0);
    let dt_max = dt_scale * 0.9 * grid.h_min().powi(2) / (20.0 * nu);
    let steps = (t_end / dt_max).ceil() as usize;
    let dt = t_end / steps as f64;
    let n = grid.len();
    let mut f = vec![0.0; n];
    let mut rhs = |t: f64, v: &Vec<f64>| -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        stencil::radial_laplacian(grid, v, 1.0, &weights, &mut out);
        forcing(t, &mut f);
        for (o, s) in out.iter_mut().zip(&f) {
            *o = nu * *o + s;
        }
        Ok(out)
    };
    let mut v = v0.to_vec();
    let mut buf = vec![0.0; n];
    let sample = |t: f64, v: &[f64], buf: &mut Vec<f64>| {
        forcing(t, buf);
        (hessian_sq(grid, v), l2_squared(grid, buf))
    };
    let (mut h_prev, mut f_prev) = sample(0.0, &v, &mut buf);
    let mut acc = HeatIntegrals {
        hessian: 0.0,
        forcing: 0.0,
        steps,
    };
    for k in 0..steps {
        let t = k as f64 * dt;
        v = ssp_rk3(&v, t, dt, &mut rhs)?;
        if let Some(bad) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "heat flow",
                i: bad / grid.n_z(),
                j: bad % grid.n_z(),
            });
        }
        let (h, g) = sample(t + dt, &v, &mut buf);
        acc.hessian += 0.5 * dt * (h_prev + h);
        acc.forcing += 0.5 * dt * (f_prev + g);
        (h_prev, f_prev) = (h, g);
    }
    Ok(acc)
}

/// Closed-form `‖∇²v‖_{L²L²} / ‖f‖_{L²L²}` for `v = t φ`, `f = φ - t Δφ`,
/// `φ = e^{-r²} cos(k z)` on `[0, T]`.
pub fn heat_mode_ratio(k: f64, t_end: f64) -> f64 {
    // radial moments ∫ r^{2n+1} e^{-2r²} dr = n! / 2^{n+2}; the common 2π·L/2 cancels
    let (i0, i1) = (0.25, 0.125);
    let a = 4.0 + k * k;
    let phi2 = i0;
    let phi_lap = 4.0 * i1 - a * i0;
    let hess2 = 2.0 + k * k + k.powi(4) / 4.0;
    let t = t_end;
    let num = t.powi(3) / 3.0 * hess2;
    let den = t * phi2 - t * t * phi_lap + t.powi(3) / 3.0 * hess2;
    (num / den).sqrt()
}

/// The same ratio measured by the discrete heat flow on `grid`.
pub fn heat_mode_measured(grid: &Grid, mode: usize, t_end: f64, dt_scale: f64) -> Result<f64> {
    let k = 2.0 * PI * mode as f64 / grid.z_len();
    let zc = grid.z_mid();
    let n_z = grid.n_z();
    let mut phi = vec![0.0; grid.len()];
    let mut lap = vec![0.0; grid.len()];
    for (i, &r) in grid.r_nodes().iter().enumerate() {
        for (j, &z) in grid.z_nodes().iter().enumerate() {
            let base = (-r * r).exp() * (k * (z - zc)).cos();
            phi[i * n_z + j] = base;
            lap[i * n_z + j] = (4.0 * r * r - 4.0 - k * k) * base;
        }
    }
    let forcing = |t: f64, out: &mut [f64]| {
        for ((o, p), l) in out.iter_mut().zip(&phi).zip(&lap) {
            *o = p - t * l;
        }
    };
    let acc = integrate_heat(grid, 1.0, &vec![0.0; grid.len()], forcing, t_end, dt_scale)?;
    Ok((acc.hessian / acc.forcing).sqrt())
}

/// Maximal regularity in `L²(0,T; L²)`: `‖∇²v‖ / ‖f‖` for `v_t = Δv + f`, `v(0) = 0`,
/// with `f = (1 + ½ sin(2πt/T)) φ`. Refinement is in `dt`.
#[derive(Debug, Clone)]
pub struct HeatMaxRegCheck {
    t_end: f64,
    family: String,
}

impl HeatMaxRegCheck {
    pub fn new(t_end: f64) -> Self {
        HeatMaxRegCheck {
            t_end,
            family: "random_bandlimited".into(),
        }
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }
}

impl LemmaCheck for HeatMaxRegCheck {
    fn lemma(&self) -> &'static str {
        "heat_maxreg"
    }

    fn id(&self) -> String {
        format!("heat_maxreg[q=2 p=2 T={}]", self.t_end)
    }

    fn family(&self) -> &str {
        &self.family
    }

    fn refines_in_time(&self) -> bool {
        true
    }

    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>> {
        let grid = Arc::new(res.grid()?);
        let phi = sample.on_grid(&grid)?.into_values();
        let t_end = self.t_end;
        let forcing = |t: f64, out: &mut [f64]| {
            let a = 1.0 + 0.5 * (2.0 * PI * t / t_end).sin();
            for (o, p) in out.iter_mut().zip(&phi) {
                *o = a * p;
            }
        };
        let acc = integrate_heat(&grid, 1.0, &vec![0.0; grid.len()], forcing, t_end, res.dt_scale)?;
        Ok((acc.forcing > 0.0).then(|| (acc.hessian / acc.forcing).sqrt()))
    }
}

/// `‖∇²v‖_{L²(0,T;L²)} / (T^{1/2} ‖∇²v₀‖₂ + ν⁻¹ ‖g‖_{L²(0,T;L²)})` for
/// `v_t = ν Δv + g`. Sample `k` uses `v₀ = φ_k` and `g = w_k φ_k`, `w_k ∈ {0, ½, 1}`.
#[derive(Debug, Clone)]
pub struct NuScalingCheck {
    nu: f64,
    t_end: f64,
    family: String,
}

impl NuScalingCheck {
    pub const DEFAULT_NUS: [f64; 3] = [1.0, 0.1, 0.01];

    pub fn new(nu: f64, t_end: f64) -> Self {
        NuScalingCheck {
            nu,
            t_end,
            family: "gaussian_bumps".into(),
        }
    }

    pub fn with_family(mut self, family: &str) -> Self {
        self.family = family.to_string();
        self
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    /// The measured constant for explicit data.
    pub fn constant_for(&self, grid: &Grid, v0: &[f64], g: &[f64], dt_scale: f64) -> Result<Option<f64>> {
        let forcing = |_: f64, out: &mut [f64]| out.copy_from_slice(g);
        let acc = integrate_heat(grid, self.nu, v0, forcing, self.t_end, dt_scale)?;
        let rhs = self.t_end.sqrt() * hessian_sq(grid, v0).sqrt() + acc.forcing.sqrt() / self.nu;
        Ok((rhs > 0.0).then(|| acc.hessian.sqrt() / rhs))
    }
}

impl LemmaCheck for NuScalingCheck {
    fn lemma(&self) -> &'static str {
        "nu_scaling"
    }

    fn id(&self) -> String {
        format!("nu_scaling[nu={} T={}]", self.nu, self.t_end)
    }

    fn family(&self) -> &str {
        &self.family
    }

    fn refines_in_time(&self) -> bool {
        true
    }

    fn ratio(&self, res: &Resolution, sample: &Sample) -> Result<Option<f64>> {
        let grid = res.grid()?;
        let v0 = sample.on_grid(&Arc::new(grid.clone()))?.into_values();
        let w = [0.0, 0.5, 1.0][sample.id % 3];
        let g: Vec<f64> = v0.iter().map(|v| w * v).collect();
        self.constant_for(&grid, &v0, &g, res.dt_scale)
    }
}
