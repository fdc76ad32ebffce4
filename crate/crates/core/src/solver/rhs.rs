use std::sync::Arc;

use super::state::{PhysicalParams, State, Tendency};
use crate::error::{Error, Result};
use crate::field::{OuterGhost, Parity, ScalarField};
use crate::grid::Grid;
use crate::operators::stencil::{self, RowWeights};
use crate::operators::{velocity_values, MeridianVelocity, StreamSolver};

/// Analytic source added to the tendencies; used by manufactured solutions.
pub trait Forcing: Send + Sync {
    /// Adds the source at time `t` to `(dΓ, dΩ, dH)`.
    fn add(&self, grid: &Grid, t: f64, d_gamma: &mut [f64], d_omega: &mut [f64], d_big_h: &mut [f64]);
}

/// Right-hand-side evaluator bound to one grid: keeps the factorized stream
/// solver and the stencil weights of `Δ + (2/r)∂_r`.
pub struct Solver {
    grid: Arc<Grid>,
    stream: StreamSolver,
    plus: Vec<RowWeights>,
    forcing: Option<Arc<dyn Forcing>>,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("stream", &self.stream)
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

pub(crate) type Triple = [Vec<f64>; 3];

const NAMES: [&str; 3] = ["d_gamma", "d_omega", "d_big_h"];

impl Solver {
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        Ok(Solver {
            stream: StreamSolver::new(grid.clone())?,
            plus: stencil::expanded_weights(&grid, 3.0, 0.0),
            grid,
            forcing: None,
        })
    }

    pub fn with_forcing(mut self, forcing: Arc<dyn Forcing>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn stream(&self) -> &StreamSolver {
        &self.stream
    }

    fn check(&self, state: &State) -> Result<()> {
        if !self.grid.same_shape(state.grid()) {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// Meridian velocity recovered from `ω_θ = r Ω`.
    pub fn velocity(&self, state: &State) -> Result<MeridianVelocity> {
        self.check(state)?;
        let (u_r, u_z) = self.velocity_values(state.omega.values());
        Ok(MeridianVelocity {
            u_r: ScalarField::from_raw(self.grid.clone(), u_r, Parity::Odd),
            u_z: ScalarField::from_raw(self.grid.clone(), u_z, Parity::Even),
        })
    }

    fn velocity_values(&self, omega: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let g = &*self.grid;
        let n_z = g.n_z();
        let mut w = omega.to_vec();
        for (row, &r) in w.chunks_exact_mut(n_z).zip(g.r_nodes()) {
            row.iter_mut().for_each(|v| *v *= r);
        }
        let psi = self.stream.solve_values(&w);
        let mut u_r = vec![0.0; g.len()];
        let mut u_z = vec![0.0; g.len()];
        velocity_values(g, &psi, &mut u_r, &mut u_z);
        (u_r, u_z)
    }

    pub fn rhs(&self, state: &State) -> Result<Tendency> {
        self.check(state)?;
        let [d_gamma, d_omega, d_big_h] = self.rhs_values(state.t, &state.to_values(), &state.params, None)?;
        let g = &self.grid;
        Ok(Tendency {
            d_gamma: ScalarField::from_raw(g.clone(), d_gamma, Parity::Even),
            d_omega: ScalarField::from_raw(g.clone(), d_omega, Parity::Even),
            d_big_h: ScalarField::from_raw(g.clone(), d_big_h, Parity::Even),
        })
    }

    /// Tendencies of raw `(Γ, Ω, H)` arrays. `speed` receives `max |b|`.
    pub(crate) fn rhs_values(
        &self,
        t: f64,
        [gamma, omega, big_h]: &Triple,
        params: &PhysicalParams,
        speed: Option<&mut f64>,
    ) -> Result<Triple> {
        let g = &*self.grid;
        let (n, n_z) = (g.len(), g.n_z());
        let (u_r, u_z) = self.velocity_values(omega);
        if let Some(s) = speed {
            *s = u_r.iter().zip(&u_z).fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)));
        }

        let mut dr = vec![0.0; n];
        let mut dz = vec![0.0; n];
        let mut tmp = vec![0.0; n];
        let advect = |f: &[f64], dr: &mut [f64], dz: &mut [f64]| -> Vec<f64> {
            stencil::d_r(g, f, 1.0, OuterGhost::Zero, dr);
            stencil::d_z(g, f, dz);
            // `0 - x` keeps an identically zero field at +0
            (0..n).map(|k| 0.0 - (u_r[k] * dr[k] + u_z[k] * dz[k])).collect()
        };

        let mut d_gamma = advect(gamma, &mut dr, &mut dz);

        let mut d_omega = advect(omega, &mut dr, &mut dz);
        if params.mu0_inv != 0.0 {
            let sq: Vec<f64> = big_h.iter().map(|v| v * v).collect();
            stencil::d_z(g, &sq, &mut tmp);
            for (d, s) in d_omega.iter_mut().zip(&tmp) {
                *d -= params.mu0_inv * s;
            }
        }
        let sq: Vec<f64> = gamma.iter().map(|v| v * v).collect();
        stencil::d_z(g, &sq, &mut tmp);
        for (i, &r) in g.r_nodes().iter().enumerate() {
            let inv_r4 = 1.0 / (r * r * r * r);
            for k in i * n_z..(i + 1) * n_z {
                d_omega[k] += inv_r4 * tmp[k];
            }
        }

        let mut d_big_h = advect(big_h, &mut dr, &mut dz);
        if params.hall != 0.0 {
            // dz still holds ∂_z H
            for k in 0..n {
                d_big_h[k] += params.hall * 2.0 * big_h[k] * dz[k];
            }
        }
        if params.nu != 0.0 {
            stencil::radial_laplacian(g, big_h, 1.0, &self.plus, &mut tmp);
            for (d, l) in d_big_h.iter_mut().zip(&tmp) {
                *d += params.nu * l;
            }
        }

        if let Some(f) = &self.forcing {
            f.add(g, t, &mut d_gamma, &mut d_omega, &mut d_big_h);
        }
        let out = [d_gamma, d_omega, d_big_h];
        for (what, v) in NAMES.iter().zip(&out) {
            if let Some(k) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    what,
                    i: k / n_z,
                    j: k % n_z,
                });
            }
        }
        Ok(out)
    }
}

/// One-shot tendency evaluation; time loops should hold a [`Solver`].
pub fn compute_rhs(state: &State) -> Result<Tendency> {
    Solver::new(state.grid().clone())?.rhs(state)
}
