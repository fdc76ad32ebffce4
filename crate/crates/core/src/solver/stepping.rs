use super::rhs::{Solver, Triple};
use super::state::{PhysicalParams, State};
use crate::error::{Error, Result};
use crate::grid::Grid;

/// Vector space operations needed by the SSP-RK3 stages.
pub trait RkVector: Sized {
    /// `a·base + (1 - a)·(self + dt·k)`
    fn ssp_stage(&self, dt: f64, k: &Self, base: &Self, a: f64) -> Self;
}

impl RkVector for Vec<f64> {
    fn ssp_stage(&self, dt: f64, k: &Self, base: &Self, a: f64) -> Self {
        if a == 0.0 {
            return self.iter().zip(k).map(|(x, d)| x + dt * d).collect();
        }
        let b = 1.0 - a;
        self.iter()
            .zip(k)
            .zip(base)
            .map(|((x, d), u)| a * u + b * (x + dt * d))
            .collect()
    }
}

impl<const N: usize> RkVector for [Vec<f64>; N] {
    fn ssp_stage(&self, dt: f64, k: &Self, base: &Self, a: f64) -> Self {
        std::array::from_fn(|c| self[c].ssp_stage(dt, &k[c], &base[c], a))
    }
}

/// Three-stage strong-stability-preserving Runge–Kutta step (Shu–Osher form).
pub fn ssp_rk3<V, F>(u: &V, t: f64, dt: f64, mut rhs: F) -> Result<V>
where
    V: RkVector,
    F: FnMut(f64, &V) -> Result<V>,
{
    let k1 = rhs(t, u)?;
    ssp_rk3_from(u, k1, t, dt, rhs)
}

pub(crate) fn ssp_rk3_from<V, F>(u: &V, k1: V, t: f64, dt: f64, mut rhs: F) -> Result<V>
where
    V: RkVector,
    F: FnMut(f64, &V) -> Result<V>,
{
    let u1 = u.ssp_stage(dt, &k1, u, 0.0);
    let k2 = rhs(t + dt, &u1)?;
    let u2 = u1.ssp_stage(dt, &k2, u, 0.75);
    let k3 = rhs(t + 0.5 * dt, &u2)?;
    Ok(u2.ssp_stage(dt, &k3, u, 1.0 / 3.0))
}

pub(crate) fn check_safety(safety: f64) -> Result<()> {
    if safety > 0.0 && safety <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("cfl safety must lie in (0, 1], got {safety}")))
    }
}

/// Diffusive stencil weight of the five-dimensional Laplacian.
const C_LAP: f64 = 5.0;

/// Largest stable step for the given speeds: advective in `b`, Hall transport
/// at speed `2·hall·H` along `z`, and explicit diffusion.
pub(crate) fn stable_dt(grid: &Grid, params: &PhysicalParams, max_speed: f64, max_h: f64, safety: f64) -> f64 {
    let h = grid.h_r().min(grid.h_z());
    let advective = h / (max_speed + f64::EPSILON);
    let hall = grid.h_z() / (2.0 * params.hall * max_h + f64::EPSILON);
    let diffusive = if params.nu > 0.0 {
        grid.h_min().powi(2) / (4.0 * params.nu * C_LAP)
    } else {
        f64::INFINITY
    };
    safety * advective.min(hall).min(diffusive)
}

impl Solver {
    pub fn cfl_dt(&self, state: &State, safety: f64) -> Result<f64> {
        check_safety(safety)?;
        let b = self.velocity(state)?;
        Ok(stable_dt(self.grid(), &state.params, b.max_speed(), state.big_h.max_abs(), safety))
    }

    pub fn step(&self, state: &State, dt: f64) -> Result<State> {
        if !(dt.is_finite() && dt >= 0.0) {
            return Err(Error::InvalidArgument(format!("dt must be finite and >= 0, got {dt}")));
        }
        let u = state.to_values();
        let next = self.advance(state.t, &u, &state.params, dt, None)?;
        Ok(State::from_values(self.grid(), state.t + dt, next, state.params))
    }

    /// One SSP-RK3 step; `k1` may carry a tendency already evaluated at `(t, u)`.
    pub(crate) fn advance(
        &self,
        t: f64,
        u: &Triple,
        params: &PhysicalParams,
        dt: f64,
        k1: Option<Triple>,
    ) -> Result<Triple> {
        let k1 = match k1 {
            Some(k) => k,
            None => self.rhs_values(t, u, params, None)?,
        };
        let next = ssp_rk3_from(u, k1, t, dt, |s, v| self.rhs_values(s, v, params, None))?;
        let n_z = self.grid().n_z();
        for (what, v) in ["gamma", "omega", "big_h"].into_iter().zip(&next) {
            if let Some(k) = v.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite {
                    what,
                    i: k / n_z,
                    j: k % n_z,
                });
            }
        }
        Ok(next)
    }
}

pub fn cfl_dt(state: &State, safety: f64) -> Result<f64> {
    Solver::new(state.grid().clone())?.cfl_dt(state, safety)
}

pub fn step(state: &State, dt: f64) -> Result<State> {
    Solver::new(state.grid().clone())?.step(state, dt)
}
