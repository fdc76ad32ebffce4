use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Parity, ScalarField};
use crate::grid::Grid;

/// Coefficients of the reduced system. `1, 1, 1` is the normalized system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysicalParams {
    /// Resistivity, the diffusion coefficient of `H`.
    pub nu: f64,
    /// Hall coefficient in front of `2 H ∂_z H`.
    pub hall: f64,
    /// Lorentz-force coefficient in front of `-∂_z H²`.
    pub mu0_inv: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            nu: 1.0,
            hall: 1.0,
            mu0_inv: 1.0,
        }
    }
}

impl PhysicalParams {
    /// All coefficients finite and non-negative. `mu0_inv = 0` decouples the
    /// Lorentz force, which the linear verification cases rely on.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("nu", self.nu), ("hall", self.hall), ("mu0_inv", self.mu0_inv)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    /// `Γ = r u_θ`
    pub gamma: ScalarField,
    /// `Ω = ω_θ / r`
    pub omega: ScalarField,
    /// `H = h_θ / r`
    pub big_h: ScalarField,
    pub params: PhysicalParams,
}

impl State {
    pub fn new(
        t: f64,
        gamma: ScalarField,
        omega: ScalarField,
        big_h: ScalarField,
        params: PhysicalParams,
    ) -> Result<Self> {
        params.validate()?;
        if !t.is_finite() {
            return Err(Error::InvalidArgument(format!("time must be finite, got {t}")));
        }
        for (name, f) in [("gamma", &gamma), ("omega", &omega), ("big_h", &big_h)] {
            f.require_parity(Parity::Even, name)?;
            if let Some((i, j)) = f.first_nonfinite() {
                return Err(Error::NonFinite { what: name, i, j });
            }
        }
        gamma.check_grid(&omega)?;
        gamma.check_grid(&big_h)?;
        Ok(State {
            t,
            gamma,
            omega,
            big_h,
            params,
        })
    }

    pub fn zeros(grid: Arc<Grid>, params: PhysicalParams) -> Self {
        State {
            t: 0.0,
            gamma: ScalarField::zeros(grid.clone(), Parity::Even),
            omega: ScalarField::zeros(grid.clone(), Parity::Even),
            big_h: ScalarField::zeros(grid, Parity::Even),
            params,
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        self.gamma.grid()
    }

    pub(crate) fn from_values(
        grid: &Arc<Grid>,
        t: f64,
        [gamma, omega, big_h]: [Vec<f64>; 3],
        params: PhysicalParams,
    ) -> Self {
        State {
            t,
            gamma: ScalarField::from_raw(grid.clone(), gamma, Parity::Even),
            omega: ScalarField::from_raw(grid.clone(), omega, Parity::Even),
            big_h: ScalarField::from_raw(grid.clone(), big_h, Parity::Even),
            params,
        }
    }

    pub(crate) fn to_values(&self) -> [Vec<f64>; 3] {
        [
            self.gamma.values().to_vec(),
            self.omega.values().to_vec(),
            self.big_h.values().to_vec(),
        ]
    }
}

/// Time derivatives of `(Γ, Ω, H)`; all even.
#[derive(Debug, Clone, PartialEq)]
pub struct Tendency {
    pub d_gamma: ScalarField,
    pub d_omega: ScalarField,
    pub d_big_h: ScalarField,
}
