use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::profiles::{Profile, ProfileRegistry};
use super::state::{PhysicalParams, State};
use crate::error::{Error, Result};
use crate::field::{Parity, ScalarField};
use crate::grid::Grid;
use crate::operators::{curl_axisym, MeridianVelocity};

/// Initial data: `u_θ = a r S(r, z̃)` with `a` fixed by `eps`, `H = h_amp S_h`,
/// `Ω = omega_amp S_Ω`. Centers are axial offsets from the mid-plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialDataSpec {
    /// Target `‖(ω_r, ω_z)‖_∞` of the initial swirl.
    pub eps: f64,
    pub swirl_shape: String,
    pub swirl_center: f64,
    pub swirl_width: f64,
    pub h_shape: String,
    pub h_center: f64,
    pub h_width: f64,
    pub h_amp: f64,
    pub omega_shape: String,
    pub omega_center: f64,
    pub omega_width: f64,
    pub omega_amp: f64,
}

impl Default for InitialDataSpec {
    fn default() -> Self {
        InitialDataSpec {
            eps: 1e-2,
            swirl_shape: "gaussian".into(),
            swirl_center: 0.0,
            swirl_width: 1.0,
            h_shape: "gaussian".into(),
            h_center: 0.0,
            h_width: 1.0,
            h_amp: 1.0,
            omega_shape: "gaussian".into(),
            omega_center: 0.0,
            omega_width: 1.0,
            omega_amp: 1.0,
        }
    }
}

/// Shape name, axial center offset and width of one field.
#[derive(Debug, Clone, Copy)]
pub struct ShapeSpec<'a> {
    pub shape: &'a str,
    pub center: f64,
    pub width: f64,
}

impl InitialDataSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.eps.is_finite() || self.eps < 0.0 {
            return Err(Error::InitialData(format!("eps must be finite and >= 0, got {}", self.eps)));
        }
        for (name, v) in [
            ("h_amp", self.h_amp),
            ("omega_amp", self.omega_amp),
            ("swirl_center", self.swirl_center),
            ("h_center", self.h_center),
            ("omega_center", self.omega_center),
        ] {
            if !v.is_finite() {
                return Err(Error::InitialData(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, w) in [
            ("swirl_width", self.swirl_width),
            ("h_width", self.h_width),
            ("omega_width", self.omega_width),
        ] {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InitialData(format!("{name} must be positive, got {w}")));
            }
        }
        Ok(())
    }

    pub fn swirl(&self) -> ShapeSpec<'_> {
        ShapeSpec {
            shape: &self.swirl_shape,
            center: self.swirl_center,
            width: self.swirl_width,
        }
    }

    pub fn h(&self) -> ShapeSpec<'_> {
        ShapeSpec {
            shape: &self.h_shape,
            center: self.h_center,
            width: self.h_width,
        }
    }

    pub fn omega(&self) -> ShapeSpec<'_> {
        ShapeSpec {
            shape: &self.omega_shape,
            center: self.omega_center,
            width: self.omega_width,
        }
    }
}

fn sample(grid: &Arc<Grid>, profile: &dyn Profile, s: ShapeSpec<'_>, r_pow: i32) -> Result<ScalarField> {
    let z0 = grid.z_mid() + s.center;
    ScalarField::from_fn(grid.clone(), Parity::Even, |r, z| {
        r.powi(r_pow) * profile.eval(r, z - z0, s.width)
    })
}

/// `max sqrt(ω_r² + ω_z²)` of the swirl `u_θ = Γ/r`, as the diagnostics see it.
pub(crate) fn swirl_vorticity_max(gamma: &ScalarField) -> Result<f64> {
    let u_theta = gamma.times_r_pow(-1);
    let w = curl_axisym(&u_theta, &MeridianVelocity::zeros(gamma.grid().clone()))?;
    Ok(w.omega_r
        .values()
        .iter()
        .zip(w.omega_z.values())
        .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b))))
}

pub fn init_state(grid: Arc<Grid>, spec: &InitialDataSpec, params: PhysicalParams) -> Result<State> {
    init_state_with(grid, spec, params, &ProfileRegistry::default())
}

/// [`init_state`] against a caller-supplied profile registry.
pub fn init_state_with(
    grid: Arc<Grid>,
    spec: &InitialDataSpec,
    params: PhysicalParams,
    profiles: &ProfileRegistry,
) -> Result<State> {
    spec.validate()?;
    params.validate()?;
    let swirl = profiles.get(&spec.swirl_shape)?;
    let h_shape = profiles.get(&spec.h_shape)?;
    let omega_shape = profiles.get(&spec.omega_shape)?;

    let gamma = if spec.eps == 0.0 {
        ScalarField::zeros(grid.clone(), Parity::Even)
    } else {
        let unit = sample(&grid, swirl, spec.swirl(), 2)?;
        let m = swirl_vorticity_max(&unit)?;
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InitialData(format!(
                "swirl shape '{}' has no resolvable vorticity; cannot reach eps = {}",
                spec.swirl_shape, spec.eps
            )));
        }
        let gamma = unit.scaled(spec.eps / m);
        let measured = swirl_vorticity_max(&gamma)?;
        if ((measured - spec.eps) / spec.eps).abs() > 1e-3 {
            return Err(Error::InitialData(format!(
                "calibration missed: measured {measured}, target {}",
                spec.eps
            )));
        }
        gamma
    };
    let big_h = sample(&grid, h_shape, spec.h(), 0)?.scaled(spec.h_amp);
    let omega = sample(&grid, omega_shape, spec.omega(), 0)?.scaled(spec.omega_amp);
    State::new(0.0, gamma, omega, big_h, params)
}
