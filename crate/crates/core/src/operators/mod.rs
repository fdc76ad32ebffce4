//! Cylindrical differential operators on axisymmetric fields.
//!
//! All operators are second-order central differences. Radial derivatives
//! flip parity, axial derivatives preserve it.

mod poisson;
pub(crate) mod stencil;

use std::sync::Arc;

pub use poisson::StreamSolver;

use crate::error::{Error, Result};
use crate::field::{OuterGhost, Parity, ScalarField};
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    R,
    Z,
}

/// Meridian part `b = u_r e_r + u_z e_z` of the velocity.
#[derive(Debug, Clone, PartialEq)]
pub struct MeridianVelocity {
    pub u_r: ScalarField,
    pub u_z: ScalarField,
}

impl MeridianVelocity {
    pub fn zeros(grid: Arc<Grid>) -> Self {
        MeridianVelocity {
            u_r: ScalarField::zeros(grid.clone(), Parity::Odd),
            u_z: ScalarField::zeros(grid, Parity::Even),
        }
    }

    /// Largest pointwise speed `sqrt(u_r² + u_z²)`.
    pub fn max_speed(&self) -> f64 {
        self.u_r
            .values()
            .iter()
            .zip(self.u_z.values())
            .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VorticityTriple {
    pub omega_r: ScalarField,
    pub omega_theta: ScalarField,
    pub omega_z: ScalarField,
}

/// Central difference along `axis` with a homogeneous Dirichlet ghost at `r_max`.
pub fn partial_derivative(field: &ScalarField, axis: Axis) -> ScalarField {
    partial_derivative_with(field, axis, OuterGhost::Zero)
}

pub fn partial_derivative_with(field: &ScalarField, axis: Axis, outer: OuterGhost) -> ScalarField {
    let grid = field.grid();
    let mut out = vec![0.0; grid.len()];
    match axis {
        Axis::R => {
            stencil::d_r(grid, field.values(), field.parity().sign(), outer, &mut out);
            ScalarField::from_raw(grid.clone(), out, field.parity().flip())
        }
        Axis::Z => {
            stencil::d_z(grid, field.values(), &mut out);
            ScalarField::from_raw(grid.clone(), out, field.parity())
        }
    }
}

/// Second derivative along one axis (three-point stencil).
pub fn second_derivative(field: &ScalarField, axis: Axis, outer: OuterGhost) -> ScalarField {
    let grid = field.grid();
    let mut out = vec![0.0; grid.len()];
    match axis {
        Axis::R => stencil::d_rr(grid, field.values(), field.parity().sign(), outer, &mut out),
        Axis::Z => stencil::d_zz(grid, field.values(), &mut out),
    }
    ScalarField::from_raw(grid.clone(), out, field.parity())
}

/// `(1/r) ∂_r (r f)` for an odd `f`, discretized as the central difference of
/// the even product `r f` divided by the cell-centre radius.
pub fn radial_divergence(field: &ScalarField, outer: OuterGhost) -> Result<ScalarField> {
    field.require_parity(Parity::Odd, "radial_divergence")?;
    let rf = field.times_r_pow(1);
    Ok(divide_by_r(&partial_derivative_with(&rf, Axis::R, outer)))
}

/// Pointwise division by the cell-centre radius; flips parity.
pub fn divide_by_r(field: &ScalarField) -> ScalarField {
    field.times_r_pow(-1)
}

/// Vorticity of `u = u_θ e_θ + b`.
///
/// Radial derivatives of the meridian velocity use the extrapolated outer
/// ghost: the axial return flow of a truncated domain does not vanish at `r_max`.
pub fn curl_axisym(u_theta: &ScalarField, b: &MeridianVelocity) -> Result<VorticityTriple> {
    u_theta.require_parity(Parity::Odd, "curl_axisym (u_theta)")?;
    b.u_r.require_parity(Parity::Odd, "curl_axisym (u_r)")?;
    b.u_z.require_parity(Parity::Even, "curl_axisym (u_z)")?;
    u_theta.check_grid(&b.u_r)?;
    let omega_r = partial_derivative(u_theta, Axis::Z).scaled(-1.0);
    let omega_z = radial_divergence(u_theta, OuterGhost::Zero)?;
    let dz_ur = partial_derivative(&b.u_r, Axis::Z);
    let dr_uz = partial_derivative_with(&b.u_z, Axis::R, OuterGhost::Extrapolate);
    let values = dz_ur
        .values()
        .iter()
        .zip(dr_uz.values())
        .map(|(a, c)| a - c)
        .collect();
    let omega_theta = ScalarField::from_raw(u_theta.grid().clone(), values, Parity::Odd);
    Ok(VorticityTriple {
        omega_r,
        omega_theta,
        omega_z,
    })
}

/// `∂_r u_r + u_r/r + ∂_z u_z` with the stencils of [`velocity_from_stream`].
pub fn discrete_divergence(b: &MeridianVelocity) -> Result<ScalarField> {
    b.u_r.check_grid(&b.u_z)?;
    let radial = radial_divergence(&b.u_r, OuterGhost::Zero)?;
    let dz = partial_derivative(&b.u_z, Axis::Z);
    let values = radial
        .values()
        .iter()
        .zip(dz.values())
        .map(|(a, c)| a + c)
        .collect();
    Ok(ScalarField::from_raw(b.u_r.grid().clone(), values, Parity::Even))
}

/// Azimuthal vector Laplacian `(Δ - 1/r²)` on an odd component, with
/// axis-corrected face weights (exact on `r` and `r³`).
pub fn laplacian_minus(field: &ScalarField) -> Result<ScalarField> {
    field.require_parity(Parity::Odd, "laplacian_minus")?;
    Ok(apply_radial_laplacian(field, &stencil::azimuthal_weights(field.grid())))
}

/// `(Δ + (2/r) ∂_r)` on an even field, i.e. `∂_r² + (3/r) ∂_r + ∂_z²`: the
/// Laplacian of ℝ⁵ acting on functions radial in four of the coordinates.
pub fn laplacian_plus(field: &ScalarField) -> Result<ScalarField> {
    field.require_parity(Parity::Even, "laplacian_plus")?;
    Ok(apply_radial_laplacian(field, &stencil::expanded_weights(field.grid(), 3.0, 0.0)))
}

/// Plain 3-D Laplacian `∂_r² + (1/r) ∂_r + ∂_z²` of an even scalar.
pub fn laplacian_scalar(field: &ScalarField) -> Result<ScalarField> {
    field.require_parity(Parity::Even, "laplacian_scalar")?;
    Ok(apply_radial_laplacian(field, &stencil::expanded_weights(field.grid(), 1.0, 0.0)))
}

fn apply_radial_laplacian(field: &ScalarField, weights: &[stencil::RowWeights]) -> ScalarField {
    let grid = field.grid();
    let mut out = vec![0.0; grid.len()];
    stencil::radial_laplacian(grid, field.values(), field.parity().sign(), weights, &mut out);
    ScalarField::from_raw(grid.clone(), out, field.parity())
}

/// One-shot stream-function solve; builds a [`StreamSolver`] for the field's grid.
/// Time loops should keep a solver around instead.
pub fn solve_streamfunction(omega_theta: &ScalarField) -> Result<ScalarField> {
    StreamSolver::new(omega_theta.grid().clone())?.solve(omega_theta)
}

/// `b = ∇ × (ψ_θ e_θ)`: `u_r = -∂_z ψ`, `u_z = (1/r) ∂_r (r ψ)`.
///
/// With these stencils the discrete divergence telescopes to zero.
pub fn velocity_from_stream(psi: &ScalarField) -> Result<MeridianVelocity> {
    psi.require_parity(Parity::Odd, "velocity_from_stream")?;
    let grid = psi.grid();
    let mut u_r = vec![0.0; grid.len()];
    let mut u_z = vec![0.0; grid.len()];
    velocity_values(grid, psi.values(), &mut u_r, &mut u_z);
    Ok(MeridianVelocity {
        u_r: ScalarField::from_raw(grid.clone(), u_r, Parity::Odd),
        u_z: ScalarField::from_raw(grid.clone(), u_z, Parity::Even),
    })
}

pub(crate) fn velocity_values(grid: &Grid, psi: &[f64], u_r: &mut [f64], u_z: &mut [f64]) {
    stencil::d_z(grid, psi, u_r);
    for v in u_r.iter_mut() {
        *v = -*v;
    }
    let n_z = grid.n_z();
    let mut r_psi = psi.to_vec();
    for (i, &r) in grid.r_nodes().iter().enumerate() {
        for v in &mut r_psi[i * n_z..(i + 1) * n_z] {
            *v *= r;
        }
    }
    stencil::d_r(grid, &r_psi, 1.0, OuterGhost::Zero, u_z);
    for (i, &r) in grid.r_nodes().iter().enumerate() {
        let inv = 1.0 / r;
        for v in &mut u_z[i * n_z..(i + 1) * n_z] {
            *v *= inv;
        }
    }
}

pub fn require_same_grid(fields: &[&ScalarField]) -> Result<()> {
    if let Some((first, rest)) = fields.split_first() {
        for f in rest {
            if first.check_grid(f).is_err() {
                return Err(Error::GridMismatch);
            }
        }
    }
    Ok(())
}
