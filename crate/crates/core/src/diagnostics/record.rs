use std::sync::Arc;

use super::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::field::{OuterGhost, Parity, ScalarField};
use crate::grid::Grid;
use crate::norms::{l2_squared, lp_norm_values, sobolev_norm_with, Exponent};
use crate::operators::stencil;
use crate::operators::{curl_axisym, velocity_values, MeridianVelocity, StreamSolver};
use crate::solver::State;

/// `(ω_r, ω_z)` of the swirl `u_θ = Γ / r`.
pub fn swirl_vorticity(gamma: &ScalarField) -> Result<(ScalarField, ScalarField)> {
    gamma.require_parity(Parity::Even, "swirl_vorticity")?;
    let u_theta = gamma.times_r_pow(-1);
    let w = curl_axisym(&u_theta, &MeridianVelocity::zeros(gamma.grid().clone()))?;
    Ok((w.omega_r, w.omega_z))
}

fn scale_rows(grid: &Grid, v: &mut [f64], f: impl Fn(f64) -> f64) {
    for (row, &r) in v.chunks_exact_mut(grid.n_z()).zip(grid.r_nodes()) {
        let w = f(r);
        row.iter_mut().for_each(|x| *x *= w);
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

fn d_r(grid: &Grid, v: &[f64], parity: Parity, outer: OuterGhost) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    stencil::d_r(grid, v, parity.sign(), outer, &mut out);
    out
}

fn d_z(grid: &Grid, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    stencil::d_z(grid, v, &mut out);
    out
}

/// Velocity pieces shared by the record and `‖∇u‖_∞`.
struct Kinematics {
    u_r: Vec<f64>,
    u_z: Vec<f64>,
    u_theta: Vec<f64>,
}

impl Kinematics {
    fn new(stream: &StreamSolver, state: &State) -> Self {
        let grid = state.grid();
        let mut w = state.omega.values().to_vec();
        scale_rows(grid, &mut w, |r| r);
        let psi = stream.solve_values(&w);
        let mut u_r = vec![0.0; grid.len()];
        let mut u_z = vec![0.0; grid.len()];
        velocity_values(grid, &psi, &mut u_r, &mut u_z);
        let mut u_theta = state.gamma.values().to_vec();
        scale_rows(grid, &mut u_theta, |r| 1.0 / r);
        Kinematics { u_r, u_z, u_theta }
    }

    /// Pointwise `|∇b|²` and `|∇u|²` (Cartesian Frobenius norms).
    fn gradient_squares(&self, grid: &Grid) -> (Vec<f64>, Vec<f64>) {
        let ex = OuterGhost::Extrapolate;
        let ur_r = d_r(grid, &self.u_r, Parity::Odd, ex);
        let ur_z = d_z(grid, &self.u_r);
        let uz_r = d_r(grid, &self.u_z, Parity::Even, ex);
        let uz_z = d_z(grid, &self.u_z);
        let ut_r = d_r(grid, &self.u_theta, Parity::Odd, OuterGhost::Zero);
        let ut_z = d_z(grid, &self.u_theta);
        let n_z = grid.n_z();
        let mut gb = vec![0.0; grid.len()];
        let mut gu = vec![0.0; grid.len()];
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for k in i * n_z..(i + 1) * n_z {
                let hoop = self.u_r[k] / r;
                let b2 = ur_r[k].powi(2) + ur_z[k].powi(2) + hoop * hoop + uz_r[k].powi(2) + uz_z[k].powi(2);
                let swirl_hoop = self.u_theta[k] / r;
                gb[k] = b2;
                gu[k] = b2 + ut_r[k].powi(2) + ut_z[k].powi(2) + swirl_hoop * swirl_hoop;
            }
        }
        (gb, gu)
    }
}

/// `‖∇u‖_∞` of the full velocity `u_r e_r + u_θ e_θ + u_z e_z`.
pub fn linf_grad_u(stream: &StreamSolver, state: &State) -> f64 {
    let k = Kinematics::new(stream, state);
    let (_, gu) = k.gradient_squares(state.grid());
    gu.iter().fold(0.0_f64, |m, v| m.max(v.sqrt()))
}

/// Builds [`DiagnosticsRecord`]s along one run and carries the running time
/// integrals between records.
#[derive(Debug)]
pub struct Recorder {
    stream: StreamSolver,
    last: Option<(f64, f64, f64)>,
    l1linf_dz_h: f64,
    l1linf_grad_u: f64,
}

impl Recorder {
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        Ok(Recorder {
            stream: StreamSolver::new(grid)?,
            last: None,
            l1linf_dz_h: 0.0,
            l1linf_grad_u: 0.0,
        })
    }

    /// Running `∫₀ᵗ ‖∇u‖_∞ ds` over the records taken so far.
    pub fn grad_u_integral(&self) -> f64 {
        self.l1linf_grad_u
    }

    /// Record for `state`; `dt` is the step that produced it.
    pub fn record(&mut self, state: &State, dt: f64, history: &[DiagnosticsRecord]) -> Result<DiagnosticsRecord> {
        let grid = state.grid();
        if !grid.same_shape(self.stream.grid()) {
            return Err(Error::GridMismatch);
        }
        let p2 = Exponent::Finite(2.0);
        let p6 = Exponent::Finite(6.0);
        let gamma = state.gamma.values();
        let omega = state.omega.values();
        let big_h = state.big_h.values();

        let (omega_r, omega_z) = swirl_vorticity(&state.gamma)?;
        let linf_omega_rz = omega_r
            .values()
            .iter()
            .zip(omega_z.values())
            .fold(0.0_f64, |m, (a, b)| m.max(a.hypot(*b)));
        let mut omega_theta = omega.to_vec();
        scale_rows(grid, &mut omega_theta, |r| r);

        let kin = Kinematics::new(&self.stream, state);
        let (gb2, gu2) = kin.gradient_squares(grid);
        let grad_b: Vec<f64> = gb2.iter().map(|v| v.sqrt()).collect();
        let linf_grad_u = gu2.iter().fold(0.0_f64, |m, v| m.max(v.sqrt()));

        let h_r = d_r(grid, big_h, Parity::Even, OuterGhost::Zero);
        let h_z = d_z(grid, big_h);
        let h_zr = d_r(grid, &h_z, Parity::Even, OuterGhost::Zero);
        let h_zz = d_z(grid, &h_z);
        let linf_dz_h = max_abs(&h_z);

        let mut h_theta = big_h.to_vec();
        scale_rows(grid, &mut h_theta, |r| r);
        let gamma_z = d_z(grid, gamma);
        let mut j = gamma_z;
        scale_rows(grid, &mut j, |r| -1.0 / (r * r));
        let mut ur_over_r = kin.u_r.clone();
        scale_rows(grid, &mut ur_over_r, |r| 1.0 / r);
        let mut ut_over_r = kin.u_theta.clone();
        scale_rows(grid, &mut ut_over_r, |r| 1.0 / r);

        if let Some((t0, dz0, gu0)) = self.last {
            let span = state.t - t0;
            self.l1linf_dz_h += 0.5 * span * (dz0 + linf_dz_h);
            self.l1linf_grad_u += 0.5 * span * (gu0 + linf_grad_u);
        }
        self.last = Some((state.t, linf_dz_h, linf_grad_u));

        let field = |v: Vec<f64>, parity| ScalarField::from_raw(grid.clone(), v, parity);
        let u_r = field(kin.u_r.clone(), Parity::Odd);
        let u_theta = field(kin.u_theta.clone(), Parity::Odd);
        let u_z = field(kin.u_z.clone(), Parity::Even);
        let h_theta_f = field(h_theta.clone(), Parity::Odd);
        let h3_u = sobolev_norm_with(&[&u_r, &u_theta, &u_z], 3, OuterGhost::Extrapolate)?;
        let h3_h = sobolev_norm_with(&[&h_theta_f], 3, OuterGhost::Zero)?;

        let running_sup = history
            .iter()
            .fold(linf_omega_rz, |m, r| m.max(r.linf_omega_rz));

        let rec = DiagnosticsRecord {
            t: state.t,
            dt,
            linf_omega_rz,
            linf_omega_theta: max_abs(&omega_theta),
            l2_h: lp_norm_values(grid, big_h, p2),
            l6_h: lp_norm_values(grid, big_h, p6),
            linf_h: max_abs(big_h),
            l2_omega: lp_norm_values(grid, omega, p2),
            l6_omega: lp_norm_values(grid, omega, p6),
            l2_grad_h: (l2_squared(grid, &h_r) + l2_squared(grid, &h_z)).sqrt(),
            l2_grad_dz_h: (l2_squared(grid, &h_zr) + l2_squared(grid, &h_zz)).sqrt(),
            l1linf_dz_h_running: self.l1linf_dz_h,
            l2_h_theta: lp_norm_values(grid, &h_theta, p2),
            linf_h_theta: max_abs(&h_theta),
            l2_grad_b: lp_norm_values(grid, &grad_b, p2),
            l6_grad_b: lp_norm_values(grid, &grad_b, p6),
            l2_energy: l2_squared(grid, &kin.u_r)
                + l2_squared(grid, &kin.u_theta)
                + l2_squared(grid, &kin.u_z)
                + l2_squared(grid, &h_theta),
            h3_u,
            h3_h,
            bootstrap_q: state.t * running_sup,
            linf_ur_over_r: max_abs(&ur_over_r),
            linf_utheta_over_r: max_abs(&ut_over_r),
            l2_j: lp_norm_values(grid, &j, p2),
            l6_j: lp_norm_values(grid, &j, p6),
        };
        if let Some(col) = rec.first_nonfinite() {
            return Err(Error::NonFiniteDiagnostic(col));
        }
        Ok(rec)
    }
}
