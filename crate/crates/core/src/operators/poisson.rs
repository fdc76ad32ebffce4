//! Stream-function solve `(Δ - 1/r²) ψ_θ = -ω_θ`.
//!
//! Real FFT in the periodic `z` direction, then one tridiagonal radial system
//! per axial mode. The radial rows are the same three-point stencil used by
//! [`laplacian_minus`](super::laplacian_minus); the axial symbol is the exact
//! eigenvalue of the three-point `∂_z²`, so the discrete residual vanishes to
//! rounding. Thomas factors are precomputed once per grid.

use std::sync::Arc;

use realfft::num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};

use crate::error::{Error, Result};
use crate::field::{Parity, ScalarField};
use crate::grid::Grid;

use super::stencil;

pub struct StreamSolver {
    grid: Arc<Grid>,
    forward: Arc<dyn RealToComplex<f64>>,
    inverse: Arc<dyn ComplexToReal<f64>>,
    n_modes: usize,
    // sub-diagonal weight of row i (the axis ghost is folded into row 0)
    lower: Vec<f64>,
    // per mode, row-major [k * n_r + i]
    c_prime: Vec<f64>,
    inv_pivot: Vec<f64>,
}

impl std::fmt::Debug for StreamSolver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("StreamSolver")
            .field("n_r", &self.grid.n_r())
            .field("n_z", &self.grid.n_z())
            .field("n_modes", &self.n_modes)
            .finish()
    }
}

impl StreamSolver {
    pub fn new(grid: Arc<Grid>) -> Result<Self> {
        let (n_r, n_z) = (grid.n_r(), grid.n_z());
        let mut planner = RealFftPlanner::<f64>::new();
        let forward = planner.plan_fft_forward(n_z);
        let inverse = planner.plan_fft_inverse(n_z);
        let n_modes = n_z / 2 + 1;

        let inv_hz2 = 1.0 / (grid.h_z() * grid.h_z());
        let mut lower = vec![0.0; n_r];
        let mut upper = vec![0.0; n_r];
        let mut diag0 = vec![0.0; n_r];
        for (i, [lo, c, hi]) in stencil::azimuthal_weights(&grid).into_iter().enumerate() {
            // odd reflection folds the axis ghost into the diagonal
            if i == 0 {
                diag0[i] = c - lo;
            } else {
                lower[i] = lo;
                diag0[i] = c;
            }
            upper[i] = if i + 1 == n_r { 0.0 } else { hi };
        }

        let mut c_prime = vec![0.0; n_modes * n_r];
        let mut inv_pivot = vec![0.0; n_modes * n_r];
        for k in 0..n_modes {
            let s = (std::f64::consts::PI * k as f64 / n_z as f64).sin();
            let kappa2 = 4.0 * inv_hz2 * s * s;
            let base = k * n_r;
            let mut prev_c = 0.0;
            for i in 0..n_r {
                let pivot = diag0[i] - kappa2 - lower[i] * prev_c;
                if pivot.abs() < f64::MIN_POSITIVE || !pivot.is_finite() {
                    return Err(Error::SingularSystem { mode: k, row: i });
                }
                let inv = 1.0 / pivot;
                inv_pivot[base + i] = inv;
                prev_c = upper[i] * inv;
                c_prime[base + i] = prev_c;
            }
        }

        Ok(StreamSolver {
            grid,
            forward,
            inverse,
            n_modes,
            lower,
            c_prime,
            inv_pivot,
        })
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    /// Solves for `ψ_θ` (odd) given `ω_θ` (odd).
    pub fn solve(&self, omega_theta: &ScalarField) -> Result<ScalarField> {
        omega_theta.require_parity(Parity::Odd, "solve_streamfunction")?;
        if !self.grid.same_shape(omega_theta.grid()) {
            return Err(Error::GridMismatch);
        }
        let values = self.solve_values(omega_theta.values());
        Ok(ScalarField::from_raw(self.grid.clone(), values, Parity::Odd))
    }

    /// Raw-slice variant used inside the right-hand side.
    pub(crate) fn solve_values(&self, omega_theta: &[f64]) -> Vec<f64> {
        let (n_r, n_z) = (self.grid.n_r(), self.grid.n_z());
        let nm = self.n_modes;
        let mut spec = vec![Complex64::new(0.0, 0.0); n_r * nm];
        let mut row = vec![0.0; n_z];
        let mut scratch_f = self.forward.make_scratch_vec();
        for i in 0..n_r {
            // right-hand side is -ω
            for (dst, &src) in row.iter_mut().zip(&omega_theta[i * n_z..(i + 1) * n_z]) {
                *dst = -src;
            }
            self.forward
                .process_with_scratch(&mut row, &mut spec[i * nm..(i + 1) * nm], &mut scratch_f)
                .expect("fft buffer sizes are fixed by the plan");
        }

        for k in 0..nm {
            let cp = &self.c_prime[k * n_r..(k + 1) * n_r];
            let ip = &self.inv_pivot[k * n_r..(k + 1) * n_r];
            let mut prev = Complex64::new(0.0, 0.0);
            for i in 0..n_r {
                let y = spec[i * nm + k];
                prev = (y - prev * self.lower[i]) * ip[i];
                spec[i * nm + k] = prev;
            }
            let mut next = Complex64::new(0.0, 0.0);
            for i in (0..n_r).rev() {
                next = spec[i * nm + k] - next * cp[i];
                spec[i * nm + k] = next;
            }
        }

        let mut out = vec![0.0; n_r * n_z];
        let mut scratch_i = self.inverse.make_scratch_vec();
        let norm = 1.0 / n_z as f64;
        for i in 0..n_r {
            let buf = &mut spec[i * nm..(i + 1) * nm];
            // imaginary parts of the DC and Nyquist bins are zero for real data
            buf[0].im = 0.0;
            if n_z % 2 == 0 {
                buf[nm - 1].im = 0.0;
            }
            let dst = &mut out[i * n_z..(i + 1) * n_z];
            self.inverse
                .process_with_scratch(buf, dst, &mut scratch_i)
                .expect("fft buffer sizes are fixed by the plan");
            for v in dst.iter_mut() {
                *v *= norm;
            }
        }
        out
    }
}
