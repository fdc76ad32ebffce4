//! Pointwise magnitudes of Cartesian derivatives of even axisymmetric scalars.

use crate::field::{OuterGhost, ScalarField};
use crate::grid::Grid;
use crate::operators::stencil;

pub(crate) struct Derivatives {
    pub f_r: Vec<f64>,
    pub f_z: Vec<f64>,
    pub f_rr: Vec<f64>,
    pub f_rz: Vec<f64>,
    pub f_zz: Vec<f64>,
}

impl Derivatives {
    pub fn of(grid: &Grid, f: &[f64], outer: OuterGhost) -> Self {
        let n = grid.len();
        let mut f_r = vec![0.0; n];
        let mut f_z = vec![0.0; n];
        let mut f_rr = vec![0.0; n];
        let mut f_rz = vec![0.0; n];
        let mut f_zz = vec![0.0; n];
        stencil::d_r(grid, f, 1.0, outer, &mut f_r);
        stencil::d_z(grid, f, &mut f_z);
        stencil::d_rr(grid, f, 1.0, outer, &mut f_rr);
        stencil::d_z(grid, &f_r, &mut f_rz);
        stencil::d_zz(grid, f, &mut f_zz);
        Derivatives {
            f_r,
            f_z,
            f_rr,
            f_rz,
            f_zz,
        }
    }

    pub fn gradient(&self) -> Vec<f64> {
        self.f_r.iter().zip(&self.f_z).map(|(a, b)| a.hypot(*b)).collect()
    }

    /// Frobenius norm of the 3-D Hessian: `f_rr² + (f_r/r)² + 2 f_rz² + f_zz²`.
    pub fn hessian(&self, grid: &Grid) -> Vec<f64> {
        let n_z = grid.n_z();
        let mut out = vec![0.0; grid.len()];
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for k in i * n_z..(i + 1) * n_z {
                let hoop = self.f_r[k] / r;
                out[k] = (self.f_rr[k].powi(2) + hoop * hoop + 2.0 * self.f_rz[k].powi(2) + self.f_zz[k].powi(2)).sqrt();
            }
        }
        out
    }
}

/// `|∇^order f|` for `order ≤ 2`.
pub(crate) fn derivative_magnitude(f: &ScalarField, order: usize) -> Vec<f64> {
    match order {
        0 => f.values().iter().map(|v| v.abs()).collect(),
        1 | 2 => {
            let d = Derivatives::of(f.grid(), f.values(), OuterGhost::Zero);
            if order == 1 {
                d.gradient()
            } else {
                d.hessian(f.grid())
            }
        }
        _ => unreachable!("derivative orders are validated to be at most 2"),
    }
}
