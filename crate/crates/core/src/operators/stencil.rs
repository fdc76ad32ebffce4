//! Second-order central-difference kernels on row-major `(r, z)` slices.
//!
//! Row `i = -1` is the parity reflection of row 0; row `i = n_r` comes from the
//! [`OuterGhost`] policy. The axial direction wraps periodically.

use crate::field::OuterGhost;
use crate::grid::Grid;

#[inline]
fn outer_ghost(src: &[f64], n_r: usize, n_z: usize, j: usize, outer: OuterGhost) -> f64 {
    match outer {
        OuterGhost::Zero => 0.0,
        OuterGhost::Extrapolate => {
            let a = src[(n_r - 1) * n_z + j];
            let b = src[(n_r - 2) * n_z + j];
            let c = src[(n_r - 3) * n_z + j];
            3.0 * a - 3.0 * b + c
        }
    }
}

/// Radial neighbours `(f[i-1][j], f[i+1][j])` including ghosts.
#[inline]
pub(crate) fn radial_neighbours(
    grid: &Grid,
    src: &[f64],
    sign: f64,
    outer: OuterGhost,
    i: usize,
    j: usize,
) -> (f64, f64) {
    let (n_r, n_z) = (grid.n_r(), grid.n_z());
    let lo = if i == 0 {
        sign * src[j]
    } else {
        src[(i - 1) * n_z + j]
    };
    let hi = if i + 1 == n_r {
        outer_ghost(src, n_r, n_z, j, outer)
    } else {
        src[(i + 1) * n_z + j]
    };
    (lo, hi)
}

/// `out = scale * ∂_r src` with parity sign `sign` at the axis.
pub(crate) fn d_r(grid: &Grid, src: &[f64], sign: f64, outer: OuterGhost, out: &mut [f64]) {
    let (n_r, n_z) = (grid.n_r(), grid.n_z());
    let inv = 0.5 / grid.h_r();
    for i in 0..n_r {
        let row = i * n_z;
        if i == 0 || i + 1 == n_r {
            for j in 0..n_z {
                let (lo, hi) = radial_neighbours(grid, src, sign, outer, i, j);
                out[row + j] = (hi - lo) * inv;
            }
        } else {
            let (lo, hi) = (&src[row - n_z..row], &src[row + n_z..row + 2 * n_z]);
            for j in 0..n_z {
                out[row + j] = (hi[j] - lo[j]) * inv;
            }
        }
    }
}

/// `out = ∂_z src`, periodic.
pub(crate) fn d_z(grid: &Grid, src: &[f64], out: &mut [f64]) {
    let n_z = grid.n_z();
    let inv = 0.5 / grid.h_z();
    for (s, o) in src.chunks_exact(n_z).zip(out.chunks_exact_mut(n_z)) {
        o[0] = (s[1] - s[n_z - 1]) * inv;
        for j in 1..n_z - 1 {
            o[j] = (s[j + 1] - s[j - 1]) * inv;
        }
        o[n_z - 1] = (s[0] - s[n_z - 2]) * inv;
    }
}

/// `out = ∂_r² src` (three-point).
pub(crate) fn d_rr(grid: &Grid, src: &[f64], sign: f64, outer: OuterGhost, out: &mut [f64]) {
    let (n_r, n_z) = (grid.n_r(), grid.n_z());
    let inv = 1.0 / (grid.h_r() * grid.h_r());
    for i in 0..n_r {
        for j in 0..n_z {
            let (lo, hi) = radial_neighbours(grid, src, sign, outer, i, j);
            out[i * n_z + j] = (hi - 2.0 * src[i * n_z + j] + lo) * inv;
        }
    }
}

/// `out = ∂_z² src` (three-point, periodic).
pub(crate) fn d_zz(grid: &Grid, src: &[f64], out: &mut [f64]) {
    let n_z = grid.n_z();
    let inv = 1.0 / (grid.h_z() * grid.h_z());
    for (s, o) in src.chunks_exact(n_z).zip(out.chunks_exact_mut(n_z)) {
        for j in 0..n_z {
            let jm = if j == 0 { n_z - 1 } else { j - 1 };
            let jp = if j + 1 == n_z { 0 } else { j + 1 };
            o[j] = (s[jp] - 2.0 * s[j] + s[jm]) * inv;
        }
    }
}

/// Three-point radial weights `(f[i-1], f[i], f[i+1])` of one Laplacian row,
/// without the axial part.
pub(crate) type RowWeights = [f64; 3];

/// `∂_r² + (c/r) ∂_r - m/r²` in the plain expanded central form.
pub(crate) fn expanded_weights(grid: &Grid, c: f64, m: f64) -> Vec<RowWeights> {
    let h = grid.h_r();
    let inv = 1.0 / (h * h);
    grid.r_nodes()
        .iter()
        .map(|&r| {
            [
                inv - c / (2.0 * r * h),
                -2.0 * inv - m / (r * r),
                inv + c / (2.0 * r * h),
            ]
        })
        .collect()
}

/// Conservative `(1/r) ∂_r (a ∂_r f) - m f` for the azimuthal vector Laplacian.
///
/// The face weights `a_{i-1/2} = r_{i-1/2} (4i² - 2)/(4i² - 1)` and the matching
/// `m_i = (a_{i+1/2} - a_{i-1/2}) / (r_i² h)` make the row exact on `r` and `r³`.
/// With the plain weights `a = r_{i-1/2}, m = 1/r²` the truncation error on the
/// cubic term is `h²/r`, which is first order on the rows next to the axis.
/// The operator stays symmetric in the `r`-weighted inner product.
pub(crate) fn azimuthal_weights(grid: &Grid) -> Vec<RowWeights> {
    let h = grid.h_r();
    let face = |i: usize| {
        let k = (i * i) as f64;
        i as f64 * h * (4.0 * k - 2.0) / (4.0 * k - 1.0)
    };
    grid.r_nodes()
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let (lo, hi) = (face(i), face(i + 1));
            let scale = 1.0 / (r * h * h);
            let m = (hi - lo) / (r * r * h);
            [lo * scale, -(lo + hi) * scale - m, hi * scale]
        })
        .collect()
}

/// `out = Σ weights · f + ∂_z² f` with parity sign `sign` at the axis and a
/// zero ghost at `r_max`.
pub(crate) fn radial_laplacian(
    grid: &Grid,
    src: &[f64],
    sign: f64,
    weights: &[RowWeights],
    out: &mut [f64],
) {
    let (n_r, n_z) = (grid.n_r(), grid.n_z());
    let inv_zz = 1.0 / (grid.h_z() * grid.h_z());
    let zero = vec![0.0; n_z];
    for i in 0..n_r {
        let [w_lo, w_c, w_hi] = weights[i];
        let w_c = w_c - 2.0 * inv_zz;
        let row = &src[i * n_z..(i + 1) * n_z];
        let hi = if i + 1 == n_r {
            &zero[..]
        } else {
            &src[(i + 1) * n_z..(i + 2) * n_z]
        };
        let o = &mut out[i * n_z..(i + 1) * n_z];
        if i == 0 {
            for j in 0..n_z {
                let jm = if j == 0 { n_z - 1 } else { j - 1 };
                let jp = if j + 1 == n_z { 0 } else { j + 1 };
                let lo = sign * row[j];
                o[j] = w_lo * lo + w_hi * hi[j] + w_c * row[j] + inv_zz * (row[jp] + row[jm]);
            }
        } else {
            let lo = &src[(i - 1) * n_z..i * n_z];
            o[0] = w_lo * lo[0] + w_hi * hi[0] + w_c * row[0] + inv_zz * (row[1] + row[n_z - 1]);
            for j in 1..n_z - 1 {
                o[j] = w_lo * lo[j] + w_hi * hi[j] + w_c * row[j] + inv_zz * (row[j + 1] + row[j - 1]);
            }
            let k = n_z - 1;
            o[k] = w_lo * lo[k] + w_hi * hi[k] + w_c * row[k] + inv_zz * (row[0] + row[k - 1]);
        }
    }
}
