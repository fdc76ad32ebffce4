//! Cell-centred discretization of the meridian half-plane `(r, z)`.
//!
//! Radial nodes sit at `r_i = (i + 1/2) h_r`, so the axis `r = 0` is never a
//! sample point and `1/r` factors stay finite. The axial direction is periodic
//! with nodes `z_j = j h_z`.

use crate::error::{Error, Result};

pub const MIN_CELLS: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    n_r: usize,
    n_z: usize,
    r_max: f64,
    z_len: f64,
    h_r: f64,
    h_z: f64,
    r_nodes: Vec<f64>,
    z_nodes: Vec<f64>,
}

impl Grid {
    pub fn new(n_r: usize, n_z: usize, r_max: f64, z_len: f64) -> Result<Self> {
        if n_r < MIN_CELLS || n_z < MIN_CELLS {
            return Err(Error::Grid(format!(
                "need at least {MIN_CELLS} cells per direction, got n_r={n_r}, n_z={n_z}"
            )));
        }
        if !(r_max.is_finite() && r_max > 0.0) || !(z_len.is_finite() && z_len > 0.0) {
            return Err(Error::Grid(format!(
                "extents must be positive and finite, got r_max={r_max}, z_len={z_len}"
            )));
        }
        let h_r = r_max / n_r as f64;
        let h_z = z_len / n_z as f64;
        let r_nodes = (0..n_r).map(|i| (i as f64 + 0.5) * h_r).collect();
        let z_nodes = (0..n_z).map(|j| j as f64 * h_z).collect();
        Ok(Grid {
            n_r,
            n_z,
            r_max,
            z_len,
            h_r,
            h_z,
            r_nodes,
            z_nodes,
        })
    }

    pub fn n_r(&self) -> usize {
        self.n_r
    }

    pub fn n_z(&self) -> usize {
        self.n_z
    }

    pub fn len(&self) -> usize {
        self.n_r * self.n_z
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn z_len(&self) -> f64 {
        self.z_len
    }

    pub fn h_r(&self) -> f64 {
        self.h_r
    }

    pub fn h_z(&self) -> f64 {
        self.h_z
    }

    /// Smallest spacing, used by the time-step limits.
    pub fn h_min(&self) -> f64 {
        self.h_r.min(self.h_z)
    }

    /// Largest spacing; the scale of the second-order truncation error.
    pub fn h_max(&self) -> f64 {
        self.h_r.max(self.h_z)
    }

    pub fn r_nodes(&self) -> &[f64] {
        &self.r_nodes
    }

    pub fn z_nodes(&self) -> &[f64] {
        &self.z_nodes
    }

    /// Axial midplane `z_len / 2`, the default centre of initial bumps.
    pub fn z_mid(&self) -> f64 {
        0.5 * self.z_len
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.n_z + j
    }

    /// Quadrature weight `2π r_i h_r h_z` of node `(i, ·)` for integrals over ℝ³.
    #[inline]
    pub fn volume_weight(&self, i: usize) -> f64 {
        2.0 * std::f64::consts::PI * self.r_nodes[i] * self.h_r * self.h_z
    }

    /// Same descriptor (dimensions and extents), compared bitwise.
    pub fn same_shape(&self, other: &Grid) -> bool {
        self.n_r == other.n_r
            && self.n_z == other.n_z
            && self.r_max.to_bits() == other.r_max.to_bits()
            && self.z_len.to_bits() == other.z_len.to_bits()
    }
}
