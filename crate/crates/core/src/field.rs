//! Axisymmetric scalar fields tagged with their reflection parity across the axis.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// Symmetry of a smooth axisymmetric component under `r -> -r`.
///
/// Odd components (`u_r`, `u_θ`, `h_θ`, `ω_θ`, `ψ_θ`, ...) vanish on the axis;
/// even components (`u_z`, `Ω`, `H`, `Γ`, ...) have zero radial slope there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    #[inline]
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    /// Parity after one radial derivative or one factor of `r`.
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// Ghost value used one cell beyond `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterGhost {
    /// Homogeneous Dirichlet: the field is taken to vanish outside the domain.
    Zero,
    /// Quadratic extrapolation from the last three rows; for quantities such as
    /// the return flow `u_z` that do not decay at the truncation radius.
    Extrapolate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    parity: Parity,
}

impl ScalarField {
    /// Wraps row-major samples (`values[i * n_z + j]`), rejecting non-finite entries.
    pub fn new(grid: Arc<Grid>, values: Vec<f64>, parity: Parity) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            let (i, j) = (k / grid.n_z(), k % grid.n_z());
            return Err(Error::NonFiniteSample {
                i,
                j,
                r: grid.r_nodes()[i],
                z: grid.z_nodes()[j],
                value: values[k],
            });
        }
        Ok(ScalarField {
            grid,
            values,
            parity,
        })
    }

    /// Internal constructor for operator outputs; finiteness is the caller's concern.
    pub(crate) fn from_raw(grid: Arc<Grid>, values: Vec<f64>, parity: Parity) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        ScalarField {
            grid,
            values,
            parity,
        }
    }

    pub fn zeros(grid: Arc<Grid>, parity: Parity) -> Self {
        let n = grid.len();
        ScalarField::from_raw(grid, vec![0.0; n], parity)
    }

    /// Samples `f(r_i, z_j)` on every node. The parity tag is recorded as given.
    pub fn from_fn<F>(grid: Arc<Grid>, parity: Parity, f: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let mut values = Vec::with_capacity(grid.len());
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for (j, &z) in grid.z_nodes().iter().enumerate() {
                let v = f(r, z);
                if !v.is_finite() {
                    return Err(Error::NonFiniteSample { i, j, r, z, value: v });
                }
                values.push(v);
            }
        }
        Ok(ScalarField::from_raw(grid, values, parity))
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Value at ghost row `i = -1`, the reflection of row 0 through the axis.
    #[inline]
    pub fn axis_ghost(&self, j: usize) -> f64 {
        self.parity.sign() * self.values[j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n_z = self.grid.n_z();
        &self.values[i * n_z..(i + 1) * n_z]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// First non-finite node, if any.
    pub fn first_nonfinite(&self) -> Option<(usize, usize)> {
        self.values
            .iter()
            .position(|v| !v.is_finite())
            .map(|k| (k / self.grid.n_z(), k % self.grid.n_z()))
    }

    pub fn scaled(&self, c: f64) -> ScalarField {
        self.map(|v| c * v)
    }

    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> ScalarField {
        let values = self.values.iter().map(|&v| f(v)).collect();
        ScalarField::from_raw(self.grid.clone(), values, self.parity)
    }

    /// Pointwise product with `r^k`; each factor of `r` flips the parity.
    pub fn times_r_pow(&self, k: i32) -> ScalarField {
        let n_z = self.grid.n_z();
        let mut out = self.values.clone();
        for (i, &r) in self.grid.r_nodes().iter().enumerate() {
            let w = r.powi(k);
            for v in &mut out[i * n_z..(i + 1) * n_z] {
                *v *= w;
            }
        }
        let parity = if k.rem_euclid(2) == 1 {
            self.parity.flip()
        } else {
            self.parity
        };
        ScalarField::from_raw(self.grid.clone(), out, parity)
    }

    /// Elementwise `self * other`; parities multiply.
    pub fn mul(&self, other: &ScalarField) -> Result<ScalarField> {
        self.check_grid(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        let parity = if self.parity == other.parity {
            Parity::Even
        } else {
            Parity::Odd
        };
        Ok(ScalarField::from_raw(self.grid.clone(), values, parity))
    }

    pub(crate) fn check_grid(&self, other: &ScalarField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_shape(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub(crate) fn require_parity(&self, want: Parity, op: &str) -> Result<()> {
        if self.parity == want {
            Ok(())
        } else {
            Err(Error::Parity(format!(
                "{op} needs an {} field, got {}",
                want.name(),
                self.parity.name()
            )))
        }
    }
}
