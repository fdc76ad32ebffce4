//! Numerical laboratory for the axisymmetric, inviscid, resistive Hall-MHD
//! system with swirl, evolved in the reduced variables `Γ = r u_θ`,
//! `Ω = ω_θ / r` and `H = h_θ / r`.

pub mod bench;
pub mod diagnostics;
pub mod error;
pub mod experiments;
pub mod field;
pub mod grid;
pub mod norms;
pub mod operators;
pub mod solver;

pub use error::{Error, Result};
pub use field::{OuterGhost, Parity, ScalarField};
pub use grid::Grid;
