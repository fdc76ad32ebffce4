use std::path::Path;
use std::sync::Arc;

use super::state::{PhysicalParams, State};
use crate::error::{Error, Result};
use crate::grid::Grid;

const MAGIC: &[u8; 4] = b"AXHM";
pub const CHECKPOINT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 3 * 4 + 6 * 8;

/// Little-endian layout: magic, version, `n_r`, `n_z` (u32), then `r_max`,
/// `z_len`, `t`, `nu`, `hall`, `mu0_inv` (f64), then `Γ`, `Ω`, `H` row-major.
pub fn checkpoint_save(state: &State, path: &Path) -> Result<()> {
    let g = state.grid();
    let mut buf = Vec::with_capacity(HEADER_LEN + 3 * 8 * g.len());
    buf.extend_from_slice(MAGIC);
    for v in [CHECKPOINT_VERSION, g.n_r() as u32, g.n_z() as u32] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let p = state.params;
    for v in [g.r_max(), g.z_len(), state.t, p.nu, p.hall, p.mu0_inv] {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for f in [&state.gamma, &state.omega, &state.big_h] {
        for v in f.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let out = self.bytes[self.pos..self.pos + N].try_into().expect("length checked up front");
        self.pos += N;
        out
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}

pub fn checkpoint_load(path: &Path) -> Result<State> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let fail = |msg: String| Error::Checkpoint {
        path: path.to_path_buf(),
        msg,
    };
    if bytes.len() < HEADER_LEN {
        return Err(fail(format!("truncated header ({} bytes)", bytes.len())));
    }
    let mut rd = Reader { bytes: &bytes, pos: 0 };
    if &rd.take::<4>() != MAGIC {
        return Err(fail("bad magic".into()));
    }
    let version = rd.u32();
    if version != CHECKPOINT_VERSION {
        return Err(fail(format!("unsupported version {version}")));
    }
    let (n_r, n_z) = (rd.u32() as usize, rd.u32() as usize);
    let [r_max, z_len, t, nu, hall, mu0_inv] = std::array::from_fn(|_| rd.f64());
    let expected = n_r
        .checked_mul(n_z)
        .and_then(|n| n.checked_mul(24))
        .and_then(|n| n.checked_add(HEADER_LEN))
        .ok_or_else(|| fail(format!("absurd grid {n_r}x{n_z}")))?;
    if bytes.len() != expected {
        return Err(fail(format!(
            "truncated or oversized file: expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let grid = Arc::new(Grid::new(n_r, n_z, r_max, z_len).map_err(|e| fail(e.to_string()))?);
    let fields: [Vec<f64>; 3] = std::array::from_fn(|_| (0..n_r * n_z).map(|_| rd.f64()).collect());
    let params = PhysicalParams { nu, hall, mu0_inv };
    let probe = State::from_values(&grid, t, fields, params);
    State::new(probe.t, probe.gamma, probe.omega, probe.big_h, params).map_err(|e| fail(e.to_string()))
}

/// Loads a checkpoint to resume on `grid`; rejects a different grid descriptor.
pub fn checkpoint_load_for(grid: &Grid, path: &Path) -> Result<State> {
    let state = checkpoint_load(path)?;
    let g = state.grid();
    if !g.same_shape(grid) {
        return Err(Error::Checkpoint {
            path: path.to_path_buf(),
            msg: format!(
                "grid mismatch: file has {}x{} on [0,{}]x[0,{}), expected {}x{} on [0,{}]x[0,{})",
                g.n_r(),
                g.n_z(),
                g.r_max(),
                g.z_len(),
                grid.n_r(),
                grid.n_z(),
                grid.r_max(),
                grid.z_len()
            ),
        });
    }
    Ok(state)
}
