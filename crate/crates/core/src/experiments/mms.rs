use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Parity, ScalarField};
use crate::grid::Grid;
use crate::solver::{Forcing, PhysicalParams, Solver, State};

const R_MAX: f64 = 8.0;
const Z_LEN: f64 = 16.0;
const CFL_SAFETY: f64 = 0.9;

/// An exact solution of the forced reduced system. `z` is measured from the
/// middle of the periodic box.
pub trait ManufacturedSolution: Send + Sync {
    fn name(&self) -> &'static str;
    fn params(&self) -> PhysicalParams;
    fn t_end(&self) -> f64;
    /// `(Γ, Ω, H)`
    fn exact(&self, t: f64, r: f64, z: f64) -> [f64; 3];
    fn forced(&self) -> bool {
        false
    }
    /// Source added to `(dΓ, dΩ, dH)`.
    fn source(&self, _t: f64, _r: f64, _z: f64) -> [f64; 3] {
        [0.0; 3]
    }
}

/// `H = (t₀/(t₀+νt))^{5/2} exp(−(r²+z²)/(4(t₀+νt)))`: the radial heat kernel in
/// five dimensions, which `∂_t H = ν(Δ + (2/r)∂_r)H` carries exactly.
pub struct HeatKernel5d {
    pub t0: f64,
    pub nu: f64,
    pub t_end: f64,
}

impl Default for HeatKernel5d {
    fn default() -> Self {
        HeatKernel5d {
            t0: 0.25,
            nu: 1.0,
            t_end: 0.1,
        }
    }
}

impl ManufacturedSolution for HeatKernel5d {
    fn name(&self) -> &'static str {
        "heat_kernel_5d"
    }

    fn params(&self) -> PhysicalParams {
        PhysicalParams {
            nu: self.nu,
            hall: 0.0,
            mu0_inv: 0.0,
        }
    }

    fn t_end(&self) -> f64 {
        self.t_end
    }

    fn exact(&self, t: f64, r: f64, z: f64) -> [f64; 3] {
        let s = self.t0 + self.nu * t;
        let h = (self.t0 / s).powf(2.5) * (-(r * r + z * z) / (4.0 * s)).exp();
        [0.0, 0.0, h]
    }
}

/// Coupled bumps with `G = exp(−r² − z²)`:
/// `Γ = B r²(1 + z/2) G`, `Ω = 2A(5 − 2r² − 2z²) G`, `H = C G`
/// with `A = (1+t)/2`, `B = 0.3(1+t²)`, `C = 0.6 cos t`.
/// `Ω` is the vorticity of `ψ = A r G`, so `u_r = 2A r z G`, `u_z = 2A(1 − r²) G`.
pub struct CoupledBumps {
    pub params: PhysicalParams,
    pub t_end: f64,
}

impl Default for CoupledBumps {
    fn default() -> Self {
        CoupledBumps {
            params: PhysicalParams::default(),
            t_end: 0.2,
        }
    }
}

impl CoupledBumps {
    fn amplitudes(t: f64) -> (f64, f64, f64) {
        (0.5 * (1.0 + t), 0.3 * (1.0 + t * t), 0.6 * t.cos())
    }
}

impl ManufacturedSolution for CoupledBumps {
    fn name(&self) -> &'static str {
        "coupled_bumps"
    }

    fn params(&self) -> PhysicalParams {
        self.params
    }

    fn t_end(&self) -> f64 {
        self.t_end
    }

    fn exact(&self, t: f64, r: f64, z: f64) -> [f64; 3] {
        let (a, b, c) = Self::amplitudes(t);
        let g = (-r * r - z * z).exp();
        [
            b * r * r * (1.0 + 0.5 * z) * g,
            2.0 * a * (5.0 - 2.0 * r * r - 2.0 * z * z) * g,
            c * g,
        ]
    }

    fn forced(&self) -> bool {
        true
    }

    fn source(&self, t: f64, r: f64, z: f64) -> [f64; 3] {
        let PhysicalParams { nu, hall, mu0_inv } = self.params;
        let (a, b, c) = Self::amplitudes(t);
        let (da, db, dc) = (0.5, 0.6 * t, -0.6 * t.sin());
        let g = (-r * r - z * z).exp();
        let q = 5.0 - 2.0 * r * r - 2.0 * z * z;
        let u_r = 2.0 * a * r * z * g;
        let u_z = 2.0 * a * (1.0 - r * r) * g;

        let gam_r = b * (1.0 + 0.5 * z) * (2.0 * r - 2.0 * r * r * r) * g;
        let gam_z = b * r * r * (0.5 - 2.0 * z - z * z) * g;
        let om_r = 2.0 * a * (-4.0 * r - 2.0 * r * q) * g;
        let om_z = 2.0 * a * (-4.0 * z - 2.0 * z * q) * g;
        let h = c * g;
        let h_r = -2.0 * r * h;
        let h_z = -2.0 * z * h;
        let lap_plus_h = (4.0 * r * r + 4.0 * z * z - 10.0) * h;
        // ∂_z(Γ²)/r⁴ with the r⁴ cancelled
        let swirl = 2.0 * b * b * (1.0 + 0.5 * z) * (0.5 - 2.0 * z - z * z) * g * g;

        let rhs_gamma = -(u_r * gam_r + u_z * gam_z);
        let rhs_omega = -(u_r * om_r + u_z * om_z) - mu0_inv * 2.0 * h * h_z + swirl;
        let rhs_h = -(u_r * h_r + u_z * h_z) + hall * 2.0 * h * h_z + nu * lap_plus_h;
        [
            db * r * r * (1.0 + 0.5 * z) * g - rhs_gamma,
            2.0 * da * q * g - rhs_omega,
            dc * g - rhs_h,
        ]
    }
}

/// The trivial solution; exercises the harness itself.
pub struct ZeroSolution;

impl ManufacturedSolution for ZeroSolution {
    fn name(&self) -> &'static str {
        "zero"
    }

    fn params(&self) -> PhysicalParams {
        PhysicalParams::default()
    }

    fn t_end(&self) -> f64 {
        0.1
    }

    fn exact(&self, _t: f64, _r: f64, _z: f64) -> [f64; 3] {
        [0.0; 3]
    }
}

struct SourceTerm(Arc<dyn ManufacturedSolution>);

impl Forcing for SourceTerm {
    fn add(&self, grid: &Grid, t: f64, d_gamma: &mut [f64], d_omega: &mut [f64], d_big_h: &mut [f64]) {
        let z_mid = grid.z_mid();
        for (i, &r) in grid.r_nodes().iter().enumerate() {
            for (j, &z) in grid.z_nodes().iter().enumerate() {
                let k = grid.idx(i, j);
                let s = self.0.source(t, r, z - z_mid);
                d_gamma[k] += s[0];
                d_omega[k] += s[1];
                d_big_h[k] += s[2];
            }
        }
    }
}

pub struct MmsRegistry {
    solutions: BTreeMap<&'static str, Arc<dyn ManufacturedSolution>>,
}

impl Default for MmsRegistry {
    fn default() -> Self {
        let mut reg = MmsRegistry::empty();
        let builtins: [Arc<dyn ManufacturedSolution>; 3] = [
            Arc::new(HeatKernel5d::default()),
            Arc::new(CoupledBumps::default()),
            Arc::new(ZeroSolution),
        ];
        for s in builtins {
            reg.register(s).expect("builtin names are distinct");
        }
        reg
    }
}

impl MmsRegistry {
    pub fn empty() -> Self {
        MmsRegistry {
            solutions: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, solution: Arc<dyn ManufacturedSolution>) -> Result<()> {
        let name = solution.name();
        if self.solutions.contains_key(name) {
            return Err(Error::InvalidArgument(format!("manufactured solution '{name}' already registered")));
        }
        self.solutions.insert(name, solution);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn ManufacturedSolution>> {
        self.solutions.get(name).cloned().ok_or_else(|| Error::UnknownName {
            kind: "manufactured solution",
            name: name.to_string(),
            known: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.solutions.keys().copied().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub h: f64,
    /// Sup-norm error over `(Γ, Ω, H)` at the final time.
    pub error: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub solution: String,
    pub t_end: f64,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    /// `log₂(e_h / e_{h/2})` for each consecutive pair; `None` when either error is zero.
    pub fn orders(&self) -> Vec<Option<f64>> {
        self.rows
            .windows(2)
            .map(|w| (w[0].error > 0.0 && w[1].error > 0.0).then(|| (w[0].error / w[1].error).log2()))
            .collect()
    }

    pub fn to_csv_string(&self) -> String {
        let mut s = String::from("n,h,error,order,steps\n");
        let orders = self.orders();
        for (k, r) in self.rows.iter().enumerate() {
            let order = match k.checked_sub(1).and_then(|p| orders[p]) {
                Some(o) => format!("{o:?}"),
                None => String::new(),
            };
            s.push_str(&format!("{},{:?},{:?},{},{}\n", r.n, r.h, r.error, order, r.steps));
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = format!("solution: {}\nt_end: {:?}\n", self.solution, self.t_end);
        let orders = self.orders();
        for (k, r) in self.rows.iter().enumerate() {
            s.push_str(&format!("n={:<5} h={:.6e} error={:.6e}", r.n, r.h, r.error));
            if let Some(Some(o)) = k.checked_sub(1).map(|p| orders[p]) {
                s.push_str(&format!(" order={o:.4}"));
            }
            s.push('\n');
        }
        s
    }
}

fn sample(grid: &Arc<Grid>, solution: &dyn ManufacturedSolution, t: f64, k: usize) -> Result<ScalarField> {
    let z_mid = grid.z_mid();
    ScalarField::from_fn(grid.clone(), Parity::Even, |r, z| solution.exact(t, r, z - z_mid)[k])
}

fn solve_on(solution: &Arc<dyn ManufacturedSolution>, n: usize) -> Result<ConvergenceRow> {
    let grid = Arc::new(Grid::new(n, n, R_MAX, Z_LEN)?);
    let mut solver = Solver::new(grid.clone())?;
    if solution.forced() {
        solver = solver.with_forcing(Arc::new(SourceTerm(solution.clone())));
    }
    let fields = |t: f64| -> Result<[ScalarField; 3]> {
        Ok([
            sample(&grid, solution.as_ref(), t, 0)?,
            sample(&grid, solution.as_ref(), t, 1)?,
            sample(&grid, solution.as_ref(), t, 2)?,
        ])
    };
    let [g, o, h] = fields(0.0)?;
    let mut state = State::new(0.0, g, o, h, solution.params())?;
    let t_end = solution.t_end();
    let mut steps = 0;
    while state.t < t_end {
        let remaining = t_end - state.t;
        let dt = solver.cfl_dt(&state, CFL_SAFETY)?.min(remaining);
        state = solver.step(&state, dt)?;
        if dt == remaining {
            state.t = t_end;
        }
        steps += 1;
    }
    let exact = fields(t_end)?;
    let error = [&state.gamma, &state.omega, &state.big_h]
        .iter()
        .zip(&exact)
        .flat_map(|(num, ex)| num.values().iter().zip(ex.values()).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max);
    Ok(ConvergenceRow {
        n,
        h: grid.h_max(),
        error,
        steps,
    })
}

/// Runs the solution on `n × n` grids of the fixed box `[0, 8] × [0, 16)`.
pub fn convergence_study_with(solution: Arc<dyn ManufacturedSolution>, resolutions: &[usize]) -> Result<ConvergenceTable> {
    if resolutions.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "convergence study needs at least 3 resolutions, got {}",
            resolutions.len()
        )));
    }
    if let Some(w) = resolutions.windows(2).find(|w| w[1] != 2 * w[0]) {
        return Err(Error::InvalidArgument(format!(
            "each resolution must double the last: {} -> {}",
            w[0], w[1]
        )));
    }
    let rows = resolutions
        .iter()
        .map(|&n| solve_on(&solution, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        solution: solution.name().to_string(),
        t_end: solution.t_end(),
        rows,
    })
}

pub fn convergence_study(registry: &MmsRegistry, id: &str, resolutions: &[usize]) -> Result<ConvergenceTable> {
    convergence_study_with(registry.get(id)?, resolutions)
}
