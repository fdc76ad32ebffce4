//! A-priori quantities of the reduced system, the bootstrap quantity
//! `q(t) = t · sup_{s≤t} ‖(ω_r, ω_z)(s)‖_∞` and the breakdown-time proxy.

mod csv;
mod record;

pub use csv::{read_csv, to_csv_string, write_csv};
pub use record::{linf_grad_u, swirl_vorticity, Recorder};

/// One row of the diagnostics table. Field order is the CSV column order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub dt: f64,
    pub linf_omega_rz: f64,
    pub linf_omega_theta: f64,
    pub l2_h: f64,
    pub l6_h: f64,
    pub linf_h: f64,
    pub l2_omega: f64,
    pub l6_omega: f64,
    pub l2_grad_h: f64,
    pub l2_grad_dz_h: f64,
    /// Running `∫₀ᵗ ‖∂_z H‖_∞ ds` (trapezoid over records).
    pub l1linf_dz_h_running: f64,
    pub l2_h_theta: f64,
    pub linf_h_theta: f64,
    pub l2_grad_b: f64,
    pub l6_grad_b: f64,
    /// `‖u‖₂² + ‖h_θ‖₂²`
    pub l2_energy: f64,
    pub h3_u: f64,
    pub h3_h: f64,
    pub bootstrap_q: f64,
    pub linf_ur_over_r: f64,
    pub linf_utheta_over_r: f64,
    pub l2_j: f64,
    pub l6_j: f64,
}

pub const COLUMNS: [&str; 24] = [
    "t",
    "dt",
    "linf_omega_rz",
    "linf_omega_theta",
    "l2_H",
    "l6_H",
    "linf_H",
    "l2_Omega",
    "l6_Omega",
    "l2_grad_H",
    "l2_grad_dz_H",
    "l1linf_dz_H_running",
    "l2_h_theta",
    "linf_h_theta",
    "l2_grad_b",
    "l6_grad_b",
    "l2_energy",
    "h3_u",
    "h3_h",
    "bootstrap_q",
    "linf_ur_over_r",
    "linf_utheta_over_r",
    "l2_J",
    "l6_J",
];

impl DiagnosticsRecord {
    pub fn to_array(&self) -> [f64; 24] {
        [
            self.t,
            self.dt,
            self.linf_omega_rz,
            self.linf_omega_theta,
            self.l2_h,
            self.l6_h,
            self.linf_h,
            self.l2_omega,
            self.l6_omega,
            self.l2_grad_h,
            self.l2_grad_dz_h,
            self.l1linf_dz_h_running,
            self.l2_h_theta,
            self.linf_h_theta,
            self.l2_grad_b,
            self.l6_grad_b,
            self.l2_energy,
            self.h3_u,
            self.h3_h,
            self.bootstrap_q,
            self.linf_ur_over_r,
            self.linf_utheta_over_r,
            self.l2_j,
            self.l6_j,
        ]
    }

    pub fn from_array(v: [f64; 24]) -> Self {
        let [t, dt, linf_omega_rz, linf_omega_theta, l2_h, l6_h, linf_h, l2_omega, l6_omega, l2_grad_h, l2_grad_dz_h, l1linf_dz_h_running, l2_h_theta, linf_h_theta, l2_grad_b, l6_grad_b, l2_energy, h3_u, h3_h, bootstrap_q, linf_ur_over_r, linf_utheta_over_r, l2_j, l6_j] =
            v;
        DiagnosticsRecord {
            t,
            dt,
            linf_omega_rz,
            linf_omega_theta,
            l2_h,
            l6_h,
            linf_h,
            l2_omega,
            l6_omega,
            l2_grad_h,
            l2_grad_dz_h,
            l1linf_dz_h_running,
            l2_h_theta,
            linf_h_theta,
            l2_grad_b,
            l6_grad_b,
            l2_energy,
            h3_u,
            h3_h,
            bootstrap_q,
            linf_ur_over_r,
            linf_utheta_over_r,
            l2_j,
            l6_j,
        }
    }

    /// Column value by CSV name.
    pub fn get(&self, column: &str) -> Option<f64> {
        COLUMNS
            .iter()
            .position(|c| *c == column)
            .map(|k| self.to_array()[k])
    }

    /// First non-finite column, if any.
    pub fn first_nonfinite(&self) -> Option<&'static str> {
        self.to_array()
            .iter()
            .position(|v| !v.is_finite())
            .map(|k| COLUMNS[k])
    }
}

/// `q(t) = t · max_history ‖(ω_r, ω_z)‖_∞` at the last record; 0 for an empty history.
pub fn bootstrap_status(history: &[DiagnosticsRecord]) -> f64 {
    match history.last() {
        None => 0.0,
        Some(last) => {
            let sup = history.iter().fold(0.0_f64, |m, r| m.max(r.linf_omega_rz));
            last.t * sup
        }
    }
}

/// The continuation criterion `q ≤ 1` fails.
pub fn bootstrap_violated(q: f64) -> bool {
    q > 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Breakdown {
    None,
    BootstrapViolated,
    CflFloor,
    NonFinite,
    NormCap,
}

impl Breakdown {
    pub fn as_str(self) -> &'static str {
        match self {
            Breakdown::None => "none",
            Breakdown::BootstrapViolated => "bootstrap_violated",
            Breakdown::CflFloor => "cfl_floor",
            Breakdown::NonFinite => "nonfinite",
            Breakdown::NormCap => "norm_cap",
        }
    }
}

impl std::fmt::Display for Breakdown {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A breakdown signal raised at time `t` (the time the offending state has or
/// would have reached).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownEvent {
    pub t: f64,
    pub reason: Breakdown,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownVerdict {
    pub t_proxy: f64,
    pub reason: Breakdown,
}

/// Earliest triggering event wins; `t_proxy` is the last recorded time strictly
/// before it. Without events the run completed and `t_proxy` is the last record.
pub fn breakdown_time(history: &[DiagnosticsRecord], events: &[BreakdownEvent]) -> BreakdownVerdict {
    let first = events
        .iter()
        .filter(|e| e.reason != Breakdown::None)
        .fold(None::<&BreakdownEvent>, |best, e| match best {
            Some(b) if b.t <= e.t => Some(b),
            _ => Some(e),
        });
    match first {
        None => BreakdownVerdict {
            t_proxy: history.last().map_or(0.0, |r| r.t),
            reason: Breakdown::None,
        },
        Some(e) => BreakdownVerdict {
            t_proxy: history
                .iter()
                .filter(|r| r.t < e.t)
                .map(|r| r.t)
                .fold(history.first().map_or(0.0, |r| r.t), f64::max),
            reason: e.reason,
        },
    }
}

#[cfg(test)]
mod tests;
