//! Explicit time integration of the reduced system in `(Γ, Ω, H)`.

mod checkpoint;
mod init;
mod profiles;
mod rhs;
mod run;
mod state;
mod stepping;

pub use checkpoint::{checkpoint_load, checkpoint_load_for, checkpoint_save, CHECKPOINT_VERSION};
pub use init::{init_state, init_state_with, InitialDataSpec, ShapeSpec};
pub use profiles::{Profile, ProfileRegistry};
pub use rhs::{compute_rhs, Forcing, Solver};
pub use run::{run, RunControl, RunOutcome, Simulation, TerminationReason};
pub use state::{PhysicalParams, State, Tendency};
pub use stepping::{cfl_dt, ssp_rk3, step, RkVector};
