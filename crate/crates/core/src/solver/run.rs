use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::checkpoint::checkpoint_save;
use super::init::{init_state, InitialDataSpec};
use super::rhs::Solver;
use super::state::{PhysicalParams, State};
use super::stepping::{check_safety, stable_dt};
use crate::diagnostics::{
    bootstrap_violated, breakdown_time, Breakdown, BreakdownEvent, BreakdownVerdict, DiagnosticsRecord, Recorder,
};
use crate::error::{Error, Result};
use crate::grid::Grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunControl {
    pub t_end: f64,
    pub cfl_safety: f64,
    /// Steps shorter than this end the run with `cfl_floor`.
    pub dt_min: f64,
    pub record_every: usize,
    /// Cap on `h3_u + h3_h`.
    pub norm_cap: f64,
    /// Steps between checkpoints; 0 writes only the final state.
    pub checkpoint_every: usize,
    pub checkpoint_path: Option<PathBuf>,
}

impl Default for RunControl {
    fn default() -> Self {
        RunControl {
            t_end: 1.0,
            cfl_safety: 0.9,
            dt_min: 1e-10,
            record_every: 10,
            norm_cap: 1e6,
            checkpoint_every: 0,
            checkpoint_path: None,
        }
    }
}

impl RunControl {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::InvalidArgument(format!("t_end must be finite and >= 0, got {}", self.t_end)));
        }
        check_safety(self.cfl_safety)?;
        if !(self.dt_min.is_finite() && self.dt_min >= 0.0) {
            return Err(Error::InvalidArgument(format!("dt_min must be finite and >= 0, got {}", self.dt_min)));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidArgument("record_every must be >= 1".into()));
        }
        if !(self.norm_cap > 0.0) {
            return Err(Error::InvalidArgument(format!("norm_cap must be positive, got {}", self.norm_cap)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminationReason {
    Completed,
    CflFloor,
    NonFinite,
    NormCap,
    BootstrapViolated,
}

impl TerminationReason {
    pub fn as_str(self) -> &'static str {
        match self {
            TerminationReason::Completed => "completed",
            TerminationReason::CflFloor => "cfl_floor",
            TerminationReason::NonFinite => "nonfinite",
            TerminationReason::NormCap => "norm_cap",
            TerminationReason::BootstrapViolated => "bootstrap_violated",
        }
    }

    pub fn breakdown(self) -> Breakdown {
        match self {
            TerminationReason::Completed => Breakdown::None,
            TerminationReason::CflFloor => Breakdown::CflFloor,
            TerminationReason::NonFinite => Breakdown::NonFinite,
            TerminationReason::NormCap => Breakdown::NormCap,
            TerminationReason::BootstrapViolated => Breakdown::BootstrapViolated,
        }
    }

    fn from_breakdown(b: Breakdown) -> Self {
        match b {
            Breakdown::None => TerminationReason::Completed,
            Breakdown::CflFloor => TerminationReason::CflFloor,
            Breakdown::NonFinite => TerminationReason::NonFinite,
            Breakdown::NormCap => TerminationReason::NormCap,
            Breakdown::BootstrapViolated => TerminationReason::BootstrapViolated,
        }
    }
}

impl std::fmt::Display for TerminationReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub state: State,
    pub records: Vec<DiagnosticsRecord>,
    pub reason: TerminationReason,
    pub verdict: BreakdownVerdict,
    pub steps: usize,
}

/// One timeline: state, diagnostics history and breakdown bookkeeping.
#[derive(Debug)]
pub struct Simulation {
    solver: Solver,
    state: State,
    control: RunControl,
    recorder: Recorder,
    history: Vec<DiagnosticsRecord>,
    steps: usize,
    recorded_at: usize,
    last_dt: f64,
    event: Option<BreakdownEvent>,
    pending: Option<Breakdown>,
    finished: Option<TerminationReason>,
}

impl Simulation {
    pub fn new(solver: Solver, state: State, control: RunControl) -> Result<Self> {
        control.validate()?;
        if !solver.grid().same_shape(state.grid()) {
            return Err(Error::GridMismatch);
        }
        let recorder = Recorder::new(solver.grid().clone())?;
        let mut sim = Simulation {
            solver,
            state,
            control,
            recorder,
            history: Vec::new(),
            steps: 0,
            recorded_at: 0,
            last_dt: 0.0,
            event: None,
            pending: None,
            finished: None,
        };
        sim.pending = sim.take_record()?;
        Ok(sim)
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn solver(&self) -> &Solver {
        &self.solver
    }

    pub fn history(&self) -> &[DiagnosticsRecord] {
        &self.history
    }

    pub fn recorder(&self) -> &Recorder {
        &self.recorder
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn finished(&self) -> Option<TerminationReason> {
        self.finished
    }

    fn done(&self) -> bool {
        self.state.t >= self.control.t_end * (1.0 - 4.0 * f64::EPSILON)
    }

    fn finish(&mut self, reason: Breakdown, t: f64) -> Result<TerminationReason> {
        if reason != Breakdown::None {
            self.event.get_or_insert(BreakdownEvent { t, reason });
        }
        if self.recorded_at != self.steps {
            // the last good state; failures here do not change the verdict
            let _ = self.take_record();
        }
        if let Some(path) = self.control.checkpoint_path.clone() {
            checkpoint_save(&self.state, &path)?;
        }
        let r = TerminationReason::from_breakdown(reason);
        self.finished = Some(r);
        Ok(r)
    }

    /// Appends a record for the current state and checks the record-level signals.
    fn take_record(&mut self) -> Result<Option<Breakdown>> {
        self.recorded_at = self.steps;
        let rec = match self.recorder.record(&self.state, self.last_dt, &self.history) {
            Ok(r) => r,
            Err(Error::NonFiniteDiagnostic(_)) => return Ok(Some(Breakdown::NonFinite)),
            Err(e) => return Err(e),
        };
        self.history.push(rec);
        if !(rec.h3_u + rec.h3_h <= self.control.norm_cap) {
            return Ok(Some(Breakdown::NormCap));
        }
        if bootstrap_violated(rec.bootstrap_q) {
            return Ok(Some(Breakdown::BootstrapViolated));
        }
        Ok(None)
    }

    /// Advances one step. Returns the termination reason once the run ends;
    /// further calls keep returning it.
    pub fn step(&mut self) -> Result<Option<TerminationReason>> {
        if let Some(r) = self.finished {
            return Ok(Some(r));
        }
        if let Some(b) = self.pending.take() {
            return self.finish(b, self.state.t).map(Some);
        }
        if self.done() {
            return self.finish(Breakdown::None, self.state.t).map(Some);
        }
        let t = self.state.t;
        let u = self.state.to_values();
        let params = self.state.params;
        let mut speed = 0.0;
        let k1 = match self.solver.rhs_values(t, &u, &params, Some(&mut speed)) {
            Ok(k) => k,
            Err(Error::NonFinite { .. }) => return self.finish(Breakdown::NonFinite, t).map(Some),
            Err(e) => return Err(e),
        };
        let dt_cfl = stable_dt(self.solver.grid(), &params, speed, self.state.big_h.max_abs(), self.control.cfl_safety);
        if dt_cfl < self.control.dt_min {
            return self.finish(Breakdown::CflFloor, t + dt_cfl).map(Some);
        }
        let remaining = self.control.t_end - t;
        let dt = if dt_cfl >= remaining { remaining } else { dt_cfl };
        let next = match self.solver.advance(t, &u, &params, dt, Some(k1)) {
            Ok(v) => v,
            Err(Error::NonFinite { .. }) => return self.finish(Breakdown::NonFinite, t + dt).map(Some),
            Err(e) => return Err(e),
        };
        let t_next = if dt == remaining { self.control.t_end } else { t + dt };
        self.state = State::from_values(self.solver.grid(), t_next, next, params);
        self.steps += 1;
        self.last_dt = dt;

        let end = self.done();
        if end || self.steps % self.control.record_every == 0 {
            if let Some(b) = self.take_record()? {
                return self.finish(b, self.state.t).map(Some);
            }
        }
        if self.control.checkpoint_every > 0 && self.steps % self.control.checkpoint_every == 0 {
            if let Some(path) = &self.control.checkpoint_path {
                checkpoint_save(&self.state, path)?;
            }
        }
        if end {
            return self.finish(Breakdown::None, self.state.t).map(Some);
        }
        Ok(None)
    }

    pub fn run(mut self) -> Result<RunOutcome> {
        let reason = loop {
            if let Some(r) = self.step()? {
                break r;
            }
        };
        let events: Vec<BreakdownEvent> = self.event.into_iter().collect();
        let verdict = breakdown_time(&self.history, &events);
        Ok(RunOutcome {
            state: self.state,
            records: self.history,
            reason,
            verdict,
            steps: self.steps,
        })
    }
}

pub fn run(
    grid: Arc<Grid>,
    spec: &InitialDataSpec,
    params: PhysicalParams,
    control: &RunControl,
) -> Result<RunOutcome> {
    let state = init_state(grid.clone(), spec, params)?;
    Simulation::new(Solver::new(grid)?, state, control.clone())?.run()
}
