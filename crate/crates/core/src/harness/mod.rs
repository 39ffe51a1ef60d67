//! Experiment drivers, configuration and file output.

pub mod cfl;
pub mod conditions;
pub mod config;
pub mod convergence;
pub mod output;
pub mod simulate;
pub mod tactoid;

use std::sync::Arc;

pub use cfl::{cfl_search, loglog_slope, max_stable_dt, CflRow};
pub use conditions::{ic_convtest, ic_tactoid, Condition, TactoidKind};
pub use config::{steps_for, ExperimentConfig, ExperimentKind, MeshSource};
pub use convergence::{converge_space, converge_time, orders, ConvergenceRow, StudyFailure};
pub use simulate::{run_experiment, RunOutcome, Snapshot};
pub use tactoid::{count_defects, defect_threshold, tactoid_run};

use crate::assembly::{interpolate, NodalField};
use crate::mesh::Mesh;
use crate::qtensor::ModelParams;

/// Interpolates `cond` at every node; boundary rows are the Dirichlet data.
pub fn initial_field(cond: Condition, p: &ModelParams, mesh: &Arc<Mesh>) -> NodalField {
    interpolate(mesh, |x| cond.eval(p, x).matrix())
}

/// Number of steps of size `dt` that reach `t`, requiring it to be a whole
/// number up to rounding.
pub fn whole_steps(t: f64, dt: f64) -> crate::Result<usize> {
    let n = steps_for(t, dt);
    if n == 0 || ((n as f64) * dt - t).abs() > 1e-9 * t.max(dt) {
        return Err(crate::Error::Config(format!("final time {t} is not a positive multiple of dt = {dt}")));
    }
    Ok(n)
}
