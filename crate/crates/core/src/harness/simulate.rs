//! Single trajectories with streamed energy output and field snapshots.

use std::path::Path;
use std::sync::Arc;

use super::config::{steps_for, ExperimentConfig};
use super::initial_field;
use super::output::{snapshot_name, write_snapshot, EnergyCsv};
use crate::assembly::{EnergyBreakdown, NodalField};
use crate::error::Result;
use crate::solver::{StepStats, Stepper};

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub time: f64,
    pub step: usize,
    pub field: NodalField,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub energies: Vec<EnergyBreakdown>,
    pub stats: Vec<StepStats>,
    pub snapshots: Vec<Snapshot>,
    pub final_field: NodalField,
}

impl RunOutcome {
    pub fn totals(&self) -> Vec<f64> {
        self.energies.iter().map(|e| e.total).collect()
    }
}

/// Runs the configured trajectory. With `out`, writes `{prefix}energy.csv`
/// as it goes and one snapshot CSV per requested time.
pub fn simulate(
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    prefix: &str,
    report: &mut dyn FnMut(&str),
) -> Result<RunOutcome> {
    let mesh = cfg.mesh_source()?.build()?;
    let stepper = Stepper::new(Arc::clone(&mesh), cfg.model, cfg.solver)?;
    let dt = cfg.solver.dt;
    let steps = cfg.steps();
    let mut pending: Vec<(usize, f64)> =
        cfg.experiment.snapshot_times.iter().map(|&t| (steps_for(t, dt), t)).collect();
    pending.sort_by(|a, b| a.0.cmp(&b.0));

    let mut energy_csv = out.map(|d| EnergyCsv::create(d.join(format!("{prefix}energy.csv")))).transpose()?;
    let mut q = initial_field(cfg.experiment.condition, &cfg.model, &mesh);
    let mut e = stepper.energy(&q);
    let mut outcome =
        RunOutcome { energies: vec![e], stats: Vec::new(), snapshots: Vec::new(), final_field: q.clone() };
    let mut take_snapshots = |step: usize, q: &NodalField, outcome: &mut RunOutcome| -> Result<()> {
        while let Some(&(s, t)) = pending.first().filter(|(s, _)| *s == step) {
            if let Some(d) = out {
                write_snapshot(d.join(snapshot_name(prefix, t)), q)?;
            }
            outcome.snapshots.push(Snapshot { time: t, step: s, field: q.clone() });
            pending.remove(0);
        }
        Ok(())
    };
    if let Some(w) = energy_csv.as_mut() {
        w.write(0, 0.0, &e, None)?;
    }
    take_snapshots(0, &q, &mut outcome)?;
    let log_every = (steps / 20).max(1);
    for n in 1..=steps {
        let (next, stats, e_next) = stepper.advance_with_energy(&q, &q, n, Some(e.total))?;
        q = next;
        e = e_next;
        if let Some(w) = energy_csv.as_mut() {
            w.write(n, n as f64 * dt, &e, Some(&stats))?;
        }
        outcome.energies.push(e);
        outcome.stats.push(stats);
        take_snapshots(n, &q, &mut outcome)?;
        if n % log_every == 0 {
            report(&format!(
                "step {n}/{steps}: t = {:.4}, F = {:.10e}, {} iterations",
                n as f64 * dt,
                e.total,
                stats.fp_iters
            ));
            if let Some(w) = energy_csv.as_mut() {
                w.flush()?;
            }
        }
    }
    if let Some(w) = energy_csv.as_mut() {
        w.flush()?;
    }
    outcome.final_field = q;
    Ok(outcome)
}

/// The `run` experiment.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    report: &mut dyn FnMut(&str),
) -> Result<RunOutcome> {
    simulate(cfg, out, "", report)
}
