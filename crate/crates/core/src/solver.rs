//! Fixed-point time stepping of the energy-stable scheme.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::assembly::{mass_operator, Assembler, EnergyBreakdown, MassOperator, NodalField};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::qtensor::{BasisSet, ModelParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub dt: f64,
    pub fp_tol: f64,
    pub fp_max_iters: usize,
    pub divergence_norm: f64,
    pub quadrature_degree: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { dt: 5e-4, fp_tol: 1e-10, fp_max_iters: 1000, divergence_norm: 1e6, quadrature_degree: 4 }
    }
}

impl SolverConfig {
    pub fn with_dt(dt: f64) -> Self {
        Self { dt, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.fp_tol > 0.0) {
            return Err(Error::Config(format!("fp_tol must be positive, got {}", self.fp_tol)));
        }
        if self.fp_max_iters == 0 {
            return Err(Error::Config("fp_max_iters must be at least 1".into()));
        }
        if !(self.divergence_norm > 0.0) {
            return Err(Error::Config(format!(
                "divergence_norm must be positive, got {}",
                self.divergence_norm
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StepStats {
    pub fp_iters: usize,
    pub last_update_norm: f64,
    pub dissipation_residual: f64,
}

/// Energies and statistics along a trajectory. `times` and `energies` start
/// with the initial state; `stats[n]` belongs to the step ending at
/// `times[n + 1]`.
#[derive(Clone, Debug)]
pub struct RunReport {
    pub times: Vec<f64>,
    pub energies: Vec<EnergyBreakdown>,
    pub stats: Vec<StepStats>,
    pub final_field: NodalField,
}

impl RunReport {
    pub fn steps(&self) -> usize {
        self.stats.len()
    }
}

/// A run that stopped early: the steps completed so far and the cause.
#[derive(Debug)]
pub struct RunFailure {
    pub report: RunReport,
    pub error: Error,
}

impl From<RunFailure> for Error {
    fn from(f: RunFailure) -> Self {
        Error::RunAborted { completed: f.report.steps(), source: Box::new(f.error) }
    }
}

/// Assembler, mass operator and configuration for repeated steps on one mesh.
#[derive(Clone, Debug)]
pub struct Stepper {
    assembler: Assembler,
    mass: Arc<MassOperator>,
    cfg: SolverConfig,
}

impl Stepper {
    pub fn new(mesh: Arc<Mesh>, params: ModelParams, cfg: SolverConfig) -> Result<Self> {
        let mass = Arc::new(mass_operator(&mesh, &BasisSet::planar())?);
        Self::with_mass(mesh, params, cfg, mass)
    }

    pub fn with_mass(
        mesh: Arc<Mesh>,
        params: ModelParams,
        cfg: SolverConfig,
        mass: Arc<MassOperator>,
    ) -> Result<Self> {
        cfg.validate()?;
        if mass.num_dofs() != 2 * mesh.interior_ids().len() {
            return Err(Error::Domain("mass operator does not match the mesh".into()));
        }
        Ok(Self { assembler: Assembler::new(mesh, params, cfg.quadrature_degree)?, mass, cfg })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    /// Same assembler and mass operator with a different configuration.
    pub fn reconfigured(&self, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let assembler = if cfg.quadrature_degree == self.cfg.quadrature_degree {
            self.assembler.clone()
        } else {
            Assembler::new(
                Arc::clone(self.assembler.mesh()),
                *self.assembler.params(),
                cfg.quadrature_degree,
            )?
        };
        Ok(Self { assembler, mass: Arc::clone(&self.mass), cfg })
    }

    pub fn assembler(&self) -> &Assembler {
        &self.assembler
    }

    pub fn mass(&self) -> &MassOperator {
        &self.mass
    }

    pub fn energy(&self, q: &NodalField) -> EnergyBreakdown {
        self.assembler.energy(q)
    }

    /// One step from `qn`, warm-started at `qn`. `step` only labels errors.
    pub fn advance(&self, qn: &NodalField, step: usize) -> Result<(NodalField, StepStats)> {
        self.advance_from(qn, qn, step, None)
    }

    /// One step from `qn` with the iteration started at `x0`, whose boundary
    /// rows are ignored. `energy_n` may pass a known `F(qn)`.
    pub fn advance_from(
        &self,
        qn: &NodalField,
        x0: &NodalField,
        step: usize,
        energy_n: Option<f64>,
    ) -> Result<(NodalField, StepStats)> {
        let (q, stats, _) = self.advance_with_energy(qn, x0, step, energy_n)?;
        Ok((q, stats))
    }

    /// As [`Stepper::advance_from`], also returning `F(Q^{n+1})`.
    pub fn advance_with_energy(
        &self,
        qn: &NodalField,
        x0: &NodalField,
        step: usize,
        energy_n: Option<f64>,
    ) -> Result<(NodalField, StepStats, EnergyBreakdown)> {
        fixed_point_step(&self.assembler, &self.mass, &self.cfg, qn, x0, step, energy_n)
    }

    /// Runs `n_steps` steps from `q0`, calling `observer(step, time, field,
    /// energy, stats)` after each one; on failure the completed part of the
    /// trajectory is returned with the error.
    pub fn run_observed(
        &self,
        q0: &NodalField,
        n_steps: usize,
        mut observer: impl FnMut(usize, f64, &NodalField, &EnergyBreakdown, &StepStats),
    ) -> std::result::Result<RunReport, RunFailure> {
        let e0 = self.assembler.energy(q0);
        let mut report =
            RunReport { times: vec![0.0], energies: vec![e0], stats: Vec::new(), final_field: q0.clone() };
        for n in 0..n_steps {
            let en = report.energies[n].total;
            match self.advance_with_energy(&report.final_field, &report.final_field, n + 1, Some(en)) {
                Ok((q, stats, e)) => {
                    let t = (n + 1) as f64 * self.cfg.dt;
                    observer(n + 1, t, &q, &e, &stats);
                    report.times.push(t);
                    report.energies.push(e);
                    report.stats.push(stats);
                    report.final_field = q;
                }
                Err(error) => return Err(RunFailure { report, error }),
            }
        }
        Ok(report)
    }

    pub fn run(&self, q0: &NodalField, n_steps: usize) -> std::result::Result<RunReport, RunFailure> {
        self.run_observed(q0, n_steps, |_, _, _, _, _| {})
    }
}

fn fixed_point_step(
    assembler: &Assembler,
    mass: &MassOperator,
    cfg: &SolverConfig,
    qn: &NodalField,
    x0: &NodalField,
    step: usize,
    energy_n: Option<f64>,
) -> Result<(NodalField, StepStats, EnergyBreakdown)> {
    let scale = assembler.params().mobility * cfg.dt;
    let qn_int = qn.interior_vector();
    let mut x = qn.with_interior(&x0.interior_vector());
    let mut x_int = x.interior_vector();
    let mut load = vec![0.0; qn_int.len()];
    let mut iters = 0;
    let mut update_norm = f64::INFINITY;
    while iters < cfg.fp_max_iters {
        iters += 1;
        assembler.load_vector_into(&x, qn, &mut load);
        let delta = mass.solve(&load);
        let next: Vec<f64> = qn_int.iter().zip(&delta).map(|(q, d)| q - scale * d).collect();
        let diff: Vec<f64> = next.iter().zip(&x_int).map(|(a, b)| a - b).collect();
        update_norm = mass.norm(&diff);
        x_int = next;
        x.set_interior(&x_int);
        let norm = mass.norm(&x_int);
        if !norm.is_finite() || norm > cfg.divergence_norm || !update_norm.is_finite() {
            return Err(Error::Divergence { step, iter: iters, norm });
        }
        if update_norm < cfg.fp_tol {
            break;
        }
    }
    if !(update_norm < cfg.fp_tol) {
        return Err(Error::NonConvergence { step, iters, last_update_norm: update_norm });
    }
    let e_next = assembler.energy(&x);
    let e_n = energy_n.unwrap_or_else(|| assembler.energy(qn).total);
    let dq: Vec<f64> = x_int.iter().zip(&qn_int).map(|(a, b)| (a - b) / cfg.dt).collect();
    let rate = mass.norm(&dq);
    let dissipation_residual = (e_next.total - e_n) / cfg.dt + rate * rate / assembler.params().mobility;
    Ok((x, StepStats { fp_iters: iters, last_update_norm: update_norm, dissipation_residual }, e_next))
}

/// One step of the scheme from `qn`.
pub fn advance_step(
    qn: &NodalField,
    params: &ModelParams,
    cfg: &SolverConfig,
    mass: &MassOperator,
) -> Result<(NodalField, StepStats)> {
    cfg.validate()?;
    let assembler = Assembler::new(Arc::clone(qn.mesh()), *params, cfg.quadrature_degree)?;
    fixed_point_step(&assembler, mass, cfg, qn, qn, 0, None).map(|(q, s, _)| (q, s))
}

pub fn run_flow(
    q0: &NodalField,
    params: &ModelParams,
    cfg: &SolverConfig,
    n_steps: usize,
) -> std::result::Result<RunReport, RunFailure> {
    let stepper = match Stepper::new(Arc::clone(q0.mesh()), *params, *cfg) {
        Ok(s) => s,
        Err(error) => {
            let report = RunReport {
                times: Vec::new(),
                energies: Vec::new(),
                stats: Vec::new(),
                final_field: q0.clone(),
            };
            return Err(RunFailure { report, error });
        }
    };
    stepper.run(q0, n_steps)
}
