//! Spatial and temporal refinement studies against a fine reference run.

use std::path::Path;
use std::sync::Arc;

use super::config::{ExperimentConfig, MeshSource};
use super::output::{num, opt, CsvFile, CONVERGENCE_HEADER};
use super::{initial_field, whole_steps};
use crate::assembly::{l2_error, NodalField};
use crate::error::{Error, Result};
use crate::solver::{SolverConfig, Stepper};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub param: f64,
    pub field_error: f64,
    pub field_order: Option<f64>,
    pub energy_error: f64,
    pub energy_order: Option<f64>,
}

/// A study that stopped early, with the rows completed before the failure.
#[derive(Debug)]
pub struct StudyFailure {
    pub rows: Vec<ConvergenceRow>,
    pub error: Error,
}

impl From<StudyFailure> for Error {
    fn from(f: StudyFailure) -> Self {
        f.error
    }
}

/// `ln(e_prev / e) / ln(p_prev / p)` between consecutive entries.
pub fn orders(params: &[f64], errors: &[f64]) -> Vec<Option<f64>> {
    (0..errors.len())
        .map(|k| (k > 0).then(|| (errors[k - 1] / errors[k]).ln() / (params[k - 1] / params[k]).ln()))
        .collect()
}

/// Table rows with orders derived from the errors alone.
pub fn rows_from_errors(params: &[f64], field: &[f64], energy: &[f64]) -> Vec<ConvergenceRow> {
    let fo = orders(params, field);
    let eo = orders(params, energy);
    (0..params.len())
        .map(|k| ConvergenceRow {
            param: params[k],
            field_error: field[k],
            field_order: fo[k],
            energy_error: energy[k],
            energy_order: eo[k],
        })
        .collect()
}

pub fn write_convergence_csv(path: impl AsRef<Path>, rows: &[ConvergenceRow]) -> Result<()> {
    let mut f = CsvFile::create(path, &CONVERGENCE_HEADER)?;
    for r in rows {
        f.row([
            num(r.param),
            num(r.field_error),
            opt(r.field_order),
            num(r.energy_error),
            opt(r.energy_order),
        ])?;
    }
    f.flush()
}

/// Reads the errors of a convergence CSV and recomputes the orders.
pub fn read_convergence_csv(path: impl AsRef<Path>) -> Result<Vec<ConvergenceRow>> {
    let path = path.as_ref();
    let bad = |msg: String| Error::Config(format!("{}: {msg}", path.display()));
    let mut rdr = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let (mut p, mut fe, mut ee) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| bad(format!("row {}: bad column {}", line + 2, CONVERGENCE_HEADER[i])))
        };
        p.push(field(0)?);
        fe.push(field(1)?);
        ee.push(field(3)?);
    }
    Ok(rows_from_errors(&p, &fe, &ee))
}

struct Solution {
    field: NodalField,
    energy: f64,
}

fn solve(
    cfg: &ExperimentConfig,
    source: &MeshSource,
    dt: f64,
    report: &mut dyn FnMut(&str),
) -> Result<Solution> {
    let t = cfg.experiment.final_time.unwrap_or_default();
    let steps = whole_steps(t, dt)?;
    let mesh = source.build()?;
    report(&format!("  {} nodes, dt = {dt:e}, {steps} steps", mesh.num_nodes()));
    let stepper = Stepper::new(Arc::clone(&mesh), cfg.model, SolverConfig { dt, ..cfg.solver })?;
    let q0 = initial_field(cfg.experiment.condition, &cfg.model, &mesh);
    let out = stepper.run(&q0, steps)?;
    Ok(Solution { energy: out.energies.last().expect("initial energy").total, field: out.final_field })
}

fn study(
    params: &[f64],
    reference: Solution,
    mut run: impl FnMut(usize, &mut dyn FnMut(&str)) -> Result<Option<Solution>>,
    report: &mut dyn FnMut(&str),
) -> std::result::Result<Vec<ConvergenceRow>, StudyFailure> {
    let (mut fe, mut ee) = (Vec::new(), Vec::new());
    for k in 0..params.len() {
        let sol = run(k, report).and_then(|s| match s {
            None => Ok((0.0, 0.0)),
            Some(s) => Ok((l2_error(&s.field, &reference.field)?, (s.energy - reference.energy).abs())),
        });
        match sol {
            Ok((f, e)) => {
                fe.push(f);
                ee.push(e);
                report(&format!("  field error {f:e}, energy error {e:e}"));
            }
            Err(error) => {
                return Err(StudyFailure { rows: rows_from_errors(&params[..k], &fe, &ee), error });
            }
        }
    }
    Ok(rows_from_errors(params, &fe, &ee))
}

fn fail(error: Error) -> StudyFailure {
    StudyFailure { rows: Vec::new(), error }
}

/// Errors at the final time on structured meshes of width `h_values`
/// against a run on `h_ref` with time step `ref_dt`.
pub fn converge_space(
    cfg: &ExperimentConfig,
    report: &mut dyn FnMut(&str),
) -> std::result::Result<Vec<ConvergenceRow>, StudyFailure> {
    let ex = &cfg.experiment;
    let (w, ht) = (cfg.mesh.width, cfg.mesh.height);
    let h_ref = ex.h_ref.ok_or_else(|| fail(Error::Config("converge-space needs h_ref".into())))?;
    let ref_dt = ex.ref_dt.unwrap_or(cfg.solver.dt);
    report(&format!("reference h = {h_ref}"));
    let reference = solve(cfg, &MeshSource::Structured { width: w, height: ht, h: h_ref }, ref_dt, report)
        .map_err(fail)?;
    study(
        &ex.h_values,
        reference,
        |k, report| {
            let h = ex.h_values[k];
            report(&format!("h = {h}"));
            if h == h_ref && cfg.solver.dt == ref_dt {
                return Ok(None);
            }
            solve(cfg, &MeshSource::Structured { width: w, height: ht, h }, cfg.solver.dt, report).map(Some)
        },
        report,
    )
}

/// Errors at the final time for the time steps `dt_values` against a run
/// with `ref_steps` steps on the same mesh.
pub fn converge_time(
    cfg: &ExperimentConfig,
    report: &mut dyn FnMut(&str),
) -> std::result::Result<Vec<ConvergenceRow>, StudyFailure> {
    let ex = &cfg.experiment;
    let source = cfg.mesh_source().map_err(fail)?;
    let t = ex.final_time.ok_or_else(|| fail(Error::Config("set experiment.final_time".into())))?;
    let ref_steps =
        ex.ref_steps.ok_or_else(|| fail(Error::Config("converge-time needs ref_steps".into())))?;
    let ref_dt = t / ref_steps as f64;
    report(&format!("reference dt = {ref_dt:e}"));
    let reference = solve(cfg, &source, ref_dt, report).map_err(fail)?;
    // Share the reference mesh so same-mesh errors skip point location.
    let mesh = Arc::clone(reference.field.mesh());
    study(
        &ex.dt_values,
        reference,
        |k, report| {
            let dt = ex.dt_values[k];
            report(&format!("dt = {dt:e}"));
            if whole_steps(t, dt)? == ref_steps {
                return Ok(None);
            }
            let stepper = Stepper::new(Arc::clone(&mesh), cfg.model, SolverConfig { dt, ..cfg.solver })?;
            let q0 = initial_field(ex.condition, &cfg.model, &mesh);
            let out = stepper.run(&q0, whole_steps(t, dt)?)?;
            Ok(Some(Solution {
                energy: out.energies.last().expect("initial energy").total,
                field: out.final_field,
            }))
        },
        report,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_of_exact_power_laws() {
        let p = [0.2, 0.1, 0.05, 0.025];
        let e: Vec<f64> = p.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        let o = orders(&p, &e);
        assert_eq!(o[0], None);
        for v in &o[1..] {
            assert!((v.unwrap() - 2.0).abs() < 1e-12);
        }
        // Non-halving parameters.
        let o = orders(&[1.0, 0.3], &[1.0, 0.3f64.powf(1.5)]);
        assert!((o[1].unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn csv_round_trip_reproduces_orders() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.csv");
        let rows = rows_from_errors(&[0.2, 0.1, 0.05], &[4.35e-2, 1.59e-2, 3.55e-3], &[1e-3, 2.6e-4, 6e-5]);
        write_convergence_csv(&path, &rows).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("param,field_error,field_order,energy_error,energy_order"));
        assert!(lines.next().unwrap().ends_with(",,1e-3,"));
        assert_eq!(read_convergence_csv(&path).unwrap(), rows);
    }

    #[test]
    fn reference_equal_to_finest_gives_zero_error() {
        let mut cfg = ExperimentConfig::default();
        cfg.mesh.h = Some(0.5);
        cfg.experiment.final_time = Some(0.004);
        cfg.experiment.dt_values = vec![2e-3, 1e-3];
        cfg.experiment.ref_steps = Some(4);
        let rows = converge_time(&cfg, &mut |_| {}).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].field_error > 0.0);
        assert_eq!((rows[1].field_error, rows[1].energy_error), (0.0, 0.0));
    }

    #[test]
    fn identical_mesh_gives_zero_error() {
        let mut cfg = ExperimentConfig::default();
        cfg.solver.dt = 1e-3;
        cfg.experiment.final_time = Some(0.003);
        cfg.experiment.h_values = vec![0.5, 0.25];
        cfg.experiment.h_ref = Some(0.25);
        let rows = converge_space(&cfg, &mut |_| {}).unwrap();
        assert!(rows[0].field_error > 0.0 && rows[0].energy_error > 0.0);
        assert_eq!((rows[1].field_error, rows[1].energy_error), (0.0, 0.0));
    }

    #[test]
    fn failure_keeps_completed_rows() {
        let mut cfg = ExperimentConfig::default();
        cfg.mesh.h = Some(0.5);
        cfg.experiment.final_time = Some(0.002);
        // 3e-3 does not divide the final time.
        cfg.experiment.dt_values = vec![1e-3, 3e-3];
        cfg.experiment.ref_steps = Some(4);
        let err = converge_time(&cfg, &mut |_| {}).unwrap_err();
        assert_eq!(err.rows.len(), 1);
        assert!(matches!(err.error, Error::Config(_)));

        cfg.solver.fp_max_iters = 2;
        let err = converge_time(&cfg, &mut |_| {}).unwrap_err();
        assert!(err.rows.is_empty());
        assert!(matches!(err.error, Error::RunAborted { completed: 0, .. }));
    }
}
