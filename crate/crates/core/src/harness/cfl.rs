//! Search for the largest time step at which the fixed-point iteration
//! still converges on every step of a short run.

use std::path::Path;
use std::sync::Arc;

use super::config::{ExperimentConfig, MeshSource};
use super::initial_field;
use super::output::{num, opt, CsvFile};
use crate::assembly::NodalField;
use crate::error::{Error, Result};
use crate::solver::{SolverConfig, Stepper};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CflRow {
    pub h: f64,
    pub dt_max: f64,
    /// `ln(dt_prev / dt) / ln(h_prev / h)`; absent on the first row.
    pub order: Option<f64>,
    pub probes: usize,
}

/// Whether `steps` steps of size `dt` from `q0` all converge. Solver
/// failures count as "no"; anything else is an error.
fn converges(stepper: &Stepper, q0: &NodalField, dt: f64, steps: usize) -> Result<bool> {
    let s = stepper.reconfigured(SolverConfig { dt, ..*stepper.config() })?;
    match s.run(q0, steps) {
        Ok(_) => Ok(true),
        Err(f) => match f.error {
            Error::NonConvergence { .. } | Error::Divergence { .. } => Ok(false),
            other => Err(other),
        },
    }
}

/// Bisects `[lo, hi]` geometrically until `hi / lo <= 1 + rel_width`,
/// keeping `lo` convergent and `hi` failing. Returns `(dt_max, probes)`.
pub fn max_stable_dt(
    stepper: &Stepper,
    q0: &NodalField,
    bracket: [f64; 2],
    steps: usize,
    rel_width: f64,
) -> Result<(f64, usize)> {
    let [mut lo, mut hi] = bracket;
    let bracket_err = |detail: &str| Error::Bracket { lo: bracket[0], hi: bracket[1], detail: detail.into() };
    if lo == hi {
        return if converges(stepper, q0, lo, steps)? { Ok((lo, 1)) } else { Err(bracket_err("dt fails")) };
    }
    // The failing end is usually quick to reject, so probe it first.
    if converges(stepper, q0, hi, steps)? {
        return Err(bracket_err("upper end converges"));
    }
    if !converges(stepper, q0, lo, steps)? {
        return Err(bracket_err("lower end fails"));
    }
    let mut probes = 2;
    while hi / lo > 1.0 + rel_width {
        let mid = (lo * hi).sqrt();
        probes += 1;
        if converges(stepper, q0, mid, steps)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, probes))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Runs the search for every `h` of the configuration, in order.
pub fn cfl_search(cfg: &ExperimentConfig, report: &mut dyn FnMut(&str)) -> Result<Vec<CflRow>> {
    let ex = &cfg.experiment;
    let mut rows: Vec<CflRow> = Vec::new();
    for (k, &h) in ex.h_values.iter().enumerate() {
        let bracket = ex
            .dt_brackets
            .get(k)
            .copied()
            .or(ex.dt_bracket)
            .ok_or_else(|| Error::Config("cfl needs dt_bracket or dt_brackets".into()))?;
        let mesh = MeshSource::Structured { width: cfg.mesh.width, height: cfg.mesh.height, h }.build()?;
        let stepper = Stepper::new(Arc::clone(&mesh), cfg.model, cfg.solver)?;
        let q0 = initial_field(ex.condition, &cfg.model, &mesh);
        let (dt_max, probes) = max_stable_dt(&stepper, &q0, bracket, ex.probe_steps, ex.rel_width)?;
        let order = rows.last().map(|p| (p.dt_max / dt_max).ln() / (p.h / h).ln());
        report(&format!("h = {h}: dt_max = {dt_max:e} after {probes} probes"));
        rows.push(CflRow { h, dt_max, order, probes });
    }
    Ok(rows)
}

pub fn write_cfl_csv(path: impl AsRef<Path>, rows: &[CflRow]) -> Result<()> {
    let mut f = CsvFile::create(path, &["h", "dt_max", "order", "probes"])?;
    for r in rows {
        f.row([num(r.h), num(r.dt_max), opt(r.order), r.probes.to_string()])?;
    }
    f.flush()
}
