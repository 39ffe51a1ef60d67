//! Decaying tactoids on the unit disk and defect counting.

use std::path::Path;

use super::config::ExperimentConfig;
use super::output::{num, CsvFile};
use super::simulate::{simulate, RunOutcome};
use crate::assembly::NodalField;
use crate::error::{Error, Result};
use crate::qtensor::{order_parameter_2d, ModelParams};

/// Half the scalar order parameter of the bulk nematic state.
pub fn defect_threshold(p: &ModelParams) -> f64 {
    0.25 * p.planar_nematic_amplitude()
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Interior nodes where `lambda_plus` is below `threshold` and no larger
/// than at any neighbour, with candidates closer than `merge_radius`
/// merged. Returns the lowest node of each cluster.
pub fn count_defects(q: &NodalField, threshold: f64, merge_radius: f64) -> Vec<usize> {
    let mesh = q.mesh();
    let lambda: Vec<f64> =
        (0..mesh.num_nodes()).map(|i| order_parameter_2d(&q.value(i)).lambda_plus).collect();
    let adj = mesh.node_adjacency();
    let minima: Vec<usize> = mesh
        .interior_ids()
        .iter()
        .copied()
        .filter(|&i| lambda[i] < threshold && adj[i].iter().all(|&j| lambda[i] <= lambda[j]))
        .collect();
    let mut parent: Vec<usize> = (0..minima.len()).collect();
    let r2 = merge_radius * merge_radius;
    for a in 0..minima.len() {
        for b in a + 1..minima.len() {
            let (x, y) = (mesh.nodes()[minima[a]], mesh.nodes()[minima[b]]);
            if (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2) < r2 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut best: Vec<Option<usize>> = vec![None; minima.len()];
    for k in 0..minima.len() {
        let r = find(&mut parent, k);
        if best[r].map_or(true, |j| lambda[minima[k]] < lambda[j]) {
            best[r] = Some(minima[k]);
        }
    }
    best.into_iter().flatten().collect()
}

/// Defects of `q` with the default threshold and a merge radius of three
/// mesh widths.
pub fn defects(q: &NodalField, p: &ModelParams) -> Vec<usize> {
    count_defects(q, defect_threshold(p), 3.0 * q.mesh().h_max())
}

/// The `tactoid` experiment: writes `{kind}_energy.csv`, the snapshots and
/// `{kind}_defects.csv` with the defect count at each snapshot.
pub fn tactoid_run(
    cfg: &ExperimentConfig,
    out: Option<&Path>,
    report: &mut dyn FnMut(&str),
) -> Result<RunOutcome> {
    let kind = cfg
        .experiment
        .condition
        .tactoid_kind()
        .ok_or_else(|| Error::Config("tactoid experiments need a tactoid-* condition".into()))?;
    let mut cfg = cfg.clone();
    if cfg.experiment.snapshot_times.is_empty() {
        cfg.experiment.snapshot_times = kind.default_snapshot_times();
    }
    let prefix = format!("{}_", kind.name());
    let outcome = simulate(&cfg, out, &prefix, report)?;
    if let Some(d) = out {
        let mut f = CsvFile::create(d.join(format!("{prefix}defects.csv")), &["time", "defects", "x", "y"])?;
        for s in &outcome.snapshots {
            let found = defects(&s.field, &cfg.model);
            report(&format!("t = {}: {} defects", s.time, found.len()));
            if found.is_empty() {
                f.row([num(s.time), "0".into(), String::new(), String::new()])?;
            }
            let mesh = s.field.mesh();
            for &i in &found {
                let x = mesh.nodes()[i];
                f.row([num(s.time), found.len().to_string(), num(x[0]), num(x[1])])?;
            }
        }
        f.flush()?;
    }
    Ok(outcome)
}
