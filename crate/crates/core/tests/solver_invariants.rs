use std::sync::Arc;

use qflow::harness::{initial_field, Condition};
use qflow::mesh::structured_rect_mesh;
use qflow::qtensor::ModelParams;
use qflow::solver::{run_flow, SolverConfig, Stepper};

fn convtest(h: f64, cfg: SolverConfig) -> (Stepper, qflow::assembly::NodalField) {
    let p = ModelParams::standard();
    let mesh = Arc::new(structured_rect_mesh(2.0, 2.0, h).unwrap());
    let q0 = initial_field(Condition::Convtest, &p, &mesh);
    (Stepper::new(mesh, p, cfg).unwrap(), q0)
}

#[test]
fn energy_is_non_increasing_to_final_time() {
    let p = ModelParams::standard();
    let mesh = Arc::new(structured_rect_mesh(2.0, 2.0, 2.0 / 30.0).unwrap());
    let q0 = initial_field(Condition::Convtest, &p, &mesh);
    let report = run_flow(&q0, &p, &SolverConfig::with_dt(4e-3), 200).unwrap();
    assert_eq!(report.steps(), 200);
    assert!((report.times[200] - 0.8).abs() < 1e-12);
    for w in report.energies.windows(2) {
        assert!(w[1].total <= w[0].total + 1e-8, "{} -> {}", w[0].total, w[1].total);
    }
    assert!(report.energies[200].total < report.energies[0].total);
}

#[test]
fn dissipation_residual_tracks_the_update_norm() {
    let (stepper, q0) = convtest(0.2, SolverConfig::with_dt(5e-4));
    let mut prev = f64::INFINITY;
    for tol in [1e-6, 1e-8, 1e-10] {
        let s = stepper.reconfigured(SolverConfig { fp_tol: tol, ..*stepper.config() }).unwrap();
        let (_, stats) = s.advance(&q0, 1).unwrap();
        let r = stats.dissipation_residual.abs();
        assert!(stats.last_update_norm < tol);
        assert!(r < prev / 10.0, "residual {r:e} at tol {tol:e} after {prev:e}");
        // Bounded by the final update in the time-scaled norm.
        assert!(r <= 1e3 * stats.last_update_norm / 5e-4, "{r:e} vs {:e}", stats.last_update_norm);
        prev = r;
    }
}

#[test]
fn halving_dt_does_not_need_more_iterations() {
    let window = |dt: f64| {
        let (stepper, q0) = convtest(0.1, SolverConfig::with_dt(dt));
        let report = stepper.run(&q0, 20).unwrap();
        report.stats.iter().map(|s| s.fp_iters).sum::<usize>()
    };
    let coarse = window(4e-3);
    let fine = window(2e-3);
    assert!(fine <= coarse, "{fine} iterations at dt/2 vs {coarse}");
}

#[test]
fn every_accepted_step_is_monotone_and_keeps_boundary() {
    let (stepper, q0) = convtest(0.1, SolverConfig::with_dt(2e-3));
    let mut q = q0.clone();
    let mut e = stepper.energy(&q).total;
    for n in 1..=30 {
        let (next, stats, en) = stepper.advance_with_energy(&q, &q, n, Some(e)).unwrap();
        assert!(next.same_boundary(&q0));
        assert!(en.total <= e + 10.0 * stepper.config().fp_tol * e.abs().max(1.0));
        assert!(stats.fp_iters >= 1);
        q = next;
        e = en.total;
    }
}
