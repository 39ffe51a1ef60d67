//! Browser front end: a decaying tactoid on a coarse disk mesh.

use std::path::Path;
use std::sync::Arc;

use qflow::assembly::NodalField;
use qflow::harness::tactoid::defects;
use qflow::harness::{initial_field, Condition};
use qflow::mesh::{parse_mesh, Mesh};
use qflow::qtensor::{order_parameter_2d, ModelParams};
use qflow::solver::{SolverConfig, Stepper};
use wasm_bindgen::prelude::*;

const MESH: &str = include_str!("../../core/data/unit_disk_coarse.mesh");

fn condition(kind: &str) -> Result<Condition, JsError> {
    match kind {
        "deg1" => Ok(Condition::TactoidDeg1),
        "degm1" => Ok(Condition::TactoidDegm1),
        "deg0" => Ok(Condition::TactoidDeg0),
        other => Err(JsError::new(&format!("unknown tactoid `{other}`"))),
    }
}

#[wasm_bindgen]
pub struct Simulation {
    mesh: Arc<Mesh>,
    params: ModelParams,
    stepper: Stepper,
    field: NodalField,
    energy: f64,
    steps: u32,
}

#[wasm_bindgen]
impl Simulation {
    #[wasm_bindgen(constructor)]
    pub fn new(kind: &str, dt: f64) -> Result<Simulation, JsError> {
        let mesh = Arc::new(parse_mesh(MESH, Path::new("unit_disk_coarse.mesh"))?);
        let params = ModelParams::standard();
        let stepper = Stepper::new(Arc::clone(&mesh), params, SolverConfig { dt, ..SolverConfig::default() })?;
        let field = initial_field(condition(kind)?, &params, &mesh);
        let energy = stepper.energy(&field).total;
        Ok(Simulation { mesh, params, stepper, field, energy, steps: 0 })
    }

    /// Restarts from the initial state of `kind`.
    pub fn reset(&mut self, kind: &str) -> Result<(), JsError> {
        self.field = initial_field(condition(kind)?, &self.params, &self.mesh);
        self.energy = self.stepper.energy(&self.field).total;
        self.steps = 0;
        Ok(())
    }

    pub fn set_dt(&mut self, dt: f64) -> Result<(), JsError> {
        self.stepper = self.stepper.reconfigured(SolverConfig { dt, ..*self.stepper.config() })?;
        Ok(())
    }

    /// Advances `n` steps and returns the total fixed-point iterations.
    pub fn step(&mut self, n: u32) -> Result<u32, JsError> {
        let mut iters = 0;
        for _ in 0..n {
            let (q, stats, e) =
                self.stepper.advance_with_energy(&self.field, &self.field, self.steps as usize + 1, Some(self.energy))?;
            self.field = q;
            self.energy = e.total;
            self.steps += 1;
            iters += stats.fp_iters as u32;
        }
        Ok(iters)
    }

    /// Sets the interior field to zero within `radius` of `(x, y)`.
    pub fn melt(&mut self, x: f64, y: f64, radius: f64) {
        let mut c = self.field.coeffs().to_vec();
        for (i, p) in self.mesh.nodes().iter().enumerate() {
            if !self.mesh.is_boundary(i) && (p[0] - x).hypot(p[1] - y) < radius {
                c[i] = [0.0, 0.0];
            }
        }
        self.field = NodalField::from_coeffs(Arc::clone(&self.mesh), c).expect("same mesh");
        self.energy = self.stepper.energy(&self.field).total;
    }

    pub fn time(&self) -> f64 {
        self.steps as f64 * self.stepper.config().dt
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn defect_count(&self) -> u32 {
        defects(&self.field, &self.params).len() as u32
    }

    /// Largest scalar order parameter of the bulk nematic state, for the
    /// colour scale.
    pub fn nematic_order(&self) -> f64 {
        0.5 * self.params.planar_nematic_amplitude()
    }

    /// Node coordinates as `[x0, y0, x1, y1, ...]`.
    pub fn nodes(&self) -> Vec<f64> {
        self.mesh.nodes().iter().flatten().copied().collect()
    }

    pub fn triangles(&self) -> Vec<u32> {
        self.mesh.elements().iter().flatten().map(|&i| i as u32).collect()
    }

    pub fn lambda_plus(&self) -> Vec<f64> {
        (0..self.mesh.num_nodes()).map(|i| order_parameter_2d(&self.field.value(i)).lambda_plus).collect()
    }

    /// Unit directors as `[dx0, dy0, ...]`.
    pub fn directors(&self) -> Vec<f64> {
        (0..self.mesh.num_nodes()).flat_map(|i| order_parameter_2d(&self.field.value(i)).director).collect()
    }
}
