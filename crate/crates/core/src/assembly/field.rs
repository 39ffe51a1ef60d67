use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::{Location, Mesh};
use crate::qtensor::{Mat, Q2};

/// Continuous piecewise-linear Q-tensor field: one coefficient pair per node
/// over the planar basis. Boundary rows hold the Dirichlet data `g_h`.
#[derive(Clone, Debug)]
pub struct NodalField {
    mesh: Arc<Mesh>,
    coeffs: Vec<[f64; 2]>,
}

impl PartialEq for NodalField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh) && self.coeffs == other.coeffs
    }
}

impl NodalField {
    pub fn zeros(mesh: Arc<Mesh>) -> Self {
        let n = mesh.num_nodes();
        Self { mesh, coeffs: vec![[0.0; 2]; n] }
    }

    pub fn from_coeffs(mesh: Arc<Mesh>, coeffs: Vec<[f64; 2]>) -> Result<Self> {
        if coeffs.len() != mesh.num_nodes() {
            return Err(Error::Domain(format!(
                "{} coefficient rows for a mesh with {} nodes",
                coeffs.len(),
                mesh.num_nodes()
            )));
        }
        Ok(Self { mesh, coeffs })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn coeffs(&self) -> &[[f64; 2]] {
        &self.coeffs
    }

    pub fn value(&self, node: usize) -> Q2 {
        Q2::new(self.coeffs[node])
    }

    /// Interior coefficients, node-major and basis-minor.
    pub fn interior_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.mesh.interior_ids().len());
        for &i in self.mesh.interior_ids() {
            v.extend_from_slice(&self.coeffs[i]);
        }
        v
    }

    /// Same boundary rows as `self`, interior rows from `interior`.
    pub fn with_interior(&self, interior: &[f64]) -> Self {
        let mut out = self.clone();
        out.set_interior(interior);
        out
    }

    pub fn set_interior(&mut self, interior: &[f64]) {
        debug_assert_eq!(interior.len(), 2 * self.mesh.interior_ids().len());
        for (k, &i) in self.mesh.interior_ids().iter().enumerate() {
            self.coeffs[i] = [interior[2 * k], interior[2 * k + 1]];
        }
    }

    /// Bitwise equality of the boundary rows.
    pub fn same_boundary(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh)
            && self
                .mesh
                .boundary_ids()
                .iter()
                .all(|&b| self.coeffs[b].map(f64::to_bits) == other.coeffs[b].map(f64::to_bits))
    }

    pub fn evaluate(&self, loc: &Location) -> [f64; 2] {
        let tri = self.mesh.elements()[loc.element];
        let mut v = [0.0; 2];
        for a in 0..3 {
            v[0] += loc.bary[a] * self.coeffs[tri[a]][0];
            v[1] += loc.bary[a] * self.coeffs[tri[a]][1];
        }
        v
    }

    pub fn evaluate_at(&self, x: [f64; 2]) -> Result<[f64; 2]> {
        Ok(self.evaluate(&self.mesh.locate_point(x, None)?))
    }
}

/// Lagrange interpolation: interior nodes take `P(f(x))`, boundary nodes
/// `P(g(x))`.
pub fn interpolate_field(
    mesh: &Arc<Mesh>,
    f: impl Fn([f64; 2]) -> Mat<2>,
    g: impl Fn([f64; 2]) -> Mat<2>,
) -> NodalField {
    let coeffs = mesh
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let m = if mesh.is_boundary(i) { g(x) } else { f(x) };
            Q2::from_matrix(&m).coeffs
        })
        .collect();
    NodalField { mesh: Arc::clone(mesh), coeffs }
}

/// Interpolation with the same function inside and on the boundary.
pub fn interpolate(mesh: &Arc<Mesh>, f: impl Fn([f64; 2]) -> Mat<2>) -> NodalField {
    interpolate_field(mesh, &f, &f)
}
