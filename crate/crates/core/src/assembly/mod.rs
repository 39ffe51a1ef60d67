//! Discrete energy, the midpoint-type load vector and the mass operator for
//! P1 Q-tensor fields on triangle meshes.

mod field;
mod kernel;
mod mass;
#[cfg(test)]
mod tests;

use std::sync::Arc;

pub use field::{interpolate, interpolate_field, NodalField};
pub use mass::{l2_error, l2_norm, mass_operator, MassOperator};

use crate::error::{Error, Result};
use crate::mesh::{triangle_quadrature, Mesh, QuadratureRule};
use crate::qtensor::{Mat, ModelParams};
use kernel::{
    bulk_density, bulk_variation_planar, elastic_density, elastic_variation_planar, planar_matrix,
    ElementGrad,
};

/// The six energy terms and their sum.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyBreakdown {
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
    pub f4: f64,
    pub f5: f64,
    pub f6: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    pub fn terms(&self) -> [f64; 6] {
        [self.f1, self.f2, self.f3, self.f4, self.f5, self.f6]
    }

    fn from_terms(t: [f64; 6]) -> Self {
        Self { f1: t[0], f2: t[1], f3: t[2], f4: t[3], f5: t[4], f6: t[5], total: t.iter().sum() }
    }
}

/// Element loops for the energy and the load vector.
///
/// Elastic integrands are quadratic on each element and use the edge-midpoint
/// rule, which is exact for them; the quartic bulk term uses the configured
/// rule (degree 4 or 6).
#[derive(Clone, Debug)]
pub struct Assembler {
    mesh: Arc<Mesh>,
    params: ModelParams,
    elastic_rule: QuadratureRule,
    bulk_rule: QuadratureRule,
}

struct ElementData {
    vals: [[f64; 2]; 3],
    grad: ElementGrad,
}

impl Assembler {
    pub fn new(mesh: Arc<Mesh>, params: ModelParams, bulk_degree: usize) -> Result<Self> {
        if bulk_degree < 4 {
            return Err(Error::Quadrature(bulk_degree));
        }
        Ok(Self {
            mesh,
            params,
            elastic_rule: triangle_quadrature(2)?,
            bulk_rule: triangle_quadrature(bulk_degree)?,
        })
    }

    pub fn mesh(&self) -> &Arc<Mesh> {
        &self.mesh
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Number of unknowns: two per interior node.
    pub fn num_dofs(&self) -> usize {
        2 * self.mesh.interior_ids().len()
    }

    fn element_data(&self, q: &NodalField, e: usize) -> ElementData {
        let tri = self.mesh.elements()[e];
        let geo = &self.mesh.geometry()[e];
        let vals = tri.map(|i| q.coeffs()[i]);
        let mut dq = [[0.0; 2]; 2];
        for a in 0..3 {
            for m in 0..2 {
                for k in 0..2 {
                    dq[m][k] += vals[a][m] * geo.grads[a][k];
                }
            }
        }
        ElementData { vals, grad: ElementGrad::from_coeff_gradients(&dq) }
    }

    pub fn energy(&self, q: &NodalField) -> EnergyBreakdown {
        self.check_mesh(q);
        let mut t = [0.0; 6];
        for e in 0..self.mesh.num_elements() {
            let d = self.element_data(q, e);
            let area = self.mesh.geometry()[e].area;
            for (l, w) in self.elastic_rule.iter() {
                let f = elastic_density(&self.params, &at(&d.vals, l), &d.grad);
                for (ti, fi) in t.iter_mut().zip(f) {
                    *ti += area * w * fi;
                }
            }
            for (l, w) in self.bulk_rule.iter() {
                t[5] += area * w * bulk_density(&self.params, &at(&d.vals, l));
            }
        }
        EnergyBreakdown::from_terms(t)
    }

    /// `out[2k + a] = H(X, phi)` with `phi = B_a psi_i` for the `k`-th
    /// interior node `i`, where `H` is the sum of all linearized forms with
    /// previous state `qn`.
    pub fn load_vector_into(&self, x: &NodalField, qn: &NodalField, out: &mut [f64]) {
        self.check_mesh(x);
        self.check_mesh(qn);
        assert_eq!(out.len(), self.num_dofs());
        out.iter_mut().for_each(|v| *v = 0.0);
        let p = &self.params;
        for e in 0..self.mesh.num_elements() {
            let tri = self.mesh.elements()[e];
            if tri.iter().all(|&i| self.mesh.dof(i).is_none()) {
                continue;
            }
            let geo = &self.mesh.geometry()[e];
            let dx = self.element_data(x, e);
            let dn = self.element_data(qn, e);
            let mut vloc = [[0.0; 2]; 3];
            let mut gsum = [[0.0; 2]; 2];
            for (l, w) in self.elastic_rule.iter() {
                let (v, g) =
                    elastic_variation_planar(p, interp(&dx.vals, l), &dx.grad, interp(&dn.vals, l), &dn.grad);
                for a in 0..3 {
                    for al in 0..2 {
                        vloc[a][al] += w * l[a] * v[al];
                    }
                }
                for al in 0..2 {
                    for k in 0..2 {
                        gsum[al][k] += w * g[al][k];
                    }
                }
            }
            for (l, w) in self.bulk_rule.iter() {
                let v = bulk_variation_planar(p, interp(&dx.vals, l), interp(&dn.vals, l));
                for a in 0..3 {
                    for al in 0..2 {
                        vloc[a][al] += w * l[a] * v[al];
                    }
                }
            }
            for a in 0..3 {
                if let Some(k) = self.mesh.dof(tri[a]) {
                    for al in 0..2 {
                        out[2 * k + al] += geo.area
                            * (vloc[a][al] + gsum[al][0] * geo.grads[a][0] + gsum[al][1] * geo.grads[a][1]);
                    }
                }
            }
        }
    }

    pub fn load_vector(&self, x: &NodalField, qn: &NodalField) -> Vec<f64> {
        let mut out = vec![0.0; self.num_dofs()];
        self.load_vector_into(x, qn, &mut out);
        out
    }

    fn check_mesh(&self, q: &NodalField) {
        assert!(Arc::ptr_eq(q.mesh(), &self.mesh), "field lives on a different mesh");
    }
}

#[inline]
fn interp(vals: &[[f64; 2]; 3], l: &[f64; 3]) -> [f64; 2] {
    [
        l[0] * vals[0][0] + l[1] * vals[1][0] + l[2] * vals[2][0],
        l[0] * vals[0][1] + l[1] * vals[1][1] + l[2] * vals[2][1],
    ]
}

#[inline]
fn at(vals: &[[f64; 2]; 3], l: &[f64; 3]) -> Mat<2> {
    planar_matrix(interp(vals, l))
}
