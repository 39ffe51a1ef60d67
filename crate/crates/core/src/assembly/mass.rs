use std::sync::Arc;

use super::NodalField;
use crate::error::{Error, Result};
use crate::linalg::{pcg, CsrMatrix, SkylineCholesky};
use crate::mesh::{triangle_quadrature, Mesh};
use crate::qtensor::BasisSet;

/// Above this many envelope entries the scalar mass matrix is solved with
/// preconditioned CG instead of a skyline factorization.
const MAX_ENVELOPE: usize = 20_000_000;

#[derive(Clone, Debug)]
enum Solver {
    Cholesky(SkylineCholesky),
    Cg,
}

/// Interior-dof mass operator `A = M_s (x) G`, where `M_s` is the scalar P1
/// mass matrix on interior nodes and `G` the Gram matrix of the basis.
#[derive(Clone, Debug)]
pub struct MassOperator {
    scalar: CsrMatrix,
    gram: [[f64; 2]; 2],
    gram_inv: [[f64; 2]; 2],
    solver: Solver,
}

pub fn mass_operator(mesh: &Mesh, basis: &BasisSet<2, 2>) -> Result<MassOperator> {
    let n = mesh.interior_ids().len();
    let mut trip = Vec::with_capacity(9 * mesh.num_elements());
    for (tri, geo) in mesh.elements().iter().zip(mesh.geometry()) {
        for a in 0..3 {
            let Some(i) = mesh.dof(tri[a]) else { continue };
            for b in 0..3 {
                let Some(j) = mesh.dof(tri[b]) else { continue };
                let m = if a == b { 2.0 } else { 1.0 };
                trip.push((i, j, geo.area * m / 12.0));
            }
        }
    }
    let scalar = CsrMatrix::from_triplets(n, trip);
    let solver = if scalar.envelope_size() <= MAX_ENVELOPE {
        Solver::Cholesky(
            SkylineCholesky::factor(&scalar)
                .ok_or_else(|| Error::MeshTopology("mass matrix is not positive definite".into()))?,
        )
    } else {
        Solver::Cg
    };
    Ok(MassOperator { scalar, gram: *basis.gram(), gram_inv: *basis.gram_inverse(), solver })
}

impl MassOperator {
    pub fn num_dofs(&self) -> usize {
        2 * self.scalar.n()
    }

    pub fn scalar_matrix(&self) -> &CsrMatrix {
        &self.scalar
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.scalar.n();
        assert_eq!(v.len(), 2 * n);
        let mut out = vec![0.0; 2 * n];
        for i in 0..n {
            let (mut m0, mut m1) = (0.0, 0.0);
            for (j, a) in self.scalar.row(i) {
                m0 += a * v[2 * j];
                m1 += a * v[2 * j + 1];
            }
            out[2 * i] = self.gram[0][0] * m0 + self.gram[0][1] * m1;
            out[2 * i + 1] = self.gram[1][0] * m0 + self.gram[1][1] * m1;
        }
        out
    }

    /// Solves `A x = rhs`.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.scalar.n();
        assert_eq!(rhs.len(), 2 * n);
        let gi = &self.gram_inv;
        let mut x: Vec<[f64; 2]> = rhs
            .chunks_exact(2)
            .map(|c| [gi[0][0] * c[0] + gi[0][1] * c[1], gi[1][0] * c[0] + gi[1][1] * c[1]])
            .collect();
        match &self.solver {
            Solver::Cholesky(ch) => ch.solve2_in_place(&mut x),
            Solver::Cg => {
                for a in 0..2 {
                    let b: Vec<f64> = x.iter().map(|v| v[a]).collect();
                    let mut c = vec![0.0; n];
                    // The P1 mass matrix is well conditioned; this cannot stall
                    // for meshes of reasonable quality.
                    pcg(&self.scalar, &b, &mut c, 1e-14, 10_000).expect("mass-matrix CG did not converge");
                    for (v, ci) in x.iter_mut().zip(c) {
                        v[a] = ci;
                    }
                }
            }
        }
        x.into_iter().flatten().collect()
    }

    /// `sqrt(v^T A v)`: the L2 norm of the interior field with coefficients `v`.
    pub fn norm(&self, v: &[f64]) -> f64 {
        let av = self.apply(v);
        av.iter().zip(v).map(|(p, q)| p * q).sum::<f64>().max(0.0).sqrt()
    }
}

/// `||Q||_{L2}` over the whole mesh (boundary nodes included), exact for P1.
pub fn l2_norm(q: &NodalField) -> f64 {
    let mesh = q.mesh();
    let gram = BasisSet::<2, 2>::planar().gram().to_owned();
    let mut s = 0.0;
    for (tri, geo) in mesh.elements().iter().zip(mesh.geometry()) {
        let c = tri.map(|i| q.coeffs()[i]);
        for a in 0..3 {
            for b in 0..3 {
                let m = if a == b { 2.0 } else { 1.0 };
                let mut pair = 0.0;
                for i in 0..2 {
                    for j in 0..2 {
                        pair += gram[i][j] * c[a][i] * c[b][j];
                    }
                }
                s += geo.area * m / 12.0 * pair;
            }
        }
    }
    s.max(0.0).sqrt()
}

/// `||a - b||_{L2}` for fields on possibly different meshes of the same
/// domain. The integral runs over the finer mesh with a degree-4 rule,
/// evaluating the other field at each quadrature point; this is exact when
/// the meshes are nested.
pub fn l2_error(a: &NodalField, b: &NodalField) -> Result<f64> {
    let (fine, coarse) = if a.mesh().num_elements() >= b.mesh().num_elements() { (a, b) } else { (b, a) };
    if Arc::ptr_eq(fine.mesh(), coarse.mesh()) {
        let diff: Vec<[f64; 2]> =
            fine.coeffs().iter().zip(coarse.coeffs()).map(|(p, q)| [p[0] - q[0], p[1] - q[1]]).collect();
        return Ok(l2_norm(&NodalField::from_coeffs(Arc::clone(fine.mesh()), diff)?));
    }
    let rule = triangle_quadrature(4)?;
    let fm = fine.mesh();
    let mut hint = None;
    let mut s = 0.0;
    for (e, (tri, geo)) in fm.elements().iter().zip(fm.geometry()).enumerate() {
        let v = fm.vertices(e);
        for (l, w) in rule.iter() {
            let x = [
                l[0] * v[0][0] + l[1] * v[1][0] + l[2] * v[2][0],
                l[0] * v[0][1] + l[1] * v[1][1] + l[2] * v[2][1],
            ];
            let loc = coarse.mesh().locate_point(x, hint)?;
            hint = Some(loc.element);
            let cv = coarse.evaluate(&loc);
            let mut d = [0.0; 2];
            for a in 0..3 {
                for m in 0..2 {
                    d[m] += l[a] * fine.coeffs()[tri[a]][m];
                }
            }
            let (d0, d1) = (d[0] - cv[0], d[1] - cv[1]);
            // |Q|^2 = 2 (q1^2 + q2^2) in the planar basis.
            s += geo.area * w * 2.0 * (d0 * d0 + d1 * d1);
        }
    }
    Ok(s.sqrt())
}
