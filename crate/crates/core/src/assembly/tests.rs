use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::mesh::structured_rect_mesh;
use crate::qtensor::{
    add, frobenius, mat_mul, mat_vec, scale, shift, trace, BasisSet, GradientTensor, ModelParams,
};

fn perturbed_mesh(h: f64, rng: &mut ChaCha8Rng) -> Arc<Mesh> {
    let s = structured_rect_mesh(2.0, 2.0, h).unwrap();
    let mut nodes = s.nodes().to_vec();
    for (i, p) in nodes.iter_mut().enumerate() {
        if !s.is_boundary(i) {
            p[0] += rng.gen_range(-0.2..0.2) * h;
            p[1] += rng.gen_range(-0.2..0.2) * h;
        }
    }
    Arc::new(Mesh::from_parts(nodes, s.elements().to_vec(), s.boundary_ids()).unwrap())
}

fn random_field(mesh: &Arc<Mesh>, rng: &mut ChaCha8Rng, amp: f64) -> NodalField {
    let c = (0..mesh.num_nodes()).map(|_| [rng.gen_range(-amp..amp), rng.gen_range(-amp..amp)]).collect();
    NodalField::from_coeffs(Arc::clone(mesh), c).unwrap()
}

fn anisotropic_params() -> ModelParams {
    ModelParams::new([0.1, 0.03, 0.02, 0.01, 0.05], -0.3, -4.0, 4.0, 1.0).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

// ---- Independent oracle: matrix-form integrands on a subdivided mesh. ----

struct Local {
    q: Mat<2>,
    g: GradientTensor<2>,
}

fn local(field: &NodalField, e: usize, l: &[f64; 3]) -> Local {
    let m = field.mesh();
    let tri = m.elements()[e];
    let geo = &m.geometry()[e];
    let basis = BasisSet::<2, 2>::planar();
    let mut q = [[0.0; 2]; 2];
    let mut g = [[[0.0; 2]; 2]; 2];
    for a in 0..3 {
        let qa = basis.reconstruct(&field.coeffs()[tri[a]]);
        for i in 0..2 {
            for j in 0..2 {
                q[i][j] += l[a] * qa[i][j];
                for k in 0..2 {
                    g[i][j][k] += qa[i][j] * geo.grads[a][k];
                }
            }
        }
    }
    Local { q, g }
}

fn div(g: &GradientTensor<2>) -> [f64; 2] {
    [g[0][0][0] + g[0][1][1], g[1][0][0] + g[1][1][1]]
}

fn curl(g: &GradientTensor<2>) -> [f64; 2] {
    [g[0][1][0] - g[0][0][1], g[1][1][0] - g[1][0][1]]
}

fn sq(v: [f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

fn oracle_density(p: &ModelParams, s: &Local) -> [f64; 6] {
    let s0 = p.s0();
    let s1 = shift(&s.q, s0 / 3.0);
    let s2 = shift(&scale(&s.q, -1.0), 2.0 * s0 / 3.0);
    let gsq: f64 = s.g.iter().flatten().flatten().map(|v| v * v).sum();
    let tq2 = trace(&mat_mul(&s.q, &s.q));
    let tq3 = trace(&mat_mul(&mat_mul(&s.q, &s.q), &s.q));
    [
        0.5 * p.l1 * sq(mat_vec(&s1, &div(&s.g))),
        0.5 * p.l2 * sq(mat_vec(&s1, &curl(&s.g))),
        0.5 * p.l3 * sq(mat_vec(&s2, &div(&s.g))),
        0.5 * p.l4 * sq(mat_vec(&s2, &curl(&s.g))),
        0.5 * p.l5 * tq2 * gsq,
        p.a * tq2 - 2.0 * p.b / 3.0 * tq3 + 0.5 * p.c * tq2 * tq2,
    ]
}

/// Barycentric points and weights of the degree-6 rule applied on the four
/// midpoint-subdivided children of the reference triangle.
fn subdivided_rule() -> Vec<([f64; 3], f64)> {
    let r = triangle_quadrature(6).unwrap();
    let v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    let mid = |a: usize, b: usize| std::array::from_fn::<f64, 3, _>(|i| 0.5 * (v[a][i] + v[b][i]));
    let (m01, m12, m02) = (mid(0, 1), mid(1, 2), mid(0, 2));
    let children = [[v[0], m01, m02], [m01, v[1], m12], [m02, m12, v[2]], [m12, m02, m01]];
    let mut out = Vec::new();
    for c in children {
        for (l, w) in r.iter() {
            let p = std::array::from_fn(|i| l[0] * c[0][i] + l[1] * c[1][i] + l[2] * c[2][i]);
            out.push((p, 0.25 * w));
        }
    }
    out
}

fn oracle_energy(p: &ModelParams, q: &NodalField) -> [f64; 6] {
    let rule = subdivided_rule();
    let mut t = [0.0; 6];
    for e in 0..q.mesh().num_elements() {
        let area = q.mesh().geometry()[e].area;
        for (l, w) in &rule {
            let d = oracle_density(p, &local(q, e, l));
            for i in 0..6 {
                t[i] += area * w * d[i];
            }
        }
    }
    t
}

/// `H(X, phi)` for `phi = B psi`, written out term by term.
fn oracle_h(p: &ModelParams, x: &Local, n: &Local, phi: &Local) -> f64 {
    let s0 = p.s0();
    let s1 = |q: &Mat<2>| shift(q, s0 / 3.0);
    let s2 = |q: &Mat<2>| shift(&scale(q, -1.0), 2.0 * s0 / 3.0);
    let vdot = |a: [f64; 2], b: [f64; 2]| a[0] * b[0] + a[1] * b[1];
    let vadd = |a: [f64; 2], b: [f64; 2]| [a[0] + b[0], a[1] + b[1]];
    let mut h = 0.0;
    type Op = fn(&GradientTensor<2>) -> [f64; 2];
    let ops: [(f64, Op, bool); 4] =
        [(p.l1, div, true), (p.l2, curl, true), (-p.l3, div, false), (-p.l4, curl, false)];
    for (l, op, first) in ops {
        let s = |q: &Mat<2>| if first { s1(q) } else { s2(q) };
        let u = vadd(mat_vec(&s(&x.q), &op(&x.g)), mat_vec(&s(&n.q), &op(&n.g)));
        // Term a: phi carried by the S factor (sign handled by `l` for S2).
        let a = vdot(u, mat_vec(&phi.q, &vadd(op(&x.g), op(&n.g))));
        // Term b: phi carried by the derivative. For S2 the sign in `l` must
        // be undone since only S2's dependence on phi is negative.
        let t = add(&s(&x.q), &s(&n.q));
        let b = vdot(u, mat_vec(&t, &op(&phi.g)));
        h += 0.25 * l * a + 0.25 * l.abs() * b;
    }
    let gxx: f64 = x.g.iter().flatten().flatten().map(|v| v * v).sum();
    let gnn: f64 = n.g.iter().flatten().flatten().map(|v| v * v).sum();
    let mut gsum = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                gsum += (x.g[i][j][k] + n.g[i][j][k]) * phi.g[i][j][k];
            }
        }
    }
    let xn = add(&x.q, &n.q);
    let (xx, nn) = (frobenius(&x.q, &x.q), frobenius(&n.q, &n.q));
    h += 0.25 * p.l5 * ((gxx + gnn) * frobenius(&xn, &phi.q) + (xx + nn) * gsum);
    let sixb = add(&add(&mat_mul(&x.q, &x.q), &mat_mul(&n.q, &n.q)), &mat_mul(&x.q, &n.q));
    h += p.a * frobenius(&xn, &phi.q) - 2.0 * p.b / 3.0 * frobenius(&sixb, &phi.q)
        + 0.5 * p.c * (xx + nn) * frobenius(&xn, &phi.q);
    h
}

fn oracle_load(p: &ModelParams, x: &NodalField, n: &NodalField) -> Vec<f64> {
    let mesh = x.mesh();
    let rule = triangle_quadrature(6).unwrap();
    let mut out = vec![0.0; 2 * mesh.interior_ids().len()];
    for e in 0..mesh.num_elements() {
        let tri = mesh.elements()[e];
        let area = mesh.geometry()[e].area;
        for a in 0..3 {
            let Some(k) = mesh.dof(tri[a]) else { continue };
            for al in 0..2 {
                let mut c = [0.0; 2];
                c[al] = 1.0;
                let mut phi_coeffs = vec![[0.0; 2]; mesh.num_nodes()];
                phi_coeffs[tri[a]] = c;
                let phi = NodalField::from_coeffs(Arc::clone(mesh), phi_coeffs).unwrap();
                for (l, w) in rule.iter() {
                    out[2 * k + al] +=
                        area * w * oracle_h(p, &local(x, e, l), &local(n, e, l), &local(&phi, e, l));
                }
            }
        }
    }
    out
}

// ---- Tests ----

#[test]
fn energy_matches_subdivided_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mesh = perturbed_mesh(0.25, &mut rng);
    let p = anisotropic_params();
    for degree in [4, 6] {
        let asm = Assembler::new(Arc::clone(&mesh), p, degree).unwrap();
        for _ in 0..3 {
            let q = random_field(&mesh, &mut rng, 0.4);
            let e = asm.energy(&q);
            let o = oracle_energy(&p, &q);
            for (a, b) in e.terms().iter().zip(o) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-3), "{a} vs {b}");
            }
            assert!((e.total - e.terms().iter().sum::<f64>()).abs() < 1e-15 * e.total.abs().max(1.0));
        }
    }
}

#[test]
fn quadrature_degree_does_not_change_results() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mesh = perturbed_mesh(0.25, &mut rng);
    let p = ModelParams::standard();
    let a4 = Assembler::new(Arc::clone(&mesh), p, 4).unwrap();
    let a6 = Assembler::new(Arc::clone(&mesh), p, 6).unwrap();
    let x = random_field(&mesh, &mut rng, 0.3);
    let n = random_field(&mesh, &mut rng, 0.3);
    let (e4, e6) = (a4.energy(&x).total, a6.energy(&x).total);
    assert!((e4 - e6).abs() <= 1e-13 * e6.abs());
    let (l4, l6) = (a4.load_vector(&x, &n), a6.load_vector(&x, &n));
    let scale = l6.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (a, b) in l4.iter().zip(&l6) {
        assert!((a - b).abs() <= 1e-13 * scale);
    }
    assert!(Assembler::new(mesh, p, 2).is_err());
}

#[test]
fn load_vector_matches_direct_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mesh = perturbed_mesh(0.4, &mut rng);
    let p = anisotropic_params();
    let asm = Assembler::new(Arc::clone(&mesh), p, 4).unwrap();
    for _ in 0..3 {
        let x = random_field(&mesh, &mut rng, 0.4);
        let n = random_field(&mesh, &mut rng, 0.4);
        let got = asm.load_vector(&x, &n);
        let want = oracle_load(&p, &x, &n);
        let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() <= 1e-12 * scale, "{a} vs {b}");
        }
    }
}

#[test]
fn load_vector_is_first_variation_at_equal_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mesh = Arc::new(structured_rect_mesh(2.0, 2.0, 0.2).unwrap());
    let p = anisotropic_params();
    let asm = Assembler::new(Arc::clone(&mesh), p, 4).unwrap();
    let eps = 1e-6;
    for _ in 0..20 {
        let q = random_field(&mesh, &mut rng, 0.3);
        let grad = asm.load_vector(&q, &q);
        let base = q.interior_vector();
        let scale = grad.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // Sampled directions keep the test fast; every dof is hit across fields.
        for d in (0..base.len()).step_by(7).map(|d| (d + rng.gen_range(0..7)) % base.len()) {
            let mut up = base.clone();
            up[d] += eps;
            let mut dn = base.clone();
            dn[d] -= eps;
            let fd = (asm.energy(&q.with_interior(&up)).total - asm.energy(&q.with_interior(&dn)).total)
                / (2.0 * eps);
            assert!((fd - grad[d]).abs() <= 1e-5 * scale.max(grad[d].abs()), "dof {d}: {fd} vs {}", grad[d]);
        }
    }
}

#[test]
fn discrete_energy_identity() {
    // H(X, Qn; X - Qn) = F(X) - F(Qn) whenever X and Qn share boundary data.
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let mesh = perturbed_mesh(0.25, &mut rng);
    let p = anisotropic_params();
    let asm = Assembler::new(Arc::clone(&mesh), p, 4).unwrap();
    for _ in 0..10 {
        let n = random_field(&mesh, &mut rng, 0.4);
        let x = n.with_interior(&random_field(&mesh, &mut rng, 0.4).interior_vector());
        let dq: Vec<f64> = x.interior_vector().iter().zip(n.interior_vector()).map(|(a, b)| a - b).collect();
        let lhs = dot(&asm.load_vector(&x, &n), &dq);
        let rhs = asm.energy(&x).total - asm.energy(&n).total;
        let scale = asm.energy(&x).total.abs() + asm.energy(&n).total.abs();
        assert!((lhs - rhs).abs() <= 1e-12 * scale, "{lhs} vs {rhs}");
    }
}

#[test]
fn zero_field_has_zero_load_and_energy() {
    let mesh = Arc::new(structured_rect_mesh(1.0, 1.0, 0.25).unwrap());
    let asm = Assembler::new(Arc::clone(&mesh), ModelParams::standard(), 4).unwrap();
    let z = NodalField::zeros(Arc::clone(&mesh));
    assert!(asm.load_vector(&z, &z).iter().all(|&v| v == 0.0));
    assert_eq!(asm.energy(&z).total, 0.0);
}

#[test]
fn constant_field_energy_is_bulk_only() {
    let mesh = Arc::new(structured_rect_mesh(2.0, 2.0, 0.5).unwrap());
    let p = ModelParams::standard();
    let asm = Assembler::new(Arc::clone(&mesh), p, 4).unwrap();
    let c = [0.12, -0.05];
    let q = NodalField::from_coeffs(Arc::clone(&mesh), vec![c; mesh.num_nodes()]).unwrap();
    let e = asm.energy(&q);
    let w = crate::qtensor::bulk_potential(&crate::qtensor::Q2::new(c), &p);
    assert!(e.terms()[..5].iter().all(|&t| t.abs() < 1e-18));
    assert!((e.f6 - 4.0 * w).abs() < 1e-14);
}

#[test]
fn mass_operator_against_dense_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let mesh = perturbed_mesh(0.25, &mut rng);
    let m = mass_operator(&mesh, &BasisSet::planar()).unwrap();
    let n = m.num_dofs();
    assert_eq!(n, 2 * mesh.interior_ids().len());
    let mut dense = vec![vec![0.0; n]; n];
    for (j, col) in (0..n).map(|j| {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        (j, m.apply(&e))
    }) {
        for i in 0..n {
            dense[i][j] = col[i];
        }
    }
    for i in 0..n {
        for j in 0..n {
            assert!((dense[i][j] - dense[j][i]).abs() < 1e-16);
        }
    }
    for _ in 0..5 {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        // v^T A v is the L2 norm squared of the field with zero boundary data.
        let f = NodalField::zeros(Arc::clone(&mesh)).with_interior(&v);
        let l2 = l2_norm(&f);
        assert!((m.norm(&v) - l2).abs() < 1e-13 * l2);
        assert!(dot(&v, &m.apply(&v)) > 0.0);
        let back = m.solve(&m.apply(&v));
        for (a, b) in back.iter().zip(&v) {
            assert!((a - b).abs() < 1e-11);
        }
    }
}

#[test]
fn l2_norm_matches_quadrature_of_interpolant() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mesh = perturbed_mesh(0.25, &mut rng);
    let q = random_field(&mesh, &mut rng, 1.0);
    let rule = triangle_quadrature(4).unwrap();
    let mut s = 0.0;
    for e in 0..mesh.num_elements() {
        for (l, w) in rule.iter() {
            let v = local(&q, e, l).q;
            s += mesh.geometry()[e].area * w * frobenius(&v, &v);
        }
    }
    assert!((l2_norm(&q) - s.sqrt()).abs() < 1e-13);
}

#[test]
fn l2_error_of_constant_offset() {
    let coarse = Arc::new(structured_rect_mesh(2.0, 2.0, 0.5).unwrap());
    let fine = Arc::new(structured_rect_mesh(2.0, 2.0, 0.125).unwrap());
    let f = |x: [f64; 2]| [[x[0] * 0.3 - x[1], 0.2 * x[1]], [0.2 * x[1], x[1] - x[0] * 0.3]];
    let c = [0.1, -0.2];
    let a = interpolate(&coarse, f);
    let b = interpolate(&fine, |x| {
        let m = f(x);
        [[m[0][0] + c[0], m[0][1] + c[1]], [m[1][0] + c[1], m[1][1] - c[0]]]
    });
    let want = 2.0 * (2.0 * (c[0] * c[0] + c[1] * c[1])).sqrt();
    assert!((l2_error(&a, &b).unwrap() - want).abs() < 1e-13);
    assert!((l2_error(&b, &a).unwrap() - want).abs() < 1e-13);
    assert!(l2_error(&a, &a).unwrap() == 0.0);
}
