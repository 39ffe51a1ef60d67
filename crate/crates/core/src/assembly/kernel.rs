//! Pointwise integrands of the energy and of the linearized H-forms.

#[cfg(test)]
use crate::qtensor::{add, mat_mul, GradientTensor};
use crate::qtensor::{
    bulk_potential_matrix, curl_planar, frobenius, gradient_norm_sq, mat_vec, pointwise_div, scale, shift,
    Mat, ModelParams,
};

/// Derivative data of a P1 field on one element (constant per element).
#[derive(Clone, Copy, Debug)]
pub(crate) struct ElementGrad {
    pub dq: [[f64; 2]; 2],
    #[cfg(test)]
    pub grad: GradientTensor<2>,
    pub div: [f64; 2],
    pub curl: [f64; 2],
    pub grad_sq: f64,
}

impl ElementGrad {
    /// `dq[m][k] = d_k q_m` for the two planar coefficients.
    pub fn from_coeff_gradients(dq: &[[f64; 2]; 2]) -> Self {
        let mut grad = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            grad[0][0][k] = dq[0][k];
            grad[1][1][k] = -dq[0][k];
            grad[0][1][k] = dq[1][k];
            grad[1][0][k] = dq[1][k];
        }
        Self {
            dq: *dq,
            #[cfg(test)]
            grad,
            div: pointwise_div(&grad),
            curl: curl_planar(&grad),
            grad_sq: gradient_norm_sq(&grad),
        }
    }
}

#[inline]
pub(crate) fn planar_matrix(c: [f64; 2]) -> Mat<2> {
    [[c[0], c[1]], [c[1], -c[0]]]
}

/// Pairings `V : B_a` with the planar basis.
#[inline]
#[cfg(test)]
pub(crate) fn pair_value(v: &Mat<2>) -> [f64; 2] {
    [v[0][0] - v[1][1], v[0][1] + v[1][0]]
}

/// `g[a][k] = sum_ij G_ijk (B_a)_ij`.
#[inline]
#[cfg(test)]
pub(crate) fn pair_gradient(g: &GradientTensor<2>) -> [[f64; 2]; 2] {
    [[g[0][0][0] - g[1][1][0], g[0][0][1] - g[1][1][1]], [g[0][1][0] + g[1][0][0], g[0][1][1] + g[1][0][1]]]
}

#[inline]
fn norm_sq(v: &[f64; 2]) -> f64 {
    v[0] * v[0] + v[1] * v[1]
}

/// Elastic energy densities `[f1, ..., f5]` at a point.
pub(crate) fn elastic_density(p: &ModelParams, q: &Mat<2>, g: &ElementGrad) -> [f64; 5] {
    let s0 = p.s0();
    let s1 = shift(q, s0 / 3.0);
    let s2 = shift(&scale(q, -1.0), 2.0 * s0 / 3.0);
    [
        0.5 * p.l1 * norm_sq(&mat_vec(&s1, &g.div)),
        0.5 * p.l2 * norm_sq(&mat_vec(&s1, &g.curl)),
        0.5 * p.l3 * norm_sq(&mat_vec(&s2, &g.div)),
        0.5 * p.l4 * norm_sq(&mat_vec(&s2, &g.curl)),
        0.5 * p.l5 * frobenius(q, q) * g.grad_sq,
    ]
}

pub(crate) fn bulk_density(p: &ModelParams, q: &Mat<2>) -> f64 {
    bulk_potential_matrix(q, p)
}

#[cfg(test)]
#[inline]
fn outer_add(m: &mut Mat<2>, u: &[f64; 2], v: &[f64; 2], s: f64) {
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] += s * u[i] * v[j];
        }
    }
}

#[inline]
fn vadd(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] + b[0], a[1] + b[1]]
}

#[inline]
fn apply_planar(q: [f64; 2], v: [f64; 2]) -> [f64; 2] {
    [q[0] * v[0] + q[1] * v[1], q[1] * v[0] - q[0] * v[1]]
}

/// [`elastic_variation`] paired with the planar basis, in coefficients:
/// returns `v[a] = V : B_a` and `g[a][k] = sum_ij G_ijk (B_a)_ij`.
#[inline]
pub(crate) fn elastic_variation_planar(
    p: &ModelParams,
    x: [f64; 2],
    gx: &ElementGrad,
    n: [f64; 2],
    gn: &ElementGrad,
) -> ([f64; 2], [[f64; 2]; 2]) {
    let s0 = p.s0();
    let (al, be) = (s0 / 3.0, 2.0 * s0 / 3.0);
    let d = vadd(gx.div, gn.div);
    let c = vadd(gx.curl, gn.curl);
    let pd = vadd(apply_planar(x, gx.div), apply_planar(n, gn.div));
    let pc = vadd(apply_planar(x, gx.curl), apply_planar(n, gn.curl));
    let u1 = [al * d[0] + pd[0], al * d[1] + pd[1]];
    let u2 = [al * c[0] + pc[0], al * c[1] + pc[1]];
    let u3 = [be * d[0] - pd[0], be * d[1] - pd[1]];
    let u4 = [be * c[0] - pc[0], be * c[1] - pc[1]];

    // (u w^T) : B_1 = u0 w0 - u1 w1, (u w^T) : B_2 = u0 w1 + u1 w0.
    let (k1, k2, k3, k4) = (0.25 * p.l1, 0.25 * p.l2, 0.25 * p.l3, 0.25 * p.l4);
    let ud = [k1 * u1[0] - k3 * u3[0], k1 * u1[1] - k3 * u3[1]];
    let uc = [k2 * u2[0] - k4 * u4[0], k2 * u2[1] - k4 * u4[1]];
    let sum = [x[0] + n[0], x[1] + n[1]];
    let k5 = 0.5 * p.l5 * (gx.grad_sq + gn.grad_sq);
    let v = [
        ud[0] * d[0] - ud[1] * d[1] + uc[0] * c[0] - uc[1] * c[1] + k5 * sum[0],
        ud[0] * d[1] + ud[1] * d[0] + uc[0] * c[1] + uc[1] * c[0] + k5 * sum[1],
    ];

    // T1 = 2 al I + S and T2 = 2 be I - S with S = X + N.
    let su1 = apply_planar(sum, u1);
    let su2 = apply_planar(sum, u2);
    let su3 = apply_planar(sum, u3);
    let su4 = apply_planar(sum, u4);
    let wd: [f64; 2] =
        std::array::from_fn(|i| k1 * (2.0 * al * u1[i] + su1[i]) + k3 * (2.0 * be * u3[i] - su3[i]));
    let wc: [f64; 2] =
        std::array::from_fn(|i| k2 * (2.0 * al * u2[i] + su2[i]) + k4 * (2.0 * be * u4[i] - su4[i]));
    let k5 = 0.5 * p.l5 * (2.0 * (x[0] * x[0] + x[1] * x[1] + n[0] * n[0] + n[1] * n[1]));
    let g = [
        [wd[0] - wc[1] + k5 * (gx.dq[0][0] + gn.dq[0][0]), -wd[1] - wc[0] + k5 * (gx.dq[0][1] + gn.dq[0][1])],
        [wd[1] + wc[0] + k5 * (gx.dq[1][0] + gn.dq[1][0]), wd[0] - wc[1] + k5 * (gx.dq[1][1] + gn.dq[1][1])],
    ];
    (v, g)
}

/// Integrand of the elastic terms `H_1a + ... + H_5b` at one point, as the
/// pair `(V, G)` with `H = int V : phi + G : grad phi`.
#[cfg(test)]
pub(crate) fn elastic_variation(
    p: &ModelParams,
    x: &Mat<2>,
    gx: &ElementGrad,
    n: &Mat<2>,
    gn: &ElementGrad,
) -> (Mat<2>, GradientTensor<2>) {
    let s0 = p.s0();
    let s1x = shift(x, s0 / 3.0);
    let s1n = shift(n, s0 / 3.0);
    let s2x = shift(&scale(x, -1.0), 2.0 * s0 / 3.0);
    let s2n = shift(&scale(n, -1.0), 2.0 * s0 / 3.0);
    let t1 = add(&s1x, &s1n);
    let t2 = add(&s2x, &s2n);
    let d = vadd(gx.div, gn.div);
    let c = vadd(gx.curl, gn.curl);

    let u1 = vadd(mat_vec(&s1x, &gx.div), mat_vec(&s1n, &gn.div));
    let u2 = vadd(mat_vec(&s1x, &gx.curl), mat_vec(&s1n, &gn.curl));
    let u3 = vadd(mat_vec(&s2x, &gx.div), mat_vec(&s2n, &gn.div));
    let u4 = vadd(mat_vec(&s2x, &gx.curl), mat_vec(&s2n, &gn.curl));

    // Value part: <U, phi w> = phi : (U w^T).
    let mut v = [[0.0; 2]; 2];
    outer_add(&mut v, &u1, &d, 0.25 * p.l1);
    outer_add(&mut v, &u2, &c, 0.25 * p.l2);
    outer_add(&mut v, &u3, &d, -0.25 * p.l3);
    outer_add(&mut v, &u4, &c, -0.25 * p.l4);
    let xn = add(x, n);
    let k5 = 0.25 * p.l5 * (gx.grad_sq + gn.grad_sq);
    for i in 0..2 {
        for j in 0..2 {
            v[i][j] += k5 * xn[i][j];
        }
    }

    // Gradient part: <U, T div phi> = (T U) . div phi, and likewise for curl.
    let wdiv = vadd(mat_vec(&t1, &u1).map(|t| t * 0.25 * p.l1), mat_vec(&t2, &u3).map(|t| t * 0.25 * p.l3));
    let wcurl = vadd(mat_vec(&t1, &u2).map(|t| t * 0.25 * p.l2), mat_vec(&t2, &u4).map(|t| t * 0.25 * p.l4));
    let mut g = [[[0.0; 2]; 2]; 2];
    let k5 = 0.25 * p.l5 * (frobenius(x, x) + frobenius(n, n));
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                g[i][j][k] = k5 * (gx.grad[i][j][k] + gn.grad[i][j][k]);
            }
        }
        // (div phi)_i = sum_k d_k phi_ik
        g[i][0][0] += wdiv[i];
        g[i][1][1] += wdiv[i];
        // (curl phi)_i = d_1 phi_i2 - d_2 phi_i1
        g[i][1][0] += wcurl[i];
        g[i][0][1] -= wcurl[i];
    }
    (v, g)
}

/// Pairings of the bulk integrand with the planar basis, in coefficients.
/// With `Q^2 = |q|^2 I` for planar tensors the cubic term pairs to zero, and
/// `|Q|^2 = 2 |q|^2`.
#[inline]
pub(crate) fn bulk_variation_planar(p: &ModelParams, x: [f64; 2], n: [f64; 2]) -> [f64; 2] {
    let k = p.a + p.c * (x[0] * x[0] + x[1] * x[1] + n[0] * n[0] + n[1] * n[1]);
    [2.0 * k * (x[0] + n[0]), 2.0 * k * (x[1] + n[1])]
}

/// Integrand of `H_6a + H_6b + H_6c`, paired against `phi`.
#[cfg(test)]
fn bulk_variation(p: &ModelParams, x: &Mat<2>, n: &Mat<2>) -> Mat<2> {
    let xn = add(x, n);
    let quad = add(&add(&mat_mul(x, x), &mat_mul(n, n)), &mat_mul(x, n));
    let k = p.a + 0.5 * p.c * (frobenius(x, x) + frobenius(n, n));
    let mut v = scale(&xn, k);
    let kb = -2.0 * p.b / 3.0;
    for i in 0..2 {
        for j in 0..2 {
            v[i][j] += kb * quad[i][j];
        }
    }
    v
}
