//! Pointwise algebra on symmetric traceless tensors.
//!
//! Q-tensor values are stored as coefficient vectors over a fixed basis of the
//! symmetric traceless space, so symmetry and zero trace hold structurally.
//! In 3D the basis is `R1 = E11 - E33`, `R2 = E22 - E33`, `R3 = E12 + E21`,
//! `R4 = E13 + E31`, `R5 = E23 + E32`; in 2D it is `B1 = diag(1, -1)` and
//! `B2 = E12 + E21`. The 3D basis is not orthogonal under the Frobenius
//! product, so every pairing of coefficient vectors goes through the Gram
//! matrix.

use std::sync::LazyLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense `D x D` matrix, row-major.
pub type Mat<const D: usize> = [[f64; D]; D];

/// Spatial gradient of a matrix field: `g[i][j][k] = d Q_ij / d x_k`.
pub type GradientTensor<const D: usize> = [[[f64; D]; D]; D];

pub fn zeros<const D: usize>() -> Mat<D> {
    [[0.0; D]; D]
}

pub fn identity<const D: usize>() -> Mat<D> {
    let mut m = zeros::<D>();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn add<const D: usize>(a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    let mut out = *a;
    for i in 0..D {
        for j in 0..D {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn sub<const D: usize>(a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    let mut out = *a;
    for i in 0..D {
        for j in 0..D {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn scale<const D: usize>(a: &Mat<D>, s: f64) -> Mat<D> {
    let mut out = *a;
    for row in out.iter_mut() {
        for v in row.iter_mut() {
            *v *= s;
        }
    }
    out
}

/// `a + s * I`.
pub fn shift<const D: usize>(a: &Mat<D>, s: f64) -> Mat<D> {
    let mut out = *a;
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += s;
    }
    out
}

pub fn mat_mul<const D: usize>(a: &Mat<D>, b: &Mat<D>) -> Mat<D> {
    let mut out = zeros::<D>();
    for i in 0..D {
        for k in 0..D {
            let aik = a[i][k];
            for j in 0..D {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_vec<const D: usize>(a: &Mat<D>, v: &[f64; D]) -> [f64; D] {
    let mut out = [0.0; D];
    for i in 0..D {
        for j in 0..D {
            out[i] += a[i][j] * v[j];
        }
    }
    out
}

pub fn transpose<const D: usize>(a: &Mat<D>) -> Mat<D> {
    let mut out = zeros::<D>();
    for i in 0..D {
        for j in 0..D {
            out[j][i] = a[i][j];
        }
    }
    out
}

pub fn trace<const D: usize>(a: &Mat<D>) -> f64 {
    (0..D).map(|i| a[i][i]).sum()
}

/// Frobenius product `A : B`.
pub fn frobenius<const D: usize>(a: &Mat<D>, b: &Mat<D>) -> f64 {
    let mut s = 0.0;
    for i in 0..D {
        for j in 0..D {
            s += a[i][j] * b[i][j];
        }
    }
    s
}

pub fn frobenius_norm<const D: usize>(a: &Mat<D>) -> f64 {
    frobenius(a, a).sqrt()
}

/// Projection onto symmetric traceless matrices:
/// `P(A) = (A + A^T) / 2 - tr(A) / D * I`.
pub fn project_st<const D: usize>(a: &Mat<D>) -> Mat<D> {
    let tr = trace(a) / D as f64;
    let mut out = zeros::<D>();
    for i in 0..D {
        for j in 0..D {
            out[i][j] = 0.5 * (a[i][j] + a[j][i]);
        }
        out[i][i] -= tr;
    }
    out
}

/// `(div Q)_i = sum_k d_k Q_ik`.
pub fn pointwise_div<const D: usize>(g: &GradientTensor<D>) -> [f64; D] {
    let mut out = [0.0; D];
    for (i, o) in out.iter_mut().enumerate() {
        for k in 0..D {
            *o += g[i][k][k];
        }
    }
    out
}

/// Planar curl of each row: `(curl Q)_j = d_1 Q_j2 - d_2 Q_j1`.
pub fn curl_planar(g: &GradientTensor<2>) -> [f64; 2] {
    [g[0][1][0] - g[0][0][1], g[1][1][0] - g[1][0][1]]
}

/// 3D curl; column `j` of the result is the curl of row `j` of `Q`.
pub fn curl_spatial(g: &GradientTensor<3>) -> Mat<3> {
    let mut c = zeros::<3>();
    for j in 0..3 {
        c[0][j] = g[j][2][1] - g[j][1][2];
        c[1][j] = g[j][0][2] - g[j][2][0];
        c[2][j] = g[j][1][0] - g[j][0][1];
    }
    c
}

/// `|grad Q|^2 = sum_ijk g_ijk^2`.
pub fn gradient_norm_sq<const D: usize>(g: &GradientTensor<D>) -> f64 {
    g.iter().flatten().flatten().map(|v| v * v).sum()
}

/// Checks the symmetry and trace constraints a gradient of a symmetric
/// traceless field must satisfy.
pub fn is_admissible_gradient<const D: usize>(g: &GradientTensor<D>, tol: f64) -> bool {
    for k in 0..D {
        let mut tr = 0.0;
        for i in 0..D {
            tr += g[i][i][k];
            for j in 0..D {
                if (g[i][j][k] - g[j][i][k]).abs() > tol {
                    return false;
                }
            }
        }
        if tr.abs() > tol {
            return false;
        }
    }
    true
}

/// A spanning set of the symmetric traceless matrices together with its
/// Frobenius Gram matrix.
#[derive(Clone, Debug)]
pub struct BasisSet<const D: usize, const M: usize> {
    tensors: [Mat<D>; M],
    gram: [[f64; M]; M],
    gram_inv: [[f64; M]; M],
}

impl<const D: usize, const M: usize> BasisSet<D, M> {
    fn from_tensors(tensors: [Mat<D>; M]) -> Self {
        let mut gram = [[0.0; M]; M];
        for a in 0..M {
            for b in 0..M {
                gram[a][b] = frobenius(&tensors[a], &tensors[b]);
            }
        }
        let gram_inv = invert_spd(&gram);
        Self { tensors, gram, gram_inv }
    }

    pub fn dim(&self) -> usize {
        D
    }

    pub fn tensors(&self) -> &[Mat<D>; M] {
        &self.tensors
    }

    pub fn gram(&self) -> &[[f64; M]; M] {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &[[f64; M]; M] {
        &self.gram_inv
    }

    pub fn reconstruct(&self, coeffs: &[f64; M]) -> Mat<D> {
        let mut out = zeros::<D>();
        for (c, t) in coeffs.iter().zip(&self.tensors) {
            for i in 0..D {
                for j in 0..D {
                    out[i][j] += c * t[i][j];
                }
            }
        }
        out
    }

    /// Coefficients of `P(A)`: solves `G c = [R_a : P(A)]_a`.
    pub fn coefficients(&self, a: &Mat<D>) -> [f64; M] {
        let p = project_st(a);
        let rhs: [f64; M] = std::array::from_fn(|k| frobenius(&self.tensors[k], &p));
        std::array::from_fn(|k| (0..M).map(|l| self.gram_inv[k][l] * rhs[l]).sum())
    }

    /// `A : R_a` for every basis tensor; the pairing of an arbitrary matrix
    /// against the basis.
    pub fn pair_with_basis(&self, a: &Mat<D>) -> [f64; M] {
        std::array::from_fn(|k| frobenius(a, &self.tensors[k]))
    }

    /// Frobenius product of the matrices represented by two coefficient
    /// vectors, `x^T G y`.
    pub fn pairing(&self, x: &[f64; M], y: &[f64; M]) -> f64 {
        let mut s = 0.0;
        for a in 0..M {
            for b in 0..M {
                s += x[a] * self.gram[a][b] * y[b];
            }
        }
        s
    }
}

impl BasisSet<2, 2> {
    /// `B1 = diag(1, -1)`, `B2 = offdiag(1, 1)`.
    pub fn planar() -> Self {
        Self::from_tensors([[[1.0, 0.0], [0.0, -1.0]], [[0.0, 1.0], [1.0, 0.0]]])
    }
}

impl BasisSet<3, 5> {
    /// `R1 ... R5`.
    pub fn spatial() -> Self {
        let e = |i: usize, j: usize| {
            let mut m = zeros::<3>();
            m[i][j] = 1.0;
            m
        };
        Self::from_tensors([
            sub(&e(0, 0), &e(2, 2)),
            sub(&e(1, 1), &e(2, 2)),
            add(&e(0, 1), &e(1, 0)),
            add(&e(0, 2), &e(2, 0)),
            add(&e(1, 2), &e(2, 1)),
        ])
    }
}

fn invert_spd<const M: usize>(g: &[[f64; M]; M]) -> [[f64; M]; M] {
    // Gauss-Jordan; the Gram matrices here are tiny and well conditioned.
    let mut a = *g;
    let mut inv = [[0.0; M]; M];
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for col in 0..M {
        let piv = a[col][col];
        for j in 0..M {
            a[col][j] /= piv;
            inv[col][j] /= piv;
        }
        for row in 0..M {
            if row != col {
                let f = a[row][col];
                for j in 0..M {
                    a[row][j] -= f * a[col][j];
                    inv[row][j] -= f * inv[col][j];
                }
            }
        }
    }
    inv
}

static PLANAR: LazyLock<BasisSet<2, 2>> = LazyLock::new(BasisSet::planar);
static SPATIAL: LazyLock<BasisSet<3, 5>> = LazyLock::new(BasisSet::spatial);

/// Ties a coefficient layout to its canonical basis.
pub trait CanonicalBasis<const D: usize, const M: usize> {
    fn basis() -> &'static BasisSet<D, M>;
}

/// A Q-tensor value as coefficients over the canonical basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymTraceless<const D: usize, const M: usize> {
    pub coeffs: [f64; M],
}

pub type Q2 = SymTraceless<2, 2>;
pub type Q3 = SymTraceless<3, 5>;

impl CanonicalBasis<2, 2> for Q2 {
    fn basis() -> &'static BasisSet<2, 2> {
        &PLANAR
    }
}

impl CanonicalBasis<3, 5> for Q3 {
    fn basis() -> &'static BasisSet<3, 5> {
        &SPATIAL
    }
}

impl<const D: usize, const M: usize> SymTraceless<D, M>
where
    Self: CanonicalBasis<D, M>,
{
    pub fn new(coeffs: [f64; M]) -> Self {
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: [0.0; M] }
    }

    /// Coefficients of the symmetric traceless part of `a`.
    pub fn from_matrix(a: &Mat<D>) -> Self {
        Self { coeffs: Self::basis().coefficients(a) }
    }

    pub fn matrix(&self) -> Mat<D> {
        Self::basis().reconstruct(&self.coeffs)
    }

    pub fn norm(&self) -> f64 {
        Self::basis().pairing(&self.coeffs, &self.coeffs).max(0.0).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { coeffs: self.coeffs.map(|c| c * s) }
    }
}

/// Elastic constants, bulk coefficients and mobility.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModelParams", into = "RawModelParams")]
pub struct ModelParams {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
    pub l5: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub mobility: f64,
    s0: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModelParams {
    #[serde(rename = "L1")]
    l1: f64,
    #[serde(rename = "L2")]
    l2: f64,
    #[serde(rename = "L3")]
    l3: f64,
    #[serde(rename = "L4")]
    l4: f64,
    #[serde(rename = "L5")]
    l5: f64,
    a: f64,
    b: f64,
    c: f64,
    #[serde(rename = "M")]
    m: f64,
}

impl TryFrom<RawModelParams> for ModelParams {
    type Error = Error;

    fn try_from(r: RawModelParams) -> Result<Self> {
        ModelParams::new([r.l1, r.l2, r.l3, r.l4, r.l5], r.a, r.b, r.c, r.m)
    }
}

impl From<ModelParams> for RawModelParams {
    fn from(p: ModelParams) -> Self {
        RawModelParams {
            l1: p.l1,
            l2: p.l2,
            l3: p.l3,
            l4: p.l4,
            l5: p.l5,
            a: p.a,
            b: p.b,
            c: p.c,
            m: p.mobility,
        }
    }
}

impl ModelParams {
    pub fn new(elastic: [f64; 5], a: f64, b: f64, c: f64, mobility: f64) -> Result<Self> {
        if elastic.iter().any(|l| !(*l >= 0.0)) {
            return Err(Error::Domain(format!("elastic constants must be non-negative, got {elastic:?}")));
        }
        if !(mobility > 0.0) {
            return Err(Error::Domain(format!("mobility M must be positive, got {mobility}")));
        }
        let s0 = equilibrium_s0(a, b, c)?;
        let [l1, l2, l3, l4, l5] = elastic;
        Ok(Self { l1, l2, l3, l4, l5, a, b, c, mobility, s0 })
    }

    /// The thin-film parameter set used by all shipped experiments:
    /// `L1 = 0.1`, `L2..L5 = 0.001`, `a = -0.3`, `b = -4`, `c = 4`, `M = 1`.
    pub fn standard() -> Self {
        Self::new([0.1, 0.001, 0.001, 0.001, 0.001], -0.3, -4.0, 4.0, 1.0)
            .expect("standard parameters are valid")
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    /// Amplitude `sqrt(-2a/c)` of the planar minimizers of the bulk
    /// potential `A (n n^T - I/2)`; zero when `a >= 0`.
    pub fn planar_nematic_amplitude(&self) -> f64 {
        (-2.0 * self.a / self.c).max(0.0).sqrt()
    }
}

/// `s0 = (b + sqrt(b^2 - 24 a c)) / (4 c)`.
pub fn equilibrium_s0(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(c > 0.0) {
        return Err(Error::Domain(format!("bulk coefficient c must be positive, got c = {c}")));
    }
    let disc = b * b - 24.0 * a * c;
    if disc < 0.0 {
        return Err(Error::Domain(format!("b^2 - 24ac = {disc} < 0 for a = {a}, b = {b}, c = {c}")));
    }
    Ok((b + disc.sqrt()) / (4.0 * c))
}

/// `W(Q) = a tr(Q^2) - 2b/3 tr(Q^3) + c/2 tr(Q^2)^2`, for any dimension.
pub fn bulk_potential_matrix<const D: usize>(q: &Mat<D>, p: &ModelParams) -> f64 {
    let q2 = mat_mul(q, q);
    let tr2 = trace(&q2);
    let tr3 = frobenius(&q2, q);
    p.a * tr2 - 2.0 * p.b / 3.0 * tr3 + 0.5 * p.c * tr2 * tr2
}

pub fn bulk_potential<const D: usize, const M: usize>(q: &SymTraceless<D, M>, p: &ModelParams) -> f64
where
    SymTraceless<D, M>: CanonicalBasis<D, M>,
{
    bulk_potential_matrix(&q.matrix(), p)
}

/// Radial clamp `T_R(Q)`.
pub fn truncate<const D: usize, const M: usize>(
    q: &SymTraceless<D, M>,
    radius: f64,
) -> Result<SymTraceless<D, M>>
where
    SymTraceless<D, M>: CanonicalBasis<D, M>,
{
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("truncation radius must be positive, got {radius}")));
    }
    let n = q.norm();
    if n <= radius {
        Ok(*q)
    } else {
        Ok(q.scaled(radius / n))
    }
}

/// Positive eigenvalue and its unit eigenvector for a 2D Q-tensor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderParameter {
    pub lambda_plus: f64,
    pub director: [f64; 2],
    pub degenerate: bool,
}

/// For `Q = [[q1, q2], [q2, -q1]]` the eigenvalues are `+-sqrt(q1^2 + q2^2)`.
/// The director has a non-negative first component, ties broken towards a
/// non-negative second component; `Q = 0` yields `(1, 0)` flagged degenerate.
pub fn order_parameter_2d(q: &Q2) -> OrderParameter {
    let [q1, q2] = q.coeffs;
    let r = q1.hypot(q2);
    if r == 0.0 {
        return OrderParameter { lambda_plus: 0.0, director: [1.0, 0.0], degenerate: true };
    }
    // Two algebraically equivalent null vectors of Q - rI; pick the one that
    // avoids cancellation.
    let v = if q1 >= 0.0 { [r + q1, q2] } else { [q2, r - q1] };
    let n = v[0].hypot(v[1]);
    let mut d = [v[0] / n, v[1] / n];
    if d[0] < 0.0 || (d[0] == 0.0 && d[1] < 0.0) {
        d = [-d[0], -d[1]];
    }
    OrderParameter { lambda_plus: r, director: d, degenerate: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat<const D: usize>(rng: &mut ChaCha8Rng) -> Mat<D> {
        std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
    }

    /// Gradient of a random symmetric traceless field: each `d_k Q` is
    /// itself symmetric traceless.
    fn random_gradient<const D: usize, const M: usize>(rng: &mut ChaCha8Rng) -> GradientTensor<D>
    where
        SymTraceless<D, M>: CanonicalBasis<D, M>,
    {
        let mut g = [[[0.0; D]; D]; D];
        for k in 0..D {
            let c: [f64; M] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
            let m = SymTraceless::<D, M>::new(c).matrix();
            for i in 0..D {
                for j in 0..D {
                    g[i][j][k] = m[i][j];
                }
            }
        }
        g
    }

    #[test]
    fn basis_tensors_are_symmetric_traceless() {
        for t in BasisSet::spatial().tensors() {
            assert_eq!(trace(t), 0.0);
            assert_eq!(*t, transpose(t));
        }
        for t in BasisSet::planar().tensors() {
            assert_eq!(trace(t), 0.0);
            assert_eq!(*t, transpose(t));
        }
    }

    #[test]
    fn gram_matrices() {
        assert_eq!(*BasisSet::planar().gram(), [[2.0, 0.0], [0.0, 2.0]]);
        let g = *BasisSet::spatial().gram();
        assert_eq!(g[0], [2.0, 1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g[1], [1.0, 2.0, 0.0, 0.0, 0.0]);
        for a in 2..5 {
            assert_eq!(g[a][a], 2.0);
        }
        let inv = BasisSet::spatial().gram_inverse().to_owned();
        for a in 0..5 {
            for b in 0..5 {
                let s: f64 = (0..5).map(|k| g[a][k] * inv[k][b]).sum();
                assert_relative_eq!(s, if a == b { 1.0 } else { 0.0 }, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(project_st(&identity::<3>()), zeros::<3>());
        let mut e12 = zeros::<3>();
        e12[0][1] = 1.0;
        let p = project_st(&e12);
        let mut want = zeros::<3>();
        want[0][1] = 0.5;
        want[1][0] = 0.5;
        assert_eq!(p, want);
    }

    #[test]
    fn projection_is_idempotent_linear_and_fixes_st() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let a = random_mat::<3>(&mut rng);
            let b = random_mat::<3>(&mut rng);
            let p = project_st(&a);
            assert!(trace(&p).abs() < 1e-15);
            assert_eq!(p, transpose(&p));
            let pp = project_st(&p);
            for i in 0..3 {
                for j in 0..3 {
                    assert!((pp[i][j] - p[i][j]).abs() < 1e-15);
                }
            }
            let lin = project_st(&add(&a, &scale(&b, 2.5)));
            let sep = add(&p, &scale(&project_st(&b), 2.5));
            assert!(frobenius_norm(&sub(&lin, &sep)) < 1e-14);

            let q = Q3::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            let m = q.matrix();
            assert!(frobenius_norm(&sub(&project_st(&m), &m)) < 1e-15);
            let back = Q3::from_matrix(&m);
            for k in 0..5 {
                assert!((back.coeffs[k] - q.coeffs[k]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn planar_projection_divides_trace_by_two() {
        let a = [[3.0, 1.0], [2.0, 1.0]];
        assert_eq!(project_st(&a), [[1.0, 1.5], [1.5, -1.0]]);
    }

    #[test]
    fn s0_examples() {
        let s0 = equilibrium_s0(-0.3, -4.0, 4.0).unwrap();
        let oracle = (-4.0 + (16.0f64 + 28.8).sqrt()) / 16.0;
        assert_relative_eq!(s0, oracle, max_relative = 1e-15);
        assert!((s0 - 0.168330).abs() < 1e-6);
        assert_relative_eq!(equilibrium_s0(0.0, 3.0, 2.0).unwrap(), 0.75);
        let (b, c) = (3.0, 2.0);
        assert_relative_eq!(equilibrium_s0(b * b / (24.0 * c), b, c).unwrap(), b / (4.0 * c));
        assert!(matches!(equilibrium_s0(1.0, 0.0, 1.0), Err(Error::Domain(_))));
        assert!(equilibrium_s0(-1.0, 0.0, 0.0).is_err());
        assert!(ModelParams::new([0.1; 5], 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(ModelParams::new([0.1, 0.1, 0.1, 0.1, 0.0], -0.3, -4.0, 4.0, 1.0).is_ok());
    }

    #[test]
    fn bulk_potential_uniaxial_3d() {
        let p = ModelParams::standard();
        let s0 = p.s0();
        let n = [1.0f64, 2.0, -0.5];
        let nn = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let n = n.map(|v| v / nn);
        let mut m = zeros::<3>();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = s0 * (n[i] * n[j] - if i == j { 1.0 / 3.0 } else { 0.0 });
            }
        }
        let q = Q3::from_matrix(&m);
        let want =
            2.0 * p.a / 3.0 * s0.powi(2) - 4.0 * p.b / 27.0 * s0.powi(3) + 2.0 * p.c / 9.0 * s0.powi(4);
        assert_relative_eq!(bulk_potential(&q, &p), want, max_relative = 1e-13);
        assert_eq!(bulk_potential(&Q3::zero(), &p), 0.0);
    }

    #[test]
    fn bulk_potential_planar_has_no_cubic_term() {
        let p = ModelParams::standard();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let (q1, q2) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let m = [[q1, q2], [q2, -q1]];
            let m3 = mat_mul(&mat_mul(&m, &m), &m);
            assert!(trace(&m3).abs() < 1e-15);
            let r2 = q1 * q1 + q2 * q2;
            let want = 2.0 * p.a * r2 + 2.0 * p.c * r2 * r2;
            assert_relative_eq!(bulk_potential(&Q2::new([q1, q2]), &p), want, max_relative = 1e-12);
        }
    }

    #[test]
    fn bulk_potential_bounded_below_by_radial_minimum() {
        // Brute-force lower bound: W restricted to each direction is a quartic
        // in the radius; the global minimum over a fine radial grid of the
        // most negative cubic coefficient bounds every sample from below.
        let p = ModelParams::new([0.0; 5], -0.3, -4.0, 4.0, 1.0).unwrap();
        // |tr Q^3| <= |Q|^3 / sqrt(6) for 3x3 symmetric traceless.
        let kappa = 1.0 / 6f64.sqrt();
        let radial = |r: f64| p.a * r * r - 2.0 * p.b.abs() / 3.0 * kappa * r.powi(3) + 0.5 * p.c * r.powi(4);
        let floor = (0..=200_000).map(|i| radial(i as f64 * 1e-5)).fold(f64::INFINITY, f64::min);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20_000 {
            let q = Q3::new(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
            assert!(bulk_potential(&q, &p) >= floor - 1e-12);
        }
    }

    #[test]
    fn divergence_examples() {
        // Q(x) = x2 * R3: rows (0, x2, 0), (x2, 0, 0), (0, 0, 0).
        let mut g = [[[0.0; 3]; 3]; 3];
        g[0][1][1] = 1.0;
        g[1][0][1] = 1.0;
        assert!(is_admissible_gradient(&g, 0.0));
        assert_eq!(pointwise_div(&g), [1.0, 0.0, 0.0]);
        assert_eq!(pointwise_div(&[[[0.0; 3]; 3]; 3]), [0.0; 3]);
    }

    #[test]
    fn curl_examples() {
        // Q(x) = x2 * R1: rows (x2, 0, 0), (0, 0, 0), (0, 0, -x2).
        let mut g = [[[0.0; 3]; 3]; 3];
        g[0][0][1] = 1.0;
        g[2][2][1] = -1.0;
        let c = curl_spatial(&g);
        // Column 0 = curl(x2, 0, 0) = (0, 0, -1); column 2 = curl(0, 0, -x2) = (-1, 0, 0).
        let col = |j: usize| [c[0][j], c[1][j], c[2][j]];
        assert_eq!(col(0), [0.0, 0.0, -1.0]);
        assert_eq!(col(1), [0.0, 0.0, 0.0]);
        assert_eq!(col(2), [-1.0, 0.0, 0.0]);
        assert_eq!(curl_spatial(&[[[0.0; 3]; 3]; 3]), zeros::<3>());
        // Planar curl matches the third component of the 3D curl.
        let mut g2 = [[[0.0; 2]; 2]; 2];
        g2[0][1][0] = 2.0;
        g2[1][0][0] = 2.0;
        g2[0][0][1] = 3.0;
        g2[1][1][1] = -3.0;
        assert_eq!(curl_planar(&g2), [2.0 - 3.0, 0.0]);
        // For symmetric traceless fields: curl_0 = div_1, curl_1 = -div_0.
        let d = pointwise_div(&g2);
        assert_eq!(curl_planar(&g2), [d[1], -d[0]]);
    }

    #[test]
    fn pointwise_inequalities_hold_on_random_gradients() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10_000 {
            let g = random_gradient::<3, 5>(&mut rng);
            assert!(is_admissible_gradient(&g, 1e-14));
            let n2 = gradient_norm_sq(&g);
            let d = pointwise_div(&g);
            assert!(d.iter().map(|v| v * v).sum::<f64>() <= 3.0 * n2 * (1.0 + 1e-12));
            let c = curl_spatial(&g);
            assert!(frobenius(&c, &c) <= 2.0 * n2 * (1.0 + 1e-12));
            let g2 = random_gradient::<2, 2>(&mut rng);
            let n2 = gradient_norm_sq(&g2);
            let c2 = curl_planar(&g2);
            assert!(c2[0] * c2[0] + c2[1] * c2[1] <= 2.0 * n2 * (1.0 + 1e-12));
        }
    }

    #[test]
    fn truncation() {
        let q = Q3::new([0.3, -0.2, 0.1, 0.5, -0.4]);
        let r = q.norm();
        assert_eq!(truncate(&q, 2.0 * r).unwrap(), q);
        let u = q.scaled(1.0 / r);
        let t = truncate(&u.scaled(2.0 * 0.7), 0.7).unwrap();
        for k in 0..5 {
            assert_relative_eq!(t.coeffs[k], 0.7 * u.coeffs[k], max_relative = 1e-14);
        }
        assert!(truncate(&q, 0.0).is_err());
        assert!(truncate(&q, -1.0).is_err());
    }

    #[test]
    fn order_parameter_examples() {
        let o = order_parameter_2d(&Q2::new([1.0, 0.0]));
        assert_eq!((o.lambda_plus, o.director, o.degenerate), (1.0, [1.0, 0.0], false));
        let o = order_parameter_2d(&Q2::new([0.0, 1.0]));
        assert_relative_eq!(o.lambda_plus, 1.0);
        let s = 0.5f64.sqrt();
        assert_relative_eq!(o.director[0], s, max_relative = 1e-15);
        assert_relative_eq!(o.director[1], s, max_relative = 1e-15);
        let o = order_parameter_2d(&Q2::zero());
        assert_eq!((o.lambda_plus, o.director, o.degenerate), (0.0, [1.0, 0.0], true));
        let o = order_parameter_2d(&Q2::new([-2.0, 0.0]));
        assert_eq!(o.director, [0.0, 1.0]);
    }

    #[test]
    fn director_is_an_eigenvector() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let q = Q2::new([rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            let o = order_parameter_2d(&q);
            let qv = mat_vec(&q.matrix(), &o.director);
            assert!((qv[0] - o.lambda_plus * o.director[0]).abs() < 1e-14);
            assert!((qv[1] - o.lambda_plus * o.director[1]).abs() < 1e-14);
            assert!(o.director[0] >= 0.0);
            assert_relative_eq!(o.director[0].hypot(o.director[1]), 1.0, max_relative = 1e-15);
        }
    }
}
