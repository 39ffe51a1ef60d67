//! Sparse symmetric positive definite solves for the mass matrix.

/// Compressed sparse row matrix.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n x n` matrix from `(row, col, value)` triplets; duplicates
    /// are summed.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self { n, row_ptr, cols, vals }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).find(|&(j, _)| j == i).map_or(0.0, |(_, v)| v)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for (i, row) in d.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        d
    }

    /// Number of stored entries in the lower envelope (skyline) of the matrix.
    pub fn envelope_size(&self) -> usize {
        (0..self.n).map(|i| i + 1 - self.first_col(i)).sum()
    }

    fn first_col(&self, i: usize) -> usize {
        self.row(i).map(|(j, _)| j).min().unwrap_or(i).min(i)
    }
}

/// Cholesky factor stored row-wise over the matrix envelope.
#[derive(Clone, Debug)]
pub struct SkylineCholesky {
    first: Vec<usize>,
    start: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    /// Returns `None` if the matrix is not positive definite.
    pub fn factor(a: &CsrMatrix) -> Option<Self> {
        let n = a.n();
        let first: Vec<usize> = (0..n).map(|i| a.first_col(i)).collect();
        let mut start = Vec::with_capacity(n + 1);
        start.push(0);
        for i in 0..n {
            start.push(start[i] + i + 1 - first[i]);
        }
        let mut data = vec![0.0; start[n]];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    data[start[i] + j - first[i]] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            for j in fi..=i {
                let fj = first[j];
                let k0 = fi.max(fj);
                let ri = start[i] - fi;
                let rj = start[j] - fj;
                let mut s = data[ri + j];
                for k in k0..j {
                    s -= data[ri + k] * data[rj + k];
                }
                if j < i {
                    data[ri + j] = s / data[rj + j];
                } else {
                    if !(s > 0.0) {
                        return None;
                    }
                    data[ri + i] = s.sqrt();
                }
            }
        }
        Some(Self { first, start, data })
    }

    /// Solves `A x = b` in place for two right-hand sides stored interleaved.
    pub fn solve2_in_place(&self, x: &mut [[f64; 2]]) {
        let n = self.first.len();
        for i in 0..n {
            let (fi, r) = (self.first[i], self.start[i] - self.first[i]);
            let [mut s0, mut s1] = x[i];
            for (l, xk) in self.data[r + fi..r + i].iter().zip(&x[fi..i]) {
                s0 -= l * xk[0];
                s1 -= l * xk[1];
            }
            let d = self.data[r + i];
            x[i] = [s0 / d, s1 / d];
        }
        for i in (0..n).rev() {
            let (fi, r) = (self.first[i], self.start[i] - self.first[i]);
            let d = self.data[r + i];
            let xi = [x[i][0] / d, x[i][1] / d];
            x[i] = xi;
            for (l, xk) in self.data[r + fi..r + i].iter().zip(&mut x[fi..i]) {
                xk[0] -= l * xi[0];
                xk[1] -= l * xi[1];
            }
        }
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.first.len();
        for i in 0..n {
            let (fi, r) = (self.first[i], self.start[i] - self.first[i]);
            let mut s = x[i];
            for k in fi..i {
                s -= self.data[r + k] * x[k];
            }
            x[i] = s / self.data[r + i];
        }
        for i in (0..n).rev() {
            let (fi, r) = (self.first[i], self.start[i] - self.first[i]);
            x[i] /= self.data[r + i];
            let xi = x[i];
            for k in fi..i {
                x[k] -= self.data[r + k] * xi;
            }
        }
    }
}

/// Jacobi-preconditioned conjugate gradients. Returns the iteration count,
/// or `None` if `max_iters` was reached before the relative residual fell
/// below `rel_tol`.
pub fn pcg(a: &CsrMatrix, b: &[f64], x: &mut [f64], rel_tol: f64, max_iters: usize) -> Option<usize> {
    let n = a.n();
    let inv_diag: Vec<f64> = a.diagonal().iter().map(|d| 1.0 / d).collect();
    let dot = |u: &[f64], v: &[f64]| u.iter().zip(v).map(|(p, q)| p * q).sum::<f64>();
    let b_norm = dot(b, b).sqrt();
    if b_norm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Some(0);
    }
    let mut r = vec![0.0; n];
    a.mul_vec(x, &mut r);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(r, d)| r * d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    for it in 0..max_iters {
        if dot(&r, &r).sqrt() <= rel_tol * b_norm {
            return Some(it);
        }
        a.mul_vec(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    (dot(&r, &r).sqrt() <= rel_tol * b_norm).then_some(max_iters)
}
