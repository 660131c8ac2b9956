//! Small dense complex linear algebra: products, Kronecker products,
//! partial-pivot solves, shifted QR eigen-solves and power iteration.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use rand::Rng as _;

use crate::error::{invalid, Error, Result};
use crate::rng;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        (0..n).for_each(|i| m[(i, i)] = ONE);
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        CMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch {
                expected: cols,
                got: bad.len(),
            });
        }
        Ok(CMatrix {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn from_real(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        Self::from_fn(rows, cols, |i, j| C64::new(f(i, j), 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: other.rows,
            });
        }
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (r, c) = (other.rows, other.cols);
        CMatrix::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * other[(i % r, j % c)]
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &CMatrix, f: impl Fn(C64, C64) -> C64) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Adds `s * other` in place.
    pub fn axpy(&mut self, s: C64, other: &CMatrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        self.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += s * b);
        Ok(())
    }

    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius inner product `tr(self^dagger other)`.
    pub fn frobenius_inner(&self, other: &CMatrix) -> C64 {
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
///
/// The solution is accepted only if `||Ax - b||_inf <= residual_tol * (1 + ||b||_inf)`.
pub fn solve(a: &CMatrix, b: &[C64], residual_tol: f64) -> Result<Vec<C64>> {
    let n = a.rows();
    if !a.is_square() {
        return invalid("linear solve needs a square matrix");
    }
    if b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.len(),
        });
    }
    let mut m = a.clone();
    let mut x = b.to_vec();
    let scale = a.data().iter().fold(0.0f64, |s, v| s.max(v.norm()));
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm()))
            .expect("nonempty pivot range");
        if m[(pivot, col)].norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular(format!("zero pivot in column {col}")));
        }
        if pivot != col {
            for j in 0..n {
                let t = m[(col, j)];
                m[(col, j)] = m[(pivot, j)];
                m[(pivot, j)] = t;
            }
            x.swap(col, pivot);
        }
        for i in col + 1..n {
            let f = m[(i, col)] / m[(col, col)];
            if f == ZERO {
                continue;
            }
            for j in col..n {
                let v = m[(col, j)];
                m[(i, j)] -= f * v;
            }
            let xc = x[col];
            x[i] -= f * xc;
        }
    }
    for i in (0..n).rev() {
        let s: C64 = (i + 1..n).map(|j| m[(i, j)] * x[j]).sum();
        x[i] = (x[i] - s) / m[(i, i)];
    }
    let ax = a.mul_vec(&x);
    let residual = ax.iter().zip(b).fold(0.0f64, |r, (p, q)| r.max((p - q).norm()));
    let bnorm = b.iter().fold(0.0f64, |r, q| r.max(q.norm()));
    if residual > residual_tol * (1.0 + bnorm) {
        return Err(Error::Singular(format!(
            "solve residual {residual:e} exceeds tolerance {residual_tol:e}"
        )));
    }
    Ok(x)
}

/// Inverse by solving against each unit vector.
pub fn inverse(a: &CMatrix, residual_tol: f64) -> Result<CMatrix> {
    let n = a.rows();
    let mut inv = CMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = vec![ZERO; n];
        e[j] = ONE;
        let col = solve(a, &e, residual_tol)?;
        for (i, v) in col.into_iter().enumerate() {
            inv[(i, j)] = v;
        }
    }
    Ok(inv)
}

/// Induced infinity norm: largest absolute row sum.
pub fn inf_norm(a: &CMatrix) -> f64 {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Schur form `A = Z T Z^dagger` with `T` upper triangular and `Z` unitary.
pub struct Schur {
    pub t: CMatrix,
    pub z: CMatrix,
}

/// Complex Schur decomposition: Householder reduction to Hessenberg form,
/// then single-shift QR sweeps with Wilkinson shifts and deflation.
pub fn schur(a: &CMatrix) -> Result<Schur> {
    if !a.is_square() {
        return invalid("Schur decomposition needs a square matrix");
    }
    let n = a.rows();
    let mut h = a.clone();
    let mut z = CMatrix::identity(n);
    hessenberg(&mut h, &mut z);
    if n <= 1 {
        return Ok(Schur { t: h, z });
    }

    let max_iter = 100 * n;
    let mut hi = n - 1;
    let mut iter = 0;
    while hi > 0 {
        // find the start of the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > max_iter {
            return Err(Error::NoConvergence {
                iterations: iter,
                residual: h[(hi, hi - 1)].norm(),
            });
        }
        let mu = if iter % 11 == 10 {
            // exceptional shift against cycling
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, &mut z, lo, hi, mu);
    }
    Ok(Schur { t: h, z })
}

fn hessenberg(h: &mut CMatrix, z: &mut CMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = vec_norm(&x);
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 { ONE } else { x[0] / x[0].norm() };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vn = vec_norm(&v);
        v.iter_mut().for_each(|c| *c /= vn);
        // H <- P H P with P = I - 2 v v^dagger acting on rows/cols k+1..n
        for j in 0..n {
            let s: C64 = (0..v.len()).map(|i| v[i].conj() * h[(k + 1 + i, j)]).sum();
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= 2.0 * v[i] * s;
            }
        }
        for i in 0..n {
            let s: C64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
            }
        }
        for i in 0..n {
            let s: C64 = (0..v.len()).map(|j| z[(i, k + 1 + j)] * v[j]).sum();
            for j in 0..v.len() {
                z[(i, k + 1 + j)] -= 2.0 * s * v[j].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr / 4.0 - det).sqrt();
    let l1 = tr / 2.0 + disc;
    let l2 = tr / 2.0 - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One shifted QR step on the window `lo..=hi` using Givens rotations.
fn qr_sweep(h: &mut CMatrix, z: &mut CMatrix, lo: usize, hi: usize, mu: C64) {
    let n = h.rows();
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..=hi {
        h[(k, k)] -= mu;
    }
    for k in lo..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let a = h[(k, j)];
            let b = h[(k + 1, j)];
            h[(k, j)] = c * a + s * b;
            h[(k + 1, j)] = -s.conj() * a + c * b;
        }
        rotations.push((c, s));
    }
    for (idx, &(c, s)) in rotations.iter().enumerate() {
        let k = lo + idx;
        for i in 0..=(k + 2).min(hi).max(k + 1) {
            let a = h[(i, k)];
            let b = h[(i, k + 1)];
            h[(i, k)] = a * c + b * s.conj();
            h[(i, k + 1)] = -a * s + b * c;
        }
        for i in 0..n {
            let a = z[(i, k)];
            let b = z[(i, k + 1)];
            z[(i, k)] = a * c + b * s.conj();
            z[(i, k + 1)] = -a * s + b * c;
        }
    }
    for k in lo..=hi {
        h[(k, k)] += mu;
    }
}

/// Rotation `[c s; -s* c]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (C64, C64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        return (ONE, ZERO);
    }
    if a.norm() == 0.0 {
        return (ZERO, b.conj() / b.norm());
    }
    let phase = a / a.norm();
    let c = C64::new(a.norm() / r, 0.0);
    let s = phase * b.conj() / r;
    (c, s)
}

/// Eigenvalues of a square matrix, read from the diagonal of its Schur form.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<C64>> {
    let s = schur(a)?;
    Ok((0..a.rows()).map(|i| s.t[(i, i)]).collect())
}

/// Eigenpairs of a normal matrix; the Schur vectors are the eigenvectors.
///
/// Each eigenvector is normalized with its first non-negligible component real positive.
pub fn eigen_normal(a: &CMatrix) -> Result<Vec<(C64, Vec<C64>)>> {
    let s = schur(a)?;
    let n = a.rows();
    let scale = a.frobenius_norm().max(1.0);
    let off = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .fold(0.0f64, |m, (i, j)| m.max(s.t[(i, j)].norm()));
    if off > 1e-9 * scale {
        return Err(Error::Hypothesis(format!(
            "matrix is not normal (off-diagonal Schur mass {off:e})"
        )));
    }
    Ok((0..n)
        .map(|k| {
            let mut v = s.z.column(k);
            fix_phase(&mut v);
            (s.t[(k, k)], v)
        })
        .collect())
}

/// Rotates `v` so that its first component above `1e-8` is real positive.
pub fn fix_phase(v: &mut [C64]) {
    if let Some(c) = v.iter().find(|c| c.norm() > 1e-8).copied() {
        let p = c.conj() / c.norm();
        v.iter_mut().for_each(|x| *x *= p);
    }
}

/// Largest singular value by power iteration on `A^dagger A`.
pub fn operator_norm(a: &CMatrix) -> Result<f64> {
    if a.rows() > 1024 || a.cols() > 1024 {
        return Err(Error::ResourceLimit(format!(
            "operator norm limited to dimension 1024, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if a.data().iter().all(|&c| c == ZERO) {
        return Ok(0.0);
    }
    let hermitian = a.is_hermitian(0.0);
    let adj = a.adjoint();
    let apply = |v: &[C64]| -> Vec<C64> {
        let w = a.mul_vec(v);
        if hermitian {
            a.mul_vec(&w)
        } else {
            adj.mul_vec(&w)
        }
    };
    const MAX_ITER: usize = 10_000;
    let mut r = rng::seeded(0x5eed);
    let mut residual = f64::INFINITY;
    for _restart in 0..3 {
        let mut v: Vec<C64> = (0..a.cols())
            .map(|_| C64::new(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5))
            .collect();
        let nv = vec_norm(&v);
        v.iter_mut().for_each(|c| *c /= nv);
        let mut lambda = 0.0f64;
        let mut stalled = 0;
        for _ in 0..MAX_ITER {
            let w = apply(&v);
            let next = inner(&v, &w).re;
            let nw = vec_norm(&w);
            if nw == 0.0 {
                break;
            }
            residual = w
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - next * y).norm_sqr())
                .sum::<f64>()
                .sqrt()
                / nw;
            let change = (next - lambda).abs() / next.abs().max(f64::MIN_POSITIVE);
            lambda = next;
            v = w.into_iter().map(|c| c / nw).collect();
            if residual < 1e-12 || change < 1e-15 {
                stalled += 1;
                if stalled >= 3 {
                    return Ok(lambda.max(0.0).sqrt());
                }
            } else {
                stalled = 0;
            }
        }
        // Rayleigh quotients converge quadratically faster than the vector.
        if residual < 1e-6 {
            return Ok(lambda.max(0.0).sqrt());
        }
    }
    Err(Error::NoConvergence {
        iterations: MAX_ITER,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solve_needs_pivoting() {
        let a = CMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(1.0, 0.0)]])
            .unwrap();
        let x = solve(&a, &[c(2.0, 0.0), c(3.0, 0.0)], 1e-12).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_system_is_reported() {
        let a = CMatrix::from_real(2, 2, |i, _| (i + 1) as f64);
        assert!(matches!(solve(&a, &[ONE, ONE], 1e-12), Err(Error::Singular(_))));
    }

    #[test]
    fn schur_of_rotation_has_unit_circle_spectrum() {
        let a = CMatrix::from_real(2, 2, |i, j| match (i, j) {
            (0, 1) => -1.0,
            (1, 0) => 1.0,
            _ => 0.0,
        });
        let mut ev = eigenvalues(&a).unwrap();
        ev.sort_by(|x, y| x.im.total_cmp(&y.im));
        assert!((ev[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((ev[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn schur_reconstructs_random_matrix() {
        let mut r = rng::seeded(3);
        let a = CMatrix::from_fn(6, 6, |_, _| c(r.gen::<f64>() - 0.5, r.gen::<f64>() - 0.5));
        let s = schur(&a).unwrap();
        let back = s.z.mul(&s.t).unwrap().mul(&s.z.adjoint()).unwrap();
        assert!(back.max_abs_diff(&a) < 1e-12);
        for i in 0..6 {
            for j in 0..i {
                assert!(s.t[(i, j)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn operator_norm_of_diagonal() {
        let a = CMatrix::from_real(3, 3, |i, j| if i == j { [1.0, -3.0, 2.0][i] } else { 0.0 });
        assert!((operator_norm(&a).unwrap() - 3.0).abs() < 1e-9);
        assert!((operator_norm(&CMatrix::identity(4)).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_of_rank_one() {
        // u v^T with |u| = sqrt(2), |v| = sqrt(5)
        let u = [1.0, 1.0];
        let v = [1.0, 2.0];
        let a = CMatrix::from_real(2, 2, |i, j| u[i] * v[j]);
        assert!((operator_norm(&a).unwrap() - 10f64.sqrt()).abs() < 1e-9);
    }
}
