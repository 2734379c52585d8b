//! Minimal dense complex linear algebra.
//!
//! Square matrices are stored row-major as `Vec<C64>`. The only
//! decompositions are a cyclic complex Jacobi eigensolver for small Hermitian
//! matrices and a Sturm-bisection/inverse-iteration path for the lowest
//! eigenpair of a real symmetric tridiagonal matrix.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense square complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    n: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Build from row-major real entries; panics if `rows` is not square.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix rows must be square");
        Self::from_fn(n, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|&z| z * s).collect() }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.n, v.len(), "mat_vec dimension mismatch");
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
            .collect()
    }

    /// Kronecker product `self ⊗ other`; `self` indexes the slow digits.
    pub fn kron(&self, other: &Self) -> Self {
        let (n, m) = (self.n, other.n);
        Self::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }
}

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq`, then applies
/// the real symmetric Jacobi rotation that annihilates it. Converges
/// quadratically; intended for `D ≲ 100`.
pub fn hermitian_eigensolve(a: &Matrix) -> Result<Eigen> {
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    let herr = a.hermiticity_error();
    if herr > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(herr));
    }
    let n = a.dim();
    // Symmetrize so round-off in the input cannot bias the diagonal.
    let mut m = Matrix::from_fn(n, |i, j| {
        if i == j {
            C64::new(a.get(i, i).re, 0.0)
        } else {
            (a.get(i, j) + a.get(j, i).conj()) * 0.5
        }
    });
    let mut v = Matrix::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.get(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let r = apq.norm();
                if r <= 1e-300 || r <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / r;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let t = if tau == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U restricted to (p, q): [[c, s], [-s·conj(phase), c·conj(phase)]]
                let upp = C64::new(c, 0.0);
                let upq = C64::new(s, 0.0);
                let uqp = -phase.conj() * s;
                let uqq = phase.conj() * c;
                for k in 0..n {
                    let mkp = m.get(k, p);
                    let mkq = m.get(k, q);
                    m.set(k, p, mkp * upp + mkq * uqp);
                    m.set(k, q, mkp * upq + mkq * uqq);
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * upp + vkq * uqp);
                    v.set(k, q, vkp * upq + vkq * uqq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k);
                    let mqk = m.get(q, k);
                    m.set(p, k, upp.conj() * mpk + uqp.conj() * mqk);
                    m.set(q, k, upq.conj() * mpk + uqq.conj() * mqk);
                }
                m.set(p, q, ZERO);
                m.set(q, p, ZERO);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re));
    let values = order.iter().map(|&i| m.get(i, i).re).collect();
    let vectors = Matrix::from_fn(n, |i, j| v.get(i, order[j]));
    Ok(Eigen { values, vectors })
}

/// Real symmetric tridiagonal matrix: `diag` has length `n`, `off` has
/// length `n − 1` and holds the (i, i+1) couplings.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty(), "tridiagonal matrix must be non-empty");
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal length must be n - 1");
        Self { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn to_matrix(&self) -> Matrix {
        let n = self.dim();
        Matrix::from_fn(n, |i, j| {
            let v = if i == j {
                self.diag[i]
            } else if j == i + 1 {
                self.off[i]
            } else if i == j + 1 {
                self.off[j]
            } else {
                0.0
            };
            C64::new(v, 0.0)
        })
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / q };
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Lowest eigenvalue by bisection to round-off.
    pub fn lowest_eigenvalue(&self) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(1e-300);
        while hi - lo > 4.0 * f64::EPSILON * scale {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest eigenpair; the eigenvector is normalized with its
    /// largest-magnitude component positive.
    pub fn lowest_eigenpair(&self) -> (f64, Vec<f64>) {
        let n = self.dim();
        let lambda = self.lowest_eigenvalue();
        if n == 1 {
            return (lambda, vec![1.0]);
        }
        let (glo, ghi) = self.gershgorin();
        let scale = glo.abs().max(ghi.abs()).max(1e-300);
        // Shifting just below the lowest eigenvalue keeps T − σ positive
        // definite, so the unpivoted LDLᵀ solve is stable.
        let sigma = lambda - 1e-12 * scale;
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * (i as f64 % 7.0)).collect();
        normalize_real(&mut v);
        for _ in 0..20 {
            let mut w = solve_shifted(self, sigma, &v);
            normalize_real(&mut w);
            let overlap: f64 = w.iter().zip(&v).map(|(a, b)| a * b).sum();
            if overlap < 0.0 {
                w.iter_mut().for_each(|x| *x = -*x);
            }
            let delta = w.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            v = w;
            if delta < 1e-15 {
                break;
            }
        }
        fix_sign(&mut v);
        (lambda, v)
    }
}

fn solve_shifted(t: &SymTridiagonal, sigma: f64, rhs: &[f64]) -> Vec<f64> {
    let n = t.dim();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut denom = t.diag[0] - sigma;
    if denom == 0.0 {
        denom = f64::MIN_POSITIVE;
    }
    c[0] = if n > 1 { t.off[0] / denom } else { 0.0 };
    d[0] = rhs[0] / denom;
    for i in 1..n {
        let mut den = t.diag[i] - sigma - t.off[i - 1] * c[i - 1];
        if den == 0.0 {
            den = f64::MIN_POSITIVE;
        }
        c[i] = if i + 1 < n { t.off[i] / den } else { 0.0 };
        d[i] = (rhs[i] - t.off[i - 1] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

fn normalize_real(v: &mut [f64]) {
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm > 0.0 {
        v.iter_mut().for_each(|x| *x /= nrm);
    }
}

fn fix_sign(v: &mut [f64]) {
    let max = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    // Ties resolve to the last index so the convention is deterministic.
    let best = v
        .iter()
        .rposition(|x| x.abs() >= max * (1.0 - 1e-9))
        .unwrap_or(0);
    if v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn diagonal_eigenvalues_sorted() {
        let e = hermitian_eigensolve(&Matrix::from_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let sx = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = hermitian_eigensolve(&sx).unwrap();
        assert_close(e.values[0], -1.0, 1e-14);
        assert_close(e.values[1], 1.0, 1e-14);
    }

    #[test]
    fn path_graph_spectrum() {
        // det(λ − A) = λ³ − 2λ, roots 0, ±√2.
        let a = Matrix::from_real_rows(&[&[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0]]);
        let e = hermitian_eigensolve(&a).unwrap();
        let s2 = 2f64.sqrt();
        for (got, want) in e.values.iter().zip([-s2, 0.0, s2]) {
            assert_close(*got, want, 1e-13);
        }
        let t = SymTridiagonal::new(vec![0.0; 3], vec![1.0, 1.0]);
        assert_close(t.lowest_eigenvalue(), -s2, 1e-14);
        assert_eq!(t.count_below(0.5), 2);
    }

    #[test]
    fn complex_hermitian_residual() {
        let a = Matrix::from_fn(3, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(-0.5, 0.0),
            (2, 2) => C64::new(2.0, 0.0),
            (0, 1) => C64::new(0.3, 0.7),
            (1, 0) => C64::new(0.3, -0.7),
            (1, 2) => C64::new(0.0, -1.1),
            (2, 1) => C64::new(0.0, 1.1),
            _ => ZERO,
        });
        let e = hermitian_eigensolve(&a).unwrap();
        for k in 0..3 {
            let v = e.vector(k);
            let av = a.mat_vec(&v);
            let res: f64 = av
                .iter()
                .zip(&v)
                .map(|(x, y)| (x - y * e.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res < 1e-12, "residual {res}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let a = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(hermitian_eigensolve(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn tridiagonal_pair_matches_jacobi() {
        let t = SymTridiagonal::new(vec![2.0, -1.0, 0.5, 3.0], vec![0.7, -1.2, 0.4]);
        let (lam, v) = t.lowest_eigenpair();
        let e = hermitian_eigensolve(&t.to_matrix()).unwrap();
        assert_close(lam, e.values[0], 1e-13);
        let tv = t.mat_vec(&v);
        for (a, b) in tv.iter().zip(&v) {
            assert_close(*a, lam * b, 1e-12);
        }
    }

    #[test]
    fn kron_orders_slow_index_first() {
        let z = Matrix::from_diag(&[1.0, -1.0]);
        let id = Matrix::identity(2);
        let k = z.kron(&id);
        let diag: Vec<f64> = (0..4).map(|i| k.get(i, i).re).collect();
        assert_eq!(diag, vec![1.0, 1.0, -1.0, -1.0]);
    }
}
