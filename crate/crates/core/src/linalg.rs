//! Small dense complex matrices: LU with partial pivoting, Hessenberg
//! reduction and shifted QR for the eigenvalues of non-Hermitian matrices.
//!
//! Sized for effective Hamiltonians and companion matrices (tens of rows),
//! not for large problems.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result, C64};

/// Largest dimension accepted by [`ComplexMatrix::eigenvalues`].
pub const MAX_EIGEN_DIM: usize = 64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length as the
    /// number of rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n, "vector length must match matrix dimension");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// `self - shift * I`.
    pub fn shifted(&self, shift: C64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] -= shift;
        }
        m
    }

    pub fn lu(&self) -> Lu {
        Lu::new(self.clone())
    }

    /// `ln |det A|`, or `-inf` when a pivot vanishes exactly.
    pub fn log_abs_det(&self) -> f64 {
        self.lu().log_abs_det()
    }

    /// All eigenvalues, via Householder reduction to upper Hessenberg form
    /// followed by single-shift QR with Wilkinson shifts and deflation.
    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        if self.n > MAX_EIGEN_DIM {
            return Err(Error::InvalidParameter("dense eigensolver limited to 64x64"));
        }
        let mut h = self.clone();
        h.reduce_to_hessenberg();
        h.hessenberg_qr_eigenvalues()
    }

    /// Eigenvector for an eigenvalue estimate by inverse iteration.
    ///
    /// The result is scaled so that component `anchor` equals one; if that
    /// component is negligible the vector is left at unit norm.
    pub fn eigenvector(&self, eigenvalue: C64, iterations: usize, anchor: usize) -> Vec<C64> {
        let n = self.n;
        let scale = self.norm().max(f64::MIN_POSITIVE);
        // Perturb the shift slightly so that the factorisation stays regular
        // when the eigenvalue is exact to working precision.
        let shift = eigenvalue + C64::new(scale * 1e-14, scale * 1e-14);
        let lu = self.shifted(shift).lu();
        let mut v: Vec<C64> = (0..n).map(|i| C64::new(1.0, 0.1 * i as f64 / n as f64)).collect();
        for _ in 0..iterations.max(1) {
            v = lu.solve(&v);
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.0 && norm.is_finite() {
                v.iter_mut().for_each(|z| *z /= norm);
            }
        }
        let pivot = v.get(anchor).copied().unwrap_or(ZERO);
        let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if pivot.norm() > 1e-8 * largest {
            v.iter_mut().for_each(|z| *z /= pivot);
        }
        v
    }

    fn reduce_to_hessenberg(&mut self) {
        let n = self.n;
        if n < 3 {
            return;
        }
        for k in 0..n - 2 {
            let alpha_sq: f64 = (k + 1..n).map(|i| self[(i, k)].norm_sqr()).sum();
            let alpha = alpha_sq.sqrt();
            if alpha == 0.0 {
                continue;
            }
            let x0 = self[(k + 1, k)];
            let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
            // v = x + phase * |x| e_1 avoids cancellation.
            let mut v: Vec<C64> = (k + 1..n).map(|i| self[(i, k)]).collect();
            v[0] += phase * alpha;
            let v_norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if v_norm_sq == 0.0 {
                continue;
            }
            let beta = 2.0 / v_norm_sq;
            // A <- (I - beta v v^H) A
            for j in 0..n {
                let dot: C64 = (k + 1..n).map(|i| v[i - k - 1].conj() * self[(i, j)]).sum();
                let s = dot * beta;
                for i in k + 1..n {
                    let delta = v[i - k - 1] * s;
                    self[(i, j)] -= delta;
                }
            }
            // A <- A (I - beta v v^H)
            for i in 0..n {
                let dot: C64 = (k + 1..n).map(|j| self[(i, j)] * v[j - k - 1]).sum();
                let s = dot * beta;
                for j in k + 1..n {
                    let delta = s * v[j - k - 1].conj();
                    self[(i, j)] -= delta;
                }
            }
            for i in k + 2..n {
                self[(i, k)] = ZERO;
            }
        }
    }

    fn hessenberg_qr_eigenvalues(mut self) -> Result<Vec<C64>> {
        let n = self.n;
        let mut eig = vec![ZERO; n];
        if n == 0 {
            return Ok(eig);
        }
        let eps = f64::EPSILON;
        let max_sweeps = 60 * n.max(2);
        let mut hi = n - 1;
        let mut sweeps_since_deflation = 0usize;
        let mut total = 0usize;
        loop {
            if hi == 0 {
                eig[0] = self[(0, 0)];
                break;
            }
            // locate the active unreduced block [lo, hi]
            let mut lo = hi;
            while lo > 0 {
                let sub = self[(lo, lo - 1)].norm();
                let diag = self[(lo - 1, lo - 1)].norm() + self[(lo, lo)].norm();
                let floor = if diag == 0.0 { self.norm() * eps } else { diag * eps };
                if sub <= floor {
                    self[(lo, lo - 1)] = ZERO;
                    break;
                }
                lo -= 1;
            }
            if lo == hi {
                eig[hi] = self[(hi, hi)];
                hi -= 1;
                sweeps_since_deflation = 0;
                continue;
            }
            total += 1;
            sweeps_since_deflation += 1;
            if total > max_sweeps {
                return Err(Error::NoConvergenceQr(n));
            }
            let shift = if sweeps_since_deflation.is_multiple_of(11) {
                // exceptional shift to break stagnation
                self[(hi, hi)] + C64::new(0.75 * self[(hi, hi - 1)].norm(), 0.0)
            } else {
                wilkinson_shift(
                    self[(hi - 1, hi - 1)],
                    self[(hi - 1, hi)],
                    self[(hi, hi - 1)],
                    self[(hi, hi)],
                )
            };
            self.qr_sweep(lo, hi, shift);
        }
        Ok(eig)
    }

    /// One explicit-shift QR step restricted to the block `[lo, hi]`.
    fn qr_sweep(&mut self, lo: usize, hi: usize, shift: C64) {
        for i in lo..=hi {
            self[(i, i)] -= shift;
        }
        let mut rotations: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(self[(k, k)], self[(k + 1, k)]);
            for j in k..=hi {
                let x = self[(k, j)];
                let y = self[(k + 1, j)];
                self[(k, j)] = x * c + s * y;
                self[(k + 1, j)] = -s.conj() * x + y * c;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let k = lo + offset;
            let last = (k + 2).min(hi);
            for i in lo..=last {
                let x = self[(i, k)];
                let y = self[(i, k + 1)];
                self[(i, k)] = x * c + y * s.conj();
                self[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            self[(i, i)] += shift;
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.n + j]
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(a, b)` to `(r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let b_norm = b.norm();
    if b_norm == 0.0 {
        return (1.0, ZERO);
    }
    let a_norm = a.norm();
    if a_norm == 0.0 {
        return (0.0, ONE);
    }
    let rho = a_norm.hypot(b_norm);
    let c = a_norm / rho;
    let s = (a / a_norm) * b.conj() / rho;
    (c, s)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half_trace = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_trace * half_trace - det).sqrt();
    let l1 = half_trace + disc;
    let l2 = half_trace - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// LU factorisation with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    sign_flips: usize,
    singular: bool,
}

impl Lu {
    fn new(mut a: ComplexMatrix) -> Self {
        let n = a.n;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        let mut singular = false;
        for k in 0..n {
            let (p, max) = (k..n)
                .map(|i| (i, a[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if max == 0.0 {
                singular = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign_flips += 1;
            }
            let pivot = a[(k, k)];
            for i in k + 1..n {
                let factor = a[(i, k)] / pivot;
                a[(i, k)] = factor;
                for j in k + 1..n {
                    let delta = factor * a[(k, j)];
                    a[(i, j)] -= delta;
                }
            }
        }
        Self {
            lu: a,
            perm,
            sign_flips,
            singular,
        }
    }

    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn log_abs_det(&self) -> f64 {
        if self.singular {
            return f64::NEG_INFINITY;
        }
        (0..self.lu.n).map(|i| self.lu[(i, i)].norm().ln()).sum()
    }

    pub fn det(&self) -> C64 {
        if self.singular {
            return ZERO;
        }
        let prod: C64 = (0..self.lu.n).map(|i| self.lu[(i, i)]).product();
        if self.sign_flips % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// Solves `A x = b`. Zero pivots are replaced by a tiny value so that
    /// inverse iteration at an exact eigenvalue still yields a direction.
    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.n;
        let tiny = self.lu.norm().max(1.0) * f64::EPSILON * 1e-3;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * x[j];
            }
            let mut pivot = self.lu[(i, i)];
            if pivot.norm() == 0.0 {
                pivot = C64::new(tiny, 0.0);
            }
            x[i] = acc / pivot;
        }
        x
    }
}
