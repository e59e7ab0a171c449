//! Small dense complex linear algebra.
//!
//! A moment problem with block size N and d+1 moments lives in dimension
//! (d+1)N, so every matrix here is tiny. The routines favour robustness
//! and predictability over asymptotic speed: cyclic Jacobi for Hermitian
//! eigenproblems, partially pivoted LU for solves and determinants, and
//! Householder QR with column pivoting for rank decisions and
//! least-squares residuals.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from explicit rows; panics on ragged input (test/internal use).
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| c64(rows[i][j], 0.0))
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

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// (A + Aᴴ)/2.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// (A − Aᴴ)/(2i); Hermitian whenever A is anything.
    pub fn antihermitian_part(&self) -> Self {
        assert!(self.is_square());
        let half_over_i = c64(0.0, -0.5);
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] - self[(j, i)].conj()) * half_over_i
        })
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[C64]) {
        assert_eq!(col.len(), self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[i];
        }
    }

    /// Contiguous sub-block of size `rows × cols` with top-left corner (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max |a_ij − conj(a_ji)|, zero iff exactly Hermitian.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// Solve A·X = B by partially pivoted LU.
    pub fn solve(&self, rhs: &CMatrix) -> Result<CMatrix> {
        assert!(self.is_square());
        assert_eq!(rhs.rows, self.rows);
        let n = self.rows;
        if n == 0 {
            return Ok(CMatrix::zeros(0, rhs.cols));
        }
        let lu = lu_factor(self);
        if lu.singular {
            return Err(Error::SingularSystem(format!(
                "{n}x{n} system has a vanishing pivot"
            )));
        }
        let mut x = CMatrix::zeros(n, rhs.cols);
        for col in 0..rhs.cols {
            // permuted forward substitution: L·y = P·b
            let mut y = vec![C64::ZERO; n];
            for i in 0..n {
                let mut acc = rhs[(lu.perm[i], col)];
                for (k, yk) in y.iter().enumerate().take(i) {
                    acc -= lu.lu[(i, k)] * yk;
                }
                y[i] = acc;
            }
            // back substitution: U·x = y
            for i in (0..n).rev() {
                let mut acc = y[i];
                for k in i + 1..n {
                    acc -= lu.lu[(i, k)] * x[(k, col)];
                }
                x[(i, col)] = acc / lu.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        self.solve(&CMatrix::identity(self.rows))
    }

    /// Determinant via LU; small values are returned as-is, never an error.
    pub fn determinant(&self) -> C64 {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return C64::ONE;
        }
        let lu = lu_factor(self);
        let mut det = c64(lu.sign, 0.0);
        for i in 0..n {
            det *= lu.lu[(i, i)];
        }
        det
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] + other[(i, j)])
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)] - other[(i, j)])
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "dimension mismatch in matrix product"
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

struct LuFactors {
    lu: CMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

fn lu_factor(a: &CMatrix) -> LuFactors {
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut singular = false;
    let scale = a.max_abs();
    let pivot_floor = scale * (n.max(1) as f64) * f64::EPSILON;
    for k in 0..n {
        let (mut imax, mut vmax) = (k, lu[(k, k)].norm());
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > vmax {
                imax = i;
                vmax = v;
            }
        }
        if vmax <= pivot_floor {
            singular = true;
        }
        if imax != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(imax, j)];
                lu[(imax, j)] = tmp;
            }
            perm.swap(k, imax);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        if pivot.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in k + 1..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }
    LuFactors {
        lu,
        perm,
        sign,
        singular,
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order and matching orthonormal
/// eigenvector columns, so `a ≈ v · diag(vals) · vᴴ`. The input is
/// symmetrized first, so roundoff-level Hermitian deviations are tolerated.
pub fn eig_hermitian(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let mut m = a.hermitian_part();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&m) <= 1e-14 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let phc = phase.conj();
                // columns: M ← M·J with J = [[c, s], [−s·e^{−iφ}, c·e^{−iφ}]] on (p,q)
                for i in 0..n {
                    let xp = m[(i, p)];
                    let xq = m[(i, q)];
                    m[(i, p)] = xp * c - xq * (phc * s);
                    m[(i, q)] = xp * s + xq * (phc * c);
                }
                // rows: M ← Jᴴ·M
                for j in 0..n {
                    let rp = m[(p, j)];
                    let rq = m[(q, j)];
                    m[(p, j)] = rp * c - rq * (phase * s);
                    m[(q, j)] = rp * s + rq * (phase * c);
                }
                m[(p, q)] = C64::ZERO;
                m[(q, p)] = C64::ZERO;
                m[(p, p)] = c64(m[(p, p)].re, 0.0);
                m[(q, q)] = c64(m[(q, q)].re, 0.0);
                // accumulate eigenvectors: V ← V·J
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = vp * c - vq * (phc * s);
                    v[(i, q)] = vp * s + vq * (phc * c);
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&m) > 1e-12 * scale {
        return Err(Error::EigenFailure(format!(
            "Jacobi sweep limit reached on a {n}x{n} Hermitian matrix"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.partial_cmp(&m[(j, j)].re).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vecs = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        vecs.set_column(dst, &col);
    }
    Ok((vals, vecs))
}

/// Eigendecomposition of a unitary (or any normal) matrix.
///
/// The Hermitian part H = (U+Uᴴ)/2 and the anti-Hermitian part
/// K = (U−Uᴴ)/(2i) commute exactly when U is normal, so a joint eigenbasis
/// exists: diagonalize H, then diagonalize K restricted to each H
/// eigenspace. Eigenvalues are recovered as Rayleigh quotients vᴴUv.
pub fn eig_unitary(u: &CMatrix) -> Result<(Vec<C64>, CMatrix)> {
    assert!(u.is_square());
    let n = u.rows();
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let h = u.hermitian_part();
    let k = u.antihermitian_part();
    let (hvals, mut v) = eig_hermitian(&h)?;
    let cluster_tol = 1e-9 * hvals.iter().fold(1.0f64, |m, &x| m.max(x.abs()));

    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && hvals[end] - hvals[end - 1] <= cluster_tol {
            end += 1;
        }
        let width = end - start;
        if width > 1 {
            let vc = v.block(0, start, n, width);
            let kc = (&vc.adjoint() * &(&k * &vc)).hermitian_part();
            let (_, w) = eig_hermitian(&kc)?;
            let refined = &vc * &w;
            for j in 0..width {
                let col = refined.column(j);
                v.set_column(start + j, &col);
            }
        }
        start = end;
    }

    let mut vals = Vec::with_capacity(n);
    let mut max_residual: f64 = 0.0;
    for j in 0..n {
        let col = v.column(j);
        let image = u.mul_vec(&col);
        let lambda: C64 = col.iter().zip(&image).map(|(vi, ui)| vi.conj() * ui).sum();
        let residual = image
            .iter()
            .zip(&col)
            .map(|(ui, vi)| (ui - lambda * vi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        max_residual = max_residual.max(residual);
        vals.push(lambda);
    }
    let scale = u.frobenius_norm().max(1.0);
    if max_residual > 1e-7 * scale {
        return Err(Error::EigenFailure(format!(
            "normal eigenproblem did not decouple (residual {max_residual:.3e}); matrix is not normal enough"
        )));
    }
    Ok((vals, v))
}

/// Least-squares residual min_x ‖a·x − b‖₂ via Householder QR with column
/// pivoting. `rank_tol` is the relative cutoff on the R diagonal deciding the
/// numerical rank; components of b past the rank count toward the residual.
pub fn lstsq_residual(a: &CMatrix, b: &[C64], rank_tol: f64) -> f64 {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(b.len(), m);
    if m == 0 {
        return 0.0;
    }
    let mut r = a.clone();
    let mut rhs = b.to_vec();
    let steps = m.min(n);
    let mut diag = Vec::with_capacity(steps);
    for k in 0..steps {
        // pivot: column of largest remaining norm
        let (mut jmax, mut nmax) = (k, -1.0);
        for j in k..n {
            let norm: f64 = (k..m).map(|i| r[(i, j)].norm_sqr()).sum();
            if norm > nmax {
                jmax = j;
                nmax = norm;
            }
        }
        if jmax != k {
            for i in 0..m {
                let tmp = r[(i, k)];
                r[(i, k)] = r[(i, jmax)];
                r[(i, jmax)] = tmp;
            }
        }
        // Householder reflector annihilating column k below the diagonal
        let norm_x: f64 = (k..m).map(|i| r[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm_x == 0.0 {
            diag.push(0.0);
            continue;
        }
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            C64::ONE
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * norm_x;
        let mut vvec = vec![C64::ZERO; m - k];
        for i in k..m {
            vvec[i - k] = r[(i, k)];
        }
        vvec[0] -= alpha;
        let vnorm_sqr: f64 = vvec.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sqr > 0.0 {
            let beta = 2.0 / vnorm_sqr;
            for j in k..n {
                let dot: C64 = (k..m).map(|i| vvec[i - k].conj() * r[(i, j)]).sum();
                let coeff = dot * beta;
                for i in k..m {
                    let sub = vvec[i - k] * coeff;
                    r[(i, j)] -= sub;
                }
            }
            let dot: C64 = (k..m).map(|i| vvec[i - k].conj() * rhs[i]).sum();
            let coeff = dot * beta;
            for i in k..m {
                rhs[i] -= vvec[i - k] * coeff;
            }
        }
        r[(k, k)] = alpha;
        diag.push(alpha.norm());
    }
    let lead = diag.first().copied().unwrap_or(0.0);
    let mut rank = 0;
    for &d in &diag {
        if d > rank_tol * lead {
            rank += 1;
        } else {
            break;
        }
    }
    rhs[rank..].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest singular value, via the Hermitian eigenproblem of AᴴA.
pub fn spectral_norm(a: &CMatrix) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    let gram = &a.adjoint() * a;
    let (vals, _) = eig_hermitian(&gram)?;
    Ok(vals.last().copied().unwrap_or(0.0).max(0.0).sqrt())
}
