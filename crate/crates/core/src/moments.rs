//! Moment sequences, the block Toeplitz Gram matrix, and solvability.
//!
//! A moment sequence is the data S_0, …, S_d of complex N×N matrices.
//! Arranging the blocks S_{i−j} (with S_{−k} = S_kᴴ) into a (d+1)×(d+1)
//! block matrix gives the Gram matrix of the problem; its positive
//! semidefiniteness is equivalent to the existence of a representing
//! measure. Entry-wise, gamma(kN+s, rN+l) = S_{k−r}(s, l), which also
//! makes gamma invariant under the simultaneous index shift n ↦ n+N,
//! m ↦ m+N — the property that turns the coordinate shift into an
//! isometry downstream.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, CMatrix};

/// Input data: block size N, highest index d, and matrices S_0..S_d.
#[derive(Clone, Debug)]
pub struct MomentSequence {
    block_size: usize,
    highest: usize,
    s: Vec<CMatrix>,
}

impl MomentSequence {
    /// Validates the shape invariants: at least two moments (d ≥ 1), all
    /// blocks square of equal size N ≥ 1.
    pub fn new(s: Vec<CMatrix>) -> Result<Self> {
        if s.len() < 2 {
            return Err(Error::InvalidMoments(format!(
                "need at least 2 moment matrices (d >= 1), got {}",
                s.len()
            )));
        }
        let n = s[0].rows();
        if n == 0 {
            return Err(Error::InvalidMoments(
                "matrix size N must be positive".into(),
            ));
        }
        for (idx, m) in s.iter().enumerate() {
            if m.rows() != n || m.cols() != n {
                return Err(Error::InvalidMoments(format!(
                    "moment S[{idx}] is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Self {
            block_size: n,
            highest: s.len() - 1,
            s,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn highest_index(&self) -> usize {
        self.highest
    }

    pub fn moment(&self, k: usize) -> &CMatrix {
        &self.s[k]
    }

    pub fn moments(&self) -> &[CMatrix] {
        &self.s
    }
}

/// The (d+1)N-square Hermitian block Toeplitz matrix of a moment sequence.
#[derive(Clone, Debug)]
pub struct GramMatrix {
    n_total: usize,
    block_size: usize,
    highest: usize,
    gamma: CMatrix,
    min_eigenvalue: OnceLock<f64>,
    form_factor: OnceLock<CMatrix>,
}

impl GramMatrix {
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn highest_index(&self) -> usize {
        self.highest
    }

    /// dN, the dimension cutoff of the shift domain.
    pub fn domain_cutoff(&self) -> usize {
        self.highest * self.block_size
    }

    pub fn gamma(&self) -> &CMatrix {
        &self.gamma
    }

    pub fn entry(&self, n: usize, m: usize) -> crate::linalg::C64 {
        self.gamma[(n, m)]
    }

    pub fn is_zero(&self) -> bool {
        self.gamma.is_zero()
    }

    /// Largest diagonal entry; the natural squared-norm scale of the data.
    pub fn max_diag(&self) -> f64 {
        (0..self.n_total)
            .map(|k| self.gamma[(k, k)].re)
            .fold(0.0, f64::max)
    }

    /// Minimum eigenvalue cached by `check_solvable`.
    pub fn cached_min_eigenvalue(&self) -> Option<f64> {
        self.min_eigenvalue.get().copied()
    }

    /// Factor M with (a, b)_gamma = ⟨Ma, Mb⟩, namely M = D₊^{1/2}·Vᵀ from
    /// gamma = V·D·Vᴴ, eigenvalues below the working-precision floor
    /// clamped to zero. Squared seminorms through the factor are sums of
    /// squares, so a null vector measures ~1e−15·scale where the raw
    /// quadratic form bottoms out at sqrt(ε)·scale — too coarse for rank
    /// decisions at the default tolerance.
    pub fn seminorm_factor(&self) -> Result<&CMatrix> {
        if let Some(f) = self.form_factor.get() {
            return Ok(f);
        }
        let (vals, vecs) = eig_hermitian(&self.gamma)?;
        let lambda_max = vals.last().copied().unwrap_or(0.0).max(0.0);
        let floor = self.n_total as f64 * f64::EPSILON * lambda_max;
        let n = self.n_total;
        let mut factor = CMatrix::zeros(n, n);
        for (k, &d) in vals.iter().enumerate() {
            if d > floor {
                let root = d.sqrt();
                for j in 0..n {
                    factor[(k, j)] = vecs[(j, k)] * root;
                }
            }
        }
        let _ = self.form_factor.set(factor);
        Ok(self.form_factor.get().expect("factor just set"))
    }
}

/// Assemble the Gram matrix: strictly-lower block triangle straight from
/// the data with the upper blocks written as its conjugates (bit-exact
/// Hermitian symmetry there); diagonal blocks carry S_0 verbatim, so a
/// non-Hermitian S_0 stays visible to `check_solvable`.
pub fn build_gram(m: &MomentSequence) -> GramMatrix {
    let n = m.block_size();
    let d = m.highest_index();
    let n_total = (d + 1) * n;
    let mut gamma = CMatrix::zeros(n_total, n_total);
    for k in 0..=d {
        for r in 0..=k {
            let block = m.moment(k - r);
            for s in 0..n {
                for l in 0..n {
                    let row = k * n + s;
                    let col = r * n + l;
                    gamma[(row, col)] = block[(s, l)];
                    if k != r {
                        gamma[(col, row)] = block[(s, l)].conj();
                    }
                }
            }
        }
    }
    GramMatrix {
        n_total,
        block_size: n,
        highest: d,
        gamma,
        min_eigenvalue: OnceLock::new(),
        form_factor: OnceLock::new(),
    }
}

/// Outcome of the positive-semidefiniteness test.
#[derive(Clone, Copy, Debug)]
pub struct Solvability {
    pub solvable: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Decide solvability: the problem has a solution iff the Gram matrix is
/// PSD. The test is relative, λ_min ≥ −tol·max(1, λ_max), so boundary
/// instances coming from rank-deficient measures are not rejected by
/// roundoff.
pub fn check_solvable(g: &GramMatrix, tol: f64) -> Result<Solvability> {
    let scale = g.gamma.max_abs().max(1.0);
    let dev = g.gamma.hermitian_deviation();
    if dev > 1e-12 * scale {
        return Err(Error::InvalidMoments(format!(
            "Gram matrix is not Hermitian (S_0 deviates from self-adjointness by {dev:.3e}); \
             such data cannot be a moment sequence"
        )));
    }
    let (vals, _) = eig_hermitian(&g.gamma)?;
    let min = vals.first().copied().unwrap_or(0.0);
    let max = vals.last().copied().unwrap_or(0.0);
    let _ = g.min_eigenvalue.set(min);
    Ok(Solvability {
        solvable: min >= -tol * max.max(1.0),
        min_eigenvalue: min,
        max_eigenvalue: max,
    })
}
