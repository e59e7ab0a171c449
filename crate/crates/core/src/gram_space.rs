//! The finite-dimensional quasi-Hilbert space of a moment sequence.
//!
//! Coordinates live over the spanning family x_0, …, x_{(d+1)N−1}, whose
//! pairwise products are exactly the Gram matrix entries:
//! (x_n, x_m) = gamma(n, m). The form is positive semidefinite but usually
//! degenerate, so orthonormalization must skip zero-residual steps; the
//! surviving index sets, not just the vectors, carry meaning:
//!
//! * Ω₁ — indices accepted by the first pass over x_0..x_{(d+1)N−1};
//!   ρ of them fall in the leading block (a basis of L_N), τ of them below
//!   the domain cutoff dN (a basis of the shift domain), and the remaining
//!   δ = |Ω₁| − τ span the domain defect.
//! * Ω₂ — indices accepted by the second pass, which completes the image
//!   basis {A·u_k} with δ range-defect vectors.
//!
//! The shift A maps coordinates up by one block of N; block-Toeplitz
//! structure of gamma makes it an isometry on its domain.

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::moments::GramMatrix;

/// Coordinate vector over the spanning family x_0..x_{(d+1)N−1}. Two
/// vectors whose difference has zero seminorm represent the same element
/// of the quotient space.
#[derive(Clone, Debug, PartialEq)]
pub struct HVector {
    coeffs: Vec<C64>,
}

impl HVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            coeffs: vec![C64::ZERO; len],
        }
    }

    /// The coordinate vector of x_j.
    pub fn basis(len: usize, j: usize) -> Self {
        assert!(j < len);
        let mut v = Self::zeros(len);
        v.coeffs[j] = C64::ONE;
        v
    }

    pub fn from_coeffs(coeffs: Vec<C64>) -> Self {
        Self { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> C64 {
        self.coeffs[k]
    }

    /// self ← self − c·other.
    pub fn sub_scaled(&mut self, c: C64, other: &HVector) {
        assert_eq!(self.len(), other.len());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a -= c * b;
        }
    }

    pub fn scaled(&self, c: C64) -> HVector {
        HVector {
            coeffs: self.coeffs.iter().map(|&z| z * c).collect(),
        }
    }
}

/// The degenerate inner product Σ a_n·conj(b_r)·gamma(n, r).
pub fn inner(a: &HVector, b: &HVector, g: &GramMatrix) -> C64 {
    let n = g.n_total();
    assert_eq!(a.len(), n);
    assert_eq!(b.len(), n);
    let mut acc = C64::ZERO;
    for r in 0..n {
        let br = b.coeffs[r];
        if br.re == 0.0 && br.im == 0.0 {
            continue;
        }
        let mut col = C64::ZERO;
        for k in 0..n {
            let ak = a.coeffs[k];
            if ak.re != 0.0 || ak.im != 0.0 {
                col += ak * g.entry(k, r);
            }
        }
        acc += col * br.conj();
    }
    acc
}

/// Seminorm of `a`, evaluated through the PSD factor of the Gram matrix
/// as a cancellation-free sum of squares. The raw quadratic form would
/// measure a null vector at ~sqrt(ε)·scale, which sits exactly at the
/// default rank threshold; through the factor it measures ~1e−15·scale.
pub fn seminorm(a: &HVector, g: &GramMatrix) -> Result<f64> {
    let factor = g.seminorm_factor()?;
    let mapped = factor.mul_vec(a.coeffs());
    Ok(mapped.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
}

/// The shift x_k ↦ x_{k+N}, defined on vectors supported below the domain
/// cutoff dN.
pub fn apply_shift(a: &HVector, block_size: usize) -> Result<HVector> {
    let len = a.len();
    let cutoff = len - block_size;
    for k in cutoff..len {
        let mag = a.coeffs[k].norm();
        if mag > 1e-12 {
            return Err(Error::DomainViolation {
                index: k,
                magnitude: mag,
            });
        }
    }
    let mut out = HVector::zeros(len);
    for k in 0..cutoff {
        out.coeffs[k + block_size] = a.coeffs[k];
    }
    Ok(out)
}

/// A rejected (or barely accepted) orthonormalization step whose residual
/// was within a factor of 10 of the rank threshold; such instances may
/// flip their defect count under a different tolerance.
#[derive(Clone, Copy, Debug)]
pub struct ThresholdFlag {
    /// 1 for the first pass, 2 for the second.
    pub pass: u8,
    pub index: usize,
    pub residual: f64,
    pub threshold: f64,
    pub accepted: bool,
}

/// The two orthonormal bases and the dimensions they carry.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    /// First-pass basis, in construction order: u_0..u_{τ+δ−1}.
    pub u: Vec<HVector>,
    /// Indices surviving the first pass.
    pub omega1: Vec<usize>,
    pub rho: usize,
    pub tau: usize,
    pub delta: usize,
    /// Second basis: v_k = A·u_k for k < τ, then the δ accepted
    /// defect vectors.
    pub v: Vec<HVector>,
    /// Indices (into u_0..u_{ρ−1}) surviving the second pass.
    pub omega2: Vec<usize>,
    /// Near-threshold diagnostics from both passes.
    pub flags: Vec<ThresholdFlag>,
}

impl OrthonormalBasis {
    fn trivial() -> Self {
        Self {
            u: Vec::new(),
            omega1: Vec::new(),
            rho: 0,
            tau: 0,
            delta: 0,
            v: Vec::new(),
            omega2: Vec::new(),
            flags: Vec::new(),
        }
    }
}

/// Residual of `target` against `basis` under the degenerate form, with one
/// reorthogonalization pass: single-pass projections lose orthogonality
/// when the form is semidefinite.
fn orthogonal_residual(target: &HVector, basis: &[&HVector], g: &GramMatrix) -> HVector {
    let mut r = target.clone();
    for _ in 0..2 {
        for y in basis {
            let c = inner(&r, y, g);
            r.sub_scaled(c, y);
        }
    }
    r
}

/// First orthonormalization pass over x_0..x_{(d+1)N−1}.
///
/// A step is accepted when its residual seminorm exceeds
/// rank_tol·sqrt(max_k gamma(k, k)); the output contains the accepted
/// vectors in construction order together with Ω₁ and the dimensions
/// (ρ, τ, δ). A zero Gram matrix yields the trivial basis.
pub fn orthonormalize_primary(g: &GramMatrix, rank_tol: f64) -> Result<OrthonormalBasis> {
    if g.is_zero() {
        return Ok(OrthonormalBasis::trivial());
    }
    let n_total = g.n_total();
    let block = g.block_size();
    let cutoff = g.domain_cutoff();
    let max_diag = g.max_diag();
    if max_diag <= 0.0 {
        // nonzero gamma with an all-zero diagonal cannot be PSD
        return Err(Error::EmptyBasis);
    }
    let threshold = rank_tol * max_diag.sqrt();

    let mut u: Vec<HVector> = Vec::new();
    let mut omega1: Vec<usize> = Vec::new();
    let mut flags: Vec<ThresholdFlag> = Vec::new();
    for j in 0..n_total {
        let x_j = HVector::basis(n_total, j);
        let held: Vec<&HVector> = u.iter().collect();
        let r = orthogonal_residual(&x_j, &held, g);
        let norm = seminorm(&r, g)?;
        let accepted = norm > threshold;
        if norm > threshold / 10.0 && norm < threshold * 10.0 {
            flags.push(ThresholdFlag {
                pass: 1,
                index: j,
                residual: norm,
                threshold,
                accepted,
            });
        }
        if accepted {
            u.push(r.scaled(C64::ONE / norm));
            omega1.push(j);
        }
    }
    let rho = omega1.iter().filter(|&&j| j < block).count();
    let tau = omega1.iter().filter(|&&j| j < cutoff).count();
    let delta = omega1.len() - tau;
    if rho == 0 {
        return Err(Error::EmptyBasis);
    }
    Ok(OrthonormalBasis {
        u,
        omega1,
        rho,
        tau,
        delta,
        v: Vec::new(),
        omega2: Vec::new(),
        flags,
    })
}

/// Second orthonormalization pass: sets v_k = A·u_k for k < τ, then
/// orthonormalizes u_0..u_{ρ−1} against them, appending the accepted
/// residuals. The count of accepted vectors must reproduce δ; otherwise
/// the rank tolerance misclassified a step and the mismatch is an error
/// rather than a silent corruption.
pub fn orthonormalize_secondary(
    mut basis: OrthonormalBasis,
    g: &GramMatrix,
    rank_tol: f64,
) -> Result<OrthonormalBasis> {
    let block = g.block_size();
    let threshold = rank_tol * g.max_diag().sqrt();

    let mut v: Vec<HVector> = Vec::with_capacity(basis.tau + basis.delta);
    for k in 0..basis.tau {
        v.push(apply_shift(&basis.u[k], block)?);
    }
    let mut omega2: Vec<usize> = Vec::new();
    for j in 0..basis.rho {
        let held: Vec<&HVector> = v.iter().collect();
        let r = orthogonal_residual(&basis.u[j], &held, g);
        let norm = seminorm(&r, g)?;
        let accepted = norm > threshold;
        if norm > threshold / 10.0 && norm < threshold * 10.0 {
            basis.flags.push(ThresholdFlag {
                pass: 2,
                index: j,
                residual: norm,
                threshold,
                accepted,
            });
        }
        if accepted {
            v.push(r.scaled(C64::ONE / norm));
            omega2.push(j);
        }
    }
    if omega2.len() != basis.delta {
        return Err(Error::DefectMismatch {
            expected: basis.delta,
            accepted: omega2.len(),
        });
    }
    basis.v = v;
    basis.omega2 = omega2;
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, CMatrix};
    use crate::moments::{build_gram, tests::fixture_moments, MomentSequence};

    fn fixture_gram() -> GramMatrix {
        build_gram(&fixture_moments())
    }

    fn assert_close(a: &HVector, b: &HVector, tol: f64) {
        assert_eq!(a.len(), b.len());
        let diff = a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0f64, f64::max);
        assert!(diff < tol, "vectors differ by {diff:e}");
    }

    #[test]
    fn inner_products_match_gamma() {
        let g = fixture_gram();
        let e0 = HVector::basis(6, 0);
        assert!((inner(&e0, &e0, &g) - C64::ONE).norm() == 0.0);
        // x_1 − x_0 is a null vector of the fixture.
        let mut diff = HVector::basis(6, 1);
        diff.sub_scaled(C64::ONE, &e0);
        assert!(inner(&diff, &diff, &g).norm() == 0.0);
    }

    #[test]
    fn inner_reduces_to_euclidean_for_identity_gram() {
        let m = MomentSequence::new(vec![CMatrix::identity(2), CMatrix::zeros(2, 2)]).unwrap();
        let g = build_gram(&m); // 4×4 identity
        let mut rng = crate::rng::SplitMix64::new(2);
        let a = HVector::from_coeffs((0..4).map(|_| rng.complex()).collect());
        let b = HVector::from_coeffs((0..4).map(|_| rng.complex()).collect());
        let euclid: C64 = a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .map(|(x, y)| x * y.conj())
            .sum();
        assert!((inner(&a, &b, &g) - euclid).norm() < 1e-14);
    }

    #[test]
    fn shift_moves_basis_vectors_by_one_block() {
        let e0 = HVector::basis(6, 0);
        let shifted = apply_shift(&e0, 3).unwrap();
        assert_eq!(shifted, HVector::basis(6, 3));
    }

    #[test]
    fn shift_rejects_vectors_outside_domain() {
        let e5 = HVector::basis(6, 5);
        assert!(matches!(
            apply_shift(&e5, 3),
            Err(Error::DomainViolation { index: 5, .. })
        ));
    }

    #[test]
    fn shift_preserves_seminorm_on_domain() {
        // gamma built from an actual measure is PSD and block-Toeplitz, so
        // the shift must be isometric on its domain.
        let mut rng = crate::rng::SplitMix64::new(8);
        let n = 2;
        let d = 2;
        // random PSD-generating moments: S_k = Σ_p e^{ikt_p}·G_p·G_pᴴ
        let atoms: Vec<(f64, CMatrix)> = (0..5)
            .map(|_| {
                let gm = rng.matrix(n, 2);
                (rng.range(0.0, std::f64::consts::TAU), &gm * &gm.adjoint())
            })
            .collect();
        let s: Vec<CMatrix> = (0..=d)
            .map(|k| {
                let mut acc = CMatrix::zeros(n, n);
                for (t, mass) in &atoms {
                    let phase = c64((k as f64 * t).cos(), (k as f64 * t).sin());
                    acc = &acc + &mass.scaled(phase);
                }
                acc
            })
            .collect();
        let g = build_gram(&MomentSequence::new(s).unwrap());
        for _ in 0..10 {
            let mut a = HVector::zeros(g.n_total());
            for k in 0..g.domain_cutoff() {
                a.coeffs[k] = rng.complex();
            }
            let shifted = apply_shift(&a, n).unwrap();
            let before = inner(&a, &a, &g).re;
            let after = inner(&shifted, &shifted, &g).re;
            assert!(
                (before - after).abs() <= 1e-10 * before.abs().max(1.0),
                "isometry violated: {before} vs {after}"
            );
        }
    }

    #[test]
    fn fixture_primary_pass() {
        let g = fixture_gram();
        let basis = orthonormalize_primary(&g, 1e-8).unwrap();
        assert_eq!(basis.omega1, vec![0, 2, 5]);
        assert_eq!((basis.rho, basis.tau, basis.delta), (2, 2, 1));
        // u_0 = x_0, u_1 = x_2, u_2 = x_5 for this data
        assert_close(&basis.u[0], &HVector::basis(6, 0), 1e-12);
        assert_close(&basis.u[1], &HVector::basis(6, 2), 1e-12);
        assert_close(&basis.u[2], &HVector::basis(6, 5), 1e-12);
    }

    #[test]
    fn fixture_secondary_pass() {
        let g = fixture_gram();
        let basis = orthonormalize_primary(&g, 1e-8).unwrap();
        let basis = orthonormalize_secondary(basis, &g, 1e-8).unwrap();
        assert_eq!(basis.omega2, vec![1]);
        // v_0 = x_3, v_1 = x_5, and the defect vector is x_2 itself.
        assert_close(&basis.v[0], &HVector::basis(6, 3), 1e-12);
        assert_close(&basis.v[1], &HVector::basis(6, 5), 1e-12);
        assert_close(&basis.v[2], &HVector::basis(6, 2), 1e-12);
    }

    #[test]
    fn identity_gram_hand_run() {
        // N=1, d=1, S_0=1, S_1=0: both steps accept, ρ=τ=δ=1,
        // and the second pass gives v_0 = x_1, v_1 = x_0.
        let m = MomentSequence::new(vec![CMatrix::identity(1), CMatrix::zeros(1, 1)]).unwrap();
        let g = build_gram(&m);
        let basis = orthonormalize_primary(&g, 1e-8).unwrap();
        assert_eq!(basis.omega1, vec![0, 1]);
        assert_eq!((basis.rho, basis.tau, basis.delta), (1, 1, 1));
        let basis = orthonormalize_secondary(basis, &g, 1e-8).unwrap();
        assert_close(&basis.v[0], &HVector::basis(2, 1), 1e-12);
        assert_close(&basis.v[1], &HVector::basis(2, 0), 1e-12);
        assert_eq!(basis.omega2, vec![0]);
    }

    #[test]
    fn determinate_scalar_instance_has_no_defect() {
        // N=1, d=1, S_0=1, S_1=1: x_1 − x_0 is null, so δ = 0.
        let m = MomentSequence::new(vec![CMatrix::identity(1), CMatrix::identity(1)]).unwrap();
        let g = build_gram(&m);
        let basis = orthonormalize_primary(&g, 1e-8).unwrap();
        assert_eq!(basis.omega1, vec![0]);
        assert_eq!((basis.rho, basis.tau, basis.delta), (1, 1, 0));
        let basis = orthonormalize_secondary(basis, &g, 1e-8).unwrap();
        assert!(basis.omega2.is_empty());
        assert_eq!(basis.v.len(), 1);
    }

    #[test]
    fn indefinite_gram_with_zero_diagonal_is_rejected() {
        // S_0 = 0 with S_1 ≠ 0 cannot be PSD; the pass refuses to run.
        let m = MomentSequence::new(vec![CMatrix::zeros(1, 1), CMatrix::identity(1)]).unwrap();
        let g = build_gram(&m);
        assert!(matches!(
            orthonormalize_primary(&g, 1e-8),
            Err(Error::EmptyBasis)
        ));
    }

    #[test]
    fn zero_gram_gives_trivial_basis() {
        let m = MomentSequence::new(vec![CMatrix::zeros(2, 2), CMatrix::zeros(2, 2)]).unwrap();
        let g = build_gram(&m);
        let basis = orthonormalize_primary(&g, 1e-8).unwrap();
        assert_eq!((basis.rho, basis.tau, basis.delta), (0, 0, 0));
        assert!(basis.u.is_empty());
    }

    #[test]
    fn bases_are_orthonormal_under_the_form() {
        let g = fixture_gram();
        let basis =
            orthonormalize_secondary(orthonormalize_primary(&g, 1e-8).unwrap(), &g, 1e-8).unwrap();
        for set in [&basis.u, &basis.v] {
            for (i, a) in set.iter().enumerate() {
                for (j, b) in set.iter().enumerate() {
                    let p = inner(a, b, &g);
                    let expect = if i == j { C64::ONE } else { C64::ZERO };
                    assert!((p - expect).norm() < 1e-9);
                }
            }
        }
    }
}
