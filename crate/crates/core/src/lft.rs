//! Coefficients and evaluation of the linear fractional parametrization.
//!
//! For an indeterminate problem (δ ≥ 1), every solution's Herglotz
//! transform arises from a δ×δ Schur-class parameter F through
//!
//!   R(ζ) = (1/h)·A(ζ) − (ζ/h²)·B(ζ)·F(ζ)·(I + (1/h)·C(ζ)·F(ζ))⁻¹·D(ζ),
//!
//! where h and the four matrix polynomials are built from inner products
//! of the two orthonormal bases:
//!
//! * G0(j, k) = (v_k, u_j) for j,k < τ, so the compressed shift is
//!   I_τ − ζ·G0 with determinant h and adjugate `adj`;
//! * C1(j−τ, k) = (v_k, u_j) for j ≥ τ, k < τ;
//! * W(j, l−τ) = (v_l, u_j) for j < τ, l ≥ τ;
//! * T(j−τ, l−τ) = (v_l, u_j) for j, l ≥ τ;
//! * K(j, k) = (x_k, u_j) for j < ρ, k < N, the change of frame between
//!   the coordinate block and the basis of its span.
//!
//! TRANSPOSE CONVENTION: R(ζ) is the Herglotz transform of Mᵀ, not of M;
//! R(0) = S_0ᵀ. Every consumer of these values must transpose once to
//! speak about M itself.
//!
//! `resolvent_oracle` evaluates the same transform by direct numerical
//! inversion of the full (τ+δ)-square matrix I − ζ·Ŝ·(I_τ ⊕ F(ζ)), where
//! Ŝ(j, k) = (v_k, u_j); it shares nothing with the polynomial route past
//! the inner products and exists to cross-check it.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::gram_space::{inner, HVector, OrthonormalBasis};
use crate::linalg::{c64, spectral_norm, CMatrix, C64};
use crate::moments::GramMatrix;
use crate::poly::{det_adjugate, Poly, PolyMatrix};

/// Radii of the contractivity validation grid.
pub const SCHUR_GRID_RADII: [f64; 4] = [0.3, 0.6, 0.9, 0.99];
/// Angles per radius of the contractivity validation grid.
pub const SCHUR_GRID_ANGLES: usize = 64;
const SCHUR_CONTRACTION_SLACK: f64 = 1e-9;

/// Contour used by `taylor_moments`: truncation error decays like
/// radius^nodes, far below every tolerance in play.
pub const TAYLOR_CONTOUR_RADIUS: f64 = 0.5;
pub const TAYLOR_CONTOUR_NODES: usize = 256;

/// A δ×δ matrix polynomial parameter, contractive on the unit disk.
/// Contractivity is validated by sampling singular values on a fixed
/// grid; that is the supported parameter class (constants and matrix
/// polynomials), not a full Schur-class certification.
#[derive(Clone, Debug)]
pub struct SchurParameter {
    delta: usize,
    coeffs: Vec<CMatrix>,
}

impl SchurParameter {
    pub fn new(coeffs: Vec<CMatrix>) -> Result<Self> {
        assert!(
            !coeffs.is_empty(),
            "parameter needs at least one coefficient"
        );
        let delta = coeffs[0].rows();
        for (idx, m) in coeffs.iter().enumerate() {
            if m.rows() != delta || m.cols() != delta {
                return Err(Error::ParseError(format!(
                    "parameter coefficient {idx} is {}x{}, expected {delta}x{delta}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let param = Self { delta, coeffs };
        param.validate_contractive()?;
        Ok(param)
    }

    pub fn constant(m: CMatrix) -> Result<Self> {
        assert!(m.is_square());
        Self::new(vec![m])
    }

    pub fn zero(delta: usize) -> Self {
        Self {
            delta,
            coeffs: vec![CMatrix::zeros(delta, delta)],
        }
    }

    pub fn identity(delta: usize) -> Self {
        Self {
            delta,
            coeffs: vec![CMatrix::identity(delta)],
        }
    }

    /// Random constant strict contraction, scaled to spectral norm 0.9.
    pub fn random_contraction(delta: usize, seed: u64) -> Self {
        let mut rng = crate::rng::SplitMix64::new(seed);
        let raw = rng.matrix(delta, delta);
        let norm = spectral_norm(&raw).expect("eigenproblem on a tiny Gram matrix");
        let scale = if norm > 0.0 { 0.9 / norm } else { 0.0 };
        Self {
            delta,
            coeffs: vec![raw.scaled(c64(scale, 0.0))],
        }
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// The constant matrix when the parameter is constant and unitary.
    pub fn constant_unitary(&self, tol: f64) -> Option<&CMatrix> {
        if !self.is_constant() {
            return None;
        }
        let m = &self.coeffs[0];
        let dev = (&(&m.adjoint() * m) - &CMatrix::identity(self.delta)).max_abs();
        (dev <= tol).then_some(m)
    }

    pub fn eval(&self, zeta: C64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.delta, self.delta);
        for m in self.coeffs.iter().rev() {
            acc = &acc.scaled(zeta) + m;
        }
        acc
    }

    fn validate_contractive(&self) -> Result<()> {
        if self.delta == 0 {
            return Ok(());
        }
        if self.is_constant() {
            let sigma = spectral_norm(&self.coeffs[0])?;
            if sigma > 1.0 + SCHUR_CONTRACTION_SLACK {
                return Err(Error::NotContractive {
                    sigma,
                    re: 0.0,
                    im: 0.0,
                });
            }
            return Ok(());
        }
        for &radius in &SCHUR_GRID_RADII {
            for k in 0..SCHUR_GRID_ANGLES {
                let ang = TAU * k as f64 / SCHUR_GRID_ANGLES as f64;
                let zeta = c64(radius * ang.cos(), radius * ang.sin());
                let sigma = spectral_norm(&self.eval(zeta))?;
                if sigma > 1.0 + SCHUR_CONTRACTION_SLACK {
                    return Err(Error::NotContractive {
                        sigma,
                        re: zeta.re,
                        im: zeta.im,
                    });
                }
            }
        }
        Ok(())
    }
}

/// The structure matrices read off the two bases.
#[derive(Clone, Debug)]
pub struct StructureMatrices {
    pub g0: CMatrix,
    pub c1: CMatrix,
    pub w: CMatrix,
    pub t_mat: CMatrix,
    pub k_mat: CMatrix,
}

/// Inner products between the bases, arranged per the module docs.
pub fn compute_structure(basis: &OrthonormalBasis, g: &GramMatrix) -> Result<StructureMatrices> {
    let tau = basis.tau;
    let delta = basis.delta;
    if delta == 0 {
        return Err(Error::NotIndeterminate);
    }
    let rho = basis.rho;
    let n = g.block_size();
    let pair = |j: usize, k: usize| inner(&basis.v[k], &basis.u[j], g);
    let g0 = CMatrix::from_fn(tau, tau, &pair);
    let c1 = CMatrix::from_fn(delta, tau, |j, k| pair(tau + j, k));
    let w = CMatrix::from_fn(tau, delta, |j, l| pair(j, tau + l));
    let t_mat = CMatrix::from_fn(delta, delta, |j, l| pair(tau + j, tau + l));
    let k_mat = CMatrix::from_fn(rho, n, |j, k| {
        inner(&HVector::basis(g.n_total(), k), &basis.u[j], g)
    });
    Ok(StructureMatrices {
        g0,
        c1,
        w,
        t_mat,
        k_mat,
    })
}

/// Everything needed to evaluate the parametrization.
#[derive(Clone, Debug)]
pub struct NevanlinnaCoefficients {
    pub n: usize,
    pub rho: usize,
    pub tau: usize,
    pub delta: usize,
    /// h(ζ) = det(I − ζ·G0), nonzero on the open disk; h(0) = 1.
    pub h: Poly,
    /// N×N numerator polynomial.
    pub a_poly: PolyMatrix,
    /// N×δ.
    pub b_poly: PolyMatrix,
    /// δ×δ kernel polynomial.
    pub c_poly: PolyMatrix,
    /// δ×N.
    pub d_poly: PolyMatrix,
    pub structure: StructureMatrices,
    /// Adjugate of I − ζ·G0; entries have degree ≤ τ−1.
    pub adj: PolyMatrix,
}

/// Assemble the coefficient polynomials from the structure matrices and
/// the determinant/adjugate pair, by plain polynomial-matrix products.
pub fn assemble_coefficients(
    n: usize,
    basis_dims: (usize, usize, usize),
    structure: StructureMatrices,
    h: Poly,
    adj: PolyMatrix,
) -> NevanlinnaCoefficients {
    let (rho, tau, delta) = basis_dims;
    let k_adj = structure.k_mat.adjoint();
    let a1 = adj.block(0, 0, rho, rho);
    let a2 = adj.block(0, 0, rho, tau);
    let a3 = adj.block(0, 0, tau, rho);

    let a_poly = a1.left_mul(&k_adj).right_mul(&structure.k_mat);
    let b_poly = a2.left_mul(&k_adj).right_mul(&structure.w);
    // D = (−ζ·C1)·A3·K
    let d_poly = a3
        .left_mul(&structure.c1)
        .right_mul(&structure.k_mat)
        .shift_up(1)
        .scaled(c64(-1.0, 0.0));
    // C = ζ·(−ζ·C1)·adj·W − ζ·h·T
    let c_first = adj
        .left_mul(&structure.c1)
        .right_mul(&structure.w)
        .shift_up(2)
        .scaled(c64(-1.0, 0.0));
    let c_second = PolyMatrix::constant(structure.t_mat.clone())
        .mul_scalar_poly(&h)
        .shift_up(1)
        .scaled(c64(-1.0, 0.0));
    let c_poly = c_first.add(&c_second);

    NevanlinnaCoefficients {
        n,
        rho,
        tau,
        delta,
        h,
        a_poly,
        b_poly,
        c_poly,
        d_poly,
        structure,
        adj,
    }
}

impl NevanlinnaCoefficients {
    /// Full pipeline from a completed basis: structure matrices,
    /// determinant/adjugate, coefficient assembly.
    pub fn from_basis(basis: &OrthonormalBasis, g: &GramMatrix) -> Result<Self> {
        let structure = compute_structure(basis, g)?;
        let (h, adj) = det_adjugate(&structure.g0)?;
        Ok(assemble_coefficients(
            g.block_size(),
            (basis.rho, basis.tau, basis.delta),
            structure,
            h,
            adj,
        ))
    }

    /// Value of the transform R(ζ) for the parameter F — the Herglotz
    /// transform of Mᵀ for the solution M selected by F.
    pub fn evaluate_transform(&self, f: &SchurParameter, zeta: C64) -> Result<CMatrix> {
        if zeta.norm() >= 1.0 {
            return Err(Error::DiskViolation {
                modulus: zeta.norm(),
            });
        }
        if f.delta() != self.delta {
            return Err(Error::ParseError(format!(
                "parameter size {} does not match defect {}",
                f.delta(),
                self.delta
            )));
        }
        let hv = self.h.eval(zeta);
        if hv.norm() < 1e-14 {
            // cannot happen on the open disk; a zero here means corrupted
            // coefficients rather than a bad evaluation point
            return Err(Error::SingularKernel(format!(
                "h({zeta}) vanished inside the disk"
            )));
        }
        let fv = f.eval(zeta);
        let kernel =
            &CMatrix::identity(self.delta) + &(&self.c_poly.eval(zeta) * &fv).scaled(C64::ONE / hv);
        let solved = kernel
            .solve(&self.d_poly.eval(zeta))
            .map_err(|_| Error::SingularKernel(format!("I + C(ζ)F/h singular at ζ = {zeta}")))?;
        let correction = &(&self.b_poly.eval(zeta) * &fv) * &solved;
        let lead = self.a_poly.eval(zeta).scaled(C64::ONE / hv);
        Ok(&lead - &correction.scaled(zeta / (hv * hv)))
    }

    /// First `count` Taylor coefficients of ζ ↦ R(ζ) at 0 by trapezoidal
    /// contour sampling; coefficient n approximates ∫e^{int} dMᵀ, so the
    /// first d+1 of them must reproduce the transposed input moments.
    pub fn taylor_moments(&self, f: &SchurParameter, count: usize) -> Result<Vec<CMatrix>> {
        let nodes = TAYLOR_CONTOUR_NODES;
        let radius = TAYLOR_CONTOUR_RADIUS;
        let mut samples = Vec::with_capacity(nodes);
        for m in 0..nodes {
            let ang = TAU * m as f64 / nodes as f64;
            let zeta = c64(radius * ang.cos(), radius * ang.sin());
            samples.push(self.evaluate_transform(f, zeta)?);
        }
        let mut out = Vec::with_capacity(count);
        for order in 0..count {
            let mut acc = CMatrix::zeros(self.n, self.n);
            for (m, sample) in samples.iter().enumerate() {
                let ang = -TAU * ((m * order) % nodes) as f64 / nodes as f64;
                acc = &acc + &sample.scaled(c64(ang.cos(), ang.sin()));
            }
            out.push(acc.scaled(c64(1.0 / (nodes as f64 * radius.powi(order as i32)), 0.0)));
        }
        Ok(out)
    }
}

/// Direct evaluation of the transform by inverting the full matrix of
/// I − ζ·(shift ⊕ parameter) in the first basis: builds
/// Ŝ(j, k) = (v_k, u_j), forms I − ζ·Ŝ·(I_τ ⊕ F(ζ)), inverts numerically,
/// and sandwiches the leading ρ×ρ minor between Kᴴ and K. Testing oracle;
/// never feeds production output.
pub fn resolvent_oracle(
    basis: &OrthonormalBasis,
    g: &GramMatrix,
    f: &SchurParameter,
    zeta: C64,
) -> Result<CMatrix> {
    if zeta.norm() >= 1.0 {
        return Err(Error::DiskViolation {
            modulus: zeta.norm(),
        });
    }
    let tau = basis.tau;
    let delta = basis.delta;
    if delta == 0 {
        return Err(Error::NotIndeterminate);
    }
    let dim = tau + delta;
    let full = CMatrix::from_fn(dim, dim, |j, k| inner(&basis.v[k], &basis.u[j], g));
    let mut extended = CMatrix::zeros(dim, dim);
    let fv = f.eval(zeta);
    for j in 0..dim {
        for k in 0..tau {
            extended[(j, k)] = full[(j, k)];
        }
        for k in 0..delta {
            let mut acc = C64::ZERO;
            for l in 0..delta {
                acc += full[(j, tau + l)] * fv[(l, k)];
            }
            extended[(j, tau + k)] = acc;
        }
    }
    let m1 = &CMatrix::identity(dim) - &extended.scaled(zeta);
    let inv = m1
        .inverse()
        .map_err(|_| Error::SingularSystem(format!("resolvent matrix singular at ζ = {zeta}")))?;
    let rho = basis.rho;
    let minor = inv.block(0, 0, rho, rho);
    let n = g.block_size();
    let k_mat = CMatrix::from_fn(rho, n, |j, k| {
        inner(&HVector::basis(g.n_total(), k), &basis.u[j], g)
    });
    Ok(&(&k_mat.adjoint() * &minor) * &k_mat)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gram_space::{orthonormalize_primary, orthonormalize_secondary};
    use crate::moments::{build_gram, tests::fixture_moments, MomentSequence};

    fn fixture_setup() -> (GramMatrix, OrthonormalBasis) {
        let g = build_gram(&fixture_moments());
        let basis =
            orthonormalize_secondary(orthonormalize_primary(&g, 1e-8).unwrap(), &g, 1e-8).unwrap();
        (g, basis)
    }

    fn scalar_setup() -> (GramMatrix, OrthonormalBasis) {
        let m = MomentSequence::new(vec![CMatrix::identity(1), CMatrix::zeros(1, 1)]).unwrap();
        let g = build_gram(&m);
        let basis =
            orthonormalize_secondary(orthonormalize_primary(&g, 1e-8).unwrap(), &g, 1e-8).unwrap();
        (g, basis)
    }

    #[test]
    fn fixture_structure_matrices() {
        let (g, basis) = fixture_setup();
        let s = compute_structure(&basis, &g).unwrap();
        // W = (0, 1)ᵀ, T = (0), G0 = [[1,0],[0,0]], C1 = (0, 1),
        // K = [[1,1,0],[0,0,1]]
        assert!((s.w[(0, 0)]).norm() < 1e-12);
        assert!((s.w[(1, 0)] - C64::ONE).norm() < 1e-12);
        assert!(s.t_mat[(0, 0)].norm() < 1e-12);
        let g0_expect = CMatrix::from_real_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]);
        assert!((&s.g0 - &g0_expect).max_abs() < 1e-12);
        assert!(s.c1[(0, 0)].norm() < 1e-12);
        assert!((s.c1[(0, 1)] - C64::ONE).norm() < 1e-12);
        let k_expect = CMatrix::from_real_rows(&[vec![1.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
        assert!((&s.k_mat - &k_expect).max_abs() < 1e-12);
    }

    #[test]
    fn structure_entries_bounded_by_one() {
        // Cauchy–Schwarz between orthonormal families.
        let (g, basis) = fixture_setup();
        let s = compute_structure(&basis, &g).unwrap();
        for m in [&s.g0, &s.c1, &s.w, &s.t_mat, &s.k_mat] {
            assert!(m.max_abs() <= 1.0 + 1e-9);
        }
    }

    #[test]
    fn fixture_coefficients_match_closed_form() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        // h = 1 − ζ
        assert!((coeffs.h.coeffs[0] - C64::ONE).norm() < 1e-12);
        assert!((coeffs.h.coeffs[1] + C64::ONE).norm() < 1e-12);
        // C = −ζ²(1−ζ) → coefficients (0, 0, −1, 1)
        let c = &coeffs.c_poly;
        assert!(c.coeff(0).max_abs() < 1e-12 && c.coeff(1).max_abs() < 1e-12);
        assert!((c.coeff(2)[(0, 0)] + C64::ONE).norm() < 1e-12);
        assert!((c.coeff(3)[(0, 0)] - C64::ONE).norm() < 1e-12);
        // A(ζ): constant part [[1,1,0],[1,1,0],[0,0,1]], linear part −E22
        let a0 = coeffs.a_poly.coeff(0);
        let expect0 = CMatrix::from_real_rows(&[
            vec![1.0, 1.0, 0.0],
            vec![1.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]);
        assert!((&a0 - &expect0).max_abs() < 1e-12);
        let a1 = coeffs.a_poly.coeff(1);
        assert!((a1[(2, 2)] + C64::ONE).norm() < 1e-12);
        assert!(a1.block(0, 0, 2, 3).max_abs() < 1e-12);
        // B(ζ) = (0, 0, 1−ζ)ᵀ
        assert!((coeffs.b_poly.coeff(0)[(2, 0)] - C64::ONE).norm() < 1e-12);
        assert!((coeffs.b_poly.coeff(1)[(2, 0)] + C64::ONE).norm() < 1e-12);
        assert!(coeffs.b_poly.coeff(0).block(0, 0, 2, 1).max_abs() < 1e-12);
        // D(ζ) = −ζ·(0, 0, 1−ζ)
        assert!(coeffs.d_poly.coeff(0).max_abs() < 1e-12);
        assert!((coeffs.d_poly.coeff(1)[(0, 2)] + C64::ONE).norm() < 1e-12);
        assert!((coeffs.d_poly.coeff(2)[(0, 2)] - C64::ONE).norm() < 1e-12);
    }

    #[test]
    fn fixture_transform_closed_form() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::identity(1);
        let mut rng = crate::rng::SplitMix64::new(4);
        for _ in 0..20 {
            let zeta = rng.disk_point(0.95);
            let r = coeffs.evaluate_transform(&f, zeta).unwrap();
            let lead = C64::ONE / (C64::ONE - zeta);
            let corner = C64::ONE + zeta * zeta / (C64::ONE - zeta * zeta);
            for (j, k) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
                assert!((r[(j, k)] - lead).norm() < 1e-10);
            }
            assert!((r[(2, 2)] - corner).norm() < 1e-10);
            assert!(r[(0, 2)].norm() < 1e-10 && r[(2, 0)].norm() < 1e-10);
        }
    }

    #[test]
    fn scalar_coefficients_hand_run() {
        // N=1, d=1, S_0=1, S_1=0: h = 1, A = 1, B = 1, C = −ζ², D = −ζ.
        let (g, basis) = scalar_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        assert_eq!(coeffs.h.coeffs.len(), 2);
        assert!((coeffs.h.coeffs[0] - C64::ONE).norm() < 1e-12);
        assert!(coeffs.h.coeffs[1].norm() < 1e-12);
        assert!((coeffs.a_poly.coeff(0)[(0, 0)] - C64::ONE).norm() < 1e-12);
        assert!((coeffs.b_poly.coeff(0)[(0, 0)] - C64::ONE).norm() < 1e-12);
        assert!((coeffs.c_poly.coeff(2)[(0, 0)] + C64::ONE).norm() < 1e-12);
        assert!((coeffs.d_poly.coeff(1)[(0, 0)] + C64::ONE).norm() < 1e-12);
    }

    #[test]
    fn transform_at_zero_is_transposed_zeroth_moment() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::random_contraction(1, 5);
        let r = coeffs.evaluate_transform(&f, C64::ZERO).unwrap();
        let s0t = g.gamma().block(0, 0, 3, 3).transpose();
        assert!((&r - &s0t).max_abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_formula_on_fixture() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::identity(1);
        let zeta = c64(0.3, 0.2);
        let via_formula = coeffs.evaluate_transform(&f, zeta).unwrap();
        let via_oracle = resolvent_oracle(&basis, &g, &f, zeta).unwrap();
        assert!((&via_formula - &via_oracle).max_abs() < 1e-10);
    }

    #[test]
    fn oracle_with_zero_parameter_is_central_term() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::zero(1);
        let mut rng = crate::rng::SplitMix64::new(6);
        for _ in 0..5 {
            let zeta = rng.disk_point(0.9);
            let hv = coeffs.h.eval(zeta);
            let central = coeffs.a_poly.eval(zeta).scaled(C64::ONE / hv);
            let via_oracle = resolvent_oracle(&basis, &g, &f, zeta).unwrap();
            assert!((&central - &via_oracle).max_abs() < 1e-10);
        }
    }

    #[test]
    fn taylor_moments_scalar_geometric() {
        // transform for F ≡ 1 is 1/(1−ζ²): coefficients 1, 0, 1, 0, ...
        let (g, basis) = scalar_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::identity(1);
        let moments = coeffs.taylor_moments(&f, 6).unwrap();
        for (k, m) in moments.iter().enumerate() {
            let expect = if k % 2 == 0 { 1.0 } else { 0.0 };
            assert!(
                (m[(0, 0)] - c64(expect, 0.0)).norm() < 1e-9,
                "coefficient {k} was {}",
                m[(0, 0)]
            );
        }
    }

    #[test]
    fn taylor_moments_reproduce_fixture_data() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let m = fixture_moments();
        for f in [
            SchurParameter::identity(1),
            SchurParameter::zero(1),
            SchurParameter::random_contraction(1, 99),
        ] {
            let taylor = coeffs.taylor_moments(&f, 2).unwrap();
            for (k, coeff) in taylor.iter().enumerate() {
                let expect = m.moment(k).transpose();
                assert!((coeff - &expect).max_abs() < 1e-9);
            }
        }
    }

    #[test]
    fn schur_parameter_rejects_expansion() {
        let big = CMatrix::identity(2).scaled(c64(1.5, 0.0));
        assert!(matches!(
            SchurParameter::constant(big),
            Err(Error::NotContractive { .. })
        ));
    }

    #[test]
    fn schur_polynomial_contractivity_grid() {
        // (ζ·I)/2 + I/2 is contractive: σ(F(ζ)) = |1 + ζ|/2 ≤ 1 on the disk.
        let half = CMatrix::identity(2).scaled(c64(0.5, 0.0));
        let param = SchurParameter::new(vec![half.clone(), half]).unwrap();
        assert_eq!(param.delta(), 2);
        // ζ·I is contractive on the closed grid but 1.5·ζ·I is not at r=0.99
        let tilted = SchurParameter::new(vec![
            CMatrix::zeros(1, 1),
            CMatrix::identity(1).scaled(c64(1.5, 0.0)),
        ]);
        assert!(matches!(tilted, Err(Error::NotContractive { .. })));
    }

    #[test]
    fn transform_rejects_boundary_point() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let f = SchurParameter::identity(1);
        assert!(matches!(
            coeffs.evaluate_transform(&f, c64(0.8, 0.6)),
            Err(Error::DiskViolation { .. })
        ));
    }

    #[test]
    fn oracle_at_zero_is_transposed_zeroth_moment() {
        let (g, basis) = fixture_setup();
        let f = SchurParameter::random_contraction(1, 7);
        let r = resolvent_oracle(&basis, &g, &f, C64::ZERO).unwrap();
        let s0t = g.gamma().block(0, 0, 3, 3).transpose();
        assert!((&r - &s0t).max_abs() < 1e-12);
    }

    #[test]
    fn h_has_no_zeros_on_disk_grid() {
        let (g, basis) = fixture_setup();
        let coeffs = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        for &radius in &SCHUR_GRID_RADII {
            for k in 0..SCHUR_GRID_ANGLES {
                let ang = TAU * k as f64 / SCHUR_GRID_ANGLES as f64;
                let zeta = c64(radius * ang.cos(), radius * ang.sin());
                assert!(coeffs.h.eval(zeta).norm() > 1e-6);
            }
        }
    }

    #[test]
    fn degree_bounds_hold() {
        let (g, basis) = fixture_setup();
        let c = NevanlinnaCoefficients::from_basis(&basis, &g).unwrap();
        let tau = c.tau;
        assert!(c.h.degree_bound() <= tau);
        assert!(c.adj.degree_bound() <= tau.saturating_sub(1));
        assert!(c.a_poly.degree_bound() <= tau.saturating_sub(1));
        assert!(c.b_poly.degree_bound() <= tau.saturating_sub(1));
        assert!(c.c_poly.degree_bound() <= tau + 1);
        assert!(c.d_poly.degree_bound() <= tau);
    }
}
