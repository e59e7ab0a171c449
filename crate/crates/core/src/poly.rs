//! Scalar and matrix polynomials in one complex variable.
//!
//! Coefficients are stored by ascending power; trailing zero coefficients
//! are legitimate and kept, since degree bounds (not exact degrees) are
//! what the calling code guarantees. Products use plain coefficient
//! convolution — degrees never exceed dN+1 here.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::linalg::{c64, CMatrix, C64};

/// Scalar polynomial p(ζ) = Σ coeffs\[k\]·ζᵏ.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn one() -> Self {
        Self::new(vec![C64::ONE])
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, zeta: C64) -> C64 {
        let mut acc = C64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * zeta + c;
        }
        acc
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![C64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scaled(&self, s: C64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

/// Matrix polynomial P(ζ) = Σ coeffs\[k\]·ζᵏ with fixed rows × cols shape.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    coeffs: Vec<CMatrix>,
}

impl PolyMatrix {
    pub fn new(coeffs: Vec<CMatrix>) -> Self {
        assert!(!coeffs.is_empty());
        let rows = coeffs[0].rows();
        let cols = coeffs[0].cols();
        assert!(coeffs.iter().all(|m| m.rows() == rows && m.cols() == cols));
        Self { rows, cols, coeffs }
    }

    pub fn constant(m: CMatrix) -> Self {
        Self::new(vec![m])
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(vec![CMatrix::zeros(rows, cols)])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[CMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CMatrix {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.rows, self.cols))
    }

    pub fn eval(&self, zeta: C64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.rows, self.cols);
        for m in self.coeffs.iter().rev() {
            acc = &acc.scaled(zeta) + m;
        }
        acc
    }

    pub fn add(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| &self.coeff(k) + &other.coeff(k)).collect();
        PolyMatrix::new(coeffs)
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![CMatrix::zeros(self.rows, other.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        PolyMatrix::new(out)
    }

    pub fn left_mul(&self, m: &CMatrix) -> PolyMatrix {
        PolyMatrix::new(self.coeffs.iter().map(|c| m * c).collect())
    }

    pub fn right_mul(&self, m: &CMatrix) -> PolyMatrix {
        PolyMatrix::new(self.coeffs.iter().map(|c| c * m).collect())
    }

    pub fn mul_scalar_poly(&self, p: &Poly) -> PolyMatrix {
        let len = self.coeffs.len() + p.coeffs.len() - 1;
        let mut out = vec![CMatrix::zeros(self.rows, self.cols); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, &b) in p.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &a.scaled(b);
            }
        }
        PolyMatrix::new(out)
    }

    pub fn scaled(&self, s: C64) -> PolyMatrix {
        PolyMatrix::new(self.coeffs.iter().map(|c| c.scaled(s)).collect())
    }

    /// Multiply by ζᵏ.
    pub fn shift_up(&self, k: usize) -> PolyMatrix {
        let mut coeffs = vec![CMatrix::zeros(self.rows, self.cols); k];
        coeffs.extend(self.coeffs.iter().cloned());
        PolyMatrix::new(coeffs)
    }

    /// Coefficient-wise sub-block.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix::new(
            self.coeffs
                .iter()
                .map(|m| m.block(r0, c0, rows, cols))
                .collect(),
        )
    }
}

const ADJUGATE_NODE_RADIUS: f64 = 2.0;
const ADJUGATE_MAX_ROTATIONS: usize = 8;
const ADJUGATE_DET_FLOOR: f64 = 1e-12;

/// Determinant and adjugate of A(ζ) = I − ζ·g0 by evaluation–interpolation.
///
/// det has degree ≤ τ and the adjugate entries degree ≤ τ−1, so sampling at
/// τ+2 scaled roots of unity (radius 2) determines them exactly; the node
/// circle is rotated when it hits a zero of the determinant. Since
/// A(0) = I, the interpolated data is normalized so h(0) = 1 and
/// adj(0) = I hold exactly.
pub fn det_adjugate(g0: &CMatrix) -> Result<(Poly, PolyMatrix)> {
    assert!(g0.is_square());
    let tau = g0.rows();
    if tau == 0 {
        return Ok((Poly::one(), PolyMatrix::zero(0, 0)));
    }
    let n_nodes = tau + 2;
    'attempt: for attempt in 0..ADJUGATE_MAX_ROTATIONS {
        let theta = 0.37 * attempt as f64;
        let nodes: Vec<C64> = (0..n_nodes)
            .map(|m| {
                let ang = theta + TAU * m as f64 / n_nodes as f64;
                c64(
                    ADJUGATE_NODE_RADIUS * ang.cos(),
                    ADJUGATE_NODE_RADIUS * ang.sin(),
                )
            })
            .collect();
        let mut dets = Vec::with_capacity(n_nodes);
        let mut adjs = Vec::with_capacity(n_nodes);
        for &z in &nodes {
            let a = &CMatrix::identity(tau) - &g0.scaled(z);
            let det = a.determinant();
            if det.norm() < ADJUGATE_DET_FLOOR {
                continue 'attempt;
            }
            let inv = match a.inverse() {
                Ok(inv) => inv,
                Err(_) => continue 'attempt,
            };
            dets.push(det);
            adjs.push(inv.scaled(det));
        }
        let h_coeffs = fourier_coeffs(&dets, ADJUGATE_NODE_RADIUS, theta, tau + 1);
        let adj_coeffs: Vec<CMatrix> = (0..tau)
            .map(|k| {
                CMatrix::from_fn(tau, tau, |i, j| {
                    let samples: Vec<C64> = adjs.iter().map(|m| m[(i, j)]).collect();
                    fourier_coeff_single(&samples, ADJUGATE_NODE_RADIUS, theta, k)
                })
            })
            .collect();
        let mut h = Poly::new(h_coeffs);
        let mut adj = PolyMatrix::new(adj_coeffs);
        // A(0) = I pins h(0) = 1 and adj(0) = I; enforce the known values.
        let h0 = h.coeffs[0];
        if (h0 - C64::ONE).norm() > 1e-6 {
            return Err(Error::NodeDegeneracy {
                attempts: attempt + 1,
            });
        }
        let inv_h0 = C64::ONE / h0;
        h = h.scaled(inv_h0);
        adj = adj.scaled(inv_h0);
        h.coeffs[0] = C64::ONE;
        adj.coeffs[0] = CMatrix::identity(tau);
        return Ok((h, adj));
    }
    Err(Error::NodeDegeneracy {
        attempts: ADJUGATE_MAX_ROTATIONS,
    })
}

/// Coefficients 0..n_coeffs of a polynomial sampled at the scaled,
/// rotated roots of unity z_m = R·e^{i(θ + 2πm/M)}; exact (up to roundoff)
/// when the polynomial degree is below the sample count.
fn fourier_coeffs(values: &[C64], radius: f64, theta: f64, n_coeffs: usize) -> Vec<C64> {
    (0..n_coeffs)
        .map(|k| fourier_coeff_single(values, radius, theta, k))
        .collect()
}

fn fourier_coeff_single(values: &[C64], radius: f64, theta: f64, k: usize) -> C64 {
    let m_total = values.len();
    let mut acc = C64::ZERO;
    for (m, &v) in values.iter().enumerate() {
        let ang = -TAU * (m * k % m_total) as f64 / m_total as f64;
        acc += v * c64(ang.cos(), ang.sin());
    }
    let node_phase = c64((k as f64 * theta).cos(), (k as f64 * theta).sin());
    acc / (m_total as f64) / radius.powi(k as i32) / node_phase
}
