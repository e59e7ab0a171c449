//! Finite atomic matrix-valued measures on [0, 2π).
//!
//! Distribution convention: M(0) = 0 and M(t) = Σ_{t_p < t} mass_p for
//! t ∈ (0, 2π], i.e. left-continuous with an atom at t contributing to
//! every later point; an atom at t = 0 contributes for all t > 0. Atom
//! positions are normalized to [0, 2π), so a jump "at 2π" cannot occur.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::gram_space::{inner, HVector, OrthonormalBasis};
use crate::linalg::{c64, eig_hermitian, eig_unitary, CMatrix, C64};
use crate::moments::GramMatrix;

/// Threshold below which two spectral points merge into one atom.
pub const ATOM_CLUSTER_TOL: f64 = 1e-8;
const MASS_PSD_TOL: f64 = 1e-9;
const ATOM_SEPARATION_TOL: f64 = 1e-10;

/// One jump of the distribution function.
#[derive(Clone, Debug)]
pub struct Atom {
    /// Position in radians, in [0, 2π).
    pub t: f64,
    /// Hermitian PSD jump of size N×N.
    pub mass: CMatrix,
}

/// A finite non-negative atomic matrix measure.
#[derive(Clone, Debug)]
pub struct MatrixMeasure {
    n: usize,
    atoms: Vec<Atom>,
}

impl MatrixMeasure {
    /// Validates positions and masses, sorting atoms by position.
    pub fn new(n: usize, mut atoms: Vec<Atom>) -> Result<Self> {
        for (idx, atom) in atoms.iter().enumerate() {
            if !(0.0..TAU).contains(&atom.t) {
                return Err(Error::InvalidMeasure(format!(
                    "atom {idx} has position {} outside [0, 2pi)",
                    atom.t
                )));
            }
            if atom.mass.rows() != n || atom.mass.cols() != n {
                return Err(Error::InvalidMeasure(format!(
                    "atom {idx} mass is {}x{}, expected {n}x{n}",
                    atom.mass.rows(),
                    atom.mass.cols()
                )));
            }
            let scale = atom.mass.max_abs().max(1.0);
            if atom.mass.hermitian_deviation() > MASS_PSD_TOL * scale {
                return Err(Error::InvalidMeasure(format!(
                    "atom {idx} mass is not Hermitian"
                )));
            }
            let (vals, _) = eig_hermitian(&atom.mass)?;
            let min = vals.first().copied().unwrap_or(0.0);
            if min < -MASS_PSD_TOL * scale {
                return Err(Error::InvalidMeasure(format!(
                    "atom {idx} mass has negative eigenvalue {min:.3e}"
                )));
            }
        }
        atoms.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        for w in atoms.windows(2) {
            if w[1].t - w[0].t <= ATOM_SEPARATION_TOL {
                return Err(Error::InvalidMeasure(format!(
                    "atoms at {} and {} are closer than the separation tolerance",
                    w[0].t, w[1].t
                )));
            }
        }
        Ok(Self { n, atoms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// ∫ e^{int} dM = Σ_p e^{i·n·t_p}·mass_p (n may be negative).
    pub fn moment(&self, order: i64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.n, self.n);
        for atom in &self.atoms {
            let ang = order as f64 * atom.t;
            acc = &acc + &atom.mass.scaled(c64(ang.cos(), ang.sin()));
        }
        acc
    }

    /// ∫ (1 − ζe^{it})⁻¹ dM for ζ in the open unit disk.
    pub fn herglotz(&self, zeta: C64) -> Result<CMatrix> {
        if zeta.norm() >= 1.0 {
            return Err(Error::DiskViolation {
                modulus: zeta.norm(),
            });
        }
        let mut acc = CMatrix::zeros(self.n, self.n);
        for atom in &self.atoms {
            let phase = c64(atom.t.cos(), atom.t.sin());
            let weight = C64::ONE / (C64::ONE - zeta * phase);
            acc = &acc + &atom.mass.scaled(weight);
        }
        Ok(acc)
    }
}

/// Spectral measure of a unitary matrix observed through a family of
/// vectors: clusters the eigenvalues, maps each cluster to t = arg λ in
/// [0, 2π), and forms the mass (P_p ξ_k, ξ_j) from the orthogonal
/// eigenprojections. Masses are symmetrized before the PSD check and
/// atoms below `mass_floor` (Frobenius) are dropped.
pub(crate) fn spectral_measure(
    u_matrix: &CMatrix,
    xi: &[Vec<C64>],
    n: usize,
    mass_floor: f64,
) -> Result<MatrixMeasure> {
    let dim = u_matrix.rows();
    if dim == 0 {
        return MatrixMeasure::new(n, Vec::new());
    }
    let (vals, vecs) = eig_unitary(u_matrix)?;

    // order by argument, folding arguments within the cluster tolerance of
    // 2π down to (just below) zero so wrap-around clusters stay together
    let mut entries: Vec<(f64, usize)> = vals
        .iter()
        .enumerate()
        .map(|(j, l)| {
            let mut t = l.arg();
            if t < 0.0 {
                t += TAU;
            }
            if TAU - t < ATOM_CLUSTER_TOL {
                t -= TAU;
            }
            (t, j)
        })
        .collect();
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());

    let mut atoms: Vec<Atom> = Vec::new();
    let mut start = 0;
    while start < entries.len() {
        let mut end = start + 1;
        while end < entries.len() && entries[end].0 - entries[end - 1].0 <= ATOM_CLUSTER_TOL {
            end += 1;
        }
        let members = &entries[start..end];
        let t_rep = (members.iter().map(|&(t, _)| t).sum::<f64>() / members.len() as f64).max(0.0);
        // projection onto the clustered eigenspace
        let mut projection = CMatrix::zeros(dim, dim);
        for &(_, j) in members {
            let col = vecs.column(j);
            for a in 0..dim {
                for b in 0..dim {
                    projection[(a, b)] += col[a] * col[b].conj();
                }
            }
        }
        let mut mass = CMatrix::from_fn(n, n, |k, j| {
            // (P ξ_k, ξ_j) = ξ_jᴴ P ξ_k
            let p_xi = projection.mul_vec(&xi[k]);
            xi[j].iter().zip(&p_xi).map(|(a, b)| a.conj() * b).sum()
        });
        mass = mass.hermitian_part();
        if mass.frobenius_norm() > mass_floor {
            atoms.push(Atom { t: t_rep, mass });
        }
        start = end;
    }
    MatrixMeasure::new(n, atoms)
}

/// Atomic solution generated by a constant unitary parameter.
///
/// The parameter F maps the domain-defect basis to the range-defect basis,
/// extending the shift to a unitary U on the whole space: in the first
/// basis, column k < τ of U holds the coordinates of v_k and column τ+k
/// the F-combination of the defect vectors v_τ... The spectral measure of
/// U observed through x_0..x_{N−1} solves the moment problem.
pub fn measure_from_unitary_extension(
    basis: &OrthonormalBasis,
    g: &GramMatrix,
    f_const: &CMatrix,
) -> Result<MatrixMeasure> {
    let delta = basis.delta;
    if delta == 0 {
        return Err(Error::NotIndeterminate);
    }
    if f_const.rows() != delta || f_const.cols() != delta {
        return Err(Error::ParseError(format!(
            "unitary parameter is {}x{}, expected {delta}x{delta}",
            f_const.rows(),
            f_const.cols()
        )));
    }
    let unitary_dev = (&(&f_const.adjoint() * f_const) - &CMatrix::identity(delta)).max_abs();
    if unitary_dev > 1e-9 {
        return Err(Error::NotUnitary {
            deviation: unitary_dev,
        });
    }

    let dim = basis.tau + delta;
    // coordinates of every v_k in the first basis
    let v_coords: Vec<Vec<C64>> = basis
        .v
        .iter()
        .map(|v| basis.u.iter().map(|u| inner(v, u, g)).collect())
        .collect();
    let mut u_matrix = CMatrix::zeros(dim, dim);
    for (k, coords) in v_coords.iter().enumerate().take(basis.tau) {
        u_matrix.set_column(k, coords);
    }
    for k in 0..delta {
        let mut col = vec![C64::ZERO; dim];
        for l in 0..delta {
            let w = f_const[(l, k)];
            for (j, item) in col.iter_mut().enumerate() {
                *item += w * v_coords[basis.tau + l][j];
            }
        }
        u_matrix.set_column(basis.tau + k, &col);
    }
    let ext_dev = (&(&u_matrix.adjoint() * &u_matrix) - &CMatrix::identity(dim)).max_abs();
    if ext_dev > 1e-9 {
        return Err(Error::ExtensionNotUnitary { deviation: ext_dev });
    }

    let n = g.block_size();
    let xi: Vec<Vec<C64>> = (0..n)
        .map(|k| {
            let x_k = HVector::basis(g.n_total(), k);
            basis.u.iter().map(|u| inner(&x_k, u, g)).collect()
        })
        .collect();
    let zeroth_scale = g.gamma().block(0, 0, n, n).frobenius_norm();
    spectral_measure(&u_matrix, &xi, n, 1e-12 * zeroth_scale.max(1.0))
}
