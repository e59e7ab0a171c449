//! File formats.
//!
//! All five formats are JSON documents sharing one complex-number
//! encoding: every complex value is a two-element array `[re, im]` of
//! decimal numbers; angles are radians.
//!
//! Moment file:
//! ```json
//! { "N": 3, "d": 1,
//!   "S": [ [ [ [1,0], [1,0], [0,0] ], ... ],   // S_0: N rows of N pairs
//!          [ ... ] ] }                          // S_1 .. S_d
//! ```
//!
//! Measure file:
//! ```json
//! { "N": 3, "atoms": [ { "t": 0.0, "mass": [ [ [1,0], ... ], ... ] } ] }
//! ```
//!
//! Schur parameter file (matrix polynomial F(ζ) = Σ coeffs\[k\]·ζᵏ):
//! ```json
//! { "delta": 1, "coeffs": [ [ [ [1,0] ] ] ] }
//! ```
//!
//! Coefficient export: `rho`, `tau`, `delta`, `N`, the scalar polynomial
//! `h` as an array of pairs, the four matrix polynomials as arrays of
//! coefficient matrices, the structure matrices `W`, `T`, `K`, and a
//! `convention` note recording that evaluations are transforms of Mᵀ.
//!
//! Parsers reject shape mismatches with a message naming the offending
//! index.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lft::{NevanlinnaCoefficients, SchurParameter};
use crate::linalg::{c64, CMatrix};
use crate::measures::{Atom, MatrixMeasure};
use crate::moments::MomentSequence;
use crate::poly::PolyMatrix;

type JsonMatrix = Vec<Vec<[f64; 2]>>;

fn matrix_to_json(m: &CMatrix) -> JsonMatrix {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn matrix_from_json(raw: &JsonMatrix, rows: usize, cols: usize, what: &str) -> Result<CMatrix> {
    if raw.len() != rows {
        return Err(Error::ParseError(format!(
            "{what} has {} rows, expected {rows}",
            raw.len()
        )));
    }
    for (i, row) in raw.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::ParseError(format!(
                "{what} row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| {
        c64(raw[i][j][0], raw[i][j][1])
    }))
}

fn poly_matrix_to_json(p: &PolyMatrix) -> Vec<JsonMatrix> {
    p.coeffs().iter().map(matrix_to_json).collect()
}

#[derive(Serialize, Deserialize)]
struct MomentFile {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    #[serde(rename = "S")]
    s: Vec<JsonMatrix>,
}

#[derive(Serialize, Deserialize)]
struct AtomFile {
    t: f64,
    mass: JsonMatrix,
}

#[derive(Serialize, Deserialize)]
struct MeasureFile {
    #[serde(rename = "N")]
    n: usize,
    atoms: Vec<AtomFile>,
}

#[derive(Serialize, Deserialize)]
struct ParamFile {
    delta: usize,
    coeffs: Vec<JsonMatrix>,
}

#[derive(Serialize)]
struct CoeffsFile {
    #[serde(rename = "N")]
    n: usize,
    rho: usize,
    tau: usize,
    delta: usize,
    h: Vec<[f64; 2]>,
    a_poly: Vec<JsonMatrix>,
    b_poly: Vec<JsonMatrix>,
    c_poly: Vec<JsonMatrix>,
    d_poly: Vec<JsonMatrix>,
    w: JsonMatrix,
    t: JsonMatrix,
    k: JsonMatrix,
    convention: String,
}

fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))
}

fn syntax_error(path: &Path, e: serde_json::Error) -> Error {
    Error::ParseError(format!(
        "{} at line {}, column {}: {e}",
        path.display(),
        e.line(),
        e.column()
    ))
}

pub fn read_moments(path: &Path) -> Result<MomentSequence> {
    let text = read_to_string(path)?;
    let file: MomentFile = serde_json::from_str(&text).map_err(|e| syntax_error(path, e))?;
    if file.s.len() != file.d + 1 {
        return Err(Error::ParseError(format!(
            "S has {} matrices, expected d+1 = {}",
            file.s.len(),
            file.d + 1
        )));
    }
    let matrices = file
        .s
        .iter()
        .enumerate()
        .map(|(k, raw)| matrix_from_json(raw, file.n, file.n, &format!("S[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    MomentSequence::new(matrices)
}

pub fn write_moments(m: &MomentSequence) -> String {
    let file = MomentFile {
        n: m.block_size(),
        d: m.highest_index(),
        s: m.moments().iter().map(matrix_to_json).collect(),
    };
    serde_json::to_string_pretty(&file).expect("moment serialization")
}

pub fn read_measure(path: &Path) -> Result<MatrixMeasure> {
    let text = read_to_string(path)?;
    let file: MeasureFile = serde_json::from_str(&text).map_err(|e| syntax_error(path, e))?;
    let atoms = file
        .atoms
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            Ok(Atom {
                t: a.t,
                mass: matrix_from_json(&a.mass, file.n, file.n, &format!("atoms[{idx}].mass"))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    MatrixMeasure::new(file.n, atoms)
}

pub fn write_measure(mu: &MatrixMeasure) -> String {
    let file = MeasureFile {
        n: mu.n(),
        atoms: mu
            .atoms()
            .iter()
            .map(|a| AtomFile {
                t: a.t,
                mass: matrix_to_json(&a.mass),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("measure serialization")
}

pub fn read_param(path: &Path) -> Result<SchurParameter> {
    let text = read_to_string(path)?;
    let file: ParamFile = serde_json::from_str(&text).map_err(|e| syntax_error(path, e))?;
    if file.coeffs.is_empty() {
        return Err(Error::ParseError(
            "parameter needs at least one coefficient matrix".into(),
        ));
    }
    let coeffs = file
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, raw)| matrix_from_json(raw, file.delta, file.delta, &format!("coeffs[{k}]")))
        .collect::<Result<Vec<_>>>()?;
    SchurParameter::new(coeffs)
}

pub fn write_param(p: &SchurParameter) -> String {
    let file = ParamFile {
        delta: p.delta(),
        coeffs: p.coeffs().iter().map(matrix_to_json).collect(),
    };
    serde_json::to_string_pretty(&file).expect("parameter serialization")
}

pub fn write_coeffs(c: &NevanlinnaCoefficients) -> String {
    let file = CoeffsFile {
        n: c.n,
        rho: c.rho,
        tau: c.tau,
        delta: c.delta,
        h: c.h.coeffs.iter().map(|z| [z.re, z.im]).collect(),
        a_poly: poly_matrix_to_json(&c.a_poly),
        b_poly: poly_matrix_to_json(&c.b_poly),
        c_poly: poly_matrix_to_json(&c.c_poly),
        d_poly: poly_matrix_to_json(&c.d_poly),
        w: matrix_to_json(&c.structure.w),
        t: matrix_to_json(&c.structure.t_mat),
        k: matrix_to_json(&c.structure.k_mat),
        convention: "evaluations of these coefficients are Herglotz transforms of the \
                     TRANSPOSED solution M^T; transpose once to speak about M"
            .into(),
    };
    serde_json::to_string_pretty(&file).expect("coefficient serialization")
}

/// Matrix rendered in the shared JSON encoding (used by CLI reports).
pub fn matrix_json_string(m: &CMatrix) -> String {
    serde_json::to_string(&matrix_to_json(m)).expect("matrix serialization")
}
