//! Crate-wide error type.
//!
//! Every failure mode carries the name it is reported under, so the CLI can
//! surface errors as a single machine-parsable line (`Name: detail`).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Moment data does not satisfy the shape invariants (wrong matrix
    /// count, non-square block, size mismatch, d = 0).
    #[error("InvalidMoments: {0}")]
    InvalidMoments(String),

    /// The iterative Hermitian eigenvalue routine did not converge, or an
    /// eigenproblem produced residuals incompatible with a normal matrix.
    #[error("EigenFailure: {0}")]
    EigenFailure(String),

    /// A vector outside the shift domain was passed to the shift operator:
    /// some coordinate past the domain cutoff exceeds the tolerance.
    #[error("DomainViolation: coefficient {index} has modulus {magnitude:.3e}, outside the shift domain")]
    DomainViolation { index: usize, magnitude: f64 },

    /// The first orthonormalization pass accepted no vector from the first
    /// block even though the Gram matrix is nonzero.
    #[error("EmptyBasis: no basis vector survived in the leading block of a nonzero Gram matrix")]
    EmptyBasis,

    /// The second orthonormalization pass accepted a number of defect
    /// vectors different from the defect dimension of the first pass.
    #[error("DefectMismatch: second pass accepted {accepted} defect vectors, expected {expected}; a residual sits too close to the rank threshold")]
    DefectMismatch { expected: usize, accepted: usize },

    /// The defect-count route and the linear-system route reached opposite
    /// determinacy verdicts.
    #[error("RouteDisagreement: defect count {defect} vs consistency residuals {residuals:?} at threshold {threshold:.3e}")]
    RouteDisagreement {
        defect: usize,
        residuals: Vec<f64>,
        threshold: f64,
    },

    /// A unique solution was requested for an indeterminate problem.
    #[error("NotDeterminate: problem has defect {defect}, the solution is not unique")]
    NotDeterminate { defect: usize },

    /// A parametrization was requested for a determinate problem.
    #[error("NotIndeterminate: problem is determinate (defect 0), there is no solution family")]
    NotIndeterminate,

    /// The matrix of the shift operator failed the unitarity check.
    #[error("NonUnitary: shift matrix deviates from unitarity by {deviation:.3e}")]
    NonUnitary { deviation: f64 },

    /// Determinant/adjugate interpolation could not find nonsingular nodes.
    #[error("NodeDegeneracy: all {attempts} node rotations hit a near-zero determinant")]
    NodeDegeneracy { attempts: usize },

    /// The kernel matrix of the linear fractional transform is singular.
    #[error("SingularKernel: {0}")]
    SingularKernel(String),

    /// An evaluation point lies outside the open unit disk.
    #[error("DiskViolation: |zeta| = {modulus} is not inside the open unit disk")]
    DiskViolation { modulus: f64 },

    /// A linear system that must be invertible came out numerically singular.
    #[error("SingularSystem: {0}")]
    SingularSystem(String),

    /// A constant parameter that must be unitary is not.
    #[error("NotUnitary: parameter deviates from unitarity by {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    /// The extension of the shift by a unitary parameter failed its own
    /// unitarity check (internal invariant violation).
    #[error("ExtensionNotUnitary: extension matrix deviates from unitarity by {deviation:.3e}")]
    ExtensionNotUnitary { deviation: f64 },

    /// A Schur parameter exceeds the contractivity bound on the sample grid.
    #[error("NotContractive: largest singular value {sigma:.12} at zeta = {re}+{im}i exceeds 1")]
    NotContractive { sigma: f64, re: f64, im: f64 },

    /// A measure violates its structural invariants.
    #[error("InvalidMeasure: {0}")]
    InvalidMeasure(String),

    /// Input file could not be parsed; the message names the offending
    /// index or position.
    #[error("ParseError: {0}")]
    ParseError(String),

    /// File I/O failure.
    #[error("IoError: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
