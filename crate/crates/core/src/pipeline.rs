//! End-to-end analysis driver shared by the CLI and the test suites.

use crate::determinacy::{check_determinacy, DeterminacyReport};
use crate::error::Result;
use crate::gram_space::{orthonormalize_primary, orthonormalize_secondary, OrthonormalBasis};
use crate::moments::{build_gram, check_solvable, GramMatrix, MomentSequence, Solvability};

/// Both tolerances with their default values. The determinacy residual
/// threshold reuses `rank_tol` so the two determinacy routes agree by
/// construction.
#[derive(Clone, Copy, Debug)]
pub struct Tolerances {
    /// Relative PSD tolerance of the solvability test.
    pub psd_tol: f64,
    /// Relative rank threshold of both orthonormalization passes.
    pub rank_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            psd_tol: 1e-10,
            rank_tol: 1e-8,
        }
    }
}

/// Everything the pipeline derives from a moment sequence. When the
/// problem is not solvable, analysis stops at the solvability verdict and
/// the basis/report are absent.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub moments: MomentSequence,
    pub gram: GramMatrix,
    pub solvability: Solvability,
    pub basis: Option<OrthonormalBasis>,
    pub report: Option<DeterminacyReport>,
}

impl Analysis {
    pub fn is_solvable(&self) -> bool {
        self.solvability.solvable
    }

    pub fn is_determinate(&self) -> Option<bool> {
        self.report.as_ref().map(|r| r.determinate)
    }
}

/// Run ingestion → solvability → both orthonormalization passes →
/// determinacy cross-check.
pub fn analyze(moments: MomentSequence, tol: &Tolerances) -> Result<Analysis> {
    let gram = build_gram(&moments);
    let solvability = check_solvable(&gram, tol.psd_tol)?;
    if !solvability.solvable {
        return Ok(Analysis {
            moments,
            gram,
            solvability,
            basis: None,
            report: None,
        });
    }
    let basis = orthonormalize_primary(&gram, tol.rank_tol)?;
    let basis = orthonormalize_secondary(basis, &gram, tol.rank_tol)?;
    let report = check_determinacy(&gram, &basis, tol.rank_tol)?;
    Ok(Analysis {
        moments,
        gram,
        solvability,
        basis: Some(basis),
        report: Some(report),
    })
}
