//! Shared instance generator for the integration suites: random atomic
//! measures with controlled atom count and rank, and the moment sequences
//! they induce. The generating measure itself is the ground truth the
//! pipeline output gets compared against.
#![allow(dead_code)] // each test target uses its own subset

use std::f64::consts::TAU;

use tmtmp::linalg::{c64, CMatrix};
use tmtmp::measures::{Atom, MatrixMeasure};
use tmtmp::moments::MomentSequence;
use tmtmp::rng::SplitMix64;

/// Minimum angular separation of generated atoms; keeps eigenvalue
/// clustering far from its 1e-8 threshold.
const MIN_SEPARATION: f64 = 0.05;

pub fn random_atomic_measure(
    rng: &mut SplitMix64,
    n: usize,
    n_atoms: usize,
    max_rank: usize,
) -> MatrixMeasure {
    let mut positions: Vec<f64> = Vec::with_capacity(n_atoms);
    while positions.len() < n_atoms {
        let t = rng.range(0.0, TAU - MIN_SEPARATION);
        if positions
            .iter()
            .all(|&p| (p - t).abs() > MIN_SEPARATION && (p - t).abs() < TAU - MIN_SEPARATION)
        {
            positions.push(t);
        }
    }
    let atoms = positions
        .into_iter()
        .map(|t| {
            let rank = 1 + rng.below(max_rank.min(n));
            let gen = rng.matrix(n, rank);
            let weight = rng.range(0.1, 1.0);
            Atom {
                t,
                mass: (&gen * &gen.adjoint()).scaled(c64(weight, 0.0)),
            }
        })
        .collect();
    MatrixMeasure::new(n, atoms).expect("generated atoms are separated and PSD")
}

pub fn moments_of(measure: &MatrixMeasure, d: usize) -> MomentSequence {
    let s: Vec<CMatrix> = (0..=d as i64).map(|k| measure.moment(k)).collect();
    MomentSequence::new(s).expect("generated moments are well-shaped")
}

/// A random instance biased toward indeterminacy: enough atoms that the
/// Gram matrix is (usually) full rank.
pub fn random_instance(
    rng: &mut SplitMix64,
    n: usize,
    d: usize,
) -> (MomentSequence, MatrixMeasure) {
    let max_atoms = 2 * (d + 1) * n;
    let min_atoms = ((d + 1) * n / 2).max(2);
    let n_atoms = min_atoms + rng.below(max_atoms - min_atoms + 1);
    let mu = random_atomic_measure(rng, n, n_atoms, n);
    (moments_of(&mu, d), mu)
}

/// A random instance biased toward determinacy: few low-rank atoms, so the
/// shift domain usually spans the whole space.
pub fn random_small_instance(
    rng: &mut SplitMix64,
    n: usize,
    d: usize,
) -> (MomentSequence, MatrixMeasure) {
    let budget = (d * n).max(1);
    let n_atoms = 1 + rng.below(budget.min(3));
    let max_rank = (budget / n_atoms).clamp(1, n);
    let mu = random_atomic_measure(rng, n, n_atoms, max_rank);
    (moments_of(&mu, d), mu)
}
