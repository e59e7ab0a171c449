//! Deterministic pseudo-random generator for verification sweeps.
//!
//! SplitMix64 is tiny and has a fixed output sequence for a given seed, so
//! reports produced from a seed are byte-identical across platforms and
//! builds.

use crate::linalg::{c64, CMatrix, C64};

#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform draw from [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform draw from [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Uniform integer from 0..n.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// Complex number with independent real and imaginary parts in [-1, 1).
    pub fn complex(&mut self) -> C64 {
        c64(self.range(-1.0, 1.0), self.range(-1.0, 1.0))
    }

    /// Matrix with independent entries from `complex`.
    pub fn matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex())
    }

    /// Point of the open unit disk with |zeta| <= max_radius.
    pub fn disk_point(&mut self, max_radius: f64) -> C64 {
        let r = max_radius * self.uniform().sqrt();
        let t = self.range(0.0, std::f64::consts::TAU);
        c64(r * t.cos(), r * t.sin())
    }
}
