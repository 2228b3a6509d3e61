//! Argument sweeps for identities that are not multilinear.
//!
//! A p-map, the ω part of a restricted cochain or the Hochschild condition
//! cannot be checked on basis elements alone. [`Sweep`] decides between an
//! exhaustive enumeration of all argument tuples and a seeded random sample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gf::{FpVector, PrimeField};

/// How to draw argument tuples for a non-linear identity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sweep {
    /// Enumerate everything when the number of tuples is at most this.
    pub max_points: u64,
    /// Sample size used above the threshold.
    pub samples: usize,
    /// Seed for the sampling fallback.
    pub seed: u64,
}

impl Default for Sweep {
    fn default() -> Self {
        Sweep {
            max_points: 1_000_000,
            samples: 200,
            seed: 0x5eed,
        }
    }
}

impl Sweep {
    pub fn with_max_points(mut self, max_points: u64) -> Self {
        self.max_points = max_points;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Number of tuples in the full product space.
    pub fn space_size(field: PrimeField, dims: &[usize]) -> u64 {
        field.count_vectors(dims.iter().sum())
    }

    pub fn is_exhaustive(&self, field: PrimeField, dims: &[usize]) -> bool {
        Self::space_size(field, dims) <= self.max_points
    }

    /// Tuples `(v_1, .., v_k)` with `v_i` of length `dims[i]`.
    pub fn tuples(
        &self,
        field: PrimeField,
        dims: &[usize],
    ) -> Box<dyn Iterator<Item = Vec<FpVector>>> {
        let dims = dims.to_vec();
        let total: usize = dims.iter().sum();
        let split = move |flat: FpVector| {
            let mut out = Vec::with_capacity(dims.len());
            let mut start = 0;
            for &d in &dims {
                out.push(flat[start..start + d].to_vec());
                start += d;
            }
            out
        };
        if Self::space_size(field, &[total]) <= self.max_points {
            Box::new(field.all_vectors(total).map(split))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let p = field.p();
            let samples = self.samples;
            Box::new((0..samples).map(move |_| {
                let flat: FpVector = (0..total).map(|_| rng.gen_range(0..p)).collect();
                split(flat)
            }))
        }
    }

    /// Single vectors of length `n`.
    pub fn vectors(&self, field: PrimeField, n: usize) -> impl Iterator<Item = FpVector> {
        self.tuples(field, &[n]).map(|mut t| t.pop().unwrap())
    }

    /// Pairs of vectors of length `n`.
    pub fn pairs(&self, field: PrimeField, n: usize) -> impl Iterator<Item = (FpVector, FpVector)> {
        self.tuples(field, &[n, n]).map(|mut t| {
            let b = t.pop().unwrap();
            let a = t.pop().unwrap();
            (a, b)
        })
    }
}

/// A seeded generator of random field data, shared by examples and tests.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn element(&mut self, field: PrimeField) -> u32 {
        self.rng.gen_range(0..field.p())
    }

    pub fn nonzero(&mut self, field: PrimeField) -> u32 {
        self.rng.gen_range(1..field.p())
    }

    pub fn vector(&mut self, field: PrimeField, n: usize) -> FpVector {
        (0..n).map(|_| self.element(field)).collect()
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }
}
