//! Seeded randomness for the property batteries. Every trial draws from
//! ChaCha8 seeded with the run seed and switched to the trial's stream, so
//! results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{norm_sq, DenseMatrix};

pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Entries uniform in `[-1, 1)`.
pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    random_matrix(rng, n, n).symmetrized()
}

/// `G Gᵀ` for a random `n × r` factor `G`.
pub fn random_psd(rng: &mut impl Rng, n: usize, rank: usize) -> DenseMatrix {
    let g = random_matrix(rng, n, rank);
    g.matmul(&g.transpose()).expect("conforming shapes").symmetrized()
}

pub fn random_unit(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = norm_sq(&v).sqrt();
        if norm > 1e-3 {
            return v.into_iter().map(|c| c / norm).collect();
        }
    }
}
