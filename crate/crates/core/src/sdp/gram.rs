use crate::error::{AdvError, Result};
use crate::linalg::{spectral_norm, sym_eig, DenseMatrix, SYMMETRY_TOL};

/// Factors a (numerically) PSD Gram matrix into vectors `v_i` with
/// `⟨v_i, v_j⟩ ≈ G_ij`. Eigenvalues at or below `cutoff` are dropped, so the
/// vector dimension equals the number of eigenvalues above it.
pub fn gram_to_vectors(g: &DenseMatrix, tol: f64) -> Result<Vec<Vec<f64>>> {
    gram_to_vectors_with_cutoff(g, tol, tol)
}

/// As [`gram_to_vectors`], with the PSD tolerance and the rank cutoff given
/// separately.
pub fn gram_to_vectors_with_cutoff(g: &DenseMatrix, tol: f64, cutoff: f64) -> Result<Vec<Vec<f64>>> {
    g.ensure_symmetric(SYMMETRY_TOL.max(tol))?;
    let eig = sym_eig(&g.symmetrized())?;
    let norm = spectral_norm(g)?;
    let lmin = eig.lambda_min();
    if lmin < -tol * (1.0 + norm) {
        return Err(AdvError::Domain(format!(
            "Gram matrix is indefinite: λ_min = {lmin:e}"
        )));
    }
    let kept: Vec<usize> = (0..eig.eigenvalues.len()).filter(|&k| eig.eigenvalues[k] > cutoff).collect();
    let n = g.rows();
    Ok((0..n)
        .map(|i| {
            kept.iter()
                .map(|&k| eig.eigenvectors[(i, k)] * eig.eigenvalues[k].sqrt())
                .collect()
        })
        .collect())
}

/// `max |⟨v_i, v_j⟩ − G_ij|`.
pub fn gram_reconstruction_error(g: &DenseMatrix, vectors: &[Vec<f64>]) -> f64 {
    let n = g.rows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ip: f64 = vectors[i].iter().zip(&vectors[j]).map(|(a, b)| a * b).sum();
            err = err.max((ip - g[(i, j)]).abs());
        }
    }
    err
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_gives_orthonormal_vectors() {
        let v = gram_to_vectors(&DenseMatrix::identity(3), 1e-12).unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.iter().all(|x| x.len() == 3));
        assert!(gram_reconstruction_error(&DenseMatrix::identity(3), &v) < 1e-12);
    }

    #[test]
    fn all_ones_is_rank_one() {
        let v = gram_to_vectors(&DenseMatrix::ones(2, 2), 1e-12).unwrap();
        assert_eq!(v[0].len(), 1);
        assert!((v[0][0] - v[1][0]).abs() < 1e-12);
        assert!((v[0][0].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_gram_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (n, r) in [(6, 3), (10, 10), (8, 1)] {
            let f = DenseMatrix::from_fn(n, r, |_, _| rng.gen_range(-1.0..1.0));
            let g = f.matmul(&f.transpose()).unwrap().symmetrized();
            let v = gram_to_vectors(&g, 1e-10).unwrap();
            assert!(v[0].len() <= r);
            assert!(gram_reconstruction_error(&g, &v) <= 1e-8);
        }
    }

    #[test]
    fn indefinite_is_rejected() {
        let g = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        assert!(matches!(gram_to_vectors(&g, 1e-9), Err(AdvError::Domain(_))));
    }

    #[test]
    fn clipping_moves_g_by_at_most_clipped_mass() {
        let g = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, -1e-10]]);
        let v = gram_to_vectors(&g, 1e-9).unwrap();
        let rebuilt = DenseMatrix::from_fn(2, 2, |i, j| v[i].iter().zip(&v[j]).map(|(a, b)| a * b).sum());
        let diff = spectral_norm(&rebuilt.sub(&g).unwrap()).unwrap();
        assert!(diff <= 1e-10 + 1e-15);
    }
}
