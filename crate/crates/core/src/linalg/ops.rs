use serde::{Deserialize, Serialize};

use super::eigen::{sym_eigenvalues, SYMMETRY_TOL};
use super::matrix::DenseMatrix;
use crate::error::{AdvError, Result};

/// Side-length cap for [`matrix_composition`] outputs.
pub const COMPOSITION_MAX_DIM: usize = 512;

/// Side-length cap for general Kronecker products.
pub const KRON_MAX_DIM: usize = 4096;

/// `[[0, A], [Aᵀ, 0]]`, whose eigenvalues are `±σᵢ(A)` padded with zeros.
pub fn dilation(a: &DenseMatrix) -> DenseMatrix {
    let (m, n) = a.shape();
    DenseMatrix::from_fn(m + n, m + n, |r, c| match (r < m, c < m) {
        (true, false) => a[(r, c - m)],
        (false, true) => a[(c, r - m)],
        _ => 0.0,
    })
}

/// Largest and smallest eigenvalue of a symmetric matrix.
pub fn extreme_eigenvalues(a: &DenseMatrix) -> Result<(f64, f64)> {
    let ev = sym_eigenvalues(a)?;
    Ok((ev[0], ev[ev.len() - 1]))
}

pub fn lambda_max(a: &DenseMatrix) -> Result<f64> {
    Ok(extreme_eigenvalues(a)?.0)
}

pub fn lambda_min(a: &DenseMatrix) -> Result<f64> {
    Ok(extreme_eigenvalues(a)?.1)
}

/// Largest singular value. Symmetric inputs use their own spectrum; others go
/// through the symmetric dilation.
pub fn spectral_norm(a: &DenseMatrix) -> Result<f64> {
    if a.max_abs() == 0.0 {
        return Ok(0.0);
    }
    if a.is_square() && a.is_symmetric(SYMMETRY_TOL) {
        let (hi, lo) = extreme_eigenvalues(a)?;
        return Ok(hi.abs().max(lo.abs()));
    }
    Ok(sym_eigenvalues(&dilation(a))?[0].max(0.0))
}

/// Sum of singular values.
pub fn trace_norm(a: &DenseMatrix) -> Result<f64> {
    if a.is_square() && a.is_symmetric(SYMMETRY_TOL) {
        return Ok(sym_eigenvalues(a)?.iter().map(|v| v.abs()).sum());
    }
    // dilation spectrum is ±σ, so the positive half sums to the trace norm
    Ok(sym_eigenvalues(&dilation(a))?.iter().filter(|&&v| v > 0.0).sum())
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    let rows = a.rows().checked_mul(b.rows());
    let cols = a.cols().checked_mul(b.cols());
    match (rows, cols) {
        (Some(r), Some(c)) if r <= KRON_MAX_DIM && c <= KRON_MAX_DIM => Ok(a.kron(b)),
        _ => Err(AdvError::Size(format!(
            "kron of {:?} and {:?} exceeds {KRON_MAX_DIM}",
            a.shape(),
            b.shape()
        ))),
    }
}

/// Result of a semidefiniteness test, carrying the extreme eigenvalue that
/// decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub holds: bool,
    /// `λ_min` for PSD tests, `λ_max` for NSD tests.
    pub witness_eigenvalue: f64,
}

/// `λ_min(A) ≥ −tol·(1 + ‖A‖)`.
pub fn is_psd(a: &DenseMatrix, tol: f64) -> Result<PsdCheck> {
    let (hi, lo) = extreme_eigenvalues(a)?;
    let norm = hi.abs().max(lo.abs());
    Ok(PsdCheck { holds: lo >= -tol * (1.0 + norm), witness_eigenvalue: lo })
}

/// `λ_max(A) ≤ tol·(1 + ‖A‖)`.
pub fn is_nsd(a: &DenseMatrix, tol: f64) -> Result<PsdCheck> {
    let (hi, lo) = extreme_eigenvalues(a)?;
    let norm = hi.abs().max(lo.abs());
    Ok(PsdCheck { holds: hi <= tol * (1.0 + norm), witness_eigenvalue: hi })
}

/// `Â = [[‖A‖·I_m, A], [Aᵀ, ‖A‖·I_n]]`, positive semidefinite for every `A`.
pub fn hat(a: &DenseMatrix) -> Result<DenseMatrix> {
    let norm = spectral_norm(a)?;
    Ok(hat_with_norm(a, norm))
}

pub(crate) fn hat_with_norm(a: &DenseMatrix, norm: f64) -> DenseMatrix {
    let m = a.rows();
    let mut h = dilation(a);
    for i in 0..h.rows() {
        h[(i, i)] = norm;
    }
    debug_assert_eq!(h.rows(), m + a.cols());
    h
}

/// `Ã(x, y) = A(h(x), h(y))`: duplicates and drops rows/columns of a square
/// matrix according to the map `h: [N] → [M]`.
pub fn lift_by_function(a: &DenseMatrix, h: &[usize]) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(AdvError::Shape(format!("lift of non-square {:?}", a.shape())));
    }
    if let Some((x, &hx)) = h.iter().enumerate().find(|(_, &hx)| hx >= a.rows()) {
        return Err(AdvError::Domain(format!(
            "h({x}) = {hx} outside [0, {})",
            a.rows()
        )));
    }
    Ok(DenseMatrix::from_fn(h.len(), h.len(), |x, y| a[(h[x], h[y])]))
}

/// Label bookkeeping for a matrix composition: factor `i` has `m_i + n_i`
/// labels, factor 0 varies fastest, and label `a_i` has threshold bit
/// `ã_i = [a_i ≥ m_i]`.
#[derive(Debug, Clone)]
pub struct CompositionLabels {
    zero_sizes: Vec<usize>,
    sizes: Vec<usize>,
    total: usize,
}

impl CompositionLabels {
    pub fn new(shapes: &[(usize, usize)]) -> Result<Self> {
        let sizes: Vec<usize> = shapes.iter().map(|&(m, n)| m + n).collect();
        let mut total = 1usize;
        for &s in &sizes {
            total = total
                .checked_mul(s)
                .filter(|&t| t <= COMPOSITION_MAX_DIM)
                .ok_or_else(|| {
                    AdvError::Size(format!(
                        "matrix composition of {shapes:?} exceeds {COMPOSITION_MAX_DIM}"
                    ))
                })?;
        }
        Ok(Self { zero_sizes: shapes.iter().map(|&(m, _)| m).collect(), sizes, total })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn factors(&self) -> usize {
        self.sizes.len()
    }

    /// Per-factor coordinates of a flat label, factor 0 first.
    pub fn split(&self, mut label: usize) -> Vec<usize> {
        self.sizes
            .iter()
            .map(|&s| {
                let a = label % s;
                label /= s;
                a
            })
            .collect()
    }

    pub fn join(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.sizes).rev().fold(0, |acc, (&a, &s)| acc * s + a)
    }

    /// `ã` as an N-bit integer, factor 0 in the least significant bit.
    pub fn threshold_bits(&self, label: usize) -> usize {
        self.split(label)
            .iter()
            .zip(&self.zero_sizes)
            .enumerate()
            .fold(0, |acc, (i, (&a, &m))| if a >= m { acc | (1 << i) } else { acc })
    }
}

/// Kronecker product of square factors with factor 0 varying fastest, i.e.
/// `F_{N-1} ⊗ … ⊗ F_0` in left-major convention.
pub fn kron_fastest_first(factors: &[DenseMatrix]) -> DenseMatrix {
    factors
        .iter()
        .skip(1)
        .fold(factors[0].clone(), |acc, f| f.kron(&acc))
}

/// `B̃ ∘ K` where `B̃(a, b) = B(ã, b̃)` over the given labels.
pub(crate) fn lifted_hadamard(
    b: &DenseMatrix,
    labels: &CompositionLabels,
    k: &DenseMatrix,
) -> DenseMatrix {
    let bits: Vec<usize> = (0..labels.len()).map(|a| labels.threshold_bits(a)).collect();
    DenseMatrix::from_fn(labels.len(), labels.len(), |r, c| b[(bits[r], bits[c])] * k[(r, c)])
}

/// Matrix composition `C = B̃ ∘ (Â_1 ⊗ … ⊗ Â_N)` of a symmetric `2^N × 2^N`
/// matrix `B` with arbitrary blocks `A_i`. Labels follow [`CompositionLabels`].
pub fn matrix_composition(b: &DenseMatrix, blocks: &[DenseMatrix]) -> Result<DenseMatrix> {
    let labels = composition_labels_for(b, blocks)?;
    let hats = blocks.iter().map(hat).collect::<Result<Vec<_>>>()?;
    Ok(lifted_hadamard(b, &labels, &kron_fastest_first(&hats)))
}

pub(crate) fn composition_labels_for(
    b: &DenseMatrix,
    blocks: &[DenseMatrix],
) -> Result<CompositionLabels> {
    if blocks.is_empty() {
        return Err(AdvError::Domain("matrix composition needs at least one block".into()));
    }
    b.ensure_symmetric(SYMMETRY_TOL)?;
    let n = blocks.len();
    if n >= usize::BITS as usize || b.rows() != 1usize << n {
        return Err(AdvError::Shape(format!(
            "outer matrix is {}x{}, expected 2^{n}",
            b.rows(),
            b.cols()
        )));
    }
    CompositionLabels::new(&blocks.iter().map(DenseMatrix::shape).collect::<Vec<_>>())
}

/// Lower Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for j in 0..n {
        let mut diag = a[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag <= 0.0 || !diag.is_finite() {
            return Err(AdvError::Numeric(format!("cholesky pivot {j} is {diag:e}")));
        }
        let ljj = diag.sqrt();
        l[(j, j)] = ljj;
        for i in (j + 1)..n {
            let mut s = a[(i, j)];
            let (ri, rj) = (l.row(i), l.row(j));
            for k in 0..j {
                s -= ri[k] * rj[k];
            }
            l[(i, j)] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = rhs` in place.
pub fn cholesky_solve(l: &DenseMatrix, rhs: &mut [f64]) {
    let n = l.rows();
    for i in 0..n {
        let mut s = rhs[i];
        let row = l.row(i);
        for k in 0..i {
            s -= row[k] * rhs[k];
        }
        rhs[i] = s / row[i];
    }
    for i in (0..n).rev() {
        let mut s = rhs[i];
        for k in (i + 1)..n {
            s -= l[(k, i)] * rhs[k];
        }
        rhs[i] = s / l[(i, i)];
    }
}

/// `L⁻¹` for a lower-triangular `L`.
pub fn lower_triangular_inverse(l: &DenseMatrix) -> DenseMatrix {
    let n = l.rows();
    let mut inv = DenseMatrix::zeros(n, n);
    for j in 0..n {
        inv[(j, j)] = 1.0 / l[(j, j)];
        for i in (j + 1)..n {
            let mut s = 0.0;
            for k in j..i {
                s += l[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / l[(i, i)];
        }
    }
    inv
}

/// Inverse of a symmetric positive definite matrix via Cholesky.
pub fn spd_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    let linv = lower_triangular_inverse(&cholesky(a)?);
    let inv = linv.transpose().matmul(&linv)?;
    Ok(inv.symmetrized())
}
