use serde::{Deserialize, Serialize};

use crate::error::{AdvError, Result};
use crate::linalg::{DenseMatrix, SYMMETRY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

/// One term `value · X_block[row, col]` of a linear functional on the block
/// variables. Off-diagonal terms act on the symmetric entry, so `(r, c)` and
/// `(c, r)` are interchangeable and accumulate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub block: usize,
    pub row: usize,
    pub col: usize,
    pub value: f64,
}

impl Entry {
    pub fn new(block: usize, row: usize, col: usize, value: f64) -> Self {
        Self { block, row, col, value }
    }
}

/// `Σ entries = rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraint {
    pub entries: Vec<Entry>,
    pub rhs: f64,
}

/// A block-diagonal SDP in the form
/// `opt ⟨C, X⟩  s.t.  ⟨A_k, X⟩ = b_k,  X = diag(X_0, …) ⪰ 0`.
/// Size-1 blocks model nonnegative scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdpProblem {
    blocks: Vec<usize>,
    objective: Vec<Entry>,
    constraints: Vec<Constraint>,
    sense: Sense,
}

impl SdpProblem {
    pub fn new(blocks: Vec<usize>, sense: Sense) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(AdvError::Shape(format!("invalid block sizes {blocks:?}")));
        }
        Ok(Self { blocks, objective: Vec::new(), constraints: Vec::new(), sense })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    pub fn objective(&self) -> &[Entry] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn set_objective(&mut self, entries: Vec<Entry>) -> Result<()> {
        self.validate_entries(&entries)?;
        self.objective = entries;
        Ok(())
    }

    /// Adds a constraint and returns its index (the position of its dual
    /// multiplier in the solution).
    pub fn add_constraint(&mut self, entries: Vec<Entry>, rhs: f64) -> Result<usize> {
        self.validate_entries(&entries)?;
        if !rhs.is_finite() {
            return Err(AdvError::Domain("non-finite right-hand side".into()));
        }
        self.constraints.push(Constraint { entries, rhs });
        Ok(self.constraints.len() - 1)
    }

    /// Terms of `⟨A, X_block⟩` for a symmetric coefficient matrix `A`.
    pub fn dense_terms(&self, block: usize, a: &DenseMatrix) -> Result<Vec<Entry>> {
        let size = *self
            .blocks
            .get(block)
            .ok_or_else(|| AdvError::Domain(format!("block {block} does not exist")))?;
        if a.shape() != (size, size) {
            return Err(AdvError::Shape(format!(
                "coefficient is {}x{}, block {block} has size {size}",
                a.rows(),
                a.cols()
            )));
        }
        a.ensure_symmetric(SYMMETRY_TOL)?;
        let mut out = Vec::new();
        for r in 0..size {
            for c in r..size {
                let v = a[(r, c)];
                if v != 0.0 {
                    out.push(Entry::new(block, r, c, if r == c { v } else { 2.0 * v }));
                }
            }
        }
        Ok(out)
    }

    fn validate_entries(&self, entries: &[Entry]) -> Result<()> {
        for e in entries {
            let size = *self
                .blocks
                .get(e.block)
                .ok_or_else(|| AdvError::Domain(format!("block {} does not exist", e.block)))?;
            if e.row >= size || e.col >= size {
                return Err(AdvError::Domain(format!(
                    "entry ({}, {}) outside block {} of size {size}",
                    e.row, e.col, e.block
                )));
            }
            if !e.value.is_finite() {
                return Err(AdvError::Domain("non-finite coefficient".into()));
            }
        }
        Ok(())
    }

    /// Evaluates a linear functional on block matrices.
    pub fn evaluate(entries: &[Entry], x: &[DenseMatrix]) -> f64 {
        entries.iter().map(|e| e.value * x[e.block][(e.row, e.col)]).sum()
    }
}

/// Canonical symmetric form of a functional: upper-triangle entries, merged,
/// with the matrix coefficient (off-diagonal values halved).
#[derive(Debug, Clone)]
pub(crate) struct SymTerms {
    /// (block, row ≤ col, matrix coefficient)
    pub terms: Vec<(usize, usize, usize, f64)>,
}

impl SymTerms {
    pub fn from_entries(entries: &[Entry]) -> Self {
        let mut raw: Vec<(usize, usize, usize, f64)> = entries
            .iter()
            .map(|e| {
                let (r, c) = if e.row <= e.col { (e.row, e.col) } else { (e.col, e.row) };
                (e.block, r, c, if r == c { e.value } else { 0.5 * e.value })
            })
            .collect();
        raw.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let mut terms: Vec<(usize, usize, usize, f64)> = Vec::with_capacity(raw.len());
        for t in raw {
            match terms.last_mut() {
                Some(last) if (last.0, last.1, last.2) == (t.0, t.1, t.2) => last.3 += t.3,
                _ => terms.push(t),
            }
        }
        terms.retain(|t| t.3 != 0.0);
        Self { terms }
    }

    /// `⟨A, Y⟩` for a (not necessarily symmetric) block matrix `Y`.
    pub fn inner(&self, y: &[DenseMatrix]) -> f64 {
        self.terms
            .iter()
            .map(|&(b, r, c, v)| {
                if r == c {
                    v * y[b][(r, r)]
                } else {
                    v * (y[b][(r, c)] + y[b][(c, r)])
                }
            })
            .sum()
    }

    /// `Y += s · A`.
    pub fn add_to(&self, s: f64, y: &mut [DenseMatrix]) {
        for &(b, r, c, v) in &self.terms {
            y[b][(r, c)] += s * v;
            if r != c {
                y[b][(c, r)] += s * v;
            }
        }
    }

    pub fn frobenius(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(_, r, c, v)| if r == c { v * v } else { 2.0 * v * v })
            .sum::<f64>()
            .sqrt()
    }

    /// Expanded (row, col, value) triples including both off-diagonal halves.
    pub fn expanded(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::with_capacity(2 * self.terms.len());
        for &(b, r, c, v) in &self.terms {
            out.push((b, r, c, v));
            if r != c {
                out.push((b, c, r, v));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_validates() {
        assert!(SdpProblem::new(vec![], Sense::Minimize).is_err());
        assert!(SdpProblem::new(vec![2, 0], Sense::Minimize).is_err());
        let mut p = SdpProblem::new(vec![2, 1], Sense::Minimize).unwrap();
        assert!(p.add_constraint(vec![Entry::new(2, 0, 0, 1.0)], 1.0).is_err());
        assert!(p.add_constraint(vec![Entry::new(1, 0, 1, 1.0)], 1.0).is_err());
        assert!(p.add_constraint(vec![Entry::new(0, 0, 1, f64::NAN)], 1.0).is_err());
        assert_eq!(p.add_constraint(vec![Entry::new(0, 0, 1, 1.0)], 1.0).unwrap(), 0);
    }

    #[test]
    fn dense_terms_match_frobenius_inner_product() {
        let p = SdpProblem::new(vec![3], Sense::Minimize).unwrap();
        let a = DenseMatrix::from_rows(&[
            vec![1.0, 2.0, 0.0],
            vec![2.0, -1.0, 0.5],
            vec![0.0, 0.5, 3.0],
        ]);
        let x = DenseMatrix::from_rows(&[
            vec![2.0, 0.3, -1.0],
            vec![0.3, 1.0, 0.7],
            vec![-1.0, 0.7, 4.0],
        ]);
        let terms = p.dense_terms(0, &a).unwrap();
        let lhs = SdpProblem::evaluate(&terms, std::slice::from_ref(&x));
        assert!((lhs - a.frobenius_dot(&x)).abs() < 1e-12);
        let sym = SymTerms::from_entries(&terms);
        assert!((sym.inner(std::slice::from_ref(&x)) - lhs).abs() < 1e-12);
        let mut back = vec![DenseMatrix::zeros(3, 3)];
        sym.add_to(1.0, &mut back);
        assert!(back[0].max_abs_diff(&a) < 1e-15);
        assert!((sym.frobenius() - a.frobenius()).abs() < 1e-12);
    }

    #[test]
    fn sym_terms_merge_transposed_duplicates() {
        let entries = vec![Entry::new(0, 1, 0, 1.0), Entry::new(0, 0, 1, 1.0), Entry::new(0, 1, 1, 0.0)];
        let sym = SymTerms::from_entries(&entries);
        assert_eq!(sym.terms, vec![(0, 0, 1, 1.0)]);
    }
}
