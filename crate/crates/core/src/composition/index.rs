use serde::Serialize;

use crate::boolean::{BooleanFunction, InputLabel, DEFAULT_MAX_ARITY};
use crate::error::{AdvError, Result};

/// Composed bit `ℓ = p·m + q`: bit `q` of block `p` (all 0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct BlockIndex {
    pub l: usize,
    pub p: usize,
    pub q: usize,
}

impl BlockIndex {
    pub fn from_bit(l: usize, m: usize) -> Self {
        Self { l, p: l / m, q: l % m }
    }

    pub fn from_block(p: usize, q: usize, m: usize) -> Self {
        assert!(q < m, "inner bit {q} outside [0, {m})");
        Self { l: p * m + q, p, q }
    }

    /// All composed bits of `N` blocks of width `m`, in increasing `ℓ`.
    pub fn all(n_blocks: usize, m: usize) -> impl Iterator<Item = Self> {
        (0..n_blocks * m).map(move |l| Self::from_bit(l, m))
    }
}

/// Position of each `y ∈ {0,1}^m` in the canonical order of `g`
/// (0-inputs ascending, then 1-inputs ascending).
pub fn canonical_positions(g: &BooleanFunction) -> Vec<usize> {
    let mut pos = vec![0; g.size()];
    for (r, y) in g.preimage(false).into_iter().chain(g.preimage(true)).enumerate() {
        pos[y] = r;
    }
    pos
}

/// Maps each composed input `(x_0, …, x_{N-1})` to its matrix-composition
/// label: factor `p` contributes the canonical position of `x_p`, with
/// factor 0 varying fastest.
pub fn composition_label_permutation(g: &BooleanFunction, n_blocks: usize) -> Result<Vec<usize>> {
    let m = g.arity();
    let bits = n_blocks.checked_mul(m).unwrap_or(usize::MAX);
    if n_blocks == 0 || bits > DEFAULT_MAX_ARITY {
        return Err(AdvError::Size(format!(
            "{n_blocks} blocks of {m} bits exceed {DEFAULT_MAX_ARITY} composed bits"
        )));
    }
    let pos = canonical_positions(g);
    Ok((0..1usize << bits)
        .map(|x| {
            let label = InputLabel(x);
            (0..n_blocks).map(|p| pos[label.block(p, m)]).rev().fold(0, |acc, r| (acc << m) | r)
        })
        .collect())
}

pub fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (x, &l) in perm.iter().enumerate() {
        inv[l] = x;
    }
    inv
}
