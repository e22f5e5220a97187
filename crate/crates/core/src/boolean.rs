//! Truth-table Boolean functions `g: {0,1}ⁿ → {0,1}`, relations
//! `f ⊆ {0,1}ⁿ × [K]`, their compositions, and the indicator vectors and
//! difference matrices the adversary programs are built from.
//!
//! Encoding: an input is an integer `x ∈ [0, 2ⁿ)` whose bit `i` (0-based,
//! coefficient of `2^i`) is the `i`-th input bit. A composed input
//! `(x_0, …, x_{N-1})` with blocks of `m` bits packs block `p` into bits
//! `p·m .. (p+1)·m`, so block 0 is least significant. Output symbols of a
//! relation are `0..K`.

use serde::{Deserialize, Serialize};

use crate::error::{AdvError, Result};
use crate::linalg::DenseMatrix;

/// Largest arity accepted for tables (4096 rows).
pub const DEFAULT_MAX_ARITY: usize = 12;

/// Largest output alphabet accepted for relations.
pub const MAX_ALPHABET: usize = 64;

/// An input string `x ∈ {0,1}ⁿ` packed into an integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InputLabel(pub usize);

impl InputLabel {
    #[inline]
    pub fn bit(self, i: usize) -> bool {
        (self.0 >> i) & 1 == 1
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Self(bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i)))
    }

    pub fn to_bits(self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    /// Block `p` of width `m`.
    #[inline]
    pub fn block(self, p: usize, m: usize) -> usize {
        (self.0 >> (p * m)) & ((1 << m) - 1)
    }

    pub fn from_blocks(blocks: &[usize], m: usize) -> Self {
        Self(blocks.iter().enumerate().fold(0, |acc, (p, &b)| acc | (b << (p * m))))
    }
}

fn check_arity(arity: usize) -> Result<()> {
    if arity == 0 || arity > DEFAULT_MAX_ARITY {
        return Err(AdvError::Size(format!(
            "arity {arity} outside [1, {DEFAULT_MAX_ARITY}]"
        )));
    }
    Ok(())
}

/// A total Boolean function given by its truth table.
///
/// JSON form: `{"arity": n, "table": [0/1, …]}` with `2ⁿ` entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FunctionJson", into = "FunctionJson")]
pub struct BooleanFunction {
    arity: usize,
    table: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    arity: usize,
    table: Vec<u8>,
}

impl TryFrom<FunctionJson> for BooleanFunction {
    type Error = AdvError;

    fn try_from(raw: FunctionJson) -> Result<Self> {
        if let Some(bad) = raw.table.iter().find(|&&b| b > 1) {
            return Err(AdvError::Domain(format!("table entry {bad} is not a bit")));
        }
        Self::new(raw.arity, raw.table.into_iter().map(|b| b == 1).collect())
    }
}

impl From<BooleanFunction> for FunctionJson {
    fn from(g: BooleanFunction) -> Self {
        Self { arity: g.arity, table: g.table.into_iter().map(u8::from).collect() }
    }
}

impl BooleanFunction {
    pub fn new(arity: usize, table: Vec<bool>) -> Result<Self> {
        check_arity(arity)?;
        if table.len() != 1 << arity {
            return Err(AdvError::Shape(format!(
                "table has {} entries, arity {arity} needs {}",
                table.len(),
                1usize << arity
            )));
        }
        Ok(Self { arity, table })
    }

    pub fn from_fn(arity: usize, f: impl Fn(InputLabel) -> bool) -> Result<Self> {
        check_arity(arity)?;
        Self::new(arity, (0..1usize << arity).map(|x| f(InputLabel(x))).collect())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn evaluate(&self, x: InputLabel) -> Result<bool> {
        self.table.get(x.0).copied().ok_or_else(|| {
            AdvError::Domain(format!("input {} outside [0, {})", x.0, self.table.len()))
        })
    }

    /// Unchecked lookup for internal loops; panics when out of range.
    #[inline]
    pub fn value(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn is_constant(&self) -> bool {
        self.table.iter().all(|&b| b == self.table[0])
    }

    /// Inputs with `g(x) = b`, ascending.
    pub fn preimage(&self, b: bool) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.table[x] == b).collect()
    }
}

/// `(g(x_0), …, g(x_{N-1}))` for a composed input of `N` blocks.
pub fn tilde(g: &BooleanFunction, x: InputLabel, n_blocks: usize) -> Result<InputLabel> {
    let m = g.arity();
    let total = n_blocks * m;
    if total >= usize::BITS as usize || x.0 >> total != 0 {
        return Err(AdvError::Domain(format!(
            "input {} outside [0, 2^{total})",
            x.0
        )));
    }
    Ok(tilde_unchecked(g, x, n_blocks))
}

#[inline]
pub(crate) fn tilde_unchecked(g: &BooleanFunction, x: InputLabel, n_blocks: usize) -> InputLabel {
    let m = g.arity();
    InputLabel((0..n_blocks).fold(0, |acc, p| acc | (usize::from(g.value(x.block(p, m))) << p)))
}

/// `h(x_0, …, x_{N-1}) = f(g(x_0), …, g(x_{N-1}))`.
pub fn compose_function(f: &BooleanFunction, g: &BooleanFunction) -> Result<BooleanFunction> {
    let n = f.arity();
    let arity = n.checked_mul(g.arity()).unwrap_or(usize::MAX);
    check_arity(arity)?;
    BooleanFunction::from_fn(arity, |x| f.value(tilde_unchecked(g, x, n).0))
}

/// A relation `f ⊆ {0,1}ⁿ × [K]` as a `2ⁿ × K` incidence table.
///
/// JSON form: `{"arity": n, "k": K, "incidence": [[0/1, …], …]}`, one row per
/// input in increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RelationJson", into = "RelationJson")]
pub struct Relation {
    arity: usize,
    k: usize,
    incidence: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    arity: usize,
    k: usize,
    incidence: Vec<Vec<u8>>,
}

impl TryFrom<RelationJson> for Relation {
    type Error = AdvError;

    fn try_from(raw: RelationJson) -> Result<Self> {
        check_arity(raw.arity)?;
        if raw.incidence.len() != 1 << raw.arity {
            return Err(AdvError::Shape(format!(
                "incidence has {} rows, arity {} needs {}",
                raw.incidence.len(),
                raw.arity,
                1usize << raw.arity
            )));
        }
        let mut flat = Vec::with_capacity(raw.incidence.len() * raw.k);
        for (x, row) in raw.incidence.iter().enumerate() {
            if row.len() != raw.k {
                return Err(AdvError::Shape(format!(
                    "row {x} has {} columns, expected {}",
                    row.len(),
                    raw.k
                )));
            }
            for &b in row {
                if b > 1 {
                    return Err(AdvError::Domain(format!("incidence entry {b} is not a bit")));
                }
                flat.push(b == 1);
            }
        }
        Relation::new(raw.arity, raw.k, flat)
    }
}

impl From<Relation> for RelationJson {
    fn from(f: Relation) -> Self {
        let incidence = f
            .incidence
            .chunks(f.k)
            .map(|row| row.iter().map(|&b| u8::from(b)).collect())
            .collect();
        Self { arity: f.arity, k: f.k, incidence }
    }
}

impl Relation {
    /// `incidence` is row-major over inputs, `K` columns per row.
    pub fn new(arity: usize, k: usize, incidence: Vec<bool>) -> Result<Self> {
        check_arity(arity)?;
        if k == 0 || k > MAX_ALPHABET {
            return Err(AdvError::Size(format!("alphabet {k} outside [1, {MAX_ALPHABET}]")));
        }
        if incidence.len() != (1 << arity) * k {
            return Err(AdvError::Shape(format!(
                "incidence has {} entries, expected {}",
                incidence.len(),
                (1usize << arity) * k
            )));
        }
        Ok(Self { arity, k, incidence })
    }

    pub fn from_fn(arity: usize, k: usize, f: impl Fn(InputLabel, usize) -> bool) -> Result<Self> {
        check_arity(arity)?;
        let incidence = (0..1usize << arity)
            .flat_map(|x| (0..k).map(move |a| (x, a)))
            .map(|(x, a)| f(InputLabel(x), a))
            .collect();
        Self::new(arity, k, incidence)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn size(&self) -> usize {
        1 << self.arity
    }

    /// `(x, a) ∈ f`. Panics when out of range.
    #[inline]
    pub fn contains(&self, x: usize, a: usize) -> bool {
        assert!(a < self.k, "output symbol {a} outside [0, {})", self.k);
        self.incidence[x * self.k + a]
    }

    pub fn row(&self, x: usize) -> &[bool] {
        &self.incidence[x * self.k..(x + 1) * self.k]
    }

    pub fn is_total(&self) -> bool {
        (0..self.size()).all(|x| self.row(x).iter().any(|&b| b))
    }

    pub fn ensure_total(&self) -> Result<()> {
        match (0..self.size()).find(|&x| !self.row(x).iter().any(|&b| b)) {
            None => Ok(()),
            Some(x) => Err(AdvError::Domain(format!(
                "input {x} has no valid output; totalize the relation first"
            ))),
        }
    }

    fn check_symbol(&self, a: usize) -> Result<()> {
        if a >= self.k {
            return Err(AdvError::Domain(format!("output symbol {a} outside [0, {})", self.k)));
        }
        Ok(())
    }
}

/// Replaces every empty row by an all-true row.
pub fn totalize(f: &Relation) -> Relation {
    let mut out = f.clone();
    for x in 0..f.size() {
        if !f.row(x).iter().any(|&b| b) {
            out.incidence[x * f.k..(x + 1) * f.k].fill(true);
        }
    }
    out
}

/// `(x, a) ∈ h` iff `(tilde(x), a) ∈ f`.
pub fn compose_relation(f: &Relation, g: &BooleanFunction) -> Result<Relation> {
    let n = f.arity();
    let arity = n.checked_mul(g.arity()).unwrap_or(usize::MAX);
    check_arity(arity)?;
    Relation::from_fn(arity, f.k(), |x, a| f.contains(tilde_unchecked(g, x, n).0, a))
}

/// `χ_a(x) = [(x, a) ∈ f]`.
pub fn chi_vector(f: &Relation, a: usize) -> Result<Vec<f64>> {
    f.check_symbol(a)?;
    Ok((0..f.size()).map(|x| if f.contains(x, a) { 1.0 } else { 0.0 }).collect())
}

/// `φ_a(x) = χ_a(tilde(x))` over composed inputs.
pub fn phi_vector(f: &Relation, g: &BooleanFunction, a: usize) -> Result<Vec<f64>> {
    f.check_symbol(a)?;
    let n = f.arity();
    let arity = n.checked_mul(g.arity()).unwrap_or(usize::MAX);
    check_arity(arity)?;
    Ok((0..1usize << arity)
        .map(|x| if f.contains(tilde_unchecked(g, InputLabel(x), n).0, a) { 1.0 } else { 0.0 })
        .collect())
}

/// `D_i(x, y) = [x_i ≠ y_i]` for a 0-based bit index `i`.
pub fn difference_matrix(n: usize, i: usize) -> Result<DenseMatrix> {
    check_arity(n)?;
    if i >= n {
        return Err(AdvError::Domain(format!("bit {i} outside [0, {n})")));
    }
    let size = 1usize << n;
    Ok(DenseMatrix::from_fn(size, size, |x, y| if ((x ^ y) >> i) & 1 == 1 { 1.0 } else { 0.0 }))
}

/// The Boolean function `f_a(x) = [(x, a) ∈ f]`.
pub fn relation_slice(f: &Relation, a: usize) -> Result<BooleanFunction> {
    f.check_symbol(a)?;
    BooleanFunction::new(f.arity(), (0..f.size()).map(|x| f.contains(x, a)).collect())
}

/// A Boolean function viewed as the relation `{(x, g(x))}` over `K = 2`.
pub fn function_as_relation(g: &BooleanFunction) -> Relation {
    Relation::from_fn(g.arity(), 2, |x, a| usize::from(g.value(x.0)) == a)
        .expect("arity already validated")
}

/// Named fixtures shared by tests, scenarios and the CLI.
pub mod library {
    use super::*;

    /// `g(x) = x` on one bit.
    pub fn identity1() -> BooleanFunction {
        BooleanFunction::new(1, vec![false, true]).unwrap()
    }

    pub fn not1() -> BooleanFunction {
        BooleanFunction::new(1, vec![true, false]).unwrap()
    }

    pub fn constant(n: usize, value: bool) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(n, |_| value)
    }

    pub fn and(n: usize) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(n, |x| x.0 == (1 << n) - 1)
    }

    pub fn or(n: usize) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(n, |x| x.0 != 0)
    }

    pub fn parity(n: usize) -> Result<BooleanFunction> {
        BooleanFunction::from_fn(n, |x| x.0.count_ones() % 2 == 1)
    }

    pub fn maj3() -> BooleanFunction {
        BooleanFunction::from_fn(3, |x| x.0.count_ones() >= 2).unwrap()
    }

    /// `(x, a) ∈ f` iff bit `a` of `x` is set, totalized so the all-zero input
    /// accepts every answer. `K = n`.
    pub fn find_one(n: usize) -> Result<Relation> {
        Ok(totalize(&Relation::from_fn(n, n, |x, a| x.bit(a))?))
    }

    /// Every pair is in the relation.
    pub fn all_pairs(n: usize, k: usize) -> Result<Relation> {
        Relation::from_fn(n, k, |_, _| true)
    }

    /// Fixture names understood by [`function_by_name`].
    pub const FUNCTION_NAMES: &[&str] =
        &["identity1", "not1", "and2", "or2", "parity2", "and3", "or3", "parity3", "maj3"];

    /// Fixture names understood by [`relation_by_name`].
    pub const RELATION_NAMES: &[&str] =
        &["findone2", "findone3", "allpairs1", "allpairs2", "parity2-rel", "or2-rel", "identity1-rel"];

    pub fn function_by_name(name: &str) -> Option<BooleanFunction> {
        let (stem, n) = split_arity(name);
        match (stem, n) {
            ("identity", Some(1)) => Some(identity1()),
            ("not", Some(1)) => Some(not1()),
            ("and", Some(n)) => and(n).ok(),
            ("or", Some(n)) => or(n).ok(),
            ("parity", Some(n)) => parity(n).ok(),
            ("maj", Some(3)) => Some(maj3()),
            _ => None,
        }
    }

    pub fn relation_by_name(name: &str) -> Option<Relation> {
        if let Some(inner) = name.strip_suffix("-rel") {
            return function_by_name(inner).map(|g| function_as_relation(&g));
        }
        match split_arity(name) {
            ("findone", Some(n)) => find_one(n).ok(),
            ("allpairs", Some(n)) => all_pairs(n, 1).ok(),
            _ => None,
        }
    }

    fn split_arity(name: &str) -> (&str, Option<usize>) {
        let digits = name.trim_start_matches(|c: char| !c.is_ascii_digit());
        let stem = &name[..name.len() - digits.len()];
        (stem, digits.parse().ok())
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    fn x2(b0: u8, b1: u8) -> usize {
        usize::from(b0) | usize::from(b1) << 1
    }

    #[test]
    fn evaluate_examples() {
        let or2 = or(2).unwrap();
        assert!(!or2.evaluate(InputLabel(0)).unwrap());
        assert!(or2.evaluate(InputLabel(1)).unwrap());
        assert!(!parity(2).unwrap().evaluate(InputLabel(3)).unwrap());
        assert!(matches!(or2.evaluate(InputLabel(4)), Err(AdvError::Domain(_))));
    }

    #[test]
    fn constructor_invariants() {
        assert!(BooleanFunction::new(0, vec![true]).is_err());
        assert!(BooleanFunction::new(2, vec![true; 3]).is_err());
        assert!(BooleanFunction::new(13, vec![true; 1 << 13]).is_err());
        assert!(Relation::new(1, 0, vec![]).is_err());
        assert!(Relation::new(1, 65, vec![true; 130]).is_err());
        assert!(Relation::new(1, 2, vec![true; 3]).is_err());
    }

    #[test]
    fn bits_round_trip() {
        for x in 0..64 {
            let label = InputLabel(x);
            assert_eq!(InputLabel::from_bits(&label.to_bits(6)), label);
            let blocks: Vec<usize> = (0..3).map(|p| label.block(p, 2)).collect();
            assert_eq!(InputLabel::from_blocks(&blocks, 2), label);
        }
    }

    #[test]
    fn compose_function_examples() {
        let h = compose_function(&or(2).unwrap(), &and(2).unwrap()).unwrap();
        // blocks (11, 00): block 0 = 0b11, block 1 = 0
        assert!(h.value(InputLabel::from_blocks(&[0b11, 0b00], 2).0));
        let pp = compose_function(&parity(2).unwrap(), &parity(2).unwrap()).unwrap();
        assert!(!pp.value(InputLabel::from_blocks(&[x2(1, 0), x2(1, 0)], 2).0));
        assert!(compose_function(&parity(4).unwrap(), &parity(4).unwrap()).is_err());
    }

    #[test]
    fn compose_function_full_table_matches_brute_force() {
        let (f, g) = (or(2).unwrap(), and(2).unwrap());
        let h = compose_function(&f, &g).unwrap();
        assert_eq!(h.size(), 16);
        for x in 0..16usize {
            let b0 = (x & 1 == 1) && (x >> 1 & 1 == 1);
            let b1 = (x >> 2 & 1 == 1) && (x >> 3 & 1 == 1);
            assert_eq!(h.value(x), b0 || b1, "x={x:04b}");
        }
    }

    #[test]
    fn tilde_examples() {
        let and2 = and(2).unwrap();
        let x = InputLabel::from_blocks(&[0b11, x2(1, 0)], 2);
        assert_eq!(tilde(&and2, x, 2).unwrap(), InputLabel(0b01));
        assert_eq!(tilde(&or(2).unwrap(), InputLabel(0), 2).unwrap(), InputLabel(0));
        assert!(tilde(&and2, InputLabel(16), 2).is_err());
    }

    #[test]
    fn tilde_consistency_is_exhaustive() {
        let fs = [and(2).unwrap(), or(2).unwrap(), parity(2).unwrap(), maj3(), identity1()];
        let gs = [and(2).unwrap(), parity(2).unwrap(), not1(), or(2).unwrap()];
        for f in &fs {
            for g in &gs {
                if f.arity() * g.arity() > 8 {
                    continue;
                }
                let h = compose_function(f, g).unwrap();
                for x in 0..h.size() {
                    let t = tilde(g, InputLabel(x), f.arity()).unwrap();
                    assert_eq!(h.value(x), f.value(t.0));
                    for p in 0..f.arity() {
                        assert_eq!(t.bit(p), g.value(InputLabel(x).block(p, g.arity())));
                    }
                }
            }
        }
    }

    #[test]
    fn totalize_examples() {
        let partial = Relation::new(1, 2, vec![false, false, true, false]).unwrap();
        let total = totalize(&partial);
        assert_eq!(total.row(0), &[true, true]);
        assert_eq!(total.row(1), &[true, false]);
        assert_eq!(totalize(&total), total);

        let raw = Relation::from_fn(2, 2, |x, a| x.bit(a)).unwrap();
        assert!(!raw.is_total());
        assert_eq!(totalize(&raw), find_one(2).unwrap());
    }

    #[test]
    fn chi_examples() {
        let ap = all_pairs(2, 3).unwrap();
        for a in 0..3 {
            assert_eq!(chi_vector(&ap, a).unwrap(), vec![1.0; 4]);
        }
        let f1 = find_one(2).unwrap();
        assert_eq!(chi_vector(&f1, 0).unwrap(), vec![1.0, 1.0, 0.0, 1.0]);
        assert!(chi_vector(&f1, 2).is_err());
        for x in 0..4 {
            let total: f64 = (0..2).map(|a| chi_vector(&f1, a).unwrap()[x]).sum();
            assert!(total >= 1.0);
        }
    }

    #[test]
    fn compose_relation_examples() {
        let ap = all_pairs(2, 2).unwrap();
        let h = compose_relation(&ap, &parity(2).unwrap()).unwrap();
        assert!((0..16).all(|x| h.row(x) == [true, true]));

        let f1 = find_one(2).unwrap();
        let h = compose_relation(&f1, &and(2).unwrap()).unwrap();
        let x = InputLabel::from_blocks(&[0b11, 0b00], 2).0;
        assert!(h.contains(x, 0));
        assert!(!h.contains(x, 1));
    }

    #[test]
    fn compose_relation_matches_brute_force_membership() {
        let f1 = find_one(2).unwrap();
        let h = compose_relation(&f1, &or(2).unwrap()).unwrap();
        for x in 0..16usize {
            let t0 = x & 0b11 != 0;
            let t1 = x >> 2 & 0b11 != 0;
            let expected = [t0 || !t1, t1 || !t0];
            for a in 0..2 {
                assert_eq!(h.contains(x, a), expected[a], "x={x:04b} a={a}");
            }
        }
    }

    #[test]
    fn phi_examples() {
        let g = and(2).unwrap();
        let ap = all_pairs(2, 2).unwrap();
        assert_eq!(phi_vector(&ap, &g, 1).unwrap(), vec![1.0; 16]);
        let f1 = find_one(2).unwrap();
        let phi = phi_vector(&f1, &g, 1).unwrap();
        assert_eq!(phi[InputLabel::from_blocks(&[0b00, 0b11], 2).0], 1.0);
        let h = compose_relation(&f1, &g).unwrap();
        for a in 0..2 {
            assert_eq!(phi_vector(&f1, &g, a).unwrap(), chi_vector(&h, a).unwrap());
        }
    }

    #[test]
    fn difference_matrix_examples() {
        assert_eq!(
            difference_matrix(1, 0).unwrap(),
            DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]])
        );
        let d = difference_matrix(2, 0).unwrap();
        let ones: Vec<(usize, usize)> =
            (0..4).flat_map(|x| (0..4).map(move |y| (x, y))).filter(|&(x, y)| d[(x, y)] == 1.0).collect();
        assert_eq!(ones, vec![(0, 1), (0, 3), (1, 0), (1, 2), (2, 1), (2, 3), (3, 0), (3, 2)]);
        assert!(difference_matrix(2, 2).is_err());
    }

    #[test]
    fn difference_matrices_sum_to_hamming_distance() {
        let n = 4;
        let ds: Vec<DenseMatrix> = (0..n).map(|i| difference_matrix(n, i).unwrap()).collect();
        for x in 0..16 {
            for y in 0..16 {
                let total: f64 = ds.iter().map(|d| d[(x, y)]).sum();
                assert_eq!(total as u32, (x ^ y).count_ones());
            }
        }
        for d in &ds {
            assert_eq!(d.max_asymmetry(), 0.0);
            assert_eq!(d.trace(), 0.0);
            assert_eq!(&d.hadamard(d).unwrap(), d);
        }
    }

    #[test]
    fn relation_slice_examples() {
        let ap = all_pairs(2, 1).unwrap();
        assert!(relation_slice(&ap, 0).unwrap().table().iter().all(|&b| b));
        let f1 = find_one(2).unwrap();
        assert_eq!(relation_slice(&f1, 0).unwrap().table(), &[true, true, false, true]);
        assert!(relation_slice(&f1, 5).is_err());
    }

    #[test]
    fn slice_of_composition_is_composition_of_slice() {
        let relations = [find_one(2).unwrap(), function_as_relation(&maj3()), all_pairs(2, 2).unwrap()];
        let inners = [and(2).unwrap(), parity(2).unwrap(), identity1(), or(2).unwrap()];
        for f in &relations {
            for g in &inners {
                if f.arity() * g.arity() > 8 {
                    continue;
                }
                let h = compose_relation(f, g).unwrap();
                for a in 0..f.k() {
                    let lhs = relation_slice(&h, a).unwrap();
                    let rhs = compose_function(&relation_slice(f, a).unwrap(), g).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn json_formats() {
        let g = or(2).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"arity":2,"table":[0,1,1,1]}"#);
        assert_eq!(serde_json::from_str::<BooleanFunction>(&s).unwrap(), g);
        assert!(serde_json::from_str::<BooleanFunction>(r#"{"arity":2,"table":[0,1,1]}"#).is_err());
        assert!(serde_json::from_str::<BooleanFunction>(r#"{"arity":1,"table":[0,2]}"#).is_err());

        let f = find_one(2).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"arity":2,"k":2,"incidence":[[1,1],[1,0],[0,1],[1,1]]}"#);
        assert_eq!(serde_json::from_str::<Relation>(&s).unwrap(), f);
        assert!(serde_json::from_str::<Relation>(r#"{"arity":1,"k":2,"incidence":[[1,1]]}"#).is_err());
    }

    #[test]
    fn named_library() {
        assert_eq!(function_by_name("or2"), Some(or(2).unwrap()));
        assert_eq!(function_by_name("identity1"), Some(identity1()));
        assert_eq!(function_by_name("maj3"), Some(maj3()));
        assert_eq!(function_by_name("nope"), None);
        assert_eq!(relation_by_name("findone2"), Some(find_one(2).unwrap()));
        assert_eq!(relation_by_name("parity2-rel"), Some(function_as_relation(&parity(2).unwrap())));
        for name in FUNCTION_NAMES {
            assert!(function_by_name(name).is_some(), "{name}");
        }
        for name in RELATION_NAMES {
            assert!(relation_by_name(name).is_some(), "{name}");
        }
    }
}
