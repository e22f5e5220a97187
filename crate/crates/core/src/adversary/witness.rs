use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::boolean::{BooleanFunction, Relation};
use crate::error::{AdvError, Result};
use crate::linalg::{dot, norm_sq, DenseMatrix};

/// Vectors `u_{x,i}, v_{x,i} ∈ ℝ^dim`, stored at index `x·n + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDualWitness {
    arity: usize,
    dim: usize,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
}

/// Adds `σ_{x,a} ∈ ℝ^{m_a}` (index `x·K + a`) to the functional families.
/// Entries for `(x, a) ∉ f` are expected to be exactly zero.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationalDualWitness {
    arity: usize,
    k: usize,
    dim: usize,
    u: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    sigma_dims: Vec<usize>,
    sigma: Vec<Vec<f64>>,
}

fn check_family(name: &str, family: &[Vec<f64>], count: usize, dim: usize) -> Result<()> {
    if family.len() != count {
        return Err(AdvError::Structural(format!(
            "{name} has {} vectors, expected {count}",
            family.len()
        )));
    }
    if let Some(bad) = family.iter().position(|w| w.len() != dim) {
        return Err(AdvError::Structural(format!(
            "{name} vector {bad} has length {}, expected {dim}",
            family[bad].len()
        )));
    }
    if family.iter().flatten().any(|c| !c.is_finite()) {
        return Err(AdvError::Domain(format!("{name} has non-finite entries")));
    }
    Ok(())
}

/// `max(max_x Σ_i ‖u_{x,i}‖², max_x Σ_i ‖v_{x,i}‖²)`.
fn objective(u: &[Vec<f64>], v: &[Vec<f64>], n: usize) -> f64 {
    let row_max = |fam: &[Vec<f64>]| {
        fam.chunks(n)
            .map(|row| row.iter().map(|w| norm_sq(w)).sum::<f64>())
            .fold(0.0, f64::max)
    };
    row_max(u).max(row_max(v))
}

/// `Σ_{i: x_i ≠ y_i} ⟨u_{x,i}, v_{y,i}⟩`.
fn cross_term(u: &[Vec<f64>], v: &[Vec<f64>], n: usize, x: usize, y: usize) -> f64 {
    let diff = x ^ y;
    (0..n)
        .filter(|i| (diff >> i) & 1 == 1)
        .map(|i| dot(&u[x * n + i], &v[y * n + i]))
        .sum()
}

impl FunctionalDualWitness {
    pub fn new(arity: usize, dim: usize, u: Vec<Vec<f64>>, v: Vec<Vec<f64>>) -> Result<Self> {
        let count = (1usize << arity) * arity;
        check_family("u", &u, count, dim)?;
        check_family("v", &v, count, dim)?;
        Ok(Self { arity, dim, u, v })
    }

    /// All-zero vectors of dimension 1; feasible exactly for constant `g`.
    pub fn zero(arity: usize) -> Self {
        let count = (1usize << arity) * arity;
        Self { arity, dim: 1, u: vec![vec![0.0]; count], v: vec![vec![0.0]; count] }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn u(&self, x: usize, i: usize) -> &[f64] {
        &self.u[x * self.arity + i]
    }

    pub fn v(&self, x: usize, i: usize) -> &[f64] {
        &self.v[x * self.arity + i]
    }

    pub fn value(&self) -> f64 {
        objective(&self.u, &self.v, self.arity)
    }

    /// `u ↦ c·u`, `v ↦ v/c`; every constraint is unchanged.
    pub fn rescaled(&self, c: f64) -> Self {
        let scale = |fam: &[Vec<f64>], s: f64| fam.iter().map(|w| w.iter().map(|x| x * s).collect()).collect();
        Self { arity: self.arity, dim: self.dim, u: scale(&self.u, c), v: scale(&self.v, 1.0 / c) }
    }

    pub fn to_json(&self) -> WitnessJson {
        WitnessJson {
            dim: self.dim,
            u: keyed(&self.u, self.arity),
            v: keyed(&self.v, self.arity),
            sigma: BTreeMap::new(),
        }
    }

    pub fn from_json(raw: &WitnessJson, arity: usize) -> Result<Self> {
        let count = 1usize << arity;
        let u = unkeyed("u", &raw.u, count, arity, |_| Some(raw.dim))?;
        let v = unkeyed("v", &raw.v, count, arity, |_| Some(raw.dim))?;
        Self::new(arity, raw.dim, u, v)
    }
}

impl RelationalDualWitness {
    pub fn new(
        arity: usize,
        k: usize,
        dim: usize,
        u: Vec<Vec<f64>>,
        v: Vec<Vec<f64>>,
        sigma_dims: Vec<usize>,
        sigma: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let count = (1usize << arity) * arity;
        check_family("u", &u, count, dim)?;
        check_family("v", &v, count, dim)?;
        if sigma_dims.len() != k {
            return Err(AdvError::Structural(format!(
                "{} σ dimensions for alphabet {k}",
                sigma_dims.len()
            )));
        }
        if sigma.len() != (1usize << arity) * k {
            return Err(AdvError::Structural(format!(
                "σ has {} vectors, expected {}",
                sigma.len(),
                (1usize << arity) * k
            )));
        }
        for (idx, s) in sigma.iter().enumerate() {
            if s.len() != sigma_dims[idx % k] {
                return Err(AdvError::Structural(format!(
                    "σ({},{}) has length {}, expected {}",
                    idx / k,
                    idx % k,
                    s.len(),
                    sigma_dims[idx % k]
                )));
            }
            if s.iter().any(|c| !c.is_finite()) {
                return Err(AdvError::Domain("σ has non-finite entries".into()));
            }
        }
        Ok(Self { arity, k, dim, u, v, sigma_dims, sigma })
    }

    /// A functional witness for `g` plus `σ_{x,g(x)} = (1)`, a witness for `g`
    /// viewed as a relation with `K = 2`.
    pub fn from_functional(w: &FunctionalDualWitness, g: &BooleanFunction) -> Result<Self> {
        if g.arity() != w.arity() {
            return Err(AdvError::Structural("witness arity does not match function".into()));
        }
        let sigma = (0..g.size())
            .flat_map(|x| (0..2).map(move |a| (x, a)))
            .map(|(x, a)| vec![if usize::from(g.value(x)) == a { 1.0 } else { 0.0 }])
            .collect();
        Self::new(w.arity, 2, w.dim, w.u.clone(), w.v.clone(), vec![1, 1], sigma)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sigma_dims(&self) -> &[usize] {
        &self.sigma_dims
    }

    pub fn u(&self, x: usize, i: usize) -> &[f64] {
        &self.u[x * self.arity + i]
    }

    pub fn v(&self, x: usize, i: usize) -> &[f64] {
        &self.v[x * self.arity + i]
    }

    pub fn sigma(&self, x: usize, a: usize) -> &[f64] {
        &self.sigma[x * self.k + a]
    }

    pub fn value(&self) -> f64 {
        objective(&self.u, &self.v, self.arity)
    }

    /// `max_x |Σ_a ‖σ_{x,a}‖² − 1|`.
    pub fn normalization_residual(&self) -> f64 {
        (0..1usize << self.arity)
            .map(|x| ((0..self.k).map(|a| norm_sq(self.sigma(x, a))).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn rescaled(&self, c: f64) -> Self {
        let scale = |fam: &[Vec<f64>], s: f64| fam.iter().map(|w| w.iter().map(|x| x * s).collect()).collect();
        Self { u: scale(&self.u, c), v: scale(&self.v, 1.0 / c), ..self.clone() }
    }

    pub fn to_json(&self) -> WitnessJson {
        let mut sigma = BTreeMap::new();
        for x in 0..1usize << self.arity {
            for a in 0..self.k {
                let s = self.sigma(x, a);
                if s.iter().any(|&c| c != 0.0) {
                    sigma.insert(format!("{x},{a}"), s.to_vec());
                }
            }
        }
        WitnessJson { dim: self.dim, u: keyed(&self.u, self.arity), v: keyed(&self.v, self.arity), sigma }
    }

    /// Missing σ entries are zero vectors; `m_a` is the common length of the
    /// present σ vectors for `a` (0 when none are present).
    pub fn from_json(raw: &WitnessJson, f: &Relation) -> Result<Self> {
        let (arity, k, count) = (f.arity(), f.k(), f.size());
        let u = unkeyed("u", &raw.u, count, arity, |_| Some(raw.dim))?;
        let v = unkeyed("v", &raw.v, count, arity, |_| Some(raw.dim))?;
        let mut dims: Vec<Option<usize>> = vec![None; k];
        for (key, vec) in &raw.sigma {
            let (_, a) = parse_key(key, "σ", count, k)?;
            match dims[a] {
                None => dims[a] = Some(vec.len()),
                Some(d) if d != vec.len() => {
                    return Err(AdvError::Shape(format!("σ vectors for a={a} have lengths {d} and {}", vec.len())))
                }
                _ => {}
            }
        }
        let sigma_dims: Vec<usize> = dims.iter().map(|d| d.unwrap_or(0)).collect();
        let mut sigma = Vec::with_capacity(count * k);
        for x in 0..count {
            for a in 0..k {
                sigma.push(raw.sigma.get(&format!("{x},{a}")).cloned().unwrap_or_else(|| vec![0.0; sigma_dims[a]]));
            }
        }
        Self::new(arity, k, raw.dim, u, v, sigma_dims, sigma)
    }
}

/// JSON witness payload: `{"dim": d, "u": {"x,i": [...]}, "v": {...},
/// "sigma": {"x,a": [...]}}` with `x` the packed input and `i`, `a` 0-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub dim: usize,
    pub u: BTreeMap<String, Vec<f64>>,
    pub v: BTreeMap<String, Vec<f64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub sigma: BTreeMap<String, Vec<f64>>,
}

fn keyed(family: &[Vec<f64>], n: usize) -> BTreeMap<String, Vec<f64>> {
    family
        .iter()
        .enumerate()
        .map(|(idx, w)| (format!("{},{}", idx / n, idx % n), w.clone()))
        .collect()
}

fn parse_key(key: &str, name: &str, count: usize, width: usize) -> Result<(usize, usize)> {
    let bad = || AdvError::Structural(format!("{name} key {key:?} is not \"x,index\" in range"));
    let (x, j) = key.split_once(',').ok_or_else(bad)?;
    let x: usize = x.trim().parse().map_err(|_| bad())?;
    let j: usize = j.trim().parse().map_err(|_| bad())?;
    if x >= count || j >= width {
        return Err(bad());
    }
    Ok((x, j))
}

fn unkeyed(
    name: &str,
    map: &BTreeMap<String, Vec<f64>>,
    count: usize,
    width: usize,
    dim: impl Fn(usize) -> Option<usize>,
) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Option<Vec<f64>>> = vec![None; count * width];
    for (key, vec) in map {
        let (x, j) = parse_key(key, name, count, width)?;
        if Some(vec.len()) != dim(j) {
            return Err(AdvError::Structural(format!("{name}({key}) has length {}", vec.len())));
        }
        out[x * width + j] = Some(vec.clone());
    }
    out.into_iter()
        .enumerate()
        .map(|(idx, w)| {
            w.ok_or_else(|| {
                AdvError::Structural(format!("missing {name} vector for ({},{})", idx / width, idx % width))
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateKind {
    PrimalMatrix,
    DualWitness,
    SdpSolve,
}

/// The object a certificate was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "data", rename_all = "kebab-case")]
pub enum Artifact {
    Matrix(DenseMatrix),
    Witness(WitnessJson),
}

/// A bound value with the residuals that justify it. `valid` holds iff every
/// residual is at most `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCertificate {
    pub value: f64,
    pub kind: CertificateKind,
    pub residuals: BTreeMap<String, f64>,
    pub tolerance: f64,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Artifact>,
}

impl BoundCertificate {
    pub fn new(value: f64, kind: CertificateKind, residuals: BTreeMap<String, f64>, tolerance: f64) -> Self {
        let valid = residuals.values().all(|&r| r <= tolerance);
        Self { value, kind, residuals, tolerance, valid, artifact: None }
    }

    pub fn with_artifact(mut self, artifact: Artifact) -> Self {
        self.artifact = Some(artifact);
        self
    }

    pub fn residual(&self, name: &str) -> Option<f64> {
        self.residuals.get(name).copied()
    }

    /// Largest residual.
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

/// Largest violation of `Σ_{i: x_i≠y_i} ⟨u_{x,i}, v_{y,i}⟩ = [g(x) ≠ g(y)]`
/// over all ordered pairs.
pub fn functional_residual(g: &BooleanFunction, w: &FunctionalDualWitness) -> Result<f64> {
    if g.arity() != w.arity() {
        return Err(AdvError::Structural(format!(
            "witness arity {} does not match function arity {}",
            w.arity(),
            g.arity()
        )));
    }
    let mut worst: f64 = 0.0;
    for x in 0..g.size() {
        for y in 0..g.size() {
            let target = if g.value(x) != g.value(y) { 1.0 } else { 0.0 };
            worst = worst.max((cross_term(&w.u, &w.v, w.arity, x, y) - target).abs());
        }
    }
    Ok(worst)
}

pub fn check_functional_witness(g: &BooleanFunction, w: &FunctionalDualWitness, tol: f64) -> Result<BoundCertificate> {
    let residual = functional_residual(g, w)?;
    let residuals = BTreeMap::from([("constraint".to_string(), residual)]);
    Ok(BoundCertificate::new(w.value(), CertificateKind::DualWitness, residuals, tol)
        .with_artifact(Artifact::Witness(w.to_json())))
}

/// Fails with a structural error if `σ_{x,a} ≠ 0` for some `(x, a) ∉ f`.
pub fn check_sigma_support(f: &Relation, w: &RelationalDualWitness) -> Result<()> {
    if f.arity() != w.arity() || f.k() != w.k() {
        return Err(AdvError::Structural(format!(
            "witness shape (n={}, K={}) does not match relation (n={}, K={})",
            w.arity(),
            w.k(),
            f.arity(),
            f.k()
        )));
    }
    for x in 0..f.size() {
        for a in 0..f.k() {
            if !f.contains(x, a) && w.sigma(x, a).iter().any(|&c| c != 0.0) {
                return Err(AdvError::Structural(format!("σ({x},{a}) is nonzero but ({x},{a}) ∉ f")));
            }
        }
    }
    Ok(())
}

/// Largest violation of
/// `Σ_{i: x_i≠y_i} ⟨u_{x,i}, v_{y,i}⟩ = 1 − Σ_a ⟨σ_{x,a}, σ_{y,a}⟩`.
pub fn relational_residual(f: &Relation, w: &RelationalDualWitness) -> Result<f64> {
    check_sigma_support(f, w)?;
    let mut worst: f64 = 0.0;
    for x in 0..f.size() {
        for y in 0..f.size() {
            let overlap: f64 = (0..f.k()).map(|a| dot(w.sigma(x, a), w.sigma(y, a))).sum();
            let lhs = cross_term(&w.u, &w.v, w.arity, x, y);
            worst = worst.max((lhs - 1.0 + overlap).abs());
        }
    }
    Ok(worst)
}

pub fn check_relational_witness(f: &Relation, w: &RelationalDualWitness, tol: f64) -> Result<BoundCertificate> {
    let residual = relational_residual(f, w)?;
    let residuals = BTreeMap::from([
        ("constraint".to_string(), residual),
        ("normalization".to_string(), w.normalization_residual()),
    ]);
    Ok(BoundCertificate::new(w.value(), CertificateKind::DualWitness, residuals, tol)
        .with_artifact(Artifact::Witness(w.to_json())))
}
