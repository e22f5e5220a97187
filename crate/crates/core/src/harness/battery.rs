use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::{random_matrix, random_psd, random_symmetric, random_unit, trial_rng};
use crate::adversary::{assemble_target_states, measurement_error, solve_adv_rel, AdvOptions, TargetStateAssembly};
use crate::boolean::library::find_one;
use crate::boolean::Relation;
use crate::error::{AdvError, Result};
use crate::linalg::{
    extreme_eigenvalues, hat, lambda_max, lambda_min, lift_by_function, matrix_composition, norm_sq, spectral_norm,
    DenseMatrix,
};

/// Seeded property batteries over the linear-algebra facts the composition
/// proofs rely on, plus the measurement-error bound for assembled states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BatteryKind {
    SpectralLemma,
    HatPsd,
    PsdClosure,
    Lift,
    Sandwich,
    Perturbation,
}

impl BatteryKind {
    pub const ALL: [BatteryKind; 6] = [
        BatteryKind::SpectralLemma,
        BatteryKind::HatPsd,
        BatteryKind::PsdClosure,
        BatteryKind::Lift,
        BatteryKind::Sandwich,
        BatteryKind::Perturbation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BatteryKind::SpectralLemma => "spectral-lemma",
            BatteryKind::HatPsd => "hat-psd",
            BatteryKind::PsdClosure => "psd-closure",
            BatteryKind::Lift => "lift",
            BatteryKind::Sandwich => "sandwich",
            BatteryKind::Perturbation => "perturbation",
        }
    }

    pub fn default_trials(self) -> usize {
        match self {
            BatteryKind::Perturbation | BatteryKind::Lift | BatteryKind::Sandwich => 100,
            _ => 200,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            BatteryKind::SpectralLemma => 1e-8,
            BatteryKind::Sandwich => 1e-12,
            BatteryKind::Perturbation => 1e-12,
            _ => 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatteryReport {
    pub battery: BatteryKind,
    pub seed: u64,
    pub trials: usize,
    pub failures: usize,
    /// Largest trial residual; a trial fails when its residual exceeds the
    /// tolerance.
    pub worst_residual: f64,
    pub tolerance: f64,
    /// Up to ten failing trial indices.
    pub failing_trials: Vec<usize>,
    pub pass: bool,
}

/// `max(|‖C‖ − ‖B‖∏‖A_i‖| / (1 + ‖B‖∏‖A_i‖), λ_max(B)∏‖A_i‖ − λ_max(C))`.
fn spectral_lemma_trial(rng: &mut impl Rng) -> Result<f64> {
    let n_factors = rng.gen_range(1..=3usize);
    let b = random_symmetric(rng, 1 << n_factors);
    let blocks: Vec<DenseMatrix> = (0..n_factors)
        .map(|_| {
            let (r, c) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            random_matrix(rng, r, c)
        })
        .collect();
    let c = matrix_composition(&b, &blocks)?;
    let mut prod = 1.0;
    for a in &blocks {
        prod *= spectral_norm(a)?;
    }
    let expected = spectral_norm(&b)? * prod;
    let (c_max, c_min) = extreme_eigenvalues(&c)?;
    let norm_c = c_max.abs().max(c_min.abs());
    let norm_residual = (norm_c - expected).abs() / (1.0 + expected);
    let lambda_residual = lambda_max(&b)? * prod - c_max;
    Ok(norm_residual.max(lambda_residual))
}

/// `−λ_min(Â) / (1 + ‖A‖)`.
fn hat_psd_trial(rng: &mut impl Rng) -> Result<f64> {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let a = random_matrix(rng, r, c);
    Ok(-lambda_min(&hat(&a)?)? / (1.0 + spectral_norm(&a)?))
}

/// PSD ∘ PSD is PSD and PSD ∘ NSD is NSD.
fn psd_closure_trial(rng: &mut impl Rng) -> Result<f64> {
    let n = rng.gen_range(2..=6);
    let ranks: [usize; 3] = std::array::from_fn(|_| rng.gen_range(1..=n));
    let a = random_psd(rng, n, ranks[0]);
    let b = random_psd(rng, n, ranks[1]);
    let nsd = random_psd(rng, n, ranks[2]).scale(-1.0);
    let psd_residual = -lambda_min(&a.hadamard(&b)?)?;
    let nsd_residual = lambda_max(&a.hadamard(&nsd)?)?;
    Ok(psd_residual.max(nsd_residual))
}

/// Duplicating rows and columns keeps PSD and NSD matrices so.
fn lift_trial(rng: &mut impl Rng) -> Result<f64> {
    let m = rng.gen_range(1..=5);
    let n = rng.gen_range(1..=8);
    let rank = rng.gen_range(1..=m);
    let a = random_psd(rng, m, rank);
    let h: Vec<usize> = (0..n).map(|_| rng.gen_range(0..m)).collect();
    let psd_residual = -lambda_min(&lift_by_function(&a, &h)?)?;
    let nsd_residual = lambda_max(&lift_by_function(&a.scale(-1.0), &h)?)?;
    Ok(psd_residual.max(nsd_residual))
}

/// `λ_min(A) ≤ vᵀAv ≤ λ_max(A)` for 50 unit vectors.
fn sandwich_trial(rng: &mut impl Rng) -> Result<f64> {
    let n = rng.gen_range(1..=8);
    let a = random_symmetric(rng, n);
    let (hi, lo) = extreme_eigenvalues(&a)?;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let q = a.quadratic_form(&random_unit(rng, n));
        worst = worst.max(q - hi).max(lo - q);
    }
    Ok(worst)
}

/// `measurement_error(ψ') − ‖ψ' − ψ‖²`, maximized over inputs.
fn perturbation_trial(rng: &mut impl Rng, f: &Relation, assembly: &TargetStateAssembly) -> Result<f64> {
    let eps = 10f64.powf(rng.gen_range(-6.0..-1.0));
    let approx: Vec<Vec<f64>> = assembly
        .states
        .iter()
        .map(|s| s.iter().map(|&c| c + eps * rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let errors = measurement_error(assembly, &approx, f)?;
    Ok(errors
        .iter()
        .zip(assembly.states.iter().zip(&approx))
        .map(|(&err, (s, t))| {
            let diff: Vec<f64> = s.iter().zip(t).map(|(a, b)| a - b).collect();
            err - norm_sq(&diff)
        })
        .fold(f64::NEG_INFINITY, f64::max))
}

pub fn run_battery(kind: BatteryKind, seed: u64, trials: usize, opts: &AdvOptions) -> Result<BatteryReport> {
    if trials == 0 {
        return Err(AdvError::Config("a battery needs at least one trial".into()));
    }
    let perturbation = if kind == BatteryKind::Perturbation {
        let f = find_one(2)?;
        let w = solve_adv_rel(&f, opts)?.witness;
        let assembly = assemble_target_states(&f, &w)?;
        Some((f, assembly))
    } else {
        None
    };
    let residuals = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            match kind {
                BatteryKind::SpectralLemma => spectral_lemma_trial(&mut rng),
                BatteryKind::HatPsd => hat_psd_trial(&mut rng),
                BatteryKind::PsdClosure => psd_closure_trial(&mut rng),
                BatteryKind::Lift => lift_trial(&mut rng),
                BatteryKind::Sandwich => sandwich_trial(&mut rng),
                BatteryKind::Perturbation => {
                    let (f, assembly) = perturbation.as_ref().expect("built above");
                    perturbation_trial(&mut rng, f, assembly)
                }
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let tolerance = kind.tolerance();
    let failing: Vec<usize> = residuals.iter().enumerate().filter(|(_, &r)| !(r <= tolerance)).map(|(t, _)| t).collect();
    Ok(BatteryReport {
        battery: kind,
        seed,
        trials,
        failures: failing.len(),
        worst_residual: residuals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        tolerance,
        failing_trials: failing.iter().copied().take(10).collect(),
        pass: failing.is_empty(),
    })
}
