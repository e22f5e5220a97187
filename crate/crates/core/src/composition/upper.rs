use super::index::BlockIndex;
use crate::adversary::{check_functional_witness, check_relational_witness, FunctionalDualWitness, RelationalDualWitness};
use crate::boolean::{compose_relation, tilde_unchecked, BooleanFunction, InputLabel, Relation, DEFAULT_MAX_ARITY};
use crate::error::{AdvError, Result};

/// Input witnesses must pass their checkers at this tolerance.
pub const INPUT_WITNESS_TOL: f64 = 1e-6;

/// Largest number of floats in a composed witness.
const MAX_WITNESS_FLOATS: usize = 1 << 24;

fn tensor(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().flat_map(|&s| b.iter().map(move |&t| s * t)).collect()
}

/// Witness for `f ∘ gᴺ` built from witnesses of `f` and `g`:
/// `α_{x,ℓ} = ψ_{x̃,p} ⊗ u_{x_p,q}`, `β_{x,ℓ} = φ_{x̃,p} ⊗ v_{x_p,q}` and
/// `ρ_{x,a} = σ_{x̃,a}`, where `ℓ = p·m + q`.
pub fn compose_dual_witnesses(
    f: &Relation,
    w_f: &RelationalDualWitness,
    g: &BooleanFunction,
    w_g: &FunctionalDualWitness,
) -> Result<RelationalDualWitness> {
    let cert_f = check_relational_witness(f, w_f, INPUT_WITNESS_TOL)?;
    if !cert_f.valid {
        return Err(AdvError::CertificateInvalid(format!(
            "outer witness residual {:e} exceeds {INPUT_WITNESS_TOL:e}",
            cert_f.max_residual()
        )));
    }
    let cert_g = check_functional_witness(g, w_g, INPUT_WITNESS_TOL)?;
    if !cert_g.valid {
        return Err(AdvError::CertificateInvalid(format!(
            "inner witness residual {:e} exceeds {INPUT_WITNESS_TOL:e}",
            cert_g.max_residual()
        )));
    }

    let n_blocks = f.arity();
    let m = g.arity();
    let bits = n_blocks * m;
    let dim = w_f.dim() * w_g.dim();
    if bits > DEFAULT_MAX_ARITY || (bits << bits).saturating_mul(2 * dim.max(1)) > MAX_WITNESS_FLOATS {
        return Err(AdvError::Size(format!(
            "composed witness over {bits} bits of dimension {dim} is too large"
        )));
    }
    let h = compose_relation(f, g)?;
    let size = 1usize << bits;
    let mut alpha = Vec::with_capacity(size * bits);
    let mut beta = Vec::with_capacity(size * bits);
    let mut rho = Vec::with_capacity(size * f.k());
    for x in 0..size {
        let label = InputLabel(x);
        let xt = tilde_unchecked(g, label, n_blocks).0;
        for idx in BlockIndex::all(n_blocks, m) {
            let xp = label.block(idx.p, m);
            alpha.push(tensor(w_f.u(xt, idx.p), w_g.u(xp, idx.q)));
            beta.push(tensor(w_f.v(xt, idx.p), w_g.v(xp, idx.q)));
        }
        for a in 0..f.k() {
            rho.push(if h.contains(x, a) { w_f.sigma(xt, a).to_vec() } else { vec![0.0; w_f.sigma_dims()[a]] });
        }
    }
    RelationalDualWitness::new(bits, f.k(), dim, alpha, beta, w_f.sigma_dims().to_vec(), rho)
}
