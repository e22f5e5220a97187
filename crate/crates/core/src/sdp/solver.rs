use rayon::prelude::*;
use serde::Serialize;

use super::problem::{Entry, SdpProblem, Sense, SymTerms};
use crate::error::{AdvError, Result};
use crate::linalg::{
    cholesky, cholesky_solve, lower_triangular_inverse, spd_inverse, sym_eigenvalues, DenseMatrix,
};

pub const DEFAULT_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_MAX_DIM: usize = 512;
pub const DEFAULT_MAX_CONSTRAINTS: usize = 2000;

const STEP_FRACTION: f64 = 0.95;
const DIVERGENCE_LIMIT: f64 = 1e12;
const STALL_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_dim: usize,
    pub max_constraints: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            max_dim: DEFAULT_MAX_DIM,
            max_constraints: DEFAULT_MAX_CONSTRAINTS,
        }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Optimal,
    MaxIterations,
    InfeasibleDetected,
}

/// Per-iteration trace. Objectives are in the problem's own sense.
/// `defect = |yᵀr_p| + |⟨R_d, X⟩|` bounds how far an infeasible iterate can
/// violate weak duality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterateRecord {
    pub iteration: usize,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub complementarity: f64,
    pub defect: f64,
}

/// Result of a solve. Dual multipliers `y` satisfy `bᵀy = dual_value`; for a
/// minimization `C − Σ y_k A_k = S ⪰ 0`, for a maximization
/// `Σ y_k A_k − C = S ⪰ 0`.
#[derive(Debug, Clone, Serialize)]
pub struct SdpSolution {
    pub status: SolveStatus,
    pub primal: Vec<DenseMatrix>,
    pub dual: Vec<f64>,
    pub slack: Vec<DenseMatrix>,
    pub primal_value: f64,
    pub dual_value: f64,
    pub iterations: usize,
    /// `max_k |⟨A_k, X⟩ − b_k| / (1 + |b_k|)`
    pub primal_residual: f64,
    /// `‖R_d‖_F / (1 + ‖C‖_F)`
    pub dual_residual: f64,
    /// `|primal − dual| / (1 + |primal|)`
    pub gap: f64,
    pub min_eigenvalue: f64,
    #[serde(skip)]
    pub history: Vec<IterateRecord>,
}

impl SdpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

struct Iterate {
    x: Vec<DenseMatrix>,
    y: Vec<f64>,
    s: Vec<DenseMatrix>,
}

struct Metrics {
    pobj: f64,
    dobj: f64,
    prel: f64,
    drel: f64,
    gap: f64,
    mu: f64,
    defect: f64,
    rp: Vec<f64>,
    rd: Vec<DenseMatrix>,
}

impl Metrics {
    fn merit(&self) -> f64 {
        self.prel.max(self.drel).max(self.gap)
    }
}

struct Direction {
    dx: Vec<DenseMatrix>,
    dy: Vec<f64>,
    ds: Vec<DenseMatrix>,
}

struct Solver<'a> {
    blocks: &'a [usize],
    n: f64,
    c: SymTerms,
    c_norm: f64,
    cons: Vec<SymTerms>,
    expanded: Vec<Vec<(usize, usize, usize, f64)>>,
    b: Vec<f64>,
}

/// Solves `p` with an infeasible-start primal-dual interior-point method
/// (HKM direction, Mehrotra predictor-corrector). Deterministic.
pub fn solve(p: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    let dim = p.total_dim();
    if dim > opts.max_dim {
        return Err(AdvError::Size(format!("SDP dimension {dim} exceeds cap {}", opts.max_dim)));
    }
    let m = p.constraints().len();
    if m == 0 {
        return Err(AdvError::Domain("SDP has no constraints".into()));
    }
    if m > opts.max_constraints {
        return Err(AdvError::Size(format!(
            "SDP has {m} constraints, cap is {}",
            opts.max_constraints
        )));
    }
    if !(opts.tol > 0.0) {
        return Err(AdvError::Config(format!("tolerance {} must be positive", opts.tol)));
    }

    let sign = match p.sense() {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let objective: Vec<Entry> =
        p.objective().iter().map(|e| Entry { value: sign * e.value, ..*e }).collect();
    let c = SymTerms::from_entries(&objective);
    let cons: Vec<SymTerms> = p.constraints().iter().map(|k| SymTerms::from_entries(&k.entries)).collect();
    let solver = Solver {
        blocks: p.blocks(),
        n: dim as f64,
        c_norm: c.frobenius(),
        expanded: cons.iter().map(SymTerms::expanded).collect(),
        c,
        cons,
        b: p.constraints().iter().map(|k| k.rhs).collect(),
    };
    let mut sol = solver.run(opts);
    if p.sense() == Sense::Maximize {
        sol.primal_value = -sol.primal_value;
        sol.dual_value = -sol.dual_value;
        sol.dual.iter_mut().for_each(|v| *v = -*v);
        for r in &mut sol.history {
            r.primal_objective = -r.primal_objective;
            r.dual_objective = -r.dual_objective;
        }
    }
    Ok(sol)
}

impl Solver<'_> {
    fn zeros(&self) -> Vec<DenseMatrix> {
        self.blocks.iter().map(|&k| DenseMatrix::zeros(k, k)).collect()
    }

    fn scaled_identity(&self, s: f64) -> Vec<DenseMatrix> {
        self.blocks.iter().map(|&k| DenseMatrix::identity(k).scale(s)).collect()
    }

    fn initial(&self) -> Iterate {
        let nmax = self.n.sqrt().max(10.0);
        let mut xi = nmax;
        let mut eta = nmax.max(self.c_norm);
        for (k, a) in self.cons.iter().enumerate() {
            let an = a.frobenius();
            xi = xi.max(self.n * (1.0 + self.b[k].abs()) / (1.0 + an));
            eta = eta.max(an);
        }
        Iterate { x: self.scaled_identity(xi), y: vec![0.0; self.cons.len()], s: self.scaled_identity(eta) }
    }

    /// `Σ y_k A_k` as block matrices.
    fn adjoint(&self, y: &[f64]) -> Vec<DenseMatrix> {
        let mut out = self.zeros();
        for (a, &yk) in self.cons.iter().zip(y) {
            if yk != 0.0 {
                a.add_to(yk, &mut out);
            }
        }
        out
    }

    fn metrics(&self, it: &Iterate) -> Metrics {
        let rp: Vec<f64> = self.cons.iter().zip(&self.b).map(|(a, &bk)| bk - a.inner(&it.x)).collect();
        let aty = self.adjoint(&it.y);
        let mut rd = self.zeros();
        self.c.add_to(1.0, &mut rd);
        for ((r, s), a) in rd.iter_mut().zip(&it.s).zip(&aty) {
            r.axpy(-1.0, s);
            r.axpy(-1.0, a);
        }
        let pobj = self.c.inner(&it.x);
        let dobj: f64 = self.b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
        let xs: f64 = it.x.iter().zip(&it.s).map(|(x, s)| x.frobenius_dot(s)).sum();
        let prel = rp.iter().zip(&self.b).map(|(r, b)| r.abs() / (1.0 + b.abs())).fold(0.0, f64::max);
        let rd_norm = rd.iter().map(|r| r.frobenius().powi(2)).sum::<f64>().sqrt();
        let ytrp: f64 = it.y.iter().zip(&rp).map(|(y, r)| y * r).sum();
        let rdx: f64 = rd.iter().zip(&it.x).map(|(r, x)| r.frobenius_dot(x)).sum();
        Metrics {
            pobj,
            dobj,
            prel,
            drel: rd_norm / (1.0 + self.c_norm),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs()),
            mu: xs / self.n,
            defect: ytrp.abs() + rdx.abs(),
            rp,
            rd,
        }
    }

    /// Schur complement `M_kl = Tr(A_k X A_l S⁻¹)`.
    fn schur(&self, x: &[DenseMatrix], sinv: &[DenseMatrix]) -> DenseMatrix {
        let m = self.cons.len();
        let row = |k: usize| -> Vec<f64> {
            let mut out = vec![0.0; m];
            let ek = &self.expanded[k];
            for (l, el) in self.expanded.iter().enumerate().skip(k) {
                let mut acc = 0.0;
                for &(b, r, c, a) in ek {
                    let (xb, sb) = (&x[b], &sinv[b]);
                    for &(b2, r2, c2, a2) in el {
                        if b2 == b {
                            acc += a * a2 * xb[(c, r2)] * sb[(c2, r)];
                        }
                    }
                }
                out[l] = acc;
            }
            out
        };
        let rows: Vec<Vec<f64>> = if m >= 64 {
            (0..m).into_par_iter().map(row).collect()
        } else {
            (0..m).map(row).collect()
        };
        let mut out = DenseMatrix::zeros(m, m);
        for (k, r) in rows.iter().enumerate() {
            for l in k..m {
                out[(k, l)] = r[l];
                out[(l, k)] = r[l];
            }
        }
        out
    }

    fn direction(
        &self,
        it: &Iterate,
        sinv: &[DenseMatrix],
        chol_m: &DenseMatrix,
        met: &Metrics,
        h: &[DenseMatrix],
    ) -> Result<Direction> {
        let mut xrs = Vec::with_capacity(h.len());
        for ((x, rd), si) in it.x.iter().zip(&met.rd).zip(sinv) {
            xrs.push(x.matmul(rd)?.matmul(si)?);
        }
        let mut dy: Vec<f64> = self
            .cons
            .iter()
            .zip(&met.rp)
            .map(|(a, &rp)| rp - a.inner(h) + a.inner(&xrs))
            .collect();
        cholesky_solve(chol_m, &mut dy);
        let aty = self.adjoint(&dy);
        let mut ds = met.rd.clone();
        for (d, a) in ds.iter_mut().zip(&aty) {
            d.axpy(-1.0, a);
        }
        let mut dx = Vec::with_capacity(h.len());
        for (((x, d), si), hb) in it.x.iter().zip(&ds).zip(sinv).zip(h) {
            let mut t = hb.clone();
            t.axpy(-1.0, &x.matmul(d)?.matmul(si)?);
            dx.push(t.symmetrized());
        }
        Ok(Direction { dx, dy, ds })
    }

    fn run(&self, opts: &SolverOptions) -> SdpSolution {
        let mut it = self.initial();
        let mut history = Vec::new();
        let mut best: Option<(f64, Iterate, Metrics, usize)> = None;
        let mut status = SolveStatus::MaxIterations;
        let mut stalled = 0;
        let mut iterations = 0;

        for iter in 0..=opts.max_iter {
            let met = self.metrics(&it);
            history.push(IterateRecord {
                iteration: iter,
                primal_objective: met.pobj,
                dual_objective: met.dobj,
                primal_residual: met.prel,
                dual_residual: met.drel,
                complementarity: met.mu,
                defect: met.defect,
            });
            iterations = iter;
            let converged = met.prel <= opts.tol && met.drel <= opts.tol && met.gap <= opts.tol;
            let better = best.as_ref().is_none_or(|(mer, ..)| met.merit() < *mer);
            if converged {
                status = SolveStatus::Optimal;
                best = Some((met.merit(), it, met, iter));
                break;
            }
            let size = it.x.iter().chain(&it.s).map(DenseMatrix::max_abs).fold(0.0, f64::max);
            if !size.is_finite() || size > DIVERGENCE_LIMIT * (1.0 + self.c_norm) {
                status = SolveStatus::InfeasibleDetected;
                break;
            }
            if iter == opts.max_iter {
                if better {
                    best = Some((met.merit(), it, met, iter));
                }
                break;
            }
            let step = self.step(&it, &met);
            if better {
                best = Some((met.merit(), Iterate { x: it.x.clone(), y: it.y.clone(), s: it.s.clone() }, met, iter));
            }
            match step {
                Ok((next, alpha)) => {
                    stalled = if alpha < 1e-8 { stalled + 1 } else { 0 };
                    it = next;
                    if stalled >= STALL_LIMIT {
                        break;
                    }
                }
                Err(_) => break,
            }
        }

        let (_, it, met, at) = best.expect("at least one iterate is recorded");
        if status != SolveStatus::Optimal && status != SolveStatus::InfeasibleDetected {
            status = SolveStatus::MaxIterations;
        }
        let min_eigenvalue = it
            .x
            .iter()
            .filter_map(|x| sym_eigenvalues(x).ok().and_then(|e| e.last().copied()))
            .fold(f64::INFINITY, f64::min);
        SdpSolution {
            status,
            primal_value: met.pobj,
            dual_value: met.dobj,
            primal_residual: met.prel,
            dual_residual: met.drel,
            gap: met.gap,
            min_eigenvalue,
            iterations: iterations.max(at),
            primal: it.x,
            dual: it.y,
            slack: it.s,
            history,
        }
    }

    fn step(&self, it: &Iterate, met: &Metrics) -> Result<(Iterate, f64)> {
        let sinv = it.s.iter().map(spd_inverse).collect::<Result<Vec<_>>>()?;
        let mut mmat = self.schur(&it.x, &sinv);
        let chol_m = match cholesky(&mmat) {
            Ok(l) => l,
            Err(_) => {
                let reg = 1e-12 * (0..mmat.rows()).map(|k| mmat[(k, k)]).fold(1e-300, f64::max);
                for k in 0..mmat.rows() {
                    mmat[(k, k)] += reg;
                }
                cholesky(&mmat)?
            }
        };

        let neg_x: Vec<DenseMatrix> = it.x.iter().map(|x| x.scale(-1.0)).collect();
        let pred = self.direction(it, &sinv, &chol_m, met, &neg_x)?;
        let ap = max_step(&it.x, &pred.dx)?.min(1.0);
        let ad = max_step(&it.s, &pred.ds)?.min(1.0);
        let mut mu_aff = 0.0;
        for b in 0..self.blocks.len() {
            let mut xb = it.x[b].clone();
            xb.axpy(ap, &pred.dx[b]);
            let mut sb = it.s[b].clone();
            sb.axpy(ad, &pred.ds[b]);
            mu_aff += xb.frobenius_dot(&sb);
        }
        mu_aff /= self.n;
        let sigma = (mu_aff / met.mu).clamp(0.0, 1.0).powi(3);

        let mut h = Vec::with_capacity(self.blocks.len());
        for b in 0..self.blocks.len() {
            let mut t = sinv[b].scale(sigma * met.mu);
            t.axpy(-1.0, &it.x[b]);
            t.axpy(-1.0, &pred.dx[b].matmul(&pred.ds[b])?.matmul(&sinv[b])?);
            h.push(t);
        }
        let corr = self.direction(it, &sinv, &chol_m, met, &h)?;
        let ap = (STEP_FRACTION * max_step(&it.x, &corr.dx)?).min(1.0);
        let ad = (STEP_FRACTION * max_step(&it.s, &corr.ds)?).min(1.0);

        let mut next = Iterate { x: it.x.clone(), y: it.y.clone(), s: it.s.clone() };
        for b in 0..self.blocks.len() {
            next.x[b].axpy(ap, &corr.dx[b]);
            next.s[b].axpy(ad, &corr.ds[b]);
        }
        for (y, d) in next.y.iter_mut().zip(&corr.dy) {
            *y += ad * d;
        }
        Ok((next, ap.min(ad)))
    }
}

/// Largest `α` with `X + α dX ⪰ 0` (infinite when `dX ⪰ 0`).
fn max_step(x: &[DenseMatrix], dx: &[DenseMatrix]) -> Result<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.iter().zip(dx) {
        let lmin = if xb.rows() == 1 {
            db[(0, 0)] / xb[(0, 0)]
        } else {
            let linv = lower_triangular_inverse(&cholesky(xb)?);
            let w = linv.matmul(db)?.matmul(&linv.transpose())?.symmetrized();
            *sym_eigenvalues(&w)?.last().expect("nonempty block")
        };
        if lmin < 0.0 {
            alpha = alpha.min(-1.0 / lmin);
        }
    }
    Ok(alpha)
}
