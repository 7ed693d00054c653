//! Matrix-free Lanczos with full reorthogonalization.
//!
//! The Krylov basis is kept explicitly and every new vector is
//! reorthogonalized against it, so no spurious copies appear. When the
//! recurrence hits an invariant subspace a fresh random vector orthogonal to
//! the basis is appended with a zero coupling, which lets repeated eigenvalues
//! (e.g. the binomial multiplicities of `H(0)`) show up with their full
//! multiplicity.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::tridiag::{eigenvector, lowest_eigenvalues};
use crate::error::{Error, Result};
use crate::hamiltonian::SymmetricOperator;

#[derive(Debug, Clone, Copy)]
pub struct LanczosConfig {
    /// Relative residual target, measured against `max(1, |spectral radius|)`.
    pub tol: f64,
    /// Hard cap on the Krylov dimension.
    pub max_dim: usize,
    /// Steps between convergence checks.
    pub check_every: usize,
    /// Seed for the start (and restart) vectors.
    pub seed: u64,
}

impl Default for LanczosConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_dim: 1500,
            check_every: 8,
            seed: 0x5eed_1a4c,
        }
    }
}

pub struct LanczosResult {
    pub values: Vec<f64>,
    /// Ritz vectors, each of length `dim`.
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    // Eight independent partial sums so the loop vectorizes.
    let mut acc = [0.0f64; 8];
    let (ca, cb) = (a.chunks_exact(8), b.chunks_exact(8));
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| x * y)
        .sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            acc[l] += x[l] * y[l];
        }
    }
    acc.iter().sum::<f64>() + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

/// Classical Gram-Schmidt, repeated once if the first pass removed most of
/// the norm (the DGKS test), which is when cancellation can leave components
/// behind.
fn orthogonalize(basis: &[Vec<f64>], w: &mut [f64]) {
    let mut before = dot(w, w).sqrt();
    for _ in 0..2 {
        let coeffs: Vec<f64> = basis.iter().map(|q| dot(q, w)).collect();
        for (c, q) in coeffs.iter().zip(basis) {
            axpy(-c, q, w);
        }
        let after = dot(w, w).sqrt();
        if after > std::f64::consts::FRAC_1_SQRT_2 * before {
            break;
        }
        before = after;
    }
}

fn random_unit(rng: &mut ChaCha8Rng, dim: usize, basis: &[Vec<f64>]) -> Option<Vec<f64>> {
    let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
    orthogonalize(basis, &mut v);
    let norm = dot(&v, &v).sqrt();
    if norm < 1e-8 {
        return None;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    Some(v)
}

/// Ritz pairs of the projected tridiagonal, split into unreduced blocks.
/// Returns `(value, block_start, block-local vector)` for the `k` lowest.
fn ritz(diag: &[f64], off: &[f64], k: usize) -> Vec<(f64, usize, Vec<f64>)> {
    let m = diag.len();
    let mut blocks = Vec::new();
    let mut start = 0;
    for i in 0..m {
        if i + 1 == m || off[i] == 0.0 {
            blocks.push((start, i + 1));
            start = i + 1;
        }
    }
    let mut cands: Vec<(f64, usize, usize)> = Vec::new();
    for (b, &(s, e)) in blocks.iter().enumerate() {
        for v in lowest_eigenvalues(&diag[s..e], &off[s..e - 1], k) {
            cands.push((v, b, s));
        }
    }
    cands.sort_by(|a, b| a.0.total_cmp(&b.0));
    cands.truncate(k);
    let mut per_block: Vec<Vec<Vec<f64>>> = vec![Vec::new(); blocks.len()];
    cands
        .into_iter()
        .map(|(v, b, s)| {
            let (_, e) = blocks[b];
            let x = eigenvector(&diag[s..e], &off[s..e - 1], v, &per_block[b]);
            per_block[b].push(x.clone());
            (v, s, x)
        })
        .collect()
}

/// The `k` lowest eigenpairs of `op`.
pub fn lanczos_lowest(
    op: &SymmetricOperator,
    k: usize,
    cfg: &LanczosConfig,
) -> Result<LanczosResult> {
    let dim = op.dim();
    let max_dim = cfg.max_dim.min(dim);
    if k == 0 || k > max_dim {
        return Err(Error::InvalidInput(format!(
            "k = {k} outside [1, {max_dim}]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_dim.min(256));
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut w = vec![0.0; dim];
    let mut q = random_unit(&mut rng, dim, &[]).expect("nonzero start vector");
    let min_dim = (2 * k + 10).min(max_dim);
    let mut scale = 1.0f64;
    // Residual norm left behind at the end of each closed block, keyed by the
    // block's end index.
    let mut cut_beta: Vec<(usize, f64)> = Vec::new();
    let mut restarted = false;
    let mut verified: Option<Vec<f64>> = None;

    loop {
        op.apply_into(&q, &mut w)?;
        let a = dot(&q, &w);
        // Three-term recurrence first, then a full reorthogonalization.
        axpy(-a, &q, &mut w);
        if let (Some(&b), Some(prev)) = (betas.last(), basis.last()) {
            axpy(-b, prev, &mut w);
        }
        basis.push(std::mem::take(&mut q));
        alphas.push(a);
        scale = scale.max(a.abs());
        orthogonalize(&basis, &mut w);
        let mut beta = dot(&w, &w).sqrt();
        let j = basis.len();
        scale = scale.max(beta);

        let exhausted = j == max_dim;
        let invariant = beta <= 1e-12 * scale;
        if invariant {
            beta = 0.0;
        }
        let mut close_block = invariant;
        let check = exhausted || invariant || (j >= min_dim && j.is_multiple_of(cfg.check_every));
        if check && j >= k {
            let pairs = ritz(&alphas, &betas, k);
            let spread = pairs.iter().map(|p| p.0.abs()).fold(scale, f64::max);
            let thresh = cfg.tol * spread.max(1.0);
            let residuals: Vec<f64> = pairs
                .iter()
                .map(|(_, s, x)| {
                    let end = s + x.len();
                    let b = if end == j {
                        beta
                    } else {
                        cut_beta.iter().find(|c| c.0 == end).map_or(0.0, |c| c.1)
                    };
                    b * x[x.len() - 1].abs()
                })
                .collect();
            let mut converged = pairs.len() == k
                && (j >= min_dim || j == dim)
                && residuals.iter().all(|&r| r <= thresh);
            if converged && restarted && j < dim {
                // A restart happened, so a repeated eigenvalue may still be
                // under-counted. Accept only once one more random block leaves
                // the lowest values unchanged.
                let vals: Vec<f64> = pairs.iter().map(|p| p.0).collect();
                let block_done = invariant || {
                    let s = cut_beta.last().map_or(0, |c| c.0);
                    let d = &alphas[s..];
                    let o = &betas[s..j - 1];
                    let low = lowest_eigenvalues(d, o, 1)[0];
                    let x = eigenvector(d, o, low, &[]);
                    beta * x[x.len() - 1].abs() <= thresh
                };
                let stable = block_done
                    && verified.as_ref().is_some_and(|prev| {
                        prev.iter().zip(&vals).all(|(p, v)| (p - v).abs() <= thresh)
                    });
                if !stable {
                    converged = false;
                    if verified.is_none() || block_done {
                        verified = Some(vals);
                        close_block = !exhausted;
                    }
                }
            }
            if converged || j == dim {
                let vectors = pairs
                    .iter()
                    .map(|(_, s, x)| {
                        let mut v = vec![0.0; dim];
                        for (c, qb) in x.iter().zip(&basis[*s..*s + x.len()]) {
                            axpy(*c, qb, &mut v);
                        }
                        v
                    })
                    .collect();
                return Ok(LanczosResult {
                    values: pairs.iter().map(|p| p.0).collect(),
                    vectors,
                    residuals,
                    iterations: j,
                });
            }
            if exhausted {
                return Err(Error::Convergence(format!(
                    "Lanczos reached dimension {j} with residuals {residuals:?} above {thresh:e}"
                )));
            }
        }
        if close_block {
            match random_unit(&mut rng, dim, &basis) {
                Some(v) => {
                    cut_beta.push((j, beta));
                    betas.push(0.0);
                    restarted = true;
                    q = v;
                }
                None => {
                    return Err(Error::Convergence(format!(
                        "could not extend Krylov basis beyond {j} vectors"
                    )))
                }
            }
        } else {
            betas.push(beta);
            q = w.iter().map(|x| x / beta).collect();
        }
    }
}
