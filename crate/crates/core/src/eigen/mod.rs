//! Symmetric eigendecomposition of `H(t)`.
//!
//! Full spectra go through a dense Householder-based solver (faer). The few
//! lowest pairs needed by gap scans come from the matrix-free Lanczos solver
//! once the dimension makes the dense route wasteful.

mod lanczos;
mod tridiag;

use faer::Side;

pub use lanczos::{lanczos_lowest, LanczosConfig, LanczosResult};

use crate::error::{invalid, Error, Result};
use crate::hamiltonian::SymmetricOperator;
use crate::MAX_DENSE_QUBITS;

/// Below this dimension `eig_lowest` truncates a full decomposition.
pub const DENSE_LOWEST_MAX_DIM: usize = 64;

/// Ascending eigenvalues with matching orthonormal eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    t: f64,
    dim: usize,
    values: Vec<f64>,
    /// Column-major: vector `i` occupies `vectors[i*dim .. (i+1)*dim]`.
    vectors: Vec<f64>,
}

impl EigenSystem {
    fn from_parts(t: f64, dim: usize, mut pairs: Vec<(f64, Vec<f64>)>) -> Self {
        // Stable, so ties keep their incoming order.
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut values = Vec::with_capacity(pairs.len());
        let mut vectors = Vec::with_capacity(pairs.len() * dim);
        for (v, mut vec) in pairs {
            fix_sign(&mut vec);
            values.push(v);
            vectors.extend_from_slice(&vec);
        }
        Self {
            t,
            dim,
            values,
            vectors,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks_exact(self.dim)
    }

    /// Largest `|H v - E v|` over the retained pairs.
    pub fn max_residual(&self, op: &SymmetricOperator) -> Result<f64> {
        let mut worst = 0.0f64;
        for (e, v) in self.values.iter().zip(self.vectors()) {
            let hv = op.apply(v)?;
            let r = hv
                .iter()
                .zip(v)
                .map(|(a, b)| (a - e * b).powi(2))
                .sum::<f64>()
                .sqrt();
            worst = worst.max(r);
        }
        Ok(worst)
    }

    /// Largest `|<v_i|v_j> - delta_ij|`.
    pub fn max_orthogonality_error(&self) -> f64 {
        let vs: Vec<&[f64]> = self.vectors().collect();
        let mut worst = 0.0f64;
        for i in 0..vs.len() {
            for j in i..vs.len() {
                let d: f64 = vs[i].iter().zip(vs[j]).map(|(a, b)| a * b).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

/// Make the largest-magnitude component positive (first one on ties).
fn fix_sign(v: &mut [f64]) {
    let mut best = 0.0f64;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best * (1.0 + 1e-12) {
            best = x.abs();
            sign = x.signum();
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

fn check_dense(op: &SymmetricOperator) -> Result<()> {
    if op.n() > MAX_DENSE_QUBITS {
        return Err(invalid(format!(
            "full diagonalization limited to n <= {MAX_DENSE_QUBITS}, got {}",
            op.n()
        )));
    }
    Ok(())
}

/// All `N` eigenpairs.
pub fn eig_full(op: &SymmetricOperator) -> Result<EigenSystem> {
    check_dense(op)?;
    if op.coupling() == 0.0 {
        return Ok(diagonal_system(op, op.dim()));
    }
    let dense = op.to_dense()?;
    let evd = dense
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Convergence(format!("dense eigensolver failed: {e:?}")))?;
    let dim = op.dim();
    let s = evd.S();
    let u = evd.U();
    let pairs = (0..dim)
        .map(|j| (s[j], (0..dim).map(|i| u[(i, j)]).collect()))
        .collect();
    Ok(EigenSystem::from_parts(op.t(), dim, pairs))
}

/// The `k` lowest pairs of a diagonal operator: sorted entries with unit
/// basis vectors, ties kept in index order.
fn diagonal_system(op: &SymmetricOperator, k: usize) -> EigenSystem {
    let dim = op.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| op.diag()[a].total_cmp(&op.diag()[b]));
    let pairs = order
        .into_iter()
        .take(k)
        .map(|i| {
            let mut v = vec![0.0; dim];
            v[i] = 1.0;
            (op.diag()[i], v)
        })
        .collect();
    EigenSystem::from_parts(op.t(), dim, pairs)
}

/// All `N` eigenvalues, ascending, without eigenvectors.
pub fn eigvals_full(op: &SymmetricOperator) -> Result<Vec<f64>> {
    check_dense(op)?;
    let dense = op.to_dense()?;
    let mut vals = dense
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Convergence(format!("dense eigensolver failed: {e:?}")))?;
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// The `k` lowest eigenpairs: truncated dense decomposition for small
/// dimensions, Lanczos otherwise.
pub fn eig_lowest(op: &SymmetricOperator, k: usize) -> Result<EigenSystem> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(invalid(format!("k = {k} outside [1, {dim}]")));
    }
    if op.coupling() == 0.0 {
        return Ok(diagonal_system(op, k));
    }
    if dim <= DENSE_LOWEST_MAX_DIM || (4 * k > dim && op.n() <= MAX_DENSE_QUBITS) {
        return Ok(truncate(eig_full(op)?, k));
    }
    eig_lowest_lanczos(op, k, &LanczosConfig::default())
}

/// The `k` lowest eigenvalues only; same routing as [`eig_lowest`].
pub fn eigvals_lowest(op: &SymmetricOperator, k: usize) -> Result<Vec<f64>> {
    let dim = op.dim();
    if k == 0 || k > dim {
        return Err(invalid(format!("k = {k} outside [1, {dim}]")));
    }
    if dim <= DENSE_LOWEST_MAX_DIM || (4 * k > dim && op.n() <= MAX_DENSE_QUBITS) {
        let mut v = if op.coupling() == 0.0 {
            let mut d = op.diag().to_vec();
            d.sort_by(f64::total_cmp);
            d
        } else {
            eigvals_full(op)?
        };
        v.truncate(k);
        return Ok(v);
    }
    Ok(lanczos_lowest(op, k, &LanczosConfig::default())?.values)
}

/// Lanczos route of [`eig_lowest`], usable at any dimension.
pub fn eig_lowest_lanczos(
    op: &SymmetricOperator,
    k: usize,
    cfg: &LanczosConfig,
) -> Result<EigenSystem> {
    let res = lanczos_lowest(op, k, cfg)?;
    let pairs = res.values.into_iter().zip(res.vectors).collect();
    Ok(EigenSystem::from_parts(op.t(), op.dim(), pairs))
}

fn truncate(mut full: EigenSystem, k: usize) -> EigenSystem {
    full.values.truncate(k);
    full.vectors.truncate(k * full.dim);
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::build_ht;
    use crate::sat::generate_single_solution_instance;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    fn h0_expected(n: usize) -> Vec<f64> {
        let mut v = Vec::new();
        for k in 0..=n {
            v.extend(std::iter::repeat_n(k as f64, binomial(n, k)));
        }
        v
    }

    #[test]
    fn h0_spectrum_binomial() {
        for n in 1..=6 {
            let es = eig_full(&SymmetricOperator::initial(n)).unwrap();
            for (a, b) in es.values().iter().zip(h0_expected(n)) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn h1_lowest_is_simple_zero() {
        let inst = generate_single_solution_instance(8, 3.0, 4, 100_000).unwrap();
        let es = eig_lowest(&build_ht(&inst, 1.0).unwrap(), 2).unwrap();
        assert!(es.values()[0].abs() < 1e-12);
        let expect = 4.0 / inst.alpha() * inst.min_nonsolution_violations() as f64;
        assert!((es.values()[1] - expect).abs() < 1e-10);
    }

    #[test]
    fn lanczos_handles_h0_multiplicities() {
        let op = SymmetricOperator::initial(9);
        let es = eig_lowest_lanczos(&op, 12, &LanczosConfig::default()).unwrap();
        let want = h0_expected(9);
        for (a, b) in es.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "{:?}", es.values());
        }
        assert!(es.max_orthogonality_error() < 1e-9);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        for (n, seed, t) in [(9, 1, 0.5), (10, 2, 0.3), (10, 3, 0.7), (9, 4, 0.999)] {
            let inst = generate_single_solution_instance(n, 3.0, seed, 100_000).unwrap();
            let op = build_ht(&inst, t).unwrap();
            let full = eig_full(&op).unwrap();
            let lz = eig_lowest_lanczos(&op, 4, &LanczosConfig::default()).unwrap();
            for i in 0..4 {
                assert!(
                    (full.values()[i] - lz.values()[i]).abs() < 1e-8,
                    "n={n} t={t} i={i}: {} vs {}",
                    full.values()[i],
                    lz.values()[i]
                );
            }
            let scale = full.values().last().unwrap().abs().max(1.0);
            assert!(lz.max_residual(&op).unwrap() <= 1e-9 * scale);
            assert!(lz.max_orthogonality_error() <= 1e-9);
        }
    }

    #[test]
    fn sign_convention() {
        let inst = generate_single_solution_instance(6, 3.0, 7, 100_000).unwrap();
        let es = eig_full(&build_ht(&inst, 0.4).unwrap()).unwrap();
        for v in es.vectors() {
            let big = v
                .iter()
                .cloned()
                .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
            assert!(big > 0.0);
        }
    }

    #[test]
    fn bad_k() {
        let op = SymmetricOperator::initial(3);
        assert!(eig_lowest(&op, 0).is_err());
        assert!(eig_lowest(&op, 9).is_err());
        assert!(eigvals_lowest(&op, 9).is_err());
    }

    #[test]
    fn values_only_route_matches() {
        for (n, t) in [(6, 0.0), (6, 0.4), (8, 1.0), (9, 0.6)] {
            let inst = generate_single_solution_instance(n, 3.0, 11, 100_000).unwrap();
            let op = build_ht(&inst, t).unwrap();
            let a = eigvals_lowest(&op, 3).unwrap();
            let b = eig_lowest(&op, 3).unwrap();
            for (x, y) in a.iter().zip(b.values()) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }
}
