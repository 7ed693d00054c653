//! Entanglement diagnostics for real pure states.
//!
//! Two-qubit entanglement is measured by the smallest eigenvalue of the
//! partially transposed two-qubit reduced density matrix (negative means
//! entangled), bipartite entanglement by the base-2 von Neumann entropy of
//! the lowest `n/2` qubits. The Schmidt weights come from a singular value
//! decomposition of the reshaped amplitudes, independently of the reduced
//! density route used for the entropy.

use faer::{Mat, Side};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};

/// Eigenvalues below this are treated as exact zeros in entropies.
pub const ENTROPY_EIGEN_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    /// Wraps amplitudes, requiring length `2^n` and unit norm to `1e-9`.
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(invalid(format!("state length {len} is not a power of two")));
        }
        let norm: f64 = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(invalid(format!("state norm {norm} is not 1")));
        }
        Ok(Self {
            n: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    /// Normalizes `amplitudes` first.
    pub fn normalized(mut amplitudes: Vec<f64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(invalid("cannot normalize a zero vector"));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(amplitudes)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        let mut a = vec![0.0; 1 << n];
        *a.get_mut(index)
            .ok_or_else(|| invalid(format!("index {index} out of range")))? = 1.0;
        Self::new(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }
}

/// Partial trace result on an ordered list of kept qubits. Reduced index bit
/// `b` is the value of qubit `kept[b]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    kept: Vec<usize>,
    dim: usize,
    matrix: Vec<f64>,
}

impl ReducedDensity {
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.matrix[r * self.dim + c]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        sym_eigenvalues(self.dim, &self.matrix)
    }

    /// Partial transpose on reduced bit `bit`.
    pub fn partial_transpose(&self, bit: usize) -> Result<Self> {
        if bit >= self.kept.len() {
            return Err(invalid(format!(
                "bit {bit} outside {} kept qubits",
                self.kept.len()
            )));
        }
        let mask = 1 << bit;
        let mut matrix = vec![0.0; self.dim * self.dim];
        for r in 0..self.dim {
            for c in 0..self.dim {
                let (r2, c2) = ((r & !mask) | (c & mask), (c & !mask) | (r & mask));
                matrix[r * self.dim + c] = self.get(r2, c2);
            }
        }
        Ok(Self {
            kept: self.kept.clone(),
            dim: self.dim,
            matrix,
        })
    }
}

fn sym_eigenvalues(dim: usize, data: &[f64]) -> Result<Vec<f64>> {
    let m = Mat::<f64>::from_fn(dim, dim, |i, j| data[i * dim + j]);
    let mut v = m
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Convergence(format!("{e:?}")))?;
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Splits each basis index into (kept bits, environment bits) and returns the
/// `2^k x 2^(n-k)` amplitude matrix, row-major.
fn reshape(state: &StateVector, kept: &[usize]) -> Result<(usize, usize, Vec<f64>)> {
    let n = state.n;
    let mut seen = vec![false; n];
    for &q in kept {
        if q >= n {
            return Err(invalid(format!("qubit {q} out of range for n = {n}")));
        }
        if std::mem::replace(&mut seen[q], true) {
            return Err(invalid(format!("qubit {q} listed twice")));
        }
    }
    let env: Vec<usize> = (0..n).filter(|&q| !seen[q]).collect();
    let rows = 1 << kept.len();
    let cols = 1 << env.len();
    let mut m = vec![0.0; rows * cols];
    for (i, &a) in state.amplitudes.iter().enumerate() {
        let r = kept
            .iter()
            .enumerate()
            .fold(0, |acc, (b, &q)| acc | (((i >> q) & 1) << b));
        let c = env
            .iter()
            .enumerate()
            .fold(0, |acc, (b, &q)| acc | (((i >> q) & 1) << b));
        m[r * cols + c] = a;
    }
    Ok((rows, cols, m))
}

/// Traces out every qubit not in `kept`.
pub fn reduce(state: &StateVector, kept: &[usize]) -> Result<ReducedDensity> {
    let (rows, cols, m) = reshape(state, kept)?;
    let mut rho = vec![0.0; rows * rows];
    for r in 0..rows {
        let mr = &m[r * cols..(r + 1) * cols];
        for c in r..rows {
            let mc = &m[c * cols..(c + 1) * cols];
            let v: f64 = mr.iter().zip(mc).map(|(a, b)| a * b).sum();
            rho[r * rows + c] = v;
            rho[c * rows + r] = v;
        }
    }
    Ok(ReducedDensity {
        kept: kept.to_vec(),
        dim: rows,
        matrix: rho,
    })
}

/// Smallest eigenvalue of the two-qubit reduced state of `(j, k)`, partially
/// transposed on the lower-index qubit.
pub fn ppt_min_eig(state: &StateVector, j: usize, k: usize) -> Result<f64> {
    if j == k {
        return Err(invalid(format!("qubit pair ({j}, {k}) must be distinct")));
    }
    let rho = reduce(state, &[j.min(k), j.max(k)])?;
    Ok(rho.partial_transpose(0)?.eigenvalues()?[0])
}

/// [`ppt_min_eig`] averaged over all `n(n-1)/2` unordered pairs.
pub fn ppt_avg(state: &StateVector) -> Result<f64> {
    let n = state.n;
    if n < 2 {
        return Err(invalid("pair average needs at least two qubits"));
    }
    let mut sum = 0.0;
    for j in 0..n {
        for k in j + 1..n {
            sum += ppt_min_eig(state, j, k)?;
        }
    }
    Ok(2.0 * sum / (n * (n - 1)) as f64)
}

fn half(state: &StateVector) -> Result<Vec<usize>> {
    if !state.n.is_multiple_of(2) {
        return Err(invalid(format!("half cut needs even n, got {}", state.n)));
    }
    Ok((0..state.n / 2).collect())
}

/// Base-2 von Neumann entropy of the lowest `n/2` qubits.
pub fn entropy_half(state: &StateVector) -> Result<f64> {
    entropy_cut(state, &half(state)?)
}

/// Base-2 von Neumann entropy of the reduced state on `kept`.
pub fn entropy_cut(state: &StateVector, kept: &[usize]) -> Result<f64> {
    let vals = reduce(state, kept)?.eigenvalues()?;
    Ok(entropy_of_weights(&vals))
}

/// `-sum w log2 w`, skipping weights below [`ENTROPY_EIGEN_FLOOR`].
pub fn entropy_of_weights(weights: &[f64]) -> f64 {
    let s: f64 = weights
        .iter()
        .filter(|&&w| w > ENTROPY_EIGEN_FLOOR)
        .map(|&w| -w * w.log2())
        .sum();
    s.max(0.0)
}

/// Schmidt weights across the half cut, descending.
pub fn schmidt_spectrum(state: &StateVector) -> Result<Vec<f64>> {
    let kept = half(state)?;
    let (rows, cols, m) = reshape(state, &kept)?;
    let mat = Mat::<f64>::from_fn(rows, cols, |r, c| m[r * cols + c]);
    let sv = mat
        .singular_values()
        .map_err(|e| Error::Convergence(format!("{e:?}")))?;
    let mut w: Vec<f64> = sv.iter().map(|s| s * s).collect();
    w.resize(rows, 0.0);
    w.sort_by(|a, b| b.total_cmp(a));
    Ok(w)
}

/// Independent standard Gaussian amplitudes, normalized.
pub fn random_state(n: usize, seed: u64) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amps: Vec<f64> = (0..1usize << n)
        .map(|_| StandardNormal.sample(&mut rng))
        .collect();
    StateVector::normalized(amps).expect("Gaussian vector is nonzero")
}
