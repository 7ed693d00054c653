//! The adiabatic interpolation `H(t) = (1-t) H(0) + t H(1)`.
//!
//! `H(0) = sum_k A_k` with `A = 1/2 [[1, -1], [-1, 1]]` on each qubit, so it has
//! diagonal `n/2` and `-1/2` between basis states at Hamming distance one.
//! `H(1)` is diagonal: `(4/alpha)` times the number of violated clauses. The
//! prefactor fixes `tr H(t) = N n / 2` for every `t`.

use faer::Mat;

use crate::error::{invalid, Error, Result};
use crate::sat::SatInstance;
use crate::MAX_DENSE_QUBITS;

/// Diagonal of the problem Hamiltonian `H(1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalFinal {
    n: usize,
    alpha: f64,
    entries: Vec<f64>,
}

impl DiagonalFinal {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn prefactor(&self) -> f64 {
        4.0 / self.alpha
    }
}

/// Builds `H(1)` by scattering each clause's `4/alpha` onto the `N/8` basis
/// states that falsify it.
pub fn build_h1(instance: &SatInstance) -> DiagonalFinal {
    let n = instance.n();
    let dim = 1usize << n;
    let weight = 4.0 / instance.alpha();
    let mut counts = vec![0u32; dim];
    for clause in instance.clauses() {
        let (_, pattern) = clause.violating_pattern();
        let vars = clause.literals().map(|l| l.variable);
        for free in 0..dim >> 3 {
            // Spread `free` over the n-3 unconstrained bits.
            let mut idx = free;
            for &v in &vars {
                idx = ((idx >> v) << (v + 1)) | (idx & ((1 << v) - 1));
            }
            counts[idx | pattern] += 1;
        }
    }
    DiagonalFinal {
        n,
        alpha: instance.alpha(),
        entries: counts.into_iter().map(|c| weight * c as f64).collect(),
    }
}

/// `H(t)` stored as a diagonal plus one scalar coupling on every
/// Hamming-distance-one pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    n: usize,
    t: f64,
    diag: Vec<f64>,
    coupling: f64,
}

pub fn build_ht(instance: &SatInstance, t: f64) -> Result<SymmetricOperator> {
    SymmetricOperator::interpolate(&build_h1(instance), t)
}

impl SymmetricOperator {
    /// `(1-t) H(0) + t H(1)` for a prebuilt `H(1)` diagonal.
    pub fn interpolate(h1: &DiagonalFinal, t: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Domain(format!("t = {t} outside [0, 1]")));
        }
        let n = h1.n;
        let base = (1.0 - t) * n as f64 / 2.0;
        let diag = h1.entries.iter().map(|&e| base + t * e).collect();
        Ok(Self {
            n,
            t,
            diag,
            coupling: -(1.0 - t) / 2.0,
        })
    }

    /// The driver `H(0)` alone, without any instance.
    pub fn initial(n: usize) -> Self {
        Self {
            n,
            t: 0.0,
            diag: vec![n as f64 / 2.0; 1 << n],
            coupling: -0.5,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `out = H v`, touching each of the `n` bit-flip neighbours per entry.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) -> Result<()> {
        let dim = self.dim();
        if v.len() != dim || out.len() != dim {
            return Err(invalid(format!(
                "vector lengths {} / {} do not match dimension {dim}",
                v.len(),
                out.len()
            )));
        }
        let c = self.coupling;
        for (i, o) in out.iter_mut().enumerate() {
            let mut hop = 0.0;
            for k in 0..self.n {
                hop += v[i ^ (1 << k)];
            }
            *o = self.diag[i] * v[i] + c * hop;
        }
        Ok(())
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.apply_into(v, &mut out)?;
        Ok(out)
    }

    /// Explicit `N x N` matrix. Limited to `n <= 14`.
    pub fn to_dense(&self) -> Result<Mat<f64>> {
        if self.n > MAX_DENSE_QUBITS {
            return Err(invalid(format!(
                "dense storage limited to n <= {MAX_DENSE_QUBITS}, got {}",
                self.n
            )));
        }
        let dim = self.dim();
        let mut m = Mat::<f64>::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = self.diag[i];
            for k in 0..self.n {
                m[(i, i ^ (1 << k))] = self.coupling;
            }
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::{generate_single_solution_instance, Assignment, Clause, Literal};
    use proptest::prelude::*;

    fn test_instance(n: usize, seed: u64) -> SatInstance {
        generate_single_solution_instance(n, 3.0, seed, 100_000).unwrap()
    }

    #[test]
    fn h1_single_clause() {
        let clause = Clause::new([0, 1, 2].map(|v| Literal::new(v, false))).unwrap();
        let inst = SatInstance::new_unchecked(
            3,
            vec![clause],
            Assignment::from_index(3, 7).unwrap(),
            0,
            0,
        );
        let h1 = build_h1(&inst);
        assert_eq!(h1.entries(), &[12.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn h1_matches_violated_counts() {
        let inst = test_instance(8, 3);
        let h1 = build_h1(&inst);
        let w = 4.0 / inst.alpha();
        for (i, &e) in h1.entries().iter().enumerate() {
            let a = Assignment::from_index(8, i).unwrap();
            assert_eq!(e, w * inst.violated_count(&a).unwrap() as f64);
        }
        let zeros: Vec<usize> = (0..256).filter(|&i| h1.entries()[i] == 0.0).collect();
        assert_eq!(zeros, vec![inst.solution().index()]);
        let sum: f64 = h1.entries().iter().sum();
        assert!((sum - 256.0 * 8.0 / 2.0).abs() < 1e-9);
    }

    #[test]
    fn h0_single_qubit_matrix() {
        let m = SymmetricOperator::initial(1).to_dense().unwrap();
        assert_eq!(
            [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]],
            [0.5, -0.5, -0.5, 0.5]
        );
    }

    #[test]
    fn t_one_is_diagonal_h1() {
        let inst = test_instance(6, 1);
        let op = build_ht(&inst, 1.0).unwrap();
        assert_eq!(op.coupling(), 0.0);
        assert_eq!(op.diag(), build_h1(&inst).entries());
    }

    #[test]
    fn t_out_of_range() {
        let inst = test_instance(5, 1);
        assert!(matches!(build_ht(&inst, 1.5), Err(Error::Domain(_))));
        assert!(matches!(build_ht(&inst, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn apply_kills_known_ground_states() {
        let inst = test_instance(8, 2);
        let dim = inst.dim();
        let uniform = vec![1.0 / (dim as f64).sqrt(); dim];
        let out = build_ht(&inst, 0.0).unwrap().apply(&uniform).unwrap();
        assert!(out.iter().all(|x| x.abs() < 1e-14));
        let mut e = vec![0.0; dim];
        e[inst.solution().index()] = 1.0;
        let out = build_ht(&inst, 1.0).unwrap().apply(&e).unwrap();
        assert!(out.iter().all(|&x| x == 0.0));
        assert!(build_ht(&inst, 0.3).unwrap().apply(&[1.0; 3]).is_err());
    }

    #[test]
    fn dense_is_symmetric_and_linear() {
        let inst = test_instance(5, 9);
        let d0 = build_ht(&inst, 0.0).unwrap().to_dense().unwrap();
        let d1 = build_ht(&inst, 1.0).unwrap().to_dense().unwrap();
        let t = 0.37;
        let dt = build_ht(&inst, t).unwrap().to_dense().unwrap();
        for i in 0..32 {
            for j in 0..32 {
                assert_eq!(dt[(i, j)], dt[(j, i)]);
                let lin = (1.0 - t) * d0[(i, j)] + t * d1[(i, j)];
                assert!((dt[(i, j)] - lin).abs() < 1e-14);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn apply_matches_dense(seed in 0u64..1000, t in 0.0f64..=1.0, n in 4usize..=8) {
            let inst = test_instance(n, seed);
            let op = build_ht(&inst, t).unwrap();
            let dense = op.to_dense().unwrap();
            let dim = op.dim();
            let v: Vec<f64> = (0..dim).map(|i| ((i as f64 + seed as f64) * 0.618).sin()).collect();
            let fast = op.apply(&v).unwrap();
            for i in 0..dim {
                let slow: f64 = (0..dim).map(|j| dense[(i, j)] * v[j]).sum();
                let scale = slow.abs().max(1.0);
                prop_assert!((fast[i] - slow).abs() <= 1e-12 * scale);
            }
        }

        #[test]
        fn trace_is_time_independent(seed in 0u64..1000, t in 0.0f64..=1.0, n in 4usize..=10) {
            let inst = test_instance(n, seed);
            let tr = build_ht(&inst, t).unwrap().trace();
            let expect = (1usize << n) as f64 * n as f64 / 2.0;
            prop_assert!((tr - expect).abs() <= 1e-12 * expect);
        }
    }
}
