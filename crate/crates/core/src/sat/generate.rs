use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{count_solutions_capped, Assignment, Clause, Literal, SatInstance};
use crate::error::{invalid, Error, Result};
use crate::MAX_ENUM_VARS;

/// Default rejection budget. At `n = 12, alpha = 3` roughly one try in
/// thirty is accepted, so this leaves a wide margin.
pub const DEFAULT_MAX_TRIES: u64 = 100_000;

/// Rejection-samples a random 3-SAT instance with exactly one solution.
///
/// Each try draws `m = round(alpha * n)` distinct canonical clauses: three
/// distinct variables uniformly without replacement and an independent fair
/// sign per literal; a clause equal to one already drawn is redrawn. The try
/// is accepted iff exhaustive enumeration finds exactly one satisfying
/// assignment. The result is a pure function of `(n, alpha, seed, max_tries)`.
pub fn generate_single_solution_instance(
    n: usize,
    alpha: f64,
    seed: u64,
    max_tries: u64,
) -> Result<SatInstance> {
    if !(3..=MAX_ENUM_VARS).contains(&n) {
        return Err(invalid(format!("n = {n} outside [3, {MAX_ENUM_VARS}]")));
    }
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(invalid(format!("alpha = {alpha} must be positive")));
    }
    if max_tries == 0 {
        return Err(invalid("max_tries must be at least 1"));
    }
    let m = (alpha * n as f64).round() as usize;
    if m == 0 {
        return Err(invalid(format!(
            "round(alpha * n) = 0 for alpha = {alpha}, n = {n}"
        )));
    }
    let distinct = 8 * n * (n - 1) * (n - 2) / 6;
    if m > distinct {
        return Err(invalid(format!(
            "m = {m} exceeds the {distinct} distinct clauses on {n} variables"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for tries in 1..=max_tries {
        let clauses = draw_clauses(&mut rng, n, m);
        if count_solutions_capped(n, &clauses, 2)? == 1 {
            let sol = (0..1usize << n)
                .find(|&bits| !clauses.iter().any(|c| c.is_violated_by(bits)))
                .expect("counted one solution");
            let solution = Assignment::from_index(n, sol)?;
            return Ok(SatInstance::new_unchecked(
                n, clauses, solution, seed, tries,
            ));
        }
    }
    Err(Error::GenerationFailed { tries: max_tries })
}

fn draw_clauses<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<Clause> {
    let mut seen = HashSet::with_capacity(m);
    let mut clauses = Vec::with_capacity(m);
    while clauses.len() < m {
        let vars = sample(rng, n, 3);
        let lits = [0, 1, 2].map(|k| Literal::new(vars.index(k), rng.gen::<bool>()));
        let clause = Clause::new(lits).expect("sampled variables are distinct");
        if seen.insert(clause) {
            clauses.push(clause);
        }
    }
    clauses
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::count_solutions;

    #[test]
    fn deterministic_per_seed() {
        let a = generate_single_solution_instance(10, 3.0, 17, DEFAULT_MAX_TRIES).unwrap();
        let b = generate_single_solution_instance(10, 3.0, 17, DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(a, b);
        let c = generate_single_solution_instance(10, 3.0, 18, DEFAULT_MAX_TRIES).unwrap();
        assert_ne!(a.clauses(), c.clauses());
    }

    #[test]
    fn accepted_instances_have_one_solution() {
        for seed in 0..10 {
            let inst = generate_single_solution_instance(10, 3.0, seed, DEFAULT_MAX_TRIES).unwrap();
            assert_eq!(inst.m(), 30);
            assert!((inst.alpha() - 3.0).abs() < 1e-12);
            assert_eq!(count_solutions(inst.n(), inst.clauses()).unwrap(), 1);
            assert_eq!(inst.violated_count(&inst.solution()).unwrap(), 0);
            let unique: HashSet<_> = inst.clauses().iter().collect();
            assert_eq!(unique.len(), inst.m());
        }
    }

    #[test]
    fn non_integer_alpha_rounds_clause_count() {
        let inst = generate_single_solution_instance(7, 4.3, 5, DEFAULT_MAX_TRIES).unwrap();
        assert_eq!(inst.m(), 30);
        assert!((inst.alpha() - 30.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn exhausted_budget_reports_tries() {
        // alpha = 1 at n = 10 almost never has a unique solution.
        let err = generate_single_solution_instance(10, 1.0, 3, 5).unwrap_err();
        assert!(matches!(err, Error::GenerationFailed { tries: 5 }));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_single_solution_instance(2, 3.0, 0, 10).is_err());
        assert!(generate_single_solution_instance(25, 3.0, 0, 10).is_err());
        assert!(generate_single_solution_instance(10, 0.01, 0, 10).is_err());
        assert!(generate_single_solution_instance(10, 3.0, 0, 0).is_err());
        assert!(generate_single_solution_instance(3, 3.0, 0, 10).is_err());
    }

    #[test]
    fn acceptance_rate_at_n10_alpha3() {
        let tries: Vec<u64> = (0..100)
            .map(|s| {
                generate_single_solution_instance(10, 3.0, s, DEFAULT_MAX_TRIES)
                    .unwrap()
                    .tries()
            })
            .collect();
        let mean = tries.iter().sum::<u64>() as f64 / tries.len() as f64;
        assert!(mean.is_finite() && mean < 200.0, "mean tries {mean}");
    }
}
