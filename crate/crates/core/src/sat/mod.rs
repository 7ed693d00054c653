//! Single-solution random 3-SAT instances.
//!
//! Clauses are kept in canonical form (literals sorted by variable index, no
//! repeated variable) so that duplicate detection is a plain equality test.
//! Assignments and basis indices share one bit convention: bit `k` is the
//! value of variable `k`.

mod dimacs;
mod generate;

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::MAX_ENUM_VARS;

pub use dimacs::{read_dimacs, write_dimacs};
pub use generate::{generate_single_solution_instance, DEFAULT_MAX_TRIES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub variable: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(variable: usize, negated: bool) -> Self {
        Self { variable, negated }
    }

    /// Truth value of the literal under the assignment packed into `bits`.
    #[inline]
    pub fn eval(&self, bits: usize) -> bool {
        let value = (bits >> self.variable) & 1 == 1;
        value != self.negated
    }

    /// Signed 1-based DIMACS form.
    pub fn to_dimacs(&self) -> i64 {
        let v = self.variable as i64 + 1;
        if self.negated {
            -v
        } else {
            v
        }
    }
}

/// A disjunction of exactly three literals over distinct variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    literals: [Literal; 3],
}

impl Clause {
    /// Builds a clause in canonical (variable-sorted) order.
    pub fn new(mut literals: [Literal; 3]) -> Result<Self> {
        literals.sort_by_key(|l| l.variable);
        if literals[0].variable == literals[1].variable
            || literals[1].variable == literals[2].variable
        {
            return Err(invalid(format!(
                "clause repeats a variable: {:?}",
                literals.map(|l| l.variable)
            )));
        }
        Ok(Self { literals })
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    pub fn max_variable(&self) -> usize {
        self.literals[2].variable
    }

    /// `(mask, pattern)` such that an assignment violates the clause iff
    /// `bits & mask == pattern`. A positive literal is false on bit 0, a
    /// negated one on bit 1.
    #[inline]
    pub fn violating_pattern(&self) -> (usize, usize) {
        let mut mask = 0;
        let mut pattern = 0;
        for l in &self.literals {
            mask |= 1 << l.variable;
            if l.negated {
                pattern |= 1 << l.variable;
            }
        }
        (mask, pattern)
    }

    #[inline]
    pub fn is_violated_by(&self, bits: usize) -> bool {
        !self.literals.iter().any(|l| l.eval(bits))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.literals.map(|l| l.to_dimacs());
        write!(f, "{a} {b} {c} 0")
    }
}

/// An `len`-bit assignment. Textual form lists variable 0 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    bits: usize,
    len: usize,
}

impl Assignment {
    pub fn from_index(len: usize, bits: usize) -> Result<Self> {
        if len > MAX_ENUM_VARS {
            return Err(invalid(format!(
                "assignment length {len} exceeds {MAX_ENUM_VARS}"
            )));
        }
        if bits >> len != 0 {
            return Err(invalid(format!("index {bits} does not fit in {len} bits")));
        }
        Ok(Self { bits, len })
    }

    /// The basis index this assignment corresponds to.
    pub fn index(&self) -> usize {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self, variable: usize) -> bool {
        (self.bits >> variable) & 1 == 1
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.len {
            f.write_str(if self.value(k) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = 0usize;
        let mut len = 0usize;
        for (k, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => bits |= 1 << k,
                other => return Err(invalid(format!("bad bit character {other:?}"))),
            }
            len = k + 1;
            if len > MAX_ENUM_VARS {
                return Err(invalid(format!("bit string longer than {MAX_ENUM_VARS}")));
            }
        }
        Ok(Self { bits, len })
    }
}

/// A 3-SAT instance with exactly one satisfying assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct SatInstance {
    n: usize,
    clauses: Vec<Clause>,
    alpha: f64,
    solution: Assignment,
    seed: u64,
    tries: u64,
}

impl SatInstance {
    /// Validates and assembles an instance. Checks variable range, clause
    /// uniqueness, that `solution` satisfies every clause and that it is the
    /// only satisfying assignment.
    pub fn new(
        n: usize,
        clauses: Vec<Clause>,
        solution: Assignment,
        seed: u64,
        tries: u64,
    ) -> Result<Self> {
        check_clauses(n, &clauses)?;
        if solution.len() != n {
            return Err(invalid(format!(
                "solution has {} bits, instance has {n} variables",
                solution.len()
            )));
        }
        if let Some(c) = clauses.iter().find(|c| c.is_violated_by(solution.index())) {
            return Err(Error::Validation(format!(
                "solution {solution} violates clause {c}"
            )));
        }
        let count = count_solutions_capped(n, &clauses, 2)?;
        if count != 1 {
            return Err(Error::Validation(format!(
                "instance has {} satisfying assignments, expected exactly one",
                if count > 1 {
                    "more than one".to_string()
                } else {
                    count.to_string()
                }
            )));
        }
        Ok(Self::new_unchecked(n, clauses, solution, seed, tries))
    }

    pub(crate) fn new_unchecked(
        n: usize,
        clauses: Vec<Clause>,
        solution: Assignment,
        seed: u64,
        tries: u64,
    ) -> Self {
        let alpha = clauses.len() as f64 / n as f64;
        Self {
            n,
            clauses,
            alpha,
            solution,
            seed,
            tries,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    /// Clause density `m / n`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn solution(&self) -> Assignment {
        self.solution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tries(&self) -> u64 {
        self.tries
    }

    /// Hilbert-space dimension `2^n`.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Number of clauses with all three literals false under `assignment`.
    pub fn violated_count(&self, assignment: &Assignment) -> Result<usize> {
        if assignment.len() != self.n {
            return Err(invalid(format!(
                "assignment has {} bits, instance has {} variables",
                assignment.len(),
                self.n
            )));
        }
        Ok(violated_count_bits(&self.clauses, assignment.index()))
    }

    /// Minimum violated-clause count over all non-solution assignments.
    pub fn min_nonsolution_violations(&self) -> usize {
        let sol = self.solution.index();
        (0..self.dim())
            .filter(|&a| a != sol)
            .map(|a| violated_count_bits(&self.clauses, a))
            .min()
            .unwrap_or(0)
    }
}

/// Violated-clause count for a packed assignment. No length check.
#[inline]
pub fn violated_count_bits(clauses: &[Clause], bits: usize) -> usize {
    clauses.iter().filter(|c| c.is_violated_by(bits)).count()
}

/// Number of satisfying assignments, by exhaustive enumeration of all `2^n`.
pub fn count_solutions(n: usize, clauses: &[Clause]) -> Result<u64> {
    count_solutions_capped(n, clauses, u64::MAX)
}

/// Like [`count_solutions`] but stops once `cap` solutions have been seen.
pub fn count_solutions_capped(n: usize, clauses: &[Clause], cap: u64) -> Result<u64> {
    if n > MAX_ENUM_VARS {
        return Err(Error::EnumerationBound {
            n,
            max: MAX_ENUM_VARS,
        });
    }
    check_clauses(n, clauses)?;
    let mut count = 0;
    for bits in 0..(1usize << n) {
        if !clauses.iter().any(|c| c.is_violated_by(bits)) {
            count += 1;
            if count >= cap {
                break;
            }
        }
    }
    Ok(count)
}

fn check_clauses(n: usize, clauses: &[Clause]) -> Result<()> {
    if let Some(c) = clauses.iter().find(|c| c.max_variable() >= n) {
        return Err(invalid(format!(
            "clause {c} references a variable >= n = {n}"
        )));
    }
    let mut seen = std::collections::HashSet::with_capacity(clauses.len());
    for c in clauses {
        if !seen.insert(*c) {
            return Err(invalid(format!("duplicate clause {c}")));
        }
    }
    Ok(())
}
