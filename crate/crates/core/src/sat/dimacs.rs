//! Extended DIMACS CNF.
//!
//! ```text
//! c seed 42
//! c tries 17
//! c alpha 3
//! c solution 0110100101
//! p cnf 10 30
//! 1 -4 7 0
//! ...
//! ```
//!
//! `c seed` and `c tries` default to 0 when absent. A missing `c solution`
//! is recovered by enumeration. Every read re-verifies that the instance has
//! exactly one solution.

use std::io::{BufRead, Write};

use super::{
    count_solutions_capped, violated_count_bits, Assignment, Clause, Literal, SatInstance,
};
use crate::error::{Error, Result};

pub fn write_dimacs<W: Write>(instance: &SatInstance, mut sink: W) -> Result<()> {
    writeln!(sink, "c seed {}", instance.seed())?;
    writeln!(sink, "c tries {}", instance.tries())?;
    writeln!(sink, "c alpha {}", instance.alpha())?;
    writeln!(sink, "c solution {}", instance.solution())?;
    writeln!(sink, "p cnf {} {}", instance.n(), instance.m())?;
    for c in instance.clauses() {
        writeln!(sink, "{c}")?;
    }
    Ok(())
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn read_dimacs<R: BufRead>(source: R) -> Result<SatInstance> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut seed = 0u64;
    let mut tries = 0u64;
    let mut alpha: Option<(usize, f64)> = None;
    let mut solution: Option<(usize, Assignment)> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;

    for (idx, line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed == "%" {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('c') {
            if !rest.is_empty() && !rest.starts_with(char::is_whitespace) {
                return Err(perr(lineno, format!("unrecognized line {trimmed:?}")));
            }
            let mut parts = rest.split_whitespace();
            let key = parts.next();
            let value = parts.next();
            match (key, value) {
                (Some("seed"), Some(v)) => {
                    seed = v
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad seed {v:?}")))?
                }
                (Some("tries"), Some(v)) => {
                    tries = v
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad tries {v:?}")))?
                }
                (Some("alpha"), Some(v)) => {
                    let a = v
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad alpha {v:?}")))?;
                    alpha = Some((lineno, a));
                }
                (Some("solution"), Some(v)) => {
                    let a: Assignment = v
                        .parse()
                        .map_err(|e| perr(lineno, format!("bad solution: {e}")))?;
                    solution = Some((lineno, a));
                }
                _ => {}
            }
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("p ") {
            if header.is_some() {
                return Err(perr(lineno, "duplicate header"));
            }
            let parts: Vec<&str> = rest.split_whitespace().collect();
            match parts.as_slice() {
                ["cnf", n, m] => {
                    let n = n
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad variable count {n:?}")))?;
                    let m = m
                        .parse()
                        .map_err(|_| perr(lineno, format!("bad clause count {m:?}")))?;
                    header = Some((lineno, n, m));
                }
                _ => return Err(perr(lineno, format!("malformed header {trimmed:?}"))),
            }
            continue;
        }
        let Some((_, n, _)) = header else {
            return Err(perr(lineno, "clause before `p cnf` header"));
        };
        for tok in trimmed.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| perr(lineno, format!("bad literal {tok:?}")))?;
            if pending.is_empty() {
                pending_line = lineno;
            }
            if lit == 0 {
                clauses.push(make_clause(&pending, n, pending_line)?);
                pending.clear();
            } else {
                pending.push(lit);
            }
        }
    }
    if !pending.is_empty() {
        return Err(perr(pending_line, "clause missing terminating 0"));
    }
    let Some((hline, n, m)) = header else {
        return Err(perr(0, "missing `p cnf` header"));
    };
    if clauses.len() != m {
        return Err(perr(
            hline,
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    if n == 0 || n > crate::MAX_ENUM_VARS {
        return Err(perr(
            hline,
            format!("variable count {n} outside [1, {}]", crate::MAX_ENUM_VARS),
        ));
    }
    let mut seen = std::collections::HashSet::new();
    for c in &clauses {
        if !seen.insert(*c) {
            return Err(perr(hline, format!("duplicate clause {c}")));
        }
    }
    if let Some((line, a)) = alpha {
        let expected = m as f64 / n as f64;
        if (a - expected).abs() > 1e-12 {
            return Err(perr(
                line,
                format!("alpha {a} does not match m/n = {expected}"),
            ));
        }
    }

    let count = count_solutions_capped(n, &clauses, 2)?;
    let solution = match solution {
        Some((line, a)) => {
            if a.len() != n {
                return Err(perr(
                    line,
                    format!("solution has {} bits, expected {n}", a.len()),
                ));
            }
            let v = violated_count_bits(&clauses, a.index());
            if v != 0 {
                return Err(perr(line, format!("solution {a} violates {v} clause(s)")));
            }
            if count != 1 {
                return Err(perr(line, "instance has more than one solution"));
            }
            a
        }
        None => {
            if count != 1 {
                return Err(perr(
                    hline,
                    format!(
                        "instance does not have exactly one solution (found {})",
                        if count > 1 {
                            "several".to_string()
                        } else {
                            count.to_string()
                        }
                    ),
                ));
            }
            let bits = (0..1usize << n)
                .find(|&b| violated_count_bits(&clauses, b) == 0)
                .expect("one solution");
            Assignment::from_index(n, bits)?
        }
    };
    Ok(SatInstance::new_unchecked(
        n, clauses, solution, seed, tries,
    ))
}

fn make_clause(lits: &[i64], n: usize, line: usize) -> Result<Clause> {
    if lits.len() != 3 {
        return Err(perr(
            line,
            format!("clause has {} literals, expected 3", lits.len()),
        ));
    }
    let mut out = [Literal::new(0, false); 3];
    for (slot, &l) in out.iter_mut().zip(lits) {
        let v = l.unsigned_abs() as usize;
        if v > n {
            return Err(perr(line, format!("literal {l} out of range for n = {n}")));
        }
        *slot = Literal::new(v - 1, l < 0);
    }
    Clause::new(out).map_err(|e| perr(line, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::generate_single_solution_instance;

    #[test]
    fn round_trip_generated_instance() {
        for (n, alpha, seed) in [(8, 3.0, 1), (10, 5.0, 2), (7, 4.3, 3)] {
            let inst = generate_single_solution_instance(n, alpha, seed, 100_000).unwrap();
            let mut buf = Vec::new();
            write_dimacs(&inst, &mut buf).unwrap();
            let back = read_dimacs(buf.as_slice()).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn hand_written_forcing_file() {
        let text = "c hand written\np cnf 3 7\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 -2 3 0\n\
                    1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n";
        let inst = read_dimacs(text.as_bytes()).unwrap();
        assert_eq!(inst.solution().to_string(), "101");
        assert_eq!(crate::sat::count_solutions(3, inst.clauses()).unwrap(), 1);
    }

    #[test]
    fn violating_solution_line_is_rejected() {
        let text = "c solution 100\np cnf 3 7\n1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 -2 3 0\n\
                    1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n";
        match read_dimacs(text.as_bytes()) {
            Err(Error::Parse { line: 1, msg }) => assert!(msg.contains("violates")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs_report_lines() {
        let cases = [
            ("p cnf 3\n", 1),
            ("1 2 3 0\n", 1),
            ("p cnf 3 1\n1 2 0\n", 2),
            ("p cnf 3 1\n1 2 4 0\n", 2),
            ("p cnf 3 1\n1 1 2 0\n", 2),
            ("p cnf 3 2\n1 2 3 0\n", 1),
            ("p cnf 3 1\n1 2 x 0\n", 2),
            ("p cnf 3 1\n1 2 3\n", 2),
        ];
        for (text, want) in cases {
            match read_dimacs(text.as_bytes()) {
                Err(Error::Parse { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn multiple_solutions_rejected() {
        let text = "p cnf 4 1\n1 2 3 0\n";
        assert!(matches!(
            read_dimacs(text.as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
