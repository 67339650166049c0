//! Exports: the orthogonality graph in DOT format and a DIMACS CNF
//! encoding, plus a self-contained brute-force check of DIMACS text that
//! serves as an independent route to the satisfiability verdict.

use std::fmt::Write as _;

use num_traits::Zero;
use thiserror::Error;

use crate::equation::{EquationSystem, VarId};
use crate::solver::Verdict;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error("equation `{label}` has {support} distinct variables, above the CNF limit of {max}")]
    SupportTooLarge {
        label: String,
        support: usize,
        max: usize,
    },
}

/// Per-equation support limit for the conflict-clause CNF encoding.
pub const CNF_MAX_SUPPORT: usize = 16;

/// Emits the orthogonality graph: one node per ray labeled with its
/// components, one undirected edge per orthogonal pair. Deterministic
/// ordering by variable id.
pub fn export_dot(system: &EquationSystem) -> String {
    let mut out = String::new();
    let name = if system.name().is_empty() {
        "system"
    } else {
        system.name()
    };
    let _ = writeln!(out, "graph \"{name}\" {{");
    for (i, ray) in system.rays().iter().enumerate() {
        let _ = writeln!(out, "  u{} [label=\"{}\"];", i + 1, ray);
    }
    for i in 0..system.var_count() {
        for j in i + 1..system.var_count() {
            let orthogonal = system.rays()[i]
                .inner(&system.rays()[j])
                .expect("rays of one system share a dimension")
                .is_zero();
            if orthogonal {
                let _ = writeln!(out, "  u{} -- u{};", i + 1, j + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Encodes the system as DIMACS CNF: variable `i+1` encodes ray variable
/// `i`, and every equation contributes one conflict clause per assignment
/// of its support that violates it. The CNF is satisfiable iff the system
/// is.
pub fn export_cnf(system: &EquationSystem) -> Result<String, ExportError> {
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    for eq in system.equations() {
        let support: Vec<VarId> = eq.support().into_iter().collect();
        if support.len() > CNF_MAX_SUPPORT {
            return Err(ExportError::SupportTooLarge {
                label: eq.label().to_string(),
                support: support.len(),
                max: CNF_MAX_SUPPORT,
            });
        }
        // Enumerate the support lexicographically, first variable as the
        // most significant bit, so the output is deterministic.
        for counter in 0..(1u32 << support.len()) {
            let value = |v: VarId| -> u32 {
                let pos = support.iter().position(|&s| s == v).expect("in support");
                (counter >> (support.len() - 1 - pos)) & 1
            };
            let lhs: u32 = eq.lhs().iter().map(|&v| value(v)).sum();
            let rhs: u32 = eq.rhs().iter().map(|&v| value(v)).sum();
            if lhs != rhs + eq.constant() {
                let clause = support
                    .iter()
                    .map(|&v| {
                        let literal = v.0 as i64 + 1;
                        if value(v) == 1 {
                            -literal
                        } else {
                            literal
                        }
                    })
                    .collect();
                clauses.push(clause);
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "c system {}", system.name());
    let _ = writeln!(out, "p cnf {} {}", system.var_count(), clauses.len());
    for clause in clauses {
        for literal in clause {
            let _ = write!(out, "{literal} ");
        }
        let _ = writeln!(out, "0");
    }
    Ok(out)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DimacsError {
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {0}: malformed content")]
    Malformed(usize),
    #[error("literal {0} is out of range")]
    LiteralOutOfRange(i64),
    #[error("{vars} variables exceed the exhaustive check limit of {max}")]
    TooLarge { vars: usize, max: usize },
}

/// Variable-count guard for [`check_dimacs`].
pub const DIMACS_CHECK_MAX_VARS: usize = 24;

/// Decides a DIMACS CNF text by brute force over all assignments.
///
/// This path operates on the text alone and shares no code with the
/// system solvers, so it cross-checks the CNF encoding end to end.
pub fn check_dimacs(text: &str) -> Result<Verdict, DimacsError> {
    let mut vars: Option<usize> = None;
    let mut clauses: Vec<Vec<i64>> = Vec::new();
    let mut current: Vec<i64> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p cnf") {
            let mut parts = rest.split_whitespace();
            let v = parts
                .next()
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or(DimacsError::Malformed(i + 1))?;
            vars = Some(v);
            continue;
        }
        if vars.is_none() {
            return Err(DimacsError::MissingHeader);
        }
        for token in line.split_whitespace() {
            let literal: i64 = token.parse().map_err(|_| DimacsError::Malformed(i + 1))?;
            if literal == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(literal);
            }
        }
    }
    let vars = vars.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if vars > DIMACS_CHECK_MAX_VARS {
        return Err(DimacsError::TooLarge {
            vars,
            max: DIMACS_CHECK_MAX_VARS,
        });
    }
    for clause in &clauses {
        for &literal in clause {
            if literal.unsigned_abs() as usize > vars {
                return Err(DimacsError::LiteralOutOfRange(literal));
            }
        }
    }
    for mask in 0..(1u64 << vars) {
        let satisfied = clauses.iter().all(|clause| {
            clause.iter().any(|&literal| {
                let bit = mask & (1 << (literal.unsigned_abs() - 1)) != 0;
                if literal > 0 {
                    bit
                } else {
                    !bit
                }
            })
        });
        if satisfied {
            return Ok(Verdict::Sat);
        }
    }
    Ok(Verdict::Unsat)
}
