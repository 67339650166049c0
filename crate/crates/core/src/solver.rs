//! Two independent decision procedures for value-assignment systems:
//! exhaustive enumeration and propagating depth-first search.

use std::fmt;

use crate::equation::{Assignment, EquationSystem, SystemError, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat,
    Unsat,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Sat => write!(f, "SAT"),
            Verdict::Unsat => write!(f, "UNSAT"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverOutcome {
    pub verdict: Verdict,
    /// Present exactly when the verdict is SAT.
    pub witness: Option<Assignment>,
    pub nodes_explored: u64,
}

/// Variable-count guard for [`brute_force`].
pub const BRUTE_FORCE_MAX_VARS: usize = 30;

/// Enumerates all `2^N` assignments in lexicographic order (variables by
/// id, 0 before 1) and returns the first satisfying one, or UNSAT with
/// `nodes_explored = 2^N`.
pub fn brute_force(system: &EquationSystem) -> Result<SolverOutcome, SystemError> {
    let n = system.var_count();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(SystemError::TooLarge {
            vars: n,
            max: BRUTE_FORCE_MAX_VARS,
        });
    }
    // Bitmask encoding: bit i of `mask` is the value of variable i.
    let masks: Vec<(u64, u64, u32)> = system
        .equations()
        .iter()
        .map(|eq| {
            let bits = |side: &[VarId]| side.iter().fold(0u64, |acc, v| acc | (1 << v.0));
            (bits(eq.lhs()), bits(eq.rhs()), eq.constant())
        })
        .collect();
    let total: u64 = 1 << n;
    let mut nodes = 0;
    for counter in 0..total {
        nodes += 1;
        // Lexicographic order over (v0, v1, ...) means v0 is the most
        // significant bit of the counter; reverse into the mask encoding.
        let mask = if n == 0 { 0 } else { counter.reverse_bits() >> (64 - n) };
        let ok = masks
            .iter()
            .all(|&(lhs, rhs, c)| (mask & lhs).count_ones() == (mask & rhs).count_ones() + c);
        if ok {
            let values = (0..n).map(|i| mask & (1 << i) != 0).collect();
            return Ok(SolverOutcome {
                verdict: Verdict::Sat,
                witness: Some(Assignment::new(values)),
                nodes_explored: nodes,
            });
        }
    }
    Ok(SolverOutcome {
        verdict: Verdict::Unsat,
        witness: None,
        nodes_explored: nodes,
    })
}

/// Per-equation view used during search: variables with net coefficient +1
/// (left side only) and -1 (right side only). Variables appearing on both
/// sides cancel and are dropped.
struct NetEquation {
    plus: Vec<usize>,
    minus: Vec<usize>,
    constant: i64,
}

impl NetEquation {
    /// Remaining freedom given the current partial assignment: the sums of
    /// assigned values and the counts of unassigned variables per sign.
    fn tally(&self, values: &[Option<bool>]) -> (i64, usize, i64, usize) {
        let mut sum = [0i64; 2];
        let mut open = [0usize; 2];
        for (k, side) in [&self.plus, &self.minus].into_iter().enumerate() {
            for &v in side {
                match values[v] {
                    Some(b) => sum[k] += b as i64,
                    None => open[k] += 1,
                }
            }
        }
        (sum[0], open[0], sum[1], open[1])
    }
}

struct Search {
    equations: Vec<NetEquation>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    nodes: u64,
}

enum Propagation {
    Consistent,
    Conflict,
}

impl Search {
    fn assign(&mut self, var: usize, value: bool) {
        debug_assert!(self.values[var].is_none());
        self.values[var] = Some(value);
        self.trail.push(var);
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            self.values[var] = None;
        }
    }

    /// Fixpoint propagation. An equation whose open variables cannot bridge
    /// the residual gap is a conflict; one whose gap admits a single filling
    /// forces all its open variables.
    fn propagate(&mut self) -> Propagation {
        loop {
            let mut changed = false;
            for i in 0..self.equations.len() {
                let (plus_sum, plus_open, minus_sum, minus_open) =
                    self.equations[i].tally(&self.values);
                let gap = self.equations[i].constant + minus_sum - plus_sum;
                if gap > plus_open as i64 || -gap > minus_open as i64 {
                    return Propagation::Conflict;
                }
                if plus_open + minus_open == 0 {
                    continue;
                }
                let force = if gap == plus_open as i64 {
                    // Every open plus-variable must be 1, every minus 0.
                    Some((true, false))
                } else if -gap == minus_open as i64 {
                    Some((false, true))
                } else {
                    None
                };
                if let Some((plus_value, minus_value)) = force {
                    let plus: Vec<usize> = self.equations[i]
                        .plus
                        .iter()
                        .copied()
                        .filter(|&v| self.values[v].is_none())
                        .collect();
                    let minus: Vec<usize> = self.equations[i]
                        .minus
                        .iter()
                        .copied()
                        .filter(|&v| self.values[v].is_none())
                        .collect();
                    for v in plus {
                        self.assign(v, plus_value);
                    }
                    for v in minus {
                        self.assign(v, minus_value);
                    }
                    changed = true;
                }
            }
            if !changed {
                return Propagation::Consistent;
            }
        }
    }

    /// Branch variable: the unassigned variable occurring in the most
    /// unresolved equations, ties broken by lowest id.
    fn pick_branch_var(&self) -> Option<usize> {
        let mut counts = vec![0usize; self.values.len()];
        for eq in &self.equations {
            let open: Vec<usize> = eq
                .plus
                .iter()
                .chain(&eq.minus)
                .copied()
                .filter(|&v| self.values[v].is_none())
                .collect();
            if open.is_empty() {
                continue;
            }
            for v in open {
                counts[v] += 1;
            }
        }
        counts
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .max_by(|(ia, ca), (ib, cb)| ca.cmp(cb).then(ib.cmp(ia)))
            .map(|(i, _)| i)
    }

    fn search(&mut self) -> bool {
        self.nodes += 1;
        let mark = self.trail.len();
        match self.propagate() {
            Propagation::Conflict => {
                self.undo_to(mark);
                return false;
            }
            Propagation::Consistent => {}
        }
        let Some(var) = self.pick_branch_var() else {
            // Every equation is fully determined and consistent.
            return true;
        };
        for value in [false, true] {
            let branch_mark = self.trail.len();
            self.assign(var, value);
            if self.search() {
                return true;
            }
            self.undo_to(branch_mark);
        }
        self.undo_to(mark);
        false
    }
}

/// Depth-first search with constraint propagation. Agrees with
/// [`brute_force`] on every system within the exhaustive guard, without
/// the variable-count limit.
pub fn backtrack_solve(system: &EquationSystem) -> SolverOutcome {
    let equations = system
        .equations()
        .iter()
        .map(|eq| {
            let lhs: Vec<usize> = eq.lhs().iter().map(|v| v.0).collect();
            let rhs: Vec<usize> = eq.rhs().iter().map(|v| v.0).collect();
            NetEquation {
                plus: lhs.iter().copied().filter(|v| !rhs.contains(v)).collect(),
                minus: rhs.iter().copied().filter(|v| !lhs.contains(v)).collect(),
                constant: eq.constant() as i64,
            }
        })
        .collect();
    let mut search = Search {
        equations,
        values: vec![None; system.var_count()],
        trail: Vec::new(),
        nodes: 0,
    };
    if search.search() {
        // Unconstrained leftovers default to 0 for a deterministic witness.
        let values = search.values.iter().map(|v| v.unwrap_or(false)).collect();
        let witness = Assignment::new(values);
        debug_assert!(witness.satisfies(system));
        SolverOutcome {
            verdict: Verdict::Sat,
            witness: Some(witness),
            nodes_explored: search.nodes,
        }
    } else {
        SolverOutcome {
            verdict: Verdict::Unsat,
            witness: None,
            nodes_explored: search.nodes,
        }
    }
}
