//! Parity certificates: subsets of equations whose mod-2 sum is the
//! contradiction 0 = 1, refuting every 0/1 assignment at once.

use std::fmt;

use crate::equation::{EquationSystem, SystemError, ValueEquation, VarId};

/// A nonempty subset of a system's equations witnessing unsatisfiability:
/// summed over the subset, every variable's net coefficient is even while
/// the constant is odd.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCertificate {
    equation_indices: Vec<usize>,
}

impl ParityCertificate {
    /// Indices are deduplicated and sorted; an empty selection is rejected.
    pub fn new(mut equation_indices: Vec<usize>) -> Option<Self> {
        equation_indices.sort_unstable();
        equation_indices.dedup();
        if equation_indices.is_empty() {
            None
        } else {
            Some(ParityCertificate { equation_indices })
        }
    }

    pub fn equation_indices(&self) -> &[usize] {
        &self.equation_indices
    }
}

impl fmt::Display for ParityCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, idx) in self.equation_indices.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{idx}")?;
        }
        write!(f, "}}")
    }
}

/// Parity row of one equation over GF(2): one bit per variable (odd net
/// coefficient) plus the constant bit.
fn parity_row(eq: &ValueEquation, vars: usize) -> (Vec<bool>, bool) {
    let mut row = vec![false; vars];
    for &VarId(v) in eq.lhs().iter().chain(eq.rhs()) {
        row[v] ^= true;
    }
    (row, eq.constant() % 2 == 1)
}

/// Searches for a parity certificate by GF(2) elimination on the left
/// kernel of the equations' parity matrix.
///
/// Rows are processed in equation order and reduced against previously
/// found pivots; the first kernel combination whose summed constant is odd
/// is returned. Any combination of even-constant kernel elements stays
/// even, so checking the basis elements is exhaustive. No minimality is
/// claimed when several certificates exist.
pub fn find_parity_certificate(system: &EquationSystem) -> Option<ParityCertificate> {
    let vars = system.var_count();
    let n_eqs = system.equations().len();
    // (reduced variable row, constant bit, combination of original rows)
    let mut pivots: Vec<(Vec<bool>, bool, Vec<bool>)> = Vec::new();
    for (i, eq) in system.equations().iter().enumerate() {
        let (mut row, mut constant) = parity_row(eq, vars);
        let mut combo = vec![false; n_eqs];
        combo[i] = true;
        for (pivot_row, pivot_constant, pivot_combo) in &pivots {
            let col = pivot_row.iter().position(|&b| b).expect("pivot rows are nonzero");
            if row[col] {
                for (r, p) in row.iter_mut().zip(pivot_row) {
                    *r ^= p;
                }
                constant ^= pivot_constant;
                for (c, p) in combo.iter_mut().zip(pivot_combo) {
                    *c ^= p;
                }
            }
        }
        if row.iter().all(|&b| !b) {
            if constant {
                let indices = combo
                    .iter()
                    .enumerate()
                    .filter_map(|(j, &used)| used.then_some(j))
                    .collect();
                return ParityCertificate::new(indices);
            }
            // Even-constant kernel element: no use on its own or combined.
        } else {
            pivots.push((row, constant, combo));
        }
    }
    None
}

/// Checks a claimed certificate by direct counting: every variable's net
/// coefficient over the selected equations must be even and the summed
/// constant odd. A `true` answer implies the system is unsatisfiable.
pub fn verify_parity_certificate(
    system: &EquationSystem,
    certificate: &ParityCertificate,
) -> Result<bool, SystemError> {
    let mut net = vec![0i64; system.var_count()];
    let mut constant: u64 = 0;
    for &idx in certificate.equation_indices() {
        let eq = system
            .equations()
            .get(idx)
            .ok_or(SystemError::BadEquationIndex(idx))?;
        for &VarId(v) in eq.lhs() {
            net[v] += 1;
        }
        for &VarId(v) in eq.rhs() {
            net[v] -= 1;
        }
        constant += eq.constant() as u64;
    }
    Ok(net.iter().all(|c| c % 2 == 0) && constant % 2 == 1)
}
