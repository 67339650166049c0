//! Exact-arithmetic verification of Bell-Kochen-Specker value-assignment
//! problems.
//!
//! Propositions are canonical rational rays; constraints are linear
//! equations between their 0/1 values. The crate decides satisfiability by
//! two independent procedures, extracts parity-contradiction certificates,
//! re-derives the shipped proof catalog from geometry, and round-trips
//! systems through a plain-text format with DOT and DIMACS CNF exports.
//! All arithmetic is exact; there is no floating point anywhere.

pub mod catalog;
pub mod equation;
pub mod export;
pub mod format;
pub mod parity;
pub mod ray;
pub mod report;
pub mod singlet;
pub mod solver;
pub mod state;

pub use catalog::{
    catalog, catalog_entry, count_propositions, merit_ratio, CountError, CountMode, ProofEntry,
    ProofKind,
};
pub use equation::{
    same_relation, Assignment, Elimination, EliminationReason, EquationSystem, SystemError,
    ValueEquation, VarId,
};
pub use export::{check_dimacs, export_cnf, export_dot, DimacsError, ExportError};
pub use format::{parse_system, serialize_system, ParseError, ParseErrorKind};
pub use parity::{find_parity_certificate, verify_parity_certificate, ParityCertificate};
pub use ray::{
    complete_to_basis, in_span, is_orthogonal_basis, LocalRay, Particle, Ray, RayError,
};
pub use report::{build_report, classify_equation, EquationReport, Provenance, Report};
pub use singlet::{build_singlet_relation, SingletDerivation, SingletError};
pub use solver::{backtrack_solve, brute_force, SolverOutcome, Verdict, BRUTE_FORCE_MAX_VARS};
pub use state::{condition_d_check, state_substitution};
