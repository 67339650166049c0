//! Human-readable verification reports: per-equation provenance checks,
//! solver verdict, parity certificate, counts and the merit ratio.

use std::fmt;

use num_rational::Rational64;

use crate::catalog::{count_propositions, merit_ratio, CountMode, ProofEntry, ProofKind};
use crate::equation::{EquationSystem, ValueEquation};
use crate::parity::{find_parity_certificate, verify_parity_certificate, ParityCertificate};
use crate::ray::{complete_to_basis, is_orthogonal_basis, pairwise_orthogonal, Ray};
use crate::singlet::build_singlet_relation;
use crate::solver::{backtrack_solve, Verdict};
use crate::state::condition_d_check;

/// How an equation is justified by the geometry of its rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// A resolution of the identity: dim pairwise-orthogonal rays sum to 1.
    Basis,
    /// The difference of two resolutions of the identity sharing their
    /// (re-derived) completion ray.
    BasisDifference,
    /// A unit sum licensed by the prepared state lying in the span of a
    /// pairwise-orthogonal set.
    StateDerived,
    /// A unit sum between four factorizable rays derived from singlet
    /// anticorrelation.
    SingletRelation,
    /// No justification found; the document disagrees with its geometry.
    Unclassified,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Provenance::Basis => "basis",
            Provenance::BasisDifference => "basis-difference",
            Provenance::StateDerived => "state-derived",
            Provenance::SingletRelation => "singlet-relation",
            Provenance::Unclassified => "UNCLASSIFIED",
        };
        write!(f, "{text}")
    }
}

#[derive(Clone, Debug)]
pub struct EquationReport {
    pub label: String,
    pub provenance: Provenance,
    /// All participating rays are pairwise orthogonal, so one measurement
    /// context contains them all.
    pub simultaneously_measurable: bool,
    pub contradictory: bool,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub dim: usize,
    pub var_count: usize,
    pub equations: Vec<EquationReport>,
    pub verdict: Verdict,
    pub nodes_explored: u64,
    pub witness: Option<String>,
    /// Present only if found and verified.
    pub certificate: Option<ParityCertificate>,
    /// Labels of the certificate's equations, in index order.
    pub certificate_labels: Vec<String>,
    pub count_condition_d: usize,
    pub count_full: Option<usize>,
    pub count_full_with_state: Option<usize>,
    pub merit: Rational64,
}

impl Report {
    /// True when every equation carries a valid geometric justification.
    pub fn structurally_sound(&self) -> bool {
        self.equations
            .iter()
            .all(|eq| eq.provenance != Provenance::Unclassified)
    }
}

fn side_rays(system: &EquationSystem, eq: &ValueEquation, lhs: bool) -> Vec<Ray> {
    let side = if lhs { eq.lhs() } else { eq.rhs() };
    side.iter().map(|&v| system.ray(v).clone()).collect()
}

/// Determines how an equation is justified, re-deriving it from its rays.
pub fn classify_equation(system: &EquationSystem, eq: &ValueEquation) -> Provenance {
    let dim = system.dim();
    let lhs = side_rays(system, eq, true);
    let rhs = side_rays(system, eq, false);

    if eq.constant() == 1 && rhs.is_empty() {
        if is_orthogonal_basis(&lhs, dim) == Ok(true) {
            return Provenance::Basis;
        }
        if let Some(state) = system.state() {
            if pairwise_orthogonal(&lhs) == Ok(true)
                && condition_d_check(&lhs, state) == Ok(true)
            {
                return Provenance::StateDerived;
            }
        }
        if lhs.len() == 4 && dim == 4 {
            let mut scratch = EquationSystem::new("scratch", 4);
            if build_singlet_relation(&mut scratch, &lhs, eq.label()).is_ok() {
                return Provenance::SingletRelation;
            }
        }
        return Provenance::Unclassified;
    }

    if eq.constant() == 0 && !lhs.is_empty() && lhs.len() == rhs.len() {
        // Two full bases assert equal sums directly; two triads must
        // complete to the same omitted ray.
        if lhs.len() == dim {
            if is_orthogonal_basis(&lhs, dim) == Ok(true)
                && is_orthogonal_basis(&rhs, dim) == Ok(true)
            {
                return Provenance::BasisDifference;
            }
            return Provenance::Unclassified;
        }
        if lhs.len() + 1 == dim {
            let left = complete_to_basis(&lhs, dim);
            let right = complete_to_basis(&rhs, dim);
            if let (Ok(left), Ok(right)) = (left, right) {
                if left == right {
                    return Provenance::BasisDifference;
                }
            }
        }
    }
    Provenance::Unclassified
}

/// Builds a full report for a system: provenance per equation, verdict via
/// the backtracking solver, verified parity certificate, counts and merit.
pub fn build_report(system: &EquationSystem) -> Report {
    let equations = system
        .equations()
        .iter()
        .map(|eq| {
            let rays: Vec<Ray> = eq
                .support()
                .into_iter()
                .map(|v| system.ray(v).clone())
                .collect();
            EquationReport {
                label: eq.label().to_string(),
                provenance: classify_equation(system, eq),
                simultaneously_measurable: pairwise_orthogonal(&rays) == Ok(true),
                contradictory: eq.is_contradictory(),
            }
        })
        .collect();

    let outcome = backtrack_solve(system);
    let certificate = find_parity_certificate(system)
        .filter(|cert| verify_parity_certificate(system, cert) == Ok(true));
    let certificate_labels = certificate
        .as_ref()
        .map(|cert| {
            cert.equation_indices()
                .iter()
                .map(|&i| system.equations()[i].label().to_string())
                .collect()
        })
        .unwrap_or_default();

    let kind = if system.state().is_some() {
        ProofKind::StateSpecific
    } else {
        ProofKind::StateIndependent
    };
    let entry = ProofEntry {
        name: system.name().to_string(),
        system: system.clone(),
        kind,
        notes: String::new(),
    };
    let count_condition_d =
        count_propositions(&entry, CountMode::ConditionD).expect("condition-d mode always counts");

    Report {
        name: system.name().to_string(),
        dim: system.dim(),
        var_count: system.var_count(),
        equations,
        verdict: outcome.verdict,
        nodes_explored: outcome.nodes_explored,
        witness: outcome.witness.map(|w| w.to_string()),
        certificate,
        certificate_labels,
        count_condition_d,
        count_full: count_propositions(&entry, CountMode::Full).ok(),
        count_full_with_state: count_propositions(&entry, CountMode::FullWithState).ok(),
        merit: merit_ratio(system),
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.name.is_empty() {
            "(unnamed)"
        } else {
            &self.name
        };
        writeln!(f, "system {name}: dim {}, {} variables", self.dim, self.var_count)?;
        writeln!(f, "structural checks:")?;
        for eq in &self.equations {
            let measurable = if eq.simultaneously_measurable {
                "simultaneously measurable"
            } else {
                "not simultaneously measurable"
            };
            let flag = if eq.contradictory {
                ", CONTRADICTORY"
            } else {
                ""
            };
            writeln!(
                f,
                "  eq {}: {} ({measurable}{flag})",
                eq.label, eq.provenance
            )?;
        }
        writeln!(f, "verdict: {} ({} nodes)", self.verdict, self.nodes_explored)?;
        if let Some(witness) = &self.witness {
            writeln!(f, "witness: {witness}")?;
        }
        match &self.certificate {
            Some(_) => writeln!(
                f,
                "parity certificate: equations {{{}}} (verified)",
                self.certificate_labels.join(", ")
            )?,
            None => writeln!(f, "parity certificate: none")?,
        }
        write!(f, "propositions: {} (condition-d)", self.count_condition_d)?;
        if let Some(full) = self.count_full {
            write!(f, ", {full} (full)")?;
        }
        if let Some(with_state) = self.count_full_with_state {
            write!(f, ", {with_state} (full-with-state)")?;
        }
        writeln!(f)?;
        // count_condition_d is exactly f, the number of rays used.
        writeln!(f, "merit ratio f/n = {}/{}", self.count_condition_d, self.dim)?;
        if !self.structurally_sound() {
            writeln!(f, "STRUCTURAL FAILURE: at least one equation is unclassified")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_entry;

    #[test]
    fn catalog_equations_classify_by_provenance() {
        let cabello = catalog_entry("cabello14").unwrap().system;
        let kinds: Vec<Provenance> = cabello
            .equations()
            .iter()
            .map(|eq| classify_equation(&cabello, eq))
            .collect();
        assert_eq!(
            kinds,
            vec![
                Provenance::BasisDifference,
                Provenance::BasisDifference,
                Provenance::BasisDifference,
                Provenance::BasisDifference,
                Provenance::Basis,
            ]
        );

        let singlet = catalog_entry("singlet5").unwrap().system;
        let kinds: Vec<Provenance> = singlet
            .equations()
            .iter()
            .map(|eq| classify_equation(&singlet, eq))
            .collect();
        assert_eq!(
            kinds,
            vec![
                Provenance::StateDerived,
                Provenance::StateDerived,
                Provenance::SingletRelation,
            ]
        );
    }

    #[test]
    fn measurability_flags() {
        let cabello = catalog_entry("cabello14").unwrap().system;
        let report = build_report(&cabello);
        // The basis equation is one measurement context; the difference
        // equations mix two contexts.
        let by_label = |label: &str| {
            report
                .equations
                .iter()
                .find(|eq| eq.label == label)
                .unwrap()
                .simultaneously_measurable
        };
        assert!(by_label("5"));
        assert!(!by_label("1"));

        let singlet = catalog_entry("singlet5").unwrap().system;
        let report = build_report(&singlet);
        assert!(report.equations[0].simultaneously_measurable);
        assert!(report.equations[1].simultaneously_measurable);
        // The four rays of the anticorrelation relation do not commute.
        assert!(!report.equations[2].simultaneously_measurable);
        assert!(report.structurally_sound());
    }

    #[test]
    fn report_embeds_only_verified_certificates() {
        let singlet = catalog_entry("singlet5").unwrap().system;
        let report = build_report(&singlet);
        let cert = report.certificate.expect("certificate exists");
        assert_eq!(verify_parity_certificate(&singlet, &cert), Ok(true));
        assert_eq!(report.verdict, Verdict::Unsat);
    }

    #[test]
    fn unclassified_equation_fails_structure() {
        let mut system = EquationSystem::new("bad", 4);
        let a = system.intern_ray(Ray::from_ints(&[1, 0, 0, 0]).unwrap()).unwrap();
        let b = system.intern_ray(Ray::from_ints(&[1, 1, 0, 0]).unwrap()).unwrap();
        system
            .push_equation(ValueEquation::new("x", vec![a, b], vec![], 1).unwrap())
            .unwrap();
        let report = build_report(&system);
        assert_eq!(report.equations[0].provenance, Provenance::Unclassified);
        assert!(!report.structurally_sound());
    }
}
