//! The proof catalog: a 14-ray state-independent system and a 5-ray
//! singlet-state system, stored verbatim and re-derived from geometry at
//! construction time. A mismatch between the stored equations and the
//! re-derived ones is a data corruption and panics.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Rational64;
use thiserror::Error;

use crate::equation::{same_relation, EliminationReason, EquationSystem};
use crate::ray::{complete_to_basis, in_span, pairwise_orthogonal, Ray};
use crate::singlet::build_singlet_relation;
use crate::state::state_substitution;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofKind {
    StateIndependent,
    StateSpecific,
}

impl fmt::Display for ProofKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProofKind::StateIndependent => write!(f, "state-independent"),
            ProofKind::StateSpecific => write!(f, "state-specific"),
        }
    }
}

/// A named unsatisfiable value-assignment system together with its kind.
#[derive(Clone, Debug)]
pub struct ProofEntry {
    pub name: String,
    pub system: EquationSystem,
    pub kind: ProofKind,
    pub notes: String,
}

/// How to count the propositions involved in a proof.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// Only the rays explicitly appearing in the final equations.
    ConditionD,
    /// Additionally the rays eliminated as orthogonal to the prepared
    /// state during the derivation.
    Full,
    /// Additionally the prepared state itself.
    FullWithState,
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CountMode::ConditionD => write!(f, "condition-d"),
            CountMode::Full => write!(f, "full"),
            CountMode::FullWithState => write!(f, "full-with-state"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("mode {mode} requires a state-specific entry")]
    ModeMismatch { mode: CountMode },
}

/// (label, left-side rays, right-side rays, constant)
type StoredEquation = (
    &'static str,
    &'static [[i64; 4]],
    &'static [[i64; 4]],
    u32,
);

const CABELLO14_EQUATIONS: [StoredEquation; 5] = [
    (
        "1",
        &[[0, 0, 1, 0], [1, 1, 0, 0], [1, -1, 0, 0]],
        &[[0, 1, 0, 0], [1, 0, 1, 0], [1, 0, -1, 0]],
        0,
    ),
    (
        "2",
        &[[1, -1, -1, 1], [1, 1, 0, 0], [0, 0, 1, 1]],
        &[[1, 1, 1, 1], [1, 0, -1, 0], [0, 1, 0, -1]],
        0,
    ),
    (
        "3",
        &[[0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 1]],
        &[[1, -1, -1, 1], [1, 1, 1, 1], [0, 1, -1, 0]],
        0,
    ),
    (
        "4",
        &[[1, 1, -1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
        &[[1, 1, 1, -1], [1, 0, 0, 1], [0, 1, -1, 0]],
        0,
    ),
    (
        "5",
        &[[1, 1, -1, 1], [1, 1, 1, -1], [1, -1, 0, 0], [0, 0, 1, 1]],
        &[],
        1,
    ),
];

const SINGLET5_EQUATIONS: [(&str, &[[i64; 4]], u32); 3] = [
    ("6", &[[1, 1, -1, 1], [1, -1, 0, 0], [0, 0, 1, 1]], 1),
    ("7", &[[1, 1, -1, 1], [1, 0, 1, 0], [0, 1, 0, -1]], 1),
    (
        "8",
        &[[1, -1, 0, 0], [0, 0, 1, 1], [1, 0, 1, 0], [0, 1, 0, -1]],
        1,
    ),
];

const SINGLET_STATE: [i64; 4] = [0, 1, -1, 0];

fn ray(components: &[i64]) -> Ray {
    Ray::from_ints(components).expect("catalog data is nonzero")
}

fn rays(components: &[[i64; 4]]) -> Vec<Ray> {
    components.iter().map(|c| ray(c)).collect()
}

/// Builds the stored 14-ray system verbatim and checks each equation
/// against its geometric reconstruction: the unit-constant equation must
/// be a resolution of the identity, and each zero-constant equation must
/// be the difference of the two bases obtained by completing its sides
/// with their (equal) orthogonal-complement ray.
fn build_cabello14() -> EquationSystem {
    let mut system = EquationSystem::new("cabello14", 4);
    for (label, lhs, rhs, constant) in CABELLO14_EQUATIONS {
        let lhs_ids = rays(lhs)
            .into_iter()
            .map(|r| system.intern_ray(r))
            .collect::<Result<Vec<_>, _>>()
            .expect("catalog rays have dimension 4");
        let rhs_ids = rays(rhs)
            .into_iter()
            .map(|r| system.intern_ray(r))
            .collect::<Result<Vec<_>, _>>()
            .expect("catalog rays have dimension 4");
        let equation = crate::equation::ValueEquation::new(label, lhs_ids, rhs_ids, constant)
            .expect("catalog equations have no same-side duplicates");
        system.push_equation(equation).expect("ids are in range");
    }
    assert_eq!(system.var_count(), 14, "catalog must contain 14 rays");

    // Re-derivation guard against transcription drift.
    let mut scratch = EquationSystem::new("scratch", 4);
    for (label, lhs, rhs, constant) in CABELLO14_EQUATIONS {
        let index = system
            .equations()
            .iter()
            .position(|eq| eq.label() == label)
            .expect("just inserted");
        let stored = &system.equations()[index];
        if constant == 1 {
            let derived = scratch
                .build_basis_equation(&rays(lhs), label)
                .expect("unit-constant catalog equation must be a basis");
            assert!(
                same_relation(&derived, &scratch, stored, &system),
                "re-derived basis equation {label} disagrees with stored data"
            );
        } else {
            let left = rays(lhs);
            let right = rays(rhs);
            let left_completion =
                complete_to_basis(&left, 4).expect("catalog sides are orthogonal triads");
            let right_completion =
                complete_to_basis(&right, 4).expect("catalog sides are orthogonal triads");
            assert_eq!(
                left_completion, right_completion,
                "catalog equation {label}: sides complete to different rays"
            );
            let mut basis_a = left;
            basis_a.push(left_completion);
            let mut basis_b = right;
            basis_b.push(right_completion);
            let derived = scratch
                .build_difference_equation(&basis_a, &basis_b, label)
                .expect("completed catalog sides are bases sharing the completion");
            assert!(
                same_relation(&derived, &scratch, stored, &system),
                "re-derived difference equation {label} disagrees with stored data"
            );
        }
    }
    system
}

/// Builds the stored 5-ray singlet system verbatim, then re-derives it:
/// the two triad equations must arise from substituting the singlet state
/// into the bases obtained by completing the triads, and the four-ray
/// relation must arise from the anticorrelation derivation.
fn build_singlet5() -> EquationSystem {
    let state = ray(&SINGLET_STATE);
    let mut system = EquationSystem::new("singlet5", 4);
    for (label, lhs, constant) in SINGLET5_EQUATIONS {
        let lhs_ids = rays(lhs)
            .into_iter()
            .map(|r| system.intern_ray(r))
            .collect::<Result<Vec<_>, _>>()
            .expect("catalog rays have dimension 4");
        let equation = crate::equation::ValueEquation::new(label, lhs_ids, Vec::new(), constant)
            .expect("catalog equations have no same-side duplicates");
        system.push_equation(equation).expect("ids are in range");
    }
    system.set_state(state.clone()).expect("state dimension matches");
    assert_eq!(system.var_count(), 5, "catalog must contain 5 rays");

    // Reconstruct the two triad equations by completing each triad to a
    // basis and substituting the state. The completions are exactly the
    // omitted state-orthogonal rays; record them on the catalog system.
    let mut parent = EquationSystem::new("singlet5", 4);
    for (label, lhs, _) in &SINGLET5_EQUATIONS[..2] {
        let triad = rays(lhs);
        assert!(
            in_span(&state, &triad).expect("dimensions match"),
            "catalog triad {label} does not span a subspace containing the state"
        );
        let completion = complete_to_basis(&triad, 4).expect("catalog triads are orthogonal");
        let mut basis = triad;
        basis.push(completion);
        let equation = parent
            .build_basis_equation(&basis, *label)
            .expect("completed triad is a basis");
        parent.push_equation(equation).expect("ids are in range");
    }
    let derived = state_substitution(&parent, &state).expect("dimensions match");
    for (index, (label, _, _)) in SINGLET5_EQUATIONS[..2].iter().enumerate() {
        assert!(
            same_relation(
                &derived.equations()[index],
                &derived,
                &system.equations()[index],
                &system
            ),
            "re-derived state equation {label} disagrees with stored data"
        );
    }
    for elimination in derived.eliminations() {
        assert_eq!(
            elimination.reason,
            EliminationReason::OrthogonalToState,
            "the state itself is not a variable of the parent bases"
        );
        system.record_elimination(elimination.clone());
    }
    assert_eq!(
        system.eliminations().len(),
        2,
        "exactly two omitted rays are forced to zero by the state"
    );

    // Reconstruct the four-ray relation via the anticorrelation argument.
    let (label, lhs, _) = SINGLET5_EQUATIONS[2];
    let mut scratch = EquationSystem::new("scratch", 4);
    let (derived_relation, _) = build_singlet_relation(&mut scratch, &rays(lhs), label)
        .expect("catalog relation rays factor into a cross-product family");
    assert!(
        same_relation(
            &derived_relation,
            &scratch,
            &system.equations()[2],
            &system
        ),
        "re-derived singlet relation disagrees with stored data"
    );
    system
}

/// The shipped proof catalog.
///
/// Construction re-derives every equation from geometry and panics on any
/// mismatch with the stored data.
pub fn catalog() -> Vec<ProofEntry> {
    vec![
        ProofEntry {
            name: "cabello14".into(),
            system: build_cabello14(),
            kind: ProofKind::StateIndependent,
            notes: "State-independent system of 14 rays in dimension 4: four \
                    basis-difference equations and one resolution of the \
                    identity. Summing all five equations gives an even \
                    contribution per ray against an odd constant."
                .into(),
        },
        ProofEntry {
            name: "singlet5".into(),
            system: build_singlet5(),
            kind: ProofKind::StateSpecific,
            notes: "State-specific system of 5 rays in dimension 4 for the \
                    singlet direction (0,1,-1,0): two triad equations from \
                    substituting the state into resolutions of the identity, \
                    plus the anticorrelation relation between the four \
                    factorizable rays. Each ray appears twice while the \
                    constants sum to 3."
                .into(),
        },
    ]
}

pub fn catalog_entry(name: &str) -> Option<ProofEntry> {
    catalog().into_iter().find(|entry| entry.name == name)
}

/// Ratio f/n between the number of distinct rays appearing in the
/// equations and the ambient dimension.
pub fn merit_ratio(system: &EquationSystem) -> Rational64 {
    let f = system.rays_in_equations().len() as i64;
    Rational64::new(f, system.dim() as i64)
}

/// Rays forced to zero by the prepared state but absent from the final
/// equations: the recorded eliminations, plus (for systems parsed from
/// files, which carry no derivation record) the orthogonal-complement
/// completions of the condition-(d) triad equations.
fn omitted_rays(system: &EquationSystem) -> BTreeSet<Ray> {
    let mut omitted: BTreeSet<Ray> = system
        .eliminations()
        .iter()
        .filter(|e| e.reason == EliminationReason::OrthogonalToState)
        .map(|e| e.ray.clone())
        .collect();
    let Some(state) = system.state() else {
        return omitted;
    };
    let visible: BTreeSet<&Ray> = system.rays_in_equations();
    for eq in system.equations() {
        if eq.constant() != 1 || !eq.rhs().is_empty() || eq.lhs().len() + 1 != system.dim() {
            continue;
        }
        let triad: Vec<Ray> = eq.lhs().iter().map(|&v| system.ray(v).clone()).collect();
        if pairwise_orthogonal(&triad) != Ok(true) {
            continue;
        }
        if in_span(state, &triad) != Ok(true) {
            continue;
        }
        let completion = complete_to_basis(&triad, system.dim())
            .expect("orthogonal independent rays complete uniquely");
        debug_assert_eq!(completion.is_orthogonal_to(state), Ok(true));
        if !visible.contains(&completion) {
            omitted.insert(completion);
        }
    }
    omitted
}

/// Counts the propositions involved in a proof under the chosen mode.
pub fn count_propositions(entry: &ProofEntry, mode: CountMode) -> Result<usize, CountError> {
    let visible = entry.system.rays_in_equations().len();
    match mode {
        CountMode::ConditionD => Ok(visible),
        CountMode::Full | CountMode::FullWithState => {
            if entry.kind != ProofKind::StateSpecific || entry.system.state().is_none() {
                return Err(CountError::ModeMismatch { mode });
            }
            let full = visible + omitted_rays(&entry.system).len();
            match mode {
                CountMode::Full => Ok(full),
                _ => Ok(full + 1),
            }
        }
    }
}
