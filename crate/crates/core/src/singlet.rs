//! Derivation of unit-sum relations between factorizable propositions in
//! the two-particle singlet state.
//!
//! Same-direction spin measurements on the singlet are perfectly
//! anticorrelated, so the particle-2 factor of each proposition can be
//! traded for its equal-valued particle-1 partner (the perp2 map). When
//! the four resulting particle-1 product terms are exactly the four cross
//! products of two orthogonal 2-dimensional bases, their sum telescopes to
//! a product of two unit sums, hence equals 1.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::equation::{EquationSystem, SystemError, ValueEquation};
use crate::ray::{LocalRay, Particle, Ray, RayError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SingletError {
    #[error("expected exactly 4 rays of dimension 4, got {0}")]
    WrongInputShape(usize),
    #[error("ray {0} is entangled and cannot be factorized")]
    NotFactorizable(Ray),
    #[error("substituted terms are not the cross products of two orthogonal bases")]
    NotACrossProductFamily,
    #[error(transparent)]
    Ray(#[from] RayError),
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Full trace of a successful singlet-relation derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingletDerivation {
    /// The four factorizable input rays, in input order.
    pub input_rays: Vec<Ray>,
    /// Their (particle-1, particle-2) tensor factors.
    pub factorizations: Vec<(LocalRay, LocalRay)>,
    /// Product terms after the anticorrelation substitution: both factors
    /// now live on particle 1. Order within a pair is not significant.
    pub substituted_terms: Vec<(Ray, Ray)>,
    /// The two orthogonal 2-dimensional bases whose cross products the
    /// substituted terms realize.
    pub basis_one: (Ray, Ray),
    pub basis_two: (Ray, Ray),
}

fn unordered(a: &Ray, b: &Ray) -> (Ray, Ray) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

/// Derives `sum of v(rays) = 1` for four factorizable 4-dimensional rays.
///
/// Each ray is split into tensor factors, the particle-2 factor is replaced
/// by its perp2 partner on particle 1, and the resulting product pairs must
/// be exactly the four cross products of two bases {e, perp2(e)} and
/// {f, perp2(f)}. If the grouping fails the relation is unproven and no
/// equation is produced.
pub fn build_singlet_relation(
    system: &mut EquationSystem,
    rays: &[Ray],
    label: impl Into<String>,
) -> Result<(ValueEquation, SingletDerivation), SingletError> {
    if rays.len() != 4 || rays.iter().any(|r| r.dim() != 4) {
        return Err(SingletError::WrongInputShape(rays.len()));
    }
    let mut factorizations = Vec::with_capacity(4);
    let mut substituted_terms = Vec::with_capacity(4);
    for ray in rays {
        let (u, w) = ray
            .factorize()?
            .ok_or_else(|| SingletError::NotFactorizable(ray.clone()))?;
        let partner = w.perp2()?;
        factorizations.push((
            LocalRay::new(Particle::One, u.clone())?,
            LocalRay::new(Particle::Two, w)?,
        ));
        substituted_terms.push((u, partner));
    }

    // Group the rays occurring in the substituted terms into perp2 orbits.
    let distinct: BTreeSet<Ray> = substituted_terms
        .iter()
        .flat_map(|(a, b)| [a.clone(), b.clone()])
        .collect();
    let mut orbits: Vec<(Ray, Ray)> = Vec::new();
    for ray in &distinct {
        let partner = ray.perp2()?;
        let orbit = unordered(ray, &partner);
        if !orbits.contains(&orbit) {
            orbits.push(orbit);
        }
    }
    let (basis_one, basis_two) = match orbits.len() {
        1 => (orbits[0].clone(), orbits[0].clone()),
        2 => (orbits[0].clone(), orbits[1].clone()),
        _ => return Err(SingletError::NotACrossProductFamily),
    };

    // The four terms must be exactly the four cross products, each once.
    let mut expected: Vec<(Ray, Ray)> = Vec::with_capacity(4);
    for e in [&basis_one.0, &basis_one.1] {
        for f in [&basis_two.0, &basis_two.1] {
            expected.push(unordered(e, f));
        }
    }
    expected.sort();
    let mut actual: Vec<(Ray, Ray)> = substituted_terms
        .iter()
        .map(|(a, b)| unordered(a, b))
        .collect();
    actual.sort();
    if actual != expected {
        return Err(SingletError::NotACrossProductFamily);
    }

    let lhs = rays
        .iter()
        .map(|r| system.intern_ray(r.clone()))
        .collect::<Result<Vec<_>, _>>()?;
    let equation = ValueEquation::new(label, lhs, Vec::new(), 1)?;
    Ok((
        equation,
        SingletDerivation {
            input_rays: rays.to_vec(),
            factorizations,
            substituted_terms,
            basis_one,
            basis_two,
        },
    ))
}
