//! Shared helpers for the integration suites: deterministic random system
//! generation and an enumeration oracle for basis completions.
//!
//! Not every suite uses every helper.
#![allow(dead_code)]

use bks_core::{EquationSystem, Ray, ValueEquation, VarId};
use rand::prelude::*;
use rand::seq::SliceRandom;

pub fn ray(components: &[i64]) -> Ray {
    Ray::from_ints(components).unwrap()
}

/// A random canonical ray with small components.
pub fn random_ray<R: Rng>(rng: &mut R, dim: usize) -> Ray {
    loop {
        let components: Vec<i64> = (0..dim).map(|_| rng.random_range(-3..=3)).collect();
        if let Ok(ray) = Ray::from_ints(&components) {
            return ray;
        }
    }
}

/// A random system over distinct canonical rays in dimension 4. Sides are
/// disjoint random subsets; constants range over 0..=2, so the pool mixes
/// satisfiable and unsatisfiable systems.
pub fn random_system<R: Rng>(rng: &mut R, name: &str, max_vars: usize) -> EquationSystem {
    let dim = 4;
    let var_count = rng.random_range(1..=max_vars);
    let mut system = EquationSystem::new(name, dim);
    while system.var_count() < var_count {
        let _ = system.intern_ray(random_ray(rng, dim));
    }
    let eq_count = rng.random_range(1..=4);
    for i in 0..eq_count {
        let mut vars: Vec<VarId> = (0..system.var_count()).map(VarId).collect();
        vars.shuffle(rng);
        let lhs_len = rng.random_range(1..=vars.len().min(4));
        let rhs_len = rng.random_range(0..=(vars.len() - lhs_len).min(4));
        let lhs = vars[..lhs_len].to_vec();
        let rhs = vars[lhs_len..lhs_len + rhs_len].to_vec();
        let constant = rng.random_range(0..=2);
        let equation =
            ValueEquation::new(format!("r{}", i + 1), lhs, rhs, constant).unwrap();
        system.push_equation(equation).unwrap();
    }
    system
}

/// Independent completion oracle: enumerate every integer vector with
/// entries in -3..=3 that is orthogonal to all given rays; every hit must
/// canonicalize to one and the same ray, which is returned.
pub fn completion_by_enumeration(rays: &[Ray]) -> Ray {
    assert!(rays.iter().all(|r| r.dim() == 4));
    let mut found: Option<Ray> = None;
    let range = -3i64..=3;
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                for d in range.clone() {
                    if (a, b, c, d) == (0, 0, 0, 0) {
                        continue;
                    }
                    let candidate = ray(&[a, b, c, d]);
                    if rays
                        .iter()
                        .all(|r| r.is_orthogonal_to(&candidate).unwrap())
                    {
                        match &found {
                            None => found = Some(candidate),
                            Some(prev) => assert_eq!(
                                prev, &candidate,
                                "completion is not unique over the search box"
                            ),
                        }
                    }
                }
            }
        }
    }
    found.expect("no completion found in the search box")
}
