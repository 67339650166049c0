//! State-specific derivations: substituting the values forced by a
//! prepared state, and the span criterion licensing unit-sum equations.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::equation::{Elimination, EliminationReason, EquationSystem, SystemError, VarId};
use crate::ray::{in_span, pairwise_orthogonal, Ray, RayError};

/// Eliminates every variable whose value the prepared state forces: the
/// state's own ray takes value 1, and any variable orthogonal to the state
/// takes value 0. The eliminated rays and their forced values are recorded
/// on the resulting system.
pub fn state_substitution(
    system: &EquationSystem,
    state: &Ray,
) -> Result<EquationSystem, SystemError> {
    if state.dim() != system.dim() {
        return Err(RayError::DimensionMismatch {
            expected: system.dim(),
            found: state.dim(),
        }
        .into());
    }
    let mut fixed: BTreeMap<VarId, bool> = BTreeMap::new();
    let mut record = Vec::new();
    for (i, ray) in system.rays().iter().enumerate() {
        if ray == state {
            fixed.insert(VarId(i), true);
            record.push(Elimination {
                ray: ray.clone(),
                value: true,
                reason: EliminationReason::PreparedState,
            });
        } else if state.inner(ray)?.is_zero() {
            fixed.insert(VarId(i), false);
            record.push(Elimination {
                ray: ray.clone(),
                value: false,
                reason: EliminationReason::OrthogonalToState,
            });
        }
    }
    let mut result = system.substitute(&fixed)?;
    result.set_state(state.clone())?;
    for elimination in record {
        result.record_elimination(elimination);
    }
    Ok(result)
}

/// True iff the state lies in the span of the pairwise-orthogonal set, in
/// which case the sum of the set's values must be 1 for a system prepared
/// in that state.
pub fn condition_d_check(triad: &[Ray], state: &Ray) -> Result<bool, RayError> {
    for ray in triad {
        if ray.dim() != state.dim() {
            return Err(RayError::DimensionMismatch {
                expected: state.dim(),
                found: ray.dim(),
            });
        }
    }
    if !pairwise_orthogonal(triad)? {
        return Err(RayError::NotOrthogonal);
    }
    in_span(state, triad)
}
