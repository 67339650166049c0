//! Linear 0/1 value-assignment systems over canonical rays.
//!
//! A variable is a canonical ray; keying variables by canonical form makes
//! noncontextuality structural: the same direction has one value no matter
//! which resolution of the identity it appears in.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

use crate::ray::{is_orthogonal_basis, Ray, RayError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SystemError {
    #[error(transparent)]
    Ray(#[from] RayError),
    #[error("rays do not form an orthogonal basis")]
    NotABasis,
    #[error("bases share no common ray")]
    NoCommonRay,
    #[error("variable appears twice on one side of an equation")]
    SameSideDuplicate,
    #[error("variable id {0} out of range")]
    BadVarId(usize),
    #[error("equation index {0} out of range")]
    BadEquationIndex(usize),
    #[error("{vars} variables exceed the exhaustive-search limit of {max}")]
    TooLarge { vars: usize, max: usize },
}

/// Index of a variable (one per distinct canonical ray) within a system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// A relation `sum(lhs values) = sum(rhs values) + constant` between 0/1
/// proposition values.
///
/// Each side is a set (a ray never appears twice within one resolution of
/// the identity); a variable may appear on both sides, in which case its
/// contributions cancel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueEquation {
    label: String,
    lhs: Vec<VarId>,
    rhs: Vec<VarId>,
    constant: u32,
}

impl ValueEquation {
    pub fn new(
        label: impl Into<String>,
        lhs: Vec<VarId>,
        rhs: Vec<VarId>,
        constant: u32,
    ) -> Result<Self, SystemError> {
        for side in [&lhs, &rhs] {
            let unique: BTreeSet<_> = side.iter().collect();
            if unique.len() != side.len() {
                return Err(SystemError::SameSideDuplicate);
            }
        }
        Ok(ValueEquation {
            label: label.into(),
            lhs,
            rhs,
            constant,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn lhs(&self) -> &[VarId] {
        &self.lhs
    }

    pub fn rhs(&self) -> &[VarId] {
        &self.rhs
    }

    pub fn constant(&self) -> u32 {
        self.constant
    }

    /// Distinct variables appearing on either side.
    pub fn support(&self) -> BTreeSet<VarId> {
        self.lhs.iter().chain(&self.rhs).copied().collect()
    }

    /// The literal `0 = 0`, satisfied by every assignment.
    pub fn is_trivial(&self) -> bool {
        self.lhs.is_empty() && self.rhs.is_empty() && self.constant == 0
    }

    /// True when no 0/1 assignment can satisfy the equation: after
    /// cancelling variables shared across sides, the left side cannot
    /// reach the constant.
    pub fn is_contradictory(&self) -> bool {
        let rhs: BTreeSet<_> = self.rhs.iter().collect();
        let lhs_only = self.lhs.iter().filter(|v| !rhs.contains(v)).count();
        (self.constant as usize) > lhs_only
    }

    pub fn evaluate(&self, assignment: &Assignment) -> bool {
        let sum = |side: &[VarId]| -> u32 { side.iter().map(|&v| assignment.get(v) as u32).sum() };
        sum(&self.lhs) == sum(&self.rhs) + self.constant
    }
}

/// A total 0/1 valuation of a system's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Assignment { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, var: VarId) -> bool {
        self.values[var.0]
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    /// True iff every equation of the system holds under this assignment.
    pub fn satisfies(&self, system: &EquationSystem) -> bool {
        self.values.len() == system.var_count()
            && system.equations().iter().all(|eq| eq.evaluate(self))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.values {
            write!(f, "{}", v as u8)?;
        }
        Ok(())
    }
}

/// Why a ray was eliminated during a state substitution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EliminationReason {
    /// The ray is the prepared state itself; its value is 1.
    PreparedState,
    /// The ray is orthogonal to the prepared state; its value is 0.
    OrthogonalToState,
}

/// Record of one variable removed by a state substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Elimination {
    pub ray: Ray,
    pub value: bool,
    pub reason: EliminationReason,
}

impl fmt::Display for Elimination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let why = match self.reason {
            EliminationReason::PreparedState => "prepared state",
            EliminationReason::OrthogonalToState => "orthogonal to state",
        };
        write!(f, "v{} = {} ({})", self.ray, self.value as u8, why)
    }
}

/// A named set of rays, value equations, and an optional prepared state.
#[derive(Clone, Debug)]
pub struct EquationSystem {
    name: String,
    dim: usize,
    rays: Vec<Ray>,
    index: HashMap<Ray, VarId>,
    equations: Vec<ValueEquation>,
    state: Option<Ray>,
    eliminations: Vec<Elimination>,
}

impl EquationSystem {
    pub fn new(name: impl Into<String>, dim: usize) -> Self {
        EquationSystem {
            name: name.into(),
            dim,
            rays: Vec::new(),
            index: HashMap::new(),
            equations: Vec::new(),
            state: None,
            eliminations: Vec::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn var_count(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, var: VarId) -> &Ray {
        &self.rays[var.0]
    }

    pub fn equations(&self) -> &[ValueEquation] {
        &self.equations
    }

    pub fn state(&self) -> Option<&Ray> {
        self.state.as_ref()
    }

    pub fn eliminations(&self) -> &[Elimination] {
        &self.eliminations
    }

    pub(crate) fn record_elimination(&mut self, elimination: Elimination) {
        self.eliminations.push(elimination);
    }

    pub fn set_state(&mut self, state: Ray) -> Result<(), SystemError> {
        if state.dim() != self.dim {
            return Err(RayError::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            }
            .into());
        }
        self.state = Some(state);
        Ok(())
    }

    /// Registers a canonical ray as a variable, returning the existing id
    /// when the ray is already known.
    pub fn intern_ray(&mut self, ray: Ray) -> Result<VarId, SystemError> {
        if ray.dim() != self.dim {
            return Err(RayError::DimensionMismatch {
                expected: self.dim,
                found: ray.dim(),
            }
            .into());
        }
        if let Some(&id) = self.index.get(&ray) {
            return Ok(id);
        }
        let id = VarId(self.rays.len());
        self.index.insert(ray.clone(), id);
        self.rays.push(ray);
        Ok(id)
    }

    pub fn lookup_ray(&self, ray: &Ray) -> Option<VarId> {
        self.index.get(ray).copied()
    }

    pub fn push_equation(&mut self, equation: ValueEquation) -> Result<(), SystemError> {
        for &v in equation.lhs().iter().chain(equation.rhs()) {
            if v.0 >= self.rays.len() {
                return Err(SystemError::BadVarId(v.0));
            }
        }
        self.equations.push(equation);
        Ok(())
    }

    /// Builds `sum over rays = 1` from a resolution of the identity,
    /// registering any unseen rays.
    pub fn build_basis_equation(
        &mut self,
        rays: &[Ray],
        label: impl Into<String>,
    ) -> Result<ValueEquation, SystemError> {
        if !is_orthogonal_basis(rays, self.dim)? {
            return Err(SystemError::NotABasis);
        }
        let lhs = rays
            .iter()
            .map(|r| self.intern_ray(r.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        ValueEquation::new(label, lhs, Vec::new(), 1)
    }

    /// Builds the difference relation of two resolutions of the identity
    /// sharing at least one ray: the shared rays cancel (they carry equal
    /// values on both sides), leaving `sum(A \ B) = sum(B \ A)`.
    pub fn build_difference_equation(
        &mut self,
        basis_a: &[Ray],
        basis_b: &[Ray],
        label: impl Into<String>,
    ) -> Result<ValueEquation, SystemError> {
        for basis in [basis_a, basis_b] {
            if !is_orthogonal_basis(basis, self.dim)? {
                return Err(SystemError::NotABasis);
            }
        }
        let set_b: BTreeSet<&Ray> = basis_b.iter().collect();
        let set_a: BTreeSet<&Ray> = basis_a.iter().collect();
        if set_a.intersection(&set_b).next().is_none() {
            return Err(SystemError::NoCommonRay);
        }
        let lhs = basis_a
            .iter()
            .filter(|r| !set_b.contains(r))
            .map(|r| self.intern_ray(r.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let rhs = basis_b
            .iter()
            .filter(|r| !set_a.contains(r))
            .map(|r| self.intern_ray(r.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        ValueEquation::new(label, lhs, rhs, 0)
    }

    /// Eliminates the given variables at fixed values: constants are
    /// adjusted, equations reduced to `0 = 0` are dropped, contradictory
    /// equations are retained (the system is then trivially unsatisfiable,
    /// see [`ValueEquation::is_contradictory`]).
    ///
    /// The fixed rays leave the variable list; remaining ids are compacted.
    pub fn substitute(
        &self,
        fixed: &BTreeMap<VarId, bool>,
    ) -> Result<EquationSystem, SystemError> {
        for &v in fixed.keys() {
            if v.0 >= self.rays.len() {
                return Err(SystemError::BadVarId(v.0));
            }
        }
        let mut result = EquationSystem::new(self.name.clone(), self.dim);
        result.state = self.state.clone();
        result.eliminations = self.eliminations.clone();
        let mut remap: HashMap<VarId, VarId> = HashMap::new();
        for (i, ray) in self.rays.iter().enumerate() {
            let old = VarId(i);
            if !fixed.contains_key(&old) {
                let new = result.intern_ray(ray.clone())?;
                remap.insert(old, new);
            }
        }
        for eq in &self.equations {
            let touched = eq
                .lhs()
                .iter()
                .chain(eq.rhs())
                .any(|v| fixed.contains_key(v));
            if !touched {
                let copied = ValueEquation::new(
                    eq.label(),
                    eq.lhs().iter().map(|v| remap[v]).collect(),
                    eq.rhs().iter().map(|v| remap[v]).collect(),
                    eq.constant(),
                )?;
                result.push_equation(copied)?;
                continue;
            }
            let mut constant = eq.constant() as i64;
            let mut reduce = |side: &[VarId], sign: i64| -> Vec<VarId> {
                side.iter()
                    .filter_map(|v| match fixed.get(v) {
                        Some(&value) => {
                            constant += sign * value as i64;
                            None
                        }
                        None => Some(remap[v]),
                    })
                    .collect()
            };
            let mut lhs = reduce(eq.lhs(), -1);
            let mut rhs = reduce(eq.rhs(), 1);
            // Orient the result independently of substitution order: a
            // positive constant must sit on the right, and a zero-constant
            // equation puts its ray-wise larger side on the left.
            let swap = if constant < 0 {
                constant = -constant;
                true
            } else if constant == 0 {
                let key = |side: &[VarId]| -> Vec<&Ray> {
                    let mut rays: Vec<&Ray> = side.iter().map(|&v| result.ray(v)).collect();
                    rays.sort();
                    rays
                };
                key(&lhs) < key(&rhs)
            } else {
                false
            };
            if swap {
                std::mem::swap(&mut lhs, &mut rhs);
            }
            let reduced = ValueEquation::new(eq.label(), lhs, rhs, constant as u32)?;
            if !reduced.is_trivial() {
                result.push_equation(reduced)?;
            }
        }
        Ok(result)
    }

    /// A copy of the system with one equation removed. Variables are kept
    /// even if the removed equation was their only occurrence.
    pub fn without_equation(&self, index: usize) -> Result<EquationSystem, SystemError> {
        if index >= self.equations.len() {
            return Err(SystemError::BadEquationIndex(index));
        }
        let mut result = self.clone();
        result.equations.remove(index);
        Ok(result)
    }

    /// Appends `zeros` zero components to every ray (including the state
    /// and elimination records). Variable ids and equations are unchanged.
    pub fn lift(&self, zeros: usize) -> EquationSystem {
        let mut result = EquationSystem::new(self.name.clone(), self.dim + zeros);
        for ray in &self.rays {
            result
                .intern_ray(ray.lift(zeros))
                .expect("lifted ray has the lifted dimension");
        }
        result.equations = self.equations.clone();
        result.state = self.state.as_ref().map(|s| s.lift(zeros));
        result.eliminations = self
            .eliminations
            .iter()
            .map(|e| Elimination {
                ray: e.ray.lift(zeros),
                value: e.value,
                reason: e.reason,
            })
            .collect();
        result
    }

    /// Distinct rays actually appearing in the equations (a registered ray
    /// may be referenced by no equation, e.g. after removing one).
    pub fn rays_in_equations(&self) -> BTreeSet<&Ray> {
        self.equations
            .iter()
            .flat_map(|eq| eq.support())
            .map(|v| self.ray(v))
            .collect()
    }

    pub fn has_contradiction(&self) -> bool {
        self.equations.iter().any(ValueEquation::is_contradictory)
    }

    /// Structural equality: name, dimension, rays, equations and state.
    /// Derivation records (eliminations) are metadata and do not count.
    pub fn structurally_equal(&self, other: &EquationSystem) -> bool {
        self.name == other.name
            && self.dim == other.dim
            && self.rays == other.rays
            && self.equations == other.equations
            && self.state == other.state
    }
}

/// Ray-level view of an equation side, for comparing relations across
/// systems with different variable numbering.
fn side_rays<'a>(system: &'a EquationSystem, side: &[VarId]) -> BTreeSet<&'a Ray> {
    side.iter().map(|&v| system.ray(v)).collect()
}

/// True iff two equations assert the same relation between the same rays
/// (labels and variable numbering are ignored).
pub fn same_relation(
    a: &ValueEquation,
    system_a: &EquationSystem,
    b: &ValueEquation,
    system_b: &EquationSystem,
) -> bool {
    a.constant() == b.constant()
        && side_rays(system_a, a.lhs()) == side_rays(system_b, b.lhs())
        && side_rays(system_a, a.rhs()) == side_rays(system_b, b.rhs())
}
