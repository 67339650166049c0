//! Python bindings: exposes rays, equation systems, solvers, certificates
//! and the proof catalog as the `bks_py` extension module.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyType;

use bks_core as core;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts an int, a `numerator/denominator` string, or any object with
/// integer `numerator`/`denominator` attributes (e.g. `fractions.Fraction`).
fn extract_component(obj: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(int) = obj.extract::<BigInt>() {
        return Ok(BigRational::from_integer(int));
    }
    if let Ok(text) = obj.extract::<String>() {
        let (numer, denom) = match text.split_once('/') {
            Some((n, d)) => (n.trim().to_string(), d.trim().to_string()),
            None => (text.trim().to_string(), "1".to_string()),
        };
        let numer: BigInt = numer.parse().map_err(value_err)?;
        let denom: BigInt = denom.parse().map_err(value_err)?;
        if denom == BigInt::from(0) {
            return Err(PyValueError::new_err("zero denominator"));
        }
        return Ok(BigRational::new(numer, denom));
    }
    if let (Ok(numer), Ok(denom)) = (obj.getattr("numerator"), obj.getattr("denominator")) {
        return Ok(BigRational::new(
            numer.extract::<BigInt>()?,
            denom.extract::<BigInt>()?,
        ));
    }
    Err(PyValueError::new_err(
        "expected an int, a 'p/q' string, or a Fraction-like object",
    ))
}

/// A canonical projective ray with exact integer components.
#[pyclass(name = "Ray", frozen, eq, hash, from_py_object)]
#[derive(Clone, PartialEq, Eq, Hash)]
struct PyRay {
    inner: core::Ray,
}

#[pymethods]
impl PyRay {
    /// Canonicalize a nonzero rational vector.
    #[new]
    fn new(components: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let rats = components
            .iter()
            .map(extract_component)
            .collect::<PyResult<Vec<_>>>()?;
        let inner = core::Ray::canonicalize(&rats).map_err(value_err)?;
        Ok(PyRay { inner })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn components(&self) -> Vec<BigInt> {
        self.inner.components().to_vec()
    }

    fn inner_product(&self, other: &PyRay) -> PyResult<BigInt> {
        self.inner.inner(&other.inner).map_err(value_err)
    }

    fn is_orthogonal_to(&self, other: &PyRay) -> PyResult<bool> {
        self.inner.is_orthogonal_to(&other.inner).map_err(value_err)
    }

    /// Kronecker product of two 2-dimensional rays.
    fn tensor(&self, other: &PyRay) -> PyResult<PyRay> {
        Ok(PyRay {
            inner: self.inner.tensor(&other.inner).map_err(value_err)?,
        })
    }

    /// The orthogonal partner (-b, a) of a 2-dimensional ray (a, b).
    fn perp2(&self) -> PyResult<PyRay> {
        Ok(PyRay {
            inner: self.inner.perp2().map_err(value_err)?,
        })
    }

    /// Tensor factors of a 4-dimensional ray, or None if entangled.
    fn factorize(&self) -> PyResult<Option<(PyRay, PyRay)>> {
        Ok(self
            .inner
            .factorize()
            .map_err(value_err)?
            .map(|(u, w)| (PyRay { inner: u }, PyRay { inner: w })))
    }

    /// The ray with trailing zero components appended.
    fn lift(&self, zeros: usize) -> PyRay {
        PyRay {
            inner: self.inner.lift(zeros),
        }
    }

    fn __repr__(&self) -> String {
        format!("Ray{}", self.inner)
    }
}

/// Outcome of a satisfiability decision.
#[pyclass(name = "SolverOutcome", frozen)]
struct PyOutcome {
    #[pyo3(get)]
    verdict: String,
    #[pyo3(get)]
    witness: Option<Vec<bool>>,
    #[pyo3(get)]
    nodes_explored: u64,
}

impl From<core::SolverOutcome> for PyOutcome {
    fn from(outcome: core::SolverOutcome) -> Self {
        PyOutcome {
            verdict: outcome.verdict.to_string(),
            witness: outcome.witness.map(|w| w.values().to_vec()),
            nodes_explored: outcome.nodes_explored,
        }
    }
}

#[pymethods]
impl PyOutcome {
    fn __repr__(&self) -> String {
        format!(
            "SolverOutcome(verdict='{}', nodes_explored={})",
            self.verdict, self.nodes_explored
        )
    }
}

/// Trace of a successful singlet-relation derivation.
#[pyclass(name = "SingletDerivation", frozen)]
struct PyDerivation {
    #[pyo3(get)]
    input_rays: Vec<PyRay>,
    #[pyo3(get)]
    factorizations: Vec<(PyRay, PyRay)>,
    #[pyo3(get)]
    substituted_terms: Vec<(PyRay, PyRay)>,
    #[pyo3(get)]
    basis_one: (PyRay, PyRay),
    #[pyo3(get)]
    basis_two: (PyRay, PyRay),
}

/// A named system of 0/1 value equations over canonical rays.
#[pyclass(name = "System", skip_from_py_object)]
#[derive(Clone)]
struct PySystem {
    inner: core::EquationSystem,
}

#[pymethods]
impl PySystem {
    /// Parse a `.bks` document.
    #[classmethod]
    fn parse(_cls: &Bound<'_, PyType>, text: &str) -> PyResult<Self> {
        Ok(PySystem {
            inner: core::parse_system(text).map_err(value_err)?,
        })
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.name().to_string()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn var_count(&self) -> usize {
        self.inner.var_count()
    }

    fn rays(&self) -> Vec<PyRay> {
        self.inner
            .rays()
            .iter()
            .map(|r| PyRay { inner: r.clone() })
            .collect()
    }

    fn state(&self) -> Option<PyRay> {
        self.inner.state().map(|s| PyRay { inner: s.clone() })
    }

    /// Equations as (label, lhs variable ids, rhs variable ids, constant).
    fn equations(&self) -> Vec<(String, Vec<usize>, Vec<usize>, u32)> {
        self.inner
            .equations()
            .iter()
            .map(|eq| {
                (
                    eq.label().to_string(),
                    eq.lhs().iter().map(|v| v.0).collect(),
                    eq.rhs().iter().map(|v| v.0).collect(),
                    eq.constant(),
                )
            })
            .collect()
    }

    fn serialize(&self) -> String {
        core::serialize_system(&self.inner)
    }

    /// Decide satisfiability; method is "backtrack" or "brute".
    #[pyo3(signature = (method = "backtrack"))]
    fn solve(&self, method: &str) -> PyResult<PyOutcome> {
        let outcome = match method {
            "backtrack" => core::backtrack_solve(&self.inner),
            "brute" => core::brute_force(&self.inner).map_err(value_err)?,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown method '{other}'; expected 'backtrack' or 'brute'"
                )))
            }
        };
        Ok(outcome.into())
    }

    /// Indices of a parity-contradiction certificate, or None.
    fn parity_certificate(&self) -> Option<Vec<usize>> {
        core::find_parity_certificate(&self.inner)
            .map(|cert| cert.equation_indices().to_vec())
    }

    fn verify_certificate(&self, indices: Vec<usize>) -> PyResult<bool> {
        let cert = core::ParityCertificate::new(indices)
            .ok_or_else(|| PyValueError::new_err("certificate must be nonempty"))?;
        core::verify_parity_certificate(&self.inner, &cert).map_err(value_err)
    }

    /// Substitute fixed 0/1 values for the given variable ids.
    fn substitute(&self, fixed: BTreeMap<usize, bool>) -> PyResult<PySystem> {
        let fixed: BTreeMap<core::VarId, bool> = fixed
            .into_iter()
            .map(|(k, v)| (core::VarId(k), v))
            .collect();
        Ok(PySystem {
            inner: self.inner.substitute(&fixed).map_err(value_err)?,
        })
    }

    /// Substitute the values forced by a prepared state (defaults to the
    /// system's own state line).
    #[pyo3(signature = (state = None))]
    fn derive_state(&self, state: Option<&PyRay>) -> PyResult<PySystem> {
        let state = match state {
            Some(ray) => ray.inner.clone(),
            None => self
                .inner
                .state()
                .cloned()
                .ok_or_else(|| PyValueError::new_err("system has no state"))?,
        };
        Ok(PySystem {
            inner: core::state_substitution(&self.inner, &state).map_err(value_err)?,
        })
    }

    /// Rays eliminated by a state substitution, as (ray, value, reason).
    fn eliminations(&self) -> Vec<(PyRay, bool, String)> {
        self.inner
            .eliminations()
            .iter()
            .map(|e| {
                let reason = match e.reason {
                    core::EliminationReason::PreparedState => "prepared-state",
                    core::EliminationReason::OrthogonalToState => "orthogonal-to-state",
                };
                (
                    PyRay {
                        inner: e.ray.clone(),
                    },
                    e.value,
                    reason.to_string(),
                )
            })
            .collect()
    }

    fn lift(&self, zeros: usize) -> PySystem {
        PySystem {
            inner: self.inner.lift(zeros),
        }
    }

    fn without_equation(&self, index: usize) -> PyResult<PySystem> {
        Ok(PySystem {
            inner: self
                .inner
                .without_equation(index)
                .map_err(|e| PyIndexError::new_err(e.to_string()))?,
        })
    }

    fn export_dot(&self) -> String {
        core::export_dot(&self.inner)
    }

    fn export_cnf(&self) -> PyResult<String> {
        core::export_cnf(&self.inner).map_err(value_err)
    }

    /// The pair (f, n): rays used by the equations and ambient dimension.
    fn merit_ratio(&self) -> (usize, usize) {
        (self.inner.rays_in_equations().len(), self.inner.dim())
    }

    /// Count propositions; mode is "condition-d", "full" or
    /// "full-with-state".
    fn count(&self, mode: &str) -> PyResult<usize> {
        let mode = match mode {
            "condition-d" => core::CountMode::ConditionD,
            "full" => core::CountMode::Full,
            "full-with-state" => core::CountMode::FullWithState,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown mode '{other}'"
                )))
            }
        };
        let kind = if self.inner.state().is_some() {
            core::ProofKind::StateSpecific
        } else {
            core::ProofKind::StateIndependent
        };
        let entry = core::ProofEntry {
            name: self.inner.name().to_string(),
            system: self.inner.clone(),
            kind,
            notes: String::new(),
        };
        core::count_propositions(&entry, mode).map_err(value_err)
    }

    /// The report rendered as text.
    fn report(&self) -> String {
        core::build_report(&self.inner).to_string()
    }

    /// Per-equation provenance labels from the structural checks.
    fn provenances(&self) -> Vec<String> {
        self.inner
            .equations()
            .iter()
            .map(|eq| core::classify_equation(&self.inner, eq).to_string())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "System(name='{}', dim={}, vars={}, equations={})",
            self.inner.name(),
            self.inner.dim(),
            self.inner.var_count(),
            self.inner.equations().len()
        )
    }
}

/// Names of the built-in proof catalog entries.
#[pyfunction]
fn catalog_names() -> Vec<String> {
    core::catalog().into_iter().map(|e| e.name).collect()
}

/// Load one catalog entry as (system, kind, notes).
#[pyfunction]
fn catalog_entry(name: &str) -> PyResult<(PySystem, String, String)> {
    let entry = core::catalog_entry(name)
        .ok_or_else(|| PyValueError::new_err(format!("unknown catalog entry '{name}'")))?;
    Ok((
        PySystem {
            inner: entry.system,
        },
        entry.kind.to_string(),
        entry.notes,
    ))
}

/// The unique ray completing dim-1 pairwise-orthogonal rays to a basis.
#[pyfunction]
fn complete_to_basis(rays: Vec<PyRay>, dim: usize) -> PyResult<PyRay> {
    let rays: Vec<core::Ray> = rays.into_iter().map(|r| r.inner).collect();
    Ok(PyRay {
        inner: core::complete_to_basis(&rays, dim).map_err(value_err)?,
    })
}

#[pyfunction]
fn is_orthogonal_basis(rays: Vec<PyRay>, dim: usize) -> PyResult<bool> {
    let rays: Vec<core::Ray> = rays.into_iter().map(|r| r.inner).collect();
    core::is_orthogonal_basis(&rays, dim).map_err(value_err)
}

#[pyfunction]
fn in_span(target: &PyRay, rays: Vec<PyRay>) -> PyResult<bool> {
    let rays: Vec<core::Ray> = rays.into_iter().map(|r| r.inner).collect();
    core::in_span(&target.inner, &rays).map_err(value_err)
}

/// True iff the state lies in the span of the pairwise-orthogonal set.
#[pyfunction]
fn condition_d_check(triad: Vec<PyRay>, state: &PyRay) -> PyResult<bool> {
    let triad: Vec<core::Ray> = triad.into_iter().map(|r| r.inner).collect();
    core::condition_d_check(&triad, &state.inner).map_err(value_err)
}

/// Derive the singlet anticorrelation relation for four factorizable rays.
#[pyfunction]
fn singlet_relation(rays: Vec<PyRay>) -> PyResult<PyDerivation> {
    let rays: Vec<core::Ray> = rays.into_iter().map(|r| r.inner).collect();
    let mut scratch = core::EquationSystem::new("scratch", 4);
    let (_, derivation) =
        core::build_singlet_relation(&mut scratch, &rays, "relation").map_err(value_err)?;
    let wrap = |r: &core::Ray| PyRay { inner: r.clone() };
    Ok(PyDerivation {
        input_rays: derivation.input_rays.iter().map(wrap).collect(),
        factorizations: derivation
            .factorizations
            .iter()
            .map(|(u, w)| (wrap(&u.ray), wrap(&w.ray)))
            .collect(),
        substituted_terms: derivation
            .substituted_terms
            .iter()
            .map(|(a, b)| (wrap(a), wrap(b)))
            .collect(),
        basis_one: (wrap(&derivation.basis_one.0), wrap(&derivation.basis_one.1)),
        basis_two: (wrap(&derivation.basis_two.0), wrap(&derivation.basis_two.1)),
    })
}

/// Brute-force verdict ("SAT"/"UNSAT") for a DIMACS CNF text.
#[pyfunction]
fn check_dimacs(text: &str) -> PyResult<String> {
    core::check_dimacs(text)
        .map(|verdict| verdict.to_string())
        .map_err(value_err)
}

#[pymodule]
fn bks_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyRay>()?;
    m.add_class::<PySystem>()?;
    m.add_class::<PyOutcome>()?;
    m.add_class::<PyDerivation>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_entry, m)?)?;
    m.add_function(wrap_pyfunction!(complete_to_basis, m)?)?;
    m.add_function(wrap_pyfunction!(is_orthogonal_basis, m)?)?;
    m.add_function(wrap_pyfunction!(in_span, m)?)?;
    m.add_function(wrap_pyfunction!(condition_d_check, m)?)?;
    m.add_function(wrap_pyfunction!(singlet_relation, m)?)?;
    m.add_function(wrap_pyfunction!(check_dimacs, m)?)?;
    Ok(())
}
