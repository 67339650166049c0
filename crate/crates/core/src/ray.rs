//! Exact projective linear algebra over the rationals: canonical rays,
//! inner products, spans, completions and tensor structure.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RayError {
    #[error("empty component list")]
    EmptyVector,
    #[error("all components are zero")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rays are not pairwise orthogonal")]
    NotOrthogonal,
    #[error("orthogonal complement has dimension {nullity}, expected 1")]
    NotCoindependent { nullity: usize },
}

/// A projective direction, stored as its unique canonical representative:
/// coprime integer components whose first nonzero entry is positive.
///
/// Two `Ray`s are equal exactly when their component lists are identical,
/// so rays can be used directly as map keys and set members.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray {
    components: Vec<BigInt>,
}

impl Ray {
    /// Canonicalizes an arbitrary nonzero rational vector.
    ///
    /// Any nonzero rational multiple of the input maps to the same `Ray`:
    /// denominators are cleared, the gcd is divided out and the sign is
    /// fixed so that the first nonzero component is positive.
    pub fn canonicalize(components: &[BigRational]) -> Result<Self, RayError> {
        if components.is_empty() {
            return Err(RayError::EmptyVector);
        }
        if components.iter().all(Zero::is_zero) {
            return Err(RayError::ZeroVector);
        }
        // Clear denominators.
        let lcm = components
            .iter()
            .filter(|q| !q.is_zero())
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut ints: Vec<BigInt> = components.iter().map(|q| (q * &lcm).to_integer()).collect();
        // Divide out the common factor.
        let gcd = ints
            .iter()
            .filter(|n| !n.is_zero())
            .fold(BigInt::zero(), |acc, n| acc.gcd(n));
        for n in &mut ints {
            *n = &*n / &gcd;
        }
        // Sign convention: first nonzero component positive.
        if ints.iter().find(|n| !n.is_zero()).is_some_and(|n| n.is_negative()) {
            for n in &mut ints {
                *n = -n.clone();
            }
        }
        Ok(Ray { components: ints })
    }

    /// Convenience constructor from integer components.
    pub fn from_ints(components: &[i64]) -> Result<Self, RayError> {
        let rats: Vec<BigRational> = components
            .iter()
            .map(|&n| BigRational::from_integer(BigInt::from(n)))
            .collect();
        Self::canonicalize(&rats)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[BigInt] {
        &self.components
    }

    /// Euclidean dot product of the canonical integer components.
    pub fn inner(&self, other: &Ray) -> Result<BigInt, RayError> {
        if self.dim() != other.dim() {
            return Err(RayError::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn is_orthogonal_to(&self, other: &Ray) -> Result<bool, RayError> {
        Ok(self.inner(other)?.is_zero())
    }

    /// The ray with `zeros` trailing zero components appended.
    ///
    /// Appending zeros changes neither the gcd nor the leading sign, so the
    /// result is already canonical.
    pub fn lift(&self, zeros: usize) -> Ray {
        let mut components = self.components.clone();
        components.extend(std::iter::repeat_with(BigInt::zero).take(zeros));
        Ray { components }
    }

    /// For a 2-dimensional ray (a, b), the canonical form of (-b, a).
    ///
    /// This is the unique orthogonal direction; projectively it is an
    /// involution. In the two-particle singlet it pairs a particle-1
    /// proposition with the equal-valued particle-2 proposition.
    pub fn perp2(&self) -> Result<Ray, RayError> {
        if self.dim() != 2 {
            return Err(RayError::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        let rats = [
            BigRational::from_integer(-self.components[1].clone()),
            BigRational::from_integer(self.components[0].clone()),
        ];
        Ray::canonicalize(&rats)
    }

    /// Kronecker product of two 2-dimensional rays in the fixed basis order
    /// (up⊗up, up⊗down, down⊗up, down⊗down).
    pub fn tensor(&self, other: &Ray) -> Result<Ray, RayError> {
        for r in [self, other] {
            if r.dim() != 2 {
                return Err(RayError::DimensionMismatch {
                    expected: 2,
                    found: r.dim(),
                });
            }
        }
        let (u, w) = (&self.components, &other.components);
        let components = vec![&u[0] * &w[0], &u[0] * &w[1], &u[1] * &w[0], &u[1] * &w[1]];
        // The product of two canonical rays is canonical: the gcd of all
        // pairwise products is the product of the gcds, and the first
        // nonzero entry is a product of two leading positives.
        let ray = Ray { components };
        debug_assert!(ray.is_canonical());
        Ok(ray)
    }

    /// Splits a 4-dimensional ray into its 2-dimensional tensor factors.
    ///
    /// Returns `None` when the ray is entangled, i.e. the 2x2 coefficient
    /// matrix has rank 2; that is an expected answer, not an error.
    pub fn factorize(&self) -> Result<Option<(Ray, Ray)>, RayError> {
        if self.dim() != 4 {
            return Err(RayError::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            });
        }
        let c = &self.components;
        // Matrix [[c0, c1], [c2, c3]]; rank 1 iff the determinant vanishes.
        if !(&c[0] * &c[3] - &c[1] * &c[2]).is_zero() {
            return Ok(None);
        }
        let column = if !c[0].is_zero() || !c[2].is_zero() {
            [c[0].clone(), c[2].clone()]
        } else {
            [c[1].clone(), c[3].clone()]
        };
        let row = if !c[0].is_zero() || !c[1].is_zero() {
            [c[0].clone(), c[1].clone()]
        } else {
            [c[2].clone(), c[3].clone()]
        };
        let to_rats = |v: [BigInt; 2]| {
            [
                BigRational::from_integer(v[0].clone()),
                BigRational::from_integer(v[1].clone()),
            ]
        };
        let u = Ray::canonicalize(&to_rats(column))?;
        let w = Ray::canonicalize(&to_rats(row))?;
        debug_assert_eq!(u.tensor(&w).as_ref(), Ok(self));
        Ok(Some((u, w)))
    }

    fn is_canonical(&self) -> bool {
        match Ray::canonicalize(
            &self
                .components
                .iter()
                .map(|n| BigRational::from_integer(n.clone()))
                .collect::<Vec<_>>(),
        ) {
            Ok(c) => c == *self,
            Err(_) => false,
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ray{self}")
    }
}

/// Which particle of the two-particle system a 2-dimensional proposition
/// refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Particle {
    One,
    Two,
}

impl fmt::Display for Particle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Particle::One => write!(f, "1"),
            Particle::Two => write!(f, "2"),
        }
    }
}

/// A single-particle proposition: a 2-dimensional ray tagged with the
/// particle it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LocalRay {
    pub particle: Particle,
    pub ray: Ray,
}

impl LocalRay {
    pub fn new(particle: Particle, ray: Ray) -> Result<Self, RayError> {
        if ray.dim() != 2 {
            return Err(RayError::DimensionMismatch {
                expected: 2,
                found: ray.dim(),
            });
        }
        Ok(LocalRay { particle, ray })
    }
}

impl fmt::Display for LocalRay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^({})", self.ray, self.particle)
    }
}

/// True iff the list consists of exactly `dim` pairwise-orthogonal rays,
/// i.e. the corresponding projectors resolve the identity.
pub fn is_orthogonal_basis(rays: &[Ray], dim: usize) -> Result<bool, RayError> {
    check_dims(rays, dim)?;
    if rays.len() != dim {
        return Ok(false);
    }
    pairwise_orthogonal(rays)
}

fn check_dims(rays: &[Ray], dim: usize) -> Result<(), RayError> {
    for r in rays {
        if r.dim() != dim {
            return Err(RayError::DimensionMismatch {
                expected: dim,
                found: r.dim(),
            });
        }
    }
    Ok(())
}

pub(crate) fn pairwise_orthogonal(rays: &[Ray]) -> Result<bool, RayError> {
    for (i, a) in rays.iter().enumerate() {
        for b in &rays[i + 1..] {
            if !a.is_orthogonal_to(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Completes `dim - 1` pairwise-orthogonal rays to an orthogonal basis by
/// returning the unique ray spanning their orthogonal complement.
pub fn complete_to_basis(rays: &[Ray], dim: usize) -> Result<Ray, RayError> {
    check_dims(rays, dim)?;
    if !pairwise_orthogonal(rays)? {
        return Err(RayError::NotOrthogonal);
    }
    let kernel = kernel_basis(rays, dim);
    if kernel.len() != 1 {
        return Err(RayError::NotCoindependent {
            nullity: kernel.len(),
        });
    }
    Ray::canonicalize(&kernel[0])
}

/// True iff `target` is a rational linear combination of `rays`.
/// Exact elimination; no tolerance is involved anywhere.
pub fn in_span(target: &Ray, rays: &[Ray]) -> Result<bool, RayError> {
    let dim = target.dim();
    check_dims(rays, dim)?;
    let base: Vec<Vec<BigRational>> = rays.iter().map(ray_to_row).collect();
    let mut extended = base.clone();
    extended.push(ray_to_row(target));
    Ok(rank(base) == rank(extended))
}

fn ray_to_row(ray: &Ray) -> Vec<BigRational> {
    ray.components()
        .iter()
        .map(|n| BigRational::from_integer(n.clone()))
        .collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref(rows: &mut [Vec<BigRational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pivot_row) = (row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(row, pivot_row);
        let inv = rows[row][col].recip();
        for entry in &mut rows[row] {
            *entry = &*entry * &inv;
        }
        let pivot = rows[row].clone();
        for (r, other) in rows.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let factor = other[col].clone();
                for (entry, p) in other.iter_mut().zip(&pivot) {
                    *entry = &*entry - &factor * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows.len() {
            break;
        }
    }
    pivots
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    rref(&mut rows, cols).len()
}

/// A basis for the null space of the matrix whose rows are `rays`.
fn kernel_basis(rays: &[Ray], dim: usize) -> Vec<Vec<BigRational>> {
    let mut rows: Vec<Vec<BigRational>> = rays.iter().map(ray_to_row).collect();
    let pivots = rref(&mut rows, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); dim];
        v[f] = BigRational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -rows[r][f].clone();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(c: &[i64]) -> Ray {
        Ray::from_ints(c).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn canonicalize_reduces_gcd() {
        assert_eq!(ray(&[0, 2, -2, 0]), ray(&[0, 1, -1, 0]));
        assert_eq!(ray(&[0, 2, -2, 0]).to_string(), "(0,1,-1,0)");
    }

    #[test]
    fn canonicalize_flips_sign() {
        assert_eq!(ray(&[-1, 1, 1, 1]), ray(&[1, -1, -1, -1]));
        assert_eq!(ray(&[-1, 1, 1, 1]).to_string(), "(1,-1,-1,-1)");
    }

    #[test]
    fn canonicalize_clears_denominators() {
        let r = Ray::canonicalize(&[rat(1, 2), rat(-1, 2), rat(0, 1), rat(0, 1)]).unwrap();
        assert_eq!(r, ray(&[1, -1, 0, 0]));
    }

    #[test]
    fn canonicalize_rejects_degenerate_input() {
        assert_eq!(Ray::canonicalize(&[]), Err(RayError::EmptyVector));
        assert_eq!(Ray::from_ints(&[0, 0, 0]), Err(RayError::ZeroVector));
    }

    #[test]
    fn inner_products() {
        assert_eq!(ray(&[1, 1, 0, 0]).inner(&ray(&[1, -1, 0, 0])), Ok(BigInt::zero()));
        // The singlet direction is orthogonal to (1,1,1,-1).
        assert_eq!(ray(&[1, 1, 1, -1]).inner(&ray(&[0, 1, -1, 0])), Ok(BigInt::zero()));
        assert_eq!(ray(&[1, 1, -1, 1]).inner(&ray(&[1, 1, 1, 1])), Ok(BigInt::from(2)));
        assert!(matches!(
            ray(&[1, 0]).inner(&ray(&[1, 0, 0])),
            Err(RayError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthogonal_basis_detection() {
        let tetrad = [
            ray(&[1, 1, -1, 1]),
            ray(&[1, 1, 1, -1]),
            ray(&[1, -1, 0, 0]),
            ray(&[0, 0, 1, 1]),
        ];
        assert_eq!(is_orthogonal_basis(&tetrad, 4), Ok(true));

        let standard = [
            ray(&[1, 0, 0, 0]),
            ray(&[0, 1, 0, 0]),
            ray(&[0, 0, 1, 0]),
            ray(&[0, 0, 0, 1]),
        ];
        assert_eq!(is_orthogonal_basis(&standard, 4), Ok(true));

        let bad = [ray(&[1, 1, 0, 0]), ray(&[1, 0, 1, 0]), ray(&[0, 0, 0, 1])];
        assert_eq!(is_orthogonal_basis(&bad, 4), Ok(false));
    }

    /// Independent oracle: enumerate every integer vector with entries in
    /// -3..=3 orthogonal to the triad; all hits must canonicalize to one ray.
    fn completion_by_enumeration(triad: &[Ray]) -> Ray {
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
                        let orth = triad
                            .iter()
                            .all(|t| t.is_orthogonal_to(&candidate).unwrap());
                        if orth {
                            match &found {
                                None => found = Some(candidate),
                                Some(prev) => assert_eq!(prev, &candidate),
                            }
                        }
                    }
                }
            }
        }
        found.expect("enumeration found no completion")
    }

    #[test]
    fn complete_to_basis_matches_enumeration() {
        let cases = [
            (
                vec![ray(&[0, 0, 1, 0]), ray(&[1, 1, 0, 0]), ray(&[1, -1, 0, 0])],
                ray(&[0, 0, 0, 1]),
            ),
            (
                vec![ray(&[1, -1, -1, 1]), ray(&[1, 1, 0, 0]), ray(&[0, 0, 1, 1])],
                ray(&[1, -1, 1, -1]),
            ),
            (
                vec![ray(&[1, 1, -1, 1]), ray(&[1, 0, 1, 0]), ray(&[0, 1, 0, -1])],
                ray(&[1, -1, -1, -1]),
            ),
        ];
        for (triad, expected) in cases {
            assert_eq!(completion_by_enumeration(&triad), expected);
            let completed = complete_to_basis(&triad, 4).unwrap();
            assert_eq!(completed, expected);
            // The completion together with the triad resolves the identity.
            let mut basis = triad.clone();
            basis.push(completed);
            assert_eq!(is_orthogonal_basis(&basis, 4), Ok(true));
        }
    }

    #[test]
    fn complete_to_basis_rejects_bad_input() {
        assert_eq!(
            complete_to_basis(&[ray(&[1, 0, 0, 0]), ray(&[1, 1, 0, 0])], 4),
            Err(RayError::NotOrthogonal)
        );
        assert_eq!(
            complete_to_basis(&[ray(&[1, 0, 0, 0]), ray(&[0, 1, 0, 0])], 4),
            Err(RayError::NotCoindependent { nullity: 2 })
        );
    }

    #[test]
    fn span_membership() {
        let singlet = ray(&[0, 1, -1, 0]);
        let triad_a = [ray(&[1, 1, -1, 1]), ray(&[1, -1, 0, 0]), ray(&[0, 0, 1, 1])];
        let triad_b = [ray(&[1, 1, -1, 1]), ray(&[1, 0, 1, 0]), ray(&[0, 1, 0, -1])];
        assert_eq!(in_span(&singlet, &triad_a), Ok(true));
        assert_eq!(in_span(&singlet, &triad_b), Ok(true));
        assert_eq!(
            in_span(&ray(&[1, 0, 0, 0]), &[ray(&[0, 1, 0, 0]), ray(&[0, 0, 1, 0])]),
            Ok(false)
        );
    }

    #[test]
    fn perp2_pairs() {
        assert_eq!(ray(&[1, 0]).perp2(), Ok(ray(&[0, 1])));
        assert_eq!(ray(&[1, 1]).perp2(), Ok(ray(&[1, -1])));
        assert_eq!(ray(&[1, -1]).perp2(), Ok(ray(&[1, 1])));
    }

    #[test]
    fn tensor_products() {
        assert_eq!(ray(&[1, 0]).tensor(&ray(&[1, -1])), Ok(ray(&[1, -1, 0, 0])));
        assert_eq!(ray(&[0, 1]).tensor(&ray(&[1, 1])), Ok(ray(&[0, 0, 1, 1])));
        assert_eq!(ray(&[1, -1]).tensor(&ray(&[0, 1])), Ok(ray(&[0, 1, 0, -1])));
    }

    #[test]
    fn factorization() {
        assert_eq!(
            ray(&[1, 0, 1, 0]).factorize(),
            Ok(Some((ray(&[1, 1]), ray(&[1, 0]))))
        );
        // The singlet direction is entangled.
        assert_eq!(ray(&[0, 1, -1, 0]).factorize(), Ok(None));
        assert_eq!(
            ray(&[1, 1, 1, 1]).factorize(),
            Ok(Some((ray(&[1, 1]), ray(&[1, 1]))))
        );
    }

    #[test]
    fn lifting() {
        assert_eq!(ray(&[0, 1, -1, 0]).lift(4), ray(&[0, 1, -1, 0, 0, 0, 0, 0]));
        assert_eq!(ray(&[1, -1, 0, 0]).lift(0), ray(&[1, -1, 0, 0]));
        // Appended zeros contribute nothing to inner products.
        let a = ray(&[0, 0, 1, 0]);
        let b = ray(&[1, 1, 0, 0]);
        assert_eq!(a.lift(3).inner(&b.lift(3)), a.inner(&b));
    }

    #[test]
    fn local_ray_requires_dim_two() {
        assert!(LocalRay::new(Particle::One, ray(&[1, 0])).is_ok());
        assert!(LocalRay::new(Particle::Two, ray(&[1, 0, 0])).is_err());
    }
}
