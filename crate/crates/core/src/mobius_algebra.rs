//! The Möbius algebra of a finite poset with a bottom element.
//!
//! Vectors of the free module `ℤL` are [`GroupVector`]s. Products go through
//! the basis of orthogonal idempotents `u(a) = Σ_{c ⪯ a} μ(c, a) c`: change of
//! basis by a summation transform, pointwise product, inverse transform.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::bitset::BitSet;
use crate::incidence::{self, same_host, Direction, IncidenceError, IncidenceFunction};
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("poset has no bottom element")]
    NoBottom,
    #[error("the subset must contain the bottom element")]
    BottomNotInM,
    #[error("vectors live on different posets")]
    HostMismatch,
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

/// An element `Σ λ_a a` of the free module on the elements of a poset.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupVector {
    host: Arc<Poset>,
    coeffs: Vec<i64>,
}

impl GroupVector {
    pub fn zero(host: &Arc<Poset>) -> Self {
        GroupVector {
            host: Arc::clone(host),
            coeffs: vec![0; host.len()],
        }
    }

    pub fn unit(host: &Arc<Poset>, a: usize) -> Self {
        let mut v = Self::zero(host);
        v.coeffs[a] = 1;
        v
    }

    pub fn from_coeffs(host: &Arc<Poset>, coeffs: Vec<i64>) -> Self {
        assert_eq!(
            coeffs.len(),
            host.len(),
            "coefficient count must match host"
        );
        GroupVector {
            host: Arc::clone(host),
            coeffs,
        }
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.host
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn get(&self, a: usize) -> i64 {
        self.coeffs[a]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, k: i64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| c.checked_mul(k).expect("GroupVector overflow"))
            .collect();
        GroupVector {
            host: Arc::clone(&self.host),
            coeffs,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i64, i64) -> Option<i64>) -> Self {
        assert!(
            same_host(&self.host, &other.host),
            "GroupVector arithmetic across different posets"
        );
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| f(a, b).expect("GroupVector overflow"))
            .collect();
        GroupVector {
            host: Arc::clone(&self.host),
            coeffs,
        }
    }
}

impl fmt::Debug for GroupVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(a, c)| format!("{c}·{}", self.host.id(a)))
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &GroupVector {
    type Output = GroupVector;
    fn add(self, rhs: &GroupVector) -> GroupVector {
        self.zip_with(rhs, i64::checked_add)
    }
}

impl Sub for &GroupVector {
    type Output = GroupVector;
    fn sub(self, rhs: &GroupVector) -> GroupVector {
        self.zip_with(rhs, i64::checked_sub)
    }
}

impl Neg for &GroupVector {
    type Output = GroupVector;
    fn neg(self) -> GroupVector {
        self.scale(-1)
    }
}

impl Mul<&GroupVector> for i64 {
    type Output = GroupVector;
    fn mul(self, rhs: &GroupVector) -> GroupVector {
        rhs.scale(self)
    }
}

/// `Möb(L)` for a poset with a bottom, with its Möbius function cached.
#[derive(Debug, Clone)]
pub struct MobiusAlgebra {
    host: Arc<Poset>,
    mu: IncidenceFunction,
    bottom: usize,
}

impl MobiusAlgebra {
    pub fn new(host: &Arc<Poset>) -> Result<Self, AlgebraError> {
        let bottom = host.bottom().ok_or(AlgebraError::NoBottom)?;
        let mu = IncidenceFunction::mobius(host)?;
        Ok(MobiusAlgebra {
            host: Arc::clone(host),
            mu,
            bottom,
        })
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.host
    }

    pub fn mobius(&self) -> &IncidenceFunction {
        &self.mu
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// `u(a) = Σ_{c ⪯ a} μ(c, a) c`.
    pub fn u(&self, a: usize) -> GroupVector {
        let mut v = GroupVector::zero(&self.host);
        for c in self.host.down(a).iter() {
            v.coeffs[c] = self.mu.get(c, a);
        }
        v
    }

    /// Coordinates of `x` in the basis `{u(d)}`: since `c = Σ_{d ⪯ c} u(d)`,
    /// the coordinate at `d` is `Σ_{c ⪰ d} x_c`.
    pub fn to_u_basis(&self, x: &GroupVector) -> Result<Vec<i64>, AlgebraError> {
        self.check(x)?;
        Ok(incidence::sum_transform(
            &self.host,
            &x.coeffs,
            1,
            Direction::Up,
        )?)
    }

    /// Inverse of [`Self::to_u_basis`].
    pub fn from_u_basis(&self, coords: &[i64]) -> Result<GroupVector, AlgebraError> {
        let coeffs = incidence::mobius_invert(&self.mu, coords, 1, Direction::Up)?;
        Ok(GroupVector::from_coeffs(&self.host, coeffs))
    }

    /// The bilinear product determined by `a · b = Σ_{c ⪯ a, c ⪯ b} u(c)`.
    pub fn product(&self, x: &GroupVector, y: &GroupVector) -> Result<GroupVector, AlgebraError> {
        let xs = self.to_u_basis(x)?;
        let ys = self.to_u_basis(y)?;
        let zs = xs
            .iter()
            .zip(&ys)
            .map(|(&a, &b)| {
                a.checked_mul(b)
                    .ok_or(IncidenceError::Overflow("a Möbius algebra product"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.from_u_basis(&zs)
    }

    /// The homomorphism `Möb(L) → Möb(M)` sending `u_L(a)` to `u_M(a)` when
    /// `a ∈ M` and to zero otherwise. The result lives on the induced
    /// subposet `M` (elements in increasing index order).
    pub fn restrict_j(
        &self,
        members: &BitSet,
        x: &GroupVector,
    ) -> Result<GroupVector, AlgebraError> {
        if !members.contains(self.bottom) {
            return Err(AlgebraError::BottomNotInM);
        }
        let coords = self.to_u_basis(x)?;
        let (sub, map) = self.host.induced(members);
        let sub = Arc::new(sub);
        let sub_alg = MobiusAlgebra::new(&sub)?;
        let kept: Vec<i64> = map.iter().map(|&a| coords[a]).collect();
        sub_alg.from_u_basis(&kept)
    }

    fn check(&self, x: &GroupVector) -> Result<(), AlgebraError> {
        if same_host(&self.host, &x.host) {
            Ok(())
        } else {
            Err(AlgebraError::HostMismatch)
        }
    }
}

/// `u_L(a)` for a poset with a bottom element.
pub fn u_vector(host: &Arc<Poset>, a: usize) -> Result<GroupVector, AlgebraError> {
    Ok(MobiusAlgebra::new(host)?.u(a))
}

pub fn mob_product(
    host: &Arc<Poset>,
    x: &GroupVector,
    y: &GroupVector,
) -> Result<GroupVector, AlgebraError> {
    MobiusAlgebra::new(host)?.product(x, y)
}
