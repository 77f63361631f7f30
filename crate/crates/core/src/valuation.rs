//! Valuations on finite lattices and the module `Val(L) = ℤL / N(L)`.
//!
//! `N(L)` is generated by the vectors `a∧b + a∨b − a − b`; membership is
//! decided exactly against a cached Hermite basis of those generators.

use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::catalog::SetLattice;
use crate::incidence::{same_host, IncidenceError, IncidenceFunction};
use crate::lattice::{join_irreducibles, JoinIrreducibles, Lattice, LatticeError};
use crate::mobius_algebra::GroupVector;
use crate::poset::Poset;
use crate::zlinalg::{basis_quotient, EchelonBasis, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValuationError {
    #[error("vector or table lives on a different lattice")]
    HostMismatch,
    #[error("the lattice is not distributive")]
    NotDistributive,
    #[error("join-irreducible element {0} is missing from the subset")]
    JiNotContained(String),
    #[error("element {0} is not in the subset")]
    NotInSubset(String),
    #[error("not a valuation: f(a∧b) + f(a∨b) ≠ f(a) + f(b) for a = {0}, b = {1}")]
    NotAValuation(String, String),
    #[error("expected {expected} table values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Generators of `N(L)`, one per incomparable unordered pair.
#[derive(Debug)]
pub struct NLPresentation<'l> {
    lattice: &'l Lattice,
    pairs: Vec<(usize, usize)>,
    generators: IntegerMatrix,
    basis: EchelonBasis,
}

pub fn generator_row(l: &Lattice, a: usize, b: usize) -> Vec<i64> {
    let mut row = vec![0i64; l.len()];
    row[l.meet(a, b)] += 1;
    row[l.join(a, b)] += 1;
    row[a] -= 1;
    row[b] -= 1;
    row
}

pub fn n_presentation(l: &Lattice) -> NLPresentation<'_> {
    let n = l.len();
    let p = l.poset();
    let mut pairs = Vec::new();
    let mut rows = Vec::new();
    let mut basis = EchelonBasis::new(n);
    for a in 0..n {
        for b in a + 1..n {
            if p.comparable(a, b) {
                continue;
            }
            let row = generator_row(l, a, b);
            basis.insert(to_big(&row));
            pairs.push((a, b));
            rows.push(row);
        }
    }
    basis.reduce();
    NLPresentation {
        lattice: l,
        pairs,
        generators: IntegerMatrix::from_rows(n, &rows),
        basis,
    }
}

impl<'l> NLPresentation<'l> {
    pub fn lattice(&self) -> &'l Lattice {
        self.lattice
    }

    /// The incomparable pair behind each generator row.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn generators(&self) -> &IntegerMatrix {
        &self.generators
    }

    /// Hermite basis of `N(L)`.
    pub fn hermite_basis(&self) -> &EchelonBasis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn contains_coeffs(&self, coeffs: &[i64]) -> bool {
        assert_eq!(coeffs.len(), self.lattice.len());
        self.basis.contains(&to_big(coeffs))
    }

    pub fn contains(&self, v: &GroupVector) -> Result<bool, ValuationError> {
        if !same_host(v.host(), self.lattice.poset()) {
            return Err(ValuationError::HostMismatch);
        }
        Ok(self.contains_coeffs(v.coeffs()))
    }
}

pub fn in_nl(p: &NLPresentation<'_>, v: &GroupVector) -> Result<bool, ValuationError> {
    p.contains(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValInvariants {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
    pub ji_count: usize,
    pub distributive: bool,
    /// On distributive lattices: the free rank equals `|ji(L)|` and there is
    /// no torsion. Vacuously true otherwise.
    pub matches: bool,
}

pub fn val_invariants(l: &Lattice) -> Result<ValInvariants, ValuationError> {
    let q = basis_quotient(n_presentation(l).hermite_basis());
    let ji_count = join_irreducibles(l)?.elements.len();
    let distributive = l.is_distributive();
    let matches = !distributive || (q.free_rank == ji_count && q.torsion.is_empty());
    Ok(ValInvariants {
        free_rank: q.free_rank,
        torsion: q.torsion,
        ji_count,
        distributive,
        matches,
    })
}

/// The order on `M` restricted from `L`, with its Möbius function.
struct Restricted {
    sub: Arc<Poset>,
    map: Vec<usize>,
    mu: IncidenceFunction,
}

impl Restricted {
    fn new(l: &Lattice, members: &BitSet) -> Result<Self, ValuationError> {
        let (sub, map) = l.poset().induced(members);
        let sub = Arc::new(sub);
        let mu = IncidenceFunction::mobius(&sub)?;
        Ok(Restricted { sub, map, mu })
    }

    fn local(&self, a: usize) -> usize {
        self.map.binary_search(&a).expect("element of the subset")
    }

    /// `u_M(a)` embedded in `ℤL`.
    fn u_embedded(&self, n: usize, a: usize) -> Vec<i64> {
        let la = self.local(a);
        let mut v = vec![0i64; n];
        for c in self.sub.down(la).iter() {
            v[self.map[c]] = self.mu.get(c, la);
        }
        v
    }
}

fn check_subset(l: &Lattice, members: &BitSet) -> Result<JoinIrreducibles, ValuationError> {
    if !l.is_distributive() {
        return Err(ValuationError::NotDistributive);
    }
    let ji = join_irreducibles(l)?;
    if let Some(&a) = ji.elements.iter().find(|&&a| !members.contains(a)) {
        return Err(ValuationError::JiNotContained(l.poset().id(a).into()));
    }
    Ok(ji)
}

/// `u_M(a) ∈ N(L)` for every `a ∈ M ∖ ji(L)`; returns one verdict per such `a`.
pub fn zaslavsky_check(
    l: &Lattice,
    members: &BitSet,
) -> Result<Vec<(usize, bool)>, ValuationError> {
    let pres = n_presentation(l);
    zaslavsky_check_with(&pres, members)
}

/// As [`zaslavsky_check`], reusing an existing presentation.
pub fn zaslavsky_check_with(
    pres: &NLPresentation<'_>,
    members: &BitSet,
) -> Result<Vec<(usize, bool)>, ValuationError> {
    let l = pres.lattice();
    let ji = check_subset(l, members)?;
    let restricted = Restricted::new(l, members)?;
    Ok(members
        .iter()
        .filter(|&a| !ji.contains(a))
        .map(|a| (a, pres.contains_coeffs(&restricted.u_embedded(l.len(), a))))
        .collect())
}

/// A table `f: L → ℤᵈ`, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationTable {
    host: Arc<Poset>,
    dim: usize,
    values: Vec<i64>,
}

impl ValuationTable {
    pub fn new(l: &Lattice, dim: usize, values: Vec<i64>) -> Result<Self, ValuationError> {
        if values.len() != l.len() * dim {
            return Err(ValuationError::LengthMismatch {
                expected: l.len() * dim,
                got: values.len(),
            });
        }
        Ok(ValuationTable {
            host: Arc::clone(l.poset()),
            dim,
            values,
        })
    }

    pub fn from_fn(l: &Lattice, dim: usize, mut f: impl FnMut(usize) -> Vec<i64>) -> Self {
        let mut values = Vec::with_capacity(l.len() * dim);
        for a in 0..l.len() {
            let v = f(a);
            assert_eq!(v.len(), dim, "table row length");
            values.extend(v);
        }
        ValuationTable {
            host: Arc::clone(l.poset()),
            dim,
            values,
        }
    }

    pub fn constant(l: &Lattice, c: i64) -> Self {
        Self::from_fn(l, 1, |_| vec![c])
    }

    /// `1` on `set`, `0` elsewhere.
    pub fn indicator(l: &Lattice, set: &BitSet) -> Self {
        Self::from_fn(l, 1, |a| vec![i64::from(set.contains(a))])
    }

    pub fn cardinality(s: &SetLattice) -> Self {
        Self::from_fn(&s.lattice, 1, |a| vec![s.cardinality(a)])
    }

    /// `Σ kᵢ fᵢ` over tables of equal shape on the same lattice.
    pub fn combine(terms: &[(i64, &ValuationTable)]) -> Result<Self, ValuationError> {
        let (_, first) = terms.first().expect("at least one term");
        let mut values = vec![0i64; first.values.len()];
        for (k, t) in terms {
            if !same_host(&t.host, &first.host) || t.dim != first.dim {
                return Err(ValuationError::HostMismatch);
            }
            for (out, v) in values.iter_mut().zip(&t.values) {
                *out = v
                    .checked_mul(*k)
                    .and_then(|x| out.checked_add(x))
                    .ok_or(IncidenceError::Overflow("a valuation combination"))?;
            }
        }
        Ok(ValuationTable {
            host: Arc::clone(&first.host),
            dim: first.dim,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, a: usize) -> &[i64] {
        &self.values[a * self.dim..(a + 1) * self.dim]
    }

    /// First pair violating the valuation law, if any.
    pub fn violation(&self, l: &Lattice) -> Option<(usize, usize)> {
        let n = l.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| {
                let (m, j) = (l.meet(a, b), l.join(a, b));
                (0..self.dim).any(|k| {
                    let lhs = i128::from(self.get(m)[k]) + i128::from(self.get(j)[k]);
                    let rhs = i128::from(self.get(a)[k]) + i128::from(self.get(b)[k]);
                    lhs != rhs
                })
            })
    }

    pub fn is_valuation(&self, l: &Lattice) -> bool {
        self.violation(l).is_none()
    }

    fn check(&self, l: &Lattice) -> Result<(), ValuationError> {
        if !same_host(&self.host, l.poset()) {
            return Err(ValuationError::HostMismatch);
        }
        match self.violation(l) {
            None => Ok(()),
            Some((a, b)) => {
                let p = l.poset();
                Err(ValuationError::NotAValuation(
                    p.id(a).into(),
                    p.id(b).into(),
                ))
            }
        }
    }
}

/// `Σ_{b ∈ [𝟢, a] ∩ M} μ_M(b, a) f(b)`.
pub fn valuation_defect(
    l: &Lattice,
    members: &BitSet,
    f: &ValuationTable,
    a: usize,
) -> Result<Vec<i64>, ValuationError> {
    check_subset(l, members)?;
    f.check(l)?;
    defect_sum(l, members, f, a)
}

/// The sum behind [`valuation_defect`] without the hypothesis checks; used
/// on lattices of sets, which are distributive by construction.
pub(crate) fn defect_sum(
    l: &Lattice,
    members: &BitSet,
    f: &ValuationTable,
    a: usize,
) -> Result<Vec<i64>, ValuationError> {
    if !members.contains(a) {
        return Err(ValuationError::NotInSubset(l.poset().id(a).into()));
    }
    let restricted = Restricted::new(l, members)?;
    let u = restricted.u_embedded(l.len(), a);
    let mut out = vec![0i64; f.dim()];
    let overflow = || IncidenceError::Overflow("a valuation defect");
    for (b, &m) in u.iter().enumerate().filter(|(_, &m)| m != 0) {
        for (o, &v) in out.iter_mut().zip(f.get(b)) {
            *o = v
                .checked_mul(m)
                .and_then(|t| o.checked_add(t))
                .ok_or_else(overflow)?;
        }
    }
    Ok(out)
}

/// Coordinates of `x` over `ji(L)` modulo `N(L)`: the coefficient of `b` is
/// `Σ μ_ji(b, a)` over join-irreducible `a` with `b ⪯ a ⪯ x`.
pub fn val_coords(l: &Lattice, x: usize) -> Result<GroupVector, ValuationError> {
    if !l.is_distributive() {
        return Err(ValuationError::NotDistributive);
    }
    let ji = join_irreducibles(l)?;
    let restricted = Restricted::new(l, &ji.as_set(l.len()))?;
    let mut coeffs = vec![0i64; l.len()];
    for a in ji.elements.iter().copied().filter(|&a| l.leq(a, x)) {
        let la = restricted.local(a);
        for b in restricted.sub.down(la).iter() {
            coeffs[restricted.map[b]] += restricted.mu.get(b, la);
        }
    }
    Ok(GroupVector::from_coeffs(l.poset(), coeffs))
}

/// `e_𝟢 = 𝟢` and `e_a = a − a*` for the other join-irreducibles.
pub fn e_vector(l: &Lattice, ji: &JoinIrreducibles, a: usize) -> GroupVector {
    let p = l.poset();
    match ji.lower_cover[a] {
        Some(star) => &GroupVector::unit(p, a) - &GroupVector::unit(p, star),
        None => {
            assert_eq!(a, l.bottom(), "e_a needs a join-irreducible element");
            GroupVector::unit(p, a)
        }
    }
}

fn bilinear(
    l: &Lattice,
    x: &GroupVector,
    y: &GroupVector,
    op: impl Fn(usize, usize) -> usize,
) -> GroupVector {
    let mut coeffs = vec![0i64; l.len()];
    for (a, &xa) in x.coeffs().iter().enumerate().filter(|(_, &c)| c != 0) {
        for (b, &yb) in y.coeffs().iter().enumerate().filter(|(_, &c)| c != 0) {
            let c = op(a, b);
            coeffs[c] = xa
                .checked_mul(yb)
                .and_then(|t| coeffs[c].checked_add(t))
                .expect("GroupVector overflow");
        }
    }
    GroupVector::from_coeffs(l.poset(), coeffs)
}

/// The meet extended bilinearly to `ℤL`.
pub fn meet_product(l: &Lattice, x: &GroupVector, y: &GroupVector) -> GroupVector {
    bilinear(l, x, y, |a, b| l.meet(a, b))
}

/// The join extended bilinearly to `ℤL`.
pub fn join_product(l: &Lattice, x: &GroupVector, y: &GroupVector) -> GroupVector {
    bilinear(l, x, y, |a, b| l.join(a, b))
}
