//! Finite lattices: join/meet tables, join-irreducibles, prime ideals and the
//! distributivity, modularity and cancellation tests.

use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::bitset::BitSet;
use crate::poset::Poset;

/// Largest lattice for which [`prime_ideals`] enumerates down-sets.
pub const DEFAULT_IDEAL_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("`{0}` and `{1}` have no unique least upper or greatest lower bound")]
    NotALattice(String, String),
    #[error("the empty poset is not a lattice")]
    Empty,
    #[error("lattice is not distributive")]
    NotDistributive,
    #[error("join-irreducible `{0}` has more than one lower cover")]
    NonUniqueCover(String),
    #[error("down-set enumeration is capped at {cap} elements, lattice has {size}")]
    TooLarge { size: usize, cap: usize },
    #[error("a separating ideal needs two distinct elements")]
    IdenticalElements,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructureFlags {
    pub distributive: bool,
    pub modular: bool,
    pub cancellation: bool,
}

#[derive(Debug)]
pub struct Lattice {
    poset: Arc<Poset>,
    join: Vec<usize>,
    meet: Vec<usize>,
    bottom: usize,
    top: usize,
    flags: OnceLock<StructureFlags>,
}

impl Lattice {
    /// Computes the join and meet tables, failing on the first pair without
    /// a least upper or greatest lower bound.
    pub fn from_poset(poset: Arc<Poset>) -> Result<Lattice, LatticeError> {
        let n = poset.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        let not_lattice =
            |a: usize, b: usize| LatticeError::NotALattice(poset.id(a).into(), poset.id(b).into());
        for a in 0..n {
            for b in a..n {
                let upper = poset.up(a).intersection(poset.up(b));
                let lub = upper
                    .iter()
                    .min_by_key(|&c| poset.position(c))
                    .filter(|&c| upper.is_subset(poset.up(c)))
                    .ok_or_else(|| not_lattice(a, b))?;
                let lower = poset.down(a).intersection(poset.down(b));
                let glb = lower
                    .iter()
                    .max_by_key(|&c| poset.position(c))
                    .filter(|&c| lower.is_subset(poset.down(c)))
                    .ok_or_else(|| not_lattice(a, b))?;
                join[a * n + b] = lub;
                join[b * n + a] = lub;
                meet[a * n + b] = glb;
                meet[b * n + a] = glb;
            }
        }
        let ex = poset.extremes();
        Ok(Lattice {
            bottom: ex.bottom.expect("finite lattice has a bottom"),
            top: ex.top.expect("finite lattice has a top"),
            poset,
            join,
            meet,
            flags: OnceLock::new(),
        })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    #[inline]
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Join of a set; the bottom for the empty set.
    pub fn join_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// Meet of a set; the top for the empty set.
    pub fn meet_all<I: IntoIterator<Item = usize>>(&self, items: I) -> usize {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// `{b | b ⪯ a}`.
    pub fn principal_ideal(&self, a: usize) -> &BitSet {
        self.poset.down(a)
    }

    /// `{b | b ⪰ a}`.
    pub fn principal_filter(&self, a: usize) -> &BitSet {
        self.poset.up(a)
    }

    /// Cached result of [`structure_check`].
    pub fn flags(&self) -> StructureFlags {
        *self.flags.get_or_init(|| compute_flags(self))
    }

    pub fn is_distributive(&self) -> bool {
        self.flags().distributive
    }

    /// A nonempty subset closed under join and meet.
    pub fn is_sublattice(&self, set: &BitSet) -> bool {
        !set.is_empty()
            && set.iter().all(|a| {
                set.iter()
                    .all(|b| set.contains(self.join(a, b)) && set.contains(self.meet(a, b)))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JoinIrreducibles {
    /// Sorted by index; always contains the bottom.
    pub elements: Vec<usize>,
    /// `lower_cover[a] = Some(a*)` for every non-bottom join-irreducible `a`.
    pub lower_cover: Vec<Option<usize>>,
}

impl JoinIrreducibles {
    pub fn contains(&self, a: usize) -> bool {
        self.elements.binary_search(&a).is_ok()
    }

    pub fn as_set(&self, n: usize) -> BitSet {
        BitSet::from_indices(n, self.elements.iter().copied())
    }
}

/// Join-irreducible elements, with the bottom counted as join-irreducible.
///
/// A non-bottom `a` is join-irreducible iff `a ≠ ⋁{b | b ≺ a}`.
pub fn join_irreducibles(l: &Lattice) -> Result<JoinIrreducibles, LatticeError> {
    let p = l.poset();
    let n = l.len();
    let mut elements = Vec::new();
    let mut lower_cover = vec![None; n];
    for a in 0..n {
        if a == l.bottom() {
            elements.push(a);
            continue;
        }
        let below = l.join_all(p.down(a).iter().filter(|&b| b != a));
        if below != a {
            let covers = p.lower_covers(a);
            if covers.len() != 1 {
                return Err(LatticeError::NonUniqueCover(p.id(a).into()));
            }
            lower_cover[a] = Some(covers[0]);
            elements.push(a);
        }
    }
    let ji = JoinIrreducibles {
        elements,
        lower_cover,
    };
    debug_assert!(ji_generates(l, &ji));
    Ok(ji)
}

/// Every `x` is the join of the join-irreducibles below it.
pub fn ji_generates(l: &Lattice, ji: &JoinIrreducibles) -> bool {
    (0..l.len()).all(|x| {
        let below = ji.elements.iter().copied().filter(|&b| l.leq(b, x));
        l.join_all(below) == x
    })
}

/// Exhaustive distributivity, modularity and cancellation checks.
pub fn structure_check(l: &Lattice) -> StructureFlags {
    l.flags()
}

fn compute_flags(l: &Lattice) -> StructureFlags {
    let flags = StructureFlags {
        distributive: distributivity_witness(l).is_none(),
        modular: modularity_witness(l).is_none(),
        cancellation: cancellation_witness(l).is_none(),
    };
    debug_assert_eq!(flags.distributive, flags.cancellation);
    flags
}

/// A triple violating `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)`.
pub fn distributivity_witness(l: &Lattice) -> Option<(usize, usize, usize)> {
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if l.meet(a, l.join(b, c)) != l.join(l.meet(a, b), l.meet(a, c)) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

/// Dual law `a ∨ (b ∧ c) = (a ∨ b) ∧ (a ∨ c)`, checked separately.
pub fn dual_distributive(l: &Lattice) -> bool {
    let n = l.len();
    (0..n).all(|a| {
        (0..n)
            .all(|b| (0..n).all(|c| l.join(a, l.meet(b, c)) == l.meet(l.join(a, b), l.join(a, c))))
    })
}

/// A triple `(a, b, z)` violating one of
/// `(a ∨ z) ∧ (a ∨ b) = a ∨ (z ∧ (a ∨ b))` or
/// `(a ∧ z) ∨ (a ∧ b) = a ∧ (z ∨ (a ∧ b))`.
pub fn modularity_witness(l: &Lattice) -> Option<(usize, usize, usize)> {
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            let ab_join = l.join(a, b);
            let ab_meet = l.meet(a, b);
            for z in 0..n {
                let first = l.meet(l.join(a, z), ab_join) == l.join(a, l.meet(z, ab_join));
                let second = l.join(l.meet(a, z), ab_meet) == l.meet(a, l.join(z, ab_meet));
                if !(first && second) {
                    return Some((a, b, z));
                }
            }
        }
    }
    None
}

/// Modularity through the maps `x ↦ a ∨ x` on `[a ∧ b, b]` and `y ↦ y ∧ b` on
/// `[a, a ∨ b]` being mutually inverse for every pair.
pub fn modular_by_galois(l: &Lattice) -> bool {
    let p = l.poset();
    let n = l.len();
    for a in 0..n {
        for b in 0..n {
            let lower = p.interval(l.meet(a, b), b).expect("a ∧ b ⪯ b");
            let upper = p.interval(a, l.join(a, b)).expect("a ⪯ a ∨ b");
            if lower.iter().any(|x| l.meet(l.join(a, x), b) != x) {
                return false;
            }
            if upper.iter().any(|y| l.join(a, l.meet(y, b)) != y) {
                return false;
            }
        }
    }
    true
}

/// Distinct `a, b` and some `c` with `c ∨ a = c ∨ b` and `c ∧ a = c ∧ b`,
/// returned as `(a, b, c)`.
pub fn cancellation_witness(l: &Lattice) -> Option<(usize, usize, usize)> {
    let n = l.len();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in 0..n {
                if l.join(c, a) == l.join(c, b) && l.meet(c, a) == l.meet(c, b) {
                    return Some((a, b, c));
                }
            }
        }
    }
    None
}

pub fn is_ideal(l: &Lattice, set: &BitSet) -> bool {
    l.is_sublattice(set)
        && set
            .iter()
            .all(|a| (0..l.len()).all(|b| set.contains(l.meet(a, b))))
}

pub fn is_prime_ideal(l: &Lattice, set: &BitSet) -> bool {
    let n = l.len();
    is_ideal(l, set)
        && set.len() < n
        && (0..n).all(|a| {
            (0..n).all(|b| !set.contains(l.meet(a, b)) || set.contains(a) || set.contains(b))
        })
}

pub fn is_prime_filter(l: &Lattice, set: &BitSet) -> bool {
    let n = l.len();
    l.is_sublattice(set)
        && set.len() < n
        && set
            .iter()
            .all(|a| (0..n).all(|b| set.contains(l.join(a, b))))
        && (0..n).all(|a| {
            (0..n).all(|b| !set.contains(l.join(a, b)) || set.contains(a) || set.contains(b))
        })
}

/// All prime ideals, found by enumerating down-sets and filtering; limited to
/// lattices of at most [`DEFAULT_IDEAL_CAP`] elements.
pub fn prime_ideals(l: &Lattice) -> Result<Vec<BitSet>, LatticeError> {
    prime_ideals_with_cap(l, DEFAULT_IDEAL_CAP)
}

pub fn prime_ideals_with_cap(l: &Lattice, cap: usize) -> Result<Vec<BitSet>, LatticeError> {
    let n = l.len();
    if n > cap {
        return Err(LatticeError::TooLarge { size: n, cap });
    }
    let mut out = Vec::new();
    let order = l.poset().linear_extension().to_vec();
    let mut current = BitSet::new(n);
    enumerate_down_sets(l.poset(), &order, 0, &mut current, &mut |set| {
        if is_prime_ideal(l, set) {
            out.push(set.clone());
        }
    });
    out.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    Ok(out)
}

fn enumerate_down_sets(
    p: &Poset,
    order: &[usize],
    k: usize,
    current: &mut BitSet,
    visit: &mut dyn FnMut(&BitSet),
) {
    let Some(&x) = order.get(k) else {
        visit(current);
        return;
    };
    enumerate_down_sets(p, order, k + 1, current, visit);
    let mut strict_below = p.down(x).clone();
    strict_below.remove(x);
    if strict_below.is_subset(current) {
        current.insert(x);
        enumerate_down_sets(p, order, k + 1, current, visit);
        current.remove(x);
    }
}

/// Prime ideals via the principal characterisation: every ideal of a finite
/// lattice is `id(m)` for `m` its join, so only the `m ≠ 𝟣` need testing.
pub fn principal_prime_ideals(l: &Lattice) -> Vec<BitSet> {
    let mut out: Vec<BitSet> = (0..l.len())
        .filter(|&m| m != l.top())
        .map(|m| l.principal_ideal(m).clone())
        .filter(|set| is_prime_ideal(l, set))
        .collect();
    out.sort_by_key(|s| s.iter().collect::<Vec<_>>());
    out
}

/// A prime ideal containing exactly one of `a` and `b`; one containing `a` is
/// preferred.
pub fn separating_prime_ideal(l: &Lattice, a: usize, b: usize) -> Result<BitSet, LatticeError> {
    if a == b {
        return Err(LatticeError::IdenticalElements);
    }
    if !l.is_distributive() {
        return Err(LatticeError::NotDistributive);
    }
    let primes = principal_prime_ideals(l);
    let pick = primes
        .iter()
        .find(|s| s.contains(a) && !s.contains(b))
        .or_else(|| primes.iter().find(|s| s.contains(b) && !s.contains(a)))
        .cloned();
    Ok(pick.expect("distributive lattices separate points by prime ideals"))
}
