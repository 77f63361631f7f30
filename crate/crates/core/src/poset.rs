//! Finite partially ordered sets.
//!
//! Elements are indexed densely `0..n`; external string ids are mapped at the
//! boundary. The order is stored as a pair of bit matrices (`up[a]` holds every
//! `b` with `a ⪯ b`, `down[b]` every `a` with `a ⪯ b`).

use std::collections::HashMap;

use thiserror::Error;

use crate::bitset::BitSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("order contains a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("relation is not transitive: `{0}` ⪯ `{1}` ⪯ `{2}` but not `{0}` ⪯ `{2}`")]
    NotTransitive(String, String, String),
    #[error("`{0}` is not below `{1}`")]
    NotComparable(String, String),
}

/// How the pair list handed to [`Poset::build`] is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Pairs are generating relations (typically Hasse covers); the order is
    /// their reflexive-transitive closure.
    Covers,
    /// Pairs are the full order relation. Reflexive pairs may be omitted; the
    /// rest is verified, never closed.
    Relation,
}

#[derive(Clone, Debug)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<BitSet>,
    down: Vec<BitSet>,
    linear: Vec<usize>,
    position: Vec<usize>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.up == other.up
    }
}

impl Eq for Poset {}

/// Maximal/minimal elements plus the top and bottom when they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extremes {
    pub maximal: Vec<usize>,
    pub minimal: Vec<usize>,
    pub top: Option<usize>,
    pub bottom: Option<usize>,
}

impl Poset {
    /// Builds a poset from string ids and a list of ordered pairs `(a, b)`
    /// meaning `a ⪯ b`.
    pub fn build<S: AsRef<str>>(
        elements: &[S],
        pairs: &[(S, S)],
        mode: PairMode,
    ) -> Result<Poset, PosetError> {
        let ids: Vec<String> = elements.iter().map(|e| e.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(ids.len());
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(id.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| PosetError::UnknownElement(s.as_ref().to_owned()))
        };
        let mut indexed = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            indexed.push((lookup(a)?, lookup(b)?));
        }
        Self::from_indexed(ids, &indexed, mode)
    }

    /// Builds a poset over ids `"0".."n-1"` from index pairs.
    pub fn from_index_pairs(
        n: usize,
        pairs: &[(usize, usize)],
        mode: PairMode,
    ) -> Result<Poset, PosetError> {
        let ids = (0..n).map(|i| i.to_string()).collect();
        Self::from_indexed(ids, pairs, mode)
    }

    /// Builds a poset from a predicate `leq(a, b)` which must already be a
    /// partial order; the axioms are verified.
    pub fn from_fn<F>(ids: Vec<String>, leq: F) -> Result<Poset, PosetError>
    where
        F: Fn(usize, usize) -> bool,
    {
        let n = ids.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && leq(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        Self::from_indexed(ids, &pairs, PairMode::Relation)
    }

    fn from_indexed(
        ids: Vec<String>,
        pairs: &[(usize, usize)],
        mode: PairMode,
    ) -> Result<Poset, PosetError> {
        let n = ids.len();
        let mut index = HashMap::with_capacity(n);
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(id.clone()));
            }
        }
        let mut up: Vec<BitSet> = (0..n).map(|i| BitSet::from_indices(n, [i])).collect();
        for &(a, b) in pairs {
            if a >= n {
                return Err(PosetError::UnknownElement(a.to_string()));
            }
            if b >= n {
                return Err(PosetError::UnknownElement(b.to_string()));
            }
            up[a].insert(b);
        }

        match mode {
            PairMode::Covers => {
                // Warshall on bit rows.
                for k in 0..n {
                    let row_k = up[k].clone();
                    for row in up.iter_mut() {
                        if row.contains(k) {
                            row.union_with(&row_k);
                        }
                    }
                }
            }
            PairMode::Relation => {
                for a in 0..n {
                    for b in up[a].iter() {
                        if !up[b].is_subset(&up[a]) {
                            let c = up[b].difference(&up[a]).first().unwrap();
                            return Err(PosetError::NotTransitive(
                                ids[a].clone(),
                                ids[b].clone(),
                                ids[c].clone(),
                            ));
                        }
                    }
                }
            }
        }

        let mut down: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for (a, row) in up.iter().enumerate() {
            for b in row.iter() {
                if a != b && up[b].contains(a) {
                    return Err(PosetError::CycleDetected(ids[a].clone(), ids[b].clone()));
                }
                down[b].insert(a);
            }
        }

        // a ≺ b implies down(a) ⊊ down(b), so sorting by down-set size is a
        // linear extension.
        let mut linear: Vec<usize> = (0..n).collect();
        linear.sort_by_key(|&a| (down[a].len(), a));
        let mut position = vec![0; n];
        for (p, &a) in linear.iter().enumerate() {
            position[a] = p;
        }

        Ok(Poset {
            ids,
            index,
            up,
            down,
            linear,
            position,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, a: usize) -> &str {
        &self.ids[a]
    }

    pub fn index_of(&self, id: &str) -> Result<usize, PosetError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| PosetError::UnknownElement(id.to_owned()))
    }

    #[inline]
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    #[inline]
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// `{b | a ⪯ b}`.
    pub fn up(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    /// `{a | a ⪯ b}`.
    pub fn down(&self, b: usize) -> &BitSet {
        &self.down[b]
    }

    /// A linear extension of the order (every element after all elements
    /// below it).
    pub fn linear_extension(&self) -> &[usize] {
        &self.linear
    }

    pub fn position(&self, a: usize) -> usize {
        self.position[a]
    }

    /// The closed interval `[a, b]`.
    pub fn interval(&self, a: usize, b: usize) -> Result<BitSet, PosetError> {
        if !self.leq(a, b) {
            return Err(PosetError::NotComparable(
                self.ids[a].clone(),
                self.ids[b].clone(),
            ));
        }
        Ok(self.up[a].intersection(&self.down[b]))
    }

    /// Elements `c` with `a ⋖ c`.
    pub fn upper_covers(&self, a: usize) -> Vec<usize> {
        self.up[a]
            .iter()
            .filter(|&c| c != a && self.interval(a, c).map(|i| i.len() == 2).unwrap_or(false))
            .collect()
    }

    /// Elements `c` with `c ⋖ a`.
    pub fn lower_covers(&self, a: usize) -> Vec<usize> {
        self.down[a]
            .iter()
            .filter(|&c| c != a && self.up[c].intersection_len(&self.down[a]) == 2)
            .collect()
    }

    /// All cover pairs `(a, b)` with `a ⋖ b`, ordered by `a` then `b`.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.upper_covers(a).into_iter().map(move |b| (a, b)))
            .collect()
    }

    /// Maximal elements of a subset (scan based).
    pub fn maximal_in(&self, subset: &BitSet) -> Vec<usize> {
        subset
            .iter()
            .filter(|&a| self.up[a].intersection_len(subset) == 1)
            .collect()
    }

    /// Minimal elements of a subset.
    pub fn minimal_in(&self, subset: &BitSet) -> Vec<usize> {
        subset
            .iter()
            .filter(|&a| self.down[a].intersection_len(subset) == 1)
            .collect()
    }

    pub fn extremes(&self) -> Extremes {
        let all = BitSet::full(self.len());
        let maximal = self.maximal_in(&all);
        let minimal = self.minimal_in(&all);
        let top = match maximal.as_slice() {
            [t] if self.down[*t].len() == self.len() => Some(*t),
            _ => None,
        };
        let bottom = match minimal.as_slice() {
            [b] if self.up[*b].len() == self.len() => Some(*b),
            _ => None,
        };
        Extremes {
            maximal,
            minimal,
            top,
            bottom,
        }
    }

    pub fn top(&self) -> Option<usize> {
        self.extremes().top
    }

    pub fn bottom(&self) -> Option<usize> {
        self.extremes().bottom
    }

    /// The induced subposet on `members` (listed in increasing index order);
    /// element `i` of the result is `members[i]` of `self`.
    pub fn induced(&self, members: &BitSet) -> (Poset, Vec<usize>) {
        let map: Vec<usize> = members.iter().collect();
        let ids = map.iter().map(|&a| self.ids[a].clone()).collect();
        let sub = Poset::from_fn(ids, |i, j| self.leq(map[i], map[j]))
            .expect("restriction of a partial order is a partial order");
        (sub, map)
    }

    /// Every order axiom, checked from scratch on the stored relation.
    pub fn satisfies_axioms(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if !self.leq(a, a) {
                return false;
            }
            for b in self.up[a].iter() {
                if b != a && self.leq(b, a) {
                    return false;
                }
                if !self.up[b].is_subset(&self.up[a]) {
                    return false;
                }
            }
        }
        true
    }
}
