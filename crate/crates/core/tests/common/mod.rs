//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::sync::Arc;

use dissecta::bitset::BitSet;
use dissecta::catalog::SetLattice;
use dissecta::dissection::SetModel;
use dissecta::poset::{PairMode, Poset};
use dissecta::zlinalg::IntegerMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random poset on `n` elements: each pair `i < j` of a hidden linear order
/// is related with probability `density`, then the order is shuffled.
pub fn random_poset(rng: &mut impl Rng, n: usize, density: f64) -> Arc<Poset> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Arc::new(Poset::from_index_pairs(n, &pairs, PairMode::Covers).expect("acyclic by construction"))
}

/// A random poset with a bottom element below everything.
pub fn random_poset_with_bottom(rng: &mut impl Rng, n: usize, density: f64) -> Arc<Poset> {
    assert!(n >= 1);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let bottom = perm[0];
    let mut pairs: Vec<(usize, usize)> = perm[1..].iter().map(|&b| (bottom, b)).collect();
    for i in 1..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[i], perm[j]));
            }
        }
    }
    Arc::new(Poset::from_index_pairs(n, &pairs, PairMode::Covers).expect("acyclic by construction"))
}

/// The sublattice of the subsets of `{1..6}` generated by `k` random sets;
/// resampled until it has at most `max_size` elements.
pub fn random_set_lattice(rng: &mut impl Rng, k: usize, max_size: usize) -> SetLattice {
    loop {
        let family: Vec<u64> = (0..k).map(|_| rng.gen_range(0..64u64)).collect();
        let l = SetLattice::generated_by(&family);
        if l.sets.len() <= max_size {
            return l;
        }
    }
}

/// `required` plus each other element with probability one half.
pub fn random_superset(rng: &mut impl Rng, required: &BitSet) -> BitSet {
    let mut out = required.clone();
    for a in 0..required.capacity() {
        if rng.gen_bool(0.5) {
            out.insert(a);
        }
    }
    out
}

pub fn random_vector(rng: &mut impl Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-bound..=bound)).collect()
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize, bound: i64) -> IntegerMatrix {
    let data: Vec<Vec<i64>> = (0..rows).map(|_| random_vector(rng, cols, bound)).collect();
    IntegerMatrix::from_rows(cols, &data)
}

fn random_subset(rng: &mut impl Rng, n: usize, p: f64) -> BitSet {
    BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(p)))
}

/// A random valid set model on a ground of `n` points with up to
/// `max_subspaces` subspaces. The refinement holds the ground set, every
/// nonempty flat and a random selection of the regions cut out by the
/// subspaces; the chambers are a random partition of the complement.
pub fn random_set_model(rng: &mut impl Rng, n: usize, max_subspaces: usize) -> SetModel {
    let k = if n == 1 {
        0
    } else {
        rng.gen_range(0..=max_subspaces)
    };
    let subspaces: Vec<BitSet> = (0..k)
        .map(|_| loop {
            let s = random_subset(rng, n, 0.4);
            if !s.is_empty() && s.len() < n {
                break s;
            }
        })
        .collect();
    let ground = BitSet::full(n);

    let mut flats: BTreeSet<BitSet> = subspaces.iter().cloned().collect();
    let mut frontier: Vec<BitSet> = flats.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for h in &subspaces {
            let y = x.intersection(h);
            if !y.is_empty() && flats.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    let mut union = BitSet::new(n);
    for h in &subspaces {
        union.union_with(h);
    }
    // points of the union grouped by which subspaces contain them
    let mut regions: Vec<BitSet> = Vec::new();
    let mut seen = BitSet::new(n);
    for p in union.iter() {
        if seen.contains(p) {
            continue;
        }
        let pattern: Vec<bool> = subspaces.iter().map(|h| h.contains(p)).collect();
        let region = BitSet::from_indices(
            n,
            union.iter().filter(|&q| {
                subspaces
                    .iter()
                    .map(|h| h.contains(q))
                    .eq(pattern.iter().copied())
            }),
        );
        seen.union_with(&region);
        regions.push(region);
    }
    let mut refinement: BTreeSet<BitSet> = flats;
    refinement.insert(ground.clone());
    for r in regions {
        if rng.gen_bool(0.5) {
            refinement.insert(r);
        }
    }
    let mut refinement: Vec<BitSet> = refinement.into_iter().collect();
    refinement.shuffle(rng);

    let mut outside: Vec<usize> = ground.difference(&union).iter().collect();
    outside.shuffle(rng);
    let mut chambers: Vec<BitSet> = Vec::new();
    for p in outside {
        if chambers.is_empty() || rng.gen_bool(0.5) {
            chambers.push(BitSet::from_indices(n, [p]));
        } else {
            let i = rng.gen_range(0..chambers.len());
            chambers[i].insert(p);
        }
    }
    let points = (1..=n).map(|p| p.to_string()).collect();
    SetModel::new(points, subspaces, refinement, chambers).expect("generated model is valid")
}
