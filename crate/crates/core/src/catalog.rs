//! Small named lattices and arrangements used throughout tests, benches and
//! the bundled data files.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::dissection::ArrangementPoset;
use crate::lattice::Lattice;
use crate::poset::{PairMode, Poset};

/// A lattice of subsets of `{1..64}` ordered by inclusion; element `i` is the
/// set `sets[i]` (bit `k` stands for the point `k + 1`).
#[derive(Debug)]
pub struct SetLattice {
    pub lattice: Lattice,
    pub sets: Vec<u64>,
}

pub fn set_label(mask: u64) -> String {
    let points: Vec<String> = (0..64)
        .filter(|k| mask >> k & 1 == 1)
        .map(|k| (k + 1).to_string())
        .collect();
    format!("{{{}}}", points.join(","))
}

impl SetLattice {
    /// The sublattice of the power set generated by `family` under union and
    /// intersection.
    pub fn generated_by(family: &[u64]) -> SetLattice {
        let mut sets: BTreeSet<u64> = family.iter().copied().collect();
        loop {
            let current: Vec<u64> = sets.iter().copied().collect();
            let before = sets.len();
            for (i, &a) in current.iter().enumerate() {
                for &b in &current[i + 1..] {
                    sets.insert(a | b);
                    sets.insert(a & b);
                }
            }
            if sets.len() == before {
                break;
            }
        }
        Self::from_closed_family(sets.into_iter().collect())
    }

    /// `family` must already be closed under union and intersection.
    pub fn from_closed_family(mut sets: Vec<u64>) -> SetLattice {
        sets.sort_by_key(|&m| (m.count_ones(), m));
        sets.dedup();
        let ids = sets.iter().map(|&m| set_label(m)).collect();
        let poset = Poset::from_fn(ids, |a, b| sets[a] & !sets[b] == 0)
            .expect("inclusion is a partial order");
        let lattice = Lattice::from_poset(Arc::new(poset)).expect("family is a lattice of sets");
        SetLattice { lattice, sets }
    }

    pub fn cardinality(&self, a: usize) -> i64 {
        i64::from(self.sets[a].count_ones())
    }
}

/// All subsets of `{1..n}`; element index equals the bitmask.
pub fn boolean_set_lattice(n: u32) -> SetLattice {
    assert!(n < 16, "boolean lattice too large");
    let sets: Vec<u64> = (0..1u64 << n).collect();
    let ids = sets.iter().map(|&m| set_label(m)).collect();
    let poset = Poset::from_fn(ids, |a, b| a & !b == 0).expect("inclusion is a partial order");
    SetLattice {
        lattice: Lattice::from_poset(Arc::new(poset)).expect("power set is a lattice"),
        sets,
    }
}

pub fn boolean_lattice(n: u32) -> Lattice {
    boolean_set_lattice(n).lattice
}

/// The chain `0 ≺ 1 ≺ … ≺ n-1`.
pub fn chain(n: usize) -> Lattice {
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    let poset = Poset::from_index_pairs(n, &pairs, PairMode::Covers).expect("chain");
    Lattice::from_poset(Arc::new(poset)).expect("chains are lattices")
}

/// N₅: `0 ≺ x ≺ z ≺ 1`, `0 ≺ y ≺ 1`.
pub fn pentagon() -> Lattice {
    let poset = Poset::build(
        &["0", "x", "y", "z", "1"],
        &[("0", "x"), ("x", "z"), ("z", "1"), ("0", "y"), ("y", "1")],
        PairMode::Covers,
    )
    .expect("pentagon");
    Lattice::from_poset(Arc::new(poset)).expect("N5 is a lattice")
}

/// M₃: a bottom, three atoms, a top.
pub fn diamond_m3() -> Lattice {
    let poset = Poset::build(
        &["0", "a", "b", "c", "1"],
        &[
            ("0", "a"),
            ("0", "b"),
            ("0", "c"),
            ("a", "1"),
            ("b", "1"),
            ("c", "1"),
        ],
        PairMode::Covers,
    )
    .expect("M3");
    Lattice::from_poset(Arc::new(poset)).expect("M3 is a lattice")
}

fn arrangement(
    elements: &[&str],
    covers: &[(&str, &str)],
    chi: &[i64],
    dim: Option<&[u32]>,
    top: &str,
) -> ArrangementPoset {
    let poset = Poset::build(elements, covers, PairMode::Covers).expect("catalog poset");
    let top = poset.index_of(top).expect("catalog top");
    ArrangementPoset::new(Arc::new(poset), top, chi.to_vec(), dim.map(<[u32]>::to_vec))
        .expect("catalog arrangement")
}

/// Four circles on the 2-sphere; `H3` meets `H1` and `H2` in two points each.
pub fn sphere_circles() -> ArrangementPoset {
    arrangement(
        &["S2", "H1", "H2", "H3", "H4", "P13", "P23"],
        &[
            ("P13", "H1"),
            ("P13", "H3"),
            ("P23", "H2"),
            ("P23", "H3"),
            ("H1", "S2"),
            ("H2", "S2"),
            ("H3", "S2"),
            ("H4", "S2"),
        ],
        &[2, 0, 0, 0, 0, 2, 2],
        None,
        "S2",
    )
}

/// Three curves in the plane (two unbounded, one ellipse) with pairwise
/// intersections of 3, 10 and 2 points.
pub fn plane_curves() -> ArrangementPoset {
    arrangement(
        &["R2", "H1", "H2", "H3", "P12", "P13", "P23"],
        &[
            ("P12", "H1"),
            ("P12", "H2"),
            ("P13", "H1"),
            ("P13", "H3"),
            ("P23", "H2"),
            ("P23", "H3"),
            ("H1", "R2"),
            ("H2", "R2"),
            ("H3", "R2"),
        ],
        &[1, -1, -1, 0, 3, 10, 2],
        None,
        "R2",
    )
}

/// Two crossing lines in the plane, `χ = (-1)^dim`.
pub fn two_lines() -> ArrangementPoset {
    arrangement(
        &["R2", "l1", "l2", "p"],
        &[("p", "l1"), ("p", "l2"), ("l1", "R2"), ("l2", "R2")],
        &[1, -1, -1, 1],
        Some(&[2, 1, 1, 0]),
        "R2",
    )
}

/// Two great circles on the 2-sphere meeting in a pair of antipodal points.
pub fn two_great_circles() -> ArrangementPoset {
    arrangement(
        &["S2", "C1", "C2", "P"],
        &[("P", "C1"), ("P", "C2"), ("C1", "S2"), ("C2", "S2")],
        &[2, 0, 0, 2],
        Some(&[2, 1, 1, 0]),
        "S2",
    )
}

/// `k` lines through the origin of the plane; the origin is a flat once
/// `k ≥ 2`.
pub fn central_lines(k: usize) -> ArrangementPoset {
    let mut elements = vec!["R2".to_owned()];
    elements.extend((1..=k).map(|i| format!("l{i}")));
    let mut covers = Vec::new();
    for i in 1..=k {
        covers.push((format!("l{i}"), "R2".to_owned()));
    }
    let mut chi = vec![1];
    chi.extend(std::iter::repeat_n(-1, k));
    let mut dim = vec![2];
    dim.extend(std::iter::repeat_n(1, k));
    if k >= 2 {
        elements.push("o".to_owned());
        covers.extend((1..=k).map(|i| ("o".to_owned(), format!("l{i}"))));
        chi.push(1);
        dim.push(0);
    }
    let poset = Poset::build(&elements, &covers, PairMode::Covers).expect("central lines");
    let top = poset.index_of("R2").expect("top");
    ArrangementPoset::new(Arc::new(poset), top, chi, Some(dim)).expect("central lines")
}

/// `k` lines in general position in the plane: every pair meets in its own
/// point.
pub fn generic_lines(k: usize) -> ArrangementPoset {
    let mut elements = vec!["R2".to_owned()];
    let mut covers = Vec::new();
    let (mut chi, mut dim) = (vec![1], vec![2]);
    for i in 1..=k {
        elements.push(format!("l{i}"));
        covers.push((format!("l{i}"), "R2".to_owned()));
        chi.push(-1);
        dim.push(1);
    }
    for i in 1..=k {
        for j in i + 1..=k {
            let p = format!("p{i}{j}");
            covers.push((p.clone(), format!("l{i}")));
            covers.push((p.clone(), format!("l{j}")));
            elements.push(p);
            chi.push(1);
            dim.push(0);
        }
    }
    let poset = Poset::build(&elements, &covers, PairMode::Covers).expect("generic lines");
    let top = poset.index_of("R2").expect("top");
    ArrangementPoset::new(Arc::new(poset), top, chi, Some(dim)).expect("generic lines")
}
