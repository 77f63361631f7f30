use std::collections::BTreeSet;
use std::sync::Arc;

use super::{weighted_sum, DissectionError};
use crate::bitset::BitSet;
use crate::catalog::SetLattice;
use crate::incidence::IncidenceFunction;
use crate::lattice::join_irreducibles;
use crate::poset::Poset;
use crate::valuation::{defect_sum, ValuationTable};

/// Ground sets up to this size also get the full lattice `D(L)` checked.
pub const D_LATTICE_GROUND_LIMIT: usize = 12;

/// A valuation on any lattice of subsets of the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SetValuation {
    Cardinality,
    /// `f(S) = Σ_{p ∈ S} w_p`.
    PointWeights(Vec<i64>),
}

impl SetValuation {
    pub fn eval(&self, s: &BitSet) -> i64 {
        match self {
            SetValuation::Cardinality => s.len() as i64,
            SetValuation::PointWeights(w) => s.iter().map(|p| w[p]).sum(),
        }
    }
}

/// A finite model of an arrangement: subspaces, a meet-refinement and the
/// chambers, all subsets of an explicit ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetModel {
    points: Vec<String>,
    subspaces: Vec<BitSet>,
    refinement: Vec<BitSet>,
    chambers: Vec<BitSet>,
}

fn is_union_of(s: &BitSet, parts: &[BitSet]) -> bool {
    let mut cover = BitSet::new(s.capacity());
    for p in parts.iter().filter(|p| p.is_subset(s)) {
        cover.union_with(p);
    }
    cover == *s
}

impl SetModel {
    /// Builds a model from point labels, rejecting unknown or repeated points.
    pub fn from_labels<S: AsRef<str>>(
        ground: &[S],
        subspaces: &[Vec<S>],
        refinement: &[Vec<S>],
        chambers: &[Vec<S>],
    ) -> Result<Self, DissectionError> {
        let points: Vec<String> = ground.iter().map(|p| p.as_ref().to_owned()).collect();
        let distinct: BTreeSet<&str> = points.iter().map(String::as_str).collect();
        if distinct.len() != points.len() {
            return Err(DissectionError::InvalidModel(
                "repeated ground point".into(),
            ));
        }
        let n = points.len();
        let convert = |sets: &[Vec<S>]| -> Result<Vec<BitSet>, DissectionError> {
            sets.iter()
                .map(|set| {
                    let mut out = BitSet::new(n);
                    for p in set {
                        let i = points.iter().position(|q| q == p.as_ref()).ok_or_else(|| {
                            DissectionError::InvalidModel(format!("unknown point {}", p.as_ref()))
                        })?;
                        out.insert(i);
                    }
                    Ok(out)
                })
                .collect()
        };
        Self::new(
            points.clone(),
            convert(subspaces)?,
            convert(refinement)?,
            convert(chambers)?,
        )
    }

    pub fn new(
        points: Vec<String>,
        subspaces: Vec<BitSet>,
        refinement: Vec<BitSet>,
        chambers: Vec<BitSet>,
    ) -> Result<Self, DissectionError> {
        let model = SetModel {
            points,
            subspaces,
            refinement,
            chambers,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn subspaces(&self) -> &[BitSet] {
        &self.subspaces
    }

    pub fn refinement(&self) -> &[BitSet] {
        &self.refinement
    }

    pub fn chambers(&self) -> &[BitSet] {
        &self.chambers
    }

    pub fn ground(&self) -> BitSet {
        BitSet::full(self.points.len())
    }

    pub fn label(&self, s: &BitSet) -> String {
        let names: Vec<&str> = s.iter().map(|p| self.points[p].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    fn union_of_subspaces(&self) -> BitSet {
        let mut u = BitSet::new(self.points.len());
        for h in &self.subspaces {
            u.union_with(h);
        }
        u
    }

    fn validate(&self) -> Result<(), DissectionError> {
        let n = self.points.len();
        let all = self
            .subspaces
            .iter()
            .chain(&self.refinement)
            .chain(&self.chambers);
        if all.clone().any(|s| s.capacity() != n) {
            return Err(DissectionError::InvalidModel(
                "set over a different ground".into(),
            ));
        }
        if let Some(h) = self.subspaces.iter().find(|h| h.is_empty()) {
            return Err(DissectionError::InvalidModel(format!(
                "empty subspace {}",
                self.label(h)
            )));
        }

        if let Some(h) = self.subspaces.iter().find(|h| h.len() == n) {
            return Err(DissectionError::InvalidModel(format!(
                "subspace {} is the whole ground set",
                self.label(h)
            )));
        }

        let union = self.union_of_subspaces();
        let bad = |msg: String| Err(DissectionError::ChambersNotPartition(msg));
        let mut covered = BitSet::new(n);
        for c in &self.chambers {
            if c.is_empty() {
                return bad("empty chamber".into());
            }
            if !c.is_disjoint(&union) {
                return bad(format!("chamber {} meets a subspace", self.label(c)));
            }
            if !c.is_disjoint(&covered) {
                return bad(format!("chamber {} overlaps another", self.label(c)));
            }
            covered.union_with(c);
        }
        let complement = self.ground().difference(&union);
        if covered != complement {
            let missing = complement.difference(&covered);
            return bad(format!("points {} lie in no chamber", self.label(&missing)));
        }

        let invalid = |msg: String| Err(DissectionError::InvalidRefinement(msg));
        let ground = self.ground();
        if !self.refinement.contains(&ground) {
            return invalid("the ground set is missing".into());
        }
        let mut seen = BTreeSet::new();
        for r in &self.refinement {
            if r.is_empty() {
                return invalid("empty element".into());
            }
            if !seen.insert(r.clone()) {
                return invalid(format!("repeated element {}", self.label(r)));
            }
            if *r != ground && !r.is_subset(&union) {
                return invalid(format!(
                    "{} leaves the union of the subspaces",
                    self.label(r)
                ));
            }
        }

        // intersections of nonempty subfamilies of the subspaces
        let mut flats: BTreeSet<BitSet> = self.subspaces.iter().cloned().collect();
        let mut frontier: Vec<BitSet> = flats.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            for h in &self.subspaces {
                let y = x.intersection(h);
                if !y.is_empty() && flats.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        if let Some(x) = flats.iter().find(|x| !is_union_of(x, &self.refinement)) {
            return invalid(format!(
                "flat {} is not a union of refinement elements",
                self.label(x)
            ));
        }
        for (i, a) in self.refinement.iter().enumerate() {
            for b in &self.refinement[i + 1..] {
                let x = a.intersection(b);
                if !x.is_empty() && !is_union_of(&x, &self.refinement) {
                    return invalid(format!(
                        "{} ∩ {} is not a union of refinement elements",
                        self.label(a),
                        self.label(b)
                    ));
                }
            }
        }
        Ok(())
    }

    /// `L ⊔ {∅}` ordered by inclusion; the last element is `∅`.
    pub fn refinement_poset(&self) -> (Arc<Poset>, Vec<BitSet>) {
        let mut sets = self.refinement.clone();
        sets.push(BitSet::new(self.points.len()));
        let ids = sets.iter().map(|s| self.label(s)).collect();
        let poset = Poset::from_fn(ids, |a, b| sets[a].is_subset(&sets[b]))
            .expect("inclusion is a partial order");
        (Arc::new(poset), sets)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DLatticeCheck {
    /// `|D(L)|`.
    pub size: usize,
    /// `ji(D(L)) ⊆ {∅} ⊔ L ⊔ C`.
    pub ji_ok: bool,
    /// `Σ_{A ∈ M} μ_M(A, T) f(A) = 0` on `M = {∅} ⊔ L ⊔ C`; `None` when the
    /// ground set is itself join-irreducible or `ji_ok` fails.
    pub zero_sum: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetOracleReport {
    /// `Σ_C f(C)`.
    pub lhs: i64,
    /// `Σ_{X ∈ L ⊔ {∅}} μ(X, T) f(X)`.
    pub rhs: i64,
    pub equal: bool,
    pub d_lattice: Option<DLatticeCheck>,
}

impl SetOracleReport {
    pub fn holds(&self) -> bool {
        self.equal
            && self
                .d_lattice
                .as_ref()
                .is_none_or(|d| d.ji_ok && d.zero_sum != Some(false))
    }
}

pub fn set_oracle_check(
    model: &SetModel,
    f: &SetValuation,
) -> Result<SetOracleReport, DissectionError> {
    if let SetValuation::PointWeights(w) = f {
        if w.len() != model.points.len() {
            return Err(DissectionError::InvalidModel(format!(
                "{} weights for {} points",
                w.len(),
                model.points.len()
            )));
        }
    }
    let lhs: i64 = model.chambers.iter().map(|c| f.eval(c)).sum();
    let (poset, sets) = model.refinement_poset();
    let top = poset.top().expect("the ground set is the top");
    let mu = IncidenceFunction::mobius(&poset)?;
    let rhs = weighted_sum(&mu, top, |x| f.eval(&sets[x]))?;
    let d_lattice = if model.points.len() <= D_LATTICE_GROUND_LIMIT {
        Some(check_d_lattice(model, f)?)
    } else {
        None
    };
    Ok(SetOracleReport {
        lhs,
        rhs,
        equal: lhs == rhs,
        d_lattice,
    })
}

fn mask(s: &BitSet) -> u64 {
    s.iter().fold(0, |m, p| m | 1 << p)
}

fn check_d_lattice(model: &SetModel, f: &SetValuation) -> Result<DLatticeCheck, DissectionError> {
    let generators: Vec<u64> = std::iter::once(0)
        .chain(model.refinement.iter().map(mask))
        .chain(model.chambers.iter().map(mask))
        .collect();
    let allowed: BTreeSet<u64> = generators.iter().copied().collect();
    let d = SetLattice::generated_by(&generators);
    let l = &d.lattice;
    let ji = join_irreducibles(l).map_err(|e| DissectionError::InvalidModel(e.to_string()))?;
    let ji_ok = ji.elements.iter().all(|&a| allowed.contains(&d.sets[a]));
    let top = l.top();
    let zero_sum = if ji_ok && !ji.contains(top) {
        let members = BitSet::from_indices(
            l.len(),
            (0..l.len()).filter(|&a| allowed.contains(&d.sets[a])),
        );
        let n = model.points.len();
        let table = ValuationTable::from_fn(l, 1, |a| {
            let s = BitSet::from_indices(n, (0..n).filter(|&p| d.sets[a] >> p & 1 == 1));
            vec![f.eval(&s)]
        });
        let defect = defect_sum(l, &members, &table, top)?;
        Some(defect.iter().all(|&v| v == 0))
    } else {
        None
    };
    Ok(DLatticeCheck {
        size: l.len(),
        ji_ok,
        zero_sum,
    })
}
