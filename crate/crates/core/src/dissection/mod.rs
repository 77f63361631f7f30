//! Arrangements as posets of flats with Euler characteristics: chamber
//! statistics, induced arrangements, face counts and polynomials, and a
//! finite set-model oracle for the dissection identity.

mod faces;
mod set_model;

use std::sync::Arc;

use num_rational::Rational64;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::incidence::{IncidenceError, IncidenceFunction};
use crate::poset::Poset;

pub use faces::{
    f_polynomial, face_counts, identity_report, literal_f_polynomial, mobius_polynomial, Corollary,
    FConvention, FaceProfile, IdentityReport,
};
pub use set_model::{
    set_oracle_check, DLatticeCheck, SetModel, SetOracleReport, SetValuation,
    D_LATTICE_GROUND_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DissectionError {
    #[error("the poset has no unique top element")]
    NoUniqueTop,
    #[error("flat {0} has no Euler characteristic")]
    MissingChi(String),
    #[error("dimension labels are not monotone: {0} ⪯ {1} but dim {0} > dim {1}")]
    DimNotMonotone(String, String),
    #[error("dimension labels are required")]
    MissingDim,
    #[error("flat {0} has no dimension label")]
    MissingDimFor(String),
    #[error("chamber Euler characteristic must be nonzero")]
    ZeroChamberChi,
    #[error("no chamber Euler characteristic given for dimension {0}")]
    MissingChamberChi(u32),
    #[error("no flat Euler characteristic given for dimension {0}")]
    MissingFlatChi(u32),
    #[error("unknown flat {0}")]
    UnknownFlat(String),
    #[error("hypothesis violated: {0}")]
    ProfileMismatch(String),
    #[error("invalid meet-refinement: {0}")]
    InvalidRefinement(String),
    #[error("chambers do not partition the complement: {0}")]
    ChambersNotPartition(String),
    #[error("invalid set model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Valuation(#[from] crate::valuation::ValuationError),
}

/// A poset of flats with top `T`, a per-flat Euler characteristic and
/// optional dimension labels.
#[derive(Debug, Clone)]
pub struct ArrangementPoset {
    poset: Arc<Poset>,
    top: usize,
    chi: Vec<i64>,
    dim: Option<Vec<u32>>,
}

impl ArrangementPoset {
    pub fn new(
        poset: Arc<Poset>,
        top: usize,
        chi: Vec<i64>,
        dim: Option<Vec<u32>>,
    ) -> Result<Self, DissectionError> {
        if poset.top() != Some(top) {
            return Err(DissectionError::NoUniqueTop);
        }
        if chi.len() != poset.len() {
            let missing = poset.id(chi.len().min(poset.len() - 1)).to_owned();
            return Err(DissectionError::MissingChi(missing));
        }
        if let Some(dim) = &dim {
            if dim.len() != poset.len() {
                let missing = poset.id(dim.len().min(poset.len() - 1)).to_owned();
                return Err(DissectionError::MissingDimFor(missing));
            }
            for (a, b) in poset.cover_pairs() {
                if dim[a] > dim[b] {
                    return Err(DissectionError::DimNotMonotone(
                        poset.id(a).into(),
                        poset.id(b).into(),
                    ));
                }
            }
        }
        Ok(ArrangementPoset {
            poset,
            top,
            chi,
            dim,
        })
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn chi(&self, a: usize) -> i64 {
        self.chi[a]
    }

    pub fn chis(&self) -> &[i64] {
        &self.chi
    }

    pub fn dims(&self) -> Option<&[u32]> {
        self.dim.as_deref()
    }

    pub fn require_dims(&self) -> Result<&[u32], DissectionError> {
        self.dims().ok_or(DissectionError::MissingDim)
    }

    /// `n = dim T`.
    pub fn ambient_dim(&self) -> Result<u32, DissectionError> {
        Ok(self.require_dims()?[self.top])
    }

    /// `rk X = dim T − dim X`.
    pub fn rank(&self, a: usize) -> Result<u32, DissectionError> {
        let d = self.require_dims()?;
        Ok(d[self.top] - d[a])
    }

    /// `rk 𝒜`, the largest rank of a flat.
    pub fn arrangement_rank(&self) -> Result<u32, DissectionError> {
        (0..self.len())
            .map(|a| self.rank(a))
            .try_fold(0, |m, r| r.map(|r| m.max(r)))
    }

    pub fn mobius(&self) -> Result<IncidenceFunction, DissectionError> {
        Ok(IncidenceFunction::mobius(&self.poset)?)
    }

    pub fn index_of(&self, id: &str) -> Result<usize, DissectionError> {
        self.poset
            .index_of(id)
            .map_err(|_| DissectionError::UnknownFlat(id.into()))
    }
}

/// `Σ_X μ(X, T) χ(X)` and, given a uniform chamber characteristic `c`, the
/// chamber count `sum / c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberStatistic {
    pub sum: i64,
    pub count: Option<Rational64>,
}

impl ChamberStatistic {
    /// False when a count was requested and is not an integer.
    pub fn is_integral(&self) -> bool {
        self.count.is_none_or(|c| c.is_integer())
    }
}

pub fn chamber_statistic(
    ap: &ArrangementPoset,
    c: Option<i64>,
) -> Result<ChamberStatistic, DissectionError> {
    if c == Some(0) {
        return Err(DissectionError::ZeroChamberChi);
    }
    let mu = ap.mobius()?;
    let sum = weighted_sum(&mu, ap.top, |x| ap.chi[x])?;
    Ok(ChamberStatistic {
        sum,
        count: c.map(|c| Rational64::new(sum, c)),
    })
}

pub(crate) fn weighted_sum(
    mu: &IncidenceFunction,
    y: usize,
    weight: impl Fn(usize) -> i64,
) -> Result<i64, DissectionError> {
    let overflow = || IncidenceError::Overflow("a dissection sum");
    mu.host().down(y).iter().try_fold(0i64, |acc, x| {
        let term = mu.get(x, y).checked_mul(weight(x)).ok_or_else(overflow)?;
        Ok(acc.checked_add(term).ok_or_else(overflow)?)
    })
}

/// The arrangement induced on the flat `y`: its principal down-set, with `y`
/// as the new top.
pub fn induced(ap: &ArrangementPoset, y: usize) -> ArrangementPoset {
    let members: BitSet = ap.poset.down(y).clone();
    let (sub, map) = ap.poset.induced(&members);
    let top = map.binary_search(&y).expect("y lies below itself");
    ArrangementPoset {
        poset: Arc::new(sub),
        top,
        chi: map.iter().map(|&a| ap.chi[a]).collect(),
        dim: ap.dim.as_ref().map(|d| map.iter().map(|&a| d[a]).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::poset::PairMode;

    #[test]
    fn worked_chamber_sums() {
        let sphere = catalog::sphere_circles();
        assert_eq!(chamber_statistic(&sphere, None).unwrap().sum, 6);
        let mu = sphere.mobius().unwrap();
        let p13 = sphere.index_of("P13").unwrap();
        assert_eq!(mu.get(p13, sphere.top()), 1);
        let h1 = sphere.index_of("H1").unwrap();
        assert_eq!(mu.get(h1, sphere.top()), -1);

        let plane = catalog::plane_curves();
        let s = chamber_statistic(&plane, Some(1)).unwrap();
        assert_eq!(s.sum, 18);
        assert_eq!(s.count, Some(Rational64::from_integer(18)));

        let circles = catalog::two_great_circles();
        let s = chamber_statistic(&circles, Some(1)).unwrap();
        assert_eq!((s.sum, s.count), (4, Some(Rational64::from_integer(4))));
    }

    #[test]
    fn chamber_count_flags() {
        let sphere = catalog::sphere_circles();
        assert_eq!(
            chamber_statistic(&sphere, Some(0)).unwrap_err(),
            DissectionError::ZeroChamberChi
        );
        let s = chamber_statistic(&sphere, Some(4)).unwrap();
        assert_eq!(s.count, Some(Rational64::new(3, 2)));
        assert!(!s.is_integral());
    }

    #[test]
    fn validation() {
        let p = Arc::new(Poset::build(&["A", "B"], &[], PairMode::Covers).unwrap());
        assert_eq!(
            ArrangementPoset::new(p, 0, vec![1, 1], None).unwrap_err(),
            DissectionError::NoUniqueTop
        );
        let p = Arc::new(Poset::build(&["T", "X"], &[("X", "T")], PairMode::Covers).unwrap());
        assert_eq!(
            ArrangementPoset::new(Arc::clone(&p), 0, vec![1], None).unwrap_err(),
            DissectionError::MissingChi("X".into())
        );
        assert_eq!(
            ArrangementPoset::new(p, 0, vec![1, 1], Some(vec![1, 2])).unwrap_err(),
            DissectionError::DimNotMonotone("X".into(), "T".into())
        );
    }

    #[test]
    fn induced_arrangements() {
        let plane = catalog::plane_curves();
        let h1 = plane.index_of("H1").unwrap();
        let sub = induced(&plane, h1);
        let mut ids: Vec<&str> = sub.poset().ids().iter().map(String::as_str).collect();
        ids.sort_unstable();
        assert_eq!(ids, ["H1", "P12", "P13"]);
        assert_eq!(sub.poset().id(sub.top()), "H1");
        assert_eq!(induced(&plane, plane.top()).len(), plane.len());
        let p12 = plane.index_of("P12").unwrap();
        assert_eq!(induced(&plane, p12).len(), 1);

        // μ on the down-set agrees with the ambient μ
        let mu = plane.mobius().unwrap();
        let sub_mu = sub.mobius().unwrap();
        for x in 0..sub.len() {
            let ax = plane.index_of(sub.poset().id(x)).unwrap();
            assert_eq!(sub_mu.get(x, sub.top()), mu.get(ax, h1));
        }
    }
}
