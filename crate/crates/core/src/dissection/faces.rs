use std::collections::BTreeMap;

use num_rational::Rational64;

use super::{chamber_statistic, induced, ArrangementPoset, DissectionError};
use crate::polynomial::{Poly, Poly2};

/// Per-dimension Euler characteristics: `c_i` for chambers of dimension `i`
/// and, optionally, `l_k` for every flat of dimension `k` (overriding the
/// per-flat values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceProfile {
    chamber_chi: BTreeMap<u32, i64>,
    flat_chi: Option<BTreeMap<u32, i64>>,
}

impl FaceProfile {
    pub fn new(
        chamber_chi: BTreeMap<u32, i64>,
        flat_chi: Option<BTreeMap<u32, i64>>,
    ) -> Result<Self, DissectionError> {
        if chamber_chi.values().any(|&c| c == 0) {
            return Err(DissectionError::ZeroChamberChi);
        }
        Ok(FaceProfile {
            chamber_chi,
            flat_chi,
        })
    }

    /// `c_i = (−1)^i` for `i ≤ n`.
    pub fn alternating(n: u32) -> Self {
        FaceProfile {
            chamber_chi: (0..=n).map(|i| (i, sign(i))).collect(),
            flat_chi: None,
        }
    }

    pub fn chamber_chi(&self) -> &BTreeMap<u32, i64> {
        &self.chamber_chi
    }

    pub fn flat_chi(&self) -> Option<&BTreeMap<u32, i64>> {
        self.flat_chi.as_ref()
    }

    fn c(&self, i: u32) -> Result<i64, DissectionError> {
        self.chamber_chi
            .get(&i)
            .copied()
            .ok_or(DissectionError::MissingChamberChi(i))
    }

    /// The characteristic used for flat `x`.
    fn l(&self, ap: &ArrangementPoset, dims: &[u32], x: usize) -> Result<i64, DissectionError> {
        match &self.flat_chi {
            None => Ok(ap.chi(x)),
            Some(map) => map
                .get(&dims[x])
                .copied()
                .ok_or(DissectionError::MissingFlatChi(dims[x])),
        }
    }
}

fn sign(k: u32) -> i64 {
    if k.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The arrangement with every χ replaced by the profile's flat values.
fn with_profile_chi(
    ap: &ArrangementPoset,
    profile: &FaceProfile,
) -> Result<ArrangementPoset, DissectionError> {
    let dims = ap.require_dims()?;
    if profile.flat_chi.is_none() {
        return Ok(ap.clone());
    }
    let chi = (0..ap.len())
        .map(|x| profile.l(ap, dims, x))
        .collect::<Result<Vec<_>, _>>()?;
    ArrangementPoset::new(
        std::sync::Arc::clone(ap.poset()),
        ap.top(),
        chi,
        Some(dims.to_vec()),
    )
}

/// `f_i = (1/c_i) Σ_{dim Y = i} Σ_{X ⪯ Y} μ(X, Y) χ(X)`, one dissection per
/// flat `Y`, for every dimension carried by some flat.
pub fn face_counts(
    ap: &ArrangementPoset,
    profile: &FaceProfile,
) -> Result<BTreeMap<u32, Rational64>, DissectionError> {
    let ap = with_profile_chi(ap, profile)?;
    let dims = ap.require_dims()?;
    let mut sums: BTreeMap<u32, i64> = BTreeMap::new();
    for y in 0..ap.len() {
        let stat = chamber_statistic(&induced(&ap, y), None)?;
        let entry = sums.entry(dims[y]).or_insert(0);
        *entry = entry
            .checked_add(stat.sum)
            .ok_or(crate::incidence::IncidenceError::Overflow("a face count"))?;
    }
    sums.into_iter()
        .map(|(i, s)| Ok((i, Rational64::new(s, profile.c(i)?))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FConvention {
    /// `Σ f_k x^{n−k}`, `k` the face dimension.
    Dim,
    /// `Σ f_k x^k`.
    Codim,
    /// `Σ_Y Σ_{X ⪯ Y} (χ(X)/c_{dim Y}) μ(X, Y) x^{n − dim X}`.
    Literal,
}

pub fn f_polynomial(
    ap: &ArrangementPoset,
    profile: &FaceProfile,
    convention: FConvention,
) -> Result<Poly, DissectionError> {
    let n = ap.ambient_dim()?;
    match convention {
        FConvention::Dim => Ok(Poly::from_terms(
            face_counts(ap, profile)?
                .into_iter()
                .map(|(k, f)| (n - k, f)),
        )),
        FConvention::Codim => Ok(Poly::from_terms(face_counts(ap, profile)?)),
        FConvention::Literal => literal_f_polynomial(ap, profile),
    }
}

/// The double sum with exponent `n − dim X`, evaluated term by term.
pub fn literal_f_polynomial(
    ap: &ArrangementPoset,
    profile: &FaceProfile,
) -> Result<Poly, DissectionError> {
    let dims = ap.require_dims()?;
    let n = ap.ambient_dim()?;
    let mu = ap.mobius()?;
    let mut out = Poly::zero();
    for y in 0..ap.len() {
        let c = profile.c(dims[y])?;
        for x in ap.poset().down(y).iter() {
            let coeff = mu.get(x, y) * profile.l(ap, dims, x)?;
            out.add_term(n - dims[x], Rational64::new(coeff, c));
        }
    }
    Ok(out)
}

/// `M(x, y) = Σ_{X ⪯ Y} μ(X, Y) x^{rk X} y^{rk 𝒜 − rk Y}`.
pub fn mobius_polynomial(ap: &ArrangementPoset) -> Result<Poly2, DissectionError> {
    let rk_a = ap.arrangement_rank()?;
    let mu = ap.mobius()?;
    let mut out = Poly2::zero();
    for x in 0..ap.len() {
        let rk_x = ap.rank(x)?;
        for (y, m) in mu.row(x) {
            out.add_term(rk_x, rk_a - ap.rank(y)?, m);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corollary {
    /// `χ = (−1)^dim` on flats and faces.
    Cor68,
    /// `χ = 2` or `0` on flats by parity of dimension, `(−1)^dim` on faces.
    Cor69,
}

impl Corollary {
    pub fn name(self) -> &'static str {
        match self {
            Corollary::Cor68 => "cor68",
            Corollary::Cor69 => "cor69",
        }
    }

    fn expected_chi(self, dim: u32) -> i64 {
        match self {
            Corollary::Cor68 => sign(dim),
            Corollary::Cor69 => 1 + sign(dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub corollary: Corollary,
    pub lhs: Poly,
    pub rhs: Poly,
    pub equal: bool,
    /// `lhs(1)`.
    pub lhs_at_one: Rational64,
    /// `Σ f_i` from the per-flat dissections.
    pub total_faces: Rational64,
}

impl IdentityReport {
    pub fn holds(&self) -> bool {
        self.equal && self.lhs_at_one == self.total_faces
    }
}

/// Checks one of the two closed forms of the literal f-polynomial in terms of
/// the Möbius polynomial, after verifying the χ hypothesis on every flat.
pub fn identity_report(
    ap: &ArrangementPoset,
    which: Corollary,
) -> Result<IdentityReport, DissectionError> {
    let dims = ap.require_dims()?;
    for x in 0..ap.len() {
        let want = which.expected_chi(dims[x]);
        if ap.chi(x) != want {
            return Err(DissectionError::ProfileMismatch(format!(
                "{}: χ({}) = {} but the hypothesis requires {} for dimension {}",
                which.name(),
                ap.poset().id(x),
                ap.chi(x),
                want,
                dims[x]
            )));
        }
    }
    let n = ap.ambient_dim()?;
    let rk_a = ap.arrangement_rank()?;
    let profile = FaceProfile::alternating(n);
    let lhs = literal_f_polynomial(ap, &profile)?;
    let m = mobius_polynomial(ap)?;
    let rhs = match which {
        Corollary::Cor68 => m
            .specialize(-1, -1)
            .scale(Rational64::from_integer(sign(rk_a))),
        Corollary::Cor69 => m
            .specialize(1, -1)
            .add(
                &m.specialize(-1, -1)
                    .scale(Rational64::from_integer(sign(n))),
            )
            .scale(Rational64::from_integer(sign(n - rk_a))),
    };
    let total_faces = face_counts(ap, &profile)?.values().copied().sum();
    Ok(IdentityReport {
        corollary: which,
        equal: lhs == rhs,
        lhs_at_one: lhs.eval(Rational64::from_integer(1)),
        lhs,
        rhs,
        total_faces,
    })
}
