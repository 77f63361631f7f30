//! JSON documents for posets, arrangements, set models, face profiles and
//! element subsets, with a canonical serialization.
//!
//! The canonical form of a document is its pretty-printed JSON followed by a
//! single newline; reading and re-writing a canonical file reproduces it byte
//! for byte.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::dissection::{ArrangementPoset, DissectionError, FaceProfile, SetModel, SetValuation};
use crate::lattice::{Lattice, LatticeError};
use crate::poset::{PairMode, Poset, PosetError};

/// The format tag required on arrangement, set-model and profile documents.
pub const FORMAT_TAG: &str = "dissecta/1";
pub const DEFAULT_MAX_ELEMENTS: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("expected \"format\": \"{FORMAT_TAG}\", found {0}")]
    Format(String),
    #[error("{what} has {size} elements, more than the limit of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Dissection(#[from] DissectionError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse(e.to_string())
    }
}

/// Pretty JSON plus a trailing newline.
pub fn canonical_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

fn check_size(what: &'static str, size: usize, cap: usize) -> Result<(), IoError> {
    if size > cap {
        return Err(IoError::TooLarge { what, size, cap });
    }
    Ok(())
}

fn check_tag(format: &Option<String>) -> Result<(), IoError> {
    match format.as_deref() {
        Some(FORMAT_TAG) => Ok(()),
        Some(other) => Err(IoError::Format(format!("\"{other}\""))),
        None => Err(IoError::Format("no format tag".into())),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Attrs {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chi: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
}

/// A poset, optionally carrying the attributes of an arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<String>,
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub covers: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relation: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attrs: BTreeMap<String, Attrs>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<String>,
}

impl PosetDoc {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_poset(&self, cap: usize) -> Result<Poset, IoError> {
        check_size("poset", self.elements.len(), cap)?;
        let (pairs, mode) = match (&self.covers, &self.relation) {
            (Some(c), None) => (c, PairMode::Covers),
            (None, Some(r)) => (r, PairMode::Relation),
            _ => {
                return Err(IoError::Invalid(
                    "exactly one of \"covers\" and \"relation\" is required".into(),
                ))
            }
        };
        Ok(Poset::build(&self.elements, pairs, mode)?)
    }

    pub fn to_lattice(&self, cap: usize) -> Result<Lattice, IoError> {
        Ok(Lattice::from_poset(Arc::new(self.to_poset(cap)?))?)
    }

    pub fn to_arrangement(&self, cap: usize) -> Result<ArrangementPoset, IoError> {
        check_tag(&self.format)?;
        let poset = self.to_poset(cap)?;
        if let Some(name) = self.attrs.keys().find(|k| poset.index_of(k).is_err()) {
            return Err(PosetError::UnknownElement(name.clone()).into());
        }
        let top = match &self.top {
            Some(t) => poset.index_of(t)?,
            None => poset.top().ok_or(DissectionError::NoUniqueTop)?,
        };
        let attr = |id: &str| self.attrs.get(id).cloned().unwrap_or_default();
        let chi = poset
            .ids()
            .iter()
            .map(|id| {
                attr(id)
                    .chi
                    .ok_or_else(|| DissectionError::MissingChi(id.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let has_dim = poset.ids().iter().any(|id| attr(id).dim.is_some());
        let dim = if has_dim {
            Some(
                poset
                    .ids()
                    .iter()
                    .map(|id| {
                        attr(id)
                            .dim
                            .ok_or_else(|| DissectionError::MissingDimFor(id.clone()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        } else {
            None
        };
        Ok(ArrangementPoset::new(Arc::new(poset), top, chi, dim)?)
    }

    /// The cover-relation document of a poset.
    pub fn from_poset(p: &Poset) -> Self {
        PosetDoc {
            format: None,
            elements: p.ids().to_vec(),
            covers: Some(
                p.cover_pairs()
                    .into_iter()
                    .map(|(a, b)| (p.id(a).to_owned(), p.id(b).to_owned()))
                    .collect(),
            ),
            relation: None,
            attrs: BTreeMap::new(),
            top: None,
        }
    }

    pub fn from_arrangement(ap: &ArrangementPoset) -> Self {
        let p = ap.poset();
        let mut doc = Self::from_poset(p);
        doc.format = Some(FORMAT_TAG.into());
        doc.top = Some(p.id(ap.top()).to_owned());
        doc.attrs = (0..p.len())
            .map(|a| {
                let attrs = Attrs {
                    chi: Some(ap.chi(a)),
                    dim: ap.dims().map(|d| d[a]),
                };
                (p.id(a).to_owned(), attrs)
            })
            .collect();
        doc
    }
}

/// A ground point, written either as an integer or as a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetModelDoc {
    pub format: Option<String>,
    pub ground: Vec<Label>,
    pub subspaces: Vec<Vec<Label>>,
    pub refinement: Vec<Vec<Label>>,
    pub chambers: Vec<Vec<Label>>,
    /// Optional point weights; the valuation defaults to cardinality.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<i64>>,
}

impl SetModelDoc {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_model(&self, cap: usize) -> Result<(SetModel, SetValuation), IoError> {
        check_tag(&self.format)?;
        check_size("ground set", self.ground.len(), cap)?;
        let names = |sets: &[Vec<Label>]| -> Vec<Vec<String>> {
            sets.iter()
                .map(|s| s.iter().map(ToString::to_string).collect())
                .collect()
        };
        let ground: Vec<String> = self.ground.iter().map(ToString::to_string).collect();
        let model = SetModel::from_labels(
            &ground,
            &names(&self.subspaces),
            &names(&self.refinement),
            &names(&self.chambers),
        )?;
        let valuation = match &self.weights {
            None => SetValuation::Cardinality,
            Some(w) if w.len() == ground.len() => SetValuation::PointWeights(w.clone()),
            Some(w) => {
                return Err(IoError::Invalid(format!(
                    "{} weights for {} ground points",
                    w.len(),
                    ground.len()
                )))
            }
        };
        Ok((model, valuation))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileDoc {
    pub format: Option<String>,
    pub chamber_chi: BTreeMap<u32, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flat_chi: Option<BTreeMap<u32, i64>>,
}

impl ProfileDoc {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_profile(&self) -> Result<FaceProfile, IoError> {
        check_tag(&self.format)?;
        Ok(FaceProfile::new(
            self.chamber_chi.clone(),
            self.flat_chi.clone(),
        )?)
    }
}

/// A subset of the elements of a poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetDoc {
    pub format: Option<String>,
    pub members: Vec<String>,
}

impl SubsetDoc {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_bitset(&self, p: &Poset) -> Result<BitSet, IoError> {
        check_tag(&self.format)?;
        let mut out = BitSet::new(p.len());
        for m in &self.members {
            out.insert(p.index_of(m)?);
        }
        Ok(out)
    }
}

/// Parses any bundled document kind and re-serializes it canonically.
pub fn recanonicalize(text: &str) -> Result<String, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let object = value
        .as_object()
        .ok_or_else(|| IoError::Invalid("expected a JSON object".into()))?;
    if object.contains_key("elements") {
        Ok(canonical_json(&PosetDoc::parse(text)?))
    } else if object.contains_key("ground") {
        Ok(canonical_json(&SetModelDoc::parse(text)?))
    } else if object.contains_key("chamber_chi") {
        Ok(canonical_json(&ProfileDoc::parse(text)?))
    } else if object.contains_key("members") {
        Ok(canonical_json(&SubsetDoc::parse(text)?))
    } else {
        Err(IoError::Invalid("unrecognized document".into()))
    }
}
