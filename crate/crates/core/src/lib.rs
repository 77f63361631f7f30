//! Exact Möbius calculus on finite posets and lattices, valuation modules,
//! and the dissection of arrangements.
//!
//! Elements are dense indices `0..n` inside every structure; string ids only
//! appear at the boundary ([`poset::Poset::index_of`], [`io`]).

pub mod bitset;
pub mod catalog;
pub mod dissection;
pub mod incidence;
pub mod io;
pub mod lattice;
pub mod mobius_algebra;
pub mod polynomial;
pub mod poset;
pub mod report;
pub mod valuation;
pub mod zlinalg;

pub use num_rational::Rational64;

pub use bitset::BitSet;
pub use dissection::{ArrangementPoset, DissectionError, FaceProfile, SetModel};
pub use incidence::{Direction, IncidenceError, IncidenceFunction};
pub use lattice::{Lattice, LatticeError, StructureFlags};
pub use mobius_algebra::{AlgebraError, GroupVector, MobiusAlgebra};
pub use polynomial::{Poly, Poly2};
pub use poset::{PairMode, Poset, PosetError};
pub use valuation::{NLPresentation, ValuationError, ValuationTable};
pub use zlinalg::{IntegerMatrix, LinalgError, NormalForm, NormalFormKind};

/// Any error raised by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Incidence(#[from] IncidenceError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Valuation(#[from] ValuationError),
    #[error(transparent)]
    Dissection(#[from] DissectionError),
    #[error(transparent)]
    Io(#[from] io::IoError),
}
