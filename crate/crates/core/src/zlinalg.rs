//! Exact integer linear algebra: Hermite and Smith normal forms, subgroup
//! membership and quotient invariants of finitely generated subgroups of ℤⁿ.
//!
//! Entries are arbitrary-precision integers. Pivots are always chosen with the
//! smallest nonzero magnitude, which keeps intermediate entries small.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows that all have length `cols`.
    pub fn from_rows<T: Clone + Into<BigInt>>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntegerMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `v · self` for a row vector `v`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(self.row(i)) {
                *o += c * x;
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] -= q · row[source]`, touching columns `from..`.
    fn row_sub(&mut self, target: usize, source: usize, q: &BigInt, from: usize) {
        if q.is_zero() {
            return;
        }
        for j in from..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !s.is_zero() {
                self.data[target * self.cols + j] -= q * s;
            }
        }
    }

    /// `col[target] -= q · col[source]`, touching rows `from..`.
    fn col_sub(&mut self, target: usize, source: usize, q: &BigInt, from: usize) {
        if q.is_zero() {
            return;
        }
        for i in from..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                self.data[i * self.cols + target] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[i * self.cols + j];
            *x = -std::mem::take(x);
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalFormKind {
    Hermite,
    Smith,
}

/// `U·A = D` (Hermite) or `U·A·V = D` (Smith) with `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalForm {
    pub kind: NormalFormKind,
    pub d: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: Option<IntegerMatrix>,
    /// Pivot columns of the nonzero Hermite rows (empty for Smith).
    pub pivots: Vec<usize>,
}

impl NormalForm {
    /// Rebuilds `D` from `A` and the transforms.
    pub fn reconstructs(&self, a: &IntegerMatrix) -> bool {
        let ua = self.u.mul(a);
        let lhs = match &self.v {
            Some(v) => ua.mul(v),
            None => ua,
        };
        lhs == self.d
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            NormalFormKind::Hermite => self.pivots.len(),
            NormalFormKind::Smith => self.invariant_factors().len(),
        }
    }

    /// Nonzero diagonal entries of a Smith form, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.d.rows.min(self.d.cols);
        (0..n)
            .map(|i| self.d.get(i, i).clone())
            .take_while(|x| !x.is_zero())
            .collect()
    }
}

pub fn normal_form(a: &IntegerMatrix, kind: NormalFormKind) -> NormalForm {
    let nf = match kind {
        NormalFormKind::Hermite => hermite(a),
        NormalFormKind::Smith => smith(a),
    };
    debug_assert!(nf.reconstructs(a));
    nf
}

fn smallest_nonzero<'a>(entries: impl Iterator<Item = (usize, &'a BigInt)>) -> Option<usize> {
    entries
        .filter(|(_, x)| !x.is_zero())
        .min_by(|(_, x), (_, y)| x.magnitude().cmp(y.magnitude()))
        .map(|(i, _)| i)
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
pub fn hermite(a: &IntegerMatrix) -> NormalForm {
    let mut h = a.clone();
    let mut u = IntegerMatrix::identity(a.rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..h.cols {
        if r == h.rows {
            break;
        }
        while let Some(p) = smallest_nonzero((r..h.rows).map(|i| (i, h.get(i, j)))) {
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..h.rows {
                if h.get(i, j).is_zero() {
                    continue;
                }
                let q = h.get(i, j).div_floor(h.get(r, j));
                h.row_sub(i, r, &q, j);
                u.row_sub(i, r, &q, 0);
                clean &= h.get(i, j).is_zero();
            }
            if clean {
                if h.get(r, j).is_negative() {
                    h.negate_row(r);
                    u.negate_row(r);
                }
                for i in 0..r {
                    let q = h.get(i, j).div_floor(h.get(r, j));
                    h.row_sub(i, r, &q, j);
                    u.row_sub(i, r, &q, 0);
                }
                pivots.push(j);
                r += 1;
                break;
            }
        }
    }
    NormalForm {
        kind: NormalFormKind::Hermite,
        d: h,
        u,
        v: None,
        pivots,
    }
}

/// Smith normal form `U·A·V = diag(d₁, d₂, …)` with `d₁ | d₂ | …`, `dᵢ ≥ 0`.
pub fn smith(a: &IntegerMatrix) -> NormalForm {
    let mut d = a.clone();
    let mut u = IntegerMatrix::identity(a.rows);
    let mut v = IntegerMatrix::identity(a.cols);
    let n = d.rows.min(d.cols);
    'diagonal: for t in 0..n {
        loop {
            let cols = d.cols;
            let found = smallest_nonzero(
                (t..d.rows)
                    .flat_map(|i| (t..cols).map(move |j| (i * cols + j, i, j)))
                    .map(|(k, _, _)| (k, &d.data[k])),
            );
            let Some(k) = found else {
                break 'diagonal;
            };
            let (pi, pj) = (k / cols, k % cols);
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..d.rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = d.get(i, t).div_floor(d.get(t, t));
                d.row_sub(i, t, &q, t);
                u.row_sub(i, t, &q, 0);
                clean &= d.get(i, t).is_zero();
            }
            for j in t + 1..d.cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = d.get(t, j).div_floor(d.get(t, t));
                d.col_sub(j, t, &q, t);
                v.col_sub(j, t, &q, 0);
                clean &= d.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // the pivot must divide the whole remaining block
            let pivot = d.get(t, t).clone();
            let offender = (t + 1..d.rows)
                .find(|&i| (t + 1..d.cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    d.row_sub(t, i, &minus_one, t);
                    u.row_sub(t, i, &minus_one, 0);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    NormalForm {
        kind: NormalFormKind::Smith,
        d,
        u,
        v: Some(v),
        pivots: Vec::new(),
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntegerMatrix) -> BigInt {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j);
                a.set(i, j, x / &prev);
            }
        }
        prev = a.get(k, k).clone();
    }
    sign * a.get(n - 1, n - 1)
}

/// An echelon basis of a subgroup of ℤⁿ, grown one generator at a time with
/// 2×2 unimodular (extended gcd) combinations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

fn leading(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_matrix(a: &IntegerMatrix) -> Self {
        let mut basis = Self::new(a.cols);
        for i in 0..a.rows {
            basis.insert(a.row(i).to_vec());
        }
        basis.reduce();
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn to_matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(self.cols, &self.rows)
    }

    /// Adds a generator; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        assert_eq!(v.len(), self.cols, "generator length");
        while let Some(q) = leading(&v) {
            match self.pivots.binary_search(&q) {
                Ok(k) => {
                    let row = &mut self.rows[k];
                    let a = row[q].clone();
                    let c = v[q].clone();
                    if c.is_multiple_of(&a) {
                        let m = &c / &a;
                        for (x, r) in v.iter_mut().zip(row.iter()).skip(q) {
                            *x -= &m * r;
                        }
                        continue;
                    }
                    let eg = a.extended_gcd(&c);
                    let (g, s, t) = (eg.gcd, eg.x, eg.y);
                    let (cg, ag) = (&c / &g, &a / &g);
                    for j in q..self.cols {
                        let (r, x) = (row[j].clone(), v[j].clone());
                        row[j] = &s * &r + &t * &x;
                        v[j] = &cg * &r - &ag * &x;
                    }
                }
                Err(k) => {
                    if v[q].is_negative() {
                        v.iter_mut().for_each(|x| *x = -std::mem::take(x));
                    }
                    self.rows.insert(k, v);
                    self.pivots.insert(k, q);
                    return true;
                }
            }
        }
        false
    }

    /// Brings the basis to Hermite form (positive pivots, reduced above).
    pub fn reduce(&mut self) {
        for k in 0..self.rows.len() {
            let p = self.pivots[k];
            if self.rows[k][p].is_negative() {
                self.rows[k]
                    .iter_mut()
                    .for_each(|x| *x = -std::mem::take(x));
            }
            for i in 0..k {
                let q = self.rows[i][p].div_floor(&self.rows[k][p]);
                if q.is_zero() {
                    continue;
                }
                let (upper, lower) = self.rows.split_at_mut(k);
                for (x, r) in upper[i].iter_mut().zip(lower[0].iter()).skip(p) {
                    *x -= &q * r;
                }
            }
        }
    }

    /// Coefficients `c` with `Σ cₖ rowₖ = v`, if `v` lies in the subgroup.
    pub fn solve(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut residual = v.to_vec();
        let mut coeffs = vec![BigInt::zero(); self.rows.len()];
        for (k, (&p, row)) in self.pivots.iter().zip(&self.rows).enumerate() {
            if residual[..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            if residual[p].is_zero() {
                continue;
            }
            let (q, rem) = residual[p].div_rem(&row[p]);
            if !rem.is_zero() {
                return None;
            }
            for (x, r) in residual.iter_mut().zip(row).skip(p) {
                *x -= &q * r;
            }
            coeffs[k] = q;
        }
        residual.iter().all(Zero::is_zero).then_some(coeffs)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.solve(v).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// Coefficients on the generator rows reproducing the vector.
    pub coefficients: Option<Vec<BigInt>>,
}

/// Decides whether `v` is an integer combination of the rows of `generators`
/// via the Hermite form and back-substitution.
pub fn subgroup_membership(
    generators: &IntegerMatrix,
    v: &[BigInt],
) -> Result<Membership, LinalgError> {
    if v.len() != generators.cols {
        return Err(LinalgError::DimensionMismatch {
            expected: generators.cols,
            got: v.len(),
        });
    }
    let nf = hermite(generators);
    let basis = EchelonBasis {
        cols: generators.cols,
        rows: (0..nf.pivots.len()).map(|i| nf.d.row(i).to_vec()).collect(),
        pivots: nf.pivots.clone(),
    };
    Ok(match basis.solve(v) {
        Some(c) => {
            let mut full = c;
            full.resize(generators.rows, BigInt::zero());
            let coefficients = nf.u.left_mul_vec(&full);
            debug_assert_eq!(generators.left_mul_vec(&coefficients), v);
            Membership {
                member: true,
                coefficients: Some(coefficients),
            }
        }
        None => Membership {
            member: false,
            coefficients: None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub free_rank: usize,
    /// Invariant factors greater than one.
    pub torsion: Vec<BigInt>,
}

/// Structure of `ℤⁿ / ⟨rows⟩`.
pub fn quotient_invariants(
    generators: &IntegerMatrix,
    ambient_rank: usize,
) -> Result<QuotientInvariants, LinalgError> {
    if generators.cols != ambient_rank {
        return Err(LinalgError::DimensionMismatch {
            expected: ambient_rank,
            got: generators.cols,
        });
    }
    Ok(basis_quotient(&EchelonBasis::from_matrix(generators)))
}

pub(crate) fn basis_quotient(basis: &EchelonBasis) -> QuotientInvariants {
    let factors = smith(&basis.to_matrix()).invariant_factors();
    QuotientInvariants {
        free_rank: basis.cols() - factors.len(),
        torsion: factors.into_iter().filter(|d| !d.is_one()).collect(),
    }
}
