//! Sparse polynomials with exact coefficients: univariate over the rationals
//! and bivariate over the integers.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

/// `Σ cₖ xᵏ` with rational coefficients; zero terms are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<u32, Rational64>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rational64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (k as u32, Rational64::from_integer(c))),
        )
    }

    pub fn add_term(&mut self, k: u32, c: Rational64) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(Rational64::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coeff(&self, k: u32) -> Rational64 {
        self.terms.get(&k).copied().unwrap_or_else(Rational64::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    /// Nonzero terms, highest degree first.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Rational64)> + '_ {
        self.terms.iter().rev().map(|(&k, &c)| (k, c))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Rational64::is_integer)
    }

    pub fn eval(&self, x: Rational64) -> Rational64 {
        self.terms
            .iter()
            .map(|(&k, &c)| c * pow(x, k))
            .fold(Rational64::zero(), |a, b| a + b)
    }

    pub fn scale(&self, k: Rational64) -> Self {
        Self::from_terms(self.terms.iter().map(|(&d, &c)| (d, c * k)))
    }

    /// `p(−x)`.
    pub fn negate_var(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .map(|(&d, &c)| (d, if d % 2 == 1 { -c } else { c })),
        )
    }

    pub fn add(&self, other: &Poly) -> Self {
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            out.add_term(k, c);
        }
        out
    }
}

fn pow(x: Rational64, k: u32) -> Rational64 {
    (0..k).fold(Rational64::one(), |acc, _| acc * x)
}

fn write_coeff(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: Rational64,
    has_var: bool,
) -> fmt::Result {
    let neg = c.is_negative();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
        (true, false) => {}
    }
    let a = c.abs();
    if !has_var {
        write!(f, "{a}")
    } else if a.is_one() {
        Ok(())
    } else {
        write!(f, "{a}*")
    }
}

fn write_var(f: &mut fmt::Formatter<'_>, name: char, k: u32) -> fmt::Result {
    match k {
        1 => write!(f, "{name}"),
        _ => write!(f, "{name}^{k}"),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms().enumerate() {
            write_coeff(f, i == 0, c, k > 0)?;
            if k > 0 {
                write_var(f, 'x', k)?;
            }
        }
        Ok(())
    }
}

/// `Σ c_{ij} xⁱ yʲ` with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), i64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e.0, e.1, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert(0);
        *entry = entry
            .checked_add(c)
            .expect("polynomial coefficient overflow");
        if *entry == 0 {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> i64 {
        self.terms.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in canonical order: descending total degree, then
    /// descending exponent of `x`.
    pub fn terms(&self) -> Vec<((u32, u32), i64)> {
        let mut out: Vec<_> = self.terms.iter().map(|(&e, &c)| (e, c)).collect();
        out.sort_by_key(|&((i, j), _)| std::cmp::Reverse((i + j, i)));
        out
    }

    pub fn eval(&self, x: i64, y: i64) -> i64 {
        self.terms
            .iter()
            .map(|(&(i, j), &c)| c * x.pow(i) * y.pow(j))
            .sum()
    }

    /// The univariate polynomial `p(s·x, y₀)`.
    pub fn specialize(&self, x_sign: i64, y: i64) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(&(i, j), &c)| {
            let v = c * x_sign.pow(i) * y.pow(j);
            (i, Rational64::from_integer(v))
        }))
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, ((i, j), c)) in self.terms().into_iter().enumerate() {
            let has_var = i + j > 0;
            write_coeff(f, n == 0, Rational64::from_integer(c), has_var)?;
            if i > 0 {
                write_var(f, 'x', i)?;
            }
            if i > 0 && j > 0 {
                write!(f, "*")?;
            }
            if j > 0 {
                write_var(f, 'y', j)?;
            }
        }
        Ok(())
    }
}
