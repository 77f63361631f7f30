//! The incidence algebra of a finite poset over the integers.
//!
//! An [`IncidenceFunction`] stores one value per comparable pair `a ⪯ b`; all
//! other values are zero by definition. Arithmetic is checked: any overflow of
//! the 64-bit representation aborts with [`IncidenceError::Overflow`].

use std::sync::Arc;

use thiserror::Error;

use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IncidenceError {
    #[error("incidence functions live on different posets")]
    HostMismatch,
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Whether sums run over down-sets (`c ⪯ x`) or up-sets (`c ⪰ x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Down,
    Up,
}

pub(crate) fn same_host(a: &Arc<Poset>, b: &Arc<Poset>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, Debug)]
pub struct IncidenceFunction {
    host: Arc<Poset>,
    // uppers[a] lists every b ⪰ a in increasing index order; values[a] is
    // aligned with it.
    uppers: Arc<Vec<Vec<usize>>>,
    values: Vec<Vec<i64>>,
}

impl PartialEq for IncidenceFunction {
    fn eq(&self, other: &Self) -> bool {
        same_host(&self.host, &other.host) && self.values == other.values
    }
}

impl Eq for IncidenceFunction {}

fn upper_lists(p: &Poset) -> Arc<Vec<Vec<usize>>> {
    Arc::new((0..p.len()).map(|a| p.up(a).iter().collect()).collect())
}

impl IncidenceFunction {
    /// Tabulates `f(a, b)` over all comparable pairs.
    pub fn from_fn<F>(host: &Arc<Poset>, mut f: F) -> Self
    where
        F: FnMut(usize, usize) -> i64,
    {
        let uppers = upper_lists(host);
        let values = uppers
            .iter()
            .enumerate()
            .map(|(a, row)| row.iter().map(|&b| f(a, b)).collect())
            .collect();
        IncidenceFunction {
            host: Arc::clone(host),
            uppers,
            values,
        }
    }

    pub fn delta(host: &Arc<Poset>) -> Self {
        Self::from_fn(host, |a, b| i64::from(a == b))
    }

    pub fn zeta(host: &Arc<Poset>) -> Self {
        Self::from_fn(host, |_, _| 1)
    }

    /// The Möbius function, each row `μ(a, ·)` computed once along a linear
    /// extension of the up-set of `a`.
    pub fn mobius(host: &Arc<Poset>) -> Result<Self, IncidenceError> {
        let uppers = upper_lists(host);
        let n = host.len();
        let mut scratch = vec![0i64; n];
        let mut values = Vec::with_capacity(n);
        for (a, row) in uppers.iter().enumerate() {
            let mut order = row.clone();
            order.sort_by_key(|&b| host.position(b));
            for (k, &b) in order.iter().enumerate() {
                if b == a {
                    scratch[b] = 1;
                    continue;
                }
                let mut sum = 0i64;
                for &c in &order[..k] {
                    if host.leq(c, b) {
                        sum = sum
                            .checked_add(scratch[c])
                            .ok_or(IncidenceError::Overflow("the Möbius function"))?;
                    }
                }
                scratch[b] = sum
                    .checked_neg()
                    .ok_or(IncidenceError::Overflow("the Möbius function"))?;
            }
            values.push(row.iter().map(|&b| scratch[b]).collect());
        }
        Ok(IncidenceFunction {
            host: Arc::clone(host),
            uppers,
            values,
        })
    }

    pub fn host(&self) -> &Arc<Poset> {
        &self.host
    }

    /// `f(a, b)`; zero when `a ⋠ b`.
    pub fn get(&self, a: usize, b: usize) -> i64 {
        match self.uppers[a].binary_search(&b) {
            Ok(k) => self.values[a][k],
            Err(_) => 0,
        }
    }

    /// Nonzero-support iterator over `(b, f(a, b))` for `b ⪰ a`.
    pub fn row(&self, a: usize) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.uppers[a]
            .iter()
            .copied()
            .zip(self.values[a].iter().copied())
    }

    /// `h(a, b) = Σ_{c ∈ [a, b]} f(a, c) g(c, b)`.
    pub fn convolve(&self, other: &IncidenceFunction) -> Result<Self, IncidenceError> {
        if !same_host(&self.host, &other.host) {
            return Err(IncidenceError::HostMismatch);
        }
        let p = &self.host;
        let mut values = Vec::with_capacity(p.len());
        for (a, row) in self.uppers.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for &b in row {
                let mut sum = 0i64;
                for (k, &c) in row.iter().enumerate() {
                    if !p.leq(c, b) {
                        continue;
                    }
                    let term = self.values[a][k]
                        .checked_mul(other.get(c, b))
                        .ok_or(IncidenceError::Overflow("a convolution"))?;
                    sum = sum
                        .checked_add(term)
                        .ok_or(IncidenceError::Overflow("a convolution"))?;
                }
                out.push(sum);
            }
            values.push(out);
        }
        Ok(IncidenceFunction {
            host: Arc::clone(&self.host),
            uppers: Arc::clone(&self.uppers),
            values,
        })
    }

    /// All comparable pairs with their values, ordered by `(a, b)`.
    pub fn entries(&self) -> Vec<(usize, usize, i64)> {
        (0..self.host.len())
            .flat_map(|a| self.row(a).map(move |(b, v)| (a, b, v)))
            .collect()
    }
}

/// `g(x) = Σ_{c ⪯ x} f(c)` (down) or `Σ_{c ⪰ x} f(c)` (up), for vector-valued
/// `f` stored row-major as `n × dim`.
pub fn sum_transform(
    host: &Poset,
    values: &[i64],
    dim: usize,
    direction: Direction,
) -> Result<Vec<i64>, IncidenceError> {
    let n = host.len();
    check_len(values, n * dim)?;
    let mut out = vec![0i64; n * dim];
    for x in 0..n {
        let range = match direction {
            Direction::Down => host.down(x),
            Direction::Up => host.up(x),
        };
        for c in range.iter() {
            for k in 0..dim {
                out[x * dim + k] = out[x * dim + k]
                    .checked_add(values[c * dim + k])
                    .ok_or(IncidenceError::Overflow("a summation transform"))?;
            }
        }
    }
    Ok(out)
}

/// Möbius inversion of [`sum_transform`]:
/// down: `f(x) = Σ_{c ⪯ x} g(c) μ(c, x)`; up: `f(x) = Σ_{c ⪰ x} μ(x, c) g(c)`.
pub fn mobius_invert(
    mu: &IncidenceFunction,
    values: &[i64],
    dim: usize,
    direction: Direction,
) -> Result<Vec<i64>, IncidenceError> {
    let host = mu.host();
    let n = host.len();
    check_len(values, n * dim)?;
    let mut out = vec![0i64; n * dim];
    let overflow = || IncidenceError::Overflow("a Möbius inversion");
    match direction {
        Direction::Down => {
            for c in 0..n {
                for (x, m) in mu.row(c) {
                    if m == 0 {
                        continue;
                    }
                    for k in 0..dim {
                        let term = values[c * dim + k].checked_mul(m).ok_or_else(overflow)?;
                        out[x * dim + k] =
                            out[x * dim + k].checked_add(term).ok_or_else(overflow)?;
                    }
                }
            }
        }
        Direction::Up => {
            for x in 0..n {
                for (c, m) in mu.row(x) {
                    if m == 0 {
                        continue;
                    }
                    for k in 0..dim {
                        let term = values[c * dim + k].checked_mul(m).ok_or_else(overflow)?;
                        out[x * dim + k] =
                            out[x * dim + k].checked_add(term).ok_or_else(overflow)?;
                    }
                }
            }
        }
    }
    Ok(out)
}

fn check_len(values: &[i64], expected: usize) -> Result<(), IncidenceError> {
    if values.len() != expected {
        return Err(IncidenceError::LengthMismatch {
            expected,
            got: values.len(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::PairMode;

    fn chain3() -> Arc<Poset> {
        Arc::new(
            Poset::build(
                &["0", "m", "1"],
                &[("0", "m"), ("m", "1")],
                PairMode::Covers,
            )
            .unwrap(),
        )
    }

    fn diamond() -> Arc<Poset> {
        Arc::new(
            Poset::build(
                &["0", "a", "b", "1"],
                &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
                PairMode::Covers,
            )
            .unwrap(),
        )
    }

    #[test]
    fn zeta_squared_counts_interval() {
        let p = chain3();
        let z = IncidenceFunction::zeta(&p);
        assert_eq!(z.convolve(&z).unwrap().get(0, 2), 3);
    }

    #[test]
    fn delta_is_identity() {
        let p = diamond();
        let f = IncidenceFunction::from_fn(&p, |a, b| (3 * a + 7 * b) as i64 - 5);
        let d = IncidenceFunction::delta(&p);
        assert_eq!(d.convolve(&f).unwrap(), f);
        assert_eq!(f.convolve(&d).unwrap(), f);
    }

    #[test]
    fn mobius_small_values() {
        let mu = IncidenceFunction::mobius(&chain3()).unwrap();
        assert_eq!(mu.get(0, 2), 0);
        assert_eq!(mu.get(0, 1), -1);
        let p = diamond();
        let mu = IncidenceFunction::mobius(&p).unwrap();
        assert_eq!(mu.get(0, 3), 1);
        assert_eq!(mu.get(1, 2), 0);
        let z = IncidenceFunction::zeta(&p);
        assert_eq!(z.convolve(&mu).unwrap(), IncidenceFunction::delta(&p));
    }

    #[test]
    fn host_mismatch() {
        let f = IncidenceFunction::zeta(&chain3());
        let g = IncidenceFunction::zeta(&diamond());
        assert_eq!(f.convolve(&g).unwrap_err(), IncidenceError::HostMismatch);
    }

    #[test]
    fn inversion_on_diamond() {
        let p = diamond();
        let mu = IncidenceFunction::mobius(&p).unwrap();
        let g = sum_transform(&p, &[1, 1, 1, 1], 1, Direction::Down).unwrap();
        assert_eq!(g, vec![1, 2, 2, 4]);
        assert_eq!(
            mobius_invert(&mu, &g, 1, Direction::Down).unwrap(),
            vec![1, 1, 1, 1]
        );
        let f = mobius_invert(&mu, &[1, 0, 0, 0], 1, Direction::Down).unwrap();
        assert_eq!(f, vec![1, -1, -1, 1]);
        assert_eq!(
            mobius_invert(&mu, &[0; 4], 1, Direction::Up).unwrap(),
            vec![0; 4]
        );
    }

    #[test]
    fn overflow_is_reported() {
        let p = chain3();
        let f = IncidenceFunction::from_fn(&p, |_, _| i64::MAX);
        assert!(matches!(f.convolve(&f), Err(IncidenceError::Overflow(_))));
    }
}
