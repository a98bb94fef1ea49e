//! Truncated bivariate power series in `t` and `z` with exact integer
//! coefficients.
//!
//! A series lives in a box `0 ≤ deg_z ≤ z_order`, `0 ≤ deg_t ≤ t_cap`; every
//! product term falling outside the box is discarded. Both degrees are
//! additive under multiplication, so truncation commutes with the ring
//! operations.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("series boxes differ: (z ≤ {left_z}, t ≤ {left_t}) vs (z ≤ {right_z}, t ≤ {right_t})")]
    BoxMismatch {
        left_z: usize,
        left_t: usize,
        right_z: usize,
        right_t: usize,
    },
    #[error("constant term is {0}, reciprocal needs exactly 1")]
    ConstantTermNotOne(BigInt),
}

/// Polynomial in `t` stored from its lowest nonzero degree.
///
/// Canonical: either empty, or the first and last stored coefficients are
/// nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct TPoly {
    low: usize,
    coeffs: Vec<BigInt>,
}

impl TPoly {
    fn from_dense(mut dense: Vec<BigInt>) -> Self {
        while dense.last().is_some_and(Zero::is_zero) {
            dense.pop();
        }
        let low = dense.iter().take_while(|c| c.is_zero()).count();
        dense.drain(..low);
        TPoly { low, coeffs: dense }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn high(&self) -> usize {
        self.low + self.coeffs.len() - 1
    }

    fn coeff(&self, k: usize) -> BigInt {
        k.checked_sub(self.low)
            .and_then(|i| self.coeffs.get(i))
            .cloned()
            .unwrap_or_default()
    }

    fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (i + self.low, c))
    }

    fn truncate(&self, cap: usize) -> TPoly {
        if self.is_zero() || self.low > cap {
            return TPoly::default();
        }
        let keep = (cap - self.low + 1).min(self.coeffs.len());
        TPoly::from_dense_at(self.low, self.coeffs[..keep].to_vec())
    }

    fn from_dense_at(low: usize, coeffs: Vec<BigInt>) -> TPoly {
        let mut p = TPoly::from_dense(coeffs);
        if !p.is_zero() {
            p.low += low;
        }
        p
    }
}

/// Dense accumulator for one `z`-row, covering `t`-degrees `0..=cap`.
struct RowAcc {
    dense: Vec<BigInt>,
}

impl RowAcc {
    fn new(cap: usize) -> Self {
        RowAcc {
            dense: vec![BigInt::zero(); cap + 1],
        }
    }

    fn add_poly(&mut self, p: &TPoly, negate: bool) {
        for (k, c) in p.terms() {
            if k < self.dense.len() {
                if negate {
                    self.dense[k] -= c;
                } else {
                    self.dense[k] += c;
                }
            }
        }
    }

    /// Adds `a · b`, discarding `t`-degrees beyond the cap.
    fn add_product(&mut self, a: &TPoly, b: &TPoly) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let cap = self.dense.len() - 1;
        if a.low + b.low > cap {
            return;
        }
        for (i, x) in a.terms() {
            if i + b.low > cap {
                break;
            }
            let top = (cap - i).min(b.high());
            for (j, y) in b.terms() {
                if j > top {
                    break;
                }
                self.dense[i + j] += x * y;
            }
        }
    }

    fn finish(self) -> TPoly {
        TPoly::from_dense(self.dense)
    }
}

/// Exact truncated series `Σ c(n, k) t^k z^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    z_order: usize,
    t_cap: usize,
    rows: Vec<TPoly>,
}

/// `⌊n²/4⌋`, the default `t` cap for `z`-order `n`.
pub fn default_t_cap(z_order: usize) -> usize {
    z_order * z_order / 4
}

impl TruncatedSeries {
    pub fn zero(z_order: usize, t_cap: usize) -> Self {
        TruncatedSeries {
            z_order,
            t_cap,
            rows: vec![TPoly::default(); z_order + 1],
        }
    }

    pub fn one(z_order: usize, t_cap: usize) -> Self {
        Self::monomial(1, 0, 0, z_order, t_cap)
    }

    /// `c · t^k · z^n`, or zero when the term falls outside the box.
    pub fn monomial(c: impl Into<BigInt>, k: usize, n: usize, z_order: usize, t_cap: usize) -> Self {
        let mut s = Self::zero(z_order, t_cap);
        let c = c.into();
        if n <= z_order && k <= t_cap && !c.is_zero() {
            s.rows[n] = TPoly {
                low: k,
                coeffs: vec![c],
            };
        }
        s
    }

    /// Builds a series from `(n, k, c)` triples, summing repeats and
    /// discarding anything outside the box.
    pub fn from_terms<I, C>(terms: I, z_order: usize, t_cap: usize) -> Self
    where
        I: IntoIterator<Item = (usize, usize, C)>,
        C: Into<BigInt>,
    {
        let mut dense: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); t_cap + 1]; z_order + 1];
        for (n, k, c) in terms {
            if n <= z_order && k <= t_cap {
                dense[n][k] += c.into();
            }
        }
        TruncatedSeries {
            z_order,
            t_cap,
            rows: dense.into_iter().map(TPoly::from_dense).collect(),
        }
    }

    pub fn z_order(&self) -> usize {
        self.z_order
    }

    pub fn t_cap(&self) -> usize {
        self.t_cap
    }

    /// Coefficient of `t^k z^n` (zero outside the box).
    pub fn coeff(&self, n: usize, k: usize) -> BigInt {
        self.rows.get(n).map(|r| r.coeff(k)).unwrap_or_default()
    }

    /// Coefficients of `z^n` as a dense vector in `t`, up to the last nonzero.
    pub fn row(&self, n: usize) -> Vec<BigInt> {
        match self.rows.get(n) {
            Some(r) if !r.is_zero() => (0..=r.high()).map(|k| r.coeff(k)).collect(),
            _ => Vec::new(),
        }
    }

    /// Nonzero terms as `(n, k, c)`, ordered by `n` then `k`.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, r)| r.terms().map(move |(k, c)| (n, k, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(TPoly::is_zero)
    }

    fn same_box(&self, other: &Self) -> Result<(), SeriesError> {
        if self.z_order == other.z_order && self.t_cap == other.t_cap {
            Ok(())
        } else {
            Err(SeriesError::BoxMismatch {
                left_z: self.z_order,
                left_t: self.t_cap,
                right_z: other.z_order,
                right_t: other.t_cap,
            })
        }
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self, SeriesError> {
        self.same_box(other)?;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc = RowAcc::new(self.t_cap);
                acc.add_poly(a, false);
                acc.add_poly(b, negate);
                acc.finish()
            })
            .collect();
        Ok(TruncatedSeries {
            z_order: self.z_order,
            t_cap: self.t_cap,
            rows,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            z_order: self.z_order,
            t_cap: self.t_cap,
            rows: self
                .rows
                .iter()
                .map(|r| TPoly {
                    low: r.low,
                    coeffs: r.coeffs.iter().map(|c| -c).collect(),
                })
                .collect(),
        }
    }

    /// Product truncated to the common box.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.same_box(other)?;
        let rows = (0..=self.z_order)
            .map(|n| {
                let mut acc = RowAcc::new(self.t_cap);
                for i in 0..=n {
                    acc.add_product(&self.rows[i], &other.rows[n - i]);
                }
                acc.finish()
            })
            .collect();
        Ok(TruncatedSeries {
            z_order: self.z_order,
            t_cap: self.t_cap,
            rows,
        })
    }

    /// Inverse within the box, for series with constant term exactly 1.
    ///
    /// Solved degree by degree in `z`: with `a = Σ a_n(t) z^n`, the
    /// reciprocal `r` satisfies `r_0 = 1/a_0` (as a power series in `t`) and
    /// `r_n = −r_0 · Σ_{j=1}^{n} a_j r_{n−j}`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let constant = self.coeff(0, 0);
        if !constant.is_one() {
            return Err(SeriesError::ConstantTermNotOne(constant));
        }
        let cap = self.t_cap;
        let a0 = &self.rows[0];
        let a0_is_one = a0.coeffs.len() == 1;
        let r0 = if a0_is_one {
            a0.clone()
        } else {
            invert_t_poly(a0, cap)
        };
        let mut rows = Vec::with_capacity(self.z_order + 1);
        rows.push(r0.clone());
        for n in 1..=self.z_order {
            let mut acc = RowAcc::new(cap);
            for j in 1..=n {
                acc.add_product(&self.rows[j], &rows[n - j]);
            }
            let sum = acc.finish();
            let row = if a0_is_one {
                sum
            } else {
                let mut acc = RowAcc::new(cap);
                acc.add_product(&r0, &sum);
                acc.finish()
            };
            rows.push(TPoly {
                low: row.low,
                coeffs: row.coeffs.into_iter().map(|c| -c).collect(),
            });
        }
        Ok(TruncatedSeries {
            z_order: self.z_order,
            t_cap: self.t_cap,
            rows,
        })
    }

    /// Restriction to a smaller box.
    pub fn truncate(&self, z_order: usize, t_cap: usize) -> Self {
        let z_order = z_order.min(self.z_order);
        let t_cap = t_cap.min(self.t_cap);
        TruncatedSeries {
            z_order,
            t_cap,
            rows: self.rows[..=z_order].iter().map(|r| r.truncate(t_cap)).collect(),
        }
    }

    /// `c · t^dt · z^dz · self`, placed in the box `(z_order, t_cap)`.
    ///
    /// Terms outside the target box are dropped; the caller is responsible
    /// for `self` covering every term that lands inside it.
    pub fn shifted_into(
        &self,
        c: impl Into<BigInt>,
        dt: usize,
        dz: usize,
        z_order: usize,
        t_cap: usize,
    ) -> Self {
        let c = c.into();
        let mut out = Self::zero(z_order, t_cap);
        if c.is_zero() {
            return out;
        }
        for (n, row) in self.rows.iter().enumerate() {
            let target = n + dz;
            if target > z_order {
                break;
            }
            if row.is_zero() {
                continue;
            }
            let shifted = TPoly {
                low: row.low + dt,
                coeffs: row.coeffs.iter().map(|x| x * &c).collect(),
            };
            out.rows[target] = shifted.truncate(t_cap);
        }
        out
    }

    /// `Σ_k c(n, k)`: the coefficient of `z^n` at `t = 1`.
    pub fn row_sum(&self, n: usize) -> BigInt {
        self.rows
            .get(n)
            .map(|r| r.coeffs.iter().sum())
            .unwrap_or_default()
    }
}

/// Inverse of a `t`-polynomial with constant term 1, truncated at `cap`.
fn invert_t_poly(a: &TPoly, cap: usize) -> TPoly {
    let mut inv = vec![BigInt::zero(); cap + 1];
    inv[0] = BigInt::one();
    for k in 1..=cap {
        let mut s = BigInt::zero();
        for j in 1..=k.min(a.high()) {
            let aj = a.coeff(j);
            if !aj.is_zero() {
                s += aj * &inv[k - j];
            }
        }
        inv[k] = -s;
    }
    TPoly::from_dense(inv)
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruncatedSeries(z ≤ {}, t ≤ {}; ", self.z_order, self.t_cap)?;
        let mut first = true;
        for (n, k, c) in self.terms() {
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            write!(f, "{}·t^{k}·z^{n}", c.abs())?;
        }
        if first {
            f.write_str("0")?;
        }
        f.write_str(")")
    }
}
