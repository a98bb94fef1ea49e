//! The depth triangle `H(n, k) = #{w ∈ S_n : dep(w) = k}`.
//!
//! Four independent routes produce the same triangle: brute force over `S_n`,
//! weighted Motzkin paths summed by area, and two continued fractions for
//! `F(t, z) = Σ_n Σ_k H(n, k) t^k z^n`:
//!
//! ```text
//! J-fraction: F = 1/(1 − b_0 − a_1c_1/(1 − b_1 − a_2c_2/(1 − …)))
//!             b_m = (2m+1) t^m z,  a_m c_m = m² t^{2m−1} z²
//! S-fraction: F = 1/(1 − c_0/(1 − c_1/(1 − c_2/(1 − …))))
//!             c_{2k} = (k+1) t^k z,  c_{2k+1} = (k+1) t^{k+1} z
//! ```
//!
//! Each level of the J-fraction carries a factor `z²` and each level of the
//! S-fraction a factor `z`, so only finitely many levels reach any given
//! coefficient. Level `m` is evaluated in the box it can actually influence.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::motzkin::{enumerate_paths_with_prefix, feasible_prefixes, PathError};
use crate::permutation::{depth_of, enumerate_sn_with_first, PermutationError};
use crate::series::{default_t_cap, TruncatedSeries};
use crate::Guard;

/// Default largest `n` for [`table_brute`].
pub const BRUTE_CEILING: usize = 9;
/// Default largest `n` for [`table_motzkin`].
pub const MOTZKIN_CEILING: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistributionError {
    #[error("{method} tables are limited to n ≤ {ceiling} (asked for {requested}); pass an override to proceed")]
    Ceiling {
        method: Method,
        requested: usize,
        ceiling: usize,
    },
    #[error("max-depth count is defined for n ≥ 1")]
    EmptyGroup,
    #[error("need n_max ≥ {required} to fit and verify the depth-{k} polynomial (got {n_max})")]
    NotEnoughData { k: usize, n_max: usize, required: usize },
    #[error("depth-{k} polynomial predicts {predicted} at n = {n}, table has {actual}")]
    PolynomialMismatch {
        k: usize,
        n: usize,
        predicted: BigInt,
        actual: BigInt,
    },
    #[error("depth-{k} polynomial has leading coefficient {leading}, expected 1")]
    NotMonic { k: usize, leading: BigInt },
    #[error("negative coefficient {value} at (n = {n}, k = {k})")]
    NegativeCoefficient { n: usize, k: usize, value: BigInt },
    #[error(transparent)]
    Permutation(#[from] PermutationError),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Motzkin,
    JFraction,
    SFraction,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Brute,
        Method::Motzkin,
        Method::JFraction,
        Method::SFraction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Motzkin => "motzkin",
            Method::JFraction => "jfrac",
            Method::SFraction => "sfrac",
        }
    }

    /// Default ceiling on `n`, if the method has one.
    pub fn ceiling(self) -> Option<usize> {
        match self {
            Method::Brute => Some(BRUTE_CEILING),
            Method::Motzkin => Some(MOTZKIN_CEILING),
            Method::JFraction | Method::SFraction => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?} (expected brute, motzkin, jfrac or sfrac)"))
    }
}

/// Rows `H(n, 0..=⌊n²/4⌋)` for `n = 0..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthTable {
    pub method: Method,
    rows: Vec<Vec<BigUint>>,
}

impl DepthTable {
    /// Wraps raw rows, padding or trimming each to length `⌊n²/4⌋ + 1`.
    ///
    /// Panics if a row has a nonzero entry beyond the maximal depth.
    fn from_rows(method: Method, mut rows: Vec<Vec<BigUint>>) -> Self {
        for (n, row) in rows.iter_mut().enumerate() {
            let len = max_depth(n) as usize + 1;
            assert!(
                row.iter().skip(len).all(Zero::is_zero),
                "{method}: row {n} has depth beyond ⌊n²/4⌋"
            );
            row.resize(len, BigUint::zero());
        }
        DepthTable { method, rows }
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    pub fn row(&self, n: usize) -> &[BigUint] {
        &self.rows[n]
    }

    /// Largest `n` in the table.
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, n: usize, k: usize) -> BigUint {
        self.rows
            .get(n)
            .and_then(|r| r.get(k))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows[n].iter().sum()
    }

    /// First `(n, k)` where the two tables disagree, over their common rows.
    pub fn first_divergence(&self, other: &DepthTable) -> Option<(usize, usize)> {
        self.rows
            .iter()
            .zip(&other.rows)
            .enumerate()
            .find_map(|(n, (a, b))| {
                (0..a.len().max(b.len()))
                    .find(|&k| a.get(k) != b.get(k))
                    .map(|k| (n, k))
            })
    }

    /// Whether the tables agree on their common rows.
    pub fn agrees_with(&self, other: &DepthTable) -> bool {
        self.first_divergence(other).is_none()
    }

    /// Positions `(n, k)` with `0 ≤ k ≤ ⌊n²/4⌋` and `H(n, k) = 0`.
    pub fn interior_zeros(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, c)| c.is_zero())
                    .map(move |(k, _)| (n, k))
            })
            .collect()
    }
}

/// `⌊n²/4⌋`, the largest depth in `S_n`.
pub fn max_depth(n: usize) -> u64 {
    (n as u64 * n as u64) / 4
}

/// Number of permutations of maximal depth: `(k!)²` for `n = 2k`,
/// `n·(k!)²` for `n = 2k + 1`.
pub fn max_depth_count(n: usize) -> Result<BigUint, DistributionError> {
    if n == 0 {
        return Err(DistributionError::EmptyGroup);
    }
    let k = n / 2;
    let kf: BigUint = (1..=k).map(BigUint::from).product();
    let square = &kf * &kf;
    Ok(if n.is_multiple_of(2) { square } else { square * n })
}

fn method_guard(method: Method, n: usize, guard: Guard) -> Result<(), DistributionError> {
    match method.ceiling() {
        Some(ceiling) if guard == Guard::Enforced && n > ceiling => Err(DistributionError::Ceiling {
            method,
            requested: n,
            ceiling,
        }),
        _ => Ok(()),
    }
}

/// Tallies `depth(w)` over every `w ∈ S_n`, `n ≤ N`.
///
/// Each `S_n` is split into blocks by first entry and the blocks are counted
/// in parallel on the current rayon pool.
pub fn table_brute(n_max: usize, guard: Guard) -> Result<DepthTable, DistributionError> {
    method_guard(Method::Brute, n_max, guard)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    rows.push(vec![BigUint::one()]);
    for n in 1..=n_max {
        let len = max_depth(n) as usize + 1;
        let blocks = (1..=n)
            .into_par_iter()
            .map(|first| -> Result<Vec<u64>, PermutationError> {
                let mut counts = vec![0u64; len];
                for w in enumerate_sn_with_first(n, first, Guard::Overridden)? {
                    counts[depth_of(w.zero_based()) as usize] += 1;
                }
                Ok(counts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut row = vec![BigUint::zero(); len];
        for counts in blocks {
            for (slot, c) in row.iter_mut().zip(counts) {
                *slot += c;
            }
        }
        rows.push(row);
    }
    Ok(DepthTable::from_rows(Method::Brute, rows))
}

/// Sums `weight(p)` by `area(p)` over every Motzkin path of length `n ≤ N`.
pub fn table_motzkin(n_max: usize, guard: Guard) -> Result<DepthTable, DistributionError> {
    method_guard(Method::Motzkin, n_max, guard)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let len = max_depth(n) as usize + 1;
        let blocks = feasible_prefixes(n, 5)
            .into_par_iter()
            .map(|prefix| -> Result<Vec<BigUint>, PathError> {
                let mut small = vec![0u128; len];
                let mut big = vec![BigUint::zero(); len];
                for p in enumerate_paths_with_prefix(n, &prefix, Guard::Overridden)? {
                    let k = p.area() as usize;
                    match p.weight_u128().and_then(|w| small[k].checked_add(w)) {
                        Some(sum) => small[k] = sum,
                        None => big[k] += p.weight(),
                    }
                }
                Ok(big.into_iter().zip(small).map(|(b, s)| b + s).collect())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut row = vec![BigUint::zero(); len];
        for block in blocks {
            for (slot, c) in row.iter_mut().zip(block) {
                *slot += c;
            }
        }
        rows.push(row);
    }
    Ok(DepthTable::from_rows(Method::Motzkin, rows))
}

/// `F(t, z)` from the J-fraction, exact in the box `(z ≤ N, t ≤ K)`.
///
/// Writing `F_m = 1/(1 − b_m − a_{m+1}c_{m+1} F_{m+1})` with `F_0 = F`, the
/// factor in front of `F_m` is `z^{2m} t^{m²}`, so `F_m` is only needed in the
/// box `(N − 2m, K − m²)`. The deepest level used is
/// `min(⌊N/2⌋, ⌊√K⌋)`, below which the tail is `1`.
pub fn jfraction_series(z_order: usize, t_cap: usize) -> TruncatedSeries {
    let depth = (z_order / 2).min(t_cap.isqrt());
    let mut inner: Option<TruncatedSeries> = None;
    for m in (0..=depth).rev() {
        let zb = z_order - 2 * m;
        let tb = t_cap - m * m;
        let mut denom = TruncatedSeries::one(zb, tb);
        denom = denom
            .sub(&TruncatedSeries::monomial(2 * m + 1, m, 1, zb, tb))
            .expect("same box");
        let coupling = BigInt::from((m + 1) * (m + 1));
        let tail = match inner.take() {
            Some(f) => f.shifted_into(coupling, 2 * m + 1, 2, zb, tb),
            None => TruncatedSeries::monomial(coupling, 2 * m + 1, 2, zb, tb),
        };
        denom = denom.sub(&tail).expect("same box");
        inner = Some(denom.reciprocal().expect("constant term is 1"));
    }
    inner.expect("level 0 is always evaluated")
}

/// `t`-exponent of the S-fraction term `c_i`.
fn sfrac_exponent(i: usize) -> usize {
    i.div_ceil(2)
}

/// Integer factor of the S-fraction term `c_i`.
fn sfrac_factor(i: usize) -> usize {
    i / 2 + 1
}

/// `F(t, z)` from the S-fraction, exact in the box `(z ≤ N, t ≤ K)`.
///
/// With `G_i = 1/(1 − c_i G_{i+1})` and `F = G_0`, the factor in front of
/// `G_i` is `c_0 ⋯ c_{i−1}`, of order `z^i t^{e_0+…+e_{i−1}}`, so `G_i` is
/// evaluated in the box `(N − i, K − Σ_{j<i} e_j)`. Levels run up to `i = N`
/// (fewer if the `t` budget runs out first) and the tail beyond is `1`.
pub fn sfraction_series(z_order: usize, t_cap: usize) -> TruncatedSeries {
    // prefix[i] = e_0 + … + e_{i−1}
    let mut prefix = vec![0usize];
    let mut depth = 0;
    while depth < z_order {
        let next = prefix[depth] + sfrac_exponent(depth);
        if next > t_cap {
            break;
        }
        prefix.push(next);
        depth += 1;
    }
    // G_depth is the innermost level evaluated; G_{depth+1} := 1.
    let mut inner: Option<TruncatedSeries> = None;
    for i in (0..=depth).rev() {
        let zb = z_order - i;
        let tb = t_cap - prefix[i];
        let term = match inner.take() {
            Some(g) => g.shifted_into(sfrac_factor(i), sfrac_exponent(i), 1, zb, tb),
            None => TruncatedSeries::monomial(sfrac_factor(i), sfrac_exponent(i), 1, zb, tb),
        };
        let denom = TruncatedSeries::one(zb, tb).sub(&term).expect("same box");
        inner = Some(denom.reciprocal().expect("constant term is 1"));
    }
    inner.expect("level 0 is always evaluated")
}

fn table_from_series(method: Method, series: &TruncatedSeries) -> Result<DepthTable, DistributionError> {
    let rows = (0..=series.z_order())
        .map(|n| {
            series
                .row(n)
                .into_iter()
                .enumerate()
                .map(|(k, c)| match c.to_biguint() {
                    Some(v) => Ok(v),
                    None => Err(DistributionError::NegativeCoefficient { n, k, value: c }),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DepthTable::from_rows(method, rows))
}

/// The triangle for `n ≤ N` from the J-fraction.
pub fn table_jfrac(n_max: usize) -> Result<DepthTable, DistributionError> {
    let series = jfraction_series(n_max, default_t_cap(n_max));
    table_from_series(Method::JFraction, &series)
}

/// The triangle for `n ≤ N` from the S-fraction.
pub fn table_sfrac(n_max: usize) -> Result<DepthTable, DistributionError> {
    let series = sfraction_series(n_max, default_t_cap(n_max));
    table_from_series(Method::SFraction, &series)
}

/// Dispatches to the table builder for `method`.
pub fn table(method: Method, n_max: usize, guard: Guard) -> Result<DepthTable, DistributionError> {
    match method {
        Method::Brute => table_brute(n_max, guard),
        Method::Motzkin => table_motzkin(n_max, guard),
        Method::JFraction => table_jfrac(n_max),
        Method::SFraction => table_sfrac(n_max),
    }
}

/// `H(n, k)` for fixed `k` as `Σ_j a_j · C(n − k, j)`, valid for `n ≥ k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinomialPolynomial {
    pub k: usize,
    /// `a_0, …, a_k`.
    pub coefficients: Vec<BigInt>,
    /// Largest `n` at which the representation was checked against the table.
    pub verified_through: usize,
}

impl BinomialPolynomial {
    /// Value at `n`; meaningful for `n ≥ k`.
    pub fn evaluate(&self, n: usize) -> BigInt {
        let m = n.saturating_sub(self.k);
        let mut binom = BigInt::one();
        let mut total = BigInt::zero();
        for (j, a) in self.coefficients.iter().enumerate() {
            if j > 0 {
                // C(m, j) = C(m, j − 1) · (m − j + 1) / j
                if j > m {
                    break;
                }
                binom = binom * (m - j + 1) / j;
            }
            total += a * &binom;
        }
        total
    }
}

/// `H(n, k)` for `n = 0..=n_max`, computed modulo `t^{k+1}`.
pub fn fixed_depth_column(k: usize, n_max: usize) -> Vec<BigInt> {
    let series = jfraction_series(n_max, k);
    (0..=n_max).map(|n| series.coeff(n, k)).collect()
}

/// Forward differences `Δ^j s(0)` for `j = 0..=order`.
fn leading_differences(seq: &[BigInt], order: usize) -> Vec<BigInt> {
    let mut current = seq.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        out.push(current.first().cloned().unwrap_or_default());
        current = current.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    out
}

/// Extracts the binomial-basis polynomial for depth `k` and verifies it
/// against `H(n, k)` for every `k ≤ n ≤ n_max`.
pub fn fixed_depth_polynomial(k: usize, n_max: usize) -> Result<BinomialPolynomial, DistributionError> {
    let required = 2 * k + 3;
    if n_max < required {
        return Err(DistributionError::NotEnoughData { k, n_max, required });
    }
    let column = fixed_depth_column(k, n_max);
    let tail = &column[k..];
    let poly = BinomialPolynomial {
        k,
        coefficients: leading_differences(tail, k),
        verified_through: n_max,
    };
    for (offset, actual) in tail.iter().enumerate() {
        let predicted = poly.evaluate(k + offset);
        if &predicted != actual {
            return Err(DistributionError::PolynomialMismatch {
                k,
                n: k + offset,
                predicted,
                actual: actual.clone(),
            });
        }
    }
    let leading = poly.coefficients[k].clone();
    if !leading.is_one() {
        return Err(DistributionError::NotMonic { k, leading });
    }
    Ok(poly)
}

/// Coefficients of `z^0..z^{n_max}` in `(1 − z)^{k+1} · Σ_{n ≥ k} H(n, k) z^n`.
///
/// Polynomiality of `H(·, k)` of degree `k` means every entry past index
/// `2k` is zero.
pub fn denominator_residual(k: usize, n_max: usize) -> Vec<BigInt> {
    let column = fixed_depth_column(k, n_max);
    let series: Vec<BigInt> = column
        .into_iter()
        .enumerate()
        .map(|(n, c)| if n < k { BigInt::zero() } else { c })
        .collect();
    // binomial coefficients of (1 − z)^{k+1}
    let mut factor = vec![BigInt::one()];
    for _ in 0..=k {
        let mut next = vec![BigInt::zero(); factor.len() + 1];
        for (i, c) in factor.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        factor = next;
    }
    (0..=n_max)
        .map(|m| {
            factor
                .iter()
                .enumerate()
                .take_while(|(i, _)| *i <= m)
                .map(|(i, c)| c * &series[m - i])
                .sum()
        })
        .collect()
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}
