//! Permutations in one-line notation and the depth statistic.
//!
//! Values are 1-based everywhere outside this module: `w(1), ..., w(n)` is a
//! rearrangement of `1..=n`. Internally the image is stored 0-based.

use std::fmt;
use std::str::FromStr;

use crate::{CeilingExceeded, Guard};

/// Largest `n` for which [`enumerate_sn`] runs without an override.
pub const ENUMERATION_CEILING: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermutationError {
    #[error("token {token:?} is not a positive integer")]
    NotAnInteger { token: String },
    #[error("value {value} appears more than once")]
    RepeatedValue { value: usize },
    #[error("value {value} is outside 1..={n}")]
    OutOfRange { value: usize, n: usize },
    #[error("digit string of length {len} is ambiguous; separate entries with commas or spaces")]
    AmbiguousDigitString { len: usize },
    #[error(transparent)]
    Ceiling(#[from] CeilingExceeded),
}

/// A bijection on `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-based one-line notation.
    pub fn from_one_line(values: &[usize]) -> Result<Self, PermutationError> {
        let n = values.len();
        let mut seen = vec![false; n];
        let mut map = Vec::with_capacity(n);
        for &value in values {
            if value == 0 || value > n {
                return Err(PermutationError::OutOfRange { value, n });
            }
            if std::mem::replace(&mut seen[value - 1], true) {
                return Err(PermutationError::RepeatedValue { value });
            }
            map.push(value - 1);
        }
        Ok(Permutation { map })
    }

    /// Builds a permutation from a 0-based image, validating bijectivity.
    pub fn from_zero_based(map: Vec<usize>) -> Result<Self, PermutationError> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &value in &map {
            if value >= n {
                return Err(PermutationError::OutOfRange { value: value + 1, n });
            }
            if std::mem::replace(&mut seen[value], true) {
                return Err(PermutationError::RepeatedValue { value: value + 1 });
            }
        }
        Ok(Permutation { map })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { map: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// `w(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.map[i - 1] + 1
    }

    /// One-line notation, 1-based.
    pub fn one_line(&self) -> Vec<usize> {
        self.map.iter().map(|&v| v + 1).collect()
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { map: inv }
    }

    /// Composition `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            map: other.map.iter().map(|&v| self.map[v]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Sum of `w(i) − i` over the excedances `w(i) > i`.
    pub fn depth(&self) -> u64 {
        depth_of(&self.map)
    }

    /// `Σ |w(i) − i|`; always twice the depth.
    pub fn total_displacement(&self) -> u64 {
        self.map
            .iter()
            .enumerate()
            .map(|(i, &v)| v.abs_diff(i) as u64)
            .sum()
    }
}

pub(crate) fn depth_of(map: &[usize]) -> u64 {
    map.iter()
        .enumerate()
        .filter(|&(i, &v)| v > i)
        .map(|(i, &v)| (v - i) as u64)
        .sum()
}

/// Parses one-line notation.
///
/// Accepts whitespace- or comma-separated integers, or a contiguous digit
/// string when every entry is a single digit (`n ≤ 9`).
pub fn parse_permutation(text: &str) -> Result<Permutation, PermutationError> {
    let text = text.trim();
    let separated = text.contains(|c: char| c == ',' || c.is_whitespace());
    let values = if separated {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| PermutationError::NotAnInteger {
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        if let Some(bad) = text.chars().find(|c| !c.is_ascii_digit()) {
            return Err(PermutationError::NotAnInteger {
                token: bad.to_string(),
            });
        }
        if text.len() > 9 {
            return Err(PermutationError::AmbiguousDigitString { len: text.len() });
        }
        text.bytes().map(|b| (b - b'0') as usize).collect()
    };
    Permutation::from_one_line(&values)
}

impl FromStr for Permutation {
    type Err = PermutationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_permutation(s)
    }
}

/// Digit-string form for `n ≤ 9`, comma-separated otherwise.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let compact = self.len() <= 9;
        for (i, v) in self.one_line().into_iter().enumerate() {
            if i > 0 && !compact {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Lexicographic stream over `S_n`, optionally restricted to a fixed first entry.
#[derive(Debug, Clone)]
pub struct Permutations {
    current: Option<Vec<usize>>,
    pinned_first: bool,
}

impl Permutations {
    fn starting_at(start: Vec<usize>, pinned_first: bool) -> Self {
        Permutations {
            current: Some(start),
            pinned_first,
        }
    }
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let current = self.current.as_mut()?;
        let out = Permutation {
            map: current.clone(),
        };
        let floor = usize::from(self.pinned_first).min(current.len());
        if !next_lexicographic(&mut current[floor..]) {
            self.current = None;
        }
        Some(out)
    }
}

/// Advances `seq` to its lexicographic successor; `false` when it was the last.
fn next_lexicographic(seq: &mut [usize]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let Some(pivot) = (0..seq.len() - 1).rev().find(|&i| seq[i] < seq[i + 1]) else {
        return false;
    };
    let succ = (pivot + 1..seq.len())
        .rev()
        .find(|&j| seq[j] > seq[pivot])
        .expect("a larger element exists right of the pivot");
    seq.swap(pivot, succ);
    seq[pivot + 1..].reverse();
    true
}

/// All `n!` permutations of `S_n` in lexicographic order of one-line notation.
///
/// Refuses `n > ENUMERATION_CEILING` unless the guard is overridden.
pub fn enumerate_sn(n: usize, guard: Guard) -> Result<Permutations, PermutationError> {
    guard.check(n, ENUMERATION_CEILING)?;
    Ok(Permutations::starting_at((0..n).collect(), false))
}

/// The lexicographic block of `S_n` whose first entry is `first` (1-based).
///
/// The blocks for `first = 1..=n` partition [`enumerate_sn`] in order.
pub fn enumerate_sn_with_first(
    n: usize,
    first: usize,
    guard: Guard,
) -> Result<Permutations, PermutationError> {
    guard.check(n, ENUMERATION_CEILING)?;
    if first == 0 || first > n {
        return Err(PermutationError::OutOfRange { value: first, n });
    }
    let mut start = vec![first - 1];
    start.extend((0..n).filter(|&v| v != first - 1));
    Ok(Permutations::starting_at(start, true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn parses_digit_string() {
        let w = perm("3715246");
        assert_eq!(w.one_line(), vec![3, 7, 1, 5, 2, 4, 6]);
        assert_eq!(w.apply(2), 7);
        assert_eq!(perm("1"), Permutation::identity(1));
    }

    #[test]
    fn parses_separated_forms() {
        assert_eq!(perm("3, 7 1,5 2 4 6"), perm("3715246"));
        let big = perm("10,1,2,3,4,5,6,7,8,9");
        assert_eq!(big.len(), 10);
        assert_eq!(big.to_string(), "10,1,2,3,4,5,6,7,8,9");
        assert_eq!(perm("").len(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            parse_permutation("3,3,1"),
            Err(PermutationError::RepeatedValue { value: 3 })
        );
        assert_eq!(
            parse_permutation("1,4"),
            Err(PermutationError::OutOfRange { value: 4, n: 2 })
        );
        assert!(matches!(
            parse_permutation("1,x"),
            Err(PermutationError::NotAnInteger { .. })
        ));
        assert_eq!(
            parse_permutation("1234567891"),
            Err(PermutationError::AmbiguousDigitString { len: 10 })
        );
        assert!(parse_permutation("12a").is_err());
    }

    #[test]
    fn inverse_examples() {
        // w(3)=1, w(5)=2, w(1)=3, w(6)=4, w(4)=5, w(7)=6, w(2)=7
        assert_eq!(perm("3715246").inverse(), perm("3516472"));
        assert_eq!(perm("21").inverse(), perm("21"));
        assert!(Permutation::identity(5).inverse().is_identity());
        let w = perm("3715246");
        assert!(w.compose(&w.inverse()).is_identity());
    }

    #[test]
    fn depth_examples() {
        assert_eq!(perm("3715246").depth(), 8);
        assert_eq!(perm("3542176").depth(), 7);
        assert_eq!(Permutation::identity(6).depth(), 0);
        assert_eq!(perm("3715246").total_displacement(), 16);
        assert_eq!(perm("4321").total_displacement(), 8);
        assert_eq!(Permutation::identity(4).total_displacement(), 0);
    }

    #[test]
    fn enumeration_order_and_counts() {
        let s0: Vec<_> = enumerate_sn(0, Guard::Enforced).unwrap().collect();
        assert_eq!(s0, vec![Permutation::identity(0)]);
        let s3: Vec<String> = enumerate_sn(3, Guard::Enforced)
            .unwrap()
            .map(|w| w.to_string())
            .collect();
        assert_eq!(s3, ["123", "132", "213", "231", "312", "321"]);
        assert_eq!(enumerate_sn(8, Guard::Enforced).unwrap().count(), 40320);
    }

    #[test]
    fn first_entry_blocks_partition_the_stream() {
        let n = 5;
        let all: Vec<_> = enumerate_sn(n, Guard::Enforced).unwrap().collect();
        let blocks: Vec<_> = (1..=n)
            .flat_map(|f| enumerate_sn_with_first(n, f, Guard::Enforced).unwrap())
            .collect();
        assert_eq!(all, blocks);
        assert_eq!(
            enumerate_sn_with_first(1, 1, Guard::Enforced).unwrap().count(),
            1
        );
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(matches!(
            enumerate_sn(13, Guard::Enforced),
            Err(PermutationError::Ceiling(_))
        ));
        assert!(enumerate_sn(13, Guard::Overridden).is_ok());
    }
}
