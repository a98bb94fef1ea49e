//! Motzkin paths, their area, step heights and weights.
//!
//! A path is a word over `U`, `H`, `D` whose `U`/`D` subword is balanced. The
//! weight of a path is the number of permutations that map onto it (see
//! [`crate::phi`]).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::{CeilingExceeded, Guard};

/// Largest length for which [`enumerate_paths`] runs without an override.
pub const ENUMERATION_CEILING: usize = 20;

/// Steps order as `U < H < D`, which fixes the enumeration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    Up,
    Horizontal,
    Down,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Horizontal => 'H',
            Step::Down => 'D',
        }
    }

    fn delta(self) -> isize {
        match self {
            Step::Up => 1,
            Step::Horizontal => 0,
            Step::Down => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PathError {
    #[error("illegal character {found:?} at position {position}")]
    IllegalCharacter { position: usize, found: char },
    #[error("path dips below the base line at position {position}")]
    PrefixBalance { position: usize },
    #[error("path ends at height {height} instead of 0 (length {position})")]
    TotalBalance { position: usize, height: usize },
    #[error(transparent)]
    Ceiling(#[from] CeilingExceeded),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MotzkinPath {
    steps: Vec<Step>,
}

impl MotzkinPath {
    /// Validates balance; error positions are 1-based.
    pub fn new(steps: Vec<Step>) -> Result<Self, PathError> {
        let mut height = 0usize;
        for (i, &step) in steps.iter().enumerate() {
            height = match step {
                Step::Up => height + 1,
                Step::Horizontal => height,
                Step::Down => height
                    .checked_sub(1)
                    .ok_or(PathError::PrefixBalance { position: i + 1 })?,
            };
        }
        if height != 0 {
            return Err(PathError::TotalBalance {
                position: steps.len(),
                height,
            });
        }
        Ok(MotzkinPath { steps })
    }

    /// `U^k D^k` for even `n = 2k`, `U^k H D^k` for odd `n = 2k + 1`: the
    /// unique path of maximal area `⌊n²/4⌋`.
    pub fn max_area(n: usize) -> Self {
        let k = n / 2;
        let mut steps = vec![Step::Up; k];
        if n % 2 == 1 {
            steps.push(Step::Horizontal);
        }
        steps.extend(std::iter::repeat_n(Step::Down, k));
        MotzkinPath { steps }
    }

    pub fn flat(n: usize) -> Self {
        MotzkinPath {
            steps: vec![Step::Horizontal; n],
        }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `Σ_{p_k = D} k − Σ_{p_i = U} i` with 1-based positions.
    pub fn area(&self) -> u64 {
        let mut down = 0u64;
        let mut up = 0u64;
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                Step::Up => up += i as u64 + 1,
                Step::Down => down += i as u64 + 1,
                Step::Horizontal => {}
            }
        }
        down - up
    }

    /// Area from vertical strips, with every strip doubled so that the
    /// triangular halves stay integral.
    pub fn geometric_area(&self) -> u64 {
        let mut level = 0u64;
        let mut doubled = 0u64;
        for step in &self.steps {
            match step {
                Step::Up => {
                    level += 1;
                    doubled += 2 * level - 1;
                }
                Step::Horizontal => doubled += 2 * level,
                Step::Down => {
                    doubled += 2 * level - 1;
                    level -= 1;
                }
            }
        }
        doubled / 2
    }

    /// Height of each step: the highest level the step touches.
    pub fn heights(&self) -> Vec<usize> {
        let mut level = 0usize;
        self.steps
            .iter()
            .map(|step| match step {
                Step::Up => {
                    level += 1;
                    level
                }
                Step::Horizontal => level,
                Step::Down => {
                    level -= 1;
                    level + 1
                }
            })
            .collect()
    }

    /// `h_i` for `U` and `D` steps, `2h_i + 1` for `H` steps.
    pub fn step_weights(&self) -> Vec<u64> {
        self.steps
            .iter()
            .zip(self.heights())
            .map(|(step, h)| match step {
                Step::Horizontal => 2 * h as u64 + 1,
                _ => h as u64,
            })
            .collect()
    }

    /// Product of the step weights; 1 for the empty path.
    pub fn weight(&self) -> BigUint {
        match self.weight_u128() {
            Some(w) => BigUint::from(w),
            None => self
                .step_weights()
                .into_iter()
                .fold(BigUint::from(1u32), |acc, w| acc * w),
        }
    }

    /// The weight when it fits in a `u128` (always true for length ≤ 34).
    pub fn weight_u128(&self) -> Option<u128> {
        self.step_weights()
            .into_iter()
            .try_fold(1u128, |acc, w| acc.checked_mul(w as u128))
    }
}

/// Parses a word over `U`, `D`, `H` (either case).
pub fn parse_path(text: &str) -> Result<MotzkinPath, PathError> {
    let steps = text
        .trim()
        .chars()
        .enumerate()
        .map(|(i, c)| match c.to_ascii_uppercase() {
            'U' => Ok(Step::Up),
            'H' => Ok(Step::Horizontal),
            'D' => Ok(Step::Down),
            _ => Err(PathError::IllegalCharacter {
                position: i + 1,
                found: c,
            }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    MotzkinPath::new(steps)
}

impl FromStr for MotzkinPath {
    type Err = PathError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_path(s)
    }
}

impl fmt::Display for MotzkinPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.steps
            .iter()
            .try_for_each(|s| fmt::Write::write_char(f, s.letter()))
    }
}

/// Lexicographic stream (`U < H < D`) of Motzkin paths with a fixed prefix.
#[derive(Debug, Clone)]
pub struct Paths {
    current: Option<Vec<Step>>,
    frozen: usize,
}

impl Iterator for Paths {
    type Item = MotzkinPath;

    fn next(&mut self) -> Option<MotzkinPath> {
        let steps = self.current.as_mut()?;
        let out = MotzkinPath {
            steps: steps.clone(),
        };
        if !advance(steps, self.frozen) {
            self.current = None;
        }
        Some(out)
    }
}

/// Fills `steps[from..]` with the smallest completion starting at `height`.
fn complete_smallest(steps: &mut [Step], from: usize, mut height: usize) {
    let n = steps.len();
    for (i, slot) in steps.iter_mut().enumerate().skip(from) {
        let remaining = n - i - 1;
        *slot = if height < remaining {
            Step::Up
        } else if height == remaining {
            Step::Horizontal
        } else {
            Step::Down
        };
        height = (height as isize + slot.delta()) as usize;
    }
}

/// Moves to the lexicographic successor, never touching `steps[..frozen]`.
fn advance(steps: &mut [Step], frozen: usize) -> bool {
    let n = steps.len();
    let mut heights = Vec::with_capacity(n + 1);
    heights.push(0isize);
    for s in steps.iter() {
        heights.push(heights.last().unwrap() + s.delta());
    }
    for i in (frozen..n).rev() {
        let before = heights[i];
        let remaining = (n - i - 1) as isize;
        let candidates: &[Step] = match steps[i] {
            Step::Up => &[Step::Horizontal, Step::Down],
            Step::Horizontal => &[Step::Down],
            Step::Down => &[],
        };
        for &cand in candidates {
            let after = before + cand.delta();
            if after >= 0 && after <= remaining {
                steps[i] = cand;
                complete_smallest(steps, i + 1, after as usize);
                return true;
            }
        }
    }
    false
}

/// Every Motzkin path of length `n`, lexicographic with `U < H < D`.
pub fn enumerate_paths(n: usize, guard: Guard) -> Result<Paths, PathError> {
    enumerate_paths_with_prefix(n, &[], guard)
}

/// The block of [`enumerate_paths`] whose paths begin with `prefix`.
///
/// Yields nothing if the prefix cannot be completed to a path of length `n`.
pub fn enumerate_paths_with_prefix(
    n: usize,
    prefix: &[Step],
    guard: Guard,
) -> Result<Paths, PathError> {
    guard.check(n, ENUMERATION_CEILING)?;
    let mut height = 0isize;
    let mut feasible = prefix.len() <= n;
    for &s in prefix {
        height += s.delta();
        feasible &= height >= 0;
    }
    feasible &= height <= (n as isize - prefix.len() as isize);
    if !feasible {
        return Ok(Paths {
            current: None,
            frozen: prefix.len(),
        });
    }
    let mut steps = vec![Step::Horizontal; n];
    steps[..prefix.len()].copy_from_slice(prefix);
    complete_smallest(&mut steps, prefix.len(), height as usize);
    Ok(Paths {
        current: Some(steps),
        frozen: prefix.len(),
    })
}

/// All feasible prefixes of the given length for paths of length `n`, in
/// enumeration order. Used to split the path stream into parallel blocks.
pub fn feasible_prefixes(n: usize, len: usize) -> Vec<Vec<Step>> {
    let len = len.min(n);
    let mut out = vec![(Vec::new(), 0usize)];
    for depth in 0..len {
        let remaining = n - depth - 1;
        out = out
            .into_iter()
            .flat_map(|(prefix, h)| {
                [Step::Up, Step::Horizontal, Step::Down]
                    .into_iter()
                    .filter_map(move |s| {
                        let next = h as isize + s.delta();
                        (next >= 0 && next as usize <= remaining).then(|| {
                            let mut p = prefix.clone();
                            p.push(s);
                            (p, next as usize)
                        })
                    })
            })
            .collect();
    }
    out.into_iter().map(|(p, _)| p).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> MotzkinPath {
        s.parse().unwrap()
    }

    fn motzkin_numbers(upto: usize) -> Vec<u64> {
        // M_n = M_{n-1} + Σ_{k=0}^{n-2} M_k M_{n-2-k}
        let mut m = vec![1u64];
        for n in 1..=upto {
            let mut next = m[n - 1];
            for k in 0..n.saturating_sub(1) {
                next += m[k] * m[n - 2 - k];
            }
            m.push(next);
        }
        m
    }

    #[test]
    fn parses_and_reports_positions() {
        assert_eq!(path("UUHDDUD").len(), 7);
        assert_eq!(path("uuhddud"), path("UUHDDUD"));
        assert!(path("").is_empty());
        assert_eq!(
            parse_path("DU"),
            Err(PathError::PrefixBalance { position: 1 })
        );
        assert_eq!(
            parse_path("UUD"),
            Err(PathError::TotalBalance {
                position: 3,
                height: 1
            })
        );
        assert_eq!(
            parse_path("UXD"),
            Err(PathError::IllegalCharacter {
                position: 2,
                found: 'X'
            })
        );
        assert_eq!(path("uhd").to_string(), "UHD");
    }

    #[test]
    fn area_examples() {
        assert_eq!(path("UUHUDDHDH").area(), 12);
        assert_eq!(path("UUHDDUD").area(), 7);
        assert_eq!(MotzkinPath::flat(5).area(), 0);
        assert_eq!(path("UUHUDDHDH").geometric_area(), 12);
        assert_eq!(path("UD").geometric_area(), 1);
        assert_eq!(path("UUDD").geometric_area(), 4);
    }

    #[test]
    fn heights_and_weights() {
        assert_eq!(path("UUHDDUD").heights(), vec![1, 2, 2, 2, 1, 1, 1]);
        assert_eq!(path("H").heights(), vec![0]);
        assert_eq!(path("UD").heights(), vec![1, 1]);
        assert_eq!(path("UUHDDUD").step_weights(), vec![1, 2, 5, 2, 1, 1, 1]);
        assert_eq!(
            path("UHDHUUUDHUDDHD").step_weights(),
            vec![1, 3, 1, 1, 1, 2, 3, 3, 5, 3, 3, 2, 3, 1]
        );
        assert_eq!(path("H").step_weights(), vec![1]);
        assert_eq!(path("UUHDDUD").weight(), BigUint::from(20u32));
        assert_eq!(path("UHDHUUUDHUDDHD").weight(), BigUint::from(14580u32));
        assert_eq!(path("").weight(), BigUint::from(1u32));
    }

    #[test]
    fn max_area_paths() {
        assert_eq!(MotzkinPath::max_area(4).to_string(), "UUDD");
        assert_eq!(MotzkinPath::max_area(5).to_string(), "UUHDD");
        for n in 0..12 {
            assert_eq!(MotzkinPath::max_area(n).area(), (n * n / 4) as u64);
        }
    }

    #[test]
    fn enumeration_matches_motzkin_numbers() {
        let m = motzkin_numbers(12);
        for (n, &expected) in m.iter().enumerate() {
            let count = enumerate_paths(n, Guard::Enforced).unwrap().count() as u64;
            assert_eq!(count, expected, "n = {n}");
        }
        assert_eq!(m[7], 127);
    }

    #[test]
    fn enumeration_is_strictly_increasing() {
        let paths: Vec<_> = enumerate_paths(8, Guard::Enforced).unwrap().collect();
        assert!(paths.windows(2).all(|w| w[0] < w[1]));
        let n4: Vec<String> = enumerate_paths(4, Guard::Enforced)
            .unwrap()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(
            n4,
            ["UUDD", "UHHD", "UHDH", "UDUD", "UDHH", "HUHD", "HUDH", "HHUD", "HHHH"]
        );
    }

    #[test]
    fn prefix_blocks_partition_the_stream() {
        let n = 9;
        let all: Vec<_> = enumerate_paths(n, Guard::Enforced).unwrap().collect();
        let blocks: Vec<_> = feasible_prefixes(n, 3)
            .iter()
            .flat_map(|p| enumerate_paths_with_prefix(n, p, Guard::Enforced).unwrap())
            .collect();
        assert_eq!(all, blocks);
        assert_eq!(
            enumerate_paths_with_prefix(3, &[Step::Down], Guard::Enforced)
                .unwrap()
                .count(),
            0
        );
    }

    #[test]
    fn ceiling_is_enforced() {
        assert!(enumerate_paths(21, Guard::Enforced).is_err());
        assert!(enumerate_paths(21, Guard::Overridden).is_ok());
    }
}
