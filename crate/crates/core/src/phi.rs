//! The map from permutations to Motzkin paths and its fibers.
//!
//! Draw `1..=n` on a line with an arrow `i → w(i)` for every non-fixed point,
//! above the line when `w(i) > i` and below otherwise. Position `i` is a `U`
//! step when it starts a chain of arrows above and ends a chain below, a `D`
//! step when it ends a chain above and starts one below, and `H` otherwise.
//! The depth of `w` is the area of its path, and the fiber over a path `p`
//! has exactly `weight(p)` elements; [`enumerate_preimage`] builds them.

use num_bigint::BigUint;

use crate::motzkin::{MotzkinPath, Step};
use crate::permutation::{Permutation, PermutationError};
use crate::Guard;

/// Largest fiber [`enumerate_preimage`] materializes without an override.
pub const PREIMAGE_CEILING: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("position {position} has more than one outgoing arrow")]
    PositionReuse { position: usize },
    #[error("position {position} is not covered by the arrow diagram")]
    Uncovered { position: usize },
    #[error("string {string:?} has fewer than two positions")]
    ShortString { string: Vec<usize> },
    #[error("position {position} is outside 1..={n}")]
    OutOfRange { position: usize, n: usize },
    #[error(transparent)]
    Permutation(#[from] PermutationError),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PreimageError {
    #[error("fiber has {weight} permutations, above the ceiling of {ceiling}")]
    TooLarge { weight: BigUint, ceiling: u64 },
}

/// Step of `w` at each position.
pub fn phi(w: &Permutation) -> MotzkinPath {
    let map = w.zero_based();
    let inv = w.inverse();
    let inv = inv.zero_based();
    let steps = (0..map.len())
        .map(|i| {
            if inv[i] > i && map[i] > i {
                Step::Up
            } else if inv[i] < i && map[i] < i {
                Step::Down
            } else {
                Step::Horizontal
            }
        })
        .collect();
    MotzkinPath::new(steps).expect("phi always produces a balanced path")
}

/// `ar(φ(w))`; agrees with [`Permutation::depth`] for every `w`.
pub fn depth_via_path(w: &Permutation) -> u64 {
    phi(w).area()
}

/// `|φ⁻¹(p)|`, which is the weight of `p`.
pub fn preimage_count(p: &MotzkinPath) -> BigUint {
    p.weight()
}

/// Arrow diagram of a permutation, with 1-based positions.
///
/// An above-string is a maximal increasing chain `i → w(i) → …` of excedance
/// arrows; it starts at a `U` position and ends at a `D` position. A
/// below-string is a maximal decreasing chain from a `D` position to a `U`
/// position. Every other position is an interior node of exactly one string
/// or a fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ArrowDiagram {
    pub n: usize,
    pub above_strings: Vec<Vec<usize>>,
    pub below_strings: Vec<Vec<usize>>,
    pub fixed_points: Vec<usize>,
}

impl ArrowDiagram {
    /// Reads the permutation back off the strings, checking that every
    /// position has exactly one outgoing arrow (or is fixed).
    pub fn to_permutation(&self) -> Result<Permutation, DiagramError> {
        let n = self.n;
        let check = |pos: usize| {
            if pos == 0 || pos > n {
                Err(DiagramError::OutOfRange { position: pos, n })
            } else {
                Ok(pos - 1)
            }
        };
        let mut image: Vec<Option<usize>> = vec![None; n];
        let mut arrows = Vec::new();
        for string in self.above_strings.iter().chain(&self.below_strings) {
            if string.len() < 2 {
                return Err(DiagramError::ShortString {
                    string: string.clone(),
                });
            }
            for pair in string.windows(2) {
                arrows.push((check(pair[0])?, check(pair[1])?));
            }
        }
        for &f in &self.fixed_points {
            let i = check(f)?;
            arrows.push((i, i));
        }
        for (from, to) in arrows {
            if image[from].replace(to).is_some() {
                return Err(DiagramError::PositionReuse { position: from + 1 });
            }
        }
        let map = image
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or(DiagramError::Uncovered { position: i + 1 }))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Permutation::from_zero_based(map)?)
    }
}

/// Decomposes `w` into above-strings, below-strings and fixed points.
///
/// Strings are listed by increasing start position.
pub fn diagram(w: &Permutation) -> ArrowDiagram {
    let map = w.zero_based();
    let path = phi(w);
    let mut above = Vec::new();
    let mut below = Vec::new();
    let mut fixed = Vec::new();
    for (i, step) in path.steps().iter().enumerate() {
        match step {
            Step::Up => {
                let mut chain = vec![i + 1];
                let mut x = i;
                while map[x] > x {
                    x = map[x];
                    chain.push(x + 1);
                }
                above.push(chain);
            }
            Step::Down => {
                let mut chain = vec![i + 1];
                let mut x = i;
                while map[x] < x {
                    x = map[x];
                    chain.push(x + 1);
                }
                below.push(chain);
            }
            Step::Horizontal if map[i] == i => fixed.push(i + 1),
            Step::Horizontal => {}
        }
    }
    ArrowDiagram {
        n: w.len(),
        above_strings: above,
        below_strings: below,
        fixed_points: fixed,
    }
}

/// The choice structure of a fiber `φ⁻¹(p)`.
///
/// A choice vector has one entry per `D` step (left to right: which open
/// above-string ends there, oldest first), then one per `U` step (right to
/// left: which open below-string ends there, oldest first), then one per `H`
/// step (left to right: `0` = fixed point, `1..=h` = join an open
/// above-string, `h+1..=2h` = join an open below-string). The radices multiply
/// to `weight(p)`, and distinct vectors give distinct permutations.
#[derive(Debug, Clone)]
pub struct FiberChoices {
    path: MotzkinPath,
    radices: Vec<usize>,
    downs: Vec<usize>,
    ups_rtl: Vec<usize>,
    flats: Vec<usize>,
}

impl FiberChoices {
    pub fn new(path: &MotzkinPath) -> Self {
        let heights = path.heights();
        let steps = path.steps();
        let downs: Vec<usize> = (0..steps.len()).filter(|&i| steps[i] == Step::Down).collect();
        let ups_rtl: Vec<usize> = (0..steps.len())
            .rev()
            .filter(|&i| steps[i] == Step::Up)
            .collect();
        let flats: Vec<usize> = (0..steps.len())
            .filter(|&i| steps[i] == Step::Horizontal)
            .collect();
        let radices = downs
            .iter()
            .chain(&ups_rtl)
            .map(|&i| heights[i])
            .chain(flats.iter().map(|&i| 2 * heights[i] + 1))
            .collect();
        FiberChoices {
            path: path.clone(),
            radices,
            downs,
            ups_rtl,
            flats,
        }
    }

    pub fn radices(&self) -> &[usize] {
        &self.radices
    }

    /// Builds the arrow diagram selected by `choices`.
    pub fn diagram(&self, choices: &[usize]) -> ArrowDiagram {
        assert_eq!(choices.len(), self.radices.len(), "choice vector length");
        let steps = self.path.steps();
        let n = steps.len();
        let (down_choice, rest) = choices.split_at(self.downs.len());
        let (up_choice, flat_choice) = rest.split_at(self.ups_rtl.len());

        let mut flat_at = vec![usize::MAX; n];
        for (&i, &c) in self.flats.iter().zip(flat_choice) {
            flat_at[i] = c;
        }
        let heights = self.path.heights();

        let mut above = Vec::new();
        let mut open: Vec<Vec<usize>> = Vec::new();
        let mut downs = down_choice.iter();
        for (i, step) in steps.iter().enumerate() {
            match step {
                Step::Up => open.push(vec![i + 1]),
                Step::Horizontal => {
                    let c = flat_at[i];
                    if (1..=heights[i]).contains(&c) {
                        open[c - 1].push(i + 1);
                    }
                }
                Step::Down => {
                    let mut s = open.remove(*downs.next().unwrap());
                    s.push(i + 1);
                    above.push(s);
                }
            }
        }

        let mut below = Vec::new();
        let mut open: Vec<Vec<usize>> = Vec::new();
        let mut ups = up_choice.iter();
        for (i, step) in steps.iter().enumerate().rev() {
            match step {
                Step::Down => open.push(vec![i + 1]),
                Step::Horizontal => {
                    let c = flat_at[i];
                    let h = heights[i];
                    if c > h {
                        open[c - h - 1].push(i + 1);
                    }
                }
                Step::Up => {
                    let mut s = open.remove(*ups.next().unwrap());
                    s.push(i + 1);
                    below.push(s);
                }
            }
        }

        let fixed = self
            .flats
            .iter()
            .filter(|&&i| flat_at[i] == 0)
            .map(|&i| i + 1)
            .collect();
        ArrowDiagram {
            n,
            above_strings: above,
            below_strings: below,
            fixed_points: fixed,
        }
    }

    /// The permutation selected by `choices`.
    ///
    /// Panics if the assembled diagram is not a bijection, which would mean
    /// the construction itself is broken.
    pub fn permutation(&self, choices: &[usize]) -> Permutation {
        let d = self.diagram(choices);
        d.to_permutation()
            .unwrap_or_else(|e| panic!("preimage assembly for {} produced {d:?}: {e}", self.path))
    }
}

/// Odometer over choice vectors, last component fastest.
#[derive(Debug, Clone)]
pub struct Preimages {
    choices: FiberChoices,
    counter: Option<Vec<usize>>,
    frozen: usize,
}

impl Preimages {
    /// Restricts the stream to choice vectors whose first component is
    /// `leading`; the blocks for `0..radices[0]` partition the full stream.
    pub fn with_leading_choice(mut self, leading: usize) -> Self {
        match self.choices.radices.first() {
            Some(&r) if leading < r => {
                if let Some(c) = self.counter.as_mut() {
                    c.iter_mut().for_each(|x| *x = 0);
                    c[0] = leading;
                }
                self.frozen = 1;
            }
            _ => self.counter = None,
        }
        self
    }
}

impl Iterator for Preimages {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let counter = self.counter.as_mut()?;
        let out = self.choices.permutation(counter);
        let radices = &self.choices.radices;
        let mut i = counter.len();
        loop {
            if i <= self.frozen {
                self.counter = None;
                break;
            }
            i -= 1;
            counter[i] += 1;
            if counter[i] < radices[i] {
                break;
            }
            counter[i] = 0;
        }
        Some(out)
    }
}

/// Every permutation `w` with `φ(w) = p`, in canonical choice order.
pub fn enumerate_preimage(p: &MotzkinPath, guard: Guard) -> Result<Preimages, PreimageError> {
    let weight = p.weight();
    if guard == Guard::Enforced && weight > BigUint::from(PREIMAGE_CEILING) {
        return Err(PreimageError::TooLarge {
            weight,
            ceiling: PREIMAGE_CEILING,
        });
    }
    let choices = FiberChoices::new(p);
    let counter = vec![0; choices.radices.len()];
    Ok(Preimages {
        choices,
        counter: Some(counter),
        frozen: 0,
    })
}
