//! Exact distribution of permutation depth.
//!
//! The depth of a permutation `w` is `Σ_{w(i) > i} (w(i) − i)`, half of its
//! total displacement `Σ |w(i) − i|`. This crate computes the triangle
//! `H(n, k) = #{w ∈ S_n : dep(w) = k}` in four independent ways:
//!
//! * brute force over `S_n` ([`distribution::table_brute`]),
//! * weighted Motzkin paths by area, using the map [`phi::phi`] from
//!   permutations to paths ([`distribution::table_motzkin`]),
//! * the J-fraction and the S-fraction for the bivariate generating function
//!   `F(t, z) = Σ_n Σ_{w ∈ S_n} t^{dep(w)} z^n`, evaluated with exact
//!   truncated series arithmetic ([`distribution::table_jfrac`],
//!   [`distribution::table_sfrac`]).
//!
//! All counts are exact unbounded integers.

pub mod cli;
pub mod distribution;
pub mod motzkin;
pub mod permutation;
pub mod phi;
pub mod series;

pub use distribution::{BinomialPolynomial, DepthTable, Method};
pub use motzkin::{MotzkinPath, Step};
pub use permutation::Permutation;
pub use phi::ArrowDiagram;
pub use series::TruncatedSeries;

/// Whether a size ceiling on an exhaustive enumeration is enforced.
///
/// Factorial and exponential blowups are refused by default; research use can
/// opt out with [`Guard::Overridden`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Guard {
    #[default]
    Enforced,
    Overridden,
}

impl Guard {
    pub fn from_force(force: bool) -> Self {
        if force {
            Guard::Overridden
        } else {
            Guard::Enforced
        }
    }

    pub(crate) fn check(self, requested: usize, ceiling: usize) -> Result<(), CeilingExceeded> {
        match self {
            Guard::Enforced if requested > ceiling => Err(CeilingExceeded { requested, ceiling }),
            _ => Ok(()),
        }
    }
}

/// An enumeration was asked to exceed its configured ceiling without an override.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{requested} exceeds the ceiling of {ceiling} (pass an override to proceed)")]
pub struct CeilingExceeded {
    pub requested: usize,
    pub ceiling: usize,
}
