//! Distances between diagrams and between grid modules, and the search for a
//! matching whose product is closest to a target module.

mod bottleneck;
mod interleaving;
mod matching_distance;
mod search;

use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

pub use bottleneck::{bottleneck, bottleneck_value, Bottleneck, RealPoint};
pub use interleaving::{
    interleaves, interleaving_exact, interleaving_exact_with, Interleaving, DEFAULT_BUDGET,
};
pub use matching_distance::{matching_distance_estimate, restriction_barcode, Line, LineSampling};
pub use search::{
    enumerate_candidates, gamma_bar_search, score_matching, Objective, ObjectiveChoice,
    SearchConfig, SearchReport,
};

use crate::grid::GridError;
use crate::product::ProductError;

/// Exact rationals; every value in the pipeline is an integer or a ratio of small integers.
pub type Rational = Ratio<i64>;

#[derive(Error, Debug)]
pub enum DistanceError {
    #[error("budget exceeded: {what}")]
    BudgetExceeded {
        what: String,
        partial: Option<Box<SearchReport>>,
    },
    #[error("module has no explicit internal maps; exact interleaving needs them")]
    MissingStructure,
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error(transparent)]
    Product(#[from] ProductError),
}

/// A nonnegative distance value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distance {
    Finite(Rational),
    /// Strictly larger than the given value; the search was capped there.
    Above(Rational),
    Infinite,
}

impl Distance {
    pub fn zero() -> Self {
        Distance::Finite(Rational::from_integer(0))
    }

    pub fn from_int(v: i64) -> Self {
        Distance::Finite(Rational::from_integer(v))
    }

    pub fn finite(self) -> Option<Rational> {
        match self {
            Distance::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Product by a nonnegative weight.
    pub fn scale(self, w: Rational) -> Distance {
        match self {
            Distance::Finite(v) => Distance::Finite(v * w),
            Distance::Above(v) => Distance::Above(v * w),
            Distance::Infinite => Distance::Infinite,
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Distance::Finite(_) => 0,
            Distance::Above(_) => 1,
            Distance::Infinite => 2,
        }
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Distance::Finite(a), Distance::Finite(b))
            | (Distance::Above(a), Distance::Above(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(v) => write!(f, "{v}"),
            Distance::Above(v) => write!(f, ">{v}"),
            Distance::Infinite => write!(f, "inf"),
        }
    }
}
