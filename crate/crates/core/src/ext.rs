use std::fmt;
use std::str::FromStr;

/// A natural number or `∞`. `Fin(_) < Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtNat {
    Fin(u64),
    Inf,
}

impl ExtNat {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtNat::Fin(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            ExtNat::Fin(v) => Some(v),
            ExtNat::Inf => None,
        }
    }

    /// `self - rhs`, with `∞ - n = ∞`. Panics when `self < rhs`.
    pub fn minus(self, rhs: u64) -> ExtNat {
        match self {
            ExtNat::Fin(v) => ExtNat::Fin(v.checked_sub(rhs).expect("ExtNat underflow")),
            ExtNat::Inf => ExtNat::Inf,
        }
    }

    pub fn plus(self, rhs: u64) -> ExtNat {
        match self {
            ExtNat::Fin(v) => ExtNat::Fin(v + rhs),
            ExtNat::Inf => ExtNat::Inf,
        }
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        ExtNat::Fin(v)
    }
}

impl PartialEq<u64> for ExtNat {
    fn eq(&self, other: &u64) -> bool {
        *self == ExtNat::Fin(*other)
    }
}

impl PartialOrd<u64> for ExtNat {
    fn partial_cmp(&self, other: &u64) -> Option<std::cmp::Ordering> {
        Some(self.cmp(&ExtNat::Fin(*other)))
    }
}

impl fmt::Display for ExtNat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtNat::Fin(v) => write!(f, "{v}"),
            ExtNat::Inf => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseExtNatError(pub String);

impl fmt::Display for ParseExtNatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` is neither a natural number nor `inf`", self.0)
    }
}

impl std::error::Error for ParseExtNatError {}

impl FromStr for ExtNat {
    type Err = ParseExtNatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" {
            return Ok(ExtNat::Inf);
        }
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseExtNatError(s.to_string()));
        }
        t.parse::<u64>()
            .map(ExtNat::Fin)
            .map_err(|_| ParseExtNatError(s.to_string()))
    }
}

/// Parses a plain natural number with the same error type as [`ExtNat`].
pub fn parse_nat(s: &str) -> Result<u64, ParseExtNatError> {
    match s.parse::<ExtNat>()? {
        ExtNat::Fin(v) => Ok(v),
        ExtNat::Inf => Err(ParseExtNatError(s.to_string())),
    }
}
