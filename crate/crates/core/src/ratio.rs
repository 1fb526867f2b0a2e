use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

/// A non-negative dimensionless ratio that may be unbounded.
///
/// Speedups and energy advantages become unbounded when their denominator
/// vanishes (an accelerable fraction of exactly one, zero conversion cost).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Unbounded,
}

impl Ratio {
    /// `num / den`, with a zero denominator mapped to [`Ratio::Unbounded`].
    pub fn from_quotient(num: f64, den: f64) -> Self {
        if den == 0.0 {
            Ratio::Unbounded
        } else {
            Ratio::Finite(num / den)
        }
    }

    pub fn finite(self) -> Option<f64> {
        match self {
            Ratio::Finite(v) => Some(v),
            Ratio::Unbounded => None,
        }
    }

    pub fn is_unbounded(self) -> bool {
        matches!(self, Ratio::Unbounded)
    }

    /// Lossy conversion where unbounded becomes `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        self.to_f64().total_cmp(&other.to_f64())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ratio::Finite(v) => write!(f, "{v}"),
            Ratio::Unbounded => f.write_str("unbounded"),
        }
    }
}

// JSON has no infinity; unbounded values serialize as the string "unbounded".
impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Ratio::Finite(v) => serializer.serialize_f64(*v),
            Ratio::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}
