use std::fmt;

use serde::{Serialize, Serializer};

/// m-adic order of a truncated series: exact, or only bounded below by
/// the precision when every stored coefficient vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderValue {
    Finite(u32),
    AtLeast(u32),
}

impl OrderValue {
    pub fn finite(self) -> Option<u32> {
        match self {
            OrderValue::Finite(v) => Some(v),
            OrderValue::AtLeast(_) => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, OrderValue::Finite(_))
    }

    /// Certified lower bound.
    pub fn lower_bound(self) -> u32 {
        match self {
            OrderValue::Finite(v) | OrderValue::AtLeast(v) => v,
        }
    }

    /// Order of a minimum (or sum) of two series with these orders.
    pub fn min(self, other: OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (Finite(a), AtLeast(n)) | (AtLeast(n), Finite(a)) => {
                if a < n {
                    Finite(a)
                } else {
                    AtLeast(n)
                }
            }
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
        }
    }

    /// Whether the order is `>= k`: `None` when the precision cannot tell.
    pub fn certifies_at_least(self, k: u32) -> Option<bool> {
        match self {
            OrderValue::Finite(v) => Some(v >= k),
            OrderValue::AtLeast(n) if n >= k => Some(true),
            OrderValue::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(v) => write!(f, "{v}"),
            OrderValue::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for OrderValue {
    /// Finite orders as integers, markers as `">=N"`.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OrderValue::Finite(v) => s.serialize_u32(*v),
            OrderValue::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

/// The norm `e^(-ord)`, kept symbolic: either exactly `e^(-k)` or only
/// bounded above by `e^(-N)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Norm {
    Exact(u32),
    UpperBound(u32),
}

impl Norm {
    pub fn from_order(o: OrderValue) -> Norm {
        match o {
            OrderValue::Finite(k) => Norm::Exact(k),
            OrderValue::AtLeast(n) => Norm::UpperBound(n),
        }
    }

    /// The order this norm encodes.
    pub fn order(self) -> OrderValue {
        match self {
            Norm::Exact(k) => OrderValue::Finite(k),
            Norm::UpperBound(n) => OrderValue::AtLeast(n),
        }
    }

    /// Maximum of two norms (minimum of orders).
    pub fn max(self, other: Norm) -> Norm {
        Norm::from_order(self.order().min(other.order()))
    }

    /// `self <= other`, when decidable from the exponents.
    pub fn le(self, other: Norm) -> Option<bool> {
        match (self, other) {
            (Norm::Exact(a), Norm::Exact(b)) => Some(a >= b),
            (Norm::UpperBound(a), Norm::Exact(b)) => (a >= b).then_some(true),
            (Norm::Exact(a), Norm::UpperBound(b)) => (a < b).then_some(false),
            (Norm::UpperBound(a), Norm::UpperBound(b)) => (a >= b).then_some(true),
        }
    }
}

impl fmt::Display for Norm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Norm::Exact(0) => write!(f, "e^0"),
            Norm::Exact(k) => write!(f, "e^-{k}"),
            Norm::UpperBound(n) => write!(f, "<= e^-{n}"),
        }
    }
}
