use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Ring;

use super::{Norm, OrderValue, TruncatedSeries};

/// A point of `A^m`: series sharing variables and precision.
#[derive(Clone, PartialEq, Eq)]
pub struct SeriesVector {
    entries: Vec<TruncatedSeries>,
}

impl SeriesVector {
    pub fn new(entries: Vec<TruncatedSeries>) -> Result<SeriesVector> {
        let first = entries
            .first()
            .ok_or_else(|| Error::Dimension("a series vector needs at least one entry".into()))?;
        for e in &entries[1..] {
            first.check(e)?;
            if e.precision() != first.precision() {
                return Err(Error::Precision(format!(
                    "entries at precisions {} and {}",
                    first.precision(),
                    e.precision()
                )));
            }
        }
        Ok(SeriesVector { entries })
    }

    /// Entries brought to a common precision (the smallest one).
    pub fn common(entries: Vec<TruncatedSeries>) -> Result<SeriesVector> {
        let n = entries.iter().map(TruncatedSeries::precision).min().unwrap_or(0);
        SeriesVector::new(entries.into_iter().map(|e| e.truncate(n)).collect())
    }

    pub fn entries(&self) -> &[TruncatedSeries] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<TruncatedSeries> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> &TruncatedSeries {
        &self.entries[i]
    }

    pub fn precision(&self) -> u32 {
        self.entries[0].precision()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        self.entries[0].ring()
    }

    pub fn truncate(&self, n: u32) -> SeriesVector {
        SeriesVector { entries: self.entries.iter().map(|e| e.truncate(n)).collect() }
    }

    pub fn lift(&self, n: u32) -> SeriesVector {
        SeriesVector { entries: self.entries.iter().map(|e| e.lift(n)).collect() }
    }

    pub fn try_sub(&self, other: &SeriesVector) -> Result<SeriesVector> {
        if self.len() != other.len() {
            return Err(Error::Dimension(format!("vectors of length {} and {}", self.len(), other.len())));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.try_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SeriesVector { entries })
    }

    pub fn orders(&self) -> Vec<OrderValue> {
        self.entries.iter().map(TruncatedSeries::order).collect()
    }

    /// `min_i ord(z_i)`.
    pub fn order(&self) -> OrderValue {
        self.orders().into_iter().reduce(OrderValue::min).unwrap()
    }
}

/// `max_i ||u_i − v_i||`.
pub fn distance(u: &SeriesVector, v: &SeriesVector) -> Result<Norm> {
    if u.precision() != v.precision() {
        return Err(Error::Precision(format!("precisions {} and {}", u.precision(), v.precision())));
    }
    Ok(Norm::from_order(u.try_sub(v)?.order()))
}

impl fmt::Display for SeriesVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for SeriesVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SeriesVector{self}")
    }
}
