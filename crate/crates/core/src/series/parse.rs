use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{parse_polynomial_at, Polynomial, Ring};

use super::TruncatedSeries;

/// Splits `... + O(m^N)` into the polynomial part and `N`.
fn split_precision(src: &str) -> Option<(&str, u32, usize)> {
    let t = src.trim_end();
    let start = t.rfind("O(")?;
    let inner = t[start + 2..].strip_suffix(')')?;
    let n = inner.trim().strip_prefix('m')?.trim_start().strip_prefix('^')?.trim();
    let n: u32 = n.parse().ok()?;
    let head = t[..start].trim_end();
    let head = match head.strip_suffix('+') {
        Some(h) => h,
        None if head.is_empty() => head,
        None => return None,
    };
    Some((head, n, start))
}

/// Parses a series literal such as `x + x^4 + O(m^20)` over `ring`
/// (one or two series variables). Terms of degree `>= N` are dropped.
pub fn parse_series(ring: &Arc<Ring>, src: &str) -> Result<TruncatedSeries> {
    parse_series_at(ring, src, 1, 1)
}

pub(crate) fn parse_series_at(ring: &Arc<Ring>, src: &str, line: usize, column: usize) -> Result<TruncatedSeries> {
    let (head, n, at) = split_precision(src).ok_or_else(|| {
        Error::parse(line, column + src.trim_end().len(), "series literal must end with `+ O(m^N)`")
    })?;
    if n == 0 {
        return Err(Error::parse(line, column + at, "precision must be positive"));
    }
    let p = if head.trim().is_empty() {
        Polynomial::zero(ring)
    } else {
        parse_polynomial_at(ring, head, line, column)?
    };
    TruncatedSeries::from_polynomial(&p, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;

    #[test]
    fn literals() {
        let r = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        let a = parse_series(&r, "x + x^4 + O(m^20)").unwrap();
        assert_eq!(a.precision(), 20);
        assert_eq!(a.terms().len(), 2);
        assert!(parse_series(&r, "O(m^5)").unwrap().is_zero());
        assert_eq!(parse_series(&r, "x^9 + O(m^3)").unwrap().terms().len(), 0);
        assert!(parse_series(&r, "x + x^4").is_err());
        assert!(parse_series(&r, "x O(m^4)").is_err());
        assert!(matches!(parse_series(&r, "x + w + O(m^4)"), Err(Error::Parse { column: 5, .. })));
    }
}
