use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poly::{parse_polynomial, Ring};

use super::{SeriesVector, TruncatedSeries};

/// `{"precision": N, "terms": [[[i, j], "c"], ...]}` with exact
/// coefficients as strings.
impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<(Vec<u32>, String)> = self.terms().into_iter().map(|(e, c)| (e, c.to_string())).collect();
        let mut st = s.serialize_struct("TruncatedSeries", 2)?;
        st.serialize_field("precision", &self.precision)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl Serialize for SeriesVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

fn bad(msg: &str) -> Error {
    Error::parse(1, 1, format!("series JSON: {msg}"))
}

impl TruncatedSeries {
    /// Inverse of the JSON serialisation.
    pub fn from_json(ring: &Arc<Ring>, v: &Value) -> Result<TruncatedSeries> {
        let prec = v
            .get("precision")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing precision"))? as u32;
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut out = TruncatedSeries::zero(ring, prec);
        for t in terms {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("term must be [exponents, coefficient]"))?;
            let exps: Vec<u32> = pair[0]
                .as_array()
                .ok_or_else(|| bad("exponents must be a list"))?
                .iter()
                .map(|e| e.as_u64().map(|e| e as u32).ok_or_else(|| bad("exponent must be an integer")))
                .collect::<Result<_>>()?;
            if exps.len() != ring.nvars() {
                return Err(bad("exponent list length differs from the variable count"));
            }
            let c = pair[1].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
            let c = parse_polynomial(ring, c)?;
            if !c.is_constant() {
                return Err(bad("coefficient is not a constant"));
            }
            out.set(&exps, c.constant_term());
        }
        Ok(out)
    }
}

impl SeriesVector {
    pub fn from_json(ring: &Arc<Ring>, v: &Value) -> Result<SeriesVector> {
        let items = v.as_array().ok_or_else(|| bad("a series vector is a list"))?;
        SeriesVector::new(items.iter().map(|i| TruncatedSeries::from_json(ring, i)).collect::<Result<_>>()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::series::parse_series;

    #[test]
    fn round_trip() {
        let r = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        let s = parse_series(&r, "-7/3 + x*y^2 - y^5 + O(m^7)").unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["terms"][0], serde_json::json!([[0, 0], "-7/3"]));
        assert_eq!(TruncatedSeries::from_json(&r, &v).unwrap(), s);
    }
}
