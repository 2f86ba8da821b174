use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::ElkikIdeal;
use crate::poly::Polynomial;
use crate::series::{Evaluator, OrderValue, SeriesVector};

/// A subset `E` of the equations, a minor `δ` on `|E|` columns and a
/// colon generator `k_E` with `ord(δ(z̄)·k_E(z̄)) < s`.
#[derive(Clone, Debug, Serialize)]
pub struct MinorSelection {
    /// Equation indices, increasing, zero-based.
    pub rows: Vec<usize>,
    /// Unknown indices, increasing, zero-based.
    pub cols: Vec<usize>,
    #[serde(serialize_with = "as_string")]
    pub delta: Polynomial,
    #[serde(serialize_with = "as_string")]
    pub k_e: Polynomial,
    /// `ord δ(z̄)`; `r = 2·delta_order`.
    pub delta_order: u32,
    pub k_order: u32,
}

fn as_string<S: serde::Serializer>(p: &Polynomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl MinorSelection {
    pub fn r(&self) -> u32 {
        2 * self.delta_order
    }
}

/// Among all `(E, columns, k_E)` with `ord(δ_E(z̄)·k_E(z̄)) < s`, the one
/// of least `ord δ²(z̄)`, ties broken by `E`, then columns, then the
/// order and index of `k_E`.
pub fn select_minor(h: &ElkikIdeal, unknowns: &[&str], zbar: &SeriesVector, s: u32) -> Result<MinorSelection> {
    let mut ev = Evaluator::new(h.ring(), zbar, unknowns)?;
    let mut best: Option<((u32, Vec<usize>, Vec<usize>, u32, usize), MinorSelection)> = None;
    let mut least = OrderValue::AtLeast(zbar.precision());
    for comp in h.components.iter().filter(|c| !c.rows.is_empty()) {
        let korders: Vec<OrderValue> = comp.colon.iter().map(|k| Ok(ev.eval(k)?.order())).collect::<Result<_>>()?;
        for (cols, delta) in &comp.minors {
            if delta.is_zero() {
                continue;
            }
            let dord = ev.eval(delta)?.order();
            for (ki, ko) in korders.iter().enumerate() {
                let (OrderValue::Finite(a), OrderValue::Finite(b)) = (dord, *ko) else {
                    least = least.min(OrderValue::AtLeast(dord.lower_bound() + ko.lower_bound()));
                    continue;
                };
                least = least.min(OrderValue::Finite(a + b));
                if a + b >= s {
                    continue;
                }
                let key = (2 * a, comp.rows.clone(), cols.clone(), b, ki);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    let sel = MinorSelection {
                        rows: comp.rows.clone(),
                        cols: cols.clone(),
                        delta: delta.clone(),
                        k_e: comp.colon[ki].clone(),
                        delta_order: a,
                        k_order: b,
                    };
                    best = Some((key, sel));
                }
            }
        }
    }
    best.map(|(_, s)| s).ok_or_else(|| Error::HypothesisViolated {
        message: format!("every product δ_E(z̄)·k_E(z̄) has order ≥ s = {s} (least {least})"),
        measured_order: least.finite(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::ideal::elkik_ideal;
    use crate::poly::{parse_polynomial, Ring};
    use crate::series::parse_series;

    #[test]
    fn single_equation() {
        let fr = Ring::new(&["x", "y", "z1"], Domain::Rational).unwrap();
        let sr = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        let f = parse_polynomial(&fr, "z1^2 - x^2").unwrap();
        let h = elkik_ideal(&[f], &["z1"]).unwrap();
        let zbar = SeriesVector::new(vec![parse_series(&sr, "x + x^4 + O(m^10)").unwrap()]).unwrap();
        let sel = select_minor(&h, &["z1"], &zbar, 3).unwrap();
        assert_eq!(sel.rows, vec![0]);
        assert_eq!(sel.delta.to_string(), "2*z1");
        assert_eq!(sel.r(), 2);
        let e = select_minor(&h, &["z1"], &zbar, 1).unwrap_err();
        assert!(matches!(e, Error::HypothesisViolated { measured_order: Some(1), .. }));
    }

    #[test]
    fn smooth_point() {
        let fr = Ring::new(&["x", "y", "z1"], Domain::Rational).unwrap();
        let sr = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        let f = parse_polynomial(&fr, "z1 - x").unwrap();
        let h = elkik_ideal(&[f], &["z1"]).unwrap();
        let zbar = SeriesVector::new(vec![parse_series(&sr, "x + O(m^10)").unwrap()]).unwrap();
        let sel = select_minor(&h, &["z1"], &zbar, 1).unwrap();
        assert!(sel.delta.is_constant());
        assert_eq!(sel.r(), 0);
    }
}
