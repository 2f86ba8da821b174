//! m-adic Newton refinement around a point where the residual lies in
//! `(δ)²·m^c` for a maximal minor `δ` of the Jacobian.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{jacobian, Polynomial};
use crate::series::{Evaluator, OrderValue, SeriesVector, TruncatedSeries};

use super::pipeline::PipelineInfo;
use super::linalg::{adjugate, det, eval_matrix, mat_mul, mat_vec, solve_unit, SeriesMatrix};

/// Consecutive non-improving steps tolerated before giving up.
const STALL_LIMIT: usize = 3;
const MAX_STEPS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    CertifiedToPrecision,
    Stalled,
    HypothesisViolated,
}

#[derive(Clone, Debug, Serialize)]
pub struct RefinementCertificate {
    pub status: CertificateStatus,
    /// The residual of the refined point is certified modulo `m^precision`.
    pub precision: u32,
    pub target_order: u32,
    pub refined: SeriesVector,
    /// `min_i ord f_i(z̃)` over the equations refined.
    pub residual_order: OrderValue,
    /// `ord(z̃_j − z̄_j)` per coordinate.
    pub distance_orders: Vec<OrderValue>,
    /// Residual order before the first step and after each step.
    pub trace: Vec<OrderValue>,
    pub delta_order: u32,
    /// Whether `z̃ − z̄ ∈ (δ(z̄))·m^c` holds coordinatewise.
    pub in_delta_ideal: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pipeline: Option<PipelineInfo>,
}

impl RefinementCertificate {
    pub fn is_certified(&self) -> bool {
        self.status == CertificateStatus::CertifiedToPrecision
    }

    pub fn iterations(&self) -> usize {
        self.trace.len().saturating_sub(1)
    }

    pub fn min_distance(&self) -> OrderValue {
        self.distance_orders.iter().fold(OrderValue::AtLeast(u32::MAX), |a, &b| a.min(b))
    }
}

fn residuals(ev: &mut Evaluator, fs: &[&Polynomial]) -> Result<Vec<TruncatedSeries>> {
    fs.iter().map(|f| ev.eval(f)).collect()
}

fn min_order(v: &[TruncatedSeries], cap: u32) -> OrderValue {
    v.iter().map(|s| s.truncate(cap).order()).fold(OrderValue::AtLeast(cap), OrderValue::min)
}

/// Newton refinement of the equations `rows` of `fs` in the unknowns
/// `cols` (the others stay at their value in `zbar`), with `δ` the minor
/// on those rows and columns.
///
/// Requires `f_i(z̄) ∈ (δ(z̄))²·m^c` for the selected rows, checked by
/// exact division, and `c ≥ 1`. Iterates in the coordinates
/// `z = z̄ + δ(z̄)·adj(M(z̄))·u` until the residual vanishes modulo `m^n`.
pub fn tougeron_refine(
    fs: &[Polynomial],
    unknowns: &[&str],
    rows: &[usize],
    cols: &[usize],
    zbar: &SeriesVector,
    c: u32,
    n: u32,
) -> Result<RefinementCertificate> {
    let q = rows.len();
    if q == 0 || q != cols.len() {
        return Err(Error::Dimension(format!("{} equations against {} unknowns", q, cols.len())));
    }
    if c == 0 {
        return Err(Error::Config("refinement needs a target order c >= 1".into()));
    }
    if unknowns.len() != zbar.len() {
        return Err(Error::Dimension(format!("{} unknowns for a point with {} entries", unknowns.len(), zbar.len())));
    }
    let sel: Vec<&Polynomial> = rows.iter().map(|&i| &fs[i]).collect();
    let sel_owned: Vec<Polynomial> = sel.iter().map(|f| (*f).clone()).collect();
    let col_names: Vec<&str> = cols.iter().map(|&j| unknowns[j]).collect();
    let jac = jacobian(&sel_owned, &col_names)?;
    let all: Vec<usize> = (0..q).collect();
    let ring = zbar.ring().clone();
    let fring = fs[0].ring().clone();

    // order of the minor at the point fixes the working precision
    let probe = zbar.lift(n + 2);
    let mut ev = Evaluator::new(&fring, &probe, unknowns)?;
    let m0 = eval_matrix(&mut ev, &jac, &all, &all)?;
    let w = match det(&m0, &ring, n + 2)?.order() {
        OrderValue::Finite(w) => w,
        OrderValue::AtLeast(p) => {
            return Err(Error::Precondition(format!("the minor vanishes at the point modulo m^{p}")))
        }
    };
    let wp = n + 2 * w + 2;
    let z0 = zbar.lift(wp);
    let mut ev = Evaluator::new(&fring, &z0, unknowns)?;
    let mbar = eval_matrix(&mut ev, &jac, &all, &all)?;
    let dbar = det(&mbar, &ring, wp)?;
    let adj = adjugate(&mbar, &ring, wp)?;
    let d2 = &dbar * &dbar;
    let b: SeriesMatrix = adj.iter().map(|r| r.iter().map(|v| v * &dbar).collect()).collect();

    let mut res = residuals(&mut ev, &sel)?;
    for (i, r) in res.iter().enumerate() {
        let eps = r.exact_div(&d2).ok_or_else(|| {
            Error::Precondition(format!("residual of equation {} is not divisible by δ(z̄)²", rows[i] + 1))
        })?;
        let o = eps.order().lower_bound();
        if eps.order().is_finite() && o < c {
            return Err(Error::Precondition(format!(
                "f(z̄) ∉ (δ(z̄))²·m^{c}: equation {} has residual order {} against 2·ord δ(z̄) + c = {}",
                rows[i] + 1,
                r.order(),
                2 * w + c
            )));
        }
    }

    let mut u = vec![TruncatedSeries::zero(&ring, wp); q];
    let mut z = z0.clone();
    let mut trace = vec![min_order(&res, n)];
    let mut status = CertificateStatus::CertifiedToPrecision;
    let mut flat = 0;
    while trace.last().unwrap().is_finite() {
        if trace.len() > MAX_STEPS || flat >= STALL_LIMIT {
            status = CertificateStatus::Stalled;
            break;
        }
        let g: Vec<TruncatedSeries> = res
            .iter()
            .map(|r| r.exact_div(&d2))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Precision("residual left the ideal (δ(z̄))² during refinement".into()))?;
        let mz = eval_matrix(&mut ev, &jac, &all, &all)?;
        let jg: SeriesMatrix = mat_mul(&mz, &adj, &ring, wp)
            .into_iter()
            .map(|row| row.iter().map(|v| v.exact_div(&dbar)).collect::<Option<Vec<_>>>())
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Precision("linearised system lost divisibility by δ(z̄)".into()))?;
        let step = solve_unit(&jg, &g).ok_or_else(|| Error::Precondition("linearised system is not invertible".into()))?;
        for (ui, si) in u.iter_mut().zip(&step) {
            *ui = (&*ui - si).lift(wp);
        }
        let shift = mat_vec(&b, &u, &ring, wp);
        let mut entries = z0.entries().to_vec();
        for (k, &j) in cols.iter().enumerate() {
            entries[j] = (&entries[j] + &shift[k]).lift(wp);
        }
        z = SeriesVector::new(entries)?;
        ev = Evaluator::new(&fring, &z, unknowns)?;
        res = residuals(&mut ev, &sel)?;
        let now = min_order(&res, n);
        let before = *trace.last().unwrap();
        if now.lower_bound() <= before.lower_bound() {
            flat += 1;
        } else {
            flat = 0;
        }
        trace.push(now);
    }

    let refined = z.truncate(n);
    let start = zbar.lift(n);
    let mut distance_orders = Vec::with_capacity(zbar.len());
    let mut in_delta_ideal = true;
    let dn = dbar.truncate(n);
    for (a, b0) in refined.entries().iter().zip(start.entries()) {
        let diff = a - b0;
        distance_orders.push(diff.order());
        in_delta_ideal &= match diff.exact_div(&dn) {
            Some(qt) => !qt.order().is_finite() || qt.order().lower_bound() >= c,
            None => false,
        };
    }
    let mut ev = Evaluator::new(&fring, &refined, unknowns)?;
    let residual_order = min_order(&residuals(&mut ev, &sel)?, n);
    Ok(RefinementCertificate {
        status,
        precision: n,
        target_order: c,
        refined,
        residual_order,
        distance_orders,
        trace,
        delta_order: w,
        in_delta_ideal,
        pipeline: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::poly::{parse_polynomial, Ring};
    use crate::series::parse_series;

    fn setup() -> (std::sync::Arc<Ring>, std::sync::Arc<Ring>) {
        let fr = Ring::new(&["x", "y", "z"], Domain::Rational).unwrap();
        let sr = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        (fr, sr)
    }

    #[test]
    fn square_root_of_x_squared() {
        let (fr, sr) = setup();
        let f = parse_polynomial(&fr, "z^2 - x^2").unwrap();
        let zbar = SeriesVector::new(vec![parse_series(&sr, "x + x^4 + O(m^20)").unwrap()]).unwrap();
        let cert = tougeron_refine(&[f], &["z"], &[0], &[0], &zbar, 3, 20).unwrap();
        assert!(cert.is_certified());
        assert_eq!(cert.refined.get(0), &parse_series(&sr, "x + O(m^20)").unwrap());
        assert_eq!(cert.distance_orders, vec![OrderValue::Finite(4)]);
        assert!(cert.in_delta_ideal);
        for w in cert.trace.windows(2) {
            if w[1].is_finite() {
                assert!(w[1].lower_bound() + 2 >= 2 * w[0].lower_bound());
            }
        }
    }

    #[test]
    fn residual_outside_the_ideal() {
        let (fr, sr) = setup();
        let f = parse_polynomial(&fr, "z^2 - x^2").unwrap();
        let zbar = SeriesVector::new(vec![parse_series(&sr, "x + x^2 + O(m^20)").unwrap()]).unwrap();
        let e = tougeron_refine(&[f], &["z"], &[0], &[0], &zbar, 3, 20).unwrap_err();
        assert!(matches!(e, Error::Precondition(_)), "{e}");
    }

    #[test]
    fn linear_equation_in_one_step() {
        let (fr, sr) = setup();
        let f = parse_polynomial(&fr, "z - x*y^2 - x^3").unwrap();
        let zbar = SeriesVector::new(vec![parse_series(&sr, "x*y^2 + O(m^12)").unwrap()]).unwrap();
        let cert = tougeron_refine(&[f], &["z"], &[0], &[0], &zbar, 3, 12).unwrap();
        assert_eq!(cert.iterations(), 1);
        assert_eq!(cert.refined.get(0), &parse_series(&sr, "x*y^2 + x^3 + O(m^12)").unwrap());
    }
}
