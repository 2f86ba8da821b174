//! Reduction of a system over `k[[x,y]]` to one over `k[[x]]`, and its
//! solution.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Domain;
use crate::poly::{jacobian, Degree, Polynomial, Ring};
use crate::series::{Evaluator, OrderValue, SeriesVector, TruncatedSeries};
use crate::weierstrass::{generic_euclid, x_ring, DistinguishedPolynomial};

use super::linalg::{eval_matrix, rank_profile};
use super::tougeron::tougeron_refine;
use super::Strategy;

#[derive(Clone, Debug, Serialize)]
pub struct DegreeCheck {
    pub label: String,
    pub degree: Option<u32>,
    pub bound: u32,
    pub holds: bool,
}

/// Equations `G_l` (remainders of `δ²(z*)`) and `F_{k,l}` (remainders of
/// `f_k(z*)`, `k ∈ E`) in `x`, `z_{i,j}` and `a_p`, with the approximate
/// point coming from the Weierstrass data.
#[derive(Clone, Debug)]
pub struct OneVarSystem {
    pub ring: Arc<Ring>,
    pub unknowns: Vec<String>,
    pub equations: Vec<Polynomial>,
    pub labels: Vec<String>,
    pub point: SeriesVector,
    pub degree_checks: Vec<DegreeCheck>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OneVarSummary {
    pub unknowns: Vec<String>,
    pub equations: usize,
    pub residual_orders: Vec<(String, OrderValue)>,
    pub degree_checks: Vec<DegreeCheck>,
}

impl OneVarSystem {
    pub fn unknown_refs(&self) -> Vec<&str> {
        self.unknowns.iter().map(String::as_str).collect()
    }

    /// x-orders of every equation at the approximate point.
    pub fn residual_orders(&self) -> Result<Vec<OrderValue>> {
        let refs = self.unknown_refs();
        let mut ev = Evaluator::new(&self.ring, &self.point, &refs)?;
        self.equations.iter().map(|e| Ok(ev.eval(e)?.order())).collect()
    }

    pub fn summary(&self) -> Result<OneVarSummary> {
        let orders = self.residual_orders()?;
        Ok(OneVarSummary {
            unknowns: self.unknowns.clone(),
            equations: self.equations.len(),
            residual_orders: self.labels.iter().cloned().zip(orders).collect(),
            degree_checks: self.degree_checks.clone(),
        })
    }
}

/// Builds the system from the equations `fs` (in the series variables and
/// `unknowns`), the rows `e` kept, the minor `delta`, the distinguished
/// polynomial `dist` of `δ²(z̄)` and the remainders `rems[i][j]` of the
/// Weierstrass division of `z̄_i`. `d` bounds the degrees of `fs`.
pub fn build_one_var_system(
    fs: &[Polynomial],
    unknowns: &[&str],
    e: &[usize],
    delta: &Polynomial,
    dist: &DistinguishedPolynomial,
    rems: &[Vec<TruncatedSeries>],
    d: u32,
) -> Result<OneVarSystem> {
    let r = dist.r();
    if r == 0 {
        return Err(Error::Precondition("δ²(z̄) is a unit; refine the point directly".into()));
    }
    let fring = fs[0].ring().clone();
    let sring = dist.ring().clone();
    let (xv, yv) = (sring.vars()[0].clone(), sring.vars()[1].clone());
    let mut names: Vec<String> = vec![xv.clone(), yv.clone()];
    let mut zvars: Vec<Vec<String>> = Vec::new();
    let taken = |n: &str, names: &[String]| fring.index_of(n).is_some() || names.iter().any(|m| m == n);
    let fresh = |base: String, names: &[String]| {
        let mut cand = base.clone();
        let mut k = 1;
        while taken(&cand, names) {
            cand = format!("{base}_{k}");
            k += 1;
        }
        cand
    };
    for u in unknowns {
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let n = fresh(format!("{u}_{j}"), &names);
            names.push(n.clone());
            row.push(n);
        }
        zvars.push(row);
    }
    let mut avars = Vec::with_capacity(r);
    for p in 1..=r {
        let n = fresh(format!("a{p}"), &names);
        names.push(n.clone());
        avars.push(n);
    }
    let big = Ring::new(&names, fring.domain())?;
    let yb = Polynomial::var(&big, 1);
    let mut images = Vec::with_capacity(fring.nvars());
    for v in fring.vars() {
        let img = if *v == xv {
            Polynomial::var(&big, 0)
        } else if *v == yv {
            yb.clone()
        } else if let Some(i) = unknowns.iter().position(|u| u == v) {
            let mut acc = Polynomial::zero(&big);
            for (j, zn) in zvars[i].iter().enumerate() {
                acc = &acc + &(&Polynomial::var_named(&big, zn)? * &yb.pow(j as u32));
            }
            acc
        } else {
            return Err(Error::UnknownVariable(format!("{v} (neither a series variable nor an unknown)")));
        };
        images.push(img);
    }
    let a_refs: Vec<&str> = avars.iter().map(String::as_str).collect();
    let remainder_coeffs = |p: &Polynomial| -> Result<Vec<Polynomial>> {
        let res = generic_euclid(&p.compose(&images)?, r, &yv, &a_refs)?;
        let mut cs = res.remainder.coefficients_in(1);
        cs.resize(r, Polynomial::zero(&big));
        Ok(cs)
    };
    let m = unknowns.len() as u32;
    let ru = r as u32;
    let mut equations = Vec::new();
    let mut labels = Vec::new();
    let mut degree_checks = Vec::new();
    let mut audit = |label: String, p: &Polynomial, bound: u32| {
        let degree = match p.degree() {
            Degree::Finite(k) => Some(k),
            Degree::MinusInfinity => None,
        };
        degree_checks.push(DegreeCheck { label, degree, bound, holds: degree.is_none_or(|k| k <= bound) });
    };
    let d2 = delta * delta;
    for (l, g) in remainder_coeffs(&d2)?.into_iter().enumerate() {
        let label = format!("G_{l}");
        audit(label.clone(), &g, (2 * m * d.saturating_sub(1) * ru).saturating_sub(l as u32));
        labels.push(label);
        equations.push(g);
    }
    for &k in e {
        for (l, fk) in remainder_coeffs(&fs[k])?.into_iter().enumerate() {
            let label = format!("F_{{{},{l}}}", k + 1);
            audit(label.clone(), &fk, (d * ru).saturating_sub(l as u32));
            labels.push(label);
            equations.push(fk);
        }
    }
    if let Some(bad) = degree_checks.iter().find(|c| !c.holds) {
        return Err(Error::Precondition(format!(
            "degree bound violated: deg {} = {:?} > {}",
            bad.label, bad.degree, bad.bound
        )));
    }

    let mut point = Vec::new();
    for row in rems {
        point.extend(row.iter().cloned());
    }
    point.extend(dist.coeffs().iter().cloned());
    let point = SeriesVector::common(point)?;
    let unknowns_flat: Vec<String> = zvars.into_iter().flatten().chain(avars).collect();
    Ok(OneVarSystem { ring: big, unknowns: unknowns_flat, equations, labels, point, degree_checks })
}

/// Limits for the exhaustive jet enumeration.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct JetLimits {
    /// Jet length: coefficients of `x^0 .. x^(L−1)` are enumerated.
    pub length: u32,
    /// Largest admissible total jet dimension (unknowns × length).
    pub max_dimension: u32,
}

impl Default for JetLimits {
    fn default() -> Self {
        JetLimits { length: 5, max_dimension: 8 }
    }
}

/// Solves `eqs = 0` over `k[[x]]` near `point`, returning a solution at
/// distance at least `target` (as `min_i ord(z_i − point_i)`).
pub fn solve_univariate(
    eqs: &[Polynomial],
    unknowns: &[&str],
    point: &SeriesVector,
    target: u32,
    strategy: Strategy,
    jets: JetLimits,
) -> Result<SeriesVector> {
    if point.ring().nvars() != 1 {
        return Err(Error::Dimension("one-variable solving needs a point over k[[x]]".into()));
    }
    let eqs: Vec<Polynomial> = eqs.iter().filter(|e| !e.is_zero()).cloned().collect();
    if eqs.is_empty() {
        return Ok(point.clone());
    }
    match strategy {
        Strategy::Newton => newton(&eqs, unknowns, point, target),
        Strategy::JetSearch => {
            let jet = jet_search(&eqs, unknowns, point, jets)?;
            let lifted = jet.lift(point.precision());
            let dist = min_distance(&lifted, point);
            if dist.lower_bound() < target.min(jets.length) {
                return Err(Error::Unsupported(format!(
                    "closest solution jet is at distance {dist}, below the target {target}"
                )));
            }
            // polish when Newton applies from the jet; the jet stands otherwise
            Ok(newton(&eqs, unknowns, &lifted, 0).unwrap_or(lifted))
        }
    }
}

pub fn solve_one_var(sys: &OneVarSystem, target: u32, strategy: Strategy, jets: JetLimits) -> Result<SeriesVector> {
    solve_univariate(&sys.equations, &sys.unknown_refs(), &sys.point, target, strategy, jets)
}

fn min_distance(a: &SeriesVector, b: &SeriesVector) -> OrderValue {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(u, v)| (u - v).order())
        .fold(OrderValue::AtLeast(a.precision().min(b.precision())), OrderValue::min)
}

fn all_vanish(eqs: &[Polynomial], unknowns: &[&str], z: &SeriesVector) -> Result<bool> {
    let mut ev = Evaluator::new(eqs[0].ring(), z, unknowns)?;
    for e in eqs {
        if ev.eval(e)?.order().is_finite() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn newton(eqs: &[Polynomial], unknowns: &[&str], point: &SeriesVector, target: u32) -> Result<SeriesVector> {
    let n = point.precision();
    if all_vanish(eqs, unknowns, point)? {
        return Ok(point.clone());
    }
    let jac = jacobian(eqs, unknowns)?;
    let mut ev = Evaluator::new(eqs[0].ring(), point, unknowns)?;
    let all_r: Vec<usize> = (0..eqs.len()).collect();
    let all_c: Vec<usize> = (0..unknowns.len()).collect();
    let jm = eval_matrix(&mut ev, &jac, &all_r, &all_c)?;
    let (rows, cols) = rank_profile(&jm);
    if rows.is_empty() {
        return Err(Error::Unsupported("the Jacobian vanishes at the approximate point".into()));
    }
    let sub: Vec<Vec<TruncatedSeries>> =
        rows.iter().map(|&i| cols.iter().map(|&j| jm[i][j].clone()).collect()).collect();
    let w = super::linalg::det(&sub, point.ring(), n)?.order();
    let OrderValue::Finite(w) = w else {
        return Err(Error::Unsupported("the selected minor vanishes to precision".into()));
    };
    let e = rows
        .iter()
        .map(|&i| ev.eval(&eqs[i]).map(|s| s.order()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(OrderValue::AtLeast(n), OrderValue::min);
    let e = e.lower_bound();
    if e <= 2 * w {
        return Err(Error::Unsupported(format!(
            "no maximal minor with residual order above 2w: residual order {e}, minor order w = {w}"
        )));
    }
    let cert = tougeron_refine(eqs, unknowns, &rows, &cols, point, e - 2 * w, n)?;
    if !cert.is_certified() {
        return Err(Error::Unsupported("Newton iteration stalled on the one-variable system".into()));
    }
    let z = cert.refined;
    if !all_vanish(eqs, unknowns, &z)? {
        return Err(Error::Unsupported(
            "the equations on the selected minor do not force the remaining ones".into(),
        ));
    }
    let dist = min_distance(&z, point);
    if dist.lower_bound() < target {
        return Err(Error::Unsupported(format!("solution found at distance {dist}, below the target {target}")));
    }
    Ok(z)
}

/// Enumerates every jet of length `L` over GF(p) and returns the solution
/// jet (all equations vanish modulo `x^L`) closest to `point`; ties go to
/// the first jet in lexicographic coefficient order.
pub fn jet_search(eqs: &[Polynomial], unknowns: &[&str], point: &SeriesVector, lim: JetLimits) -> Result<SeriesVector> {
    let Domain::Prime(p) = point.ring().domain() else {
        return Err(Error::Unsupported("jet search needs a prime coefficient field".into()));
    };
    let len = lim.length;
    let dim = unknowns.len() as u32 * len;
    if dim > lim.max_dimension {
        return Err(Error::Unsupported(format!(
            "jet dimension {dim} exceeds the configured cap {}",
            lim.max_dimension
        )));
    }
    let count = (p as u128).checked_pow(dim).filter(|&c| c <= 1 << 24).ok_or_else(|| {
        Error::Capacity(format!("{p}^{dim} jets are too many to enumerate"))
    })?;
    let ring = point.ring().clone();
    let dom = ring.domain();
    let target = point.truncate(len);
    let mut best: Option<(u32, SeriesVector)> = None;
    let mut digits = vec![0u64; dim as usize];
    for _ in 0..count {
        let entries: Vec<TruncatedSeries> = (0..unknowns.len())
            .map(|i| {
                let mut s = TruncatedSeries::zero(&ring, len);
                for k in 0..len {
                    s.set(&[k], dom.from_i64(digits[i * len as usize + k as usize] as i64));
                }
                s
            })
            .collect();
        let cand = SeriesVector::new(entries)?;
        if all_vanish(eqs, unknowns, &cand)? {
            let d = min_distance(&cand, &target).lower_bound();
            if best.as_ref().is_none_or(|(b, _)| d > *b) {
                best = Some((d, cand));
            }
        }
        for dgt in digits.iter_mut().rev() {
            *dgt += 1;
            if *dgt < p {
                break;
            }
            *dgt = 0;
        }
    }
    best.map(|(_, v)| v)
        .ok_or_else(|| Error::Unsupported(format!("no solution jet of length {len} exists")))
}

/// Bivariate point from univariate remainders: `z̿_i = ā̿·w̄_i + Σ_j z̿_{i,j} y^j`
/// with `ā̿ = y^r + Σ_p ā̿_p y^(r−p)`.
pub fn reconstruct(
    sys: &OneVarSystem,
    solution: &SeriesVector,
    quotients: &[TruncatedSeries],
    sring: &Arc<Ring>,
) -> Result<SeriesVector> {
    let m = quotients.len();
    let r = (solution.len() / (m + 1)) as u32;
    let ent = solution.entries();
    let lift_y = |s: &TruncatedSeries, j: u32| {
        let mut out = TruncatedSeries::zero(sring, s.precision() + j);
        for (e, c) in s.terms() {
            out.set(&[e[0], j], c);
        }
        out
    };
    let prec = quotients.iter().map(TruncatedSeries::precision).min().unwrap_or(0) + r;
    let mut a = TruncatedSeries::zero(sring, prec);
    a.set(&[0, r], sring.domain().one());
    for p in 1..=r {
        let coeff = &ent[m * r as usize + p as usize - 1];
        a = &a + &lift_y(&coeff.lift(prec), r - p);
    }
    let xr = x_ring(sring)?;
    debug_assert_eq!(xr.vars()[0], sys.point.ring().vars()[0]);
    let mut out = Vec::with_capacity(m);
    for (i, w) in quotients.iter().enumerate() {
        let mut z = a.mul_tight(w);
        for j in 0..r {
            let c = &ent[i * r as usize + j as usize];
            z = &z + &lift_y(&c.lift(prec), j);
        }
        out.push(z);
    }
    SeriesVector::common(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;
    use crate::series::parse_series;

    #[test]
    fn newton_on_one_equation() {
        let fr = Ring::new(&["x", "z"], Domain::Rational).unwrap();
        let xr = Ring::new(&["x"], Domain::Rational).unwrap();
        let f = parse_polynomial(&fr, "z^2 - x^2").unwrap();
        let p = SeriesVector::new(vec![parse_series(&xr, "x + x^5 + O(m^16)").unwrap()]).unwrap();
        let z = solve_univariate(&[f], &["z"], &p, 3, Strategy::Newton, JetLimits::default()).unwrap();
        assert_eq!(z.get(0), &parse_series(&xr, "x + O(m^16)").unwrap());
    }

    #[test]
    fn trivial_system_keeps_the_point() {
        let fr = Ring::new(&["x", "z"], Domain::Rational).unwrap();
        let xr = Ring::new(&["x"], Domain::Rational).unwrap();
        let p = SeriesVector::new(vec![parse_series(&xr, "x^2 + O(m^6)").unwrap()]).unwrap();
        let z = solve_univariate(&[Polynomial::zero(&fr)], &["z"], &p, 3, Strategy::Newton, JetLimits::default()).unwrap();
        assert_eq!(z, p);
    }

    #[test]
    fn jets_over_gf5() {
        let dom = Domain::prime(5).unwrap();
        let fr = Ring::new(&["x", "z"], dom).unwrap();
        let xr = Ring::new(&["x"], dom).unwrap();
        let f = parse_polynomial(&fr, "z^2 - x^2").unwrap();
        let p = SeriesVector::new(vec![parse_series(&xr, "x + x^5 + O(m^12)").unwrap()]).unwrap();
        let lim = JetLimits { length: 4, max_dimension: 8 };
        let jet = jet_search(std::slice::from_ref(&f), &["z"], &p, lim).unwrap();
        assert_eq!(jet.get(0), &parse_series(&xr, "x + O(m^4)").unwrap());
        let q = SeriesVector::new(vec![parse_series(&xr, "-x + x^3 + O(m^12)").unwrap()]).unwrap();
        let jet = jet_search(&[f], &["z"], &q, lim).unwrap();
        assert_eq!(jet.get(0), &parse_series(&xr, "4*x + x^3 + O(m^4)").unwrap());
    }
}
