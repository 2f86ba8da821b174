use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Ring};

use super::{OrderValue, SeriesVector, TruncatedSeries};

/// Evaluates polynomials of one ring at one point, sharing powers of the
/// point across calls.
///
/// Variables of the polynomial ring named like the series variables map
/// to those; the remaining ones are the unknowns and take the entries of
/// the point in the order given.
pub struct Evaluator {
    ring: Arc<Ring>,
    series_ring: Arc<Ring>,
    precision: u32,
    /// For each polynomial variable: series variable index, or point entry.
    roles: Vec<Role>,
    point: Vec<TruncatedSeries>,
    powers: Vec<Vec<TruncatedSeries>>,
    products: HashMap<Vec<u32>, TruncatedSeries>,
}

#[derive(Clone, Copy, Debug)]
enum Role {
    Series(usize),
    Unknown(usize),
    Unassigned,
}

impl Evaluator {
    pub fn new(ring: &Arc<Ring>, point: &SeriesVector, unknowns: &[&str]) -> Result<Evaluator> {
        if unknowns.len() != point.len() {
            return Err(Error::Dimension(format!(
                "{} unknowns for a point with {} entries",
                unknowns.len(),
                point.len()
            )));
        }
        let series_ring = point.ring().clone();
        if series_ring.domain() != ring.domain() {
            return Err(Error::DomainMismatch(ring.domain().to_string(), series_ring.domain().to_string()));
        }
        let mut roles = vec![Role::Unassigned; ring.nvars()];
        for (i, v) in ring.vars().iter().enumerate() {
            if let Some(s) = series_ring.index_of(v) {
                roles[i] = Role::Series(s);
            }
        }
        for (k, u) in unknowns.iter().enumerate() {
            let i = ring.require(u)?;
            if let Role::Series(_) = roles[i] {
                return Err(Error::Config(format!("`{u}` is a series variable, not an unknown")));
            }
            roles[i] = Role::Unknown(k);
        }
        let point: Vec<TruncatedSeries> = point.entries().to_vec();
        let powers = point.iter().map(|p| vec![TruncatedSeries::one(&series_ring, p.precision()), p.clone()]).collect();
        Ok(Evaluator {
            ring: ring.clone(),
            series_ring,
            precision: point_precision(&point),
            roles,
            point,
            powers,
            products: HashMap::new(),
        })
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn power(&mut self, k: usize, e: u32) -> &TruncatedSeries {
        let e = e as usize;
        while self.powers[k].len() <= e {
            let next = &self.powers[k][self.powers[k].len() - 1] * &self.point[k];
            self.powers[k].push(next);
        }
        &self.powers[k][e]
    }

    fn product(&mut self, exps: &[u32]) -> TruncatedSeries {
        if let Some(p) = self.products.get(exps) {
            return p.clone();
        }
        let mut acc: Option<TruncatedSeries> = None;
        for (k, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let p = self.power(k, e).clone();
            acc = Some(match acc {
                None => p,
                Some(a) => &a * &p,
            });
        }
        let out = acc.unwrap_or_else(|| TruncatedSeries::one(&self.series_ring, self.precision));
        self.products.insert(exps.to_vec(), out.clone());
        out
    }

    /// `f(x, y, point)` modulo `m^N`.
    pub fn eval(&mut self, f: &Polynomial) -> Result<TruncatedSeries> {
        Ring::check_compatible(&self.ring, f.ring())?;
        let ns = self.series_ring.nvars();
        // group terms by their unknown part: f = sum_a c_a(x, y) z^a
        let mut groups: Vec<(Vec<u32>, TruncatedSeries)> = Vec::new();
        let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
        for (m, c) in f.terms() {
            let mut se = vec![0u32; ns];
            let mut ue = vec![0u32; self.point.len()];
            for (i, e) in m.support() {
                match self.roles[i] {
                    Role::Series(s) => se[s] += e,
                    Role::Unknown(k) => ue[k] += e,
                    Role::Unassigned => {
                        return Err(Error::UnknownVariable(format!(
                            "{} (not assigned a series)",
                            self.ring.vars()[i]
                        )))
                    }
                }
            }
            let slot = *index.entry(ue.clone()).or_insert_with(|| {
                groups.push((ue, TruncatedSeries::zero(&self.series_ring, self.precision)));
                groups.len() - 1
            });
            let g = &mut groups[slot].1;
            let cur = g.coeff(&se);
            g.set(&se, &cur + c);
        }
        let mut out = TruncatedSeries::zero(&self.series_ring, self.precision);
        for (ue, coef) in groups {
            let p = self.product(&ue);
            out = &out + &(&coef * &p);
        }
        Ok(out)
    }
}

fn point_precision(point: &[TruncatedSeries]) -> u32 {
    point.iter().map(TruncatedSeries::precision).min().unwrap_or(0)
}

/// Substitutes the point for the unknowns of `f` (named in `unknowns`),
/// modulo `m^N`.
pub fn evaluate(f: &Polynomial, point: &SeriesVector, unknowns: &[&str]) -> Result<TruncatedSeries> {
    Evaluator::new(f.ring(), point, unknowns)?.eval(f)
}

/// `min_g ord g(point)` over the generators; the empty list gives the
/// precision marker.
pub fn ideal_order(gens: &[Polynomial], point: &SeriesVector, unknowns: &[&str]) -> Result<OrderValue> {
    let Some(first) = gens.first() else {
        return Ok(OrderValue::AtLeast(point.precision()));
    };
    let mut ev = Evaluator::new(first.ring(), point, unknowns)?;
    let mut acc = OrderValue::AtLeast(point.precision());
    for g in gens {
        acc = acc.min(ev.eval(g)?.order());
    }
    Ok(acc)
}
