use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Domain, FieldElement};
use crate::ideal::MonomialOrder;

use super::{Monomial, Ring};

/// Total degree; the zero polynomial has degree `MinusInfinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    MinusInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::MinusInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::MinusInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

/// A polynomial over a [`Ring`]. Zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Polynomial) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl std::hash::Hash for Polynomial {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Polynomial {
    pub fn zero(ring: &Arc<Ring>) -> Polynomial {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &Arc<Ring>) -> Polynomial {
        Polynomial::constant(ring, ring.domain().one())
    }

    pub fn constant(ring: &Arc<Ring>, c: FieldElement) -> Polynomial {
        Polynomial::term(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_i64(ring: &Arc<Ring>, c: i64) -> Polynomial {
        Polynomial::constant(ring, ring.domain().from_i64(c))
    }

    pub fn var(ring: &Arc<Ring>, idx: usize) -> Polynomial {
        Polynomial::term(ring, Monomial::var(ring.nvars(), idx, 1), ring.domain().one())
    }

    pub fn var_named(ring: &Arc<Ring>, name: &str) -> Result<Polynomial> {
        Ok(Polynomial::var(ring, ring.require(name)?))
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: FieldElement) -> Polynomial {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ring: ring.clone(), terms }
    }

    /// Sums the given terms, dropping cancellations.
    pub fn from_terms<I>(ring: &Arc<Ring>, terms: I) -> Polynomial
    where
        I: IntoIterator<Item = (Monomial, FieldElement)>,
    {
        let mut p = Polynomial::zero(ring);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn domain(&self) -> Domain {
        self.ring.domain()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).cloned().unwrap_or_else(|| self.domain().zero())
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.ring.nvars()))
    }

    pub fn degree(&self) -> Degree {
        self.terms
            .keys()
            .map(Monomial::degree)
            .max()
            .map_or(Degree::MinusInfinity, Degree::Finite)
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.exp(var)).max()
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.keys().any(|m| m.exp(i) > 0))
            .collect()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &FieldElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut out = Polynomial::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        Ok(out)
    }

    /// Exact arithmetic with explicit domain checking.
    pub fn arith(&self, other: &Polynomial, op: PolyOp) -> Result<Polynomial> {
        match op {
            PolyOp::Add => self.try_add(other),
            PolyOp::Sub => self.try_sub(other),
            PolyOp::Mul => self.try_mul(other),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &FieldElement) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let dom = self.domain();
        let mut out = Polynomial::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.exp(var);
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[var] -= 1;
            out.add_term(Monomial::new(exps), &(c * &dom.from_i64(e as i64)));
        }
        out
    }

    /// Substitutes `images[i]` for variable `i`. All images must share a
    /// ring, which becomes the ring of the result.
    pub fn compose(&self, images: &[Polynomial]) -> Result<Polynomial> {
        if images.len() != self.ring.nvars() {
            return Err(Error::Dimension(format!(
                "{} images for {} variables",
                images.len(),
                self.ring.nvars()
            )));
        }
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .ok_or_else(|| Error::Dimension("composition over empty ring".into()))?;
        for p in images {
            Ring::check_compatible(&target, &p.ring)?;
        }
        if target.domain() != self.domain() {
            return Err(Error::DomainMismatch(self.domain().to_string(), target.domain().to_string()));
        }
        // powers cached per variable
        let mut powers: Vec<Vec<Polynomial>> = images.iter().map(|p| vec![Polynomial::one(&target), p.clone()]).collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, e) in m.support() {
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Replaces one variable by a polynomial of the same ring.
    pub fn substitute(&self, var: usize, image: &Polynomial) -> Result<Polynomial> {
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|i| if i == var { image.clone() } else { Polynomial::var(&self.ring, i) })
            .collect();
        self.compose(&images)
    }

    /// Re-expresses the polynomial in `target`, matching variables by name.
    pub fn embed(&self, target: &Arc<Ring>) -> Result<Polynomial> {
        if Ring::same(&self.ring, target) {
            return Ok(self.clone());
        }
        if target.domain() != self.domain() {
            return Err(Error::DomainMismatch(self.domain().to_string(), target.domain().to_string()));
        }
        let map: Vec<Option<usize>> = self.ring.vars().iter().map(|v| target.index_of(v)).collect();
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.nvars()];
            for (i, e) in m.support() {
                let j = map[i].ok_or_else(|| Error::UnknownVariable(self.ring.vars()[i].clone()))?;
                exps[j] = e;
            }
            out.add_term(Monomial::new(exps), c);
        }
        Ok(out)
    }

    /// Terms sorted from largest to smallest under `order`.
    pub fn sorted_terms(&self, order: &MonomialOrder) -> Vec<(Monomial, FieldElement)> {
        let mut v: Vec<(Monomial, FieldElement)> =
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| order.cmp(&b.0, &a.0));
        v
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(Monomial, FieldElement)> {
        self.terms
            .iter()
            .max_by(|a, b| order.cmp(a.0, b.0))
            .map(|(m, c)| (m.clone(), c.clone()))
    }

    /// Scaled so the leading coefficient under `order` is one.
    pub fn monic(&self, order: &MonomialOrder) -> Polynomial {
        match self.leading_term(order) {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// `self / d` when `d` divides `self` exactly.
    pub fn exact_div(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        let order = MonomialOrder::DegRevLex;
        let (lm, lc) = d.leading_term(&order)?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(&self.ring);
        while let Some((m, c)) = rem.leading_term(&order) {
            let q = m.div(&lm)?;
            let qc = &c * &lc_inv;
            rem = &rem - &d.mul_term(&q, &qc);
            quot.add_term(q, &qc);
        }
        Some(quot)
    }

    /// Coefficients with respect to one variable: `self = sum_k c_k var^k`.
    pub fn coefficients_in(&self, var: usize) -> Vec<Polynomial> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![Polynomial::zero(&self.ring); deg + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let mut exps = m.exps().to_vec();
            exps[var] = 0;
            out[e].add_term(Monomial::new(exps), c);
        }
        out
    }

    fn fmt_term(f: &mut fmt::Formatter<'_>, ring: &Ring, m: &Monomial, c: &FieldElement, first: bool) -> fmt::Result {
        let neg = c.is_negative();
        let abs = c.abs();
        if !first {
            f.write_str(if neg { " - " } else { " + " })?;
        } else if neg {
            f.write_str("-")?;
        }
        let mut factors: Vec<String> = Vec::new();
        if !abs.is_one() || m.is_one() {
            factors.push(abs.to_string());
        }
        for (i, e) in m.support() {
            if e == 1 {
                factors.push(ring.vars()[i].clone());
            } else {
                factors.push(format!("{}^{}", ring.vars()[i], e));
            }
        }
        f.write_str(&factors.join("*"))
    }
}

impl fmt::Display for Polynomial {
    /// Terms in descending graded reverse lexicographic order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let terms = self.sorted_terms(&MonomialOrder::DegRevLex);
        for (i, (m, c)) in terms.iter().enumerate() {
            Polynomial::fmt_term(f, &self.ring, m, c, i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Ord for Polynomial {
    /// Structural order, for deterministic sorting only.
    fn cmp(&self, other: &Polynomial) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Polynomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    /// Panics when the operands live in different rings; see [`Polynomial::try_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition across rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction across rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication across rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-self.domain().one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y", "z"], Domain::Rational).unwrap()
    }

    fn p(s: &str) -> Polynomial {
        parse_polynomial(&ring(), s).unwrap()
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let s = &p("x + y") + &p("-x");
        assert_eq!(s, p("y"));
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn product_matches_naive_expansion() {
        let prod = &p("y^2 + x*y + x^2") * &p("1 + x");
        assert_eq!(prod, p("y^2 + x*y + x^2 + x*y^2 + x^2*y + x^3"));
        // naive term-by-term product as an independent check
        let a = p("y^2 + x*y + x^2");
        let b = p("1 + x");
        let mut naive = Polynomial::zero(&ring());
        for (m1, c1) in a.terms() {
            for (m2, c2) in b.terms() {
                naive = &naive + &Polynomial::term(&ring(), m1.mul(m2), c1 * c2);
            }
        }
        assert_eq!(prod, naive);
    }

    #[test]
    fn multiplying_by_zero_annihilates() {
        let z = Polynomial::zero(&ring());
        assert!((&p("x^3 - 2*y") * &z).is_zero());
        assert_eq!(z.degree(), Degree::MinusInfinity);
    }

    #[test]
    fn mismatched_domains_are_rejected() {
        let r5 = Ring::new(&["x", "y", "z"], Domain::prime(5).unwrap()).unwrap();
        let a = p("x");
        let b = Polynomial::var(&r5, 0);
        assert!(matches!(a.try_add(&b), Err(Error::DomainMismatch(..))));
        assert!(matches!(a.arith(&b, PolyOp::Mul), Err(Error::DomainMismatch(..))));
    }

    #[test]
    fn exact_division_and_composition() {
        let q = p("x^2*y - x*z").exact_div(&p("x")).unwrap();
        assert_eq!(q, p("x*y - z"));
        assert!(p("x + 1").exact_div(&p("x")).is_none());
        let c = p("x^2 + y").substitute(0, &p("x + y")).unwrap();
        assert_eq!(c, p("x^2 + 2*x*y + y^2 + y"));
    }

    #[test]
    fn display_round_trips() {
        let q = p("-3/2*x^2*y + z - 1");
        assert_eq!(parse_polynomial(&ring(), &q.to_string()).unwrap(), q);
    }
}
