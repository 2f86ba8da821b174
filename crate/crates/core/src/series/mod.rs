//! Formal power series in one or two variables, known modulo `m^N`.
//!
//! Coefficients are stored densely by total degree: the homogeneous
//! component of degree `d` occupies a contiguous block indexed by the
//! exponent of the second variable.

mod eval;
mod json;
mod order;
mod parse;
mod vector;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Domain, FieldElement};
use crate::poly::{Monomial, Polynomial, Ring};

pub use eval::{evaluate, ideal_order, Evaluator};
pub use order::{Norm, OrderValue};
pub use parse::parse_series;
pub use vector::{distance, SeriesVector};

/// Element of `k[[x]]` or `k[[x,y]]` modulo `m^N`.
#[derive(Clone)]
pub struct TruncatedSeries {
    ring: Arc<Ring>,
    precision: u32,
    coeffs: Vec<FieldElement>,
}

fn offset(nvars: usize, d: u32) -> usize {
    let d = d as usize;
    if nvars == 1 {
        d
    } else {
        d * (d + 1) / 2
    }
}

fn block(nvars: usize, d: u32) -> usize {
    if nvars == 1 {
        1
    } else {
        d as usize + 1
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &TruncatedSeries) -> bool {
        self.precision == other.precision && self.ring.vars() == other.ring.vars() && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

impl TruncatedSeries {
    pub fn zero(ring: &Arc<Ring>, precision: u32) -> TruncatedSeries {
        assert!(matches!(ring.nvars(), 1 | 2), "series need one or two variables");
        let n = offset(ring.nvars(), precision);
        TruncatedSeries { ring: ring.clone(), precision, coeffs: vec![ring.domain().zero(); n] }
    }

    pub fn constant(ring: &Arc<Ring>, c: FieldElement, precision: u32) -> TruncatedSeries {
        let mut s = TruncatedSeries::zero(ring, precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(ring: &Arc<Ring>, precision: u32) -> TruncatedSeries {
        TruncatedSeries::constant(ring, ring.domain().one(), precision)
    }

    /// The series variable with index `idx` (0 for `x`, 1 for `y`).
    pub fn var(ring: &Arc<Ring>, idx: usize, precision: u32) -> TruncatedSeries {
        let mut e = vec![0; ring.nvars()];
        e[idx] = 1;
        let mut s = TruncatedSeries::zero(ring, precision);
        s.set(&e, ring.domain().one());
        s
    }

    /// Truncation of a polynomial whose ring is exactly the series ring.
    pub fn from_polynomial(p: &Polynomial, precision: u32) -> Result<TruncatedSeries> {
        let ring = p.ring().clone();
        if !matches!(ring.nvars(), 1 | 2) {
            return Err(Error::Dimension(format!("series need one or two variables, got {}", ring.nvars())));
        }
        let mut s = TruncatedSeries::zero(&ring, precision);
        for (m, c) in p.terms() {
            s.set(m.exps(), c.clone());
        }
        Ok(s)
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn domain(&self) -> Domain {
        self.ring.domain()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn index(&self, e: &[u32]) -> Option<usize> {
        let d: u32 = e.iter().sum();
        if d >= self.precision {
            return None;
        }
        let j = if self.nvars() == 1 { 0 } else { e[1] as usize };
        Some(offset(self.nvars(), d) + j)
    }

    /// Coefficient of `x^e[0] (y^e[1])`; zero at or beyond the precision.
    pub fn coeff(&self, e: &[u32]) -> FieldElement {
        match self.index(e) {
            Some(i) => self.coeffs[i].clone(),
            None => self.domain().zero(),
        }
    }

    /// Sets a coefficient; terms at or beyond the precision are dropped.
    pub fn set(&mut self, e: &[u32], c: FieldElement) {
        if let Some(i) = self.index(e) {
            self.coeffs[i] = c;
        }
    }

    /// Homogeneous component of degree `d`, indexed by the exponent of
    /// the second variable.
    pub fn component(&self, d: u32) -> &[FieldElement] {
        let n = self.nvars();
        &self.coeffs[offset(n, d)..offset(n, d) + block(n, d)]
    }

    fn component_mut(&mut self, d: u32) -> &mut [FieldElement] {
        let n = self.nvars();
        &mut self.coeffs[offset(n, d)..offset(n, d) + block(n, d)]
    }

    /// Nonzero terms as (exponents, coefficient), by increasing degree.
    pub fn terms(&self) -> Vec<(Vec<u32>, FieldElement)> {
        let mut out = Vec::new();
        for d in 0..self.precision {
            for (j, c) in self.component(d).iter().enumerate() {
                if !c.is_zero() {
                    let e = if self.nvars() == 1 { vec![d] } else { vec![d - j as u32, j as u32] };
                    out.push((e, c.clone()));
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    /// m-adic order, or a lower-bound marker when nothing survives.
    pub fn order(&self) -> OrderValue {
        for d in 0..self.precision {
            if self.component(d).iter().any(|c| !c.is_zero()) {
                return OrderValue::Finite(d);
            }
        }
        OrderValue::AtLeast(self.precision)
    }

    pub fn norm(&self) -> Norm {
        Norm::from_order(self.order())
    }

    /// Drops everything of degree `>= n` (no-op when `n >= precision`).
    pub fn truncate(&self, n: u32) -> TruncatedSeries {
        if n >= self.precision {
            return self.clone();
        }
        let len = offset(self.nvars(), n);
        TruncatedSeries { ring: self.ring.clone(), precision: n, coeffs: self.coeffs[..len].to_vec() }
    }

    /// Reads the stored terms as an exact polynomial and re-truncates at
    /// `n`: the unknown tail is chosen to be zero.
    pub fn lift(&self, n: u32) -> TruncatedSeries {
        if n <= self.precision {
            return self.truncate(n);
        }
        let mut out = TruncatedSeries::zero(&self.ring, n);
        out.coeffs[..self.coeffs.len()].clone_from_slice(&self.coeffs);
        out
    }

    /// Exact representative as a polynomial in the series ring.
    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::from_terms(&self.ring, self.terms().into_iter().map(|(e, c)| (Monomial::new(e), c)))
    }

    /// Representative embedded in `target`, sending series variable `i`
    /// to target variable `images[i]`.
    pub fn to_polynomial_in(&self, target: &Arc<Ring>, images: &[usize]) -> Polynomial {
        let n = target.nvars();
        Polynomial::from_terms(
            target,
            self.terms().into_iter().map(|(e, c)| {
                let mut exps = vec![0; n];
                for (i, v) in e.iter().enumerate() {
                    exps[images[i]] += v;
                }
                (Monomial::new(exps), c)
            }),
        )
    }

    pub(crate) fn check(&self, other: &TruncatedSeries) -> Result<()> {
        if self.ring.vars() != other.ring.vars() {
            return Err(Error::UniverseMismatch(self.ring.vars().join(","), other.ring.vars().join(",")));
        }
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch(self.domain().to_string(), other.domain().to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check(other)?;
        let p = self.precision.min(other.precision);
        let mut out = self.truncate(p);
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            if !b.is_zero() {
                *a = &*a + b;
            }
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.try_add(&other.neg())
    }

    /// Product modulo `m^min(N, N')`.
    pub fn try_mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        self.check(other)?;
        let p = self.precision.min(other.precision);
        let mut out = TruncatedSeries::zero(&self.ring, p);
        let lhs = self.nonzero_by_degree(p);
        let rhs = other.nonzero_by_degree(p);
        for (da, ja, ca) in &lhs {
            for (db, jb, cb) in &rhs {
                let d = da + db;
                if d >= p {
                    break;
                }
                let i = offset(self.nvars(), d) + ja + jb;
                out.coeffs[i] = &out.coeffs[i] + &(ca * cb);
            }
        }
        Ok(out)
    }

    /// Product known to the precision the operands actually support,
    /// `min(N + ord b, N' + ord a)`, rather than `min(N, N')`.
    pub fn mul_tight(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let p = (self.precision + other.order().lower_bound()).min(other.precision + self.order().lower_bound());
        let out = &self.lift(p) * &other.lift(p);
        out.truncate(p)
    }

    fn nonzero_by_degree(&self, below: u32) -> Vec<(u32, usize, FieldElement)> {
        let mut v = Vec::new();
        for d in 0..self.precision.min(below) {
            for (j, c) in self.component(d).iter().enumerate() {
                if !c.is_zero() {
                    v.push((d, j, c.clone()));
                }
            }
        }
        v
    }

    pub fn neg(&self) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        TruncatedSeries { ring: self.ring.clone(), precision: self.precision, coeffs }
    }

    pub fn scale(&self, c: &FieldElement) -> TruncatedSeries {
        let coeffs = self.coeffs.iter().map(|v| v * c).collect();
        TruncatedSeries { ring: self.ring.clone(), precision: self.precision, coeffs }
    }

    /// Multiplication by the monomial `x^e[0] (y^e[1])`; precision unchanged.
    pub fn shift(&self, e: &[u32]) -> TruncatedSeries {
        let mut out = TruncatedSeries::zero(&self.ring, self.precision);
        for (te, c) in self.terms() {
            let ne: Vec<u32> = te.iter().zip(e).map(|(a, b)| a + b).collect();
            out.set(&ne, c);
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> TruncatedSeries {
        let mut base = self.clone();
        let mut acc = TruncatedSeries::one(&self.ring, self.precision);
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

    /// `q` with `self = q·d`, known modulo `m^(min(N, N') − ord d)`.
    /// `None` when `d` vanishes to precision or does not divide `self`.
    pub fn exact_div(&self, d: &TruncatedSeries) -> Option<TruncatedSeries> {
        self.check(d).ok()?;
        let w = d.order().finite()?;
        let top = self.precision.min(d.precision);
        let p = top.checked_sub(w)?;
        let mut rem = self.truncate(top);
        for deg in 0..w.min(top) {
            if rem.component(deg).iter().any(|c| !c.is_zero()) {
                return None;
            }
        }
        let lead = d.component(w).to_vec();
        let mut q = TruncatedSeries::zero(&self.ring, p);
        for k in 0..p {
            let qk = divide_homogeneous(rem.component(k + w), &lead, k as usize)?;
            if qk.iter().all(FieldElement::is_zero) {
                continue;
            }
            // rem -= qk * d in degrees k + w ..
            for dd in w..top - k {
                let dc = d.component(dd);
                if dc.iter().all(FieldElement::is_zero) {
                    continue;
                }
                let target = rem.component_mut(k + dd);
                for (a, ca) in qk.iter().enumerate() {
                    if ca.is_zero() {
                        continue;
                    }
                    for (b, cb) in dc.iter().enumerate() {
                        if !cb.is_zero() {
                            target[a + b] = &target[a + b] - &(ca * cb);
                        }
                    }
                }
            }
            q.component_mut(k).clone_from_slice(&qk);
        }
        Some(q)
    }

    /// Inverse of a unit.
    pub fn inverse(&self) -> Option<TruncatedSeries> {
        if self.order() != OrderValue::Finite(0) {
            return None;
        }
        TruncatedSeries::one(&self.ring, self.precision).exact_div(self)
    }

    /// `u(0, y)` as a series in the second variable alone.
    pub fn restrict_x_zero(&self) -> Result<TruncatedSeries> {
        if self.nvars() != 2 {
            return Err(Error::Dimension("restriction to x = 0 needs a bivariate series".into()));
        }
        let yring = Ring::new(&[self.ring.vars()[1].clone()], self.domain())?;
        let mut out = TruncatedSeries::zero(&yring, self.precision);
        for d in 0..self.precision {
            out.set(&[d], self.coeff(&[0, d]));
        }
        Ok(out)
    }

    /// Substitutes `x ↦ a·x + b·y`, `y ↦ c·x + e·y` (bivariate only).
    pub fn linear_substitute(&self, m: &[[FieldElement; 2]; 2]) -> TruncatedSeries {
        assert_eq!(self.nvars(), 2);
        let dom = self.domain();
        let p = self.precision;
        // powers of the images as homogeneous components
        let xi = vec![m[0][0].clone(), m[0][1].clone()];
        let yi = vec![m[1][0].clone(), m[1][1].clone()];
        let powers = |base: &Vec<FieldElement>| {
            let mut out: Vec<Vec<FieldElement>> = vec![vec![dom.one()]];
            for k in 1..p as usize {
                out.push(conv(&out[k - 1], base, &dom));
            }
            out
        };
        let xp = powers(&xi);
        let yp = powers(&yi);
        let mut out = TruncatedSeries::zero(&self.ring, p);
        for d in 0..p {
            let comp = self.component(d);
            let target = out.component_mut(d);
            for (j, c) in comp.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let i = d as usize - j;
                let h = conv(&xp[i], &yp[j], &dom);
                for (k, v) in h.iter().enumerate() {
                    if !v.is_zero() {
                        target[k] = &target[k] + &(c * v);
                    }
                }
            }
        }
        out
    }
}

fn conv(a: &[FieldElement], b: &[FieldElement], dom: &Domain) -> Vec<FieldElement> {
    let mut out = vec![dom.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = &out[i + j] + &(x * y);
            }
        }
    }
    out
}

/// Homogeneous quotient `r / b` of degree `k`, both given as components
/// indexed by the exponent of the second variable; `None` if inexact.
fn divide_homogeneous(r: &[FieldElement], b: &[FieldElement], k: usize) -> Option<Vec<FieldElement>> {
    let dom = r.first().or(b.first()).map(FieldElement::domain)?;
    let mut rem = r.to_vec();
    let mut q = vec![dom.zero(); if b.len() == 1 && r.len() == 1 { 1 } else { k + 1 }];
    let jb = b.iter().rposition(|c| !c.is_zero())?;
    let inv = b[jb].inv()?;
    for j in (jb..rem.len()).rev() {
        if rem[j].is_zero() {
            continue;
        }
        let e = j - jb;
        if e >= q.len() {
            return None;
        }
        let c = &rem[j] * &inv;
        for (t, bt) in b.iter().enumerate() {
            if !bt.is_zero() {
                rem[e + t] = &rem[e + t] - &(&c * bt);
            }
        }
        q[e] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(q)
}

impl std::ops::Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_add(rhs).expect("series addition across rings")
    }
}

impl std::ops::Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_sub(rhs).expect("series subtraction across rings")
    }
}

impl std::ops::Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        self.try_mul(rhs).expect("series multiplication across rings")
    }
}

impl std::ops::Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::neg(self)
    }
}

impl fmt::Display for TruncatedSeries {
    /// Terms by increasing total degree, then `O(m^N)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        let mut first = true;
        for (e, c) in &terms {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut factors = Vec::new();
            let is_one = e.iter().all(|&v| v == 0);
            if !abs.is_one() || is_one {
                factors.push(abs.to_string());
            }
            for (i, &v) in e.iter().enumerate() {
                match v {
                    0 => {}
                    1 => factors.push(self.ring.vars()[i].clone()),
                    _ => factors.push(format!("{}^{}", self.ring.vars()[i], v)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        if first {
            write!(f, "O(m^{})", self.precision)
        } else {
            write!(f, " + O(m^{})", self.precision)
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}
