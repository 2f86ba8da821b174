//! Weierstrass preparation and division in `k[[x,y]]` at finite precision,
//! y-regularisation by linear changes of coordinates, and Euclidean
//! division by a monic polynomial with indeterminate coefficients.

mod euclid;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Domain, FieldElement};
use crate::poly::{Polynomial, Ring};
use crate::series::{parse_series, OrderValue, TruncatedSeries};

pub use euclid::{generic_euclid, GenericDivisionResult};

/// Order of `u(0, y)`; the marker when it vanishes to precision.
pub fn y_regular_order(u: &TruncatedSeries) -> Result<OrderValue> {
    Ok(u.restrict_x_zero()?.order())
}

/// Invertible linear change `(x, y) ↦ (a·x + b·y, c·x + d·y)` acting on
/// series and polynomials by substitution, with its verified inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearChange {
    matrix: [[FieldElement; 2]; 2],
    inverse: [[FieldElement; 2]; 2],
}

impl LinearChange {
    pub fn new(matrix: [[FieldElement; 2]; 2]) -> Result<LinearChange> {
        let [[a, b], [c, d]] = &matrix;
        let det = &(a * d) - &(b * c);
        let inv_det = det
            .inv()
            .ok_or_else(|| Error::Config("linear change with zero determinant".into()))?;
        let inverse = [[d * &inv_det, -&(b * &inv_det)], [-&(c * &inv_det), a * &inv_det]];
        let dom = a.domain();
        let lc = LinearChange { matrix, inverse };
        let prod = mat_mul(&lc.matrix, &lc.inverse);
        let id = [[dom.one(), dom.zero()], [dom.zero(), dom.one()]];
        if prod != id {
            return Err(Error::Config("inverse of the linear change failed verification".into()));
        }
        Ok(lc)
    }

    pub fn identity(dom: Domain) -> LinearChange {
        LinearChange::shear(dom, dom.zero())
    }

    /// `x ↦ x + λ·y`, `y ↦ y`.
    pub fn shear(dom: Domain, lambda: FieldElement) -> LinearChange {
        LinearChange::new([[dom.one(), lambda], [dom.zero(), dom.one()]]).expect("shears are invertible")
    }

    pub fn matrix(&self) -> &[[FieldElement; 2]; 2] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        let [[a, b], [c, d]] = &self.matrix;
        a.is_one() && d.is_one() && b.is_zero() && c.is_zero()
    }

    pub fn inverse(&self) -> LinearChange {
        LinearChange { matrix: self.inverse.clone(), inverse: self.matrix.clone() }
    }

    pub fn apply_series(&self, u: &TruncatedSeries) -> TruncatedSeries {
        if self.is_identity() {
            return u.clone();
        }
        u.linear_substitute(&self.matrix)
    }

    /// Substitution in a polynomial whose ring contains the series
    /// variables `x` and `y` (by name).
    pub fn apply_polynomial(&self, p: &Polynomial, x: &str, y: &str) -> Result<Polynomial> {
        if self.is_identity() {
            return Ok(p.clone());
        }
        let ring = p.ring();
        let (ix, iy) = (ring.require(x)?, ring.require(y)?);
        let (vx, vy) = (Polynomial::var(ring, ix), Polynomial::var(ring, iy));
        let [[a, b], [c, d]] = &self.matrix;
        let mut images: Vec<Polynomial> = (0..ring.nvars()).map(|i| Polynomial::var(ring, i)).collect();
        images[ix] = &vx.scale(a) + &vy.scale(b);
        images[iy] = &vx.scale(c) + &vy.scale(d);
        p.compose(&images)
    }
}

fn mat_mul(a: &[[FieldElement; 2]; 2], b: &[[FieldElement; 2]; 2]) -> [[FieldElement; 2]; 2] {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

impl fmt::Display for LinearChange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.matrix;
        write!(f, "x -> {a}*x + {b}*y, y -> {c}*x + {d}*y")
    }
}

/// Finds a shear `x ↦ x + λ·y` after which `u` is y-regular of order
/// `ord(u)`. Over the rationals `λ = 0, 1, 2, …`; over GF(p) `λ = 0` and
/// then residues drawn from a generator seeded with `seed`.
pub fn regularize(u: &TruncatedSeries, seed: u64) -> Result<(LinearChange, TruncatedSeries)> {
    let o = u.order().finite().ok_or_else(|| {
        Error::Precision(format!("series vanishes modulo m^{}; its order cannot be certified", u.precision()))
    })?;
    let dom = u.domain();
    let try_lambda = |l: FieldElement| -> Result<Option<(LinearChange, TruncatedSeries)>> {
        let ch = LinearChange::shear(dom, l);
        let v = ch.apply_series(u);
        Ok((y_regular_order(&v)? == OrderValue::Finite(o)).then_some((ch, v)))
    };
    match dom {
        Domain::Rational => {
            // the lowest form has at most `o` roots
            for l in 0..=(o as i64 + 1) {
                if let Some(found) = try_lambda(dom.from_i64(l))? {
                    return Ok(found);
                }
            }
        }
        Domain::Prime(p) => {
            if let Some(found) = try_lambda(dom.zero())? {
                return Ok(found);
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..(4 * p).min(256) {
                let l = rng.gen_range(1..p);
                if let Some(found) = try_lambda(dom.from_i64(l as i64))? {
                    return Ok(found);
                }
            }
        }
    }
    Err(Error::NotRegular(format!("no shear x -> x + l*y makes the series y-regular of order {o} over {dom}")))
}

/// Monic `y^r + a_1(x) y^(r−1) + … + a_r(x)` with `a_i(0) = 0`.
#[derive(Clone, PartialEq, Eq)]
pub struct DistinguishedPolynomial {
    ring: Arc<Ring>,
    coeffs: Vec<TruncatedSeries>,
}

/// The one-variable ring of the first series variable.
pub fn x_ring(ring: &Arc<Ring>) -> Result<Arc<Ring>> {
    Ring::new(&[ring.vars()[0].clone()], ring.domain())
}

impl DistinguishedPolynomial {
    /// `ring` is the bivariate series ring; `coeffs` are `a_1 .. a_r` in
    /// its first variable.
    pub fn new(ring: &Arc<Ring>, coeffs: Vec<TruncatedSeries>) -> Result<DistinguishedPolynomial> {
        if ring.nvars() != 2 {
            return Err(Error::Dimension("distinguished polynomials live in k[[x]][y]".into()));
        }
        for (i, a) in coeffs.iter().enumerate() {
            if a.nvars() != 1 || a.ring().vars()[0] != ring.vars()[0] {
                return Err(Error::Dimension(format!("coefficient a_{} is not a series in {}", i + 1, ring.vars()[0])));
            }
            if !a.coeff(&[0]).is_zero() {
                return Err(Error::NotRegular(format!("coefficient a_{} does not vanish at 0", i + 1)));
            }
        }
        Ok(DistinguishedPolynomial { ring: ring.clone(), coeffs })
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn r(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1 .. a_r`.
    pub fn coeffs(&self) -> &[TruncatedSeries] {
        &self.coeffs
    }

    /// As a bivariate series; its precision is the least one its
    /// coefficients support.
    pub fn to_series(&self) -> TruncatedSeries {
        let r = self.r() as u32;
        let prec = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.precision() + r - (i as u32 + 1))
            .min()
            .unwrap_or(1);
        self.series_at(prec)
    }

    fn series_at(&self, prec: u32) -> TruncatedSeries {
        let r = self.r() as u32;
        let mut out = TruncatedSeries::zero(&self.ring, prec);
        out.set(&[0, r], self.ring.domain().one());
        for (i, a) in self.coeffs.iter().enumerate() {
            let ye = r - (i as u32 + 1);
            for (e, c) in a.terms() {
                out.set(&[e[0], ye], c);
            }
        }
        out
    }

    /// `y^r − a` part: `a_1 y^(r−1) + … + a_r`.
    fn tail(&self) -> TruncatedSeries {
        let s = self.to_series();
        let mut t = s.clone();
        t.set(&[0, self.r() as u32], self.ring.domain().zero());
        t
    }
}

impl fmt::Display for DistinguishedPolynomial {
    /// `y^r + [a_1] y^(r-1) + … + [a_r]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let y = &self.ring.vars()[1];
        let r = self.r();
        let ypow = |k: usize| match k {
            0 => String::new(),
            1 => format!(" {y}"),
            _ => format!(" {y}^{k}"),
        };
        match r {
            0 => f.write_str("1")?,
            1 => f.write_str(y)?,
            _ => write!(f, "{y}^{r}")?,
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            write!(f, " + [{a}]{}", ypow(r - i - 1))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DistinguishedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Distinguished({self})")
    }
}

/// Parses `y^r + [a_1] y^(r-1) + … + [a_r]` over the bivariate `ring`;
/// coefficients are series literals in the first variable.
pub fn parse_distinguished(ring: &Arc<Ring>, src: &str) -> Result<DistinguishedPolynomial> {
    let y = ring.vars()[1].clone();
    let xr = x_ring(ring)?;
    let parse_ypow = |s: &str| -> Option<usize> {
        let s = s.trim();
        if s.is_empty() {
            return Some(0);
        }
        let rest = s.strip_prefix(y.as_str())?.trim();
        if rest.is_empty() {
            return Some(1);
        }
        let e = rest.strip_prefix('^')?.trim();
        let e = e.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(e);
        e.trim().parse().ok()
    };
    let err = |m: &str| Error::parse(1, 1, m.to_string());
    let src = src.trim();
    let (head, mut rest) = match src.find('+') {
        Some(i) => (&src[..i], &src[i + 1..]),
        None => (src, ""),
    };
    let r = if head.trim() == "1" { 0 } else { parse_ypow(head).ok_or_else(|| err("expected leading y^r"))? };
    let mut coeffs = Vec::with_capacity(r);
    for i in 1..=r {
        let open = rest.find('[').ok_or_else(|| err("expected `[` before a coefficient"))?;
        let close = rest.find(']').ok_or_else(|| err("unclosed `[`"))?;
        let a = parse_series(&xr, &rest[open + 1..close])?;
        let after = &rest[close + 1..];
        let (pow, next) = match after.find('+') {
            Some(k) => (&after[..k], &after[k + 1..]),
            None => (after, ""),
        };
        if parse_ypow(pow) != Some(r - i) {
            return Err(err(&format!("coefficient a_{i} must multiply {y}^{}", r - i)));
        }
        coeffs.push(a);
        rest = next;
    }
    if !rest.trim().is_empty() {
        return Err(err("trailing input after the last coefficient"));
    }
    DistinguishedPolynomial::new(ring, coeffs)
}

/// Splits `g = y^r·h + low` with `deg_y low < r`.
fn split_y(g: &TruncatedSeries, r: u32) -> (TruncatedSeries, TruncatedSeries) {
    let mut low = TruncatedSeries::zero(g.ring(), g.precision());
    let mut high = TruncatedSeries::zero(g.ring(), g.precision().saturating_sub(r));
    for (e, c) in g.terms() {
        if e[1] < r {
            low.set(&e, c);
        } else {
            high.set(&[e[0], e[1] - r], c);
        }
    }
    (high, low)
}

/// Division of `g` by `y^r + p`, where every term of `p` has positive
/// x-degree and y-degree below `r`. All data is read as exact and the
/// computation runs modulo `m^m`; returns `(q, R)` with
/// `g ≡ q·(y^r + p) + R`, `deg_y R < r`.
fn divide_core(g: &TruncatedSeries, p: &TruncatedSeries, r: u32, m: u32) -> (TruncatedSeries, TruncatedSeries) {
    let ring = g.ring();
    let p = p.lift(m);
    let mut q = TruncatedSeries::zero(ring, m);
    let mut rem = TruncatedSeries::zero(ring, m);
    let mut cur = g.lift(m);
    // the x-degree of `cur` grows with every pass
    while !cur.is_zero() {
        let (h, low) = split_y(&cur, r);
        rem = &rem + &low;
        let h = h.lift(m);
        cur = -&(&h * &p);
        q = &q + &h;
    }
    (q, rem)
}

/// Precisions of quotient and remainder when dividing data known modulo
/// `m^m` by `y^r + p`. With `ord p ≥ r` the m-adic filtration is kept;
/// otherwise only the filtration with `x` weighted `r` is, and the
/// precisions shrink by that factor.
fn division_precisions(m: u32, r: u32, ord_p: u32) -> (u32, u32) {
    if ord_p >= r {
        (m.saturating_sub(r), m)
    } else {
        (m.saturating_sub(r).div_ceil(r), m.div_ceil(r))
    }
}

/// Solves `u = unit·(y^r + Σ_k x^k a_k(y))` one power of `x` at a time,
/// reading `u` as exact modulo `m^n`: with `u_k` the coefficient of
/// `x^k`, `u_k − Σ_{0<j<k} unit_(k−j)·a_j = unit_k·y^r + unit_0·a_k`, so
/// `a_k` is the part of degree `< r` of that times `unit_0⁻¹` and `unit_k`
/// the rest. Returns the rows `unit_k` and `a_k` (degree `< r` in `y`).
fn hensel_lift(u: &TruncatedSeries, r: usize, n: usize) -> (Vec<Vec<FieldElement>>, Vec<Vec<FieldElement>>) {
    let dom = u.domain();
    let row = |k: usize| -> Vec<FieldElement> { (0..n).map(|j| if k + j < n { u.coeff(&[k as u32, j as u32]) } else { dom.zero() }).collect() };
    let u0 = row(0);
    let v0: Vec<FieldElement> = (0..n).map(|j| u0.get(j + r).cloned().unwrap_or_else(|| dom.zero())).collect();
    let inv0 = series_inverse(&v0, &dom);
    let mut units: Vec<Vec<FieldElement>> = vec![v0];
    let mut a_rows: Vec<Vec<FieldElement>> = vec![vec![dom.zero(); r]];
    for k in 1..n {
        let mut rhs = row(k);
        for j in 1..k {
            let (ui, aj) = (&units[k - j], &a_rows[j]);
            for (t, ac) in aj.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                for (s, uc) in ui.iter().enumerate().take(n - t) {
                    if !uc.is_zero() {
                        rhs[s + t] = &rhs[s + t] - &(uc * ac);
                    }
                }
            }
        }
        let ak: Vec<FieldElement> = (0..r)
            .map(|d| (0..=d).fold(dom.zero(), |acc, i| &acc + &(&rhs[i] * &inv0[d - i])))
            .collect();
        for (t, ac) in ak.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (s, uc) in units[0].iter().enumerate().take(n - t) {
                rhs[s + t] = &rhs[s + t] - &(uc * ac);
            }
        }
        units.push((0..n).map(|j| rhs.get(j + r).cloned().unwrap_or_else(|| dom.zero())).collect());
        a_rows.push(ak);
    }
    (units, a_rows)
}

fn series_inverse(v: &[FieldElement], dom: &Domain) -> Vec<FieldElement> {
    let c0 = v[0].inv().expect("unit");
    let mut out = vec![c0.clone()];
    for d in 1..v.len() {
        let s = (1..=d).fold(dom.zero(), |acc, i| &acc + &(&v[i] * &out[d - i]));
        out.push(-&(&s * &c0));
    }
    out
}

/// Weierstrass preparation `u = unit · dist` of a y-regular series of
/// order `r = ord(u)`, from `u` known modulo `m^N`. The distinguished
/// polynomial is exact to `m^N` (so `a_i` to `(x)^(N−r+i)`); the unit is
/// known modulo `m^(N−r)`.
pub fn prepare(u: &TruncatedSeries, n: u32) -> Result<(TruncatedSeries, DistinguishedPolynomial)> {
    if n > u.precision() {
        return Err(Error::Precision(format!("series known modulo m^{}, asked for m^{n}", u.precision())));
    }
    let u = u.truncate(n);
    let r = match y_regular_order(&u)? {
        OrderValue::Finite(r) => r,
        OrderValue::AtLeast(_) => {
            return Err(Error::NotRegular(format!("u(0,y) vanishes modulo y^{n}; regularize first")))
        }
    };
    if u.order() != OrderValue::Finite(r) {
        return Err(Error::NotRegular(format!(
            "order {} is below the y-regular order {r}; regularize first",
            u.order()
        )));
    }
    if r >= n {
        return Err(Error::Precision(format!("y-regular order {r} is not below the precision {n}")));
    }
    let (unit_rows, a_rows) = hensel_lift(&u, r as usize, n as usize);
    let mut unit = TruncatedSeries::zero(u.ring(), n - r);
    for (k, row) in unit_rows.iter().enumerate() {
        for (j, c) in row.iter().enumerate().take((n - r) as usize - k.min((n - r) as usize)) {
            unit.set(&[k as u32, j as u32], c.clone());
        }
    }
    let xr = x_ring(u.ring())?;
    let mut coeffs = Vec::with_capacity(r as usize);
    for i in 1..=r {
        let prec = n - r + i;
        let mut a = TruncatedSeries::zero(&xr, prec);
        for (k, row) in a_rows.iter().enumerate().take(prec as usize) {
            a.set(&[k as u32], row[(r - i) as usize].clone());
        }
        debug_assert!(a.order().lower_bound() >= i);
        coeffs.push(a);
    }
    Ok((unit, DistinguishedPolynomial::new(u.ring(), coeffs)?))
}

/// Weierstrass division `g = a·q + Σ_j rem_j(x) y^j` by a distinguished
/// polynomial, computed from `g` modulo `m^N`. Quotient and remainder
/// carry the precision the data supports; `rem_j` is a series in `x`.
pub fn w_divide(g: &TruncatedSeries, a: &DistinguishedPolynomial, n: u32) -> Result<(TruncatedSeries, Vec<TruncatedSeries>)> {
    if g.ring().vars() != a.ring().vars() {
        return Err(Error::UniverseMismatch(g.ring().vars().join(","), a.ring().vars().join(",")));
    }
    if g.domain() != a.ring().domain() {
        return Err(Error::DomainMismatch(g.domain().to_string(), a.ring().domain().to_string()));
    }
    if n > g.precision() {
        return Err(Error::Precision(format!("series known modulo m^{}, asked for m^{n}", g.precision())));
    }
    let r = a.r() as u32;
    if r == 0 {
        return Ok((g.truncate(n), Vec::new()));
    }
    let tail = a.tail();
    let m = n.min(tail.precision());
    let (q, rem) = divide_core(g, &tail, r, m);
    let (pq, pr) = division_precisions(m, r, tail.order().lower_bound());
    let xr = x_ring(g.ring())?;
    let mut out = Vec::with_capacity(r as usize);
    for j in 0..r {
        let prec = pr.saturating_sub(j);
        let mut c = TruncatedSeries::zero(&xr, prec);
        for k in 0..prec {
            c.set(&[k], rem.coeff(&[k, j]));
        }
        out.push(c);
    }
    Ok((q.truncate(pq), out))
}

/// `a·q + Σ_j rem_j y^j`, for checking divisions.
pub fn recompose(a: &DistinguishedPolynomial, q: &TruncatedSeries, rem: &[TruncatedSeries]) -> TruncatedSeries {
    if a.r() == 0 {
        return q.clone();
    }
    let ring = a.ring();
    let mut acc = a.to_series().mul_tight(q);
    for (j, c) in rem.iter().enumerate() {
        let mut s = TruncatedSeries::zero(ring, c.precision() + j as u32);
        for (e, v) in c.terms() {
            s.set(&[e[0], j as u32], v);
        }
        acc = &acc + &s;
    }
    acc
}
