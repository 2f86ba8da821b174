//! Ideals of polynomial rings: Gröbner bases, membership, intersection,
//! colon ideals, radical membership, the Elkik ideal and the effective
//! degree bounds attached to it.

mod bounds;
mod elkik;
mod groebner;
mod order;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::poly::{Polynomial, Ring};

pub use bounds::{
    beta_estimate, bound_calculators, colon_degree_bound, doubly_exponential_bound, elkik_degree_bound,
    gamma, implication_bound, isolated_singularity_bound, power_exponent, AFn, BoundReport, BoundValue, MAX_BOUND_BITS,
};
pub use elkik::{elkik_ideal, ElkikComponent, ElkikIdeal, MAX_ELKIK_EQUATIONS};
pub use order::MonomialOrder;

use groebner::{reduce, Sorted};

struct Basis {
    polys: Vec<Polynomial>,
    sorted: Vec<Sorted>,
}

/// An ideal given by generators, with its reduced Gröbner basis computed
/// on first use and cached.
pub struct Ideal {
    ring: Arc<Ring>,
    generators: Vec<Polynomial>,
    order: MonomialOrder,
    basis: OnceLock<Basis>,
}

impl Clone for Ideal {
    fn clone(&self) -> Ideal {
        let basis = OnceLock::new();
        if let Some(b) = self.basis.get() {
            let _ = basis.set(Basis { polys: b.polys.clone(), sorted: b.sorted.clone() });
        }
        Ideal { ring: self.ring.clone(), generators: self.generators.clone(), order: self.order, basis }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ideal{:?}", self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>())
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", gens.join(", "))
    }
}

impl Ideal {
    /// Ideal of `ring` generated by `gens` (degrevlex).
    pub fn new(ring: &Arc<Ring>, gens: Vec<Polynomial>) -> Result<Ideal> {
        Ideal::with_order(ring, gens, MonomialOrder::DegRevLex)
    }

    pub fn with_order(ring: &Arc<Ring>, gens: Vec<Polynomial>, order: MonomialOrder) -> Result<Ideal> {
        for g in &gens {
            Ring::check_compatible(ring, g.ring())?;
        }
        Ok(Ideal { ring: ring.clone(), generators: gens, order, basis: OnceLock::new() })
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal { ring: ring.clone(), generators: Vec::new(), order: MonomialOrder::DegRevLex, basis: OnceLock::new() }
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![Polynomial::one(ring)]).unwrap()
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    fn cached(&self) -> &Basis {
        self.basis.get_or_init(|| {
            let polys = groebner::groebner(&self.ring, &self.generators, &self.order);
            let sorted = polys.iter().map(|p| Sorted::from_poly(p, &self.order)).collect();
            Basis { polys, sorted }
        })
    }

    /// Reduced Gröbner basis with respect to this ideal's order.
    pub fn basis(&self) -> &[Polynomial] {
        &self.cached().polys
    }

    /// The same ideal, generated by its reduced basis under `order`.
    pub fn groebner(&self, order: MonomialOrder) -> Ideal {
        let tmp = Ideal { ring: self.ring.clone(), generators: self.generators.clone(), order, basis: OnceLock::new() };
        let polys = tmp.basis().to_vec();
        let out = Ideal { ring: self.ring.clone(), generators: polys, order, basis: OnceLock::new() };
        let _ = out.basis.set(Basis {
            polys: tmp.cached().polys.clone(),
            sorted: tmp.cached().sorted.clone(),
        });
        out
    }

    /// Remainder of `p` on full reduction by the basis; zero exactly when
    /// `p` lies in the ideal.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial> {
        Ring::check_compatible(&self.ring, p.ring())?;
        let b = self.cached();
        let terms = p.sorted_terms(&self.order);
        Ok(Polynomial::from_terms(&self.ring, reduce(terms, &b.sorted, &self.order)))
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.basis().is_empty()
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.basis(), [g] if g.is_constant())
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> Result<bool> {
        for g in &other.generators {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as ideals, by mutual membership of generators.
    pub fn equals(&self, other: &Ideal) -> Result<bool> {
        Ok(self.contains_ideal(other)? && other.contains_ideal(self)?)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Ideal::with_order(&self.ring, gens, self.order)
    }

    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut gens = Vec::new();
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a * b);
            }
        }
        Ideal::with_order(&self.ring, gens, self.order)
    }

    fn nonzero_generators(&self) -> Vec<Polynomial> {
        self.generators.iter().filter(|g| !g.is_zero()).cloned().collect()
    }

    /// Generators of `self ∩ other`, by eliminating a fresh tag variable
    /// `t` from `t·self + (1 − t)·other`.
    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let (a, b) = (self.nonzero_generators(), other.nonzero_generators());
        if a.is_empty() || b.is_empty() {
            return Ok(Ideal::zero(&self.ring));
        }
        let tag = self.ring.fresh_name("t");
        let big = self.ring.prepended(&[tag])?;
        let t = Polynomial::var(&big, 0);
        let one_minus_t = &Polynomial::one(&big) - &t;
        let mut gens = Vec::with_capacity(a.len() + b.len());
        for g in &a {
            gens.push(&t * &g.embed(&big)?);
        }
        for g in &b {
            gens.push(&one_minus_t * &g.embed(&big)?);
        }
        let basis = groebner::groebner(&big, &gens, &MonomialOrder::Block { split: 1 });
        let mut out = Vec::new();
        for g in basis {
            if g.degree_in(0) == Some(0) {
                out.push(g.embed(&self.ring)?);
            }
        }
        Ideal::with_order(&self.ring, out, self.order)
    }

    /// `(self : (g))` for a single polynomial `g`.
    pub fn quotient_by(&self, g: &Polynomial) -> Result<Ideal> {
        Ring::check_compatible(&self.ring, g.ring())?;
        if g.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let principal = Ideal::with_order(&self.ring, vec![g.clone()], self.order)?;
        let meet = self.intersect(&principal)?;
        let gens = meet
            .generators
            .iter()
            .map(|h| h.exact_div(g).expect("elements of (g) are divisible by g"))
            .collect();
        Ideal::with_order(&self.ring, gens, self.order)
    }

    /// The ideal quotient `(self : other) = {g : g·other ⊆ self}`,
    /// intersected over the generators of `other`.
    pub fn colon(&self, other: &Ideal) -> Result<Ideal> {
        Ring::check_compatible(&self.ring, &other.ring)?;
        let mut acc: Option<Ideal> = None;
        for g in other.nonzero_generators() {
            let q = self.quotient_by(&g)?.groebner(self.order);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q)?.groebner(self.order),
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `p ∈ √self`, via `1 ∈ self + (1 − w·p)` for a fresh variable `w`.
    pub fn radical_member(&self, p: &Polynomial) -> Result<bool> {
        Ring::check_compatible(&self.ring, p.ring())?;
        if p.is_zero() {
            return Ok(true);
        }
        let w = self.ring.fresh_name("w");
        let big = self.ring.extended(&[w])?;
        let wv = Polynomial::var(&big, big.nvars() - 1);
        let mut gens = Vec::with_capacity(self.generators.len() + 1);
        for g in &self.generators {
            gens.push(g.embed(&big)?);
        }
        gens.push(&Polynomial::one(&big) - &(&wv * &p.embed(&big)?));
        let basis = groebner::groebner(&big, &gens, &MonomialOrder::DegRevLex);
        Ok(matches!(basis.as_slice(), [g] if g.is_constant()))
    }

    /// Generators reduced to normal form modulo `modulus`, zeros dropped
    /// and duplicates removed.
    pub fn reduced_modulo(&self, modulus: &Ideal) -> Result<Vec<Polynomial>> {
        let mut out: Vec<Polynomial> = Vec::new();
        for g in &self.generators {
            let r = modulus.normal_form(g)?;
            if !r.is_zero() && !out.contains(&r) {
                out.push(r);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::poly::parse_polynomial;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y", "z", "t"], Domain::Rational).unwrap()
    }

    fn ideal(r: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_polynomial(r, g).unwrap()).collect()).unwrap()
    }

    fn p(r: &Arc<Ring>, s: &str) -> Polynomial {
        parse_polynomial(r, s).unwrap()
    }

    #[test]
    fn monomial_ideal_is_its_own_basis() {
        let r = ring();
        let i = ideal(&r, &["x*z", "x*t", "y*z", "y*t"]);
        let mut b: Vec<String> = i.basis().iter().map(|g| g.to_string()).collect();
        b.sort();
        assert_eq!(b, ["x*t", "x*z", "y*t", "y*z"]);
        assert!(i.normal_form(&p(&r, "x*z")).unwrap().is_zero());
        assert_eq!(ideal(&r, &["x"]).basis().len(), 1);
    }

    #[test]
    fn intersections() {
        let r = ring();
        let a = ideal(&r, &["x"]).intersect(&ideal(&r, &["y"])).unwrap();
        assert!(a.equals(&ideal(&r, &["x*y"])).unwrap());
        let b = ideal(&r, &["x^2"]).intersect(&ideal(&r, &["x"])).unwrap();
        assert!(b.equals(&ideal(&r, &["x^2"])).unwrap());
        assert!(ideal(&r, &["x"]).intersect(&Ideal::zero(&r)).unwrap().is_zero());
    }

    #[test]
    fn colon_by_unit_and_zero() {
        let r = ring();
        let j = ideal(&r, &["x*z", "y^2"]);
        assert!(j.colon(&Ideal::unit(&r)).unwrap().equals(&j).unwrap());
        assert!(j.colon(&Ideal::zero(&r)).unwrap().is_unit());
        assert!(Ideal::zero(&r).colon(&j).unwrap().is_zero());
    }

    #[test]
    fn radical_membership() {
        let r = ring();
        assert!(ideal(&r, &["x^2"]).radical_member(&p(&r, "x")).unwrap());
        assert!(!ideal(&r, &["x^2"]).radical_member(&p(&r, "y")).unwrap());
    }
}
