//! Sparse multivariate polynomials with exact coefficients.
//!
//! Every polynomial lives in a [`Ring`]: an ordered universe of variable
//! names plus a coefficient [`Domain`]. Monomials are exponent vectors
//! indexed by that universe.

mod matrix;
mod parse;
mod polynomial;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::Domain;

pub(crate) use matrix::combinations;
pub use matrix::{determinant, jacobian, PolyMatrix};
pub use parse::{is_identifier, parse_polynomial, parse_polynomial_at};
pub use polynomial::{Degree, PolyOp, Polynomial};

/// Ordered variable universe with a coefficient domain.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    domain: Domain,
}

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S], domain: Domain) -> Result<Arc<Ring>> {
        let mut out: Vec<String> = Vec::with_capacity(vars.len());
        for v in vars {
            let v = v.as_ref();
            if !is_identifier(v) {
                return Err(Error::Config(format!("`{v}` is not a valid variable name")));
            }
            if out.iter().any(|w| w == v) {
                return Err(Error::Config(format!("variable `{v}` declared twice")));
            }
            out.push(v.to_string());
        }
        Ok(Arc::new(Ring { vars: out, domain }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// A name not yet in the universe, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        if self.index_of(base).is_none() {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|n| self.index_of(n).is_none())
            .unwrap()
    }

    /// Same domain, `extra` variables appended after the current ones.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Ring>> {
        let mut vars = self.vars.clone();
        vars.extend(extra.iter().map(|s| s.as_ref().to_string()));
        Ring::new(&vars, self.domain)
    }

    /// Same domain, `extra` variables placed before the current ones.
    pub fn prepended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Ring>> {
        let mut vars: Vec<String> = extra.iter().map(|s| s.as_ref().to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        Ring::new(&vars, self.domain)
    }

    pub(crate) fn same(a: &Arc<Ring>, b: &Arc<Ring>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    pub(crate) fn check_compatible(a: &Arc<Ring>, b: &Arc<Ring>) -> Result<()> {
        if Ring::same(a, b) {
            return Ok(());
        }
        if a.domain != b.domain {
            return Err(Error::DomainMismatch(a.domain.to_string(), b.domain.to_string()));
        }
        Err(Error::UniverseMismatch(a.vars.join(","), b.vars.join(",")))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.domain, self.vars.join(","))
    }
}

/// Dense exponent vector over a ring's universe; absent variables carry
/// exponent zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Monomial {
        Monomial(vec![0; nvars])
    }

    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial(exps)
    }

    pub fn var(nvars: usize, idx: usize, power: u32) -> Monomial {
        let mut e = vec![0; nvars];
        e[idx] = power;
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Nonzero `(variable index, exponent)` pairs.
    pub fn support(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().copied().enumerate().filter(|(_, e)| *e > 0)
    }
}
