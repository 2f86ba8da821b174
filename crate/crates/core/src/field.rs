//! Exact coefficient fields: the rationals and prime fields GF(p).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest modulus accepted for GF(p); keeps products inside `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The coefficient domain of a ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Domain {
    Rational,
    Prime(u64),
}

impl Domain {
    /// GF(p), rejecting composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Domain> {
        if !(2..=MAX_PRIME).contains(&p) || !is_prime(p) {
            return Err(Error::Config(format!("{p} is not a supported prime modulus")));
        }
        Ok(Domain::Prime(p))
    }

    pub fn zero(&self) -> FieldElement {
        match *self {
            Domain::Rational => FieldElement::Rational(BigRational::zero()),
            Domain::Prime(p) => FieldElement::Modular { value: 0, modulus: p },
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> FieldElement {
        match *self {
            Domain::Rational => FieldElement::Rational(BigRational::from_integer(v.clone())),
            Domain::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                FieldElement::Modular { value: r.to_u64().unwrap(), modulus: p }
            }
        }
    }

    /// Maps `num/den` into the domain; fails when `den` vanishes there.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<FieldElement> {
        let n = self.from_bigint(num);
        let d = self.from_bigint(den);
        if d.is_zero() {
            return Err(Error::Config(format!("denominator {den} is zero in {self}")));
        }
        Ok(&n / &d)
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Domain::Rational => 0,
            Domain::Prime(p) => p,
        }
    }

    /// Whether `e` lives in this domain.
    pub fn contains(&self, e: &FieldElement) -> bool {
        e.domain() == *self
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => write!(f, "Q"),
            Domain::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

impl std::str::FromStr for Domain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Domain> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "Q" || t == "QQ" {
            return Ok(Domain::Rational);
        }
        let inner = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Config(format!("unknown field `{s}` (expected Q or GF(p))")))?;
        let p: u64 = inner
            .parse()
            .map_err(|_| Error::Config(format!("bad modulus in `{s}`")))?;
        Domain::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept in lowest terms with a
/// positive denominator; residues are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldElement {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn domain(&self) -> Domain {
        match self {
            FieldElement::Rational(_) => Domain::Rational,
            FieldElement::Modular { modulus, .. } => Domain::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Modular { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Option<FieldElement> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: pow_mod(*value, *modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.domain().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Negative rationals print with a leading `-`; residues never do.
    pub fn is_negative(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_negative(),
            FieldElement::Modular { .. } => false,
        }
    }

    pub fn abs(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.abs()),
            m => m.clone(),
        }
    }

    /// Stable integer image used for deterministic enumeration over GF(p).
    pub fn residue(&self) -> Option<u64> {
        match self {
            FieldElement::Modular { value, .. } => Some(*value),
            FieldElement::Rational(_) => None,
        }
    }

    fn check(&self, other: &FieldElement) {
        assert_eq!(
            self.domain(),
            other.domain(),
            "field elements from different domains"
        );
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElement::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a + b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular { value: (a + b) % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a - b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular { value: (a + modulus - b) % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.check(rhs);
        match (self, rhs) {
            (FieldElement::Rational(a), FieldElement::Rational(b)) => FieldElement::Rational(a * b),
            (FieldElement::Modular { value: a, modulus }, FieldElement::Modular { value: b, .. }) => {
                FieldElement::Modular { value: a * b % modulus, modulus: *modulus }
            }
            _ => unreachable!(),
        }
    }
}

impl Div for &FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        let inv = rhs.inv().expect("division by zero field element");
        self * &inv
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        match self {
            FieldElement::Rational(a) => FieldElement::Rational(-a),
            FieldElement::Modular { value, modulus } => FieldElement::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}
