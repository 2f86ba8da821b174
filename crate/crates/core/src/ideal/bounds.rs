//! Exact evaluation of the effective degree and order bounds.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Results longer than this many bits are refused with a capacity error
/// instead of being materialised.
pub const MAX_BOUND_BITS: u64 = 1 << 26;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

/// `base^exp`, refusing results beyond [`MAX_BOUND_BITS`].
fn pow_checked(base: &BigUint, exp: &BigUint) -> Result<BigUint> {
    if exp.is_zero() {
        return Ok(BigUint::one());
    }
    if base.is_zero() || base.is_one() {
        return Ok(base.clone());
    }
    let lower = (base.bits() - 1).max(1);
    let too_big = match exp.to_u64() {
        Some(e) => e.checked_mul(lower).is_none_or(|b| b > MAX_BOUND_BITS),
        None => true,
    };
    if too_big {
        return Err(Error::Capacity(format!(
            "a {}-bit number raised to the power {} exceeds {} bits",
            base.bits(),
            if exp.bits() <= 64 { exp.to_string() } else { format!("a {}-bit integer", exp.bits()) },
            MAX_BOUND_BITS
        )));
    }
    Ok(base.pow(exp.to_u32().expect("checked above")))
}

/// Pluggable one-variable approximation function `a(m, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AFn {
    /// `a(m, d) = k`.
    Constant { k: i64 },
    /// `a(m, d) = k·d`.
    DegreeMultiple { k: i64 },
    /// `a(m, d) = d^(K^m)`.
    DoublyExponential { base: u64 },
}

impl Default for AFn {
    fn default() -> Self {
        AFn::DegreeMultiple { k: 1 }
    }
}

impl AFn {
    pub fn eval(&self, m: u64, d: u64) -> Result<BigUint> {
        let v = match *self {
            AFn::Constant { k } => {
                if k <= 0 {
                    return Err(Error::Config(format!("a(m,d) = {k} is not positive")));
                }
                big(k as u64)
            }
            AFn::DegreeMultiple { k } => {
                if k <= 0 || d == 0 {
                    return Err(Error::Config(format!("a(m,d) = {k}·{d} is not positive")));
                }
                big(k as u64) * big(d)
            }
            AFn::DoublyExponential { base } => {
                if base == 0 || d == 0 {
                    return Err(Error::Config("a(m,d) = d^(K^m) needs K, d ≥ 1".into()));
                }
                pow_checked(&big(d), &pow_checked(&big(base), &big(m))?)?
            }
        };
        Ok(v)
    }
}

impl std::str::FromStr for AFn {
    type Err = Error;

    /// `const:K`, `degree:K` or `dexp:K`.
    fn from_str(s: &str) -> Result<AFn> {
        let (kind, arg) = s
            .trim()
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("a_fn `{s}` must look like `kind:value`")))?;
        let bad = || Error::Config(format!("bad a_fn parameter `{arg}`"));
        match kind.trim() {
            "const" | "constant" => Ok(AFn::Constant { k: arg.trim().parse().map_err(|_| bad())? }),
            "degree" => Ok(AFn::DegreeMultiple { k: arg.trim().parse().map_err(|_| bad())? }),
            "dexp" => Ok(AFn::DoublyExponential { base: arg.trim().parse().map_err(|_| bad())? }),
            other => Err(Error::Config(format!("unknown a_fn kind `{other}`"))),
        }
    }
}

impl std::fmt::Display for AFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AFn::Constant { k } => write!(f, "const:{k}"),
            AFn::DegreeMultiple { k } => write!(f, "degree:{k}"),
            AFn::DoublyExponential { base } => write!(f, "dexp:{base}"),
        }
    }
}

/// Degree bound for generators of a colon ideal `((f_i, i ∈ E) : I)`:
/// `(m+2)·((d+m+2)^(m+2)·d)^(2^(m+1))`.
pub fn colon_degree_bound(m: u64, d: u64) -> Result<BigUint> {
    let inner = pow_checked(&big(d + m + 2), &big(m + 2))? * big(d);
    let outer = pow_checked(&inner, &pow_checked(&big(2), &big(m + 1))?)?;
    Ok(big(m + 2) * outer)
}

/// Degree bound for generators of the Elkik ideal: the colon bound plus
/// `(m+2)(d−1)` for the minors.
pub fn elkik_degree_bound(m: u64, d: u64) -> Result<BigUint> {
    Ok(colon_degree_bound(m, d)? + big((m + 2) * d.saturating_sub(1)))
}

/// `e = elkik_degree_bound^min(n, m+1)`, the exponent with
/// `(H + I)^e ⊂ H_f + I`.
pub fn power_exponent(m: u64, d: u64, n: u64) -> Result<BigUint> {
    pow_checked(&elkik_degree_bound(m, d)?, &big(n.min(m + 1)))
}

/// `γ(m,d,s,c) = a(2(m+1)s, 4mds)·(c+2s+1)`.
pub fn gamma(m: u64, d: u64, s: u64, c: u64, a: &AFn) -> Result<BigUint> {
    Ok(a.eval(2 * (m + 1) * s, 4 * m * d * s)? * big(c + 2 * s + 1))
}

/// `(2s+1)·(4mds)^(K^(2(m+1)s))·(c+1)`.
pub fn beta_estimate(m: u64, d: u64, s: u64, c: u64, k_base: u64) -> Result<BigUint> {
    let e = pow_checked(&big(k_base), &big(2 * (m + 1) * s))?;
    Ok(big(2 * s + 1) * pow_checked(&big(4 * m * d * s), &e)? * big(c + 1))
}

/// `K^(K^c)`.
pub fn doubly_exponential_bound(k_base: u64, c: u64) -> Result<BigUint> {
    pow_checked(&big(k_base), &pow_checked(&big(k_base), &big(c))?)
}

/// `d^(K1^(m·k·c))·(c+1)`: the order threshold for an isolated singularity
/// with `(z)^k ⊂ H`, at the worst case `D = c − 1`.
pub fn isolated_singularity_bound(d: u64, m: u64, k: u64, c: u64, k1: u64) -> Result<BigUint> {
    let e = pow_checked(&big(k1), &big(m * k * c))?;
    Ok(pow_checked(&big(d), &e)? * big(c + 1))
}

/// `d^(K'^(m·h))·(c+1)`: the residual order from which a solution within
/// `m^c` is guaranteed when `ord H(z̄) = h`.
pub fn implication_bound(d: u64, m: u64, h: u64, c: u64, k_prime: u64) -> Result<BigUint> {
    let e = pow_checked(&big(k_prime), &big(m * h))?;
    Ok(pow_checked(&big(d), &e)? * big(c + 1))
}

/// A bound value, or the fact that it exceeds the materialisation cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundValue {
    Exact(BigUint),
    TooLarge,
}

impl BoundValue {
    /// Turns a capacity error into [`BoundValue::TooLarge`].
    pub fn of(r: Result<BigUint>) -> Result<BoundValue> {
        match r {
            Ok(v) => Ok(BoundValue::Exact(v)),
            Err(Error::Capacity(_)) => Ok(BoundValue::TooLarge),
            Err(e) => Err(e),
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            BoundValue::Exact(v) => Some(v),
            BoundValue::TooLarge => None,
        }
    }
}

impl std::fmt::Display for BoundValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BoundValue::Exact(v) => write!(f, "{v}"),
            BoundValue::TooLarge => write!(f, "> 2^{MAX_BOUND_BITS}"),
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// All bounds for one parameter set, as exact decimal integers.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub m: u64,
    pub d: u64,
    pub n: u64,
    pub s: u64,
    pub c: u64,
    pub a_fn: String,
    pub k_base: u64,
    pub colon_degree_bound: BoundValue,
    pub elkik_degree_bound: BoundValue,
    pub power_exponent: BoundValue,
    pub gamma: BoundValue,
    pub beta_estimate: BoundValue,
    pub doubly_exponential_bound: BoundValue,
}

/// Evaluates every bound for `(m, d, n, s, c)`; `k_base` is the constant
/// `K` of the doubly exponential shapes.
pub fn bound_calculators(m: u64, d: u64, n: u64, s: u64, c: u64, a: &AFn, k_base: u64) -> Result<BoundReport> {
    if m == 0 || n == 0 || s == 0 {
        return Err(Error::Config("m, n and s must be at least 1".into()));
    }
    if d < 2 {
        return Err(Error::Config("d must be at least 2".into()));
    }
    if k_base < 2 {
        return Err(Error::Config("the constant K must be at least 2".into()));
    }
    Ok(BoundReport {
        m,
        d,
        n,
        s,
        c,
        a_fn: a.to_string(),
        k_base,
        colon_degree_bound: BoundValue::of(colon_degree_bound(m, d))?,
        elkik_degree_bound: BoundValue::of(elkik_degree_bound(m, d))?,
        power_exponent: BoundValue::of(power_exponent(m, d, n))?,
        gamma: BoundValue::of(gamma(m, d, s, c, a))?,
        beta_estimate: BoundValue::of(beta_estimate(m, d, s, c, k_base))?,
        doubly_exponential_bound: BoundValue::of(doubly_exponential_bound(k_base, c))?,
    })
}
