use crate::error::{Error, Result};
use crate::poly::{Degree, Monomial, Polynomial};

/// `P = A·Q + R` for `A = V^r + A_1 V^(r−1) + … + A_r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenericDivisionResult {
    pub quotient: Polynomial,
    pub remainder: Polynomial,
}

/// Divides `p` by the monic `A(V)` whose coefficients are the variables
/// `a_vars`, by peeling off the leading V-term: `P_e·V^e` is replaced by
/// `−P_e·V^(e−r)·(A_1 V^(r−1) + … + A_r)` until `deg_V < r`.
pub fn generic_euclid(p: &Polynomial, r: usize, v: &str, a_vars: &[&str]) -> Result<GenericDivisionResult> {
    if a_vars.len() != r {
        return Err(Error::Dimension(format!("{} coefficient variables for degree {r}", a_vars.len())));
    }
    let ring = p.ring();
    let iv = ring.require(v)?;
    let ia: Vec<usize> = a_vars.iter().map(|a| ring.require(a)).collect::<Result<_>>()?;
    if ia.contains(&iv) {
        return Err(Error::Config(format!("`{v}` is both the division variable and a coefficient")));
    }
    let mut coeffs = p.coefficients_in(iv);
    let mut quotient = Polynomial::zero(ring);
    let vpow = |e: usize| Monomial::var(ring.nvars(), iv, e as u32);
    let one = ring.domain().one();
    for e in (r..coeffs.len()).rev() {
        let ce = std::mem::replace(&mut coeffs[e], Polynomial::zero(ring));
        if ce.is_zero() {
            continue;
        }
        quotient = &quotient + &ce.mul_term(&vpow(e - r), &one);
        for (i, &a) in ia.iter().enumerate() {
            let t = &ce * &Polynomial::var(ring, a);
            coeffs[e - i - 1] = &coeffs[e - i - 1] - &t;
        }
    }
    let mut remainder = Polynomial::zero(ring);
    for (e, c) in coeffs.iter().enumerate().take(r) {
        remainder = &remainder + &c.mul_term(&vpow(e), &one);
    }
    debug_assert!(remainder.degree_in(iv).is_none_or(|d| (d as usize) < r));
    if let (Degree::Finite(dr), Degree::Finite(dp)) = (remainder.degree(), p.degree()) {
        if dr > dp {
            return Err(Error::Precondition(format!("remainder degree {dr} exceeds dividend degree {dp}")));
        }
    }
    Ok(GenericDivisionResult { quotient, remainder })
}
