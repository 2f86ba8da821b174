//! Seeded generators for randomized suites.

use std::sync::Arc;

use artin_approx::weierstrass::{x_ring, DistinguishedPolynomial};
use artin_approx::{Domain, Monomial, Polynomial, Ring, TruncatedSeries};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coef(g: &mut ChaCha8Rng, dom: &Domain) -> artin_approx::FieldElement {
    dom.from_i64(g.gen_range(-6..=6))
}

/// Random polynomial with up to `terms` terms of total degree ≤ `deg`.
pub fn polynomial(g: &mut ChaCha8Rng, ring: &Arc<Ring>, deg: u32, terms: usize) -> Polynomial {
    let n = ring.nvars();
    let dom = ring.domain();
    let mut out = Polynomial::zero(ring);
    for _ in 0..terms {
        let total = g.gen_range(0..=deg);
        let mut e = vec![0u32; n];
        for _ in 0..total {
            e[g.gen_range(0..n)] += 1;
        }
        out = &out + &Polynomial::term(ring, Monomial::new(e), coef(g, &dom));
    }
    out
}

/// Random series modulo `m^prec` with order at least `min_order`, up to
/// total degree `deg` in its support.
pub fn series(g: &mut ChaCha8Rng, ring: &Arc<Ring>, prec: u32, min_order: u32, density: f64) -> TruncatedSeries {
    let dom = ring.domain();
    let mut s = TruncatedSeries::zero(ring, prec);
    let n = ring.nvars();
    for d in min_order..prec {
        if n == 1 {
            if g.gen_bool(density) {
                s.set(&[d], coef(g, &dom));
            }
        } else {
            for i in 0..=d {
                if g.gen_bool(density) {
                    s.set(&[i, d - i], coef(g, &dom));
                }
            }
        }
    }
    s
}

/// Random unit of `k[[x,y]]` modulo `m^prec`.
pub fn unit(g: &mut ChaCha8Rng, ring: &Arc<Ring>, prec: u32) -> TruncatedSeries {
    let mut u = series(g, ring, prec, 1, 0.3);
    let dom = ring.domain();
    let mut c = dom.zero();
    while c.is_zero() {
        c = coef(g, &dom);
    }
    u.set(&[0, 0], c);
    u
}

/// Random distinguished polynomial of degree `r` with `ord a_i ≥ i`
/// (so that `ord a = r`), coefficients exact polynomials in `x`.
pub fn distinguished(g: &mut ChaCha8Rng, ring: &Arc<Ring>, r: usize, prec: u32) -> DistinguishedPolynomial {
    let xr = x_ring(ring).unwrap();
    let coeffs = (1..=r)
        .map(|i| {
            let mut a = series(g, &xr, prec, i as u32, 0.4);
            if g.gen_bool(0.5) {
                a.set(&[i as u32], coef(g, &ring.domain()));
            }
            a
        })
        .collect();
    DistinguishedPolynomial::new(ring, coeffs).unwrap()
}
