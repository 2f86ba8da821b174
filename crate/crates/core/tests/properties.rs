mod common;

use std::sync::Arc;

use artin_approx::poly::{Degree, PolyMatrix};
use artin_approx::series::{evaluate, parse_series};
use artin_approx::solver::{build_one_var_system, tougeron_refine};
use artin_approx::weierstrass::{prepare, recompose, regularize, w_divide, x_ring};
use artin_approx::{parse_polynomial, Domain, Polynomial, Ring, SeriesVector, TruncatedSeries};
use common::random;
use proptest::prelude::*;
use rand::Rng;

fn xy() -> Arc<Ring> {
    Ring::new(&["x", "y"], Domain::Rational).unwrap()
}

fn xyz() -> Arc<Ring> {
    Ring::new(&["x", "y", "z"], Domain::Rational).unwrap()
}

fn lb(s: &TruncatedSeries) -> u32 {
    s.order().lower_bound()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_laws(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let r = xyz();
        let (p, q, s) = (random::polynomial(&mut g, &r, 4, 4), random::polynomial(&mut g, &r, 4, 4), random::polynomial(&mut g, &r, 3, 3));
        prop_assert_eq!(&(&p + &q) * &s, &(&p * &s) + &(&q * &s));
        if let (Degree::Finite(a), Degree::Finite(b)) = (p.degree(), q.degree()) {
            prop_assert_eq!((&p * &q).degree(), Degree::Finite(a + b));
        }
        for v in 0..3 {
            let lhs = (&p * &q).derivative(v);
            let rhs = &(&p * &q.derivative(v)) + &(&q * &p.derivative(v));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn minors_survive_transposition(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let r = xyz();
        let entries: Vec<Polynomial> = (0..9).map(|_| random::polynomial(&mut g, &r, 2, 2)).collect();
        let m = PolyMatrix::new(&r, 3, 3, entries).unwrap();
        for h in 1..=3 {
            let norm = |v: Vec<Polynomial>| {
                let mut out: Vec<String> = v
                    .into_iter()
                    .filter(|p| !p.is_zero())
                    .map(|p| {
                        let a = p.to_string();
                        let b = (-&p).to_string();
                        if a < b { a } else { b }
                    })
                    .collect();
                out.sort();
                out.dedup();
                out
            };
            prop_assert_eq!(norm(m.minors(h)), norm(m.transpose().minors(h)));
        }
    }

    #[test]
    fn series_precision_discipline(seed in any::<u64>(), n in 3u32..10) {
        let mut g = random::rng(seed);
        let r = xy();
        let a = random::series(&mut g, &r, n + 4, 0, 0.5);
        let b = random::series(&mut g, &r, n + 4, 0, 0.5);
        let hi = &(&a * &b) + &a;
        let lo = &(&a.truncate(n) * &b.truncate(n)) + &a.truncate(n);
        prop_assert_eq!(hi.truncate(n), lo);
        if let Some(ai) = a.inverse() {
            prop_assert_eq!(ai.truncate(n), a.truncate(n).inverse().unwrap());
        }
    }

    #[test]
    fn distance_is_ultrametric(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let r = xy();
        let u = random::series(&mut g, &r, 10, 0, 0.3);
        let (o1, o2) = (g.gen_range(0..6), g.gen_range(0..6));
        let v = &u + &random::series(&mut g, &r, 10, o1, 0.3);
        let w = &v + &random::series(&mut g, &r, 10, o2, 0.3);
        prop_assert!(lb(&(&u - &w)) >= lb(&(&u - &v)).min(lb(&(&v - &w))));
        prop_assert_eq!(lb(&(&u - &v)), lb(&(&v - &u)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let fr = xyz();
        let sr = xy();
        let f = random::polynomial(&mut g, &fr, 3, 4);
        let h = random::polynomial(&mut g, &fr, 3, 4);
        let pt = SeriesVector::new(vec![random::series(&mut g, &sr, 8, 1, 0.4)]).unwrap();
        let ev = |p: &Polynomial| evaluate(p, &pt, &["z"]).unwrap();
        prop_assert_eq!(ev(&(&f * &h)), &ev(&f) * &ev(&h));
        prop_assert_eq!(ev(&(&f + &h)), &ev(&f) + &ev(&h));
    }

    #[test]
    fn preparation_round_trip(seed in any::<u64>(), r in 1usize..4, n in 8u32..16) {
        let mut g = random::rng(seed);
        let ring = xy();
        let u = random::unit(&mut g, &ring, n);
        let a = random::distinguished(&mut g, &ring, r, n + 2);
        let (u2, a2) = prepare(&(&u * &a.to_series()).truncate(n), n).unwrap();
        prop_assert_eq!(u2, u.truncate(n - r as u32));
        for (i, (x, y)) in a.coeffs().iter().zip(a2.coeffs()).enumerate() {
            prop_assert_eq!(y, &x.truncate(n - r as u32 + i as u32 + 1));
        }
    }

    #[test]
    fn division_identity_and_uniqueness(seed in any::<u64>(), r in 1usize..4, n in 6u32..14) {
        let mut g = random::rng(seed);
        let ring = xy();
        let a = random::distinguished(&mut g, &ring, r, n + 2);
        let dividend = random::series(&mut g, &ring, n, 0, 0.4);
        let first = w_divide(&dividend, &a, n).unwrap();
        prop_assert_eq!(recompose(&a, &first.0, &first.1).truncate(n), dividend.clone());
        prop_assert_eq!(first, w_divide(&dividend, &a, n).unwrap());
    }

    #[test]
    fn division_by_a_low_order_polynomial(seed in any::<u64>(), n in 6u32..12) {
        // y^2 + x: ord a = 1 < r, so only the weighted precision survives
        let mut g = random::rng(seed);
        let ring = xy();
        let xr = x_ring(&ring).unwrap();
        let a = artin_approx::weierstrass::DistinguishedPolynomial::new(
            &ring,
            vec![TruncatedSeries::zero(&xr, 3 * n), parse_series(&xr, &format!("x + O(m^{})", 3 * n)).unwrap()],
        )
        .unwrap();
        let dividend = random::series(&mut g, &ring, n, 0, 0.4);
        let (q, rem) = w_divide(&dividend, &a, n).unwrap();
        let back = recompose(&a, &q, &rem);
        let p = back.precision().min(n);
        prop_assert!(p >= n / 2);
        prop_assert_eq!(back.truncate(p), dividend.truncate(p));
    }

    #[test]
    fn regularization_keeps_the_order(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let ring = xy();
        let mut u = random::series(&mut g, &ring, 12, 2, 0.3);
        u.set(&[3, 0], Domain::Rational.from_i64(1));
        let (change, v) = regularize(&u, seed).unwrap();
        prop_assert_eq!(v.order(), u.order());
        prop_assert_eq!(change.inverse().apply_series(&v), u);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn newton_contraction(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let fr = xyz();
        let sr = xy();
        let zeta = &random::polynomial(&mut g, &sr, 3, 3) * &parse_polynomial(&sr, "x + y").unwrap();
        let a = g.gen_range(1..=2u32);
        let b = a + 2 + g.gen_range(0..=2u32);
        let z = Polynomial::var(&fr, 2);
        let lin = &z - &zeta.embed(&fr).unwrap();
        let f = &lin * &(&lin - &parse_polynomial(&fr, &format!("x^{a} + y^{a}")).unwrap());
        let pert = parse_polynomial(&sr, &format!("(x^{a} + y^{a})*(x^{b} - y^{b})")).unwrap();
        let pt = TruncatedSeries::from_polynomial(&(&zeta + &pert), 24).unwrap();
        let zbar = SeriesVector::new(vec![pt]).unwrap();
        let cert = tougeron_refine(std::slice::from_ref(&f), &["z"], &[0], &[0], &zbar, 2, 18).unwrap();
        prop_assert!(cert.is_certified());
        prop_assert!(cert.min_distance().lower_bound() >= 2);
        let w = cert.delta_order;
        for s in cert.trace.windows(2) {
            if s[1].is_finite() {
                prop_assert!(s[1].lower_bound() + 2 * w >= 2 * s[0].lower_bound(), "{:?}", cert.trace);
            }
        }
        prop_assert!(!evaluate(&f, &cert.refined, &["z"]).unwrap().order().is_finite());
    }

    #[test]
    fn one_variable_system_is_faithful(seed in any::<u64>()) {
        let mut g = random::rng(seed);
        let fr = xyz();
        let sr = xy();
        let n = 14;
        let h = random::polynomial(&mut g, &sr, 2, 3).embed(&fr).unwrap();
        let f = &Polynomial::var(&fr, 2).pow(2) - &(&parse_polynomial(&fr, "x^2").unwrap() * &h);
        let delta = f.derivative(2);
        let mut zb = random::series(&mut g, &sr, n, 1, 0.4);
        zb.set(&[0, 1], Domain::Rational.from_i64(1));
        let pt = SeriesVector::new(vec![zb.clone()]).unwrap();
        let u = evaluate(&(&delta * &delta), &pt, &["z"]).unwrap();
        let Ok((_, dist)) = prepare(&u, n) else { return Ok(()) };
        let (_, rem) = w_divide(&zb, &dist, n).unwrap();
        let sys = build_one_var_system(std::slice::from_ref(&f), &["z"], &[0], &delta, &dist, std::slice::from_ref(&rem), 2).unwrap();
        // z* = Σ_j z̄_j y^j, and f(z*) mod ā against the F-equations at the point
        let mut zstar = TruncatedSeries::zero(&sr, n);
        for (j, c) in rem.iter().enumerate() {
            for (e, v) in c.terms() {
                if e[0] + (j as u32) < n {
                    zstar.set(&[e[0], j as u32], v);
                }
            }
        }
        let fz = evaluate(&f, &SeriesVector::new(vec![zstar]).unwrap(), &["z"]).unwrap();
        let (_, frem) = w_divide(&fz, &dist, n).unwrap();
        let refs = sys.unknown_refs();
        for (l, want) in frem.iter().enumerate() {
            let k = sys.labels.iter().position(|s| *s == format!("F_{{1,{l}}}")).unwrap();
            let got = evaluate(&sys.equations[k], &sys.point, &refs).unwrap();
            let p = want.precision().min(got.precision());
            prop_assert_eq!(got.truncate(p), want.truncate(p), "l = {}", l);
        }
    }
}
