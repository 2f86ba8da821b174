#![allow(dead_code)]

pub mod random;

use std::sync::Arc;

use artin_approx::{parse_polynomial, Domain, Ideal, Polynomial, Ring};

pub fn ring4() -> Arc<Ring> {
    Ring::new(&["x", "y", "z", "t"], Domain::Rational).unwrap()
}

pub fn polys(r: &Arc<Ring>, src: &[&str]) -> Vec<Polynomial> {
    src.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()
}

pub fn ideal(r: &Arc<Ring>, src: &[&str]) -> Ideal {
    Ideal::new(r, polys(r, src)).unwrap()
}

pub const F_SYSTEM: [&str; 4] = ["x*z", "x*t", "y*z", "y*t"];
pub const H_SYSTEM: [&str; 4] = ["x*(z+t)", "x*(z-t)", "y*z", "y*t"];
pub const VARS: [&str; 4] = ["x", "y", "z", "t"];

pub const H_F_EXPECTED: [&str; 6] = ["x^3", "y^3", "z^3", "t^3", "(x*y)^2", "(z*t)^2"];
pub const H_H_EXPECTED: [&str; 7] =
    ["x^3", "y^3", "(x*y)^2", "z^2*(z+t)^2", "t^2*(z+t)^2", "z^2*(z-t)^2", "t^2*(z-t)^2"];

/// Pairwise colon ideals `((f_i, f_j) : I)` modulo `I`, indexed from 1.
pub const F_COLONS: [((usize, usize), &[&str]); 6] = [
    ((1, 2), &["x"]),
    ((1, 3), &["z"]),
    ((1, 4), &["x*y", "z*t"]),
    ((2, 3), &["x*y", "z*t"]),
    ((2, 4), &["t"]),
    ((3, 4), &["y"]),
];

pub const H_COLONS: [((usize, usize), &[&str]); 6] = [
    ((1, 2), &["x"]),
    ((1, 3), &["x*y", "z*(z+t)"]),
    ((1, 4), &["x*y", "t*(z+t)"]),
    ((2, 3), &["x*y", "z*(z-t)"]),
    ((2, 4), &["x*y", "t*(z-t)"]),
    ((3, 4), &["y"]),
];

/// `a + i == b + i` as ideals.
pub fn equal_mod(a: &Ideal, b: &Ideal, i: &Ideal) -> bool {
    a.sum(i).unwrap().equals(&b.sum(i).unwrap()).unwrap()
}
