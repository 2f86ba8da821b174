//! Buchberger's algorithm with the product and chain criteria and the
//! normal selection strategy.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::field::FieldElement;
use crate::poly::{Monomial, Polynomial, Ring};

use super::MonomialOrder;

/// Sort key realising `order` as plain lexicographic comparison.
pub(crate) fn order_key(order: &MonomialOrder, m: &Monomial) -> Vec<i64> {
    fn grevlex(out: &mut Vec<i64>, e: &[u32]) {
        out.push(e.iter().map(|&v| v as i64).sum());
        out.extend(e.iter().rev().map(|&v| -(v as i64)));
    }
    let e = m.exps();
    let mut out = Vec::with_capacity(e.len() + 2);
    match *order {
        MonomialOrder::DegRevLex => grevlex(&mut out, e),
        MonomialOrder::Lex => out.extend(e.iter().map(|&v| v as i64)),
        MonomialOrder::Block { split } => {
            let s = split.min(e.len());
            grevlex(&mut out, &e[..s]);
            grevlex(&mut out, &e[s..]);
        }
    }
    out
}

/// Terms sorted descending, leading coefficient one.
#[derive(Clone, Debug)]
pub(crate) struct Sorted {
    pub terms: Vec<(Monomial, FieldElement)>,
}

impl Sorted {
    pub fn from_poly(p: &Polynomial, order: &MonomialOrder) -> Sorted {
        let mut terms = p.sorted_terms(order);
        if let Some((_, lc)) = terms.first() {
            if !lc.is_one() {
                let inv = lc.inv().expect("nonzero leading coefficient");
                for t in terms.iter_mut() {
                    t.1 = &t.1 * &inv;
                }
            }
        }
        Sorted { terms }
    }

    pub fn lead(&self) -> &Monomial {
        &self.terms[0].0
    }

    pub fn to_poly(&self, ring: &Arc<Ring>) -> Polynomial {
        Polynomial::from_terms(ring, self.terms.iter().cloned())
    }
}

/// Fully reduces `terms` by `basis`; the result is sorted descending and
/// not normalised.
pub(crate) fn reduce(
    terms: impl IntoIterator<Item = (Monomial, FieldElement)>,
    basis: &[Sorted],
    order: &MonomialOrder,
) -> Vec<(Monomial, FieldElement)> {
    let mut work: BTreeMap<Vec<i64>, (Monomial, FieldElement)> = BTreeMap::new();
    let add = |work: &mut BTreeMap<Vec<i64>, (Monomial, FieldElement)>, m: Monomial, c: FieldElement| {
        let k = order_key(order, &m);
        match work.get_mut(&k) {
            Some(slot) => {
                let s = &slot.1 + &c;
                if s.is_zero() {
                    work.remove(&k);
                } else {
                    slot.1 = s;
                }
            }
            None => {
                if !c.is_zero() {
                    work.insert(k, (m, c));
                }
            }
        }
    };
    for (m, c) in terms {
        add(&mut work, m, c);
    }
    let mut rem = Vec::new();
    while let Some((_, (m, c))) = work.pop_last() {
        match basis.iter().find(|g| g.lead().divides(&m)) {
            Some(g) => {
                let q = m.div(g.lead()).unwrap();
                for (gm, gc) in &g.terms[1..] {
                    add(&mut work, gm.mul(&q), -(&c * gc));
                }
            }
            None => rem.push((m, c)),
        }
    }
    rem
}

fn spoly(f: &Sorted, g: &Sorted) -> Vec<(Monomial, FieldElement)> {
    let l = f.lead().lcm(g.lead());
    let uf = l.div(f.lead()).unwrap();
    let ug = l.div(g.lead()).unwrap();
    let mut out: Vec<(Monomial, FieldElement)> = Vec::with_capacity(f.terms.len() + g.terms.len());
    out.extend(f.terms[1..].iter().map(|(m, c)| (m.mul(&uf), c.clone())));
    out.extend(g.terms[1..].iter().map(|(m, c)| (m.mul(&ug), -c)));
    out
}

/// Reduced Gröbner basis of the ideal generated by `gens`, monic and
/// sorted by decreasing leading monomial. The zero ideal gives an empty
/// basis.
pub(crate) fn groebner(ring: &Arc<Ring>, gens: &[Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let mut basis: Vec<Sorted> = Vec::new();
    let mut pairs: Vec<(usize, usize, Monomial)> = Vec::new();

    let push = |basis: &mut Vec<Sorted>, pairs: &mut Vec<(usize, usize, Monomial)>, s: Sorted| {
        let n = basis.len();
        for (i, g) in basis.iter().enumerate() {
            pairs.push((i, n, g.lead().lcm(s.lead())));
        }
        basis.push(s);
    };

    let mut input: Vec<Sorted> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| Sorted::from_poly(g, order))
        .collect();
    input.sort_by(|a, b| order.cmp(a.lead(), b.lead()));
    for s in input {
        let r = reduce(s.terms.iter().cloned(), &basis, order);
        if r.is_empty() {
            continue;
        }
        let s = Sorted::from_poly(&Polynomial::from_terms(ring, r), order);
        if s.lead().is_one() {
            return vec![Polynomial::one(ring)];
        }
        push(&mut basis, &mut pairs, s);
    }

    let mut done: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    while !pairs.is_empty() {
        // normal selection: smallest lcm first
        let (pos, _) = pairs
            .iter()
            .enumerate()
            .min_by(|a, b| order.cmp(&a.1 .2, &b.1 .2).then((a.1 .0, a.1 .1).cmp(&(b.1 .0, b.1 .1))))
            .unwrap();
        let (i, j, lcm) = pairs.swap_remove(pos);
        done.insert((i, j));
        if basis[i].lead().coprime(basis[j].lead()) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lead().divides(&lcm)
                && done.contains(&(i.min(k), i.max(k)))
                && done.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let r = reduce(spoly(&basis[i], &basis[j]), &basis, order);
        if r.is_empty() {
            continue;
        }
        let s = Sorted::from_poly(&Polynomial::from_terms(ring, r), order);
        if s.lead().is_one() {
            return vec![Polynomial::one(ring)];
        }
        push(&mut basis, &mut pairs, s);
    }

    interreduce(ring, basis, order)
}

fn interreduce(ring: &Arc<Ring>, basis: Vec<Sorted>, order: &MonomialOrder) -> Vec<Polynomial> {
    let mut minimal: Vec<Sorted> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            j != i && h.lead().divides(g.lead()) && (h.lead() != g.lead() || j < i)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    minimal.sort_by(|a, b| order.cmp(b.lead(), a.lead()));
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let head = minimal[k].terms[0].clone();
        let others: Vec<Sorted> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, s)| s.clone())
            .collect();
        let tail = reduce(minimal[k].terms[1..].iter().cloned(), &others, order);
        let mut terms = vec![head];
        terms.extend(tail);
        minimal[k] = Sorted { terms };
        out.push(minimal[k].to_poly(ring));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::poly::parse_polynomial;

    #[test]
    fn keys_agree_with_comparator() {
        let ms = [[2u32, 0, 1], [1, 1, 1], [0, 3, 0], [0, 0, 3], [1, 0, 0], [0, 0, 0]];
        for o in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Block { split: 2 }] {
            for a in &ms {
                for b in &ms {
                    let (a, b) = (Monomial::new(a.to_vec()), Monomial::new(b.to_vec()));
                    assert_eq!(order_key(&o, &a).cmp(&order_key(&o, &b)), o.cmp(&a, &b));
                }
            }
        }
    }

    #[test]
    fn one_buchberger_step() {
        let r = Ring::new(&["x", "y"], Domain::Rational).unwrap();
        let gens = vec![parse_polynomial(&r, "x^2 + y").unwrap(), parse_polynomial(&r, "x*y").unwrap()];
        let b = groebner(&r, &gens, &MonomialOrder::DegRevLex);
        let shown: Vec<String> = b.iter().map(|p| p.to_string()).collect();
        assert_eq!(shown, ["x^2 + y", "x*y", "y^2"]);
    }
}
