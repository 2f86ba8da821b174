use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::poly::Monomial;

/// Monomial orders used by the Gröbner engine. Variables are ranked by
/// their position in the ring, first variable largest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[derive(Default)]
pub enum MonomialOrder {
    /// Graded reverse lexicographic.
    #[default]
    DegRevLex,
    Lex,
    /// Elimination order: the first `split` variables compared first
    /// (degrevlex inside each block).
    Block { split: usize },
}


fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    match da.cmp(&db) {
        Ordering::Equal => {}
        o => return o,
    }
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            // smaller exponent in the last differing variable is larger
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (a, b) = (a.exps(), b.exps());
        match *self {
            MonomialOrder::DegRevLex => grevlex(a, b),
            MonomialOrder::Lex => a.cmp(b),
            MonomialOrder::Block { split } => {
                let s = split.min(a.len());
                grevlex(&a[..s], &b[..s]).then_with(|| grevlex(&a[s..], &b[s..]))
            }
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<MonomialOrder> {
        match s.trim() {
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            other => {
                if let Some(n) = other.strip_prefix("block:") {
                    let split = n
                        .trim()
                        .parse()
                        .map_err(|_| crate::error::Error::Config(format!("bad block split `{n}`")))?;
                    return Ok(MonomialOrder::Block { split });
                }
                Err(crate::error::Error::Config(format!("unknown monomial order `{other}`")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial::new(e.to_vec())
    }

    #[test]
    fn grevlex_examples() {
        let o = MonomialOrder::DegRevLex;
        // x^2 > x*y > y^2 > x > y > 1 in two variables
        let seq = [m(&[2, 0]), m(&[1, 1]), m(&[0, 2]), m(&[1, 0]), m(&[0, 1]), m(&[0, 0])];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater);
        }
        // x*z^... : in three variables x*y*z vs y^3 have equal degree; y^3 has z-exponent 0 so is larger
        assert_eq!(o.cmp(&m(&[0, 3, 0]), &m(&[1, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn block_eliminates_first_block() {
        let o = MonomialOrder::Block { split: 1 };
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 5, 5])), Ordering::Greater);
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative(a in prop::collection::vec(0u32..4, 3),
                                     b in prop::collection::vec(0u32..4, 3),
                                     c in prop::collection::vec(0u32..4, 3)) {
            for o in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Block { split: 1 }] {
                let (a, b, c) = (m(&a), m(&b), m(&c));
                prop_assert_eq!(o.cmp(&a, &b), o.cmp(&a.mul(&c), &b.mul(&c)));
                prop_assert_ne!(o.cmp(&a.mul(&c), &Monomial::one(3)), Ordering::Less);
            }
        }
    }
}
