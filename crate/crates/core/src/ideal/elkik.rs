use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{jacobian, Polynomial, Ring};

use super::Ideal;

/// Subsets are enumerated exhaustively, so the equation count is capped.
pub const MAX_ELKIK_EQUATIONS: usize = 20;

/// Contribution of one subset `E` of the equations.
#[derive(Clone, Debug)]
pub struct ElkikComponent {
    /// Equation indices in `E`, increasing.
    pub rows: Vec<usize>,
    /// `|E| x |E|` minors of the Jacobian rows `E`, keyed by column set.
    pub minors: Vec<(Vec<usize>, Polynomial)>,
    /// Generators of `((f_i, i ∈ E) : I)` (a reduced basis).
    pub colon: Vec<Polynomial>,
}

#[derive(Clone, Debug)]
pub struct ElkikIdeal {
    ring: Arc<Ring>,
    pub components: Vec<ElkikComponent>,
    /// Nonzero products minor × colon generator, duplicates removed.
    pub generators: Vec<Polynomial>,
}

#[derive(Serialize)]
struct ComponentView {
    rows: Vec<usize>,
    minors: usize,
    colon: Vec<String>,
}

impl ElkikIdeal {
    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.ring, self.generators.clone()).expect("generators share the ring")
    }

    /// Compact per-subset summary for reports.
    pub fn summary_json(&self) -> serde_json::Value {
        let v: Vec<ComponentView> = self
            .components
            .iter()
            .map(|c| ComponentView {
                rows: c.rows.iter().map(|r| r + 1).collect(),
                minors: c.minors.iter().filter(|(_, m)| !m.is_zero()).count(),
                colon: c.colon.iter().map(|g| g.to_string()).collect(),
            })
            .collect();
        serde_json::to_value(v).unwrap()
    }
}

/// The Elkik ideal `Σ_E Δ_E(f)·((f_i, i ∈ E) : I)` of `fs`, summed over all
/// subsets `E` (the empty one included), differentiating with respect to
/// `diff_vars`.
pub fn elkik_ideal(fs: &[Polynomial], diff_vars: &[&str]) -> Result<ElkikIdeal> {
    let n = fs.len();
    if n == 0 {
        return Err(Error::Dimension("the Elkik ideal needs at least one equation".into()));
    }
    if n > MAX_ELKIK_EQUATIONS {
        return Err(Error::Capacity(format!(
            "{n} equations give 2^{n} subsets; at most {MAX_ELKIK_EQUATIONS} are supported"
        )));
    }
    let ring = fs[0].ring().clone();
    let jac = jacobian(fs, diff_vars)?;
    let whole = Ideal::new(&ring, fs.to_vec())?;
    let cols = diff_vars.len();

    let mut components = Vec::new();
    let mut generators: Vec<Polynomial> = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let rows: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let h = rows.len();
        let minors: Vec<(Vec<usize>, Polynomial)> = if h == 0 {
            vec![(vec![], Polynomial::one(&ring))]
        } else if h > cols {
            Vec::new()
        } else {
            crate::poly::combinations(cols, h)
                .into_iter()
                .map(|cs| {
                    let m = jac.minor(&rows, &cs);
                    (cs, m)
                })
                .collect()
        };
        let sub = Ideal::new(&ring, rows.iter().map(|&i| fs[i].clone()).collect())?;
        let colon = sub.colon(&whole)?.groebner(whole.order()).generators().to_vec();
        for (_, m) in &minors {
            if m.is_zero() {
                continue;
            }
            for k in &colon {
                let g = m * k;
                if !g.is_zero() && !generators.contains(&g) {
                    generators.push(g);
                }
            }
        }
        components.push(ElkikComponent { rows, minors, colon });
    }
    Ok(ElkikIdeal { ring, components, generators })
}
