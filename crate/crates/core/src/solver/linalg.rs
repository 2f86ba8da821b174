//! Small dense linear algebra over truncated series.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{PolyMatrix, Ring};
use crate::series::{Evaluator, OrderValue, TruncatedSeries};

pub type SeriesMatrix = Vec<Vec<TruncatedSeries>>;

/// Entries `rows × cols` of a polynomial matrix at the evaluator's point.
pub fn eval_matrix(ev: &mut Evaluator, m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<SeriesMatrix> {
    rows.iter()
        .map(|&r| cols.iter().map(|&c| ev.eval(m.get(r, c))).collect())
        .collect()
}

fn one_like(ring: &Arc<Ring>, prec: u32) -> TruncatedSeries {
    TruncatedSeries::one(ring, prec)
}

/// Determinant: cofactor expansion up to size 4, fraction-free
/// elimination with exact divisions beyond.
pub fn det(m: &SeriesMatrix, ring: &Arc<Ring>, prec: u32) -> Result<TruncatedSeries> {
    let n = m.len();
    match n {
        0 => Ok(one_like(ring, prec)),
        1 => Ok(m[0][0].clone()),
        2 => Ok(&(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])),
        3 | 4 => {
            let mut acc = TruncatedSeries::zero(ring, prec);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let t = &m[0][j] * &det(&minor(m, 0, j), ring, prec)?;
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            Ok(acc)
        }
        _ => bareiss(m.clone(), ring, prec),
    }
}

fn bareiss(mut a: SeriesMatrix, ring: &Arc<Ring>, prec: u32) -> Result<TruncatedSeries> {
    let n = a.len();
    let mut negate = false;
    let mut prev = one_like(ring, prec);
    for k in 0..n - 1 {
        let pivot = (k..n).min_by_key(|&i| match a[i][k].order() {
            OrderValue::Finite(o) => (0, o),
            OrderValue::AtLeast(_) => (1, 0),
        });
        let p = pivot.expect("nonempty range");
        if !a[p][k].order().is_finite() {
            return Ok(TruncatedSeries::zero(ring, prec));
        }
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .ok_or_else(|| Error::Precision("fraction-free elimination lost exactness".into()))?;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -&d } else { d })
}

fn minor(m: &SeriesMatrix, row: usize, col: usize) -> SeriesMatrix {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| r.iter().enumerate().filter(|(j, _)| *j != col).map(|(_, v)| v.clone()).collect())
        .collect()
}

/// Adjugate, so that `m · adj(m) = det(m) · 1`.
pub fn adjugate(m: &SeriesMatrix, ring: &Arc<Ring>, prec: u32) -> Result<SeriesMatrix> {
    let n = m.len();
    if n == 1 {
        return Ok(vec![vec![one_like(ring, prec)]]);
    }
    let mut out = vec![vec![TruncatedSeries::zero(ring, prec); n]; n];
    for i in 0..n {
        for j in 0..n {
            let c = det(&minor(m, i, j), ring, prec)?;
            out[j][i] = if (i + j) % 2 == 0 { c } else { -&c };
        }
    }
    Ok(out)
}

pub fn mat_mul(a: &SeriesMatrix, b: &SeriesMatrix, ring: &Arc<Ring>, prec: u32) -> SeriesMatrix {
    let (n, k, p) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![TruncatedSeries::zero(ring, prec); p]; n];
    for i in 0..n {
        for j in 0..p {
            for t in 0..k {
                if !a[i][t].is_zero() && !b[t][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][t] * &b[t][j]);
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &SeriesMatrix, v: &[TruncatedSeries], ring: &Arc<Ring>, prec: u32) -> Vec<TruncatedSeries> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .filter(|(x, y)| !x.is_zero() && !y.is_zero())
                .fold(TruncatedSeries::zero(ring, prec), |acc, (x, y)| &acc + &(x * y))
        })
        .collect()
}

/// Solves `m · v = rhs` when elimination finds unit pivots; `None` otherwise.
pub fn solve_unit(m: &SeriesMatrix, rhs: &[TruncatedSeries]) -> Option<Vec<TruncatedSeries>> {
    let n = m.len();
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for k in 0..n {
        let p = (k..n).find(|&i| a[i][k].order() == OrderValue::Finite(0))?;
        a.swap(p, k);
        b.swap(p, k);
        let inv = a[k][k].inverse()?;
        for j in k..n {
            a[k][j] = &a[k][j] * &inv;
        }
        b[k] = &b[k] * &inv;
        for i in 0..n {
            if i == k || a[i][k].is_zero() {
                continue;
            }
            let f = a[i][k].clone();
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] = &a[i][j] - &t;
            }
            let t = &f * &b[k];
            b[i] = &b[i] - &t;
        }
    }
    Some(b)
}

/// Rows and columns of a nonsingular maximal submatrix, found by
/// fraction-free elimination with pivots of least order.
pub fn rank_profile(m: &SeriesMatrix) -> (Vec<usize>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.clone();
    let mut used_r = vec![false; rows];
    let mut used_c = vec![false; cols];
    let (mut rs, mut cs) = (Vec::new(), Vec::new());
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in (0..rows).filter(|&i| !used_r[i]) {
            for j in (0..cols).filter(|&j| !used_c[j]) {
                if let OrderValue::Finite(o) = a[i][j].order() {
                    if best.is_none_or(|(b, _, _)| o < b) {
                        best = Some((o, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        used_r[pi] = true;
        used_c[pj] = true;
        rs.push(pi);
        cs.push(pj);
        let prow = a[pi].clone();
        for i in (0..rows).filter(|&i| !used_r[i]) {
            let f = a[i][pj].clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..cols {
                a[i][j] = &(&prow[pj] * &a[i][j]) - &(&f * &prow[j]);
            }
        }
    }
    rs.sort_unstable();
    cs.sort_unstable();
    (rs, cs)
}
