use std::sync::Arc;

use crate::error::{Error, Result};

use super::{Polynomial, Ring};

/// Dense matrix of polynomials over one ring.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    ring: Arc<Ring>,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn new(ring: &Arc<Ring>, rows: usize, cols: usize, entries: Vec<Polynomial>) -> Result<PolyMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        for e in &entries {
            Ring::check_compatible(ring, e.ring())?;
        }
        Ok(PolyMatrix { rows, cols, ring: ring.clone(), entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn get(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Polynomial] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, ring: self.ring.clone(), entries }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: rows.len(), cols: cols.len(), ring: self.ring.clone(), entries }
    }

    /// Determinant of the square submatrix on `rows` x `cols`.
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Polynomial {
        determinant(&self.submatrix(rows, cols))
    }

    /// All `h x h` minors with their row and column index sets, in
    /// lexicographic order of (rows, cols). `h = 0` gives the single
    /// empty minor 1; `h` beyond either dimension gives nothing.
    pub fn indexed_minors(&self, h: usize) -> Vec<(Vec<usize>, Vec<usize>, Polynomial)> {
        if h == 0 {
            return vec![(vec![], vec![], Polynomial::one(&self.ring))];
        }
        if h > self.rows || h > self.cols {
            return Vec::new();
        }
        let row_sets = combinations(self.rows, h);
        let col_sets = combinations(self.cols, h);
        let mut out = Vec::new();
        for rs in &row_sets {
            for cs in &col_sets {
                out.push((rs.clone(), cs.clone(), self.minor(rs, cs)));
            }
        }
        out
    }

    pub fn minors(&self, h: usize) -> Vec<Polynomial> {
        self.indexed_minors(h).into_iter().map(|(_, _, p)| p).collect()
    }
}

/// Jacobian with rows indexed by `fs` and columns by `diff_vars`.
pub fn jacobian(fs: &[Polynomial], diff_vars: &[&str]) -> Result<PolyMatrix> {
    let ring = fs
        .first()
        .map(|f| f.ring().clone())
        .ok_or_else(|| Error::Dimension("jacobian of an empty system".into()))?;
    let mut idx = Vec::with_capacity(diff_vars.len());
    for v in diff_vars {
        let i = ring.require(v)?;
        if idx.contains(&i) {
            return Err(Error::Config(format!("variable `{v}` listed twice")));
        }
        idx.push(i);
    }
    let mut entries = Vec::with_capacity(fs.len() * idx.len());
    for f in fs {
        Ring::check_compatible(&ring, f.ring())?;
        for &i in &idx {
            entries.push(f.derivative(i));
        }
    }
    PolyMatrix::new(&ring, fs.len(), idx.len(), entries)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exact determinant: cofactor expansion up to 4x4, fraction-free
/// Bareiss elimination above that.
pub fn determinant(m: &PolyMatrix) -> Polynomial {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    if m.rows <= 4 {
        cofactor(m)
    } else {
        bareiss(m)
    }
}

fn cofactor(m: &PolyMatrix) -> Polynomial {
    let n = m.rows;
    match n {
        0 => Polynomial::one(&m.ring),
        1 => m.get(0, 0).clone(),
        2 => &(m.get(0, 0) * m.get(1, 1)) - &(m.get(0, 1) * m.get(1, 0)),
        _ => {
            let mut acc = Polynomial::zero(&m.ring);
            let rest: Vec<usize> = (1..n).collect();
            for c in 0..n {
                let a = m.get(0, c);
                if a.is_zero() {
                    continue;
                }
                let cols: Vec<usize> = (0..n).filter(|&j| j != c).collect();
                let sub = cofactor(&m.submatrix(&rest, &cols));
                let t = a * &sub;
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

fn bareiss(m: &PolyMatrix) -> Polynomial {
    let n = m.rows;
    let mut a: Vec<Vec<Polynomial>> = (0..n).map(|r| m.row(r).to_vec()).collect();
    let mut prev = Polynomial::one(&m.ring);
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Polynomial::zero(&m.ring),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss step is an exact division");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -&d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Domain;
    use crate::poly::parse_polynomial;

    fn ring() -> Arc<Ring> {
        Ring::new(&["x", "y", "z", "t"], Domain::Rational).unwrap()
    }

    fn polys(r: &Arc<Ring>, src: &[&str]) -> Vec<Polynomial> {
        src.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()
    }

    #[test]
    fn jacobian_of_the_monomial_system() {
        let r = ring();
        let fs = polys(&r, &["x*z", "x*t", "y*z", "y*t"]);
        let m = jacobian(&fs, &["x", "y", "z", "t"]).unwrap();
        // rows are equations; the transpose is the displayed matrix
        let shown = m.transpose();
        let expect = [["z", "t", "0", "0"], ["0", "0", "z", "t"], ["x", "0", "y", "0"], ["0", "x", "0", "y"]];
        for (i, row) in expect.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert_eq!(shown.get(i, j), &parse_polynomial(&r, e).unwrap());
            }
        }
        assert!(determinant(&m).is_zero());
    }

    #[test]
    fn jacobian_of_the_sheared_system() {
        let r = ring();
        let hs = polys(&r, &["x*(z+t)", "x*(z-t)", "y*z", "y*t"]);
        let n = jacobian(&hs, &["x", "y", "z", "t"]).unwrap().transpose();
        let first_col: Vec<String> = (0..4).map(|i| n.get(i, 0).to_string()).collect();
        assert_eq!(first_col, ["z + t", "0", "x", "x"]);
        let first_row: Vec<String> = (0..4).map(|j| n.get(0, j).to_string()).collect();
        assert_eq!(first_row, ["z + t", "z - t", "0", "0"]);
    }

    #[test]
    fn constants_have_zero_jacobian_rows() {
        let r = ring();
        let m = jacobian(&polys(&r, &["1"]), &["x", "y"]).unwrap();
        assert!(m.row(0).iter().all(Polynomial::is_zero));
    }

    #[test]
    fn minors_of_degenerate_sizes() {
        let r = ring();
        let m = jacobian(&polys(&r, &["x*z", "y*t"]), &["x", "y", "z", "t"]).unwrap();
        assert_eq!(m.minors(0), vec![Polynomial::one(&r)]);
        assert!(m.minors(3).is_empty());
        assert_eq!(m.minors(2).len(), 6);
    }

    #[test]
    fn two_by_two_minors_contain_the_listed_ones() {
        let r = ring();
        let fs = polys(&r, &["x*z", "x*t", "y*z", "y*t"]);
        let m = jacobian(&fs, &["x", "y", "z", "t"]).unwrap();
        let all = m.minors(2);
        for want in ["x^2", "y^2", "z^2", "t^2", "x*y", "z*t"] {
            let w = parse_polynomial(&r, want).unwrap();
            assert!(all.iter().any(|p| *p == w || *p == -&w), "missing {want}");
        }
    }

    #[test]
    fn bareiss_agrees_with_cofactor() {
        let r = ring();
        let src = [
            "x", "y", "1", "z", "t", "x+y", "2", "0", "y", "t", "z", "x*y", "1", "x", "y", "t", "0", "z", "1",
            "x", "y", "1", "z", "t", "3",
        ];
        let m = PolyMatrix::new(&r, 5, 5, polys(&r, &src)).unwrap();
        let mut lap = Polynomial::zero(&r);
        let rest: Vec<usize> = (1..5).collect();
        for c in 0..5 {
            let cols: Vec<usize> = (0..5).filter(|&j| j != c).collect();
            let t = m.get(0, c) * &m.minor(&rest, &cols);
            lap = if c % 2 == 0 { &lap + &t } else { &lap - &t };
        }
        assert_eq!(determinant(&m), lap);
    }
}
