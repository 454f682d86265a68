use super::field::{Fe, FieldDesc};
use crate::error::{invalid, Result};

/// Dense row-major matrix over a finite field. Representations use the
/// convention `M(gh) = M(g) M(h)`; invariant subspaces are row spaces.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
    pub field: FieldDesc,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form of a set of rows, with pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<Fe>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon { rows: Vec::new(), pivots: Vec::new() }
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` against the basis in place; returns true if it became zero.
    pub fn reduce(&self, f: &FieldDesc, v: &mut [Fe]) -> bool {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if !c.is_zero() {
                f.axpy(v, f.neg(c), row);
            }
        }
        v.iter().all(|x| x.is_zero())
    }

    /// Insert a vector, keeping full reduced form. Returns true if the rank grew.
    pub fn insert(&mut self, f: &FieldDesc, mut v: Vec<Fe>) -> bool {
        if self.reduce(f, &mut v) {
            return false;
        }
        let pc = v.iter().position(|x| !x.is_zero()).unwrap();
        let inv = f.inv(v[pc]);
        for x in v.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if !c.is_zero() {
                f.axpy(row, f.neg(c), &v);
            }
        }
        let pos = self.pivots.iter().position(|&p| p > pc).unwrap_or(self.pivots.len());
        self.pivots.insert(pos, pc);
        self.rows.insert(pos, v);
        true
    }

    /// Coordinates of a vector known to lie in the span, read off the pivots.
    pub fn coords(&self, v: &[Fe]) -> Vec<Fe> {
        self.pivots.iter().map(|&p| v[p]).collect()
    }
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon::new()
    }
}

impl Mat {
    pub fn zero(field: &FieldDesc, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![Fe::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(field: &FieldDesc, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Fe::ONE;
        }
        m
    }

    pub fn scalar(field: &FieldDesc, n: usize, c: Fe) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(field: &FieldDesc, rows: &[Vec<Fe>], cols: usize) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data, field: field.clone() }
    }

    pub fn from_ints(field: &FieldDesc, rows: usize, cols: usize, vals: &[i64]) -> Mat {
        assert_eq!(vals.len(), rows * cols);
        Mat { rows, cols, data: vals.iter().map(|&v| field.from_int(v)).collect(), field: field.clone() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = Mat::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if !a.is_zero() {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.rows);
        let f = &self.field;
        let mut out = vec![Fe::ZERO; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if !a.is_zero() {
                f.axpy(&mut out, a, self.row(k));
            }
        }
        out
    }

    /// Matrix times column vector.
    pub fn vec_mul_col(&self, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(v.len(), self.cols);
        let f = &self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = Fe::ZERO;
                for (&a, &b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = f.add(acc, f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { rows: self.rows, cols: self.cols, data, field: f.clone() }
    }

    pub fn scale(&self, c: Fe) -> Mat {
        let f = &self.field;
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect(), field: f.clone() }
    }

    /// `self + c * I`
    pub fn add_scalar(&self, c: Fe) -> Mat {
        assert!(self.is_square());
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = m.get(i, i);
            m.set(i, i, self.field.add(v, c));
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        out
    }

    pub fn trace(&self) -> Fe {
        assert!(self.is_square());
        (0..self.rows).fold(Fe::ZERO, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(&self.field, self.rows)
    }

    /// Replace every entry through a field embedding table.
    pub fn map_field(&self, big: &FieldDesc, table: &[Fe]) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| table[a.0 as usize]).collect(), field: big.clone() }
    }

    /// Reduced row echelon form (first nonzero pivot in column order).
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = m.get(r, j);
                m.set(r, j, f.mul(v, inv));
            }
            let pivot_row: Vec<Fe> = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let a = m.get(i, c);
                    if !a.is_zero() {
                        let cols = m.cols;
                        f.axpy(&mut m.data[i * cols..(i + 1) * cols], f.neg(a), &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` (column vectors), returned as rows.
    pub fn right_kernel(&self) -> Vec<Vec<Fe>> {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Fe::ZERO; self.cols];
            v[free] = Fe::ONE;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{v : v * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Fe>> {
        self.transpose().right_kernel()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let f = &self.field;
        let mut aug = Mat::zero(f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = Mat::zero(f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, r.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Characteristic polynomial `det(x I - A)`, coefficients low degree first, via Hessenberg form.
    pub fn charpoly(&self) -> Vec<Fe> {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut h = self.clone();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| !h.get(i, m - 1).is_zero()) else { continue };
            if i != m {
                for j in 0..n {
                    h.data.swap(i * n + j, m * n + j);
                }
                for r in 0..n {
                    h.data.swap(r * n + i, r * n + m);
                }
            }
            let piv = h.get(m, m - 1);
            let pinv = f.inv(piv);
            for i in (m + 1)..n {
                let u = f.mul(h.get(i, m - 1), pinv);
                if u.is_zero() {
                    continue;
                }
                // row_i -= u row_m
                let row_m: Vec<Fe> = h.row(m).to_vec();
                f.axpy(&mut h.data[i * n..(i + 1) * n], f.neg(u), &row_m);
                // col_m += u col_i
                for r in 0..n {
                    let v = f.add(h.get(r, m), f.mul(u, h.get(r, i)));
                    h.set(r, m, v);
                }
            }
        }
        // p[m] is the charpoly of the leading m x m block
        let mut p: Vec<Vec<Fe>> = vec![vec![Fe::ONE]];
        for m in 1..=n {
            // (x - h[m-1][m-1]) p[m-1]
            let prev = &p[m - 1];
            let mut next = vec![Fe::ZERO; m + 1];
            for (d, &c) in prev.iter().enumerate() {
                next[d + 1] = f.add(next[d + 1], c);
                next[d] = f.sub(next[d], f.mul(h.get(m - 1, m - 1), c));
            }
            let mut t = Fe::ONE;
            for i in (1..m).rev() {
                t = f.mul(t, h.get(i, i - 1));
                let coef = f.mul(t, h.get(i - 1, m - 1));
                if coef.is_zero() {
                    continue;
                }
                for (d, &c) in p[i - 1].iter().enumerate() {
                    next[d] = f.sub(next[d], f.mul(coef, c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// Evaluate a polynomial (low degree first) at this square matrix.
    pub fn eval_poly(&self, poly: &[Fe]) -> Mat {
        let n = self.rows;
        let mut acc = Mat::zero(&self.field, n, n);
        for &c in poly.iter().rev() {
            acc = acc.mul(self).add_scalar(c);
        }
        acc
    }
}

/// Roots of a polynomial lying in its field, in canonical element order.
pub fn poly_roots(f: &FieldDesc, poly: &[Fe]) -> Vec<Fe> {
    f.elements_canonical()
        .into_iter()
        .filter(|&x| {
            let mut acc = Fe::ZERO;
            for &c in poly.iter().rev() {
                acc = f.add(f.mul(acc, x), c);
            }
            acc.is_zero()
        })
        .collect()
}

/// Basis of `{X : A_i X = X B_i for all i}`.
pub fn solve_sylvester(pairs: &[(Mat, Mat)]) -> Result<Vec<Mat>> {
    let Some((a0, b0)) = pairs.first() else {
        return invalid("no matrix pairs given");
    };
    let (m, n) = (a0.rows, b0.rows);
    let f = a0.field.clone();
    for (a, b) in pairs {
        if !a.is_square() || !b.is_square() || a.rows != m || b.rows != n {
            return invalid("shape mismatch in Sylvester system");
        }
        if a.field != f || b.field != f {
            return invalid("matrices over different fields");
        }
    }
    let unknowns = m * n;
    let mut ech = Echelon::new();
    for (a, b) in pairs {
        for r in 0..m {
            for c in 0..n {
                // (A X)[r][c] - (X B)[r][c]
                let mut eq = vec![Fe::ZERO; unknowns];
                for k in 0..m {
                    let v = a.get(r, k);
                    if !v.is_zero() {
                        let idx = k * n + c;
                        eq[idx] = f.add(eq[idx], v);
                    }
                }
                for k in 0..n {
                    let v = b.get(k, c);
                    if !v.is_zero() {
                        let idx = r * n + k;
                        eq[idx] = f.sub(eq[idx], v);
                    }
                }
                ech.insert(&f, eq);
                if ech.rank() == unknowns {
                    return Ok(Vec::new());
                }
            }
        }
    }
    let sys = Mat::from_rows(&f, &ech.rows, unknowns);
    let kernel = if ech.rows.is_empty() {
        (0..unknowns)
            .map(|i| {
                let mut v = vec![Fe::ZERO; unknowns];
                v[i] = Fe::ONE;
                v
            })
            .collect()
    } else {
        sys.right_kernel()
    };
    Ok(kernel.into_iter().map(|v| Mat { rows: m, cols: n, data: v, field: f.clone() }).collect())
}
