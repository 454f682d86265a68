use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Integer matrix with arbitrary-precision entries, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }
    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> IntMat {
        assert_eq!(vals.len(), rows * cols);
        IntMat { rows, cols, data: vals.iter().map(|&v| BigInt::from(v)).collect() }
    }
    pub fn from_rows(rows: &[Vec<i64>]) -> IntMat {
        let cols = rows.first().map_or(0, |r| r.len());
        let flat: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        IntMat::from_i64(rows.len(), cols, &flat)
    }
    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }
    pub fn mul(&self, o: &IntMat) -> IntMat {
        assert_eq!(self.cols, o.rows);
        let mut out = IntMat::zero(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        out.data[i * o.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }
    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        out
    }
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }
    /// row_dst += k * row_src
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * k;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }
    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }
}

/// Result of a Smith normal form computation: `u * m * v` is diagonal with `diag`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub diag: Vec<BigInt>,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form with unimodular transforms `u`, `v` such that `u m v = diag`.
/// Invariant factors are non-negative and each divides the next.
pub fn smith_normal_form(m: &IntMat) -> Snf {
    let mut a = m.clone();
    let mut u = IntMat::identity(m.rows);
    let mut v = IntMat::identity(m.cols);
    let n = m.rows.min(m.cols);
    let mut t = 0;
    while t < n {
        // pivot: smallest nonzero absolute value in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..a.rows {
            for j in t..a.cols {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in (t + 1)..a.rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let k = -q;
                a.add_row(i, t, &k);
                u.add_row(i, t, &k);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            for j in (t + 1)..a.cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let k = -q;
                a.add_col(j, t, &k);
                v.add_col(j, t, &k);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // divisibility of the trailing block by the pivot
                let p = a.get(t, t).clone();
                let bad = (t + 1..a.rows).find(|&i| (t + 1..a.cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
                match bad {
                    None => break,
                    Some(i) => {
                        let one = BigInt::one();
                        a.add_row(t, i, &one);
                        u.add_row(t, i, &one);
                    }
                }
            }
            // move the smallest entry of row/column t back to the pivot
            let mut best = (t, t);
            for i in t..a.rows {
                let x = a.get(i, t);
                if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                    best = (i, t);
                }
            }
            for j in t..a.cols {
                let x = a.get(t, j);
                if !x.is_zero() && x.abs() < a.get(best.0, best.1).abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap_rows(t, best.0);
                u.swap_rows(t, best.0);
            }
            if best.1 != t {
                a.swap_cols(t, best.1);
                v.swap_cols(t, best.1);
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diag = (0..n).map(|i| a.get(i, i).clone()).collect();
    Snf { diag, u, v }
}

/// Exact check of the Smith form contract.
pub fn verify_snf(m: &IntMat, s: &Snf) -> bool {
    let d = s.u.mul(m).mul(&s.v);
    for i in 0..d.rows {
        for j in 0..d.cols {
            let expect = if i == j { s.diag[i].clone() } else { BigInt::zero() };
            if *d.get(i, j) != expect {
                return false;
            }
        }
    }
    let nz: Vec<&BigInt> = s.diag.iter().take_while(|x| !x.is_zero()).collect();
    if s.diag.iter().skip(nz.len()).any(|x| !x.is_zero()) {
        return false;
    }
    nz.windows(2).all(|w| w[1].is_multiple_of(w[0])) && nz.iter().all(|x| x.is_positive())
}

/// Row-echelon basis of the integer row lattice spanned by `gens` (rows of length `cols`).
/// Uses gcd row operations only, so the lattice is unchanged.
pub fn lattice_basis(gens: &[Vec<i64>], cols: usize) -> IntMat {
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for g in gens {
        let mut v: Vec<BigInt> = g.iter().map(|&x| BigInt::from(x)).collect();
        let mut idx = 0;
        loop {
            let Some(pc) = v.iter().position(|x| !x.is_zero()) else { break };
            while idx < pivots.len() && pivots[idx] < pc {
                idx += 1;
            }
            if idx < pivots.len() && pivots[idx] == pc {
                let b = &mut basis[idx];
                // extended gcd combination of (b, v) on column pc
                let (bx, vx) = (b[pc].clone(), v[pc].clone());
                let e = bx.extended_gcd(&vx);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let (bq, vq) = (&bx / &g, &vx / &g);
                let new_b: Vec<BigInt> = (0..cols).map(|j| &s * &b[j] + &t * &v[j]).collect();
                let new_v: Vec<BigInt> = (0..cols).map(|j| &bq * &v[j] - &vq * &b[j]).collect();
                *b = new_b;
                v = new_v;
                idx += 1;
            } else {
                basis.insert(idx, v);
                pivots.insert(idx, pc);
                break;
            }
        }
    }
    let rows = basis.len();
    IntMat { rows, cols, data: basis.into_iter().flatten().collect() }
}

/// Membership of an integer vector in the row lattice of `m`, decided through its Smith form.
pub fn in_row_lattice(m: &IntMat, s: &Snf, vec: &[i64]) -> bool {
    let w: Vec<BigInt> = (0..m.cols)
        .map(|j| (0..m.cols).map(|k| BigInt::from(vec[k]) * s.v.get(k, j)).sum())
        .collect();
    w.iter().enumerate().all(|(i, x)| match s.diag.get(i) {
        Some(d) if !d.is_zero() => x.is_multiple_of(d),
        _ => x.is_zero(),
    })
}
