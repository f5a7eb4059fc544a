//! Exact integer linear algebra: dense matrices, circulants, Smith normal
//! form with transforms, minor gcds and rank over `F_p`.

use std::fmt;

use thiserror::Error;

use crate::arith::{is_prime, mod_inv, mul_mod};
use crate::polygon::PolygonTuple;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    Shape {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
    #[error("minor size {j} is outside 1..={max}")]
    JOutOfRange { j: usize, max: usize },
    #[error("{0} is not prime")]
    PNotPrime(u64),
    #[error("dimension mismatch")]
    DimensionMismatch,
}

/// Dense row-major matrix over an exact integer ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::Shape {
                rows,
                cols,
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch);
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| T::from_i64(x).expect("fits")).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch);
        }
        let mut out = Matrix::<T>::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a.clone() * other[(l, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        Ok(out)
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Matrix<T> {
        let data = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|idx| self[idx].clone())
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<T, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut m = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for c in 0..n {
            if m[(c, c)].is_zero() {
                match (c + 1..n).find(|&r| !m[(r, c)].is_zero()) {
                    Some(r) => {
                        m.swap_rows(c, r);
                        sign = -sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in c + 1..n {
                for j in c + 1..n {
                    let num = m[(i, j)].clone() * m[(c, c)].clone()
                        - m[(i, c)].clone() * m[(c, j)].clone();
                    m[(i, j)] = num / prev.clone();
                }
                m[(i, c)] = T::zero();
            }
            prev = m[(c, c)].clone();
        }
        Ok(sign * m[(n - 1, n - 1)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        for j in 0..self.cols {
            let v = self[(src, j)].clone() * c.clone();
            self[(dst, j)] = self[(dst, j)].clone() + v;
        }
    }

    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        for i in 0..self.rows {
            let v = self[(i, src)].clone() * c.clone();
            self[(i, dst)] = self[(i, dst)].clone() + v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)].clone();
        }
    }
}

impl<T> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", cells[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The circulant of a tuple: entry `(i, j)` is `a_{(i - j) mod k}`.
pub fn circulant<T: Scalar>(t: &PolygonTuple) -> Matrix<T> {
    circulant_from(t.entries())
}

pub fn circulant_from<T: Scalar>(entries: &[u64]) -> Matrix<T> {
    let k = entries.len();
    let mut m = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            m[(i, j)] = T::from_u64_lossless(entries[(i + k - j) % k]);
        }
    }
    m
}

/// `A = U * D * V` with `U`, `V` unimodular and `D` diagonal with a
/// divisibility chain of nonnegative entries.
#[derive(Clone, PartialEq, Eq)]
pub struct Snf<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    pub divisors: Vec<T>,
}

impl<T: fmt::Display> fmt::Debug for Snf<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let divisors: Vec<String> = self.divisors.iter().map(|d| d.to_string()).collect();
        writeln!(f, "divisors: [{}]", divisors.join(", "))?;
        write!(f, "U =\n{}D =\n{}V =\n{}", self.u, self.d, self.v)
    }
}

/// Smith normal form by repeated gcd pivoting with transform accumulation.
///
/// Works on rectangular input; `divisors` has `min(rows, cols)` entries.
pub fn smith_normal_form<T: Scalar>(a: &Matrix<T>) -> Snf<T> {
    let (rows, cols) = (a.rows, a.cols);
    let mut d = a.clone();
    // Invariant: U * d * V == a.
    let mut u = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);

    let row_swap = |d: &mut Matrix<T>, u: &mut Matrix<T>, i: usize, j: usize| {
        d.swap_rows(i, j);
        u.swap_cols(i, j);
    };
    let col_swap = |d: &mut Matrix<T>, v: &mut Matrix<T>, i: usize, j: usize| {
        d.swap_cols(i, j);
        v.swap_rows(i, j);
    };
    // d: row[dst] += c*row[src]  <=>  U: col[src] -= c*col[dst]
    let row_add = |d: &mut Matrix<T>, u: &mut Matrix<T>, dst: usize, src: usize, c: &T| {
        d.add_row(dst, src, c);
        u.add_col(src, dst, &-c.clone());
    };
    // d: col[dst] += c*col[src]  <=>  V: row[src] -= c*row[dst]
    let col_add = |d: &mut Matrix<T>, v: &mut Matrix<T>, dst: usize, src: usize, c: &T| {
        d.add_col(dst, src, c);
        v.add_row(src, dst, &-c.clone());
    };

    let steps = rows.min(cols);
    for t in 0..steps {
        // smallest nonzero entry of the trailing block becomes the pivot
        let Some((pi, pj)) = smallest_nonzero(&d, t, t) else {
            break;
        };
        row_swap(&mut d, &mut u, t, pi);
        col_swap(&mut d, &mut v, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                row_add(&mut d, &mut u, i, t, &-q);
                if !d[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                col_add(&mut d, &mut v, j, t, &-q);
                if !d[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is smaller than the pivot: move it in and retry
                let best_row = (t + 1..rows)
                    .filter(|&i| !d[(i, t)].is_zero())
                    .min_by_key(|&i| d[(i, t)].abs());
                let best_col = (t + 1..cols)
                    .filter(|&j| !d[(t, j)].is_zero())
                    .min_by_key(|&j| d[(t, j)].abs());
                let r_val = best_row.map(|i| d[(i, t)].abs());
                let c_val = best_col.map(|j| d[(t, j)].abs());
                match (r_val, c_val) {
                    (Some(r), Some(c)) if c < r => {
                        col_swap(&mut d, &mut v, t, best_col.unwrap())
                    }
                    (Some(_), _) => row_swap(&mut d, &mut u, t, best_row.unwrap()),
                    (None, Some(_)) => col_swap(&mut d, &mut v, t, best_col.unwrap()),
                    (None, None) => unreachable!(),
                }
                continue;
            }
            // row and column cleared; enforce divisibility of the trailing block
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d[(i, j)].is_multiple_of(&d[(t, t)]));
            match offender {
                Some((i, _)) => {
                    row_add(&mut d, &mut u, t, i, &T::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_col(t);
        }
    }

    let divisors = (0..steps).map(|i| d[(i, i)].clone()).collect();
    Snf { u, d, v, divisors }
}

fn smallest_nonzero<T: Scalar>(m: &Matrix<T>, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), T)> = None;
    for i in r0..m.rows {
        for j in c0..m.cols {
            let x = &m[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, b)| ax < *b) {
                best = Some(((i, j), ax));
            }
        }
    }
    best.map(|(idx, _)| idx)
}

/// gcd of all `j x j` minor determinants (0 when they all vanish).
pub fn minor_gcd<T: Scalar>(a: &Matrix<T>, j: usize) -> Result<T, LinalgError> {
    let max = a.rows.min(a.cols);
    if j == 0 || j > max {
        return Err(LinalgError::JOutOfRange { j, max });
    }
    let row_sets = combinations(a.rows, j);
    let col_sets = combinations(a.cols, j);
    let mut g = T::zero();
    for rs in &row_sets {
        for cs in &col_sets {
            let det = a.submatrix(rs, cs).det()?;
            g = g.gcd(&det);
            if g.is_one() {
                return Ok(g);
            }
        }
    }
    Ok(g)
}

fn combinations(n: usize, j: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(j);
    fn rec(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < j - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    rec(0, n, j, &mut cur, &mut out);
    out
}

/// Rank over `F_p` by Gaussian elimination on the reduced entries.
pub fn rank_mod_p<T: Scalar>(a: &Matrix<T>, p: u64) -> Result<usize, LinalgError> {
    if !is_prime(p) {
        return Err(LinalgError::PNotPrime(p));
    }
    let mut m: Vec<Vec<u64>> = (0..a.rows)
        .map(|i| a.row(i).iter().map(|x| x.residue(p)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..a.cols {
        let Some(piv) = (rank..a.rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let inv = mod_inv(m[rank][c], p).expect("nonzero in a field");
        for x in m[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mul_mod(f, y, p)) % p;
            }
        }
        rank += 1;
        if rank == a.rows {
            break;
        }
    }
    Ok(rank)
}

/// Cyclic orders of the column span of `a` inside `(Z/p^e)^rows`,
/// descending with trivial orders dropped.
///
/// Works directly over `Z/p^e`: each step pivots on an entry of least
/// `p`-adic valuation, which then divides everything left in the block.
pub fn span_orders_mod_prime_power(a: &[Vec<u64>], p: u64, e: u32) -> Vec<u64> {
    let q = p.pow(e);
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x % q).collect()).collect();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut orders = Vec::new();
    for t in 0..rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let v = crate::arith::valuation(x, p);
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, bi, bj)) = best else {
            break;
        };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let pv = p.pow(v);
        let unit = m[t][t] / pv;
        let inv = crate::arith::mod_inv(unit % q, q).expect("cofactor of p^v is a unit");
        for x in m[t].iter_mut() {
            *x = crate::arith::mul_mod(*x, inv, q);
        }
        // pivot is now p^v; clear its column, then its row
        for i in 0..rows {
            if i != t && m[i][t] != 0 {
                let f = m[i][t] / pv;
                for j in t..cols {
                    let sub = crate::arith::mul_mod(f, m[t][j], q);
                    m[i][j] = (m[i][j] + q - sub) % q;
                }
            }
        }
        for j in t + 1..cols {
            m[t][j] = 0;
        }
        if v < e {
            orders.push(p.pow(e - v));
        }
    }
    orders
}
