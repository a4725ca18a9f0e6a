use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// Dense row-major matrix over an exact field.
///
/// Matrices act on column vectors: an `m × n` matrix is a map `F^n → F^m`.
/// Zero-sized matrices are allowed and behave as expected (`0 × n` is the
/// map to the zero space).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone)]
pub struct Rref<F> {
    pub reduced: Mat<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Mat<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = F::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Result<Self> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Mat { rows: r, cols, data })
    }

    /// Integer convenience constructor, mostly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(rows.len(), cols, |i, j| F::from_i64(rows[i][j]))
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<F>]) -> Self {
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn entries(&self) -> &[F] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on a shape mismatch.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Mat { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("matrix sum shape mismatch")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.scale(&-F::one()))
    }

    pub fn scale(&self, c: &F) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.clone() * c.clone()).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Horizontal concatenation `[A | B | ...]`.
    pub fn hstack(blocks: &[&Self], rows: usize) -> Self {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, off + j, b.get(i, j).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(blocks: &[&Self], cols: usize) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend(b.data.iter().cloned());
        }
        Mat { rows, cols, data }
    }

    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            out.paste(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Overwrites the block starting at `(r0, c0)` with `b`.
    pub fn paste(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Row-major vectorisation.
    pub fn vectorize(&self) -> Vec<F> {
        self.data.clone()
    }

    pub fn from_vector(rows: usize, cols: usize, v: &[F]) -> Self {
        assert_eq!(v.len(), rows * cols);
        Mat { rows, cols, data: v.to_vec() }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Gauss-Jordan elimination to reduced row echelon form.
    pub fn rref(&self) -> Rref<F> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inverse().expect("nonzero pivot");
            if !inv.is_one() {
                for j in c..m.cols {
                    let idx = r * m.cols + j;
                    if !m.data[idx].is_zero() {
                        m.data[idx] = m.data[idx].clone() * inv.clone();
                    }
                }
            }
            let nz: Vec<usize> = (c..m.cols).filter(|&j| !m.get(r, j).is_zero()).collect();
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &nz {
                    let idx = i * m.cols + j;
                    let sub = f.clone() * m.data[r * m.cols + j].clone();
                    m.data[idx] = m.data[idx].clone() - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { reduced: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space as the columns of an `n × k` matrix, in
    /// free-variable form: the basis vector attached to free column `f` has a
    /// `1` in position `f` and `0` in every other free position.
    pub fn kernel(&self) -> Mat<F> {
        let Rref { reduced, pivots } = self.rref();
        let free = free_columns(self.cols, &pivots);
        let mut out = Mat::zeros(self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out.set(f, k, F::one());
            for (i, &p) in pivots.iter().enumerate() {
                let v = reduced.get(i, f);
                if !v.is_zero() {
                    out.set(p, k, -v.clone());
                }
            }
        }
        out
    }

    /// Free columns of the kernel returned by [`Mat::kernel`].
    pub fn kernel_free_columns(&self) -> Vec<usize> {
        free_columns(self.cols, &self.rref().pivots)
    }

    /// Rows spanning the left null space: `Q · A = 0`.
    pub fn left_kernel(&self) -> Mat<F> {
        self.transpose().kernel().transpose()
    }

    /// Columns forming a basis of the column space (pivot columns of `A`).
    pub fn image(&self) -> Mat<F> {
        let piv = self.rref().pivots;
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, &piv)
    }

    /// Solves `A x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(b.len(), self.rows);
        let bm = Mat::from_columns(self.rows, &[b.to_vec()]);
        self.solve_mat(&bm).map(|x| x.column(0))
    }

    /// Solves `A X = B` column by column.
    pub fn solve_mat(&self, b: &Mat<F>) -> Option<Mat<F>> {
        assert_eq!(b.rows, self.rows);
        let aug = Mat::hstack(&[self, b], self.rows);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Mat::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, reduced.get(i, self.cols + j).clone());
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat<F>> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_mat(&Mat::identity(self.rows))?;
        if self.rank() == self.rows {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Minimal polynomial via Krylov iteration on the vectorised powers.
    pub fn min_poly(&self) -> super::Poly<F> {
        assert!(self.is_square());
        let n = self.rows;
        let mut powers: Vec<Vec<F>> = vec![Mat::identity(n).vectorize()];
        let mut cur = Mat::identity(n);
        loop {
            cur = cur.mul(self);
            let v = cur.vectorize();
            let basis = Mat::from_columns(n * n, &powers);
            if let Some(c) = basis.solve(&v) {
                let mut coeffs: Vec<F> = c.into_iter().map(|x| -x).collect();
                coeffs.push(F::one());
                return super::Poly::new(coeffs);
            }
            powers.push(v);
        }
    }

    /// Fitting decomposition of an endomorphism: bases (as columns) of the
    /// stable kernel and stable image of `self^n`.
    pub fn fitting(&self) -> (Mat<F>, Mat<F>) {
        let p = self.pow(self.rows as u32);
        (p.kernel(), p.image())
    }
}

fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut free = Vec::with_capacity(cols - pivots.len());
    let mut it = pivots.iter().peekable();
    for c in 0..cols {
        if it.peek() == Some(&&c) {
            it.next();
        } else {
            free.push(c);
        }
    }
    free
}

impl<F: Field> fmt::Debug for Mat<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;

    type M = Mat<Rat>;

    #[test]
    fn rank_and_kernel() {
        let a = M::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let k = a.kernel();
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        assert_eq!(a.kernel_free_columns(), vec![2]);
    }

    #[test]
    fn left_kernel_annihilates() {
        let a = M::from_i64(&[&[1, 0], &[0, 1], &[1, 1]]);
        let q = a.left_kernel();
        assert_eq!(q.rows(), 1);
        assert!(q.mul(&a).is_zero());
    }

    #[test]
    fn inverse_and_solve() {
        let a = M::from_i64(&[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), M::identity(2));
        let x = a.solve(&[Rat::from_i64(3), Rat::from_i64(2)]).unwrap();
        assert_eq!(x, vec![Rat::from_i64(1), Rat::from_i64(1)]);
        assert!(M::from_i64(&[&[1, 1], &[1, 1]]).inverse().is_none());
    }

    #[test]
    fn zero_sized_matrices() {
        let a = M::zeros(0, 3);
        assert_eq!(a.kernel().cols(), 3);
        let b = M::zeros(3, 0);
        assert_eq!(a.mul(&b).shape(), (0, 0));
        assert_eq!(b.mul(&a).shape(), (3, 3));
        assert!(M::zeros(0, 0).is_invertible());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let a = M::zeros(2, 3);
        assert!(matches!(a.try_mul(&a), Err(Error::DimensionMismatch(_))));
        assert!(M::from_rows(vec![vec![Rat::from_i64(1)], vec![]], 1).is_err());
    }

    #[test]
    fn min_poly_of_nilpotent_jordan_block() {
        let j = M::from_i64(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(j.min_poly().degree(), Some(3));
        let (k, i) = j.fitting();
        assert_eq!((k.cols(), i.cols()), (3, 0));
    }
}
