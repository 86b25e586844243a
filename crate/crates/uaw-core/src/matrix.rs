//! Dense matrices over a scalar backend, with exact elimination, kernels,
//! characteristic polynomials and intertwiner solving on the exact side.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::poly::Polynomial;
use crate::scalar::{CFloat, GaussRat, ScalarField};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

/// Row-major dense matrix. `Matrix<GaussRat>` is the exact workhorse;
/// `Matrix<CFloat>` backs the float-only unitary check.
#[derive(Clone, PartialEq)]
pub struct Matrix<S = GaussRat> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: ScalarField> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn column(entries: Vec<S>) -> Self {
        let rows = entries.len();
        Matrix { rows, cols: 1, data: entries }
    }

    /// Assembles a square matrix whose columns are the given column vectors.
    pub fn from_columns(cols: &[Matrix<S>]) -> Self {
        let rows = cols.first().map_or(0, |c| c.rows);
        assert!(cols.iter().all(|c| c.cols == 1 && c.rows == rows), "bad column stack");
        Matrix::from_fn(rows, cols.len(), |i, j| cols[j].at(i, 0).clone())
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

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn map<T: ScalarField>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Matrix<S> {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        self.map(|v| v.mul(s))
    }

    pub fn neg(&self) -> Matrix<S> {
        self.map(|v| v.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn add_ref(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub_ref(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn mul_ref(&self, rhs: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, rhs.rows, "mul shape {}x{} * {}x{}", self.rows, self.cols, rhs.rows, rhs.cols);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product with lexicographic index pairing:
    /// entry `((i1,i2),(j1,j2)) = self(i1,j1) * rhs(i2,j2)`.
    pub fn kron(&self, rhs: &Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |i, j| {
            let (i1, i2) = (i / rhs.rows, i % rhs.rows);
            let (j1, j2) = (j / rhs.cols, j % rhs.cols);
            self.at(i1, j1).mul(rhs.at(i2, j2))
        })
    }

    pub fn trace(&self) -> Result<S, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut t = S::zero();
        for i in 0..self.rows {
            t = t.add(self.at(i, i));
        }
        Ok(t)
    }

    /// `AB - BA`
    pub fn commutator(&self, rhs: &Matrix<S>) -> Matrix<S> {
        self.mul_ref(rhs).sub_ref(&rhs.mul_ref(self))
    }

    /// Top-left `size x size` block.
    pub fn top_left(&self, size: usize) -> Matrix<S> {
        assert!(size <= self.rows && size <= self.cols);
        Matrix::from_fn(size, size, |i, j| self.at(i, j).clone())
    }

    /// If the matrix is `s * I`, returns `s`.
    pub fn as_scalar_multiple_of_identity(&self) -> Option<S> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let s = self.at(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { s.clone() } else { S::zero() };
                if *self.at(i, j) != expect {
                    return None;
                }
            }
        }
        Some(s)
    }
}

impl<S: ScalarField> Add for &Matrix<S> {
    type Output = Matrix<S>;
    fn add(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.add_ref(rhs)
    }
}

impl<S: ScalarField> Sub for &Matrix<S> {
    type Output = Matrix<S>;
    fn sub(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.sub_ref(rhs)
    }
}

impl<S: ScalarField> Mul for &Matrix<S> {
    type Output = Matrix<S>;
    fn mul(self, rhs: &Matrix<S>) -> Matrix<S> {
        self.mul_ref(rhs)
    }
}

impl<S: ScalarField> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix<GaussRat> {
    /// In-place reduced row echelon form with full pivoting; among the
    /// candidates in the remaining block the entry of smallest height is
    /// preferred, which keeps intermediate numerators and denominators from
    /// blowing up. Returns the rank and the column permutation applied.
    fn rref_full_pivot(&mut self) -> (usize, Vec<usize>) {
        let mut col_order: Vec<usize> = (0..self.cols).collect();
        let mut r = 0;
        while r < self.rows && r < self.cols {
            let mut best: Option<(u64, usize, usize)> = None;
            for i in r..self.rows {
                for jp in r..self.cols {
                    let v = self.at(i, jp);
                    if v.is_zero() {
                        continue;
                    }
                    let h = v.height_bits();
                    if best.map_or(true, |(bh, _, _)| h < bh) {
                        best = Some((h, i, jp));
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            self.swap_rows(r, pi);
            if pj != r {
                self.swap_cols(r, pj);
                col_order.swap(r, pj);
            }
            let pivot = self.at(r, r).clone();
            for j in r..self.cols {
                let v = self.at(r, j).div(&pivot);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r || self.at(i, r).is_zero() {
                    continue;
                }
                let factor = self.at(i, r).clone();
                for j in r..self.cols {
                    let v = self.at(i, j).sub(&factor.mul(self.at(r, j)));
                    self.set(i, j, v);
                }
            }
            r += 1;
        }
        (r, col_order)
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

    pub fn rank(&self) -> usize {
        self.clone().rref_full_pivot().0
    }

    /// Basis of the null space as column vectors, computed by exact
    /// Gaussian elimination. An empty list means the kernel is trivial.
    pub fn kernel(&self) -> Vec<Matrix<GaussRat>> {
        let mut work = self.clone();
        let (rank, col_order) = work.rref_full_pivot();
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in rank..self.cols {
            let mut permuted = vec![GaussRat::zero(); self.cols];
            permuted[free] = GaussRat::one();
            for (p, entry) in permuted.iter_mut().enumerate().take(rank) {
                *entry = work.at(p, free).neg();
            }
            let mut v = vec![GaussRat::zero(); self.cols];
            for (pos, value) in permuted.into_iter().enumerate() {
                v[col_order[pos]] = value;
            }
            basis.push(Matrix::column(v));
        }
        basis
    }

    /// Exact inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<GaussRat>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut work = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                GaussRat::one()
            } else {
                GaussRat::zero()
            }
        });
        for r in 0..n {
            // Smallest-height nonzero pivot within the column.
            let pivot_row = (r..n)
                .filter(|&i| !work.at(i, r).is_zero())
                .min_by_key(|&i| work.at(i, r).height_bits())?;
            work.swap_rows(r, pivot_row);
            let pivot = work.at(r, r).clone();
            for j in r..2 * n {
                let v = work.at(r, j).div(&pivot);
                work.set(r, j, v);
            }
            for i in 0..n {
                if i == r || work.at(i, r).is_zero() {
                    continue;
                }
                let factor = work.at(i, r).clone();
                for j in r..2 * n {
                    let v = work.at(i, j).sub(&factor.mul(work.at(r, j)));
                    work.set(i, j, v);
                }
            }
        }
        Some(Matrix::from_fn(n, n, |i, j| work.at(i, j + n).clone()))
    }

    /// Monic characteristic polynomial by the Faddeev-LeVerrier recursion,
    /// whose only divisions are by the integers `1..=n`.
    pub fn char_poly(&self) -> Result<Polynomial, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut coeffs = vec![GaussRat::zero(); n + 1];
        coeffs[n] = GaussRat::one();
        let mut work = Matrix::identity(n);
        for k in 1..=n {
            work = self.mul_ref(&work);
            let a = work.trace().unwrap().div(&GaussRat::from_i64(k as i64)).neg();
            for i in 0..n {
                let v = work.at(i, i).add(&a);
                work.set(i, i, v);
            }
            coeffs[n - k] = a;
        }
        Ok(Polynomial::new(coeffs))
    }

    /// Solves `M*A2 = A1*M` and `M*B2 = B1*M` for an invertible `M`,
    /// normalized so that its first nonzero entry in row-major order is 1.
    ///
    /// Between irreducible representations Schur-type uniqueness makes the
    /// solution space at most one-dimensional; this is verified on use, not
    /// assumed, and small combinations of kernel vectors are searched when
    /// the space is larger.
    pub fn intertwiner(
        a1: &Matrix<GaussRat>,
        b1: &Matrix<GaussRat>,
        a2: &Matrix<GaussRat>,
        b2: &Matrix<GaussRat>,
    ) -> Result<Option<Matrix<GaussRat>>, MatrixError> {
        let n = a1.rows;
        for m in [a1, b1, a2, b2] {
            if !m.is_square() || m.rows != n {
                return Err(MatrixError::Shape("intertwiner needs equal square matrices".into()));
            }
        }
        // Unknown M as a length n^2 vector, row-major. Row (i,j) of the
        // system encodes (M*A2 - A1*M)_{ij}; same again for B.
        let mut system = Matrix::zeros(2 * n * n, n * n);
        for (block, (lhs, rhs)) in [(a1, a2), (b1, b2)].iter().enumerate() {
            for i in 0..n {
                for j in 0..n {
                    let row = block * n * n + i * n + j;
                    for k in 0..n {
                        // + M[i][k] * rhs[k][j]
                        let cur = system.at(row, i * n + k).add(rhs.at(k, j));
                        system.set(row, i * n + k, cur);
                        // - lhs[i][k] * M[k][j]
                        let cur = system.at(row, k * n + j).sub(lhs.at(i, k));
                        system.set(row, k * n + j, cur);
                    }
                }
            }
        }
        let kernel = system.kernel();
        let reshape = |v: &Matrix<GaussRat>| Matrix::from_fn(n, n, |i, j| v.at(i * n + j, 0).clone());
        for v in &kernel {
            let m = reshape(v);
            if m.inverse().is_some() {
                return Ok(Some(m.normalized_by_first_entry()));
            }
        }
        // Degenerate kernels: try small combinations before giving up.
        if kernel.len() > 1 {
            for a in 0..kernel.len() {
                for b in a + 1..kernel.len() {
                    for coeff in 1..=3i64 {
                        let combo = kernel[a].add_ref(&kernel[b].scale(&GaussRat::from_i64(coeff)));
                        let m = reshape(&combo);
                        if m.inverse().is_some() {
                            return Ok(Some(m.normalized_by_first_entry()));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Scales so the first nonzero entry in row-major order is 1.
    pub fn normalized_by_first_entry(&self) -> Matrix<GaussRat> {
        match self.data.iter().find(|v| !v.is_zero()) {
            Some(first) => self.scale(&first.inv()),
            None => self.clone(),
        }
    }

    /// If `other = s * self` for a single scalar `s != 0`, returns `s`.
    pub fn scalar_ratio_to(&self, other: &Matrix<GaussRat>) -> Option<GaussRat> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return None;
        }
        let idx = self.data.iter().position(|v| !v.is_zero())?;
        let s = other.data[idx].div(&self.data[idx]);
        if other == &self.scale(&s) {
            Some(s)
        } else {
            None
        }
    }
}

impl Matrix<CFloat> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Inverse by partial-pivot elimination; pivots chosen by modulus.
    pub fn inverse_approx(&self) -> Option<Matrix<CFloat>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut work = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                *self.at(i, j)
            } else if j - n == i {
                CFloat::new(1.0, 0.0)
            } else {
                CFloat::new(0.0, 0.0)
            }
        });
        for r in 0..n {
            let pivot_row = (r..n).max_by(|&a, &b| {
                work.at(a, r).norm().partial_cmp(&work.at(b, r).norm()).unwrap()
            })?;
            if work.at(pivot_row, r).norm() < 1e-14 {
                return None;
            }
            for j in 0..2 * n {
                let tmp = *work.at(r, j);
                work.set(r, j, *work.at(pivot_row, j));
                work.set(pivot_row, j, tmp);
            }
            let pivot = *work.at(r, r);
            for j in r..2 * n {
                let v = *work.at(r, j) / pivot;
                work.set(r, j, v);
            }
            for i in 0..n {
                if i == r {
                    continue;
                }
                let factor = *work.at(i, r);
                if factor.norm() == 0.0 {
                    continue;
                }
                for j in r..2 * n {
                    let v = *work.at(i, j) - factor * *work.at(r, j);
                    work.set(i, j, v);
                }
            }
        }
        Some(Matrix::from_fn(n, n, |i, j| *work.at(i, j + n)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gr;

    fn m(rows: &[&[&str]]) -> Matrix<GaussRat> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| gr(s)).collect()).collect())
    }

    #[test]
    fn kernel_of_zero_and_identity() {
        assert_eq!(Matrix::<GaussRat>::zeros(2, 2).kernel().len(), 2);
        assert!(Matrix::<GaussRat>::identity(3).kernel().is_empty());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&["1", "2", "3"], &["2", "4", "6"], &["1", "1", "1"]]);
        let basis = a.kernel();
        assert_eq!(basis.len(), 1);
        assert_eq!(a.rank() + basis.len(), a.cols());
        for v in &basis {
            assert!(a.mul_ref(v).is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&["1", "2/3"], &["-1i", "4"]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul_ref(&inv), Matrix::identity(2));
        let singular = m(&[&["1", "2"], &["2", "4"]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn char_poly_of_identity() {
        // (X-1)^2 = 1 - 2X + X^2
        let p = Matrix::<GaussRat>::identity(2).char_poly().unwrap();
        assert_eq!(p.coeffs(), &[gr("1"), gr("-2"), gr("1")]);
    }

    #[test]
    fn char_poly_similarity_invariant() {
        let a = m(&[&["1", "2", "0"], &["0", "3", "1i"], &["5", "0", "-2"]]);
        let p = m(&[&["1", "1", "0"], &["0", "1", "2"], &["1", "0", "1"]]);
        let conj = p.inverse().unwrap().mul_ref(&a).mul_ref(&p);
        assert_eq!(a.char_poly().unwrap(), conj.char_poly().unwrap());
    }

    #[test]
    fn kron_identity_and_shapes() {
        let i2 = Matrix::<GaussRat>::identity(2);
        let i3 = Matrix::<GaussRat>::identity(3);
        assert_eq!(i2.kron(&i3), Matrix::identity(6));
        let a = Matrix::<GaussRat>::zeros(2, 2);
        let b = Matrix::<GaussRat>::zeros(3, 3);
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (6, 6));
    }

    #[test]
    fn kron_mixed_product_rule() {
        let a = m(&[&["1", "2"], &["0", "1i"]]);
        let b = m(&[&["3", "0"], &["1", "1"]]);
        let c = m(&[&["1", "1"], &["2", "0"]]);
        let d = m(&[&["0", "1"], &["1", "5"]]);
        let lhs = a.kron(&b).mul_ref(&c.kron(&d));
        let rhs = a.mul_ref(&c).kron(&b.mul_ref(&d));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn intertwiner_identity_case() {
        let a = m(&[&["1", "1"], &["0", "2"]]);
        let b = m(&[&["0", "1"], &["1", "0"]]);
        let w = Matrix::intertwiner(&a, &b, &a, &b).unwrap().unwrap();
        assert_eq!(w, Matrix::identity(2));
    }
}
