//! Dense exact matrices with the row-vector convention.
//!
//! A linear map f: V -> W is the matrix F with `f(v) = v * F`, so composition
//! reads left to right: the matrix of g∘f is F * G. Kernels are left kernels
//! `{v : v*F = 0}` and images are row spaces, matching how right-module
//! actions compose along paths.

use crate::field::{FieldSpec, Scalar};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.render(self.at(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        Matrix {
            field,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn from_fn(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Parses row-major string entries, the external matrix format.
    pub fn parse(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        entries: &[Vec<String>],
    ) -> Result<Self, crate::field::FieldError> {
        assert_eq!(entries.len(), rows);
        let mut data = Vec::with_capacity(rows * cols);
        for row in entries {
            assert_eq!(row.len(), cols);
            for e in row {
                data.push(field.parse(e)?);
            }
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.field.add(&self.data[i], &other.data[i]);
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.data.len() {
            out.data[i] = self.field.sub(&self.data[i], &other.data[i]);
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = self.field.neg(x);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = self.clone();
        for x in &mut out.data {
            *x = self.field.mul(x, c);
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let f = self.field;
        let mut out = Matrix::zero(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if f.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if f.is_zero(b) {
                        continue;
                    }
                    let cur = out.at(r, c).clone();
                    out.set(r, c, f.add(&cur, &f.mul(a, b)));
                }
            }
        }
        out
    }

    /// v * M for a row vector v.
    pub fn apply_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        let mut out = vec![f.zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for c in 0..self.cols {
                let b = self.at(k, c);
                if f.is_zero(b) {
                    continue;
                }
                out[c] = f.add(&out[c], &f.mul(a, b));
            }
        }
        out
    }

    /// Kronecker product with (v ⊗ w)(A ⊗ B) = vA ⊗ wB under the row
    /// convention; index (i,j) flattens to i*inner + j.
    pub fn kronecker(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        Matrix::from_fn(
            f,
            self.rows * other.rows,
            self.cols * other.cols,
            |r, c| {
                let (i, j) = (r / other.rows, r % other.rows);
                let (k, l) = (c / other.cols, c % other.cols);
                f.mul(self.at(i, k), other.at(j, l))
            },
        )
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        Matrix::from_fn(self.field, self.rows + other.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    pub fn submatrix_rows(&self, rows: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, rows.len(), self.cols, |r, c| {
            self.at(rows[r], c).clone()
        })
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| {
            self.at(r, cols[c]).clone()
        })
    }

    /// Block diagonal stack of two maps.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let f = self.field;
        Matrix::from_fn(
            f,
            self.rows + other.rows,
            self.cols + other.cols,
            |r, c| {
                if r < self.rows && c < self.cols {
                    self.at(r, c).clone()
                } else if r >= self.rows && c >= self.cols {
                    other.at(r - self.rows, c - self.cols).clone()
                } else {
                    f.zero()
                }
            },
        )
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..m.cols {
            if lead >= m.rows {
                break;
            }
            // find pivot row: smallest-weight nonzero entry for tidy output
            let mut piv: Option<usize> = None;
            for r in lead..m.rows {
                if !f.is_zero(m.at(r, col)) {
                    piv = match piv {
                        None => Some(r),
                        Some(p) => {
                            if f.pivot_weight(m.at(r, col)) < f.pivot_weight(m.at(p, col)) {
                                Some(r)
                            } else {
                                Some(p)
                            }
                        }
                    };
                }
            }
            let Some(piv) = piv else { continue };
            m.swap_rows(lead, piv);
            let inv = f.inv(m.at(lead, col));
            for c in col..m.cols {
                let v = f.mul(m.at(lead, c), &inv);
                m.set(lead, c, v);
            }
            for r in 0..m.rows {
                if r != lead && !f.is_zero(m.at(r, col)) {
                    let factor = f.neg(m.at(r, col));
                    for c in col..m.cols {
                        let v = f.mul_add(m.at(r, c), &factor, m.at(lead, c));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the left kernel {v : v*M = 0}, rows of the result, in RREF.
    pub fn left_kernel(&self) -> Matrix {
        let f = self.field;
        // Reduce M^T; free variables of the column space give kernel vectors.
        let (ech, pivots) = self.transpose().rref();
        let n = self.rows;
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); n];
            v[fc] = f.one();
            for (ri, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(ech.at(ri, fc));
            }
            rows.push(v);
        }
        let (k, _) = Matrix::from_rows(f, rows).rref();
        if free.is_empty() {
            Matrix::zero(f, 0, n)
        } else {
            k
        }
    }

    /// Solves x * A = b. Returns None when inconsistent.
    pub fn solve_left(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.cols, "rhs length must equal cols");
        let f = self.field;
        // x*A = b  <=>  A^T x^T = b^T. Row reduce [A^T | b^T].
        let at = self.transpose();
        let bm = Matrix::from_rows(f, vec![b.to_vec()]).transpose();
        let aug = at.hstack(&bm);
        let (ech, pivots) = aug.rref();
        // inconsistent iff a pivot lands in the last column
        if pivots.contains(&self.rows) {
            return None;
        }
        let mut x = vec![f.zero(); self.rows];
        for (ri, &pc) in pivots.iter().enumerate() {
            x[pc] = ech.at(ri, self.rows).clone();
        }
        Some(x)
    }

    /// Solves X * A = B rowwise. None if any row is inconsistent.
    pub fn solve_left_matrix(&self, b: &Matrix) -> Option<Matrix> {
        assert_eq!(b.cols, self.cols);
        let f = self.field;
        let mut rows = Vec::with_capacity(b.rows);
        for r in 0..b.rows {
            rows.push(self.solve_left(b.row(r))?);
        }
        Some(Matrix::from_rows(f, rows))
    }

    /// Inverse of a square matrix, None if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(self.field, n));
        let (ech, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().take(n).enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(ech.submatrix_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let f = self.field;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let e = self.at(r, c);
                if r == c {
                    if !f.is_one(e) {
                        return false;
                    }
                } else if !f.is_zero(e) {
                    return false;
                }
            }
        }
        true
    }

    /// Entrywise reduction mod p, for the cross-field consistency suite.
    pub fn reduce_mod(&self, p: u64) -> Option<Matrix> {
        let fp = FieldSpec::Prime { p };
        let mut data = Vec::with_capacity(self.data.len());
        for x in &self.data {
            data.push(self.field.reduce_rational(x, p)?);
        }
        Some(Matrix {
            field: fp,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn render_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| self.field.render(self.at(r, c)))
                    .collect()
            })
            .collect()
    }
}

/// Scalar (dot) product of two row vectors.
pub fn dot(field: &FieldSpec, a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        acc = field.mul_add(&acc, x, y);
    }
    acc
}

/// Linear combination of the rows of `m` with coefficients `coeffs`.
pub fn row_combination(m: &Matrix, coeffs: &[Scalar]) -> Vec<Scalar> {
    m.apply_row(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rationals()
    }

    fn mat(rows: Vec<Vec<i64>>) -> Matrix {
        let f = q();
        Matrix::from_rows(
            f,
            rows.into_iter()
                .map(|r| r.into_iter().map(|x| f.from_i64(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn rref_rank_one() {
        let m = mat(vec![vec![2, 4], vec![1, 2]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0]);
        assert_eq!(r, mat(vec![vec![1, 2], vec![0, 0]]));
    }

    #[test]
    fn rref_identity() {
        let m = Matrix::identity(q(), 3);
        let (r, piv) = m.rref();
        assert!(r.is_identity());
        assert_eq!(piv, vec![0, 1, 2]);
    }

    #[test]
    fn rref_f2_invertible() {
        let f = FieldSpec::prime(2).unwrap();
        let m = Matrix::from_rows(
            f,
            vec![
                vec![f.from_i64(1), f.from_i64(1)],
                vec![f.from_i64(1), f.from_i64(0)],
            ],
        );
        let (r, piv) = m.rref();
        assert!(r.is_identity());
        assert_eq!(piv, vec![0, 1]);
    }

    #[test]
    fn kernel_cases() {
        // zero 2x2: full kernel
        let z = Matrix::zero(q(), 2, 2);
        assert_eq!(z.left_kernel().rows, 2);
        // identity: zero kernel
        assert_eq!(Matrix::identity(q(), 2).left_kernel().rows, 0);
        // [[1],[1]]: kernel spanned by (1,-1)
        let m = mat(vec![vec![1], vec![1]]);
        let k = m.left_kernel();
        assert_eq!(k.rows, 1);
        let v = k.row(0);
        assert_eq!(q().render(&v[0]), "1");
        assert_eq!(q().render(&v[1]), "-1");
    }

    #[test]
    fn solve_cases() {
        let id = Matrix::identity(q(), 2);
        let b = vec![q().from_i64(5), q().from_i64(-7)];
        assert_eq!(id.solve_left(&b).unwrap(), b);

        let m = mat(vec![vec![1, 0]]);
        assert!(m.solve_left(&[q().from_i64(0), q().from_i64(1)]).is_none());

        let m = mat(vec![vec![2]]);
        let x = m.solve_left(&[q().from_i64(1)]).unwrap();
        assert_eq!(q().render(&x[0]), "1/2");
    }

    #[test]
    fn rank_nullity() {
        let m = mat(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]);
        assert_eq!(m.rank() + m.left_kernel().rows, m.rows);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(vec![vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(mat(vec![vec![1, 2], vec![2, 4]]).inverse().is_none());
    }
}
