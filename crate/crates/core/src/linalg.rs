//! Dense exact linear algebra over a generic coefficient field.
//!
//! Everything downstream (Hom spaces, kernels, resolutions) reduces to the
//! primitives here. Pivoting is deterministic (first nonzero in column
//! order) so reduced forms and the bases derived from them are reproducible
//! across runs.

use crate::field::{FieldDescriptor, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("linear system has no solution")]
    NoSolution,
}

/// Row-major dense matrix. Zero-row and zero-column shapes are legal and
/// show up routinely (empty Hom spaces, zero modules).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(field: FieldDescriptor, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: FieldDescriptor, rows: Vec<Vec<FieldElement>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            for x in row {
                assert_eq!(x.field(), field, "mixed fields");
                data.push(x);
            }
        }
        Matrix { field, rows: r, cols: c, data }
    }

    pub fn from_fn(
        field: FieldDescriptor,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElement,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { field, rows, cols, data }
    }

    /// Column vector from a coordinate list.
    pub fn column(field: FieldDescriptor, v: &[FieldElement]) -> Matrix {
        Matrix::from_fn(field, v.len(), 1, |r, _| v[r].clone())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn idx(&self, r: usize, c: usize) -> usize {
        debug_assert!(r < self.rows && c < self.cols);
        r * self.cols + c
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> &FieldElement {
        &self.data[self.idx(r, c)]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        assert_eq!(v.field(), self.field, "mixed fields");
        let i = self.idx(r, c);
        self.data[i] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row_vec(&self, r: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|c| self.at(r, c).clone()).collect()
    }

    pub fn col_vec(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |r, c| self.at(c, r).clone())
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols, |r, c| self.at(r, c) + rhs.at(r, c))
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        Matrix::from_fn(self.field, self.rows, self.cols, |r, c| self.at(r, c) - rhs.at(r, c))
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |r, c| -self.at(r, c))
    }

    pub fn scale(&self, k: &FieldElement) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |r, c| self.at(r, c) * k)
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        let mut out = Matrix::zero(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let i = out.idx(r, c);
                    out.data[i] = &out.data[i] + &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mat-vec");
        let mut out = vec![self.field.zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.at(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                out[r] = &out[r] + &(a * &v[c]);
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.rows, rhs.rows, "row mismatch in hstack");
        Matrix::from_fn(self.field, self.rows, self.cols + rhs.cols, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                rhs.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.cols, "col mismatch in vstack");
        Matrix::from_fn(self.field, self.rows + rhs.rows, self.cols, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                rhs.at(r - self.rows, c).clone()
            }
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, cols.len(), |r, c| self.at(r, cols[c]).clone())
    }

    /// Reduced row echelon form with the column indices of the pivots.
    /// Deterministic: always takes the first nonzero entry in column order.
    pub fn rref(&self) -> (Matrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let mut pivot_row = None;
            for r in row..m.rows {
                if !m.at(r, col).is_zero() {
                    pivot_row = Some(r);
                    break;
                }
            }
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.at(row, col).inv().expect("pivot nonzero");
            for c in col..m.cols {
                let v = m.at(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    let v = m.at(r, c) - &(&factor * m.at(row, c));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        (m, pivots, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    /// Basis of the null space, returned as the columns of a matrix.
    pub fn kernel_basis(&self) -> Matrix {
        let (r, pivots, rank) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zero(self.field, self.cols, self.cols - rank);
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, self.field.one());
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = r.at(prow, fc);
                if !v.is_zero() {
                    out.set(pc, k, -v);
                }
            }
        }
        out
    }

    /// The original columns of `self` that form a basis of the column space.
    pub fn image_basis(&self) -> Matrix {
        let (_, pivots, _) = self.rref();
        self.select_columns(&pivots)
    }

    /// One exact solution of `self * x = b` for a column vector `b`.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Vec<FieldElement>, LinalgError> {
        let sols = self.solve_matrix(&Matrix::column(self.field, b))?;
        Ok(sols.col_vec(0))
    }

    /// Solve `self * X = B` column by column via one shared elimination.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Matrix, LinalgError> {
        if b.rows != self.rows {
            return Err(LinalgError::ShapeMismatch(format!(
                "rhs has {} rows, lhs has {}",
                b.rows, self.rows
            )));
        }
        let aug = self.hstack(b);
        let (r, pivots, _) = aug.rref();
        // Any pivot landing in the appended block marks an inconsistency.
        if pivots.iter().any(|&p| p >= self.cols) {
            return Err(LinalgError::NoSolution);
        }
        let mut x = Matrix::zero(self.field, self.cols, b.cols);
        for (prow, &pc) in pivots.iter().enumerate() {
            for c in 0..b.cols {
                x.set(pc, c, r.at(prow, self.cols + c).clone());
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<Matrix, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (r, pivots, rank) = aug.rref();
        if rank != self.rows || pivots.iter().take(self.rows).enumerate().any(|(i, &p)| i != p) {
            return Err(LinalgError::NotInvertible);
        }
        Ok(Matrix::from_fn(self.field, self.rows, self.rows, |i, j| {
            r.at(i, self.rows + j).clone()
        }))
    }

    /// Kronecker product in row-major block order: entry ((i,k),(j,l)) is
    /// a[i][j] * b[k][l] with the pair (i,k) flattened as i*b.rows + k.
    pub fn kronecker(&self, b: &Matrix) -> Matrix {
        Matrix::from_fn(
            self.field,
            self.rows * b.rows,
            self.cols * b.cols,
            |r, c| {
                let (i, k) = (r / b.rows, r % b.rows);
                let (j, l) = (c / b.cols, c % b.cols);
                self.at(i, j) * b.at(k, l)
            },
        )
    }

    /// Flatten to a single column (row-major), viewing the matrix as a
    /// vector in Hom coordinates.
    pub fn flatten(&self) -> Vec<FieldElement> {
        self.data.clone()
    }

    pub fn unflatten(field: FieldDescriptor, rows: usize, cols: usize, v: &[FieldElement]) -> Matrix {
        assert_eq!(v.len(), rows * cols);
        Matrix {
            field,
            rows,
            cols,
            data: v.to_vec(),
        }
    }
}

/// A subspace of an ambient coordinate space, held in echelon form so that
/// membership tests, coset reduction and quotient coordinates are direct.
#[derive(Clone, Debug)]
pub struct Subspace {
    field: FieldDescriptor,
    ambient: usize,
    /// Echelon basis rows, each normalized with leading 1.
    rows: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Span of the given vectors (each of length `ambient`).
    pub fn span(field: FieldDescriptor, ambient: usize, vectors: &[Vec<FieldElement>]) -> Subspace {
        let m = Matrix::from_fn(field, vectors.len(), ambient, |r, c| vectors[r][c].clone());
        let (r, pivots, rank) = m.rref();
        let rows = Matrix::from_fn(field, rank, ambient, |i, j| r.at(i, j).clone());
        Subspace { field, ambient, rows, pivots }
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis_rows(&self) -> &Matrix {
        &self.rows
    }

    /// Canonical coset representative: subtract the unique combination of
    /// echelon rows clearing every pivot coordinate.
    pub fn reduce(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            if w[p].is_zero() {
                continue;
            }
            let factor = w[p].clone();
            for c in 0..self.ambient {
                let delta = &factor * self.rows.at(i, c);
                w[c] = &w[c] - &delta;
            }
        }
        w
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of the coset of `v` in the quotient, listed at the
    /// non-pivot positions in ascending order.
    pub fn quotient_coords(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        let w = self.reduce(v);
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| w[c].clone())
            .collect()
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;

    fn q() -> FieldDescriptor {
        FieldDescriptor::rationals()
    }

    fn qm(rows: Vec<Vec<i64>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_fn(q(), r, c, |i, j| q().from_i64(rows[i][j]))
    }

    #[test]
    fn rref_identity() {
        let m = Matrix::identity(q(), 3);
        let (r, pivots, rank) = m.rref();
        assert_eq!(r, m);
        assert_eq!(pivots, vec![0, 1, 2]);
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_zero() {
        let m = Matrix::zero(q(), 2, 2);
        let (r, pivots, rank) = m.rref();
        assert!(r.is_zero());
        assert!(pivots.is_empty());
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_dependent_rows() {
        let m = qm(vec![vec![1, 2], vec![2, 4]]);
        let (r, _, rank) = m.rref();
        assert_eq!(r, qm(vec![vec![1, 2], vec![0, 0]]));
        assert_eq!(rank, 1);
    }

    #[test]
    fn kernel_of_invertible_is_empty() {
        let m = qm(vec![vec![1, 1], vec![0, 1]]);
        assert_eq!(m.kernel_basis().cols(), 0);
    }

    #[test]
    fn kernel_of_zero_map() {
        let m = Matrix::zero(q(), 2, 3);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 3);
        assert_eq!(k.rank(), 3);
    }

    #[test]
    fn kernel_of_nilpotent_multiplication() {
        // Multiplication by x on Q[x]/(x^2) in basis {1, x}: 1 -> x, x -> 0.
        let m = qm(vec![vec![0, 0], vec![1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.col_vec(0), vec![q().zero(), q().one()]);
    }

    #[test]
    fn solve_identity() {
        let m = Matrix::identity(q(), 2);
        let b = vec![q().from_i64(3), q().from_i64(5)];
        assert_eq!(m.solve(&b).unwrap(), b);
    }

    #[test]
    fn solve_reports_inconsistency() {
        let m = qm(vec![vec![1, 1], vec![1, 1]]);
        let b = vec![q().from_i64(0), q().from_i64(1)];
        assert_eq!(m.solve(&b), Err(LinalgError::NoSolution));
    }

    #[test]
    fn inverse_involution() {
        let m = qm(vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(m.inverse().unwrap(), m);
        assert!(qm(vec![vec![1, 2], vec![2, 4]]).inverse().is_err());
    }

    #[test]
    fn kronecker_identity() {
        let k = Matrix::identity(q(), 2).kronecker(&Matrix::identity(q(), 3));
        assert_eq!(k, Matrix::identity(q(), 6));
    }

    #[test]
    fn image_basis_picks_original_columns() {
        let m = qm(vec![vec![1, 2, 0], vec![2, 4, 1]]);
        let im = m.image_basis();
        assert_eq!(im.cols(), 2);
        assert_eq!(im.col_vec(0), m.col_vec(0));
        assert_eq!(im.col_vec(1), m.col_vec(2));
    }

    #[test]
    fn subspace_reduction() {
        let s = Subspace::span(
            q(),
            3,
            &[vec![q().one(), q().one(), q().zero()]],
        );
        assert_eq!(s.dim(), 1);
        assert_eq!(s.quotient_dim(), 2);
        assert!(s.contains(&[q().from_i64(2), q().from_i64(2), q().zero()]));
        let coords = s.quotient_coords(&[q().from_i64(2), q().from_i64(3), q().from_i64(4)]);
        assert_eq!(coords, vec![q().one(), q().from_i64(4)]);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
            proptest::collection::vec(-4i64..=4, rows * cols).prop_map(move |v| {
                Matrix::from_fn(q(), rows, cols, |r, c| q().from_i64(v[r * cols + c]))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn rank_nullity(m in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
                let k = m.kernel_basis();
                prop_assert_eq!(m.rank() + k.cols(), m.cols());
                if k.cols() > 0 {
                    prop_assert!(m.mul(&k).is_zero());
                    prop_assert_eq!(k.rank(), k.cols());
                }
            }

            #[test]
            fn solve_is_exact(m in small_matrix(3, 3), xs in proptest::collection::vec(-4i64..=4, 3)) {
                let x: Vec<_> = xs.iter().map(|&v| q().from_i64(v)).collect();
                let b = m.mul_vec(&x);
                let sol = m.solve(&b).unwrap();
                prop_assert_eq!(m.mul_vec(&sol), b);
            }

            #[test]
            fn kronecker_composes(
                a in small_matrix(2, 2),
                b in small_matrix(2, 3),
                c in small_matrix(2, 2),
                d in small_matrix(3, 2),
            ) {
                let lhs = a.kronecker(&b).mul(&c.kronecker(&d));
                let rhs = a.mul(&c).kronecker(&b.mul(&d));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
