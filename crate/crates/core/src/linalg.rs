//! Dense matrices and incremental row echelon bases over a generic [`Field`].

use std::fmt;

use crate::scalar::Field;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    /// Builds a matrix from equal-length rows. An empty list yields a `0 x cols` matrix.
    pub fn from_rows(rows: Vec<Vec<F>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row);
        }
        Self { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut basis = EchelonBasis::new(self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.rank()
    }

    /// Basis of the right kernel `{x : A x = 0}` read off the reduced row
    /// echelon form: one vector per free column, with a one in that column.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let mut basis = EchelonBasis::new(self.cols);
        for r in 0..self.rows {
            basis.insert(self.row(r).to_vec());
        }
        basis.kernel()
    }
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[r * self.cols..(r + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

/// Row echelon basis of a subspace of `F^n`, built one vector at a time.
///
/// Rows are kept with a leading one and ordered by pivot column. Every row is
/// zero to the left of its pivot, which is all that reduction needs; call
/// [`EchelonBasis::make_reduced`] to also clear entries above the pivots.
#[derive(Clone, Debug)]
pub struct EchelonBasis<F> {
    dim: usize,
    rows: Vec<(usize, Vec<F>)>,
    reduced: bool,
}

impl<F: Field> EchelonBasis<F> {
    pub fn new(dim: usize) -> Self {
        Self { dim, rows: Vec::new(), reduced: true }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[F]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    /// Reduces `v` against the basis in place. The result is zero at every
    /// pivot column and congruent to the input modulo the span.
    pub fn reduce(&self, v: &mut [F]) {
        assert_eq!(v.len(), self.dim);
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (c, x) in row.iter().enumerate().skip(*p) {
                if !x.is_zero() {
                    v[c] = v[c].clone() - factor.clone() * x.clone();
                }
            }
        }
    }

    /// Like [`reduce`](Self::reduce) but also returns the coefficients used,
    /// one per basis row in pivot order.
    pub fn reduce_with_coefficients(&self, v: &mut [F]) -> Vec<F> {
        assert_eq!(v.len(), self.dim);
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (p, row) in &self.rows {
            let factor = v[*p].clone();
            if !factor.is_zero() {
                for (c, x) in row.iter().enumerate().skip(*p) {
                    if !x.is_zero() {
                        v[c] = v[c].clone() - factor.clone() * x.clone();
                    }
                }
            }
            coeffs.push(factor);
        }
        coeffs
    }

    pub fn contains(&self, v: &[F]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Inserts `v`; returns `true` if it was independent of the current span.
    pub fn insert(&mut self, mut v: Vec<F>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inverse();
        for x in v.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        // v is already zero at every existing pivot; only rows above can
        // have an entry in the new pivot column
        if self.reduced && self.rows[..at].iter().any(|(_, r)| !r[p].is_zero()) {
            self.reduced = false;
        }
        self.rows.insert(at, (p, v));
        true
    }

    /// Clears every entry above a pivot so the rows form the reduced row
    /// echelon form of the span.
    pub fn make_reduced(&mut self) {
        if self.reduced {
            return;
        }
        for i in (0..self.rows.len()).rev() {
            let (p, pivot_row) = {
                let (p, r) = &self.rows[i];
                (*p, r.clone())
            };
            for j in 0..i {
                let factor = self.rows[j].1[p].clone();
                if factor.is_zero() {
                    continue;
                }
                let row = &mut self.rows[j].1;
                for (c, x) in pivot_row.iter().enumerate().skip(p) {
                    if !x.is_zero() {
                        row[c] = row[c].clone() - factor.clone() * x.clone();
                    }
                }
            }
        }
        self.reduced = true;
    }

    /// Basis of the annihilator of the row space: the kernel of the matrix
    /// whose rows are the inserted vectors.
    pub fn kernel(&mut self) -> Vec<Vec<F>> {
        self.make_reduced();
        let mut is_pivot = vec![false; self.dim];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.dim)
            .filter(|c| !is_pivot[*c])
            .map(|free| {
                let mut v = vec![F::zero(); self.dim];
                v[free] = F::one();
                for (p, row) in &self.rows {
                    if !row[free].is_zero() {
                        v[*p] = -row[free].clone();
                    }
                }
                v
            })
            .collect()
    }
}

/// Solves `A x = b` exactly; returns one solution if the system is consistent.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    let mut basis = EchelonBasis::new(n + 1);
    for r in 0..a.rows() {
        let mut row = a.row(r).to_vec();
        row.push(b[r].clone());
        basis.insert(row);
    }
    basis.make_reduced();
    let mut x = vec![F::zero(); n];
    for (p, row) in &basis.rows {
        if *p == n {
            return None;
        }
        x[*p] = row[n].clone();
    }
    Some(x)
}
