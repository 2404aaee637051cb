//! Exact dense linear algebra over a [`Field`].
//!
//! Matrices are dense and row-major. Subspaces are stored by a basis in
//! reduced row echelon form (one basis vector per row), which makes equality
//! of subspaces a plain comparison of their basis matrices.

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), rows * cols, "entries length must be rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros<F: Field<Elem = E>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![f.zero(); rows * cols] }
    }

    pub fn identity<F: Field<Elem = E>>(f: &F, n: usize) -> Self {
        let mut m = Self::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    /// Builds a matrix from row vectors, all of length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<E>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix from column vectors, all of length `rows`.
    pub fn from_cols(rows: usize, cols: &[Vec<E>]) -> Self {
        let n = cols.len();
        let mut data = Vec::with_capacity(rows * n);
        for r in 0..rows {
            for c in cols {
                data.push(c[r].clone());
            }
        }
        Matrix { rows, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn col_vecs(&self) -> Vec<Vec<E>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut data = Vec::with_capacity(self.data.len() + other.data.len());
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            for &c in idx {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix { rows: self.rows, cols: idx.len(), data }
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }
}

pub fn mul<F: Field>(f: &F, a: &Matrix<F::Elem>, b: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    assert_eq!(a.cols, b.rows, "matrix product dimension mismatch");
    let mut out = Matrix::zeros(f, a.rows, b.cols);
    for i in 0..a.rows {
        for k in 0..a.cols {
            let aik = a.get(i, k);
            if f.is_zero(aik) {
                continue;
            }
            for j in 0..b.cols {
                let bkj = b.get(k, j);
                if f.is_zero(bkj) {
                    continue;
                }
                let v = f.add(out.get(i, j), &f.mul(aik, bkj));
                out.set(i, j, v);
            }
        }
    }
    out
}

pub fn mat_vec<F: Field>(f: &F, a: &Matrix<F::Elem>, v: &[F::Elem]) -> Vec<F::Elem> {
    assert_eq!(a.cols, v.len());
    (0..a.rows)
        .map(|r| {
            a.row(r)
                .iter()
                .zip(v)
                .fold(f.zero(), |acc, (x, y)| if f.is_zero(x) || f.is_zero(y) { acc } else { f.add(&acc, &f.mul(x, y)) })
        })
        .collect()
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(f.zero(), |acc, (x, y)| {
        if f.is_zero(x) || f.is_zero(y) {
            acc
        } else {
            f.add(&acc, &f.mul(x, y))
        }
    })
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref<E> {
    /// Reduced row echelon form; zero rows are kept at the bottom.
    pub matrix: Matrix<E>,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form with identical row span.
pub fn rref<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a.get(r, c));
        for j in c..cols {
            let v = f.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || f.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                if f.is_zero(a.get(r, j)) {
                    continue;
                }
                let v = f.sub_mul(a.get(i, j), &factor, a.get(r, j));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, rank: r, pivots }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, m).rank
}

/// Basis (as rows) of `{x : m x = 0}`, in reduced row echelon form.
pub fn nullspace<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let red = rref(f, m);
    let n = m.cols;
    let mut is_pivot = vec![None; n];
    for (i, &p) in red.pivots.iter().enumerate() {
        is_pivot[p] = Some(i);
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| is_pivot[c].is_none()) {
        let mut v = vec![f.zero(); n];
        v[free] = f.one();
        for (i, &p) in red.pivots.iter().enumerate() {
            v[p] = f.neg(red.matrix.get(i, free));
        }
        basis.push(v);
    }
    let basis = Matrix::from_rows(n, basis);
    // canonical form
    Subspace::from_rows(f, basis).basis
}

/// A linear subspace of `F^n`, stored canonically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace<E> {
    ambient: usize,
    basis: Matrix<E>,
}

impl<E: Clone> Subspace<E> {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix { rows: 0, cols: ambient, data: Vec::new() } }
    }

    pub fn full<F: Field<Elem = E>>(f: &F, ambient: usize) -> Self {
        Subspace { ambient, basis: Matrix::identity(f, ambient) }
    }

    /// Span of the rows of `m`.
    pub fn from_rows<F: Field<Elem = E>>(f: &F, m: Matrix<E>) -> Self {
        let ambient = m.cols;
        let red = rref(f, &m);
        let keep: Vec<usize> = (0..red.rank).collect();
        Subspace { ambient, basis: red.matrix.select_rows(&keep) }
    }

    pub fn from_vectors<F: Field<Elem = E>>(f: &F, ambient: usize, vs: Vec<Vec<E>>) -> Self {
        Self::from_rows(f, Matrix::from_rows(ambient, vs))
    }

    /// Span of the columns of `m`.
    pub fn column_space<F: Field<Elem = E>>(f: &F, m: &Matrix<E>) -> Self {
        Self::from_rows(f, m.transpose())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<E>> {
        self.basis.row_vecs()
    }

    pub fn sum<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        check_ambient(self, other)?;
        Ok(Self::from_rows(f, self.basis.vstack(&other.basis)))
    }

    /// Solves `(alpha beta) (M; N) = 0` and spans the vectors `alpha M`.
    pub fn intersect<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> Result<Self> {
        check_ambient(self, other)?;
        if self.dim() == 0 || other.dim() == 0 {
            return Ok(Self::zero(self.ambient));
        }
        let stacked = self.basis.vstack(&other.basis);
        let coeffs = nullspace(f, &stacked.transpose());
        let m = self.dim();
        let alphas: Vec<Vec<E>> = (0..coeffs.rows).map(|i| coeffs.row(i)[..m].to_vec()).collect();
        let alpha = Matrix::from_rows(m, alphas);
        Ok(Self::from_rows(f, mul(f, &alpha, &self.basis)))
    }

    pub fn contains_vector<F: Field<Elem = E>>(&self, f: &F, v: &[E]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // reduce v against the rref basis
        let mut w = v.to_vec();
        for i in 0..self.dim() {
            let row = self.basis.row(i);
            let p = row.iter().position(|x| !f.is_zero(x)).expect("nonzero basis row");
            if f.is_zero(&w[p]) {
                continue;
            }
            let c = w[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !f.is_zero(x) {
                    w[j] = f.sub_mul(&w[j], &c, x);
                }
            }
        }
        w.iter().all(|x| f.is_zero(x))
    }

    pub fn contains<F: Field<Elem = E>>(&self, f: &F, other: &Self) -> bool {
        other.ambient == self.ambient && (0..other.dim()).all(|i| self.contains_vector(f, other.basis.row(i)))
    }
}

fn check_ambient<E>(a: &Subspace<E>, b: &Subspace<E>) -> Result<()> {
    if a.ambient != b.ambient {
        return Err(Error::DimensionMismatch(a.ambient, b.ambient));
    }
    Ok(())
}

/// Output of [`orthogonalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orthogonalized<E> {
    /// Pairwise orthogonal columns (not normalized).
    pub matrix: Matrix<E>,
    /// Input column index of each output column.
    pub kept: Vec<usize>,
    /// Input columns that became zero (dependent on earlier columns).
    pub dropped: Vec<usize>,
}

fn require_inner_product<F: Field>(f: &F) -> Result<()> {
    if !f.has_inner_product() {
        return Err(Error::UnsupportedBackend(f.name()));
    }
    Ok(())
}

/// Unnormalized Gram-Schmidt on the columns of `m`.
///
/// Prefix spans are preserved: for every `j` the first `j` input columns and
/// the output columns that came from them span the same space.
pub fn orthogonalize<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Result<Orthogonalized<F::Elem>> {
    require_inner_product(f)?;
    let mut out: Vec<Vec<F::Elem>> = Vec::new();
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for c in 0..m.cols {
        let v = project_out(f, &m.column(c), &out);
        if v.iter().all(|x| f.is_zero(x)) {
            dropped.push(c);
        } else {
            out.push(v);
            kept.push(c);
        }
    }
    Ok(Orthogonalized { matrix: Matrix::from_cols(m.rows, &out), kept, dropped })
}

/// `v - sum_b ((v.b)/(b.b)) b` for pairwise orthogonal `basis` columns.
pub fn project_complement<F: Field>(f: &F, v: &[F::Elem], basis: &[Vec<F::Elem>]) -> Result<Vec<F::Elem>> {
    require_inner_product(f)?;
    Ok(project_out(f, v, basis))
}

pub(crate) fn project_out<F: Field>(f: &F, v: &[F::Elem], basis: &[Vec<F::Elem>]) -> Vec<F::Elem> {
    let mut w = v.to_vec();
    for b in basis {
        let num = dot(f, v, b);
        if f.is_zero(&num) {
            continue;
        }
        let coef = f.div(&num, &dot(f, b, b));
        for (wi, bi) in w.iter_mut().zip(b) {
            if !f.is_zero(bi) {
                *wi = f.sub_mul(wi, &coef, bi);
            }
        }
    }
    w
}
