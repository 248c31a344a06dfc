//! Exact linear algebra over `F_p`.
//!
//! Matrices are dense (row-major) or sparse (coordinate triples sorted by
//! `(row, col)`). The cost of one product by `A` is `mu(A) = 2 nnz` for sparse
//! storage and `2 m n` for dense storage; [`matvec`] and [`vecmat`] charge
//! exactly that to the field-op counter.
//!
//! The reshape helpers implement the vectorization that turns a length-`m`
//! dot product into the trace of a small matrix product: `u` is laid out
//! row-major in a `b1 x b2` matrix, `y` column-major in a `b2 x b1` matrix, and
//! then `Trace(U Y) = u^T y`.

pub mod market;

use std::cell::Cell;
use std::fmt::Debug;
use std::time::{Duration, Instant};

use crate::error::{check_len, Error, Result};
use crate::pairing::counters;
use crate::pairing::{Group, ScalarField};

pub type FieldVector<T> = Vec<T>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Storage<T> {
    Dense(Vec<T>),
    Sparse(Vec<(usize, usize, T)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix<T> {
    rows: usize,
    cols: usize,
    storage: Storage<T>,
}

impl<T: Copy + Eq + Debug> FieldMatrix<T> {
    pub fn dense(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            storage: Storage::Dense(data),
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::dim("ragged rows"));
        }
        Self::dense(m, n, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize, zero: T) -> Self {
        FieldMatrix {
            rows,
            cols,
            storage: Storage::Dense(vec![zero; rows * cols]),
        }
    }

    /// Sparse matrix from coordinate triples. Zero values are dropped; repeated
    /// or out-of-range coordinates are errors.
    pub fn sparse<F>(field: &F, rows: usize, cols: usize, mut triples: Vec<(usize, usize, T)>) -> Result<Self>
    where
        F: ScalarField<Elem = T>,
    {
        triples.retain(|(_, _, v)| !field.is_zero(v));
        triples.sort_by_key(|&(i, j, _)| (i, j));
        for w in triples.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(Error::param(format!(
                    "duplicate entry at ({}, {})",
                    w[0].0, w[0].1
                )));
            }
        }
        if let Some(&(i, j, _)) = triples.iter().find(|&&(i, j, _)| i >= rows || j >= cols) {
            return Err(Error::dim(format!(
                "entry ({i}, {j}) outside a {rows}x{cols} matrix"
            )));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            storage: Storage::Sparse(triples),
        })
    }

    /// Sparse matrix from triples already sorted by `(row, col)`, without
    /// zero filtering.
    pub(crate) fn sparse_sorted(rows: usize, cols: usize, triples: Vec<(usize, usize, T)>) -> Result<Self> {
        if triples.windows(2).any(|w| (w[0].0, w[0].1) >= (w[1].0, w[1].1)) {
            return Err(Error::decode("sparse entries out of order"));
        }
        if triples.iter().any(|&(i, j, _)| i >= rows || j >= cols) {
            return Err(Error::decode(format!("sparse entry outside a {rows}x{cols} matrix")));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            storage: Storage::Sparse(triples),
        })
    }

    pub fn identity<F: ScalarField<Elem = T>>(field: &F, n: usize) -> Self {
        let triples = (0..n).map(|i| (i, i, field.one())).collect();
        Self::sparse(field, n, n, triples).expect("diagonal is well formed")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn storage(&self) -> &Storage<T> {
        &self.storage
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    /// Stored entries: `rows*cols` for dense storage, the triple count for sparse.
    pub fn stored(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.len(),
            Storage::Sparse(t) => t.len(),
        }
    }

    /// `mu(A)`: field operations for one matrix-vector product.
    pub fn cost(&self) -> u64 {
        2 * self.stored() as u64
    }

    pub fn get(&self, i: usize, j: usize, zero: T) -> T {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j],
            Storage::Sparse(t) => t
                .binary_search_by_key(&(i, j), |&(a, b, _)| (a, b))
                .map_or(zero, |k| t[k].2),
        }
    }

    pub fn row(&self, i: usize, zero: T) -> Vec<T> {
        (0..self.cols).map(|j| self.get(i, j, zero)).collect()
    }

    pub fn column(&self, j: usize, zero: T) -> Vec<T> {
        match &self.storage {
            Storage::Dense(d) => (0..self.rows).map(|i| d[i * self.cols + j]).collect(),
            Storage::Sparse(t) => {
                let mut out = vec![zero; self.rows];
                for &(i, jj, v) in t {
                    if jj == j {
                        out[i] = v;
                    }
                }
                out
            }
        }
    }

    pub fn to_dense(&self, zero: T) -> Self {
        match &self.storage {
            Storage::Dense(_) => self.clone(),
            Storage::Sparse(t) => {
                let mut d = vec![zero; self.rows * self.cols];
                for &(i, j, v) in t {
                    d[i * self.cols + j] = v;
                }
                FieldMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    storage: Storage::Dense(d),
                }
            }
        }
    }

    /// Nonzero entries in row-major order, independent of the storage kind.
    pub fn nonzero_entries<'a, F>(&'a self, field: &'a F) -> Box<dyn Iterator<Item = (usize, usize, T)> + 'a>
    where
        F: ScalarField<Elem = T>,
    {
        match &self.storage {
            Storage::Dense(d) => {
                let cols = self.cols;
                Box::new(
                    d.iter()
                        .enumerate()
                        .filter(move |(_, v)| !field.is_zero(v))
                        .map(move |(k, v)| (k / cols, k % cols, *v)),
                )
            }
            Storage::Sparse(t) => Box::new(t.iter().copied()),
        }
    }

    /// Applies `f` to every stored entry.
    pub fn map<U: Copy + Eq + Debug>(&self, f: impl Fn(T) -> U) -> FieldMatrix<U> {
        let storage = match &self.storage {
            Storage::Dense(d) => Storage::Dense(d.iter().map(|&v| f(v)).collect()),
            Storage::Sparse(t) => Storage::Sparse(t.iter().map(|&(i, j, v)| (i, j, f(v))).collect()),
        };
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            storage,
        }
    }
}

/// `sum_k a[k] b[k]` without touching the counters.
pub(crate) fn dot_raw<F: ScalarField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    a.iter()
        .zip(b)
        .fold(field.zero(), |acc, (x, y)| field.add(acc, field.mul(*x, *y)))
}

impl FieldMatrix<u64> {
    /// Nonzero entries of an integer matrix in storage order.
    pub fn nonzero_entries_raw(&self) -> Box<dyn Iterator<Item = (usize, usize, u64)> + '_> {
        match &self.storage {
            Storage::Dense(d) => {
                let cols = self.cols;
                Box::new(
                    d.iter()
                        .enumerate()
                        .filter(|(_, v)| **v != 0)
                        .map(move |(k, v)| (k / cols, k % cols, *v)),
                )
            }
            Storage::Sparse(t) => Box::new(t.iter().copied().filter(|e| e.2 != 0)),
        }
    }
}

/// `a^T b`; charges `2 len` field operations.
pub fn dot<F: ScalarField>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<F::Elem> {
    check_len("dot product", a.len(), b.len())?;
    counters::record_field_ops(2 * a.len() as u64);
    Ok(dot_raw(field, a, b))
}

/// `y = A x`; charges `mu(A)`.
pub fn matvec<F: ScalarField>(field: &F, a: &FieldMatrix<F::Elem>, x: &[F::Elem]) -> Result<Vec<F::Elem>> {
    check_len("matvec input", a.cols, x.len())?;
    counters::record_field_ops(a.cost());
    let start = Instant::now();
    let out = match &a.storage {
        Storage::Dense(d) => {
            if a.cols == 0 {
                vec![field.zero(); a.rows]
            } else {
                d.chunks(a.cols).map(|row| dot_raw(field, row, x)).collect()
            }
        }
        Storage::Sparse(t) => {
            let mut y = vec![field.zero(); a.rows];
            for &(i, j, v) in t {
                y[i] = field.add(y[i], field.mul(v, x[j]));
            }
            y
        }
    };
    add_matvec_time(start.elapsed());
    Ok(out)
}

thread_local! {
    static MATVEC_TIME: Cell<Duration> = const { Cell::new(Duration::ZERO) };
}

pub(crate) fn add_matvec_time(d: Duration) {
    MATVEC_TIME.with(|t| t.set(t.get() + d));
}

/// Wall time spent in matrix-vector products on this thread since the last
/// call, which resets it.
pub fn take_matvec_time() -> Duration {
    MATVEC_TIME.with(|t| t.replace(Duration::ZERO))
}

/// `w^T = u^T A`; charges `mu(A)`.
pub fn vecmat<F: ScalarField>(field: &F, u: &[F::Elem], a: &FieldMatrix<F::Elem>) -> Result<Vec<F::Elem>> {
    check_len("transposed matvec input", a.rows, u.len())?;
    counters::record_field_ops(a.cost());
    let mut w = vec![field.zero(); a.cols];
    match &a.storage {
        Storage::Dense(d) => {
            if a.cols > 0 {
                for (row, ui) in d.chunks(a.cols).zip(u) {
                    if field.is_zero(ui) {
                        continue;
                    }
                    for (wj, v) in w.iter_mut().zip(row) {
                        *wj = field.add(*wj, field.mul(*ui, *v));
                    }
                }
            }
        }
        Storage::Sparse(t) => {
            for &(i, j, v) in t {
                w[j] = field.add(w[j], field.mul(u[i], v));
            }
        }
    }
    Ok(w)
}

/// Dense product `A B`; charges `2 r k c`.
pub fn matmul<F: ScalarField>(
    field: &F,
    a: &FieldMatrix<F::Elem>,
    b: &FieldMatrix<F::Elem>,
) -> Result<FieldMatrix<F::Elem>> {
    if a.cols != b.rows {
        return Err(Error::dim(format!(
            "product of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let zero = field.zero();
    let mut out = Vec::with_capacity(a.rows * b.cols);
    let b_cols: Vec<Vec<F::Elem>> = (0..b.cols).map(|k| b.column(k, zero)).collect();
    for i in 0..a.rows {
        let row = a.row(i, zero);
        for col in &b_cols {
            out.push(dot_raw(field, &row, col));
        }
    }
    counters::record_field_ops(2 * (a.rows * a.cols * b.cols) as u64);
    FieldMatrix::dense(a.rows, b.cols, out)
}

/// Sum of the diagonal.
pub fn trace<F: ScalarField>(field: &F, m: &FieldMatrix<F::Elem>) -> Result<F::Elem> {
    if m.rows != m.cols {
        return Err(Error::dim(format!("trace of a {}x{} matrix", m.rows, m.cols)));
    }
    let zero = field.zero();
    Ok((0..m.rows).fold(zero, |acc, i| field.add(acc, m.get(i, i, zero))))
}

fn check_cover(len: usize, b1: usize, b2: usize) -> Result<()> {
    if b1.checked_mul(b2).is_none_or(|c| c < len) {
        return Err(Error::dim(format!(
            "a {b1}x{b2} reshape cannot hold {len} entries"
        )));
    }
    Ok(())
}

/// Unbalanced reshape dimensions for a vector of length `len`:
/// `b1 = ceil(sqrt(len / ratio))`, `b2 = ceil(sqrt(len * ratio))`, with `b2`
/// grown if needed so that `b1 b2 >= len`. Exact integer arithmetic.
pub fn split_dims(len: usize, ratio: usize) -> (usize, usize) {
    let len = len.max(1) as u128;
    let ratio = ratio.max(1) as u128;
    let mut b1 = (len as f64 / ratio as f64).sqrt().ceil() as u128;
    while b1 > 1 && ratio * (b1 - 1) * (b1 - 1) >= len {
        b1 -= 1;
    }
    while ratio * b1 * b1 < len {
        b1 += 1;
    }
    let target = len * ratio;
    let mut b2 = (target as f64).sqrt().ceil() as u128;
    while b2 > 1 && (b2 - 1) * (b2 - 1) >= target {
        b2 -= 1;
    }
    while b2 * b2 < target {
        b2 += 1;
    }
    let b2 = b2.max(len.div_ceil(b1));
    (b1 as usize, b2 as usize)
}

/// Row-major `b1 x b2` matrix `U` with `U[i, j] = u[i b2 + j]`, zero-padded.
pub fn reshape_lhs<F: ScalarField>(field: &F, u: &[F::Elem], b1: usize, b2: usize) -> Result<FieldMatrix<F::Elem>> {
    check_cover(u.len(), b1, b2)?;
    let mut data = u.to_vec();
    data.resize(b1 * b2, field.zero());
    FieldMatrix::dense(b1, b2, data)
}

/// Column-major `b2 x b1` matrix `Y` with `Y[j, i] = y[i b2 + j]`, zero-padded.
pub fn reshape_rhs<F: ScalarField>(field: &F, y: &[F::Elem], b2: usize, b1: usize) -> Result<FieldMatrix<F::Elem>> {
    check_cover(y.len(), b1, b2)?;
    let zero = field.zero();
    let mut data = vec![zero; b1 * b2];
    for (k, v) in y.iter().enumerate() {
        let (i, j) = (k / b2, k % b2);
        data[j * b1 + i] = *v;
    }
    FieldMatrix::dense(b2, b1, data)
}

/// Dense matrix of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> GroupMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::dim(format!(
                "{rows}x{cols} group matrix from {} entries",
                data.len()
            )));
        }
        Ok(GroupMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }
}

/// Product of the diagonal of a square matrix of group elements.
pub fn trace_group<F, G>(group: &G, c: &GroupMatrix<G::Elem>) -> Result<G::Elem>
where
    F: ScalarField,
    G: Group<F>,
{
    if c.rows != c.cols {
        return Err(Error::dim(format!("trace of a {}x{} matrix", c.rows, c.cols)));
    }
    Ok((0..c.rows).fold(group.identity(), |acc, i| group.op(&acc, &c.get(i, i))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pairing::{counters, suite_toy, PairingEngine, Role, ToyElem, ToyField};
    use proptest::prelude::*;

    fn f101() -> ToyField {
        *suite_toy(101).unwrap().fr()
    }

    #[test]
    fn matvec_examples() {
        let f = f101();
        let a = FieldMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let s = counters::scope(Role::Prover);
        assert_eq!(matvec(&f, &a, &[1, 1]).unwrap(), vec![3, 7]);
        assert_eq!(s.finish().counts.field_ops, 8);
        let id = FieldMatrix::identity(&f, 3);
        assert_eq!(matvec(&f, &id, &[5, 6, 7]).unwrap(), vec![5, 6, 7]);
        let z = FieldMatrix::zeros(2, 3, 0u64);
        assert_eq!(matvec(&f, &z, &[5, 6, 7]).unwrap(), vec![0, 0]);
        assert!(matvec(&f, &a, &[1]).is_err());
    }

    #[test]
    fn sparse_cost_and_validation() {
        let f = f101();
        let a = FieldMatrix::sparse(&f, 3, 3, vec![(2, 1, 5), (0, 0, 1), (1, 2, 0), (1, 1, 7)]).unwrap();
        assert_eq!(a.stored(), 3);
        assert_eq!(a.cost(), 6);
        assert!(FieldMatrix::sparse(&f, 2, 2, vec![(0, 0, 1), (0, 0, 2)]).is_err());
        assert!(FieldMatrix::sparse(&f, 2, 2, vec![(2, 0, 1)]).is_err());
        assert_eq!(a.get(2, 1, 0), 5);
        assert_eq!(a.get(2, 2, 0), 0);
    }

    #[test]
    fn reshape_examples() {
        let f = f101();
        let u = reshape_lhs(&f, &[3, 4, 6, 8], 2, 2).unwrap();
        assert_eq!(u, FieldMatrix::from_rows(vec![vec![3, 4], vec![6, 8]]).unwrap());
        let p = reshape_lhs(&f, &[1, 2, 3], 2, 2).unwrap();
        assert_eq!(p, FieldMatrix::from_rows(vec![vec![1, 2], vec![3, 0]]).unwrap());
        let e = reshape_lhs(&f, &[], 0, 0).unwrap();
        assert_eq!((e.rows(), e.cols()), (0, 0));
        assert!(reshape_lhs(&f, &[1, 2, 3], 1, 2).is_err());

        let y = reshape_rhs(&f, &[1, 0, 1, 0], 2, 2).unwrap();
        assert_eq!(y, FieldMatrix::from_rows(vec![vec![1, 1], vec![0, 0]]).unwrap());
        let u = reshape_lhs(&f, &[1, 2, 3, 4], 2, 2).unwrap();
        let uy = matmul(&f, &u, &y).unwrap();
        assert_eq!(uy, FieldMatrix::from_rows(vec![vec![1, 1], vec![3, 3]]).unwrap());
        assert_eq!(trace(&f, &uy).unwrap(), 4);

        let c = reshape_rhs(&f, &[9], 1, 1).unwrap();
        assert_eq!(c.get(0, 0, 0), 9);
    }

    #[test]
    fn split_dims_examples() {
        assert_eq!(split_dims(64, 100), (1, 80));
        assert_eq!(split_dims(100, 100), (1, 100));
        assert_eq!(split_dims(101, 100), (2, 101));
        assert_eq!(split_dims(4096, 100), (7, 640));
        assert_eq!(split_dims(16, 1), (4, 4));
        assert_eq!(split_dims(17, 1), (5, 5));
        for len in 1..2000 {
            let (b1, b2) = split_dims(len, 100);
            assert!(b1 * b2 >= len);
            assert!(100 * b1 * b1 >= len && (b1 == 1 || 100 * (b1 - 1) * (b1 - 1) < len));
        }
    }

    #[test]
    fn group_trace() {
        let s = suite_toy(101).unwrap();
        let ids = GroupMatrix::new(2, 2, vec![ToyElem::<1>(0); 4]).unwrap();
        assert_eq!(trace_group(s.g1(), &ids).unwrap(), ToyElem(0));
        let one = GroupMatrix::new(1, 1, vec![ToyElem::<1>(7)]).unwrap();
        assert_eq!(trace_group(s.g1(), &one).unwrap(), ToyElem(7));
        let c = GroupMatrix::new(2, 2, vec![ToyElem::<1>(1), ToyElem(1), ToyElem(3), ToyElem(3)]).unwrap();
        assert_eq!(trace_group(s.g1(), &c).unwrap(), ToyElem(4));
        let rect = GroupMatrix::new(1, 2, vec![ToyElem::<1>(1); 2]).unwrap();
        assert!(trace_group(s.g1(), &rect).is_err());
        let rect = FieldMatrix::zeros(1, 2, 0u64);
        assert!(trace(&f101(), &rect).is_err());
    }

    #[test]
    fn vecmat_matches_transpose_product() {
        let f = f101();
        let a = FieldMatrix::from_rows(vec![vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(vecmat(&f, &[0, 1], &a).unwrap(), vec![3, 4]);
        assert_eq!(vecmat(&f, &[1, 1], &a).unwrap(), vec![4, 6]);
    }

    fn arb_sparse() -> impl Strategy<Value = (usize, usize, Vec<(usize, usize, u64)>, Vec<u64>)> {
        (1usize..8, 1usize..8).prop_flat_map(|(m, n)| {
            (
                Just(m),
                Just(n),
                proptest::collection::vec((0..m, 0..n, 0u64..101), 0..20),
                proptest::collection::vec(0u64..101, n),
            )
        })
    }

    proptest! {
        #[test]
        fn sparse_and_dense_products_agree((m, n, mut t, x) in arb_sparse()) {
            let f = f101();
            t.sort_by_key(|&(i, j, _)| (i, j));
            t.dedup_by_key(|e| (e.0, e.1));
            let a = FieldMatrix::sparse(&f, m, n, t).unwrap();
            let d = a.to_dense(0);
            prop_assert_eq!(matvec(&f, &a, &x).unwrap(), matvec(&f, &d, &x).unwrap());
            let u: Vec<u64> = (0..m as u64).collect();
            prop_assert_eq!(vecmat(&f, &u, &a).unwrap(), vecmat(&f, &u, &d).unwrap());
        }
    }
}
