//! Structure-constant algebras, product evaluation and the axiom/identity
//! predicates.
//!
//! A [`BilinearOp`] stores `e_i * e_j = sum_k c_ij^k e_k` sparsely. An
//! [`Algebra`] carries up to two operations: `dot` (the commutative product)
//! and `circ` (the Novikov product, or a bracket, or a right Novikov product,
//! depending on the axiom being checked).
//!
//! All checks evaluate multilinear residuals on basis tuples in lexicographic
//! order and report the first non-zero residual.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::exactfield::{Field, Scalar};
use crate::{Error, Result};

/// A coordinate vector with respect to the standard basis.
pub type Vector = Vec<Scalar>;

pub fn zero_vector(field: Field, n: usize) -> Vector {
    vec![field.zero(); n]
}

pub fn unit_vector(field: Field, n: usize, i: usize) -> Vector {
    let mut v = zero_vector(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn vadd(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vsub(a: &[Scalar], b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vscale(c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// `acc += c * v`.
pub fn vaxpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

/// Which operation slot of an algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OpName {
    Dot,
    Circ,
}

impl fmt::Display for OpName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OpName::Dot => "dot",
            OpName::Circ => "circ",
        })
    }
}

impl FromStr for OpName {
    type Err = Error;
    fn from_str(s: &str) -> Result<OpName> {
        match s {
            "dot" => Ok(OpName::Dot),
            "circ" => Ok(OpName::Circ),
            _ => Err(Error::Parse(format!("unknown operation {s:?}"))),
        }
    }
}

/// Sparse structure constants of a bilinear product on `field^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearOp {
    field: Field,
    dim: usize,
    // products[i * dim + j] lists (k, c_ij^k) with c nonzero, sorted by k.
    products: Vec<Vec<(usize, Scalar)>>,
    mask: BTreeSet<(usize, usize)>,
}

impl BilinearOp {
    pub fn zero(field: Field, dim: usize) -> BilinearOp {
        BilinearOp { field, dim, products: vec![Vec::new(); dim * dim], mask: BTreeSet::new() }
    }

    /// Build from `(i, j, k, c)` entries. Zero coefficients are dropped;
    /// repeated triples are rejected.
    pub fn from_entries<I>(field: Field, dim: usize, entries: I) -> Result<BilinearOp>
    where
        I: IntoIterator<Item = (usize, usize, usize, Scalar)>,
    {
        let mut op = BilinearOp::zero(field, dim);
        let mut seen = BTreeSet::new();
        for (i, j, k, c) in entries {
            for idx in [i, j, k] {
                if idx >= dim {
                    return Err(Error::IndexOutOfRange { index: idx, dim });
                }
            }
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if !seen.insert((i, j, k)) {
                return Err(Error::Invalid(format!("duplicate entry ({i},{j},{k})")));
            }
            op.set(i, j, k, c);
        }
        Ok(op)
    }

    /// Build from a function giving the coordinates of `e_i * e_j`.
    pub fn from_products<F>(field: Field, dim: usize, mut f: F) -> Result<BilinearOp>
    where
        F: FnMut(usize, usize) -> Result<Vector>,
    {
        let mut op = BilinearOp::zero(field, dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = f(i, j)?;
                if v.len() != dim {
                    return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
                }
                op.products[i * dim + j] =
                    v.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
            }
        }
        Ok(op)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Overwrite one structure constant.
    pub fn set(&mut self, i: usize, j: usize, k: usize, c: Scalar) {
        let row = &mut self.products[i * self.dim + j];
        match row.binary_search_by_key(&k, |(kk, _)| *kk) {
            Ok(pos) if c.is_zero() => {
                row.remove(pos);
            }
            Ok(pos) => row[pos].1 = c,
            Err(_) if c.is_zero() => {}
            Err(pos) => row.insert(pos, (k, c)),
        }
    }

    pub fn coeff(&self, i: usize, j: usize, k: usize) -> Scalar {
        let row = &self.products[i * self.dim + j];
        match row.binary_search_by_key(&k, |(kk, _)| *kk) {
            Ok(pos) => row[pos].1.clone(),
            Err(_) => self.field.zero(),
        }
    }

    /// Nonzero coordinates of `e_i * e_j`, ignoring the mask.
    pub fn row(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.products[i * self.dim + j]
    }

    /// Nonzero entries in `(i, j, k)` order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, usize, &Scalar)> + '_ {
        let n = self.dim;
        self.products
            .iter()
            .enumerate()
            .flat_map(move |(ij, row)| row.iter().map(move |(k, c)| (ij / n, ij % n, *k, c)))
    }

    pub fn nnz(&self) -> usize {
        self.products.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn mask(&self) -> &BTreeSet<(usize, usize)> {
        &self.mask
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        !self.mask.is_empty() && self.mask.contains(&(i, j))
    }

    pub fn set_mask(&mut self, mask: BTreeSet<(usize, usize)>) {
        self.mask = mask;
    }

    /// `e_i * e_j` as a dense vector; errors if the pair is masked.
    pub fn basis_product(&self, i: usize, j: usize) -> Result<Vector> {
        if self.is_masked(i, j) {
            return Err(Error::Masked(i, j));
        }
        let mut v = zero_vector(self.field, self.dim);
        for (k, c) in self.row(i, j) {
            v[*k] = c.clone();
        }
        Ok(v)
    }

    /// Bilinear extension to coordinate vectors.
    pub fn eval(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        for v in [x, y] {
            if v.len() != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
            }
        }
        let mut out = zero_vector(self.field, self.dim);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                if self.is_masked(i, j) {
                    return Err(Error::Masked(i, j));
                }
                let row = self.row(i, j);
                if row.is_empty() {
                    continue;
                }
                let s = xi * yj;
                for (k, c) in row {
                    out[*k] = &out[*k] + &(&s * c);
                }
            }
        }
        Ok(out)
    }

    /// The opposite product `x *' y = y * x`.
    pub fn transpose(&self) -> BilinearOp {
        let n = self.dim;
        let mut t = BilinearOp::zero(self.field, n);
        for i in 0..n {
            for j in 0..n {
                t.products[j * n + i] = self.products[i * n + j].clone();
            }
        }
        t.mask = self.mask.iter().map(|&(i, j)| (j, i)).collect();
        t
    }

    /// `e_i * e_j == e_j * e_i` for all basis pairs.
    pub fn is_symmetric(&self) -> bool {
        self.transpose().products == self.products
    }

    /// Matrix of `y -> x * y`.
    pub fn left_matrix(&self, x: &[Scalar]) -> Result<Matrix> {
        let cols = (0..self.dim)
            .map(|j| self.eval(x, &unit_vector(self.field, self.dim, j)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.field, self.dim, &cols))
    }

    /// Matrix of `x -> x * y`.
    pub fn right_matrix(&self, y: &[Scalar]) -> Result<Matrix> {
        let cols = (0..self.dim)
            .map(|i| self.eval(&unit_vector(self.field, self.dim, i), y))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_columns(self.field, self.dim, &cols))
    }

    pub fn add(&self, other: &BilinearOp) -> Result<BilinearOp> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BilinearOp) -> Result<BilinearOp> {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> BilinearOp {
        let mut out = self.clone();
        for row in &mut out.products {
            for (_, v) in row.iter_mut() {
                *v = c * &*v;
            }
            row.retain(|(_, v)| !v.is_zero());
        }
        out
    }

    fn combine(&self, other: &BilinearOp, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<BilinearOp> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        let mut out = BilinearOp::zero(self.field, self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.raw_product(i, j);
                let b = other.raw_product(i, j);
                for k in 0..self.dim {
                    out.set(i, j, k, f(&a[k], &b[k]));
                }
            }
        }
        out.mask = self.mask.union(&other.mask).copied().collect();
        Ok(out)
    }

    /// `e_i * e_j` ignoring the mask.
    pub fn raw_product(&self, i: usize, j: usize) -> Vector {
        let mut v = zero_vector(self.field, self.dim);
        for (k, c) in self.row(i, j) {
            v[*k] = c.clone();
        }
        v
    }
}

/// Dense matrix. As a linear map, column `c` holds the image of `e_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        Matrix::scalar(field, n, &field.one())
    }

    pub fn scalar(field: Field, n: usize, c: &Scalar) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vector]) -> Result<Matrix> {
        let mut m = Matrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            for (c, x) in row.iter().enumerate() {
                if x.field() != field {
                    return Err(Error::FieldMismatch(field, x.field()));
                }
                m.set(r, c, x.clone());
            }
        }
        Ok(m)
    }

    /// Square matrix whose columns are the given images.
    pub fn from_columns(field: Field, n: usize, cols: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, n, cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        m
    }

    /// Inverse of [`Matrix::flatten`] for an `n x n` matrix.
    pub fn from_flat(field: Field, n: usize, flat: &[Scalar]) -> Matrix {
        Matrix { field, rows: n, cols: n, data: flat.to_vec() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: Scalar) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Row-major entries.
    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn apply(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let mut out = zero_vector(self.field, self.rows);
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let m = self.get(r, c);
                if !m.is_zero() {
                    *o = &*o + &(m * x);
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let cols: Vec<Vector> =
            (0..other.cols).map(|c| self.apply(&other.column(c))).collect::<Result<_>>()?;
        Ok(Matrix::from_columns(self.field, self.rows, &cols))
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.data)
    }

    /// `λ·I` for some λ (square matrices only).
    pub fn is_scalar(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let lam = if self.rows == 0 { self.field.zero() } else { self.get(0, 0).clone() };
        (0..self.rows).all(|r| (0..self.cols).all(|c| {
            let x = self.get(r, c);
            if r == c { *x == lam } else { x.is_zero() }
        }))
    }
}

/// An algebra given by structure constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    pub name: String,
    field: Field,
    dim: usize,
    labels: Vec<String>,
    dot: Option<BilinearOp>,
    circ: Option<BilinearOp>,
    pub provenance: Option<String>,
}

impl Algebra {
    pub fn new(name: impl Into<String>, field: Field, dim: usize) -> Algebra {
        Algebra {
            name: name.into(),
            field,
            dim,
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            dot: None,
            circ: None,
            provenance: None,
        }
    }

    fn check_op(&self, op: &BilinearOp) -> Result<()> {
        if op.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: op.dim() });
        }
        if op.field() != self.field {
            return Err(Error::FieldMismatch(self.field, op.field()));
        }
        Ok(())
    }

    pub fn with_op(mut self, name: OpName, op: BilinearOp) -> Result<Algebra> {
        self.set_op(name, Some(op))?;
        Ok(self)
    }

    pub fn with_dot(self, op: BilinearOp) -> Result<Algebra> {
        self.with_op(OpName::Dot, op)
    }

    pub fn with_circ(self, op: BilinearOp) -> Result<Algebra> {
        self.with_op(OpName::Circ, op)
    }

    pub fn set_op(&mut self, name: OpName, op: Option<BilinearOp>) -> Result<()> {
        if let Some(op) = &op {
            self.check_op(op)?;
        }
        match name {
            OpName::Dot => self.dot = op,
            OpName::Circ => self.circ = op,
        }
        Ok(())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Algebra> {
        if labels.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn with_provenance(mut self, note: impl Into<String>) -> Algebra {
        self.provenance = Some(note.into());
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn dot(&self) -> Option<&BilinearOp> {
        self.dot.as_ref()
    }

    pub fn circ(&self) -> Option<&BilinearOp> {
        self.circ.as_ref()
    }

    pub fn op(&self, name: OpName) -> Result<&BilinearOp> {
        match name {
            OpName::Dot => self.dot.as_ref(),
            OpName::Circ => self.circ.as_ref(),
        }
        .ok_or(Error::MissingOp(name))
    }

    /// True when some product is masked (windowed models only).
    pub fn is_windowed(&self) -> bool {
        [&self.dot, &self.circ].into_iter().flatten().any(|op| !op.mask().is_empty())
    }

    pub fn zero_vector(&self) -> Vector {
        zero_vector(self.field, self.dim)
    }

    pub fn unit(&self, i: usize) -> Vector {
        unit_vector(self.field, self.dim, i)
    }

    pub fn basis(&self) -> Vec<Vector> {
        (0..self.dim).map(|i| self.unit(i)).collect()
    }

    pub fn eval(&self, name: OpName, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.op(name)?.eval(x, y)
    }
}

/// Evaluation context handed to law residuals.
pub struct Ctx<'a> {
    pub field: Field,
    pub dim: usize,
    dot: Option<&'a BilinearOp>,
    circ: Option<&'a BilinearOp>,
    aux: Option<&'a Matrix>,
}

impl<'a> Ctx<'a> {
    pub fn new(a: &'a Algebra, aux: Option<&'a Matrix>) -> Ctx<'a> {
        Ctx { field: a.field, dim: a.dim, dot: a.dot.as_ref(), circ: a.circ.as_ref(), aux }
    }

    pub fn d(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.dot.ok_or(Error::MissingOp(OpName::Dot))?.eval(x, y)
    }

    pub fn c(&self, x: &[Scalar], y: &[Scalar]) -> Result<Vector> {
        self.circ.ok_or(Error::MissingOp(OpName::Circ))?.eval(x, y)
    }

    pub fn phi(&self, x: &[Scalar]) -> Result<Vector> {
        self.aux.ok_or(Error::MissingAux)?.apply(x)
    }

    pub fn int(&self, k: i64) -> Scalar {
        self.field.from_i64(k)
    }
}

type Residual = fn(&Ctx, &[Vector]) -> Result<Vector>;

/// A multilinear law `residual(x1..xk) = 0`.
#[derive(Clone, Copy)]
pub struct Law {
    pub name: &'static str,
    pub arity: usize,
    pub residual: Residual,
}

macro_rules! law {
    ($name:expr, $arity:expr, |$c:ident, $v:ident| $body:expr) => {
        Law {
            name: $name,
            arity: $arity,
            residual: {
                fn f($c: &Ctx, $v: &[Vector]) -> Result<Vector> {
                    $body
                }
                f
            },
        }
    };
}

fn lin(c: &Ctx, terms: &[(i64, &Vector)]) -> Vector {
    let mut out = zero_vector(c.field, c.dim);
    for (k, v) in terms {
        vaxpy(&mut out, &c.int(*k), v);
    }
    out
}

pub mod laws {
    use super::*;

    pub const DOT_COMM: Law = law!("dot_commutative", 2, |c, v| {
        Ok(vsub(&c.d(&v[0], &v[1])?, &c.d(&v[1], &v[0])?))
    });
    pub const DOT_ASSOC: Law = law!("dot_associative", 3, |c, v| {
        let l = c.d(&c.d(&v[0], &v[1])?, &v[2])?;
        let r = c.d(&v[0], &c.d(&v[1], &v[2])?)?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)∘z = (x∘z)∘y
    pub const NOV_RIGHT_COMM: Law = law!("novikov_right_commutative", 3, |c, v| {
        let l = c.c(&c.c(&v[0], &v[1])?, &v[2])?;
        let r = c.c(&c.c(&v[0], &v[2])?, &v[1])?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)∘z − x∘(y∘z) = (y∘x)∘z − y∘(x∘z)
    pub const NOV_LEFT_SYM: Law = law!("novikov_left_symmetric", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let a = c.c(&c.c(x, y)?, z)?;
        let b = c.c(x, &c.c(y, z)?)?;
        let d = c.c(&c.c(y, x)?, z)?;
        let e = c.c(y, &c.c(x, z)?)?;
        Ok(lin(c, &[(1, &a), (-1, &b), (-1, &d), (1, &e)]))
    });
    /// a⋄(b⋄c) = b⋄(a⋄c), with ⋄ stored in the circ slot
    pub const RNOV_LEFT_COMM: Law = law!("right_novikov_left_commutative", 3, |c, v| {
        let l = c.c(&v[0], &c.c(&v[1], &v[2])?)?;
        let r = c.c(&v[1], &c.c(&v[0], &v[2])?)?;
        Ok(vsub(&l, &r))
    });
    /// (a⋄b)⋄c − a⋄(b⋄c) = (a⋄c)⋄b − a⋄(c⋄b)
    pub const RNOV_RIGHT_SYM: Law = law!("right_novikov_right_symmetric", 3, |c, v| {
        let (a, b, d) = (&v[0], &v[1], &v[2]);
        let p = c.c(&c.c(a, b)?, d)?;
        let q = c.c(a, &c.c(b, d)?)?;
        let r = c.c(&c.c(a, d)?, b)?;
        let s = c.c(a, &c.c(d, b)?)?;
        Ok(lin(c, &[(1, &p), (-1, &q), (-1, &r), (1, &s)]))
    });
    /// (x·y)∘z = (x·z)∘y
    pub const TNP1: Law = law!("tnp_right_commutative", 3, |c, v| {
        let l = c.c(&c.d(&v[0], &v[1])?, &v[2])?;
        let r = c.c(&c.d(&v[0], &v[2])?, &v[1])?;
        Ok(vsub(&l, &r))
    });
    /// 2z·(x∘y) = (z·x)∘y + x∘(z·y)
    pub const TNP2: Law = law!("tnp_compatibility", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let l = c.d(z, &c.c(x, y)?)?;
        let a = c.c(&c.d(z, x)?, y)?;
        let b = c.c(x, &c.d(z, y)?)?;
        Ok(lin(c, &[(2, &l), (-1, &a), (-1, &b)]))
    });
    /// (x·y)∘z = x·(y∘z)
    pub const NP1: Law = law!("np_left", 3, |c, v| {
        let l = c.c(&c.d(&v[0], &v[1])?, &v[2])?;
        let r = c.d(&v[0], &c.c(&v[1], &v[2])?)?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)·z − (y∘x)·z = x∘(y·z) − y∘(x·z)
    pub const NP2: Law = law!("np_commutator", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let a = c.d(&c.c(x, y)?, z)?;
        let b = c.d(&c.c(y, x)?, z)?;
        let d = c.c(x, &c.d(y, z)?)?;
        let e = c.c(y, &c.d(x, z)?)?;
        Ok(lin(c, &[(1, &a), (-1, &b), (-1, &d), (1, &e)]))
    });
    pub const ANTISYM: Law = law!("bracket_antisymmetric", 2, |c, v| {
        Ok(vadd(&c.c(&v[0], &v[1])?, &c.c(&v[1], &v[0])?))
    });
    pub const JACOBI: Law = law!("jacobi", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let a = c.c(&c.c(x, y)?, z)?;
        let b = c.c(&c.c(y, z)?, x)?;
        let d = c.c(&c.c(z, x)?, y)?;
        Ok(lin(c, &[(1, &a), (1, &b), (1, &d)]))
    });
    /// 2z·[x,y] = [z·x,y] + [x,z·y]
    pub const TP: Law = law!("transposed_poisson", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let l = c.d(z, &c.c(x, y)?)?;
        let a = c.c(&c.d(z, x)?, y)?;
        let b = c.c(x, &c.d(z, y)?)?;
        Ok(lin(c, &[(2, &l), (-1, &a), (-1, &b)]))
    });
    /// [x,z·y] = z·[x,y] + [x,z]·y
    pub const LEIBNIZ: Law = law!("leibniz", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let l = c.c(x, &c.d(z, y)?)?;
        let a = c.d(z, &c.c(x, y)?)?;
        let b = c.d(&c.c(x, z)?, y)?;
        Ok(lin(c, &[(1, &l), (-1, &a), (-1, &b)]))
    });
    /// (a⋄b)·c = a⋄(b·c)
    pub const RDNP1: Law = law!("rdnp_left", 3, |c, v| {
        let l = c.d(&c.c(&v[0], &v[1])?, &v[2])?;
        let r = c.c(&v[0], &c.d(&v[1], &v[2])?)?;
        Ok(vsub(&l, &r))
    });
    /// (a·b)⋄c = (a⋄c)·b + a·(b⋄c)
    pub const RDNP2: Law = law!("rdnp_leibniz", 3, |c, v| {
        let (a, b, d) = (&v[0], &v[1], &v[2]);
        let l = c.c(&c.d(a, b)?, d)?;
        let p = c.d(&c.c(a, d)?, b)?;
        let q = c.d(a, &c.c(b, d)?)?;
        Ok(lin(c, &[(1, &l), (-1, &p), (-1, &q)]))
    });
    /// (x∘y)·z = (x∘z)·y
    pub const TID1: Law = law!("tid1", 3, |c, v| {
        let l = c.d(&c.c(&v[0], &v[1])?, &v[2])?;
        let r = c.d(&c.c(&v[0], &v[2])?, &v[1])?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)∘(h·z) = (x∘z)∘(h·y), tuple (x, y, z, h)
    pub const TID2: Law = law!("tid2", 4, |c, v| {
        let (x, y, z, h) = (&v[0], &v[1], &v[2], &v[3]);
        let l = c.c(&c.c(x, y)?, &c.d(h, z)?)?;
        let r = c.c(&c.c(x, z)?, &c.d(h, y)?)?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)∘(h·z) − (y∘x)∘(h·z) = (h·x)∘(y∘z) − (h·y)∘(x∘z)
    pub const TID3: Law = law!("tid3", 4, |c, v| {
        let (x, y, z, h) = (&v[0], &v[1], &v[2], &v[3]);
        let hz = c.d(h, z)?;
        let a = c.c(&c.c(x, y)?, &hz)?;
        let b = c.c(&c.c(y, x)?, &hz)?;
        let d = c.c(&c.d(h, x)?, &c.c(y, z)?)?;
        let e = c.c(&c.d(h, y)?, &c.c(x, z)?)?;
        Ok(lin(c, &[(1, &a), (-1, &b), (-1, &d), (1, &e)]))
    });
    /// (x∘y)∘(h·z) = (y∘x)∘(h·z)
    pub const TID4: Law = law!("tid4", 4, |c, v| {
        let (x, y, z, h) = (&v[0], &v[1], &v[2], &v[3]);
        let hz = c.d(h, z)?;
        Ok(vsub(&c.c(&c.c(x, y)?, &hz)?, &c.c(&c.c(y, x)?, &hz)?))
    });
    /// (a·b)⋄c − (a·c)⋄b = a·(b⋄c) − a·(c⋄b)
    pub const DIFFLEM: Law = law!("difflem", 3, |c, v| {
        let (a, b, d) = (&v[0], &v[1], &v[2]);
        let p = c.c(&c.d(a, b)?, d)?;
        let q = c.c(&c.d(a, d)?, b)?;
        let r = c.d(a, &c.c(b, d)?)?;
        let s = c.d(a, &c.c(d, b)?)?;
        Ok(lin(c, &[(1, &p), (-1, &q), (-1, &r), (1, &s)]))
    });
    /// (x∘y)∘φ(z) = (x∘φ(y))∘z
    pub const HALF1: Law = law!("half_id1", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let l = c.c(&c.c(x, y)?, &c.phi(z)?)?;
        let r = c.c(&c.c(x, &c.phi(y)?)?, z)?;
        Ok(vsub(&l, &r))
    });
    /// (x∘y)∘φ(z) − (y∘x)∘φ(z) = φ(x)∘(y∘z) − φ(y)∘(x∘z)
    pub const HALF2: Law = law!("half_id2", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let pz = c.phi(z)?;
        let a = c.c(&c.c(x, y)?, &pz)?;
        let b = c.c(&c.c(y, x)?, &pz)?;
        let d = c.c(&c.phi(x)?, &c.c(y, z)?)?;
        let e = c.c(&c.phi(y)?, &c.c(x, z)?)?;
        Ok(lin(c, &[(1, &a), (-1, &b), (-1, &d), (1, &e)]))
    });
    /// (x∘y)∘α(z) − α(x)∘(y∘z) = (y∘x)∘α(z) − α(y)∘(x∘z)
    pub const HOM1: Law = law!("hom_novikov_left_symmetric", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let az = c.phi(z)?;
        let a = c.c(&c.c(x, y)?, &az)?;
        let b = c.c(&c.phi(x)?, &c.c(y, z)?)?;
        let d = c.c(&c.c(y, x)?, &az)?;
        let e = c.c(&c.phi(y)?, &c.c(x, z)?)?;
        Ok(lin(c, &[(1, &a), (-1, &b), (-1, &d), (1, &e)]))
    });
    /// (x∘y)∘α(z) = (x∘z)∘α(y)
    pub const HOM2: Law = law!("hom_novikov_right_commutative", 3, |c, v| {
        let (x, y, z) = (&v[0], &v[1], &v[2]);
        let l = c.c(&c.c(x, y)?, &c.phi(z)?)?;
        let r = c.c(&c.c(x, z)?, &c.phi(y)?)?;
        Ok(vsub(&l, &r))
    });
    /// (x·y)∘z = z∘(x·y)
    pub const PROP212_B: Law = law!("dot_image_circ_central", 3, |c, v| {
        let xy = c.d(&v[0], &v[1])?;
        Ok(vsub(&c.c(&xy, &v[2])?, &c.c(&v[2], &xy)?))
    });
}

/// Axiom systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomId {
    CommAssoc,
    NovikovLeft,
    NovikovRight,
    Tnp,
    Np,
    Lie,
    TransposedPoisson,
    Rdnp,
    PoissonLeibniz,
}

impl AxiomId {
    pub const ALL: [AxiomId; 9] = [
        AxiomId::CommAssoc,
        AxiomId::NovikovLeft,
        AxiomId::NovikovRight,
        AxiomId::Tnp,
        AxiomId::Np,
        AxiomId::Lie,
        AxiomId::TransposedPoisson,
        AxiomId::Rdnp,
        AxiomId::PoissonLeibniz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AxiomId::CommAssoc => "COMM_ASSOC",
            AxiomId::NovikovLeft => "NOVIKOV_LEFT",
            AxiomId::NovikovRight => "NOVIKOV_RIGHT",
            AxiomId::Tnp => "TNP",
            AxiomId::Np => "NP",
            AxiomId::Lie => "LIE",
            AxiomId::TransposedPoisson => "TRANSPOSED_POISSON",
            AxiomId::Rdnp => "RDNP",
            AxiomId::PoissonLeibniz => "POISSON_LEIBNIZ",
        }
    }

    /// Component laws, checked in order.
    pub fn laws(&self) -> Vec<Law> {
        use laws::*;
        let ca = [DOT_COMM, DOT_ASSOC];
        let nov = [NOV_RIGHT_COMM, NOV_LEFT_SYM];
        let lie = [ANTISYM, JACOBI];
        match self {
            AxiomId::CommAssoc => ca.to_vec(),
            AxiomId::NovikovLeft => nov.to_vec(),
            AxiomId::NovikovRight => vec![RNOV_LEFT_COMM, RNOV_RIGHT_SYM],
            AxiomId::Tnp => [&ca[..], &nov[..], &[TNP1, TNP2]].concat(),
            AxiomId::Np => [&ca[..], &nov[..], &[NP1, NP2]].concat(),
            AxiomId::Lie => lie.to_vec(),
            AxiomId::TransposedPoisson => [&ca[..], &lie[..], &[TP]].concat(),
            AxiomId::Rdnp => [&ca[..], &[RNOV_LEFT_COMM, RNOV_RIGHT_SYM, RDNP1, RDNP2]].concat(),
            AxiomId::PoissonLeibniz => [&ca[..], &lie[..], &[LEIBNIZ]].concat(),
        }
    }

    pub fn ops(&self) -> &'static [OpName] {
        match self {
            AxiomId::CommAssoc => &[OpName::Dot],
            AxiomId::NovikovLeft | AxiomId::NovikovRight | AxiomId::Lie => &[OpName::Circ],
            _ => &[OpName::Dot, OpName::Circ],
        }
    }
}

impl FromStr for AxiomId {
    type Err = Error;
    fn from_str(s: &str) -> Result<AxiomId> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == up)
            .ok_or_else(|| Error::Parse(format!("unknown axiom {s:?}")))
    }
}

/// Derived identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Tid1,
    Tid2,
    Tid3,
    Tid4,
    Difflem,
    HalfId1,
    HalfId2,
    HomNovikov,
    Prop212B,
}

impl IdentityId {
    pub const ALL: [IdentityId; 9] = [
        IdentityId::Tid1,
        IdentityId::Tid2,
        IdentityId::Tid3,
        IdentityId::Tid4,
        IdentityId::Difflem,
        IdentityId::HalfId1,
        IdentityId::HalfId2,
        IdentityId::HomNovikov,
        IdentityId::Prop212B,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::Tid1 => "TID1",
            IdentityId::Tid2 => "TID2",
            IdentityId::Tid3 => "TID3",
            IdentityId::Tid4 => "TID4",
            IdentityId::Difflem => "DIFFLEM",
            IdentityId::HalfId1 => "HALF_ID1",
            IdentityId::HalfId2 => "HALF_ID2",
            IdentityId::HomNovikov => "HOM_NOVIKOV",
            IdentityId::Prop212B => "PROP212_B",
        }
    }

    pub fn laws(&self) -> Vec<Law> {
        use laws::*;
        match self {
            IdentityId::Tid1 => vec![TID1],
            IdentityId::Tid2 => vec![TID2],
            IdentityId::Tid3 => vec![TID3],
            IdentityId::Tid4 => vec![TID4],
            IdentityId::Difflem => vec![DIFFLEM],
            IdentityId::HalfId1 => vec![HALF1],
            IdentityId::HalfId2 => vec![HALF2],
            IdentityId::HomNovikov => vec![HOM1, HOM2],
            IdentityId::Prop212B => vec![PROP212_B],
        }
    }

    pub fn needs_aux(&self) -> bool {
        matches!(self, IdentityId::HalfId1 | IdentityId::HalfId2 | IdentityId::HomNovikov)
    }

    pub fn ops(&self) -> &'static [OpName] {
        match self {
            IdentityId::HalfId1 | IdentityId::HalfId2 | IdentityId::HomNovikov => &[OpName::Circ],
            _ => &[OpName::Dot, OpName::Circ],
        }
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<IdentityId> {
        let up = s.to_ascii_uppercase().replace('-', "_");
        IdentityId::ALL
            .into_iter()
            .find(|a| a.name() == up)
            .ok_or_else(|| Error::Parse(format!("unknown identity {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

/// First violating basis tuple and its residual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub law: String,
    pub indices: Vec<usize>,
    pub residual: Vector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub id: String,
    pub status: Status,
    pub witness: Option<Witness>,
    pub note: Option<String>,
}

impl CheckReport {
    pub fn pass(id: impl Into<String>) -> CheckReport {
        CheckReport { id: id.into(), status: Status::Pass, witness: None, note: None }
    }

    pub fn fail(id: impl Into<String>, witness: Option<Witness>, note: Option<String>) -> CheckReport {
        CheckReport { id: id.into(), status: Status::Fail, witness, note }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Lexicographic odometer over `{0..n}^k`.
pub fn tuples(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = if n == 0 && k > 0 { 0 } else { n.pow(k as u32) };
    (0..total).map(move |mut code| {
        let mut t = vec![0; k];
        for slot in t.iter_mut().rev() {
            *slot = code % n.max(1);
            code /= n.max(1);
        }
        t
    })
}

/// Run laws over the given index tuples. With `skip_masked`, tuples that
/// touch a masked product are ignored; otherwise masks are an error.
pub fn check_laws_on<F, I>(
    a: &Algebra,
    id: &str,
    laws: &[Law],
    aux: Option<&Matrix>,
    skip_masked: bool,
    mut tuples_for: F,
) -> Result<CheckReport>
where
    F: FnMut(usize) -> I,
    I: Iterator<Item = Vec<usize>>,
{
    let ctx = Ctx::new(a, aux);
    for law in laws {
        for t in tuples_for(law.arity) {
            let args: Vec<Vector> = t.iter().map(|&i| a.unit(i)).collect();
            match (law.residual)(&ctx, &args) {
                Ok(r) if is_zero_vector(&r) => {}
                Ok(r) => {
                    let w = Witness { law: law.name.to_string(), indices: t, residual: r };
                    return Ok(CheckReport::fail(id, Some(w), None));
                }
                Err(Error::Masked(..)) if skip_masked => {}
                Err(Error::Masked(i, j)) => {
                    return Err(Error::Partial(format!("masked product ({i},{j}) reached")))
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(CheckReport::pass(id))
}

fn require_ops(a: &Algebra, ops: &[OpName]) -> Result<()> {
    for &op in ops {
        a.op(op)?;
    }
    Ok(())
}

fn require_full(a: &Algebra) -> Result<()> {
    if a.is_windowed() {
        return Err(Error::Partial(format!("{} has masked products", a.name)));
    }
    Ok(())
}

/// Check an axiom system on all basis tuples.
pub fn check_axiom(a: &Algebra, axiom: AxiomId) -> Result<CheckReport> {
    require_ops(a, axiom.ops())?;
    require_full(a)?;
    let n = a.dim();
    check_laws_on(a, axiom.name(), &axiom.laws(), None, false, |k| tuples(n, k))
}

/// As [`check_axiom`], but tuples touching masked products are skipped.
pub fn check_axiom_windowed(a: &Algebra, axiom: AxiomId) -> Result<CheckReport> {
    require_ops(a, axiom.ops())?;
    let n = a.dim();
    check_laws_on(a, axiom.name(), &axiom.laws(), None, true, |k| tuples(n, k))
}

/// Check a derived identity. `aux` is the linear map for the identities
/// that take one.
pub fn check_identity(a: &Algebra, id: IdentityId, aux: Option<&Matrix>) -> Result<CheckReport> {
    require_ops(a, id.ops())?;
    require_full(a)?;
    if id.needs_aux() {
        let m = aux.ok_or(Error::MissingAux)?;
        if m.rows() != a.dim() || m.cols() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), got: m.rows() });
        }
    }
    if id == IdentityId::Tid4 && a.field().characteristic() == 3 {
        return Ok(CheckReport {
            id: id.name().to_string(),
            status: Status::NotApplicable,
            witness: None,
            note: Some("characteristic 3".to_string()),
        });
    }
    let n = a.dim();
    check_laws_on(a, id.name(), &id.laws(), aux, false, |k| tuples(n, k))
}

/// Is `phi` in the centroid of `(A, op)`: φ(x∗y) = x∗φ(y) = φ(x)∗y.
pub fn centroid_membership(a: &Algebra, op: OpName, phi: &Matrix) -> Result<CheckReport> {
    let m = a.op(op)?;
    let id = format!("CENTROID({op})");
    for (i, j) in tuples(a.dim(), 2).map(|t| (t[0], t[1])) {
        let (x, y) = (a.unit(i), a.unit(j));
        let lhs = phi.apply(&m.eval(&x, &y)?)?;
        let mid = m.eval(&x, &phi.apply(&y)?)?;
        let rhs = m.eval(&phi.apply(&x)?, &y)?;
        for (law, other) in [("phi_right", &mid), ("phi_left", &rhs)] {
            let r = vsub(&lhs, other);
            if !is_zero_vector(&r) {
                let w = Witness { law: law.to_string(), indices: vec![i, j], residual: r };
                return Ok(CheckReport::fail(id, Some(w), None));
            }
        }
    }
    Ok(CheckReport::pass(id))
}

/// Is `alpha` a homomorphism of `(A, op)`.
pub fn is_homomorphism(a: &Algebra, op: OpName, alpha: &Matrix) -> Result<bool> {
    let m = a.op(op)?;
    for t in tuples(a.dim(), 2) {
        let (x, y) = (a.unit(t[0]), a.unit(t[1]));
        if alpha.apply(&m.eval(&x, &y)?)? != m.eval(&alpha.apply(&x)?, &alpha.apply(&y)?)? {
            return Ok(false);
        }
    }
    Ok(true)
}
