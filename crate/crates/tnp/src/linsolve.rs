//! Exact Gaussian elimination and the subspace computations built on it.
//!
//! Subspaces are stored as reduced row-echelon bases, so two subspaces are
//! equal exactly when their bases are equal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algcore::{is_zero_vector, unit_vector, vaxpy, zero_vector, Algebra, Matrix, OpName, Vector};
use crate::exactfield::{Field, Scalar};
use crate::{Error, Result};

/// Row-reduce `rows` (each of length `cols`) in place. Returns the pivot
/// columns; zero rows are removed.
pub fn rref(rows: &mut Vec<Vector>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in rows[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = -&row[c];
                vaxpy(row, &f, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// A linear subspace of `field^ambient` held as an RREF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        let rows = (0..ambient).map(|i| unit_vector(field, ambient, i)).collect();
        Subspace { field, ambient, rows, pivots: (0..ambient).collect() }
    }

    pub fn span(field: Field, ambient: usize, vectors: &[Vector]) -> Subspace {
        let mut rows: Vec<Vector> = vectors.iter().filter(|v| !is_zero_vector(v)).cloned().collect();
        let pivots = rref(&mut rows, ambient);
        Subspace { field, ambient, rows, pivots }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Membership by reduction against the RREF basis.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !r[p].is_zero() {
                let f = -&r[p];
                vaxpy(&mut r, &f, row);
            }
        }
        is_zero_vector(&r)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::span(self.field, self.ambient, &all)
    }

    /// Vectors orthogonal to every basis row under the standard pairing.
    pub fn orthogonal(&self) -> Subspace {
        nullspace_rows(self.field, self.ambient, &self.rows)
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let mut rows = self.orthogonal().rows;
        rows.extend(other.orthogonal().rows);
        nullspace_rows(self.field, self.ambient, &rows)
    }

    /// Standard basis vectors at the non-pivot columns: a complement chosen
    /// by greedy pivot selection.
    pub fn complement_basis(&self) -> Vec<Vector> {
        (0..self.ambient)
            .filter(|c| !self.pivots.contains(c))
            .map(|c| unit_vector(self.field, self.ambient, c))
            .collect()
    }

    pub fn complement(&self) -> Subspace {
        Subspace::span(self.field, self.ambient, &self.complement_basis())
    }
}

/// Nullspace `{v : row · v = 0 for every row}` as an RREF subspace.
pub fn nullspace_rows(field: Field, cols: usize, rows: &[Vector]) -> Subspace {
    let mut r: Vec<Vector> = rows.to_vec();
    let pivots = rref(&mut r, cols);
    let mut basis = Vec::new();
    for f in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = zero_vector(field, cols);
        v[f] = field.one();
        for (row, &p) in r.iter().zip(&pivots) {
            v[p] = -&row[f];
        }
        basis.push(v);
    }
    Subspace::span(field, cols, &basis)
}

/// Nullspace of a matrix acting on column vectors.
pub fn nullspace(m: &Matrix) -> Subspace {
    nullspace_rows(m.field(), m.cols(), &m.row_vectors())
}

/// Inverse of a square matrix, or `None` when singular.
pub fn invert(m: &Matrix) -> Option<Matrix> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let field = m.field();
    let mut rows: Vec<Vector> = (0..n)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            row.extend(unit_vector(field, n, r));
            row
        })
        .collect();
    let pivots = rref(&mut rows, 2 * n);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    let inv_rows: Vec<Vector> = rows.iter().map(|r| r[n..].to_vec()).collect();
    Matrix::from_rows(field, n, &inv_rows).ok()
}

/// A space of `n x n` matrices, flattened row-major to length `n²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapSpace {
    n: usize,
    space: Subspace,
}

impl LinearMapSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.space.basis().iter().map(|v| Matrix::from_flat(self.space.field(), self.n, v)).collect()
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        self.space.contains(&m.flatten())
    }

    pub fn intersection(&self, other: &LinearMapSpace) -> LinearMapSpace {
        LinearMapSpace { n: self.n, space: self.space.intersection(&other.space) }
    }
}

// Unknown φ_{rc} (coefficient of e_r in φ(e_c)) sits at index r*n + c.
fn delta_rows(a: &Algebra, op: OpName, delta: &Scalar, support: Option<&[usize]>) -> Result<Vec<Vector>> {
    let m = a.op(op)?;
    let n = a.dim();
    let field = a.field();
    let all: Vec<usize> = (0..n).collect();
    let sup = support.unwrap_or(&all);
    let inside = |k: usize| sup.contains(&k);
    let mut rows = Vec::new();
    for &i in sup {
        for &j in sup {
            if m.is_masked(i, j) || m.row(i, j).iter().any(|(k, _)| !inside(*k)) {
                continue;
            }
            if sup.iter().any(|&r| m.is_masked(r, j) || m.is_masked(i, r)) {
                continue;
            }
            let mut eqs = vec![zero_vector(field, n * n); n];
            for (k, c) in m.row(i, j) {
                for (p, eq) in eqs.iter_mut().enumerate() {
                    eq[p * n + k] = &eq[p * n + k] + c;
                }
            }
            for &r in sup {
                for (p, c) in m.row(r, j) {
                    let t = delta * c;
                    eqs[*p][r * n + i] = &eqs[*p][r * n + i] - &t;
                }
                for (p, c) in m.row(i, r) {
                    let t = delta * c;
                    eqs[*p][r * n + j] = &eqs[*p][r * n + j] - &t;
                }
            }
            rows.extend(eqs.into_iter().filter(|e| !is_zero_vector(e)));
        }
    }
    if support.is_some() {
        // Unknowns outside the support are pinned to zero.
        for r in 0..n {
            for c in 0..n {
                if !(inside(r) && inside(c)) {
                    let mut e = zero_vector(field, n * n);
                    e[r * n + c] = field.one();
                    rows.push(e);
                }
            }
        }
    }
    Ok(rows)
}

/// All φ with φ(x∘y) = δ(φ(x)∘y + x∘φ(y)).
pub fn delta_derivation_space(a: &Algebra, op: OpName, delta: &Scalar) -> Result<LinearMapSpace> {
    let n = a.dim();
    let rows = delta_rows(a, op, delta, None)?;
    Ok(LinearMapSpace { n, space: nullspace_rows(a.field(), n * n, &rows) })
}

/// δ-derivations whose matrix is supported on `support × support`, using
/// only the equations whose every term is defined and stays inside the
/// support. Serves windowed models with masked products.
pub fn delta_derivation_space_restricted(
    a: &Algebra,
    op: OpName,
    delta: &Scalar,
    support: &[usize],
) -> Result<LinearMapSpace> {
    let n = a.dim();
    let rows = delta_rows(a, op, delta, Some(support))?;
    Ok(LinearMapSpace { n, space: nullspace_rows(a.field(), n * n, &rows) })
}

/// Maps that are derivations of every listed operation.
pub fn derivation_space(a: &Algebra, ops: &[OpName]) -> Result<LinearMapSpace> {
    let n = a.dim();
    let one = a.field().one();
    let mut rows = Vec::new();
    for &op in ops {
        rows.extend(delta_rows(a, op, &one, None)?);
    }
    Ok(LinearMapSpace { n, space: nullspace_rows(a.field(), n * n, &rows) })
}

/// Γ((A,∗)): φ(x∗y) = x∗φ(y) = φ(x)∗y.
pub fn centroid_space(a: &Algebra, op: OpName) -> Result<LinearMapSpace> {
    let m = a.op(op)?;
    let n = a.dim();
    let field = a.field();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut left = vec![zero_vector(field, n * n); n];
            let mut right = vec![zero_vector(field, n * n); n];
            for (k, c) in m.row(i, j) {
                for p in 0..n {
                    left[p][p * n + k] = &left[p][p * n + k] + c;
                    right[p][p * n + k] = &right[p][p * n + k] + c;
                }
            }
            for r in 0..n {
                for (p, c) in m.row(i, r) {
                    left[*p][r * n + j] = &left[*p][r * n + j] - c;
                }
                for (p, c) in m.row(r, j) {
                    right[*p][r * n + i] = &right[*p][r * n + i] - c;
                }
            }
            rows.extend(left.into_iter().chain(right).filter(|e| !is_zero_vector(e)));
        }
    }
    Ok(LinearMapSpace { n, space: nullspace_rows(field, n * n, &rows) })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnKind {
    Left,
    Right,
    TwoSided,
}

/// Left: {v : v∗I = 0}; right: {v : I∗v = 0}; two-sided: both.
pub fn annihilator(a: &Algebra, op: OpName, kind: AnnKind, of: &Subspace) -> Result<Subspace> {
    let m = a.op(op)?;
    let n = a.dim();
    let units = a.basis();
    let mut rows = Vec::new();
    for u in of.basis() {
        let lefts: Vec<Vector> = if kind != AnnKind::Right {
            units.iter().map(|e| m.eval(e, u)).collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        let rights: Vec<Vector> = if kind != AnnKind::Left {
            units.iter().map(|e| m.eval(u, e)).collect::<Result<_>>()?
        } else {
            Vec::new()
        };
        for images in [lefts, rights] {
            if images.is_empty() {
                continue;
            }
            for p in 0..n {
                rows.push(images.iter().map(|im| im[p].clone()).collect());
            }
        }
    }
    Ok(nullspace_rows(a.field(), n, &rows))
}

/// Ann_A(A) for `op`.
pub fn center_annihilator(a: &Algebra, op: OpName) -> Result<Subspace> {
    annihilator(a, op, AnnKind::TwoSided, &Subspace::full(a.field(), a.dim()))
}

/// span{u ∗ w : u ∈ U, w ∈ W}.
pub fn product_space(a: &Algebra, op: OpName, u: &Subspace, w: &Subspace) -> Result<Subspace> {
    let m = a.op(op)?;
    let mut prods = Vec::new();
    for x in u.basis() {
        for y in w.basis() {
            prods.push(m.eval(x, y)?);
        }
    }
    Ok(Subspace::span(a.field(), a.dim(), &prods))
}

/// A∗A.
pub fn square(a: &Algebra, op: OpName) -> Result<Subspace> {
    let full = Subspace::full(a.field(), a.dim());
    product_space(a, op, &full, &full)
}

/// Smallest two-sided ideal containing `seed` for every listed op.
pub fn ideal_closure(a: &Algebra, ops: &[OpName], seed: &Subspace) -> Result<Subspace> {
    let units = a.basis();
    let mut s = seed.clone();
    let mut frontier: Vec<Vector> = s.basis().to_vec();
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for &op in ops {
            let m = a.op(op)?;
            for v in &frontier {
                for e in &units {
                    for p in [m.eval(e, v)?, m.eval(v, e)?] {
                        if !s.contains(&p) {
                            s = s.sum(&Subspace::span(a.field(), a.dim(), std::slice::from_ref(&p)));
                            fresh.push(p);
                        }
                    }
                }
            }
        }
        if s.is_full() {
            break;
        }
        frontier = fresh;
    }
    Ok(s)
}

pub fn is_ideal(a: &Algebra, ops: &[OpName], s: &Subspace) -> Result<bool> {
    Ok(ideal_closure(a, ops, s)? == *s)
}

/// Non-trivial circ-ideal with (A·I)∘A ⊆ I and A∘(A·I) ⊆ I.
pub fn is_transposed_quasi_ideal(a: &Algebra, s: &Subspace) -> Result<bool> {
    a.op(OpName::Dot)?;
    if s.is_zero() || s.is_full() || !is_ideal(a, &[OpName::Circ], s)? {
        return Ok(false);
    }
    let full = Subspace::full(a.field(), a.dim());
    let ai = product_space(a, OpName::Dot, &full, s)?;
    Ok(s.contains_space(&product_space(a, OpName::Circ, &ai, &full)?)
        && s.contains_space(&product_space(a, OpName::Circ, &full, &ai)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolvabilityReport {
    pub solvable: bool,
    pub right_nilpotent: bool,
    pub nilpotent: bool,
    pub derived_length: Option<usize>,
    pub right_nil_index: Option<usize>,
    pub nil_index: Option<usize>,
}

/// Derived series A^(k+1) = A^(k)∗A^(k), left-iterated series
/// A_L^{k+1} = A_L^k∗A, and the lower series A^k = Σ A^i∗A^{k-i}.
pub fn solvability_report(a: &Algebra, op: OpName) -> Result<SolvabilityReport> {
    a.op(op)?;
    let full = Subspace::full(a.field(), a.dim());
    let n = a.dim();

    let mut derived_length = None;
    let mut cur = full.clone();
    for k in 0..=n {
        if cur.is_zero() {
            derived_length = Some(k);
            break;
        }
        let next = product_space(a, op, &cur, &cur)?;
        if next == cur {
            break;
        }
        cur = next;
    }

    let mut right_nil_index = None;
    let mut cur = full.clone();
    for k in 1..=n + 1 {
        if cur.is_zero() {
            right_nil_index = Some(k);
            break;
        }
        let next = product_space(a, op, &cur, &full)?;
        if next == cur {
            break;
        }
        cur = next;
    }

    // The lower series is decreasing; a bound of 2n+2 terms covers every
    // strictly decreasing run at these sizes.
    let mut powers: Vec<Subspace> = vec![Subspace::zero(a.field(), n), full.clone()];
    let mut nil_index = if n == 0 { Some(1) } else { None };
    for k in 2..=2 * n + 2 {
        if nil_index.is_some() {
            break;
        }
        let mut acc = Subspace::zero(a.field(), n);
        for i in 1..k {
            acc = acc.sum(&product_space(a, op, &powers[i], &powers[k - i])?);
        }
        if acc.is_zero() {
            nil_index = Some(k);
        }
        powers.push(acc);
    }

    Ok(SolvabilityReport {
        solvable: derived_length.is_some(),
        right_nilpotent: right_nil_index.is_some(),
        nilpotent: nil_index.is_some(),
        derived_length,
        right_nil_index,
        nil_index,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SimpleMethod {
    Exhaustive,
    GeneratorSpin,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleReport {
    pub simple: bool,
    pub method: SimpleMethod,
    pub witness: Option<Subspace>,
    pub seed: Option<u64>,
    pub points_checked: u64,
}

/// Ceiling on projective points for exhaustive simplicity testing.
pub const PROJECTIVE_BOUND: u64 = 1_000_000;
/// Number of pseudo-random spin vectors over ℚ.
pub const SPIN_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;

fn projective_point(field: Field, n: usize, p: u64, mut idx: u64) -> Vector {
    // Leading coordinate 1 at position l, free coordinates after it.
    let mut lead = 0;
    loop {
        let block = p.pow((n - lead - 1) as u32);
        if idx < block {
            break;
        }
        idx -= block;
        lead += 1;
    }
    let mut v = zero_vector(field, n);
    v[lead] = field.one();
    for c in (lead + 1..n).rev() {
        v[c] = field.from_i64((idx % p) as i64);
        idx /= p;
    }
    v
}

/// Simplicity of the algebra under the listed ops.
///
/// Over GF(p) every projective point is spun to its ideal closure. Over ℚ
/// only the basis vectors and [`SPIN_SAMPLES`] seeded random vectors are
/// tried, so a `simple = true` answer there is a heuristic.
pub fn is_simple(a: &Algebra, ops: &[OpName], jobs: usize, seed: u64) -> Result<SimpleReport> {
    let n = a.dim();
    let field = a.field();
    let zero_product = ops
        .iter()
        .map(|&op| square(a, op).map(|s| s.is_zero()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .all(|z| z);
    let proper = |v: &Vector| -> Result<Option<Subspace>> {
        let s = ideal_closure(a, ops, &Subspace::span(field, n, std::slice::from_ref(v)))?;
        Ok(if s.is_full() { None } else { Some(s) })
    };
    match field {
        Field::Prime(p) => {
            let count = (0..n as u32).try_fold(0u64, |acc, k| {
                p.checked_pow(k).and_then(|x| acc.checked_add(x))
            });
            let count = match count {
                Some(c) if c <= PROJECTIVE_BOUND => c,
                _ => return Err(Error::Bound(format!("{n}-dimensional GF({p}) exceeds projective enumeration bound"))),
            };
            if zero_product {
                return Ok(SimpleReport { simple: false, method: SimpleMethod::Exhaustive, witness: None, seed: None, points_checked: 0 });
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs.max(1))
                .build()
                .map_err(|e| Error::Invalid(e.to_string()))?;
            let hit = pool.install(|| {
                (0..count).into_par_iter().find_map_first(|idx| {
                    match proper(&projective_point(field, n, p, idx)) {
                        Ok(Some(s)) => Some(Ok(s)),
                        Ok(None) => None,
                        Err(e) => Some(Err(e)),
                    }
                })
            });
            let witness = hit.transpose()?;
            Ok(SimpleReport { simple: witness.is_none(), method: SimpleMethod::Exhaustive, witness, seed: None, points_checked: count })
        }
        Field::Rational => {
            if zero_product {
                return Ok(SimpleReport { simple: false, method: SimpleMethod::GeneratorSpin, witness: None, seed: Some(seed), points_checked: 0 });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut probes = a.basis();
            for _ in 0..SPIN_SAMPLES {
                let v: Vector = (0..n).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
                if !is_zero_vector(&v) {
                    probes.push(v);
                }
            }
            let mut checked = 0;
            for v in &probes {
                checked += 1;
                if let Some(s) = proper(v)? {
                    return Ok(SimpleReport { simple: false, method: SimpleMethod::GeneratorSpin, witness: Some(s), seed: Some(seed), points_checked: checked });
                }
            }
            Ok(SimpleReport { simple: true, method: SimpleMethod::GeneratorSpin, witness: None, seed: Some(seed), points_checked: checked })
        }
    }
}
