//! Compatible dot products for a fixed Novikov product.
//!
//! The unknowns are symmetric structure constants c_{ij}^k (i ≤ j). The two
//! compatibility laws are linear in them, so a nullspace gives the linear
//! stage; associativity is quadratic and is carried as polynomials over the
//! nullspace coordinates. Over GF(p) the stage is enumerated and filtered.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algcore::{check_axiom, laws, Algebra, AxiomId, BilinearOp, Ctx, OpName};
use crate::catalog::{row_dot_params, table_dot, table_novikov, TABLE_ROWS};
use crate::exactfield::{Field, Scalar};
use crate::linsolve::{
    annihilator, center_annihilator, nullspace_rows, solvability_report, square, AnnKind, Subspace,
};
use crate::{violated, Error, Result};

/// Default cap on the number of enumerated points.
pub const ENUMERATION_BOUND: u64 = 10_000_000;

/// A quadratic form Σ c_{ab} t_a t_b (a ≤ b) in the linear-stage coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub terms: BTreeMap<(usize, usize), Scalar>,
}

impl Quadratic {
    pub fn eval(&self, t: &[Scalar]) -> Scalar {
        let f = t.first().map_or(Field::Rational, Scalar::field);
        self.terms.iter().fold(f.zero(), |s, (&(a, b), c)| &s + &(&(c * &t[a]) * &t[b]))
    }
}

#[derive(Clone, Debug)]
pub struct CompatibleSpace {
    pub field: Field,
    pub dim: usize,
    /// Unknown (i, j, k) with i ≤ j, in coordinate order.
    pub coords: Vec<(usize, usize, usize)>,
    /// Solutions of symmetry and both compatibility laws.
    pub linear: Subspace,
    /// The linear-stage basis as dot tensors.
    pub generators: Vec<BilinearOp>,
    /// Associativity residuals over the generator coordinates, deduplicated.
    pub residuals: Vec<Quadratic>,
}

impl CompatibleSpace {
    pub fn linear_dim(&self) -> usize {
        self.generators.len()
    }

    /// Σ t_a G_a.
    pub fn dot_at(&self, t: &[Scalar]) -> BilinearOp {
        let mut op = BilinearOp::zero(self.field, self.dim);
        for (g, c) in self.generators.iter().zip(t) {
            if !c.is_zero() {
                op = op.add(&g.scale(c)).expect("generators share the field");
            }
        }
        op
    }

    /// Coordinates forced to vanish by repeatedly reading off residuals that
    /// reduce to a single square c·t_a² once known zeros are substituted.
    pub fn forced_zero_coordinates(&self) -> BTreeSet<usize> {
        let mut zero = BTreeSet::new();
        loop {
            let before = zero.len();
            for q in &self.residuals {
                let live: Vec<_> =
                    q.terms.iter().filter(|(&(a, b), c)| !c.is_zero() && !zero.contains(&a) && !zero.contains(&b)).collect();
                if let [(&(a, b), _)] = live[..] {
                    if a == b {
                        zero.insert(a);
                    }
                }
            }
            if zero.len() == before {
                return zero;
            }
        }
    }

    /// True when the residuals force every coordinate to zero, so the only
    /// compatible dot is zero. Sound over any field.
    pub fn certifies_only_zero(&self) -> bool {
        self.forced_zero_coordinates().len() == self.linear_dim()
    }
}

fn coordinates(n: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity(n * n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            for k in 0..n {
                out.push((i, j, k));
            }
        }
    }
    out
}

fn coordinate_tensor(field: Field, n: usize, (i, j, k): (usize, usize, usize), c: &Scalar) -> BilinearOp {
    let mut op = BilinearOp::zero(field, n);
    op.set(i, j, k, c.clone());
    op.set(j, i, k, c.clone());
    op
}

fn tensor_from_coords(field: Field, n: usize, coords: &[(usize, usize, usize)], v: &[Scalar]) -> BilinearOp {
    let mut op = BilinearOp::zero(field, n);
    for (&(i, j, k), c) in coords.iter().zip(v) {
        if !c.is_zero() {
            op.set(i, j, k, c.clone());
            op.set(j, i, k, c.clone());
        }
    }
    op
}

/// Associativity residual with the inner product taken in `p` and the outer
/// in `q`: q(p(x,y),z) − q(x,p(y,z)).
fn assoc_cross(p: &BilinearOp, q: &BilinearOp, x: usize, y: usize, z: usize) -> Vec<Scalar> {
    let n = p.dim();
    let f = p.field();
    let mut out = crate::algcore::zero_vector(f, n);
    for (r, c) in p.row(x, y) {
        for (k, d) in q.row(*r, z) {
            out[*k] = &out[*k] + &(c * d);
        }
    }
    for (r, c) in p.row(y, z) {
        for (k, d) in q.row(x, *r) {
            out[*k] = &out[*k] - &(c * d);
        }
    }
    out
}

/// Linear stage plus symbolic associativity residuals.
pub fn compatible_structure_space(a: &Algebra) -> Result<CompatibleSpace> {
    if !check_axiom(a, AxiomId::NovikovLeft)?.passed() {
        return Err(violated("circ is NOVIKOV_LEFT"));
    }
    let (field, n) = (a.field(), a.dim());
    let coords = coordinates(n);
    let one = field.one();
    // Column u holds both compatibility residuals for the u-th unit tensor.
    let mut columns = Vec::with_capacity(coords.len());
    for &c in &coords {
        let alg = a.clone().with_dot(coordinate_tensor(field, n, c, &one))?;
        let ctx = Ctx::new(&alg, None);
        let mut col = Vec::new();
        for law in [laws::TNP1, laws::TNP2] {
            for t in crate::algcore::tuples(n, 3) {
                let args: Vec<_> = t.iter().map(|&i| alg.unit(i)).collect();
                col.extend((law.residual)(&ctx, &args)?);
            }
        }
        columns.push(col);
    }
    let rows: Vec<Vec<Scalar>> = (0..columns[0].len()).map(|r| columns.iter().map(|c| c[r].clone()).collect()).collect();
    let linear = nullspace_rows(field, coords.len(), &rows);
    let generators: Vec<BilinearOp> = linear.basis().iter().map(|v| tensor_from_coords(field, n, &coords, v)).collect();

    let r = generators.len();
    let mut residuals = Vec::new();
    let mut seen = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let mut polys: Vec<BTreeMap<(usize, usize), Scalar>> = vec![BTreeMap::new(); n];
                for ga in 0..r {
                    for gb in 0..r {
                        let v = assoc_cross(&generators[ga], &generators[gb], x, y, z);
                        let key = (ga.min(gb), ga.max(gb));
                        for (k, c) in v.into_iter().enumerate() {
                            if !c.is_zero() {
                                let e = polys[k].entry(key).or_insert_with(|| field.zero());
                                *e = &*e + &c;
                            }
                        }
                    }
                }
                for mut terms in polys {
                    terms.retain(|_, c| !c.is_zero());
                    if !terms.is_empty() {
                        let q = Quadratic { terms: normalize(terms) };
                        let key: Vec<_> = q.terms.iter().map(|(k, c)| (*k, c.to_string())).collect();
                        if seen.insert(key) {
                            residuals.push(q);
                        }
                    }
                }
            }
        }
    }
    Ok(CompatibleSpace { field, dim: n, coords, linear, generators, residuals })
}

/// Scale so the leading coefficient is 1, making duplicates collapse.
fn normalize(terms: BTreeMap<(usize, usize), Scalar>) -> BTreeMap<(usize, usize), Scalar> {
    let lead = terms.values().next().and_then(Scalar::inv).expect("nonzero leading term");
    terms.into_iter().map(|(k, c)| (k, &c * &lead)).collect()
}

fn is_associative(op: &BilinearOp) -> bool {
    let n = op.dim();
    (0..n).all(|x| (0..n).all(|y| (0..n).all(|z| assoc_cross(op, op, x, y, z).iter().all(Scalar::is_zero))))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))
}

/// Every compatible dot over GF(p), in lexicographic order of the
/// linear-stage coordinates. Each result is re-checked against TNP.
pub fn enumerate_compatible(a: &Algebra, max: Option<u64>, jobs: usize) -> Result<Vec<BilinearOp>> {
    let space = compatible_structure_space(a)?;
    enumerate_space(a, &space, max, jobs)
}

pub fn enumerate_space(a: &Algebra, space: &CompatibleSpace, max: Option<u64>, jobs: usize) -> Result<Vec<BilinearOp>> {
    let elems = space.field.elements().ok_or_else(|| Error::Param("enumeration needs a prime field".into()))?;
    let p = elems.len() as u64;
    let r = space.linear_dim() as u32;
    let bound = max.unwrap_or(ENUMERATION_BOUND);
    let total = p.checked_pow(r).filter(|&t| t <= bound);
    let total = total.ok_or_else(|| Error::Bound(format!("{p}^{r} points exceed {bound}")))?;
    let point = |mut code: u64| -> Vec<Scalar> {
        let mut t = vec![space.field.zero(); r as usize];
        for slot in t.iter_mut().rev() {
            *slot = elems[(code % p) as usize].clone();
            code /= p;
        }
        t
    };
    let found: Vec<BilinearOp> = pool(jobs)?.install(|| {
        (0..total)
            .into_par_iter()
            .filter_map(|code| {
                let t = point(code);
                if !space.residuals.iter().all(|q| q.eval(&t).is_zero()) {
                    return None;
                }
                let dot = space.dot_at(&t);
                is_associative(&dot).then_some(dot)
            })
            .collect()
    });
    for dot in &found {
        let alg = a.clone().with_dot(dot.clone())?;
        if !check_axiom(&alg, AxiomId::Tnp)?.passed() {
            return Err(Error::Invalid("enumerated dot fails the TNP self-check".into()));
        }
    }
    Ok(found)
}

/// Order-independent identity of a tensor.
pub fn tensor_key(op: &BilinearOp) -> Vec<(usize, usize, usize, String)> {
    op.entries().map(|(i, j, k, c)| (i, j, k, c.to_string())).collect()
}

#[derive(Clone, Debug)]
pub struct RowCheck {
    pub row: String,
    /// `None` for the rational parameter sweep.
    pub field: Option<Field>,
    pub expected: usize,
    pub found: usize,
    pub pass: bool,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub rows: Vec<RowCheck>,
}

impl ClassificationReport {
    pub fn pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// Parameter values swept over ℚ.
pub const RATIONAL_SWEEP: [i64; 4] = [-1, 0, 1, 2];

fn row_ls(row: &str, values: &[Scalar]) -> Vec<Option<Scalar>> {
    if row == "N6" {
        values.iter().filter(|l| !l.is_zero() && !l.is_one()).cloned().map(Some).collect()
    } else {
        vec![None]
    }
}

fn family_points(row: &str, f: Field, values: &[Scalar]) -> Result<Vec<BilinearOp>> {
    if row_dot_params(row).is_empty() {
        return Ok(vec![table_dot(row, f, &f.zero(), &f.zero())?]);
    }
    let mut out = Vec::new();
    for m in values {
        for n in values {
            out.push(table_dot(row, f, m, n)?);
        }
    }
    Ok(out)
}

fn rational_sweep(row: &str) -> Result<RowCheck> {
    let q = Field::Rational;
    let values: Vec<Scalar> = RATIONAL_SWEEP.iter().map(|&v| q.from_i64(v)).collect();
    let (mut checked, mut failed) = (0, Vec::new());
    for l in row_ls(row, &values) {
        let circ = table_novikov(row, q, l.clone())?;
        for dot in family_points(row, q, &values)? {
            checked += 1;
            if !check_axiom(&circ.clone().with_dot(dot)?, AxiomId::Tnp)?.passed() {
                failed.push(circ.name.clone());
            }
        }
    }
    let mut note = None;
    let mut pass = failed.is_empty();
    if row == "N6" {
        let rejected = [q.zero(), q.one()].into_iter().all(|l| table_novikov(row, q, Some(l)).is_err());
        pass &= rejected;
        note = Some(format!("l ∈ {{0, 1}} rejected: {rejected}"));
    }
    if !failed.is_empty() {
        note = Some(format!("fails TNP: {}", failed.join(", ")));
    }
    Ok(RowCheck { row: row.to_string(), field: None, expected: checked, found: checked - failed.len(), pass, note })
}

fn prime_row(row: &str, f: Field, jobs: usize) -> Result<Vec<RowCheck>> {
    let values = f.elements().expect("prime field");
    let mut out = Vec::new();
    for l in row_ls(row, &values) {
        let circ = table_novikov(row, f, l.clone())?;
        let expected: BTreeSet<_> = family_points(row, f, &values)?.iter().map(tensor_key).collect();
        let found: BTreeSet<_> = enumerate_compatible(&circ, None, jobs)?.iter().map(tensor_key).collect();
        out.push(RowCheck {
            row: circ.name.clone(),
            field: Some(f),
            expected: expected.len(),
            found: found.len(),
            pass: expected == found,
            note: None,
        });
    }
    Ok(out)
}

/// Each table row: the dot family passes TNP over the rational sweep, and
/// over each GF(p) the enumerated compatible dots are exactly the family.
pub fn verify_classification(primes: &[u64], jobs: usize) -> Result<ClassificationReport> {
    let fields: Vec<Field> = primes.iter().map(|&p| Field::prime(p)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    for row in TABLE_ROWS {
        rows.push(rational_sweep(row)?);
        for &f in &fields {
            rows.extend(prime_row(row, f, jobs)?);
        }
    }
    Ok(ClassificationReport { rows })
}

/// How `square_annihilator_search` visits circ tensors.
#[derive(Clone, Copy, Debug)]
pub enum SearchMode {
    /// All p^(n³) tensors.
    Exhaustive,
    /// Random tensors whose entries are nonzero with probability `density`.
    Sampled { samples: u64, seed: u64, density: f64 },
}

#[derive(Clone, Debug)]
pub struct SquareAnnReport {
    pub p: u64,
    pub dim: usize,
    pub examined: u64,
    pub novikov: u64,
    /// Novikov, solvable, with Ann_A(A) = 0.
    pub eligible: u64,
    /// First (algebra, w) meeting every hypothesis.
    pub found: Option<(Algebra, Vec<Scalar>)>,
}

/// Dense residues mod p, for cheap Novikov filtering.
struct Dense {
    n: usize,
    p: u64,
    c: Vec<u64>,
}

impl Dense {
    fn at(&self, i: usize, j: usize, k: usize) -> u64 {
        self.c[(i * self.n + j) * self.n + k]
    }

    /// ((e_x∘e_y)∘e_z)_k
    fn left(&self, x: usize, y: usize, z: usize, k: usize) -> u64 {
        (0..self.n).map(|r| self.at(x, y, r) * self.at(r, z, k)).sum::<u64>() % self.p
    }

    /// (e_x∘(e_y∘e_z))_k
    fn right(&self, x: usize, y: usize, z: usize, k: usize) -> u64 {
        (0..self.n).map(|r| self.at(y, z, r) * self.at(x, r, k)).sum::<u64>() % self.p
    }

    fn is_novikov(&self) -> bool {
        let (n, p) = (self.n, self.p);
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for k in 0..n {
                        if self.left(x, y, z, k) != self.left(x, z, y, k) {
                            return false;
                        }
                        let lhs = self.left(x, y, z, k) + p - self.right(x, y, z, k);
                        let rhs = self.left(y, x, z, k) + p - self.right(y, x, z, k);
                        if lhs % p != rhs % p {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn algebra(&self, f: Field) -> Result<Algebra> {
        let n = self.n;
        let mut op = BilinearOp::zero(f, n);
        for (idx, &c) in self.c.iter().enumerate() {
            if c != 0 {
                op.set(idx / (n * n), (idx / n) % n, idx % n, f.from_i64(c as i64));
            }
        }
        Algebra::new("", f, n).with_circ(op)
    }
}

/// Points of a subspace over a finite field.
fn subspace_points(s: &Subspace, elems: &[Scalar]) -> Vec<Vec<Scalar>> {
    let p = elems.len() as u64;
    let d = s.dim() as u32;
    (0..p.pow(d))
        .map(|mut code| {
            let mut v = crate::algcore::zero_vector(s.field(), s.ambient());
            for b in s.basis() {
                let c = &elems[(code % p) as usize];
                code /= p;
                crate::algcore::vaxpy(&mut v, c, b);
            }
            v
        })
        .collect()
}

/// A witness w ∈ Ann_A(A∘A) \ Ann_L(A) when `a` is solvable with Ann_A(A) = 0.
fn square_ann_witness(a: &Algebra, elems: &[Scalar]) -> Result<(bool, Option<Vec<Scalar>>)> {
    if !center_annihilator(a, OpName::Circ)?.is_zero() || !solvability_report(a, OpName::Circ)?.solvable {
        return Ok((false, None));
    }
    let full = Subspace::full(a.field(), a.dim());
    let left = annihilator(a, OpName::Circ, AnnKind::Left, &full)?;
    let target = annihilator(a, OpName::Circ, AnnKind::TwoSided, &square(a, OpName::Circ)?)?;
    if left.contains_space(&target) {
        return Ok((true, None));
    }
    Ok((true, subspace_points(&target, elems).into_iter().find(|w| !left.contains(w))))
}

/// Search GF(p) Novikov algebras of the given dimension for an instance of
/// the square-annihilator construction's hypotheses.
pub fn square_annihilator_search(p: u64, dim: usize, mode: SearchMode) -> Result<SquareAnnReport> {
    let f = Field::prime(p)?;
    let elems = f.elements().expect("prime field");
    let cells = dim * dim * dim;
    let mut report = SquareAnnReport { p, dim, examined: 0, novikov: 0, eligible: 0, found: None };
    let visit = |c: Vec<u64>, report: &mut SquareAnnReport| -> Result<bool> {
        report.examined += 1;
        let d = Dense { n: dim, p, c };
        if !d.is_novikov() {
            return Ok(false);
        }
        report.novikov += 1;
        let a = d.algebra(f)?;
        let (eligible, w) = square_ann_witness(&a, &elems)?;
        report.eligible += eligible as u64;
        if let Some(w) = w {
            report.found = Some((a, w));
            return Ok(true);
        }
        Ok(false)
    };
    match mode {
        SearchMode::Exhaustive => {
            let total = p.checked_pow(cells as u32).filter(|&t| t <= ENUMERATION_BOUND);
            let total = total.ok_or_else(|| Error::Bound(format!("{p}^{cells} tensors exceed {ENUMERATION_BOUND}")))?;
            for mut code in 0..total {
                let mut c = vec![0u64; cells];
                for slot in c.iter_mut().rev() {
                    *slot = code % p;
                    code /= p;
                }
                if visit(c, &mut report)? {
                    break;
                }
            }
        }
        SearchMode::Sampled { samples, seed, density } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..samples {
                let c = (0..cells).map(|_| if rng.gen_bool(density) { rng.gen_range(1..p) } else { 0 }).collect();
                if visit(c, &mut report)? {
                    break;
                }
            }
        }
    }
    Ok(report)
}
