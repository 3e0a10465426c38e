//! Algebra-to-algebra constructions. Each one verifies its hypotheses,
//! builds the new structure constants and checks the promised axiom system.

use std::collections::BTreeSet;

use crate::algcore::{
    check_axiom, check_axiom_windowed, check_identity, centroid_membership, is_homomorphism, unit_vector, vaxpy,
    vscale, vsub, zero_vector, Algebra, AxiomId, BilinearOp, CheckReport, IdentityId, Matrix, OpName, Status, Vector,
};
use crate::exactfield::Scalar;
use crate::linsolve::{
    annihilator, center_annihilator, derivation_space, invert, is_ideal, solvability_report, square, AnnKind,
    Subspace,
};
use crate::{violated, Error, Result};

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub algebra: Algebra,
    pub promise: AxiomId,
    pub report: CheckReport,
    pub provenance: String,
}

impl ConstructionResult {
    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}

fn require(a: &Algebra, axiom: AxiomId) -> Result<()> {
    let r = if a.is_windowed() { check_axiom_windowed(a, axiom)? } else { check_axiom(a, axiom)? };
    if r.passed() {
        Ok(())
    } else {
        Err(violated(&format!("{} is {}", a.name, axiom.name())))
    }
}

fn same_field(a: &Algebra, b: &Algebra) -> Result<()> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(a.field(), b.field()));
    }
    Ok(())
}

fn finish(algebra: Algebra, promise: AxiomId, provenance: String) -> Result<ConstructionResult> {
    let algebra = algebra.with_provenance(provenance.clone());
    let report = if algebra.is_windowed() {
        check_axiom_windowed(&algebra, promise)?
    } else {
        check_axiom(&algebra, promise)?
    };
    Ok(ConstructionResult { algebra, promise, report, provenance })
}

fn with_ops(a: &Algebra, name: String, dot: Option<BilinearOp>, circ: Option<BilinearOp>) -> Result<Algebra> {
    let mut out = Algebra::new(name, a.field(), a.dim()).with_labels(a.labels().to_vec())?;
    out.set_op(OpName::Dot, dot)?;
    out.set_op(OpName::Circ, circ)?;
    Ok(out)
}

/// Is `d` a derivation of every listed op.
pub fn is_derivation(a: &Algebra, ops: &[OpName], d: &Matrix) -> Result<bool> {
    Ok(derivation_space(a, ops)?.contains(d))
}

/// (A, ·, [x,y] = x∘y − y∘x).
pub fn commutator_tp(a: &Algebra) -> Result<ConstructionResult> {
    require(a, AxiomId::Tnp)?;
    let c = a.op(OpName::Circ)?;
    let bracket = c.sub(&c.transpose())?;
    let out = with_ops(a, format!("commutator({})", a.name), a.dot().cloned(), Some(bracket))?;
    finish(out, AxiomId::TransposedPoisson, format!("commutator bracket of {}", a.name))
}

/// (A, ·, [x,y] = D(x)∘y − D(y)∘x) for a joint derivation D.
pub fn twisted_bracket_tp(a: &Algebra, d: &Matrix) -> Result<ConstructionResult> {
    require(a, AxiomId::Tnp)?;
    if !is_derivation(a, &[OpName::Dot, OpName::Circ], d)? {
        return Err(violated("D ∈ Der(A,·) ∩ Der(A,∘)"));
    }
    let c = a.op(OpName::Circ)?;
    let bracket = BilinearOp::from_products(a.field(), a.dim(), |i, j| {
        let l = c.eval(&d.column(i), &a.unit(j))?;
        let r = c.eval(&d.column(j), &a.unit(i))?;
        Ok(vsub(&l, &r))
    })?;
    let out = with_ops(a, format!("twisted({})", a.name), a.dot().cloned(), Some(bracket))?;
    finish(out, AxiomId::TransposedPoisson, format!("derivation-twisted bracket of {}", a.name))
}

/// (A, ·, x∘y := x·φ(y)) for φ in the centroid of (A, ·).
pub fn centroid_product(a: &Algebra, phi: &Matrix) -> Result<ConstructionResult> {
    require(a, AxiomId::CommAssoc)?;
    if !centroid_membership(a, OpName::Dot, phi)?.passed() {
        return Err(violated("φ ∈ Γ((A,·))"));
    }
    let dot = a.op(OpName::Dot)?;
    let circ = BilinearOp::from_products(a.field(), a.dim(), |i, j| dot.eval(&a.unit(i), &phi.column(j)))?;
    let out = with_ops(a, format!("centroid({})", a.name), Some(dot.clone()), Some(circ))?;
    finish(out, AxiomId::Tnp, format!("centroid-induced product on {}", a.name))
}

/// (B, ·, a⋄b := D(a)·b) with ⋄ stored in the circ slot.
pub fn rdnp_from_derivation(b: &Algebra, d: &Matrix) -> Result<ConstructionResult> {
    require(b, AxiomId::CommAssoc)?;
    if !is_derivation(b, &[OpName::Dot], d)? {
        return Err(violated("D ∈ Der(B,·)"));
    }
    let dot = b.op(OpName::Dot)?;
    let diamond = BilinearOp::from_products(b.field(), b.dim(), |i, j| dot.eval(&d.column(i), &b.unit(j)))?;
    let out = with_ops(b, format!("rdnp({})", b.name), Some(dot.clone()), Some(diamond))?;
    finish(out, AxiomId::Rdnp, format!("derivation diamond on {}", b.name))
}

/// Tensor of two ops on A⊗B with basis index `i·dim(B) + j`. A pair is
/// masked when either factor pair is masked.
fn tensor_op(x: &BilinearOp, y: &BilinearOp) -> BilinearOp {
    let (n, m) = (x.dim(), y.dim());
    let mut out = BilinearOp::zero(x.field(), n * m);
    let mut mask = BTreeSet::new();
    for i in 0..n {
        for k in 0..n {
            let xp = x.raw_product(i, k);
            for j in 0..m {
                for l in 0..m {
                    let (p, q) = (i * m + j, k * m + l);
                    if x.is_masked(i, k) || y.is_masked(j, l) {
                        mask.insert((p, q));
                    }
                    for (s, cy) in y.row(j, l) {
                        for (r, cx) in xp.iter().enumerate() {
                            if !cx.is_zero() {
                                let idx = r * m + s;
                                let prev = out.coeff(p, q, idx);
                                out.set(p, q, idx, &prev + &(cx * cy));
                            }
                        }
                    }
                }
            }
        }
    }
    out.set_mask(mask);
    out
}

fn tensor_labels(a: &Algebra, b: &Algebra, sep: &str) -> Vec<String> {
    a.labels().iter().flat_map(|x| b.labels().iter().map(move |y| format!("{x}{sep}{y}"))).collect()
}

/// A⊗B with (a₁⊗a₂)·(b₁⊗b₂) = a₁·b₁⊗a₂·b₂ and
/// (a₁⊗a₂)∘(b₁⊗b₂) = a₁·b₁⊗a₂∘b₂ + a₁∘b₁⊗a₂·b₂.
pub fn tensor_tnp(a: &Algebra, b: &Algebra) -> Result<ConstructionResult> {
    same_field(a, b)?;
    require(a, AxiomId::Tnp)?;
    require(b, AxiomId::Tnp)?;
    let (ad, ac) = (a.op(OpName::Dot)?, a.op(OpName::Circ)?);
    let (bd, bc) = (b.op(OpName::Dot)?, b.op(OpName::Circ)?);
    let dot = tensor_op(ad, bd);
    let circ = tensor_op(ad, bc).add(&tensor_op(ac, bd))?;
    let out = Algebra::new(format!("{}⊗{}", a.name, b.name), a.field(), a.dim() * b.dim())
        .with_labels(tensor_labels(a, b, "⊗"))?
        .with_dot(dot)?
        .with_circ(circ)?;
    finish(out, AxiomId::Tnp, format!("tensor product {} ⊗ {}", a.name, b.name))
}

/// A⊗B for a TNP A and a right differential Novikov-Poisson B:
/// [x⊗a, y⊗b] = x∘y⊗a⋄b − y∘x⊗b⋄a. B may be windowed.
pub fn tensor_mixed_tp(a: &Algebra, b: &Algebra) -> Result<ConstructionResult> {
    same_field(a, b)?;
    require(a, AxiomId::Tnp)?;
    require(b, AxiomId::Rdnp)?;
    let (ad, ac) = (a.op(OpName::Dot)?, a.op(OpName::Circ)?);
    let (bd, bc) = (b.op(OpName::Dot)?, b.op(OpName::Circ)?);
    let dot = tensor_op(ad, bd);
    let fwd = tensor_op(ac, bc);
    let bracket = fwd.sub(&fwd.transpose())?;
    let out = Algebra::new(format!("{}@{}", a.name, b.name), a.field(), a.dim() * b.dim())
        .with_labels(tensor_labels(a, b, "@"))?
        .with_dot(dot)?
        .with_circ(bracket)?;
    finish(out, AxiomId::TransposedPoisson, format!("mixed tensor product {} ⊗ {}", a.name, b.name))
}

/// Deformation parameter: a field scalar or an element of A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Scalar(Scalar),
    Vector(Vector),
}

impl Twist {
    fn apply(&self, dot: &BilinearOp, v: &[Scalar]) -> Result<Vector> {
        match self {
            Twist::Scalar(c) => Ok(vscale(c, v)),
            Twist::Vector(p) => dot.eval(p, v),
        }
    }
}

/// (A, x·_p y = p·x·y, x∘_q y = x∘y + q·x·y).
pub fn deform_twist(a: &Algebra, p: &Twist, q: &Twist) -> Result<ConstructionResult> {
    require(a, AxiomId::Tnp)?;
    for t in [p, q] {
        if let Twist::Vector(v) = t {
            if v.len() != a.dim() {
                return Err(Error::DimensionMismatch { expected: a.dim(), got: v.len() });
            }
        }
    }
    let (dot, circ) = (a.op(OpName::Dot)?, a.op(OpName::Circ)?);
    let new_dot = BilinearOp::from_products(a.field(), a.dim(), |i, j| p.apply(dot, &dot.raw_product(i, j)))?;
    let new_circ = BilinearOp::from_products(a.field(), a.dim(), |i, j| {
        let mut v = circ.raw_product(i, j);
        let t = q.apply(dot, &dot.raw_product(i, j))?;
        vaxpy(&mut v, &a.field().one(), &t);
        Ok(v)
    })?;
    let out = with_ops(a, format!("deform({})", a.name), Some(new_dot), Some(new_circ))?;
    finish(out, AxiomId::Tnp, format!("twisted deformation of {}", a.name))
}

/// Left Kantor product [A,B]_u(x,y) = A(u,B(x,y)) − B(A(u,x),y) − B(x,A(u,y)).
pub fn kantor(first: &BilinearOp, second: &BilinearOp, u: &[Scalar]) -> Result<BilinearOp> {
    let n = first.dim();
    let f = first.field();
    BilinearOp::from_products(f, n, |i, j| {
        let (x, y) = (unit_vector(f, n, i), unit_vector(f, n, j));
        let a = first.eval(u, &second.eval(&x, &y)?)?;
        let b = second.eval(&first.eval(u, &x)?, &y)?;
        let c = second.eval(&x, &first.eval(u, &y)?)?;
        Ok(vsub(&vsub(&a, &b), &c))
    })
}

#[derive(Clone, Debug)]
pub struct KantorResult {
    /// (A, [∘,·]_u) in the dot slot.
    pub star_comm: ConstructionResult,
    /// (A, [·,∘]_u) in the circ slot.
    pub star_nov: ConstructionResult,
    /// (A, ·, [·,∘]_u).
    pub tnp: ConstructionResult,
}

pub fn kantor_product(a: &Algebra, u: &[Scalar]) -> Result<KantorResult> {
    require(a, AxiomId::Tnp)?;
    if u.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: u.len() });
    }
    let (dot, circ) = (a.op(OpName::Dot)?, a.op(OpName::Circ)?);
    let comm = kantor(circ, dot, u)?;
    let nov = kantor(dot, circ, u)?;
    let star_comm = finish(
        with_ops(a, format!("kantor_comm({})", a.name), Some(comm), None)?,
        AxiomId::CommAssoc,
        format!("Kantor product [∘,·]_u on {}", a.name),
    )?;
    let star_nov = finish(
        with_ops(a, format!("kantor_nov({})", a.name), None, Some(nov.clone()))?,
        AxiomId::NovikovLeft,
        format!("Kantor product [·,∘]_u on {}", a.name),
    )?;
    let tnp = finish(
        with_ops(a, format!("kantor_tnp({})", a.name), Some(dot.clone()), Some(nov))?,
        AxiomId::Tnp,
        format!("(A, ·, [·,∘]_u) on {}", a.name),
    )?;
    Ok(KantorResult { star_comm, star_nov, tnp })
}

fn require_novikov(a: &Algebra) -> Result<()> {
    if !check_axiom(a, AxiomId::NovikovLeft)?.passed() {
        return Err(violated("(A,∘) Novikov"));
    }
    Ok(())
}

/// Product defined on a new basis (columns of `p`), pulled back to the
/// standard basis. `f` receives new-basis coordinates and returns a
/// standard-basis vector.
fn pull_back<F>(a: &Algebra, p: &Matrix, f: F) -> Result<BilinearOp>
where
    F: Fn(&Vector, &Vector) -> Vector,
{
    let inv = invert(p).ok_or_else(|| Error::Invalid("basis change is singular".into()))?;
    let coords: Vec<Vector> = (0..a.dim()).map(|i| inv.column(i)).collect();
    BilinearOp::from_products(a.field(), a.dim(), |i, j| Ok(f(&coords[i], &coords[j])))
}

/// Non-trivial dot on a Novikov algebra with A∘A ∉ {0, A} and Ann_A(A) ≠ 0.
///
/// When (A∘A) ∩ Ann_A(A) = 0 the dot is x_i·x_i = 2x_i on the RREF basis
/// of Ann_A(A), all other basis products zero. Otherwise, with x₁ the
/// first RREF vector of the intersection and y_i a greedy complement of A∘A,
/// y_i·y_j = x₁.
pub fn tnp_on_solvable(a: &Algebra) -> Result<ConstructionResult> {
    require_novikov(a)?;
    let field = a.field();
    let n = a.dim();
    let sq = square(a, OpName::Circ)?;
    if sq.is_zero() {
        return Err(violated("A∘A ≠ 0"));
    }
    if sq.is_full() {
        return Err(violated("A∘A ≠ A"));
    }
    let ann = center_annihilator(a, OpName::Circ)?;
    if ann.is_zero() {
        return Err(violated("Ann_A(A) ≠ 0"));
    }
    let meet = sq.intersection(&ann);
    let (dot, case) = if meet.is_zero() {
        let v = sq.sum(&ann).complement_basis();
        let xs = ann.basis().to_vec();
        let mut cols = xs.clone();
        cols.extend(v);
        cols.extend(sq.basis().iter().cloned());
        let p = Matrix::from_columns(field, n, &cols);
        let two = field.from_i64(2);
        let dot = pull_back(a, &p, |cu, cv| {
            let mut out = zero_vector(field, n);
            for (i, x) in xs.iter().enumerate() {
                let c = &(&cu[i] * &cv[i]) * &two;
                vaxpy(&mut out, &c, x);
            }
            out
        })?;
        (dot, "Ann_A(A) diagonal")
    } else {
        let x1 = meet.basis()[0].clone();
        let k = sq.dim();
        let mut cols = sq.basis().to_vec();
        cols.extend(sq.complement_basis());
        let p = Matrix::from_columns(field, n, &cols);
        let dot = pull_back(a, &p, |cu, cv| {
            let su = cu[k..].iter().fold(field.zero(), |s, c| &s + c);
            let sv = cv[k..].iter().fold(field.zero(), |s, c| &s + c);
            vscale(&(&su * &sv), &x1)
        })?;
        (dot, "complement of A∘A into (A∘A) ∩ Ann_A(A)")
    };
    let out = with_ops(a, format!("solvable_tnp({})", a.name), Some(dot), a.circ().cloned())?;
    finish(out, AxiomId::Tnp, format!("dot from {case} on {}", a.name))
}

/// x·y := (w∘x)∘y for a solvable Novikov algebra with Ann_A(A) = 0 and
/// w ∈ Ann_A(A∘A) \ Ann_L(A).
pub fn tnp_from_square_annihilator(a: &Algebra, w: &[Scalar]) -> Result<ConstructionResult> {
    if w.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: w.len() });
    }
    require_novikov(a)?;
    let field = a.field();
    let full = Subspace::full(field, a.dim());
    if annihilator(a, OpName::Circ, AnnKind::Left, &full)?.contains(w) {
        return Err(Error::Hypothesis("hypothesis w ∉ Ann_L(A) violated: w ∈ Ann_L(A)".into()));
    }
    let sq = square(a, OpName::Circ)?;
    if !annihilator(a, OpName::Circ, AnnKind::TwoSided, &sq)?.contains(w) {
        return Err(violated("w ∈ Ann_A(A∘A)"));
    }
    if !center_annihilator(a, OpName::Circ)?.is_zero() {
        return Err(violated("Ann_A(A) = 0"));
    }
    if !solvability_report(a, OpName::Circ)?.solvable {
        return Err(violated("(A,∘) solvable"));
    }
    let circ = a.op(OpName::Circ)?;
    let dot = BilinearOp::from_products(field, a.dim(), |i, j| circ.eval(&circ.eval(w, &a.unit(i))?, &a.unit(j)))?;
    if dot.is_zero() {
        return Err(Error::Invalid("constructed dot vanishes".into()));
    }
    let out = with_ops(a, format!("square_ann_tnp({})", a.name), Some(dot), Some(circ.clone()))?;
    finish(out, AxiomId::Tnp, format!("dot (w∘x)∘y on {}", a.name))
}

/// Projection onto `ideal2` along `ideal1` for A = ideal1 ⊕ ideal2.
pub fn projection_half_derivation(a: &Algebra, ideal1: &Subspace, ideal2: &Subspace) -> Result<Matrix> {
    let ops = [OpName::Circ];
    if ideal1.is_zero() || ideal2.is_zero() {
        return Err(violated("both summands nonzero"));
    }
    if !ideal1.intersection(ideal2).is_zero() || !ideal1.sum(ideal2).is_full() {
        return Err(violated("A = I₁ ⊕ I₂"));
    }
    if !is_ideal(a, &ops, ideal1)? || !is_ideal(a, &ops, ideal2)? {
        return Err(violated("I₁, I₂ ideals of (A,∘)"));
    }
    let field = a.field();
    let k = ideal1.dim();
    let mut cols = ideal1.basis().to_vec();
    cols.extend(ideal2.basis().iter().cloned());
    let p = Matrix::from_columns(field, a.dim(), &cols);
    let inv = invert(&p).ok_or_else(|| Error::Invalid("basis change is singular".into()))?;
    let mut img = Matrix::zeros(field, a.dim(), a.dim());
    for (c, col) in cols.iter().enumerate().skip(k) {
        for r in 0..a.dim() {
            img.set(r, c, col[r].clone());
        }
    }
    img.mul(&inv)
}

/// φ vanishing on A∘A and sending a greedy complement of A∘A to x₁, the
/// first RREF vector of (A∘A) ∩ Ann_A(A).
pub fn complement_half_derivation(a: &Algebra) -> Result<Matrix> {
    require_novikov(a)?;
    let field = a.field();
    let n = a.dim();
    let sq = square(a, OpName::Circ)?;
    if sq.is_zero() {
        return Err(violated("A∘A ≠ 0"));
    }
    if sq.is_full() {
        return Err(violated("A∘A ≠ A"));
    }
    let ann = center_annihilator(a, OpName::Circ)?;
    if ann.is_zero() {
        return Err(violated("Ann_A(A) ≠ 0"));
    }
    let meet = sq.intersection(&ann);
    if meet.is_zero() {
        return Err(violated("(A∘A) ∩ Ann_A(A) ≠ 0"));
    }
    let x1 = &meet.basis()[0];
    let k = sq.dim();
    let mut cols = sq.basis().to_vec();
    cols.extend(sq.complement_basis());
    let p = Matrix::from_columns(field, n, &cols);
    let inv = invert(&p).ok_or_else(|| Error::Invalid("basis change is singular".into()))?;
    let images: Vec<Vector> = (0..n).map(|c| if c < k { zero_vector(field, n) } else { x1.clone() }).collect();
    Matrix::from_columns(field, n, &images).mul(&inv)
}

/// If L_·(p) is a homomorphism of (A,∘), check the Hom-Novikov identities
/// with α = L_·(p); otherwise report the hypothesis as not met.
pub fn hom_novikov_check(a: &Algebra, p: &[Scalar]) -> Result<CheckReport> {
    require(a, AxiomId::Tnp)?;
    let alpha = a.op(OpName::Dot)?.left_matrix(p)?;
    if !is_homomorphism(a, OpName::Circ, &alpha)? {
        return Ok(CheckReport {
            id: IdentityId::HomNovikov.name().to_string(),
            status: Status::NotApplicable,
            witness: None,
            note: Some("hypothesis not met: L_·(p) is not a homomorphism of (A,∘)".into()),
        });
    }
    check_identity(a, IdentityId::HomNovikov, Some(&alpha))
}

/// Non-zero test used by callers that promise a non-trivial dot.
pub fn is_nontrivial(a: &Algebra) -> bool {
    a.dot().is_some_and(|d| !d.is_zero()) && a.circ().is_some_and(|c| !c.is_zero())
}
