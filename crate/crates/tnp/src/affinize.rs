//! Degree-windowed Laurent models A ⊗ k[t, t⁻¹] truncated to degrees
//! [−M, M]. Products whose degree leaves the window are masked.

use std::collections::BTreeSet;

use crate::algcore::{check_axiom, check_laws_on, AxiomId, Algebra, BilinearOp, CheckReport, OpName};
use crate::exactfield::Field;
use crate::{Error, Result};

/// A windowed model together with its base algebra.
#[derive(Clone, Debug)]
pub struct WindowedAlgebra {
    pub base: Algebra,
    pub window: usize,
    pub algebra: Algebra,
}

impl WindowedAlgebra {
    /// Index of `x_i t^m`.
    pub fn index(&self, i: usize, m: i64) -> Option<usize> {
        window_index(self.window, i, m)
    }
}

fn window_index(big_m: usize, i: usize, m: i64) -> Option<usize> {
    let w = big_m as i64;
    (-w..=w).contains(&m).then(|| i * (2 * big_m + 1) + (m + w) as usize)
}

fn degree(big_m: usize, idx: usize) -> (usize, i64) {
    let width = 2 * big_m + 1;
    (idx / width, (idx % width) as i64 - big_m as i64)
}

fn window_labels(base: &[String], big_m: usize) -> Vec<String> {
    let w = big_m as i64;
    base.iter().flat_map(|l| (-w..=w).map(move |m| format!("{l}@t^{{{m}}}"))).collect()
}

/// (xt^m)·(yt^n) = (x·y)t^{m+n} and [xt^m, yt^n] = (m x∘y − n y∘x)t^{m+n−1};
/// the bracket goes in the circ slot.
pub fn build_window(a: &Algebra, big_m: usize) -> Result<WindowedAlgebra> {
    if !a.field().is_rational() {
        return Err(Error::Param("affinization needs characteristic 0".into()));
    }
    if big_m == 0 {
        return Err(Error::Param("window must be positive".into()));
    }
    let (dot, circ) = (a.op(OpName::Dot)?, a.op(OpName::Circ)?);
    let field = a.field();
    let n = a.dim();
    let width = 2 * big_m + 1;
    let dim = n * width;
    let mut wdot = BilinearOp::zero(field, dim);
    let mut wbr = BilinearOp::zero(field, dim);
    let mut dmask = BTreeSet::new();
    let mut bmask = BTreeSet::new();
    for p in 0..dim {
        let (i, m) = degree(big_m, p);
        for q in 0..dim {
            let (j, k) = degree(big_m, q);
            match window_index(big_m, 0, m + k) {
                None => {
                    dmask.insert((p, q));
                }
                Some(_) => {
                    for (r, c) in dot.row(i, j) {
                        wdot.set(p, q, window_index(big_m, *r, m + k).unwrap(), c.clone());
                    }
                }
            }
            match window_index(big_m, 0, m + k - 1) {
                None => {
                    bmask.insert((p, q));
                }
                Some(_) => {
                    let (fm, fk) = (field.from_i64(m), field.from_i64(k));
                    for r in 0..n {
                        let c = &(&fm * &circ.coeff(i, j, r)) - &(&fk * &circ.coeff(j, i, r));
                        if !c.is_zero() {
                            wbr.set(p, q, window_index(big_m, r, m + k - 1).unwrap(), c);
                        }
                    }
                }
            }
        }
    }
    wdot.set_mask(dmask);
    wbr.set_mask(bmask);
    let algebra = Algebra::new(format!("{}[t^±1]_{big_m}", a.name), field, dim)
        .with_labels(window_labels(a.labels(), big_m))?
        .with_dot(wdot)?
        .with_circ(wbr)?
        .with_provenance(format!("affinization of {} in degrees [-{big_m}, {big_m}]", a.name));
    Ok(WindowedAlgebra { base: a.clone(), window: big_m, algebra })
}

/// Windowed k[t, t⁻¹] with t^m·t^n = t^{m+n} and t^m⋄t^n = m t^{m+n−1}
/// (⋄ in the circ slot).
pub fn laurent_rdnp(big_m: usize) -> Result<Algebra> {
    if big_m == 0 {
        return Err(Error::Param("window must be positive".into()));
    }
    let field = Field::Rational;
    let w = big_m as i64;
    let dim = 2 * big_m + 1;
    let mut dot = BilinearOp::zero(field, dim);
    let mut dia = BilinearOp::zero(field, dim);
    let (mut dmask, mut mmask) = (BTreeSet::new(), BTreeSet::new());
    for p in 0..dim {
        let m = p as i64 - w;
        for q in 0..dim {
            let n = q as i64 - w;
            match window_index(big_m, 0, m + n) {
                Some(r) => dot.set(p, q, r, field.one()),
                None => {
                    dmask.insert((p, q));
                }
            }
            match window_index(big_m, 0, m + n - 1) {
                Some(r) => dia.set(p, q, r, field.from_i64(m)),
                None => {
                    mmask.insert((p, q));
                }
            }
        }
    }
    dot.set_mask(dmask);
    dia.set_mask(mmask);
    let labels = (-w..=w).map(|m| format!("t^{{{m}}}")).collect();
    Algebra::new(format!("Laurent_{big_m}"), field, dim)
        .with_labels(labels)?
        .with_dot(dot)?
        .with_circ(dia)
        .map(|a| a.with_provenance("Laurent polynomials with d/dt diamond, windowed"))
}

/// Degree tuples used by the windowed check: `{0,1}^k` together with the
/// nonnegative tuples of total degree ≤ 2.
pub fn degree_grid(k: usize) -> Vec<Vec<i64>> {
    let mut out: BTreeSet<Vec<i64>> = BTreeSet::new();
    let total = 3usize.pow(k as u32);
    for mut code in 0..total {
        let mut t = vec![0i64; k];
        for slot in t.iter_mut().rev() {
            *slot = (code % 3) as i64;
            code /= 3;
        }
        let binary = t.iter().all(|&d| d <= 1);
        if binary || t.iter().sum::<i64>() <= 2 {
            out.insert(t);
        }
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub tnp_pass: bool,
    pub windowed_tp_pass: bool,
    pub agree: bool,
    pub tnp: CheckReport,
    pub windowed: CheckReport,
}

/// Check the transposed Poisson axioms on basis tuples of the window whose
/// degrees lie on [`degree_grid`], skipping masked products.
pub fn windowed_tp_check(w: &WindowedAlgebra) -> Result<CheckReport> {
    let n = w.base.dim();
    let big_m = w.window;
    let axiom = AxiomId::TransposedPoisson;
    check_laws_on(&w.algebra, axiom.name(), &axiom.laws(), None, true, |k| {
        let mut tuples = Vec::new();
        for degs in degree_grid(k) {
            for base in crate::algcore::tuples(n, k) {
                let t: Vec<usize> =
                    base.iter().zip(&degs).map(|(&i, &m)| window_index(big_m, i, m).unwrap()).collect();
                tuples.push(t);
            }
        }
        tuples.into_iter()
    })
}

pub fn affinization_equivalence_report(a: &Algebra, big_m: usize) -> Result<EquivalenceReport> {
    if big_m < 2 {
        return Err(Error::Param("equivalence report needs window M ≥ 2".into()));
    }
    let w = build_window(a, big_m)?;
    let tnp = check_axiom(a, AxiomId::Tnp)?;
    let windowed = windowed_tp_check(&w)?;
    let (tnp_pass, windowed_tp_pass) = (tnp.passed(), windowed.passed());
    Ok(EquivalenceReport { tnp_pass, windowed_tp_pass, agree: tnp_pass == windowed_tp_pass, tnp, windowed })
}
