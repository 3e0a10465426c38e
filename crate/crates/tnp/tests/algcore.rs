mod common;

use common::*;
use proptest::prelude::*;
use tnp::algcore::{
    centroid_membership, check_axiom, check_identity, laws, tuples, Ctx, Status,
};
use tnp::linsolve::delta_derivation_space;
use tnp::{Algebra, AxiomId, BilinearOp, Field, IdentityId, Matrix, OpName, Vector};

fn half(f: Field) -> tnp::Scalar {
    f.from_i64(2).inv().unwrap()
}

#[test]
fn novikov_n1_evaluates() {
    let a = get("N1");
    assert_eq!(a.eval(OpName::Circ, &a.unit(0), &a.unit(0)).unwrap(), a.unit(0));
    assert_eq!(a.eval(OpName::Circ, &a.unit(0), &a.unit(1)).unwrap(), a.zero_vector());
}

#[test]
fn zero_left_argument_gives_zero() {
    for a in catalog_tnps(Field::Rational).iter().take(20) {
        let z = a.zero_vector();
        for name in [OpName::Dot, OpName::Circ] {
            for y in a.basis() {
                assert_eq!(a.eval(name, &z, &y).unwrap(), z);
            }
        }
    }
}

#[test]
fn ex2_11_dot_evaluates() {
    let a = get("Ex2.11");
    assert_eq!(a.eval(OpName::Dot, &a.unit(0), &a.unit(2)).unwrap(), a.unit(0));
    assert_eq!(a.eval(OpName::Dot, &a.unit(2), &a.unit(0)).unwrap(), a.unit(0));
}

#[test]
fn t2_row_passes_tnp() {
    let a = catalog_get_p("T2-tnp(m=1,n=0)");
    assert!(check_axiom(&a, AxiomId::Tnp).unwrap().passed());
}

fn catalog_get_p(s: &str) -> Algebra {
    tnp::catalog::catalog_get(s, None, &Default::default()).unwrap()
}

#[test]
fn zero_products_pass_everything() {
    for f in fields() {
        for n in 1..=3 {
            let z = BilinearOp::zero(f, n);
            let a = Algebra::new("zero", f, n).with_dot(z.clone()).unwrap().with_circ(z).unwrap();
            for ax in AxiomId::ALL {
                assert!(check_axiom(&a, ax).unwrap().passed(), "{ax:?}");
            }
        }
    }
}

#[test]
fn novikov_n4_with_idempotent_dot_fails() {
    let n4 = get("N4");
    let f = n4.field();
    let dot = BilinearOp::from_entries(f, 2, vec![(0, 0, 0, f.one())]).unwrap();
    let a = n4.with_dot(dot).unwrap();
    let r = check_axiom(&a, AxiomId::Tnp).unwrap();
    assert_eq!(r.status, Status::Fail);
    let w = r.witness.expect("witness");
    assert_eq!(w.law, "tnp_right_commutative");
    assert_eq!(w.indices, vec![0, 0, 1]);
    let ctx = Ctx::new(&a, None);
    let args: Vec<Vector> = w.indices.iter().map(|&i| a.unit(i)).collect();
    assert_eq!((laws::TNP1.residual)(&ctx, &args).unwrap(), w.residual);
}

#[test]
fn witness_present_iff_failure() {
    let mut r = rng(11);
    for _ in 0..60 {
        let a = random_pair(&mut r, 2);
        for ax in AxiomId::ALL {
            let rep = check_axiom(&a, ax).unwrap();
            assert_eq!(rep.passed(), rep.witness.is_none());
        }
    }
}

#[test]
fn witness_is_lexicographically_first() {
    let mut r = rng(5);
    for _ in 0..40 {
        let a = random_pair(&mut r, 2);
        let rep = check_axiom(&a, AxiomId::Tnp).unwrap();
        let Some(w) = rep.witness else { continue };
        let ctx = Ctx::new(&a, None);
        for law in AxiomId::Tnp.laws() {
            for t in tuples(2, law.arity) {
                if law.name == w.law && t == w.indices {
                    break;
                }
                let args: Vec<Vector> = t.iter().map(|&i| a.unit(i)).collect();
                assert!(tnp::algcore::is_zero_vector(&(law.residual)(&ctx, &args).unwrap()));
            }
            if law.name == w.law {
                break;
            }
        }
    }
}

#[test]
fn missing_op_errors() {
    let a = get("N1");
    assert!(check_axiom(&a, AxiomId::Tnp).is_err());
    assert!(check_axiom(&a, AxiomId::NovikovLeft).unwrap().passed());
}

#[test]
fn comm_assoc_circ_is_novikov() {
    for f in fields() {
        for spec in ["CyclicConv", "CyclicConv(N=3,a0=2,a1=1,a2=-1)", "CyclicConv(N=5)"] {
            let a = tnp::catalog::catalog_get(spec, Some(f), &Default::default()).unwrap();
            let dot = a.dot().unwrap().clone();
            assert!(check_axiom(&a, AxiomId::CommAssoc).unwrap().passed());
            let as_circ = Algebra::new("c", f, a.dim()).with_circ(dot).unwrap();
            assert!(check_axiom(&as_circ, AxiomId::NovikovLeft).unwrap().passed());
        }
    }
}

#[test]
fn tnp_implies_tid1_to_tid4() {
    for f in fields() {
        for a in catalog_tnps(f) {
            assert!(check_axiom(&a, AxiomId::Tnp).unwrap().passed(), "{}", a.name);
            for id in [IdentityId::Tid1, IdentityId::Tid2, IdentityId::Tid3] {
                assert!(check_identity(&a, id, None).unwrap().passed(), "{} {id:?}", a.name);
            }
            let r = check_identity(&a, IdentityId::Tid4, None).unwrap();
            if f.characteristic() == 3 {
                assert_eq!(r.status, Status::NotApplicable);
            } else {
                assert!(r.passed(), "{} TID4", a.name);
            }
        }
    }
}

#[test]
fn n3_tid4_over_rationals() {
    let a = catalog_get_p("N3-tnp(n=1,m=0)");
    assert!(check_identity(&a, IdentityId::Tid4, None).unwrap().passed());
}

#[test]
fn half_identities_with_zero_map() {
    for a in catalog_novikovs(Field::Rational) {
        let z = Matrix::zeros(a.field(), a.dim(), a.dim());
        for id in [IdentityId::HalfId1, IdentityId::HalfId2] {
            assert!(check_identity(&a, id, Some(&z)).unwrap().passed());
        }
        assert!(matches!(check_identity(&a, IdentityId::HalfId1, None), Err(tnp::Error::MissingAux)));
    }
}

#[test]
fn dot_multiplication_is_half_derivation() {
    for f in fields() {
        for a in catalog_tnps(f) {
            let half_der = delta_derivation_space(&a, OpName::Circ, &half(f)).unwrap();
            for z in a.basis() {
                let l = a.dot().unwrap().left_matrix(&z).unwrap();
                assert!(half_der.contains(&l), "{}", a.name);
            }
        }
    }
}

#[test]
fn dot_image_central_iff_np() {
    for f in fields() {
        for a in catalog_tnps(f) {
            np_equivalences(&a);
        }
    }
}

fn np_equivalences(a: &Algebra) -> bool {
    let b = check_identity(a, IdentityId::Prop212B, None).unwrap().passed();
    let np = check_axiom(a, AxiomId::Np).unwrap().passed();
    let (dot, circ) = (a.dot().unwrap(), a.circ().unwrap());
    let c = a.basis().iter().all(|x| {
        centroid_membership(a, OpName::Circ, &dot.left_matrix(x).unwrap()).unwrap().passed()
    });
    let d = a.basis().iter().all(|x| {
        centroid_membership(a, OpName::Dot, &circ.left_matrix(x).unwrap()).unwrap().passed()
    });
    assert!(b == np && c == np && d == np, "{}: np {np} b {b} c {c} d {d}", a.name);
    np
}

/// Every dim-2 TNP over GF(3) plus the compatible dots on Ex3.21, so both
/// sides of the equivalence occur.
#[test]
fn np_characterizations_exhaustive() {
    let f = Field::prime(3).unwrap();
    let mut seen = [0usize; 2];
    for code in 0..3u64.pow(8) {
        let c: Vec<u64> = (0..8).map(|i| code / 3u64.pow(i) % 3).collect();
        if !is_novikov(&c, 2, 3) {
            continue;
        }
        for d in brute_force_compatible(&c, 2, 3) {
            let a = Algebra::new("t", f, 2)
                .with_dot(op_from_dense(f, 2, &d))
                .unwrap()
                .with_circ(op_from_dense(f, 2, &c))
                .unwrap();
            assert!(check_axiom(&a, AxiomId::Tnp).unwrap().passed());
            seen[np_equivalences(&a) as usize] += 1;
        }
    }
    let ex = get_over("Ex3.21", f);
    for d in tnp::search::enumerate_compatible(&ex, None, 1).unwrap() {
        seen[np_equivalences(&ex.clone().with_dot(d).unwrap()) as usize] += 1;
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn centroid_examples() {
    let a = get("Ex2.11");
    let f = a.field();
    let id = Matrix::identity(f, 3);
    assert!(centroid_membership(&a, OpName::Dot, &id).unwrap().passed());
    let cols = vec![a.unit(0), a.unit(1), tnp::algcore::vadd(&a.unit(2), &a.unit(0))];
    let phi = Matrix::from_columns(f, 3, &cols);
    assert!(centroid_membership(&a, OpName::Dot, &phi).unwrap().passed());
    let swap = Matrix::from_columns(f, 3, &[a.unit(1), a.unit(0), a.unit(2)]);
    let r = centroid_membership(&a, OpName::Dot, &swap).unwrap();
    assert!(!r.passed() && r.witness.is_some());
}

#[test]
fn windowed_algebras_need_windowed_check() {
    let a = tnp::catalog::catalog_get("OsbornCase1", None, &Default::default()).unwrap();
    assert!(a.is_windowed());
    assert!(matches!(check_axiom(&a, AxiomId::NovikovLeft), Err(tnp::Error::Partial(_))));
    assert!(tnp::algcore::check_axiom_windowed(&a, AxiomId::NovikovLeft).unwrap().passed());
}

#[test]
fn axiom_and_identity_names_parse() {
    for ax in AxiomId::ALL {
        assert_eq!(ax.name().parse::<AxiomId>().unwrap(), ax);
    }
    for id in IdentityId::ALL {
        assert_eq!(id.name().parse::<IdentityId>().unwrap(), id);
    }
    assert!("TNP3".parse::<AxiomId>().is_err());
}

fn small_vec(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// Basis-tuple passes extend to arbitrary coordinate vectors.
    #[test]
    fn basis_checks_are_complete(
        idx in 0usize..64,
        xs in small_vec(4), ys in small_vec(4), zs in small_vec(4),
    ) {
        let mut tnps = catalog_tnps(Field::Rational);
        tnps.retain(|a| a.dim() <= 4);
        let a = &tnps[idx % tnps.len()];
        let n = a.dim();
        let f = a.field();
        let v = |c: &[i64]| -> Vector { c[..n].iter().map(|&k| f.from_i64(k)).collect() };
        let args = vec![v(&xs), v(&ys), v(&zs)];
        let ctx = Ctx::new(a, None);
        for law in AxiomId::Tnp.laws() {
            let r = (law.residual)(&ctx, &args[..law.arity]).unwrap();
            prop_assert!(tnp::algcore::is_zero_vector(&r), "{} {}", a.name, law.name);
        }
    }

    #[test]
    fn evaluation_is_bilinear(
        seed in 0u64..1000,
        xs in small_vec(3), ys in small_vec(3), zs in small_vec(3), c in -3i64..=3,
    ) {
        let a = random_pair(&mut rng(seed), 3);
        let f = a.field();
        let v = |c: &[i64]| -> Vector { c.iter().map(|&k| f.from_i64(k)).collect() };
        let (x, y, z) = (v(&xs), v(&ys), v(&zs));
        let c = f.from_i64(c);
        let mut xc = x.clone();
        tnp::algcore::vaxpy(&mut xc, &c, &z);
        for name in [OpName::Dot, OpName::Circ] {
            let lhs = a.eval(name, &xc, &y).unwrap();
            let mut rhs = a.eval(name, &x, &y).unwrap();
            tnp::algcore::vaxpy(&mut rhs, &c, &a.eval(name, &z, &y).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn difflem_on_rdnps() {
    use tnp::constructions::rdnp_from_derivation;
    use tnp::linsolve::derivation_space;
    for f in fields() {
        let mut rdnps = catalog_rdnps(f);
        for a in catalog_tnps(f).into_iter().step_by(3) {
            for d in derivation_space(&a, &[OpName::Dot]).unwrap().matrices() {
                rdnps.push(rdnp_from_derivation(&a, &d).unwrap().algebra);
            }
        }
        for a in &rdnps {
            assert!(check_axiom(a, AxiomId::Rdnp).unwrap().passed(), "{}", a.name);
            assert!(check_identity(a, IdentityId::Difflem, None).unwrap().passed(), "{}", a.name);
        }
    }
}
