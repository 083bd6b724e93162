use super::*;
use crate::cdga::{Element, Generator, Monomial};
use crate::coeff::Scalar;

fn z2() -> CoefficientRing {
    CoefficientRing::localized([2]).unwrap()
}

fn sphere_odd(ring: &CoefficientRing, cap: usize) -> Arc<FreeGradedAlgebra> {
    FreeGradedAlgebra::new("S3", Flavor::Commutative, ring, vec![Generator::new("v", 3)], vec![Element::zero()], cap)
        .unwrap()
}

fn poly(ring: &CoefficientRing, cap: usize) -> Arc<FreeGradedAlgebra> {
    FreeGradedAlgebra::new("P", Flavor::Commutative, ring, vec![Generator::new("v", 2)], vec![Element::zero()], cap)
        .unwrap()
}

fn opts(window: usize, m_max: usize) -> BatteryOptions {
    BatteryOptions { m_max, window, ..BatteryOptions::default() }
}

#[test]
fn enlargement_examples() {
    let r = ring_enlargement(&z2(), 2);
    assert_eq!(r, CoefficientRing::localized([2, 3, 5]).unwrap());
    assert!(satisfies_enlargement(&z2(), &r, 2));
    assert_eq!(ring_enlargement(&z2(), 1), z2());
    assert_eq!(ring_enlargement(&CoefficientRing::rationals(), 5), CoefficientRing::rationals());
}

#[test]
fn kernel_of_fold_on_odd_sphere_is_principal() {
    let a = sphere_odd(&z2(), 8);
    let mu = mu_n(&a, 2, 8);
    let k = kernel_ideal(&mu, 8, diagonal_seeds(&a, 2)).unwrap();
    assert_eq!(k.ideal.generators().len(), 1);
    assert_eq!(k.augmented, 0);
    assert_eq!(nil_ker(&k, 7).count, Count::Exact(1));
}

#[test]
fn kernel_without_seeds_is_found_degreewise() {
    let a = sphere_odd(&z2(), 8);
    let mu = mu_n(&a, 2, 8);
    let k = kernel_ideal(&mu, 8, Vec::new()).unwrap();
    assert!(k.augmented >= 1);
    let z = Element::generator(0).sub(&Element::generator(1));
    assert!(k.ideal.contains(&z));
}

#[test]
fn polynomial_kernel_saturates() {
    let a = poly(&z2(), 9);
    let mu = mu_n(&a, 2, 9);
    let k = kernel_ideal(&mu, 9, diagonal_seeds(&a, 2)).unwrap();
    assert_eq!(nil_ker(&k, 8).count, Count::AtLeast(4));
}

#[test]
fn odd_sphere_report_is_squeezed() {
    let a = sphere_odd(&z2(), 10);
    let rep = tc_report(&a, 2, &opts(8, 2), RingEnlarge::Auto).unwrap();
    for (name, c) in rep.members() {
        assert_eq!(*c, Count::Exact(1), "{name}");
    }
    assert_eq!(rep.secat_bracket(), (1, Some(1)));
    assert_eq!(rep.sc_bracket(), (1, Some(1)));
    assert!(rep.chain_violations().is_empty());
    assert_eq!(rep.ring, CoefficientRing::localized([2, 3, 5]).unwrap());
}

#[test]
fn n_equal_one_gives_zeros() {
    let a = sphere_odd(&z2(), 8);
    let rep = tc_report(&a, 1, &opts(6, 2), RingEnlarge::Auto).unwrap();
    for (name, c) in rep.members() {
        assert_eq!(*c, Count::Exact(0), "{name}");
    }
}

#[test]
fn enlargement_off_rejects_small_rings() {
    let a = sphere_odd(&z2(), 8);
    let err = tc_report(&a, 2, &opts(6, 2), RingEnlarge::Off).unwrap_err();
    assert_eq!(err.exit_code(), 3);
    assert!(tc_report(&a, 2, &opts(6, 1), RingEnlarge::Off).is_ok());
}

#[test]
fn pushout_square_and_module_certificate_for_odd_sphere() {
    let a = sphere_odd(&z2(), 9);
    let mu = mu_n(&a, 2, 9);
    let ctx = Context::new(&mu, 8, ModelOptions::default(), diagonal_seeds(&a, 2)).unwrap();
    let side = build_p(&ctx, 1).unwrap();
    assert!(side.square_commutes().unwrap());
    let r = module_retraction(ctx.base(), &side.pushout, 8).unwrap().expect("retraction at level 1");
    r.verify().unwrap();
}

#[test]
fn identity_retraction_passes_and_corruption_is_caught() {
    let a = sphere_odd(&z2(), 8);
    let ext = a.extend("S3+W", vec![Generator::new("t", 4)], vec![Element::zero()]).unwrap();
    let j = AlgebraMorphism::new(a.clone(), Codomain::free(ext.clone()), vec![Element::generator(0)]).unwrap();
    let good =
        AlgebraMorphism::new(ext.clone(), Codomain::free(a.clone()), vec![Element::generator(0), Element::zero()]).unwrap();
    let ok = verify_multiplicative_retraction(&good, &j, 7);
    assert!(ok.ok, "{ok:?}");
    let bad = AlgebraMorphism::new(
        ext,
        Codomain::free(a.clone()),
        vec![Element::generator(0).scale(&Scalar::from_int(3)), Element::zero()],
    )
    .unwrap();
    let res = verify_multiplicative_retraction(&bad, &j, 7);
    assert!(!res.ok);
    assert!(res.witness.unwrap().contains("r(j(v))"));
}

#[test]
fn non_chain_candidate_is_rejected() {
    let a = poly(&CoefficientRing::rationals(), 8);
    // E = Λ(v, t), dt = v^2; r(t) = 0 breaks r(dt) = d r(t)
    let ext = a
        .extend("P+W", vec![Generator::new("t", 3)], vec![Element::term(Monomial(vec![0, 0]), Scalar::one())])
        .unwrap();
    let j = AlgebraMorphism::new(a.clone(), Codomain::free(ext.clone()), vec![Element::generator(0)]).unwrap();
    let r = AlgebraMorphism::new(ext, Codomain::free(a), vec![Element::generator(0), Element::zero()]).unwrap();
    let res = verify_multiplicative_retraction(&r, &j, 7);
    assert!(!res.ok);
    assert!(res.witness.is_some());
}
