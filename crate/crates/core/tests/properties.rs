use std::sync::Arc;

use mild_core::cdga::{AlgebraMorphism, Codomain, Element, Flavor, FreeGradedAlgebra, Generator, HomogeneousIdeal, Monomial};
use mild_core::cli::{parse, dsl::IdealDecl, Workspace, CORPUS};
use mild_core::coeff::{CoefficientRing, Scalar};
use mild_core::cohomology::{induced_map, is_acyclic_ideal, is_quasi_iso, projection, AcyclicReading, CohomologyTable};
use mild_core::grlinalg::{smith_normal_form, Matrix};
use mild_core::sectional::{ring_enlargement, satisfies_enlargement, Count};
use proptest::prelude::*;
use proptest::sample::select;

const CAP: usize = 12;

fn rings() -> Vec<CoefficientRing> {
    vec![
        CoefficientRing::rationals(),
        CoefficientRing::localized([2]).unwrap(),
        CoefficientRing::localized([2, 3]).unwrap(),
    ]
}

fn corpus() -> Workspace {
    parse(CORPUS, CAP).unwrap()
}

fn algebra(name: &str) -> Arc<FreeGradedAlgebra> {
    corpus().algebra(name).unwrap().clone()
}

fn random_element(a: &FreeGradedAlgebra, k: usize, coeffs: &[i64]) -> Element {
    let mut e = Element::zero();
    for (m, c) in a.basis(k).monomials.iter().zip(coeffs) {
        e.add_term(m.clone(), Scalar::from_int(*c));
    }
    e
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-4i64..=4, 24)
}

const ALGEBRAS: [&str; 7] = ["S2", "S2t", "CP2", "S2xS3", "S3xS3", "T3", "T35"];

// ---- linear algebra ----

fn matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-30i64..=30, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_is_a_decomposition(rows in matrix(), ri in 0usize..3) {
        let ring = &rings()[ri];
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = Matrix::from_ints(&refs);
        let s = smith_normal_form(&m, ring);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(ring.is_unit(&s.u.determinant()));
        prop_assert!(ring.is_unit(&s.v.determinant()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            prop_assert!(ring.divides(&w[0], &w[1]));
        }
        prop_assert_eq!(s.rank, m.rank_over_fraction_field());
    }
}

// ---- algebra structure ----

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn koszul_sign_rule(name in select(&ALGEBRAS[..5]), p in 1usize..6, q in 1usize..6, x in coeffs(), y in coeffs()) {
        let a = algebra(name);
        let (u, v) = (random_element(&a, p, &x), random_element(&a, q, &y));
        let uv = a.multiply(&u, &v);
        let vu = a.multiply(&v, &u);
        let expected = if p * q % 2 == 1 { vu.neg() } else { vu };
        prop_assert_eq!(uv, expected);
    }

    #[test]
    fn multiplication_is_associative(name in select(&ALGEBRAS[..]), p in 1usize..5, q in 1usize..4, r in 1usize..4,
                                     x in coeffs(), y in coeffs(), z in coeffs()) {
        let a = algebra(name);
        let (u, v, w) = (random_element(&a, p, &x), random_element(&a, q, &y), random_element(&a, r, &z));
        prop_assert_eq!(a.multiply(&a.multiply(&u, &v), &w), a.multiply(&u, &a.multiply(&v, &w)));
    }

    #[test]
    fn leibniz_rule(name in select(&ALGEBRAS[..]), p in 1usize..6, q in 1usize..6, x in coeffs(), y in coeffs()) {
        prop_assume!(p + q < CAP);
        let a = algebra(name);
        let (u, v) = (random_element(&a, p, &x), random_element(&a, q, &y));
        let lhs = a.apply_differential(&a.multiply(&u, &v));
        let second = a.multiply(&u, &a.apply_differential(&v));
        let rhs = a.multiply(&a.apply_differential(&u), &v)
            .add(&if p % 2 == 1 { second.neg() } else { second });
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn differential_squares_to_zero(name in select(&ALGEBRAS[..]), k in 1usize..10, x in coeffs()) {
        let a = algebra(name);
        let u = random_element(&a, k, &x);
        prop_assert!(a.apply_differential(&a.apply_differential(&u)).is_zero());
    }
}

// ---- cohomology ----

/// `Λ(a3, b3, c5, e7)` with `dc = λab`, `de = μac + νbc`: finite dimensional.
fn exterior(lambda: i64, mu: i64, nu: i64, ring: &CoefficientRing) -> Arc<FreeGradedAlgebra> {
    let t = |m: Vec<u16>, c: i64| Element::term(Monomial(m), Scalar::from_int(c));
    FreeGradedAlgebra::new(
        "E",
        Flavor::Commutative,
        ring,
        vec![Generator::new("a", 3), Generator::new("b", 3), Generator::new("c", 5), Generator::new("e", 7)],
        vec![Element::zero(), Element::zero(), t(vec![0, 1], lambda), t(vec![0, 2], mu).add(&t(vec![1, 2], nu))],
        19,
    )
    .unwrap()
}

/// `v -> a v`, `w -> a^2 w` on `Λ(v2, w3)` with `dw = v^2`.
fn scaling(s2: &Arc<FreeGradedAlgebra>, a: i64) -> AlgebraMorphism {
    let v = Element::generator(0).scale(&Scalar::from_int(a));
    let w = Element::generator(1).scale(&Scalar::from_int(a * a));
    AlgebraMorphism::new_chain_map(s2.clone(), Codomain::free(s2.clone()), vec![v, w]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_characteristic_of_cochains_and_cohomology(l in -3i64..=3, m in -3i64..=3, n in -3i64..=3, ri in 0usize..3) {
        let a = exterior(l, m, n, &rings()[ri]);
        let h = CohomologyTable::of_algebra(&a, 18).unwrap();
        let mut chi_cochains = 0i64;
        let mut chi_h = 0i64;
        for k in 0..=18 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            chi_cochains += sign * a.dim(k) as i64;
            chi_h += sign * h.entry(k).free_rank as i64;
        }
        prop_assert_eq!(chi_cochains, chi_h);
    }

    #[test]
    fn induced_maps_are_functorial(x in -4i64..=4, y in -4i64..=4, ri in 0usize..3) {
        let s2 = FreeGradedAlgebra::new(
            "S2", Flavor::Commutative, &rings()[ri],
            vec![Generator::new("v", 2), Generator::new("w", 3)],
            vec![Element::zero(), Element::term(Monomial(vec![0, 0]), Scalar::one())],
            10,
        ).unwrap();
        let (f, g) = (scaling(&s2, x), scaling(&s2, y));
        let gf = f.then(&g).unwrap();
        let h = CohomologyTable::of_algebra(&s2, 8).unwrap();
        for k in 0..=8 {
            let lhs = induced_map(&gf, &h, &h, k).unwrap();
            let rhs = induced_map(&f, &h, &h, k).unwrap().then(&induced_map(&g, &h, &h, k).unwrap());
            prop_assert!(lhs.same_map(&rhs), "degree {}", k);
        }
    }

    /// `A -> A/J` quasi-iso through `hi` forces `H(J) = 0` through `hi`,
    /// which in turn forces a quasi-iso through `hi - 1`.
    #[test]
    fn acyclic_ideals_match_quasi_isomorphic_projections(name in select(&["S2", "S2t", "S4", "CP2", "S2xS3"][..]),
                                                          k in 2usize..7, x in coeffs(), ri in 0usize..2) {
        let ring = rings()[ri].clone();
        let a = algebra(name).with_ring(&ring).with_cap(10);
        let e = random_element(&a, k, &x);
        prop_assume!(!e.is_zero());
        let de = a.apply_differential(&e);
        let mut gens = vec![e];
        if !de.is_zero() {
            gens.push(de);
        }
        let j = HomogeneousIdeal::new(&a, gens).unwrap();
        let hi = 8;
        let acyclic = is_acyclic_ideal(&j, hi, AcyclicReading::IdealCohomology).unwrap();
        let p = projection(&j).unwrap();
        if is_quasi_iso(&p, hi).unwrap().quasi_iso {
            prop_assert!(acyclic);
        }
        if acyclic {
            prop_assert!(is_quasi_iso(&p, hi - 1).unwrap().quasi_iso);
        }
    }
}

#[test]
fn corpus_ideals_cross_validate() {
    let ws = corpus();
    for decl in &ws.ideals {
        let j = &decl.ideal;
        if j.check_d_stable(CAP).is_err() {
            continue;
        }
        let acyclic = is_acyclic_ideal(j, 8, AcyclicReading::IdealCohomology).unwrap();
        let q = is_quasi_iso(&projection(j).unwrap(), 8).unwrap().quasi_iso;
        assert_eq!(acyclic, q, "{}", decl.name);
    }
}

// ---- input language ----

/// Algebra with closed generators of even degree and further generators
/// whose differentials are random polynomials in the closed ones.
fn random_algebra(
    name: &str,
    ring: &CoefficientRing,
    closed: &[usize],
    open: &[usize],
    coeffs: &[(i64, i64)],
) -> Arc<FreeGradedAlgebra> {
    let mut gens: Vec<Generator> = closed.iter().enumerate().map(|(i, &d)| Generator::new(format!("x{i}"), d)).collect();
    let scratch =
        FreeGradedAlgebra::new("scratch", Flavor::Commutative, ring, gens.clone(), vec![Element::zero(); gens.len()], CAP)
            .unwrap();
    let mut diff = vec![Element::zero(); gens.len()];
    let mut ci = coeffs.iter().cycle();
    for (j, &d) in open.iter().enumerate() {
        gens.push(Generator::new(format!("y{j}"), d));
        let mut e = Element::zero();
        for m in scratch.basis(d + 1).monomials.iter() {
            let &(p, q) = ci.next().unwrap();
            let c = if ring.is_field() { Scalar::new(p, q) } else { Scalar::new(p, 1 << (q % 3)) };
            e.add_term(m.clone(), c);
        }
        diff.push(e);
    }
    FreeGradedAlgebra::new(name, Flavor::Commutative, ring, gens, diff, CAP).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn print_then_parse_is_identity(
        ri in 0usize..3,
        closed in prop::collection::vec(prop::sample::select(&[2usize, 4, 6][..]), 1..3),
        open in prop::collection::vec(1usize..8, 0..3),
        coeffs in prop::collection::vec((-7i64..=7, 1i64..=5), 1..12),
        tensor in any::<bool>(),
    ) {
        let ring = rings()[ri].clone();
        let a = random_algebra("A", &ring, &closed, &open, &coeffs);
        let mut algebras = vec![a.clone()];
        if tensor {
            let t = FreeGradedAlgebra::new("T", Flavor::Tensor, &ring, vec![Generator::new("t", 3)], vec![Element::zero()], CAP)
                .unwrap();
            algebras.push(t);
        }
        let x0 = Element::generator(0);
        let ideal = HomogeneousIdeal::new(&a, vec![a.multiply(&x0, &x0)]).unwrap();
        let ws = Workspace {
            ring,
            cap: CAP,
            algebras,
            ideals: vec![IdealDecl { name: "J".into(), algebra: "A".into(), ideal }],
            morphisms: Vec::new(),
        };
        let src = ws.to_source();
        let back = parse(&src, CAP).unwrap();
        prop_assert!(back == ws, "{}", src);
        prop_assert_eq!(back.to_source(), src);
    }
}

#[test]
fn corpus_round_trips() {
    let ws = corpus();
    let src = ws.to_source();
    assert!(parse(&src, CAP).unwrap() == ws);
}

// ---- invariants bookkeeping ----

proptest! {
    #[test]
    fn ring_enlargement_is_minimal(primes in prop::collection::btree_set(select(&[3u64, 5, 7, 11, 13][..]), 0..3), m in 1usize..6) {
        let ring = CoefficientRing::localized(primes.iter().copied()).unwrap();
        let big = ring_enlargement(&ring, m);
        prop_assert!(satisfies_enlargement(&ring, &big, m));
        let (old, new) = (ring.inverted_primes().unwrap(), big.inverted_primes().unwrap());
        prop_assert!(old.is_subset(new));
        // dropping any added prime breaks the requirement
        for p in new.difference(old) {
            let mut fewer = new.clone();
            fewer.remove(p);
            let smaller = CoefficientRing::localized(fewer).unwrap();
            prop_assert!(!satisfies_enlargement(&ring, &smaller, m));
        }
    }

    #[test]
    fn count_bounds_are_consistent(kind in 0u8..4, k in 0usize..10, window in 1usize..12) {
        let c = match kind {
            0 => Count::Exact(k),
            1 => Count::AtLeast(k),
            2 => Count::Above(k),
            _ => Count::Unknown,
        };
        if let Some(u) = c.upper() {
            prop_assert!(c.lower() <= u);
        }
        let j = c.to_json(window);
        prop_assert!(j.get("status").is_some());
        prop_assert_eq!(&j["window"], &serde_json::json!(window));
        let text = serde_json::to_string(&j).unwrap();
        prop_assert_eq!(serde_json::from_str::<serde_json::Value>(&text).unwrap(), j);
    }
}
