use incalg::idealization::{inner_auto_d, DElem};
use incalg::involutions::{
    classify, classify_general, conjugate_by_automorphism, equivalent, equivalent_inner, intertwines, invariant,
    recognize, rho_eps, sigma_lambda, InvolutionSpec,
};
use incalg::json::SpecJson;
use incalg::poset::catalog::*;
use incalg::{Field, IncidenceAlgebra, MapKind, Poset, PosetMap};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lambdas(p: &Poset) -> Vec<PosetMap> {
    p.involutions().unwrap()
}

/// A random involution inner-conjugate to a random normal form.
fn random_spec(p: &Poset, field: Field, rng: &mut ChaCha8Rng) -> InvolutionSpec {
    let alg = IncidenceAlgebra::new(p.clone(), field);
    let ls = lambdas(p);
    let lam = &ls[rng.gen_range(0..ls.len())];
    let k = if rng.gen_bool(0.5) { 1 } else { -1 };
    let fixed = (0..p.len()).filter(|&x| lam.apply(x) == x).count();
    let base = if fixed == 0 && rng.gen_bool(0.5) {
        sigma_lambda(&alg, lam, k).unwrap()
    } else {
        let eps: Vec<_> = (0..fixed).map(|_| field.random_nonzero(rng)).collect();
        rho_eps(&alg, lam, &eps, k).unwrap()
    };
    let g = DElem::random_unit(&alg, rng);
    let psi = inner_auto_d(&g).unwrap();
    recognize(&psi.compose(&base.matrix()).compose(&psi.inverse().unwrap())).unwrap()
}

fn instance() -> impl Strategy<Value = (Poset, Field)> {
    prop::sample::select(vec![(0usize, 3u64), (1, 5), (2, 3), (2, 5), (2, 0), (3, 7)]).prop_map(|(i, q)| {
        let p = [chain(2), chain(3), diamond(), chain(4)][i].clone();
        let f = if q == 0 { Field::Rationals } else { Field::prime(q).unwrap() };
        (p, f)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn inner_equivalence_is_symmetric((p, f) in instance(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spec(&p, f, &mut rng);
        let b = random_spec(&p, f, &mut rng);
        let ab = equivalent_inner(&a, &b).unwrap();
        let ba = equivalent_inner(&b, &a).unwrap();
        prop_assert_eq!(ab.equivalent, ba.equivalent);
        prop_assert_eq!(ab.distinguisher, ba.distinguisher);
        prop_assert_eq!(ab.equivalent, invariant(&a).unwrap() == invariant(&b).unwrap());
        if let Some(w) = ab.witness {
            prop_assert!(intertwines(&w.morphism, &a, &b));
        }
        prop_assert!(equivalent_inner(&a, &a).unwrap().equivalent);
    }

    #[test]
    fn every_involution_matches_one_representative((p, f) in instance(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spec(&p, f, &mut rng);
        let alg = a.algebra().clone();
        let c = classify(&alg, a.lambda()).unwrap();
        let hits = c.representatives.iter().filter(|r| equivalent_inner(r, &a).unwrap().equivalent).count();
        // Over ℚ the representatives are only a sample.
        if f == Field::Rationals && c.finite_count().is_err() {
            prop_assert!(hits <= 1);
        } else {
            prop_assert_eq!(hits, 1);
        }
    }

    #[test]
    fn automorphism_conjugates_are_generally_equivalent(seed in any::<u64>(), q in prop::sample::select(vec![3u64, 5])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = diamond();
        let a = random_spec(&p, Field::prime(q).unwrap(), &mut rng);
        let swap = PosetMap::new(&p, vec![0, 2, 1, 3], MapKind::Automorphism).unwrap();
        let b = conjugate_by_automorphism(&a, &swap).unwrap();
        let v = equivalent(&a, &b).unwrap();
        prop_assert!(v.equivalent);
        let w = v.witness.unwrap();
        prop_assert!(intertwines(&w.morphism, &a, &b));
        prop_assert!(w.morphism.is_ring_morphism());
    }

    #[test]
    fn specs_survive_json((p, f) in instance(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_spec(&p, f, &mut rng);
        let text = serde_json::to_string(&SpecJson::from_spec(&a)).unwrap();
        let back = serde_json::from_str::<SpecJson>(&text).unwrap().to_spec(a.algebra()).unwrap();
        prop_assert_eq!(back, a);
    }
}

#[test]
fn general_classification_folds_the_diamond() {
    let alg = IncidenceAlgebra::new(diamond(), Field::prime(3).unwrap());
    let ends = PosetMap::new(alg.poset(), vec![3, 1, 2, 0], MapKind::AntiAutomorphism).unwrap();
    let inner = classify(&alg, &ends).unwrap();
    let general = classify_general(&alg, &ends).unwrap();
    assert_eq!(inner.finite_count().unwrap(), 4);
    // a ↔ b permutes χ, but up to shift (square, nonsquare) is already its own swap.
    assert_eq!(general.finite_count().unwrap(), 4);
    for (i, a) in general.representatives.iter().enumerate() {
        for b in &general.representatives[i + 1..] {
            assert!(!equivalent(a, b).unwrap().equivalent);
        }
    }
}

#[test]
fn general_classification_folds_three_atoms() {
    let p = Poset::from_covers(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
    )
    .unwrap();
    let alg = IncidenceAlgebra::new(p.clone(), Field::prime(3).unwrap());
    let ends = PosetMap::new(&p, vec![4, 1, 2, 3, 0], MapKind::AntiAutomorphism).unwrap();
    assert_eq!(classify(&alg, &ends).unwrap().finite_count().unwrap(), 8);
    // Permuting the atoms merges (s,s,n), (s,n,s) and (s,n,n) up to shift.
    let general = classify_general(&alg, &ends).unwrap();
    assert_eq!(general.finite_count().unwrap(), 4);
    for (i, a) in general.representatives.iter().enumerate() {
        for b in &general.representatives[i + 1..] {
            assert!(!equivalent(a, b).unwrap().equivalent);
        }
    }
}
