use std::collections::HashMap;

use incalg::derivations::{random_additive_cocycle, DerivationSpec};
use incalg::idealization::{inner_auto_d, lift_auto, lift_der, lift_scalar, DElem, DMorphism};
use incalg::involutions::{equivalent_inner, invariant, recognize, rho_eps, ClassInvariant};
use incalg::morphisms::FiaMorphism;
use incalg::oracle::{orbit_partition, ModAlgebra, ModMatrix, DEFAULT_LIMIT};
use incalg::poset::catalog::*;
use incalg::{Field, IncidenceAlgebra, MapKind, Poset, PosetMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn f3() -> Field {
    Field::prime(3).unwrap()
}

fn reversal(p: &Poset) -> PosetMap {
    PosetMap::new(p, (0..p.len()).rev().collect(), MapKind::AntiAutomorphism).unwrap()
}

fn to_mod(m: &DMorphism) -> ModMatrix {
    ModMatrix::from_matrix(m.matrix()).unwrap()
}

/// Grouping every enumerated involution by its library invariant must
/// reproduce the oracle's conjugacy orbits exactly.
fn invariants_match_orbits(p: Poset) {
    let alg = IncidenceAlgebra::new(p.clone(), f3());
    let m = ModAlgebra::new(&p, f3()).unwrap();
    let invs = m.enumerate_involutions_d(DEFAULT_LIMIT).unwrap();
    let gens: Vec<ModMatrix> = m.unit_generators().iter().map(|g| m.inner_matrix(g).unwrap()).collect();
    let orbits = orbit_partition(&invs, &gens).unwrap();

    let mut by_inv: HashMap<(Vec<usize>, i8, Vec<String>, Option<String>), Vec<usize>> = HashMap::new();
    for (i, mm) in invs.iter().enumerate() {
        let scalars: Vec<Vec<_>> =
            (0..mm.size()).map(|c| m.to_scalars(&(0..mm.size()).map(|r| mm.get(r, c)).collect::<Vec<_>>())).collect();
        let raw = DMorphism::from_matrix(&alg, incalg::linalg::Matrix::from_columns(f3(), mm.size(), &scalars), true)
            .unwrap();
        let spec = recognize(&raw).unwrap();
        assert_eq!(to_mod(&spec.matrix()), *mm);
        let ClassInvariant { lambda, sign, chi, type_tag, .. } = invariant(&spec).unwrap();
        let key = (
            lambda.images().to_vec(),
            sign,
            chi.iter().map(|c| c.to_string()).collect(),
            type_tag.map(|t| t.to_string()),
        );
        by_inv.entry(key).or_default().push(i);
    }
    let mut groups: Vec<Vec<usize>> = by_inv.into_values().collect();
    groups.sort();
    let mut orbits = orbits;
    orbits.sort();
    assert_eq!(groups, orbits);
}

#[test]
fn chain2_invariants_match_orbits() {
    invariants_match_orbits(chain(2));
}

#[test]
fn chain3_invariants_match_orbits() {
    invariants_match_orbits(chain(3));
}

/// Conjugating ρ̃_λ by automorphisms outside the inner group stays inside the
/// oracle's enumeration of `Ψ_θ ∘ ρ̃_λ ∘ (±δ)~`.
#[test]
fn conjugates_by_outer_automorphisms_are_enumerated() {
    let p = chain(3);
    let alg = IncidenceAlgebra::new(p.clone(), f3());
    let m = ModAlgebra::new(&p, f3()).unwrap();
    let invs = m.enumerate_involutions_d(DEFAULT_LIMIT).unwrap();
    let lam = reversal(&p);
    let base = rho_eps(&alg, &lam, &[alg.field().one()], 1).unwrap().matrix();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..40 {
        let k = alg.field().random_nonzero(&mut rng);
        let eta = alg.random_diagonal_unit(&mut rng);
        let sigma = alg.from_fn(|x, y| eta.diag(x) * &eta.diag(y).inv().unwrap());
        let mult = lift_auto(&FiaMorphism::multiplicative(sigma).unwrap()).unwrap();
        let der = lift_der(&DerivationSpec::additive(random_additive_cocycle(&alg, &mut rng)).unwrap());
        let inner = inner_auto_d(&DElem::random_unit(&alg, &mut rng)).unwrap();
        let mut a = lift_scalar(&alg, &k).unwrap().compose(&mult).compose(&der);
        if rng.gen_bool(0.5) {
            a = inner.compose(&a);
        }
        let phi = a.compose(&base).compose(&a.inverse().unwrap());
        assert!(phi.squares_to_identity());
        assert!(invs.binary_search(&to_mod(&phi)).is_ok());
    }
}

/// Inner witnesses re-checked by the oracle's raw mod-p products.
#[test]
fn witnesses_pass_raw_arithmetic() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (p, q) in [(chain(2), 3), (chain(3), 5), (diamond(), 3), (diamond(), 7)] {
        let field = Field::prime(q).unwrap();
        let alg = IncidenceAlgebra::new(p.clone(), field);
        let m = ModAlgebra::new(&p, field).unwrap();
        let lam = reversal(&p);
        let fixed = (0..p.len()).filter(|&x| lam.apply(x) == x).count();
        for _ in 0..10 {
            let k = if rng.gen_bool(0.5) { 1 } else { -1 };
            let eps: Vec<_> = (0..fixed).map(|_| field.random_nonzero(&mut rng)).collect();
            let a = rho_eps(&alg, &lam, &eps, k).unwrap();
            let g = DElem::random_unit(&alg, &mut rng);
            let psi = inner_auto_d(&g).unwrap();
            let b = recognize(&psi.compose(&a.matrix()).compose(&psi.inverse().unwrap())).unwrap();
            let v = equivalent_inner(&a, &b).unwrap();
            assert!(v.equivalent);
            let w = v.witness.unwrap();
            let raw_psi = m.inner_matrix(&m.from_delem(&w.theta)).unwrap();
            assert_eq!(raw_psi, to_mod(&w.morphism));
            assert_eq!(raw_psi.mul(&to_mod(&a.matrix())), to_mod(&b.matrix()).mul(&raw_psi));
        }
    }
}
