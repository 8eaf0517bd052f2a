//! (Anti-)automorphisms of FI(X, K) in the factored form `Ψ_u ∘ M_σ ∘ φ̂`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fia::{IncFn, IncidenceAlgebra};
use crate::linalg::Matrix;
use crate::poset::{MapKind, Poset, PosetMap};
use crate::scalar::{Field, Scalar};
use crate::smith::smith_normal_form;

/// A K-linear map of FI(X, K) as a matrix over the interval basis; column `k`
/// holds the image of the `k`-th basis element.
pub type LinearEndo = Matrix;

/// Matrix of an arbitrary linear map on FI(X, K).
pub fn matrix_of(alg: &Arc<IncidenceAlgebra>, mut map: impl FnMut(&IncFn) -> IncFn) -> LinearEndo {
    let cols: Vec<Vec<Scalar>> = alg.basis_elements().iter().map(|e| map(e).into_entries()).collect();
    Matrix::from_columns(alg.field(), alg.dim(), &cols)
}

/// Applies a matrix to an incidence function.
pub fn apply_matrix(m: &LinearEndo, f: &IncFn) -> IncFn {
    f.algebra().from_entries(m.apply(f.entries())).expect("matrix matches algebra")
}

/// The relabelling `α̂(f)(x, y) = f(α⁻¹x, α⁻¹y)`, or for an anti-automorphism
/// `ρ_λ(f)(x, y) = f(λ⁻¹y, λ⁻¹x)`.
pub fn relabel(f: &IncFn, map: &PosetMap) -> IncFn {
    let inv = map.inverse();
    let anti = map.is_anti();
    f.algebra().from_fn(|x, y| {
        let (a, b) = (inv.apply(x), inv.apply(y));
        if anti {
            f.get(b, a)
        } else {
            f.get(a, b)
        }
    })
}

/// `Ψ_u(f) = u f u⁻¹`.
pub fn conjugate(u: &IncFn, f: &IncFn) -> Result<IncFn> {
    let inv = u.inverse()?;
    Ok(&u.try_mul(f)? * &inv)
}

/// Checks `σ(x,x) = 1`, `σ ≠ 0`, and `σ(x,y)σ(y,z) = σ(x,z)`.
pub fn validate_multiplicative_cocycle(sigma: &IncFn) -> Result<()> {
    let p = sigma.poset();
    for &(x, y) in p.intervals() {
        let v = sigma.get(x, y);
        if x == y && !v.is_one() {
            return Err(Error::InvalidCocycle(format!("sigma({0},{0}) must be 1", p.label(x))));
        }
        if v.is_zero() {
            return Err(Error::InvalidCocycle(format!("sigma({},{}) is zero", p.label(x), p.label(y))));
        }
    }
    for &(x, y) in p.intervals() {
        for z in 0..p.len() {
            if p.leq(y, z) && sigma.get(x, y) * sigma.get(y, z) != sigma.get(x, z) {
                return Err(Error::InvalidCocycle(format!(
                    "sigma({0},{1}) sigma({1},{2}) != sigma({0},{2})",
                    p.label(x),
                    p.label(y),
                    p.label(z)
                )));
            }
        }
    }
    Ok(())
}

/// `Ψ_u ∘ M_σ ∘ φ̂` with `φ̂` induced by a poset (anti-)automorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiaMorphism {
    u: IncFn,
    sigma: IncFn,
    map: PosetMap,
}

impl FiaMorphism {
    pub fn new(u: IncFn, sigma: IncFn, map: PosetMap) -> Result<FiaMorphism> {
        if !IncidenceAlgebra::same(u.algebra(), sigma.algebra()) {
            return Err(Error::ContextMismatch);
        }
        if !u.is_unit() {
            u.inverse()?;
        }
        validate_multiplicative_cocycle(&sigma)?;
        if !map.is_valid_on(u.poset()) {
            return Err(Error::NotAMorphism("poset map does not respect the order".into()));
        }
        Ok(FiaMorphism { u, sigma, map })
    }

    pub fn identity(alg: &Arc<IncidenceAlgebra>) -> FiaMorphism {
        FiaMorphism { u: alg.delta(), sigma: ones(alg), map: PosetMap::identity(alg.poset().len()) }
    }

    pub fn inner(u: IncFn) -> Result<FiaMorphism> {
        let alg = Arc::clone(u.algebra());
        FiaMorphism::new(u, ones(&alg), PosetMap::identity(alg.poset().len()))
    }

    pub fn multiplicative(sigma: IncFn) -> Result<FiaMorphism> {
        let alg = Arc::clone(sigma.algebra());
        FiaMorphism::new(alg.delta(), sigma, PosetMap::identity(alg.poset().len()))
    }

    pub fn induced(alg: &Arc<IncidenceAlgebra>, map: PosetMap) -> Result<FiaMorphism> {
        FiaMorphism::new(alg.delta(), ones(alg), map)
    }

    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        self.u.algebra()
    }

    pub fn u(&self) -> &IncFn {
        &self.u
    }

    pub fn sigma(&self) -> &IncFn {
        &self.sigma
    }

    pub fn map(&self) -> &PosetMap {
        &self.map
    }

    pub fn is_anti(&self) -> bool {
        self.map.is_anti()
    }

    pub fn try_apply(&self, f: &IncFn) -> Result<IncFn> {
        if !IncidenceAlgebra::same(self.algebra(), f.algebra()) {
            return Err(Error::ContextMismatch);
        }
        let g = relabel(f, &self.map).try_hadamard(&self.sigma)?;
        conjugate(&self.u, &g)
    }

    pub fn apply(&self, f: &IncFn) -> IncFn {
        self.try_apply(f).expect("morphism applied to a foreign element")
    }

    pub fn matrix(&self) -> LinearEndo {
        let uinv = self.u.inverse().expect("validated unit");
        matrix_of(self.algebra(), |e| {
            let g = relabel(e, &self.map).try_hadamard(&self.sigma).unwrap();
            &(&self.u * &g) * &uinv
        })
    }

    /// `self ∘ other`, refactored.
    pub fn compose(&self, other: &FiaMorphism) -> Result<FiaMorphism> {
        if !IncidenceAlgebra::same(self.algebra(), other.algebra()) {
            return Err(Error::ContextMismatch);
        }
        decompose(self.algebra(), &self.matrix().mul(&other.matrix()), self.is_anti() != other.is_anti())
    }

    pub fn inverse(&self) -> Result<FiaMorphism> {
        let inv = self.matrix().inverse().ok_or_else(|| Error::NotAMorphism("matrix is singular".into()))?;
        decompose(self.algebra(), &inv, self.is_anti())
    }
}

fn ones(alg: &Arc<IncidenceAlgebra>) -> IncFn {
    alg.from_fn(|_, _| alg.field().one())
}

/// Matrix of the relabelling induced by `map`.
pub fn relabel_matrix(alg: &Arc<IncidenceAlgebra>, map: &PosetMap) -> LinearEndo {
    matrix_of(alg, |e| relabel(e, map))
}

/// Checks that `raw` is a unital bijective algebra (anti-)homomorphism on the basis.
pub fn validate_raw(alg: &Arc<IncidenceAlgebra>, raw: &LinearEndo, anti: bool) -> Result<()> {
    let n = alg.dim();
    if raw.rows() != n || raw.cols() != n || raw.field() != alg.field() {
        return Err(Error::ContextMismatch);
    }
    let delta = alg.delta();
    if apply_matrix(raw, &delta) != delta {
        return Err(Error::NotUnital);
    }
    let basis = alg.basis_elements();
    let images: Vec<IncFn> = basis.iter().map(|e| apply_matrix(raw, e)).collect();
    let p = alg.poset();
    for a in 0..n {
        for b in 0..n {
            let lhs = apply_matrix(raw, &(&basis[a] * &basis[b]));
            let rhs = if anti { &images[b] * &images[a] } else { &images[a] * &images[b] };
            if lhs != rhs {
                let (x, y) = p.intervals()[a];
                let (z, w) = p.intervals()[b];
                return Err(Error::NotAMorphism(format!(
                    "fails on e({},{}) * e({},{})",
                    p.label(x),
                    p.label(y),
                    p.label(z),
                    p.label(w)
                )));
            }
        }
    }
    if raw.rank() != n {
        return Err(Error::NotAMorphism("map is not bijective".into()));
    }
    Ok(())
}

/// Factors a raw (anti-)automorphism as `Ψ_u ∘ M_σ ∘ μ̂`.
///
/// The conjugator has unit diagonal, so in particular `u(x₀, x₀) = 1` at the
/// first element.
pub fn decompose(alg: &Arc<IncidenceAlgebra>, raw: &LinearEndo, anti: bool) -> Result<FiaMorphism> {
    validate_raw(alg, raw, anti)?;
    let p = alg.poset();
    let n = p.len();
    let field = alg.field();

    let mut images = Vec::with_capacity(n);
    for x in 0..n {
        let img = apply_matrix(raw, &alg.e(x, x)?);
        let hits: Vec<usize> = (0..n).filter(|&y| img.diag(y).is_one()).collect();
        if hits.len() != 1 || (0..n).any(|y| !hits.contains(&y) && !img.diag(y).is_zero()) {
            return Err(Error::NotAMorphism(format!(
                "image of e({0},{0}) has no single diagonal idempotent",
                p.label(x)
            )));
        }
        images.push(hits[0]);
    }
    let kind = if anti { MapKind::AntiAutomorphism } else { MapKind::Automorphism };
    let mu = PosetMap::new(p, images, kind)
        .map_err(|_| Error::NotAMorphism("induced poset map is not an (anti-)automorphism".into()))?;

    // Φ' = Φ ∘ μ̂⁻¹ fixes the diagonal idempotents up to conjugation.
    let strip = relabel_matrix(alg, &mu.inverse());
    let phi1 = raw.mul(&strip);
    let mut g = alg.zero();
    for x in 0..n {
        let ex = alg.e(x, x)?;
        g = &g + &(&apply_matrix(&phi1, &ex) * &ex);
    }
    let ginv = g.inverse()?;

    let mut sigma = alg.zero();
    for (k, &(x, y)) in p.intervals().iter().enumerate() {
        let e = alg.basis(k);
        let img = &(&ginv * &apply_matrix(&phi1, &e)) * &g;
        let s = img.get(x, y);
        if img != e.scale(&s) || s.is_zero() {
            return Err(Error::NotAMorphism(format!("residual map does not scale e({},{})", p.label(x), p.label(y))));
        }
        sigma.set_at(k, s);
    }
    debug_assert!(sigma.entries().iter().all(|s| s.field() == field));

    let m = FiaMorphism::new(g, sigma, mu)?;
    if m.matrix() != *raw {
        return Err(Error::NotAMorphism("recomposition differs from input".into()));
    }
    Ok(m)
}

/// Some `η` with `σ(x, y) = η(x) η(y)⁻¹` on every comparable pair, if one exists.
pub fn multiplicative_is_inner(sigma: &IncFn) -> Result<Option<Vec<Scalar>>> {
    validate_multiplicative_cocycle(sigma)?;
    let p = sigma.poset();
    let n = p.len();
    let one = sigma.field().one();
    let mut eta: Vec<Option<Scalar>> = vec![None; n];
    for root in 0..n {
        if eta[root].is_some() {
            continue;
        }
        eta[root] = Some(one.clone());
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            let ex = eta[x].clone().unwrap();
            for y in 0..n {
                if eta[y].is_some() || !p.comparable(x, y) {
                    continue;
                }
                let v = if p.leq(x, y) { &ex * &sigma.get(x, y).inv().unwrap() } else { &sigma.get(y, x) * &ex };
                eta[y] = Some(v);
                queue.push_back(y);
            }
        }
    }
    let eta: Vec<Scalar> = eta.into_iter().map(Option::unwrap).collect();
    let ok = p.intervals().iter().all(|&(x, y)| sigma.get(x, y) == &eta[x] * &eta[y].inv().unwrap());
    Ok(ok.then_some(eta))
}

/// The simplicial chain data behind both hypothesis checks: strict pairs,
/// strict triples and the integer boundary matrix from triples to pairs.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub pairs: Vec<(usize, usize)>,
    pub triples: Vec<(usize, usize, usize)>,
    /// `pairs.len() × triples.len()`; column `(x,y,z)` is `(x,y) + (y,z) − (x,z)`.
    pub boundary: Vec<Vec<i64>>,
}

impl ChainComplex {
    pub fn new(p: &Poset) -> ChainComplex {
        let pairs: Vec<(usize, usize)> = p.intervals().iter().copied().filter(|&(x, y)| x != y).collect();
        let mut triples = Vec::new();
        for &(x, y) in &pairs {
            for z in 0..p.len() {
                if p.lt(y, z) {
                    triples.push((x, y, z));
                }
            }
        }
        let index = |a: usize, b: usize| pairs.iter().position(|&q| q == (a, b)).unwrap();
        let mut boundary = vec![vec![0i64; triples.len()]; pairs.len()];
        for (t, &(x, y, z)) in triples.iter().enumerate() {
            boundary[index(x, y)][t] += 1;
            boundary[index(y, z)][t] += 1;
            boundary[index(x, z)][t] -= 1;
        }
        ChainComplex { pairs, triples, boundary }
    }
}

/// Outcome of the Mult ⊆ Inn test.
#[derive(Clone, Debug)]
pub struct MultInnReport {
    pub holds: bool,
    /// Free rank of the first homology of the order complex.
    pub free_rank: usize,
    /// Torsion invariant factors (> 1) of that homology.
    pub torsion: Vec<BigInt>,
    /// A multiplicative cocycle that is not a coboundary, when the test fails.
    pub witness: Option<IncFn>,
}

/// Whether every multiplicative automorphism of FI(X, K) is inner.
pub fn mult_subset_inn(p: &Poset, field: Field) -> bool {
    mult_inn_report(p, field).holds
}

/// Decides Mult ⊆ Inn through `Hom(H₁, K*)`, where `H₁` is read off the Smith
/// form of the triple-to-pair boundary, and produces a non-inner cocycle when
/// the answer is negative.
pub fn mult_inn_report(p: &Poset, field: Field) -> MultInnReport {
    let cc = ChainComplex::new(p);
    let rows = cc.pairs.len();
    let big: Vec<Vec<BigInt>> = cc.boundary.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
    let snf = smith_normal_form(&big, rows, cc.triples.len());
    let rank = snf.rank();
    let free_rank = rows - rank - (p.len() - p.component_count());
    let torsion: Vec<BigInt> =
        snf.diagonal.iter().filter(|d| !d.is_zero() && !num_traits::One::is_one(*d)).cloned().collect();

    let holds = match field {
        Field::Prime(2) => true,
        Field::Prime(q) => {
            let order = BigInt::from(q - 1);
            free_rank == 0 && torsion.iter().all(|d| num_traits::One::is_one(&d.gcd(&order)))
        }
        Field::Rationals => free_rank == 0 && torsion.iter().all(|d| d.is_odd()),
    };
    if holds {
        return MultInnReport { holds, free_rank, torsion, witness: None };
    }

    let alg = IncidenceAlgebra::new(p.clone(), field);
    let mut witness = None;
    for (i, d) in snf.cokernel_generators() {
        // ζ generates the image of a homomorphism ℤ/d → K*.
        let (zeta, modulus): (Scalar, Option<u64>) = match field {
            Field::Prime(q) => {
                let m = if d.is_zero() { q - 1 } else { d.gcd(&BigInt::from(q - 1)).to_u64().unwrap() };
                if m == 1 {
                    continue;
                }
                let g = field.multiplicative_generator().unwrap();
                (g.pow((q - 1) / m), Some(m))
            }
            Field::Rationals => {
                if d.is_zero() {
                    (field.from_i64(2), None)
                } else if d.is_even() {
                    (field.from_i64(-1), Some(2))
                } else {
                    continue;
                }
            }
        };
        let mut sigma = alg.from_fn(|_, _| field.one());
        for (c, &(x, y)) in cc.pairs.iter().enumerate() {
            let e = &snf.left[i][c];
            let v = match modulus {
                Some(m) => zeta.pow(e.mod_floor(&BigInt::from(m)).to_u64().unwrap()),
                None => {
                    let base = if e.is_negative() { zeta.inv().unwrap() } else { zeta.clone() };
                    base.pow(e.abs().to_u64().unwrap())
                }
            };
            sigma.set(x, y, v).unwrap();
        }
        if multiplicative_is_inner(&sigma).expect("homomorphism gives a cocycle").is_none() {
            witness = Some(sigma);
            break;
        }
    }
    MultInnReport { holds, free_rank, torsion, witness }
}
