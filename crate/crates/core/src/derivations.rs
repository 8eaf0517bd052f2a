//! Derivations FI(X, K) → I(X, K): inner, additive, and the split `D = D_i + L_τ`.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fia::{IncFn, IncidenceAlgebra};
use crate::linalg::Matrix;
use crate::morphisms::{apply_matrix, matrix_of, ChainComplex, LinearEndo};
use crate::poset::Poset;
use crate::scalar::{Field, Scalar};

/// Checks `τ(x,x) = 0` and `τ(x,y) + τ(y,z) = τ(x,z)`.
pub fn validate_additive_cocycle(tau: &IncFn) -> Result<()> {
    let p = tau.poset();
    for x in 0..p.len() {
        if !tau.diag(x).is_zero() {
            return Err(Error::InvalidCocycle(format!("tau({0},{0}) must be 0", p.label(x))));
        }
    }
    for &(x, y) in p.intervals() {
        for z in 0..p.len() {
            if p.leq(y, z) && tau.get(x, y) + tau.get(y, z) != tau.get(x, z) {
                return Err(Error::InvalidCocycle(format!(
                    "tau({0},{1}) + tau({1},{2}) != tau({0},{2})",
                    p.label(x),
                    p.label(y),
                    p.label(z)
                )));
            }
        }
    }
    Ok(())
}

/// The derivation `D = D_i + L_τ`, `D(f) = (f i − i f) + τ ⊙ f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationSpec {
    i: IncFn,
    tau: IncFn,
}

impl DerivationSpec {
    pub fn new(i: IncFn, tau: IncFn) -> Result<DerivationSpec> {
        if !IncidenceAlgebra::same(i.algebra(), tau.algebra()) {
            return Err(Error::ContextMismatch);
        }
        validate_additive_cocycle(&tau)?;
        Ok(DerivationSpec { i, tau })
    }

    pub fn zero(alg: &Arc<IncidenceAlgebra>) -> DerivationSpec {
        DerivationSpec { i: alg.zero(), tau: alg.zero() }
    }

    pub fn inner(i: IncFn) -> DerivationSpec {
        let tau = i.algebra().zero();
        DerivationSpec { i, tau }
    }

    pub fn additive(tau: IncFn) -> Result<DerivationSpec> {
        let i = tau.algebra().zero();
        DerivationSpec::new(i, tau)
    }

    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        self.i.algebra()
    }

    pub fn i(&self) -> &IncFn {
        &self.i
    }

    pub fn tau(&self) -> &IncFn {
        &self.tau
    }

    pub fn try_apply(&self, f: &IncFn) -> Result<IncFn> {
        let inner = f.try_mul(&self.i)?.try_sub(&self.i.try_mul(f)?)?;
        inner.try_add(&self.tau.try_hadamard(f)?)
    }

    pub fn apply(&self, f: &IncFn) -> IncFn {
        self.try_apply(f).expect("derivation applied to a foreign element")
    }

    pub fn matrix(&self) -> LinearEndo {
        matrix_of(self.algebra(), |e| self.apply(e))
    }

    /// Exhaustive Leibniz check on the basis plus `trials` random pairs.
    pub fn leibniz_check(&self, trials: usize) -> bool {
        leibniz_check(self.algebra(), &self.matrix(), trials)
    }

    /// `c · D`.
    pub fn scale(&self, c: &Scalar) -> DerivationSpec {
        DerivationSpec { i: self.i.scale(c), tau: self.tau.scale(c) }
    }
}

/// Checks `D(fg) = D(f)g + fD(g)` exhaustively on basis pairs and on
/// `trials` seeded random pairs.
pub fn leibniz_check(alg: &Arc<IncidenceAlgebra>, raw: &LinearEndo, trials: usize) -> bool {
    let basis = alg.basis_elements();
    let images: Vec<IncFn> = basis.iter().map(|e| apply_matrix(raw, e)).collect();
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let lhs = apply_matrix(raw, &(&basis[a] * &basis[b]));
            let rhs = &(&images[a] * &basis[b]) + &(&basis[a] * &images[b]);
            if lhs != rhs {
                return false;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e1b);
    (0..trials).all(|_| {
        let (f, g) = (alg.random(&mut rng), alg.random(&mut rng));
        let lhs = apply_matrix(raw, &(&f * &g));
        lhs == &(&apply_matrix(raw, &f) * &g) + &(&f * &apply_matrix(raw, &g))
    })
}

/// A diagonal `f` with `τ(x, y) = f(y, y) − f(x, x)`, so that `L_τ = D_f`.
pub fn additive_is_inner(tau: &IncFn) -> Result<Option<IncFn>> {
    validate_additive_cocycle(tau)?;
    let p = tau.poset();
    let n = p.len();
    let field = tau.field();
    let values: Vec<Scalar> = match p.all_comparable_elements().first() {
        Some(&x0) => (0..n).map(|x| if p.leq(x, x0) { -tau.get(x, x0) } else { tau.get(x0, x) }).collect(),
        None => {
            let mut f: Vec<Option<Scalar>> = vec![None; n];
            for root in 0..n {
                if f[root].is_some() {
                    continue;
                }
                f[root] = Some(field.zero());
                let mut queue = VecDeque::from([root]);
                while let Some(x) = queue.pop_front() {
                    let fx = f[x].clone().unwrap();
                    for &(a, b) in p.covers() {
                        let (y, v) = if a == x {
                            (b, &fx + &tau.get(a, b))
                        } else if b == x {
                            (a, &fx - &tau.get(a, b))
                        } else {
                            continue;
                        };
                        if f[y].is_none() {
                            f[y] = Some(v);
                            queue.push_back(y);
                        }
                    }
                }
            }
            f.into_iter().map(Option::unwrap).collect()
        }
    };
    let ok = p.intervals().iter().all(|&(x, y)| tau.get(x, y) == &values[y] - &values[x]);
    Ok(ok.then(|| tau.algebra().diagonal(&values)))
}

/// Outcome of the Der = IDer test.
#[derive(Clone, Debug)]
pub struct DerReport {
    pub holds: bool,
    /// Dimension of the space of additive cocycles.
    pub cocycle_dim: usize,
    /// Dimension of the coboundaries `f(y) − f(x)`.
    pub coboundary_dim: usize,
    /// An additive cocycle that is not a coboundary, when the test fails.
    pub witness: Option<IncFn>,
}

/// Whether every derivation FI(X, K) → I(X, K) is inner.
pub fn der_equals_ider(p: &Poset, field: Field) -> bool {
    der_report(p, field).holds
}

pub fn der_report(p: &Poset, field: Field) -> DerReport {
    let cc = ChainComplex::new(p);
    let to_k = |v: i64| field.from_i64(v);
    // Cocycle conditions: one row per strict triple, one column per strict pair.
    let rows: Vec<Vec<Scalar>> =
        (0..cc.triples.len()).map(|t| cc.boundary.iter().map(|r| to_k(r[t])).collect()).collect();
    let cocycle_space: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..cc.pairs.len())
            .map(|j| (0..cc.pairs.len()).map(|k| if j == k { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, &rows).nullspace()
    };
    let cob_rows: Vec<Vec<Scalar>> = cc
        .pairs
        .iter()
        .map(|&(x, y)| {
            (0..p.len())
                .map(|z| {
                    if z == y {
                        field.one()
                    } else if z == x {
                        -field.one()
                    } else {
                        field.zero()
                    }
                })
                .collect()
        })
        .collect();
    let coboundary_dim = if cob_rows.is_empty() { 0 } else { Matrix::from_rows(field, &cob_rows).rank() };
    let cocycle_dim = cocycle_space.len();
    let holds = cocycle_dim == coboundary_dim;
    let witness = if holds {
        None
    } else {
        let alg = IncidenceAlgebra::new(p.clone(), field);
        cocycle_space.iter().find_map(|v| {
            let mut tau = alg.zero();
            for (j, &(x, y)) in cc.pairs.iter().enumerate() {
                tau.set(x, y, v[j].clone()).unwrap();
            }
            match additive_is_inner(&tau) {
                Ok(None) => Some(tau),
                _ => None,
            }
        })
    };
    DerReport { holds, cocycle_dim, coboundary_dim, witness }
}

/// Splits a raw derivation into `D_i + L_τ` with `τ(x, y) = D(e_xy)(x, y)`;
/// `i` is normalized to vanish on the diagonal at the first element of each
/// connected component.
pub fn split_raw_derivation(alg: &Arc<IncidenceAlgebra>, raw: &LinearEndo) -> Result<DerivationSpec> {
    let n = alg.dim();
    if raw.rows() != n || raw.cols() != n || raw.field() != alg.field() {
        return Err(Error::ContextMismatch);
    }
    if !leibniz_check(alg, raw, 0) {
        return Err(Error::NotADerivation("Leibniz rule fails on the basis".into()));
    }
    let p = alg.poset();
    let tau = alg.from_fn(|x, y| raw.get(p.interval_index(x, y).unwrap(), p.interval_index(x, y).unwrap()).clone());
    validate_additive_cocycle(&tau).map_err(|e| Error::SplitFailed(e.to_string()))?;
    let residual: Vec<Scalar> = {
        let lt = DerivationSpec::additive(tau.clone())?.matrix();
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                v.push(raw.get(r, c) - lt.get(r, c));
            }
        }
        v
    };
    // Columns: flattened D_{e_k}.
    let cols: Vec<Vec<Scalar>> = (0..n)
        .map(|k| {
            let m = DerivationSpec::inner(alg.basis(k)).matrix();
            let mut v = Vec::with_capacity(n * n);
            for r in 0..n {
                for c in 0..n {
                    v.push(m.get(r, c).clone());
                }
            }
            v
        })
        .collect();
    let system = Matrix::from_columns(alg.field(), n * n, &cols);
    let sol =
        system.solve(&residual).ok_or_else(|| Error::SplitFailed("residual is not an inner derivation".into()))?;
    let mut i = alg.from_entries(sol)?;
    let comp = p.components();
    let mut seen = Vec::new();
    for x in 0..p.len() {
        if !seen.contains(&comp[x]) {
            seen.push(comp[x]);
            let c = i.diag(x).clone();
            let indicator = &alg.center_basis()[comp[x]];
            i = &i - &indicator.scale(&c);
        }
    }
    let spec = DerivationSpec::new(i, tau)?;
    if spec.matrix() != *raw {
        return Err(Error::SplitFailed("recomposition differs from input".into()));
    }
    Ok(spec)
}

/// A random valid additive cocycle: a random coboundary plus a random
/// combination of a cocycle basis.
pub fn random_additive_cocycle<R: Rng + ?Sized>(alg: &Arc<IncidenceAlgebra>, rng: &mut R) -> IncFn {
    let p = alg.poset();
    let field = alg.field();
    let cc = ChainComplex::new(p);
    let rows: Vec<Vec<Scalar>> =
        (0..cc.triples.len()).map(|t| cc.boundary.iter().map(|r| field.from_i64(r[t])).collect()).collect();
    let basis: Vec<Vec<Scalar>> = if rows.is_empty() {
        (0..cc.pairs.len())
            .map(|j| (0..cc.pairs.len()).map(|k| if j == k { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_rows(field, &rows).nullspace()
    };
    let mut tau = alg.zero();
    for v in basis {
        let c = field.random(rng);
        for (j, &(x, y)) in cc.pairs.iter().enumerate() {
            let cur = tau.get(x, y);
            tau.set(x, y, cur + &c * &v[j]).unwrap();
        }
    }
    tau
}
