//! The idealization D(X, K) = FI(X, K) (+) I(X, K) and its block-form maps.
//!
//! Coordinates of an element `[f; i]` are the `f` entries followed by the `i`
//! entries, each in canonical interval order. A [`DMorphism`] is a K-linear
//! map on those `2n` coordinates, column `j` being the image of basis vector `j`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::derivations::DerivationSpec;
use crate::error::{Error, Result};
use crate::fia::{IncFn, IncidenceAlgebra};
use crate::linalg::Matrix;
use crate::morphisms::{matrix_of, relabel, FiaMorphism, LinearEndo};
use crate::poset::{anti_isomorphisms, Poset};
use crate::scalar::{Field, Scalar};

/// An element `[f; i]` of D(X, K).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DElem {
    f: IncFn,
    i: IncFn,
}

impl fmt::Debug for DElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{self}")
    }
}

impl fmt::Display for DElem {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "[{}; {}]", self.f, self.i)
    }
}

impl DElem {
    pub fn new(f: IncFn, i: IncFn) -> Result<DElem> {
        if !IncidenceAlgebra::same(f.algebra(), i.algebra()) {
            return Err(Error::ContextMismatch);
        }
        Ok(DElem { f, i })
    }

    pub fn zero(alg: &Arc<IncidenceAlgebra>) -> DElem {
        DElem { f: alg.zero(), i: alg.zero() }
    }

    /// The unity `[δ; 0]`.
    pub fn one(alg: &Arc<IncidenceAlgebra>) -> DElem {
        DElem { f: alg.delta(), i: alg.zero() }
    }

    /// The central element `c_{k1,k2} = [k1 δ; k2 δ]`.
    pub fn central(alg: &Arc<IncidenceAlgebra>, k1: &Scalar, k2: &Scalar) -> DElem {
        DElem { f: alg.scalar(k1), i: alg.scalar(k2) }
    }

    /// `[f; 0]`.
    pub fn ring(f: IncFn) -> DElem {
        let i = f.algebra().zero();
        DElem { f, i }
    }

    pub fn random<R: Rng + ?Sized>(alg: &Arc<IncidenceAlgebra>, rng: &mut R) -> DElem {
        DElem { f: alg.random(rng), i: alg.random(rng) }
    }

    pub fn random_unit<R: Rng + ?Sized>(alg: &Arc<IncidenceAlgebra>, rng: &mut R) -> DElem {
        DElem { f: alg.random_unit(rng), i: alg.random(rng) }
    }

    pub fn f(&self) -> &IncFn {
        &self.f
    }

    pub fn i(&self) -> &IncFn {
        &self.i
    }

    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        self.f.algebra()
    }

    pub fn field(&self) -> Field {
        self.f.field()
    }

    pub fn is_unit(&self) -> bool {
        self.f.is_unit()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.i.is_zero()
    }

    /// Coordinates `(f, i)` as one vector of length `2n`.
    pub fn to_vec(&self) -> Vec<Scalar> {
        self.f.entries().iter().chain(self.i.entries()).cloned().collect()
    }

    pub fn from_vec(alg: &Arc<IncidenceAlgebra>, v: Vec<Scalar>) -> Result<DElem> {
        let n = alg.dim();
        if v.len() != 2 * n {
            return Err(Error::ContextMismatch);
        }
        let mut v = v;
        let i = v.split_off(n);
        Ok(DElem { f: alg.from_entries(v)?, i: alg.from_entries(i)? })
    }

    /// Basis vector `j` of D: `[e_j; 0]` for `j < n`, else `[0; e_{j−n}]`.
    pub fn basis(alg: &Arc<IncidenceAlgebra>, j: usize) -> DElem {
        let n = alg.dim();
        if j < n {
            DElem { f: alg.basis(j), i: alg.zero() }
        } else {
            DElem { f: alg.zero(), i: alg.basis(j - n) }
        }
    }

    pub fn try_mul(&self, other: &DElem) -> Result<DElem> {
        let f = self.f.try_mul(&other.f)?;
        let i = self.f.try_mul(&other.i)?.try_add(&self.i.try_mul(&other.f)?)?;
        Ok(DElem { f, i })
    }

    /// `[f; m]⁻¹ = [f⁻¹; −f⁻¹ m f⁻¹]`.
    pub fn inverse(&self) -> Result<DElem> {
        let finv = self.f.inverse()?;
        let i = -&(&(&finv * &self.i) * &finv);
        Ok(DElem { f: finv, i })
    }

    pub fn scale(&self, k: &Scalar) -> DElem {
        DElem { f: self.f.scale(k), i: self.i.scale(k) }
    }

    /// Commutes with every basis element of D.
    pub fn is_central(&self) -> bool {
        let alg = self.algebra();
        (0..2 * alg.dim()).all(|j| {
            let b = DElem::basis(alg, j);
            &b * self == self * &b
        })
    }
}

impl<'a> Mul<&'a DElem> for &'a DElem {
    type Output = DElem;
    fn mul(self, rhs: &'a DElem) -> DElem {
        self.try_mul(rhs).expect("elements from different algebras")
    }
}

impl<'a> Add<&'a DElem> for &'a DElem {
    type Output = DElem;
    fn add(self, rhs: &'a DElem) -> DElem {
        DElem { f: &self.f + &rhs.f, i: &self.i + &rhs.i }
    }
}

impl<'a> Sub<&'a DElem> for &'a DElem {
    type Output = DElem;
    fn sub(self, rhs: &'a DElem) -> DElem {
        DElem { f: &self.f - &rhs.f, i: &self.i - &rhs.i }
    }
}

impl Neg for &DElem {
    type Output = DElem;
    fn neg(self) -> DElem {
        DElem { f: -&self.f, i: -&self.i }
    }
}

impl Mul for DElem {
    type Output = DElem;
    fn mul(self, rhs: DElem) -> DElem {
        &self * &rhs
    }
}

/// A basis of Z(D(X, K)): `[c; 0]` and `[0; c]` per component indicator `c`.
pub fn d_center_basis(alg: &Arc<IncidenceAlgebra>) -> Vec<DElem> {
    let mut out = Vec::new();
    for c in alg.center_basis() {
        out.push(DElem::ring(c.clone()));
        out.push(DElem { f: alg.zero(), i: c });
    }
    out
}

/// A K-linear map of D(X, K) in raw 2×2 block form, flagged anti when it is
/// meant to reverse products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMorphism {
    alg: Arc<IncidenceAlgebra>,
    matrix: Matrix,
    anti: bool,
}

impl DMorphism {
    pub fn from_matrix(alg: &Arc<IncidenceAlgebra>, matrix: Matrix, anti: bool) -> Result<DMorphism> {
        let m = 2 * alg.dim();
        if matrix.rows() != m || matrix.cols() != m || matrix.field() != alg.field() {
            return Err(Error::ContextMismatch);
        }
        Ok(DMorphism { alg: Arc::clone(alg), matrix, anti })
    }

    /// Assembles `[[ul, ur], [ll, lr]]` from four `n × n` blocks.
    pub fn from_blocks(
        alg: &Arc<IncidenceAlgebra>,
        ul: &LinearEndo,
        ur: &LinearEndo,
        ll: &LinearEndo,
        lr: &LinearEndo,
        anti: bool,
    ) -> DMorphism {
        let n = alg.dim();
        let mut m = Matrix::zeros(alg.field(), 2 * n, 2 * n);
        for (block, r0, c0) in [(ul, 0, 0), (ur, 0, n), (ll, n, 0), (lr, n, n)] {
            for r in 0..n {
                for c in 0..n {
                    m.set(r0 + r, c0 + c, block.get(r, c).clone());
                }
            }
        }
        DMorphism { alg: Arc::clone(alg), matrix: m, anti }
    }

    /// Matrix of a map given on elements.
    pub fn from_fn(alg: &Arc<IncidenceAlgebra>, anti: bool, mut map: impl FnMut(&DElem) -> DElem) -> DMorphism {
        let cols: Vec<Vec<Scalar>> = (0..2 * alg.dim()).map(|j| map(&DElem::basis(alg, j)).to_vec()).collect();
        let matrix = Matrix::from_columns(alg.field(), 2 * alg.dim(), &cols);
        DMorphism { alg: Arc::clone(alg), matrix, anti }
    }

    pub fn identity(alg: &Arc<IncidenceAlgebra>) -> DMorphism {
        DMorphism { alg: Arc::clone(alg), matrix: Matrix::identity(alg.field(), 2 * alg.dim()), anti: false }
    }

    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        &self.alg
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn is_anti(&self) -> bool {
        self.anti
    }

    /// Block `(r, c)`, `r, c ∈ {0, 1}`: 0 is the FI coordinate, 1 the I coordinate.
    pub fn block(&self, r: usize, c: usize) -> LinearEndo {
        let n = self.alg.dim();
        let mut b = Matrix::zeros(self.alg.field(), n, n);
        for i in 0..n {
            for j in 0..n {
                b.set(i, j, self.matrix.get(r * n + i, c * n + j).clone());
            }
        }
        b
    }

    pub fn upper_right_is_zero(&self) -> bool {
        self.block(0, 1).is_zero()
    }

    pub fn apply(&self, a: &DElem) -> DElem {
        DElem::from_vec(&self.alg, self.matrix.apply(&a.to_vec())).expect("matching algebra")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DMorphism) -> DMorphism {
        DMorphism { alg: Arc::clone(&self.alg), matrix: self.matrix.mul(&other.matrix), anti: self.anti != other.anti }
    }

    pub fn inverse(&self) -> Option<DMorphism> {
        Some(DMorphism { alg: Arc::clone(&self.alg), matrix: self.matrix.inverse()?, anti: self.anti })
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.alg.field(), 2 * self.alg.dim())
    }

    /// `Φ² = id`.
    pub fn squares_to_identity(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// First basis index `j` with `Φ²(b_j) ≠ b_j`.
    pub fn first_non_involutive(&self) -> Option<usize> {
        let sq = self.matrix.mul(&self.matrix);
        let n = 2 * self.alg.dim();
        (0..n).find(|&j| {
            (0..n).any(|i| sq.get(i, j) != &if i == j { self.alg.field().one() } else { self.alg.field().zero() })
        })
    }

    /// Checks unitality and (anti-)multiplicativity on all pairs of basis elements.
    pub fn is_ring_morphism(&self) -> bool {
        let alg = &self.alg;
        if self.apply(&DElem::one(alg)) != DElem::one(alg) {
            return false;
        }
        let m = 2 * alg.dim();
        let basis: Vec<DElem> = (0..m).map(|j| DElem::basis(alg, j)).collect();
        let images: Vec<DElem> = basis.iter().map(|b| self.apply(b)).collect();
        (0..m).all(|a| {
            (0..m).all(|b| {
                let lhs = self.apply(&(&basis[a] * &basis[b]));
                let rhs = if self.anti { &images[b] * &images[a] } else { &images[a] * &images[b] };
                lhs == rhs
            })
        })
    }
}

/// `η̃ = diag(η, η̄)`; for finite X the extension `η̄` is `η` itself.
pub fn lift(eta: &FiaMorphism) -> DMorphism {
    let alg = eta.algebra();
    let m = eta.matrix();
    let zero = Matrix::zeros(alg.field(), alg.dim(), alg.dim());
    DMorphism::from_blocks(alg, &m, &zero, &zero, &m, eta.is_anti())
}

pub fn lift_auto(eta: &FiaMorphism) -> Result<DMorphism> {
    if eta.is_anti() {
        return Err(Error::NotAMorphism("expected an automorphism".into()));
    }
    Ok(lift(eta))
}

/// `ρ̃ = diag(ρ, ρ̄)` for an anti-automorphism `ρ`.
pub fn lift_anti(rho: &FiaMorphism) -> Result<DMorphism> {
    if !rho.is_anti() {
        return Err(Error::NotAMorphism("expected an anti-automorphism".into()));
    }
    Ok(lift(rho))
}

/// `g̃ = diag(id, g·)` for a central unit `g`.
pub fn lift_g(g: &IncFn) -> Result<DMorphism> {
    if !g.is_unit() || !g.is_central() {
        return Err(Error::NotCentral);
    }
    let alg = g.algebra();
    let id = Matrix::identity(alg.field(), alg.dim());
    let zero = Matrix::zeros(alg.field(), alg.dim(), alg.dim());
    let gm = matrix_of(alg, |i| g * i);
    Ok(DMorphism::from_blocks(alg, &id, &zero, &zero, &gm, false))
}

/// `(kδ)~ : [f; i] ↦ [f; k i]`.
pub fn lift_scalar(alg: &Arc<IncidenceAlgebra>, k: &Scalar) -> Result<DMorphism> {
    lift_g(&alg.scalar(k))
}

/// `D̃ = [[id, 0], [D, id]]`.
pub fn lift_der(d: &DerivationSpec) -> DMorphism {
    lift_der_matrix(d.algebra(), &d.matrix())
}

/// `D̃` for a derivation given as a raw matrix.
pub fn lift_der_matrix(alg: &Arc<IncidenceAlgebra>, d: &LinearEndo) -> DMorphism {
    let id = Matrix::identity(alg.field(), alg.dim());
    let zero = Matrix::zeros(alg.field(), alg.dim(), alg.dim());
    DMorphism::from_blocks(alg, &id, &zero, d, &id, false)
}

/// The inner automorphism `Ψ_θ(a) = θ a θ⁻¹` of D.
pub fn inner_auto_d(theta: &DElem) -> Result<DMorphism> {
    let inv = theta.inverse()?;
    Ok(DMorphism::from_fn(theta.algebra(), false, |a| &(theta * a) * &inv))
}

/// `Ψ_θ` for `θ = [f; j]` assembled as `Ψ̃_f ∘ D̃_{−f⁻¹ j}`.
pub fn inner_auto_d_factored(theta: &DElem) -> Result<DMorphism> {
    let finv = theta.f().inverse()?;
    let psi = lift(&FiaMorphism::inner(theta.f().clone())?);
    let d = lift_der(&DerivationSpec::inner(-&(&finv * theta.i())));
    Ok(psi.compose(&d))
}

/// A poset anti-isomorphism `λ: X → Y` and the induced
/// `Υ([f; i]) = [ρ_λ(f); ρ̄_λ(i)]` from D(X, K) to D(Y, K).
#[derive(Clone, Debug)]
pub struct AntiIsomorphism {
    pub src: Arc<IncidenceAlgebra>,
    pub dst: Arc<IncidenceAlgebra>,
    /// `images[x] = λ(x)`.
    pub images: Vec<usize>,
}

impl AntiIsomorphism {
    /// `ρ_λ(f)(y₁, y₂) = f(λ⁻¹y₂, λ⁻¹y₁)`.
    pub fn apply_fi(&self, f: &IncFn) -> IncFn {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        self.dst.from_fn(|y1, y2| f.get(inv[y2], inv[y1]))
    }

    pub fn apply(&self, a: &DElem) -> DElem {
        DElem { f: self.apply_fi(a.f()), i: self.apply_fi(a.i()) }
    }
}

/// Searches for a poset anti-isomorphism `X → Y` and builds `Υ` from it.
pub fn d_anti_isomorphic(x: &Poset, y: &Poset, field: Field) -> Result<Option<AntiIsomorphism>> {
    let found = anti_isomorphisms(x, y, true)?;
    Ok(found.into_iter().next().map(|images| AntiIsomorphism {
        src: IncidenceAlgebra::new(x.clone(), field),
        dst: IncidenceAlgebra::new(y.clone(), field),
        images,
    }))
}

/// `ρ_λ` on FI as used by the lifts; exposed for the semilinearity checks.
pub fn extension(rho: &FiaMorphism, i: &IncFn) -> IncFn {
    rho.apply(i)
}

/// `relabel` on I(X, K), the bimodule half of an induced lift.
pub fn extension_relabel(map: &crate::poset::PosetMap, i: &IncFn) -> IncFn {
    relabel(i, map)
}
