//! The incidence algebra FI(X, K) of a finite poset.
//!
//! An [`IncFn`] stores one scalar per comparable pair `(x, y)`, `x ≤ y`, in
//! the poset's canonical interval order. Products are convolutions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::scalar::{Field, Scalar};

/// A poset together with a field and the precomputed convolution table.
#[derive(Debug)]
pub struct IncidenceAlgebra {
    poset: Poset,
    field: Field,
    conv: Vec<Vec<(usize, usize)>>,
    diag: Vec<usize>,
    inverse_order: Vec<usize>,
}

impl PartialEq for IncidenceAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.poset == other.poset
    }
}

impl Eq for IncidenceAlgebra {}

impl IncidenceAlgebra {
    pub fn new(poset: Poset, field: Field) -> Arc<IncidenceAlgebra> {
        let conv = poset
            .intervals()
            .iter()
            .map(|&(x, y)| {
                poset
                    .interval_elements(x, y)
                    .map(|z| (poset.interval_index(x, z).unwrap(), poset.interval_index(z, y).unwrap()))
                    .collect()
            })
            .collect();
        let diag = (0..poset.len()).map(|x| poset.interval_index(x, x).unwrap()).collect();
        // Intervals (x, y) sorted so that every (z, y) with z > x comes earlier.
        let ext = poset.linear_extension();
        let mut rank = vec![0; poset.len()];
        for (i, &x) in ext.iter().enumerate() {
            rank[x] = i;
        }
        let mut inverse_order: Vec<usize> = (0..poset.interval_count()).collect();
        inverse_order.sort_by_key(|&k| std::cmp::Reverse(rank[poset.intervals()[k].0]));
        Arc::new(IncidenceAlgebra { poset, field, conv, diag, inverse_order })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of comparable pairs, the dimension over K.
    pub fn dim(&self) -> usize {
        self.conv.len()
    }

    pub fn diag_index(&self, x: usize) -> usize {
        self.diag[x]
    }

    fn wrap(self: &Arc<Self>, entries: Vec<Scalar>) -> IncFn {
        IncFn { alg: Arc::clone(self), entries }
    }

    pub fn zero(self: &Arc<Self>) -> IncFn {
        self.wrap(vec![self.field.zero(); self.dim()])
    }

    /// The unity δ.
    pub fn delta(self: &Arc<Self>) -> IncFn {
        self.diagonal(&vec![self.field.one(); self.poset.len()])
    }

    /// The indicator `e_xy` of a single comparable pair.
    pub fn e(self: &Arc<Self>, x: usize, y: usize) -> Result<IncFn> {
        let k = self
            .poset
            .interval_index(x, y)
            .ok_or_else(|| Error::NotComparable(self.poset.label(x).into(), self.poset.label(y).into()))?;
        Ok(self.basis(k))
    }

    /// The basis element for interval index `k`.
    pub fn basis(self: &Arc<Self>, k: usize) -> IncFn {
        let mut f = self.zero();
        f.entries[k] = self.field.one();
        f
    }

    /// All `e_xy` in canonical order.
    pub fn basis_elements(self: &Arc<Self>) -> Vec<IncFn> {
        (0..self.dim()).map(|k| self.basis(k)).collect()
    }

    /// The diagonal element with `f(x, x) = values[x]`.
    pub fn diagonal(self: &Arc<Self>, values: &[Scalar]) -> IncFn {
        assert_eq!(values.len(), self.poset.len(), "one value per element");
        let mut f = self.zero();
        for (x, v) in values.iter().enumerate() {
            f.entries[self.diag[x]] = v.clone();
        }
        f
    }

    /// Scalar multiple `kδ`.
    pub fn scalar(self: &Arc<Self>, k: &Scalar) -> IncFn {
        self.diagonal(&vec![k.clone(); self.poset.len()])
    }

    pub fn from_entries(self: &Arc<Self>, entries: Vec<Scalar>) -> Result<IncFn> {
        if entries.len() != self.dim() || entries.iter().any(|s| s.field() != self.field) {
            return Err(Error::ContextMismatch);
        }
        Ok(self.wrap(entries))
    }

    pub fn from_fn(self: &Arc<Self>, mut f: impl FnMut(usize, usize) -> Scalar) -> IncFn {
        let entries = self.poset.intervals().iter().map(|&(x, y)| f(x, y)).collect();
        self.wrap(entries)
    }

    pub fn random<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> IncFn {
        let entries = (0..self.dim()).map(|_| self.field.random(rng)).collect();
        self.wrap(entries)
    }

    pub fn random_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> IncFn {
        let mut f = self.random(rng);
        for x in 0..self.poset.len() {
            f.entries[self.diag[x]] = self.field.random_nonzero(rng);
        }
        f
    }

    pub fn random_diagonal_unit<R: Rng + ?Sized>(self: &Arc<Self>, rng: &mut R) -> IncFn {
        let values: Vec<Scalar> = (0..self.poset.len()).map(|_| self.field.random_nonzero(rng)).collect();
        self.diagonal(&values)
    }

    /// A basis of Z(FI(X, K)): one diagonal indicator per connected component.
    pub fn center_basis(self: &Arc<Self>) -> Vec<IncFn> {
        let comp = self.poset.components();
        let count = comp.iter().max().map_or(0, |m| m + 1);
        (0..count)
            .map(|c| {
                let values: Vec<Scalar> =
                    comp.iter().map(|&d| if d == c { self.field.one() } else { self.field.zero() }).collect();
                self.diagonal(&values)
            })
            .collect()
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

/// An element of FI(X, K).
#[derive(Clone)]
pub struct IncFn {
    alg: Arc<IncidenceAlgebra>,
    entries: Vec<Scalar>,
}

impl PartialEq for IncFn {
    fn eq(&self, other: &Self) -> bool {
        IncidenceAlgebra::same(&self.alg, &other.alg) && self.entries == other.entries
    }
}

impl Eq for IncFn {}

impl std::hash::Hash for IncFn {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.entries.hash(state);
    }
}

impl fmt::Debug for IncFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IncFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.alg.poset();
        let parts: Vec<String> = p
            .intervals()
            .iter()
            .zip(&self.entries)
            .filter(|(_, v)| !v.is_zero())
            .map(|(&(x, y), v)| format!("{},{}: {}", p.label(x), p.label(y), v))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl IncFn {
    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        &self.alg
    }

    pub fn poset(&self) -> &Poset {
        self.alg.poset()
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Scalar> {
        self.entries
    }

    /// Entry at interval index `k`.
    #[inline]
    pub fn at(&self, k: usize) -> &Scalar {
        &self.entries[k]
    }

    /// `f(x, y)`, zero for incomparable pairs.
    pub fn get(&self, x: usize, y: usize) -> Scalar {
        match self.alg.poset.interval_index(x, y) {
            Some(k) => self.entries[k].clone(),
            None => self.alg.field.zero(),
        }
    }

    pub fn diag(&self, x: usize) -> &Scalar {
        &self.entries[self.alg.diag[x]]
    }

    pub fn set(&mut self, x: usize, y: usize, v: Scalar) -> Result<()> {
        let p = &self.alg.poset;
        let k = p.interval_index(x, y).ok_or_else(|| Error::NotComparable(p.label(x).into(), p.label(y).into()))?;
        if v.field() != self.alg.field {
            return Err(Error::ContextMismatch);
        }
        self.entries[k] = v;
        Ok(())
    }

    pub fn set_at(&mut self, k: usize, v: Scalar) {
        self.entries[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_diagonal(&self) -> bool {
        self.alg.poset.intervals().iter().zip(&self.entries).all(|(&(x, y), v)| x == y || v.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.alg.diag.iter().all(|&k| !self.entries[k].is_zero())
    }

    /// Commutes with every `e_xy`.
    pub fn is_central(&self) -> bool {
        self.alg.basis_elements().iter().all(|e| self * e == e * self)
    }

    fn check(&self, other: &IncFn) -> Result<()> {
        if IncidenceAlgebra::same(&self.alg, &other.alg) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    pub fn try_mul(&self, other: &IncFn) -> Result<IncFn> {
        self.check(other)?;
        let zero = self.alg.field.zero();
        let entries = self
            .alg
            .conv
            .iter()
            .map(|pairs| {
                let mut acc = zero.clone();
                for &(a, b) in pairs {
                    let (u, v) = (&self.entries[a], &other.entries[b]);
                    if !u.is_zero() && !v.is_zero() {
                        acc = acc + u * v;
                    }
                }
                acc
            })
            .collect();
        Ok(self.alg.wrap(entries))
    }

    pub fn try_add(&self, other: &IncFn) -> Result<IncFn> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(self.alg.wrap(entries))
    }

    pub fn try_sub(&self, other: &IncFn) -> Result<IncFn> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(self.alg.wrap(entries))
    }

    /// Entrywise product, the action of an additive or multiplicative cocycle.
    pub fn try_hadamard(&self, other: &IncFn) -> Result<IncFn> {
        self.check(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a * b).collect();
        Ok(self.alg.wrap(entries))
    }

    pub fn scale(&self, k: &Scalar) -> IncFn {
        self.alg.wrap(self.entries.iter().map(|v| v * k).collect())
    }

    /// Two-sided inverse by back-substitution over intervals.
    pub fn inverse(&self) -> Result<IncFn> {
        let alg = &self.alg;
        let p = &alg.poset;
        let mut diag_inv = Vec::with_capacity(p.len());
        for x in 0..p.len() {
            match self.entries[alg.diag[x]].inv() {
                Some(v) => diag_inv.push(v),
                None => return Err(Error::NotAUnit(p.label(x).to_string())),
            }
        }
        let mut g = alg.zero();
        for &k in &alg.inverse_order {
            let (x, y) = p.intervals()[k];
            if x == y {
                g.entries[k] = diag_inv[x].clone();
                continue;
            }
            // f(x,x) g(x,y) = −Σ_{x<z≤y} f(x,z) g(z,y)
            let mut acc = alg.field.zero();
            for &(a, b) in &alg.conv[k] {
                if a == alg.diag[x] {
                    continue;
                }
                let (u, v) = (&self.entries[a], &g.entries[b]);
                if !u.is_zero() && !v.is_zero() {
                    acc = acc + u * v;
                }
            }
            g.entries[k] = -(&diag_inv[x] * &acc);
        }
        Ok(g)
    }
}

impl<'a> Mul<&'a IncFn> for &'a IncFn {
    type Output = IncFn;
    fn mul(self, rhs: &'a IncFn) -> IncFn {
        self.try_mul(rhs).expect("incidence functions from different algebras")
    }
}

impl<'a> Add<&'a IncFn> for &'a IncFn {
    type Output = IncFn;
    fn add(self, rhs: &'a IncFn) -> IncFn {
        self.try_add(rhs).expect("incidence functions from different algebras")
    }
}

impl<'a> Sub<&'a IncFn> for &'a IncFn {
    type Output = IncFn;
    fn sub(self, rhs: &'a IncFn) -> IncFn {
        self.try_sub(rhs).expect("incidence functions from different algebras")
    }
}

impl Neg for &IncFn {
    type Output = IncFn;
    fn neg(self) -> IncFn {
        self.alg.wrap(self.entries.iter().map(|v| -v).collect())
    }
}

impl Mul for IncFn {
    type Output = IncFn;
    fn mul(self, rhs: IncFn) -> IncFn {
        &self * &rhs
    }
}

impl Add for IncFn {
    type Output = IncFn;
    fn add(self, rhs: IncFn) -> IncFn {
        &self + &rhs
    }
}

impl Sub for IncFn {
    type Output = IncFn;
    fn sub(self, rhs: IncFn) -> IncFn {
        &self - &rhs
    }
}

impl Neg for IncFn {
    type Output = IncFn;
    fn neg(self) -> IncFn {
        -&self
    }
}
