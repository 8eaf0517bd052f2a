//! Brute-force ground truth on tiny instances over 𝔽_p.
//!
//! Everything here runs on its own dense mod-p arithmetic built straight from
//! the order relation; it shares the coordinate order with [`crate::fia`] so
//! results can be compared, and nothing else.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::idealization::DElem;
use crate::linalg::Matrix;
use crate::poset::{Poset, PosetMap};
use crate::scalar::{Field, Scalar};

/// Default cap on the number of enumerated elements.
pub const DEFAULT_LIMIT: u64 = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ring {
    FI,
    D,
}

/// A square matrix over 𝔽_p with compact entries, hashable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModMatrix {
    n: usize,
    p: u32,
    data: Vec<u16>,
}

impl ModMatrix {
    pub fn identity(n: usize, p: u32) -> ModMatrix {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        ModMatrix { n, p, data }
    }

    /// Column `j` is `cols[j]`.
    pub fn from_columns(p: u32, cols: &[Vec<u32>]) -> ModMatrix {
        let n = cols.len();
        let mut data = vec![0; n * n];
        for (j, c) in cols.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                data[i * n + j] = v as u16;
            }
        }
        ModMatrix { n, p, data }
    }

    pub fn from_matrix(m: &Matrix) -> Result<ModMatrix> {
        let p = match m.field() {
            Field::Prime(p) => p as u32,
            Field::Rationals => return Err(Error::DomainMismatch("oracle needs a finite field".into())),
        };
        let n = m.rows();
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(m.get(i, j).residue().expect("prime field entry") as u16);
            }
        }
        Ok(ModMatrix { n, p, data })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.n + j] as u32
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        let (n, p) = (self.n, self.p as u64);
        let mut data = vec![0u16; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.data[k * n + j] as u64;
                    if b != 0 {
                        let cell = &mut data[i * n + j];
                        *cell = ((*cell as u64 + a * b) % p) as u16;
                    }
                }
            }
        }
        ModMatrix { n, p: self.p, data }
    }

    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        (0..self.n)
            .map(|i| ((0..self.n).map(|j| self.get(i, j) as u64 * v[j] as u64).sum::<u64>() % p) as u32)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == ModMatrix::identity(self.n, self.p)
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Option<ModMatrix> {
        let (n, p) = (self.n, self.p as u64);
        let mut a: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row: Vec<u64> = (0..n).map(|j| self.get(i, j) as u64).collect();
                row.extend((0..n).map(|j| (i == j) as u64));
                row
            })
            .collect();
        for c in 0..n {
            let r = (c..n).find(|&r| a[r][c] != 0)?;
            a.swap(c, r);
            let inv = pow_mod(a[c][c], p - 2, p);
            for v in a[c].iter_mut() {
                *v = *v * inv % p;
            }
            for r in 0..n {
                if r != c && a[r][c] != 0 {
                    let f = a[r][c];
                    for j in 0..2 * n {
                        a[r][j] = (a[r][j] + p - f * a[c][j] % p) % p;
                    }
                }
            }
        }
        let data = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| a[i][n + j] as u16).collect();
        Some(ModMatrix { n, p: self.p, data })
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Dense mod-p model of FI(X, 𝔽_p) and D(X, 𝔽_p).
#[derive(Clone, Debug)]
pub struct ModAlgebra {
    p: u32,
    poset: Poset,
    pairs: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
    /// For each output pair `(x, z)`, the input pairs `((x, y), (y, z))`.
    terms: Vec<Vec<(usize, usize)>>,
    /// Pairs ordered by interval size, for back-substitution.
    by_size: Vec<usize>,
}

impl ModAlgebra {
    pub fn new(poset: &Poset, field: Field) -> Result<ModAlgebra> {
        let p = match field {
            Field::Prime(p) if p < u16::MAX as u64 => p as u32,
            Field::Prime(p) => return Err(Error::SizeLimit(format!("oracle prime {p} too large"))),
            Field::Rationals => return Err(Error::DomainMismatch("oracle needs a finite field".into())),
        };
        let n = poset.len();
        let mut pairs = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if poset.leq(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &q)| (q, k)).collect();
        let terms = pairs
            .iter()
            .map(|&(x, z)| {
                (0..n)
                    .filter(|&y| poset.leq(x, y) && poset.leq(y, z))
                    .map(|y| (index[&(x, y)], index[&(y, z)]))
                    .collect()
            })
            .collect();
        let mut by_size: Vec<usize> = (0..pairs.len()).collect();
        by_size.sort_by_key(|&k| {
            let (x, y) = pairs[k];
            (0..n).filter(|&z| poset.leq(x, z) && poset.leq(z, y)).count()
        });
        Ok(ModAlgebra { p, poset: poset.clone(), pairs, index, terms, by_size })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Number of FI coordinates.
    pub fn dim(&self) -> usize {
        self.pairs.len()
    }

    pub fn fi_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.p as u64;
        self.terms.iter().map(|t| (t.iter().map(|&(i, j)| a[i] as u64 * b[j] as u64).sum::<u64>() % p) as u32).collect()
    }

    fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    /// `[f; m][g; n] = [fg; fn + mg]`.
    pub fn d_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = self.dim();
        let (f, m) = a.split_at(n);
        let (g, h) = b.split_at(n);
        let mut out = self.fi_mul(f, g);
        out.extend(self.add(&self.fi_mul(f, h), &self.fi_mul(m, g)));
        out
    }

    pub fn fi_inverse(&self, f: &[u32]) -> Option<Vec<u32>> {
        let p = self.p as u64;
        let mut g = vec![0u32; self.dim()];
        for &k in &self.by_size {
            let (x, y) = self.pairs[k];
            let d = f[self.index[&(x, x)]] as u64;
            if d == 0 {
                return None;
            }
            let dinv = pow_mod(d, p - 2, p);
            if x == y {
                g[k] = dinv as u32;
                continue;
            }
            // g(x,y) = −f(x,x)⁻¹ Σ_{x<z≤y} f(x,z) g(z,y)
            let mut s = 0u64;
            for z in 0..self.poset.len() {
                if z != x && self.poset.leq(x, z) && self.poset.leq(z, y) {
                    s += f[self.index[&(x, z)]] as u64 * g[self.index[&(z, y)]] as u64 % p;
                }
            }
            g[k] = ((p - s % p) % p * dinv % p) as u32;
        }
        Some(g)
    }

    /// `[f; m]⁻¹ = [f⁻¹; −f⁻¹ m f⁻¹]`.
    pub fn d_inverse(&self, a: &[u32]) -> Option<Vec<u32>> {
        let n = self.dim();
        let finv = self.fi_inverse(&a[..n])?;
        let t = self.fi_mul(&self.fi_mul(&finv, &a[n..]), &finv);
        let mut out = finv;
        out.extend(t.iter().map(|&v| (self.p - v) % self.p));
        Some(out)
    }

    pub fn unity(&self, ring: Ring) -> Vec<u32> {
        let mut v: Vec<u32> = self.pairs.iter().map(|&(x, y)| (x == y) as u32).collect();
        if ring == Ring::D {
            v.extend(std::iter::repeat_n(0, self.dim()));
        }
        v
    }

    pub fn basis(&self, ring: Ring, j: usize) -> Vec<u32> {
        let len = if ring == Ring::D { 2 * self.dim() } else { self.dim() };
        let mut v = vec![0; len];
        v[j] = 1;
        v
    }

    fn ring_len(&self, ring: Ring) -> usize {
        if ring == Ring::D {
            2 * self.dim()
        } else {
            self.dim()
        }
    }

    fn count(&self, ring: Ring, units_only: bool) -> u128 {
        let p = self.p as u128;
        let diag = self.poset.len() as u32;
        let off = (self.dim() - self.poset.len()) as u32;
        let fi = if units_only { (p - 1).pow(diag) } else { p.pow(diag) } * p.pow(off);
        if ring == Ring::D {
            fi * p.pow(self.dim() as u32)
        } else {
            fi
        }
    }

    /// Lazily enumerates every element (or every unit) of the ring in odometer order.
    pub fn enumerate(&self, ring: Ring, units_only: bool, limit: u64) -> Result<Odometer> {
        let total = self.count(ring, units_only);
        if total > limit as u128 {
            return Err(Error::SizeLimit(format!("{total} elements exceed the limit {limit}")));
        }
        let len = self.ring_len(ring);
        let low: Vec<u32> =
            (0..len).map(|j| (units_only && j < self.dim() && self.pairs[j].0 == self.pairs[j].1) as u32).collect();
        Ok(Odometer { p: self.p, low: low.clone(), cur: Some(low) })
    }

    /// All units of FI or D.
    pub fn enumerate_units(&self, ring: Ring, limit: u64) -> Result<Odometer> {
        self.enumerate(ring, true, limit)
    }

    /// `ρ_λ(f)(x, y) = f(λ⁻¹y, λ⁻¹x)`.
    pub fn rho_fi(&self, lambda: &PosetMap, f: &[u32]) -> Vec<u32> {
        let inv = lambda.inverse();
        self.pairs.iter().map(|&(x, y)| f[self.index[&(inv.apply(y), inv.apply(x))]]).collect()
    }

    /// `(ρ̃_λ ∘ (kδ)~)[f; i] = [ρ_λ f; k ρ_λ i]`.
    pub fn rho_d(&self, lambda: &PosetMap, k: i8, a: &[u32]) -> Vec<u32> {
        let n = self.dim();
        let mut out = self.rho_fi(lambda, &a[..n]);
        let i = self.rho_fi(lambda, &a[n..]);
        out.extend(i.iter().map(|&v| if k < 0 { (self.p - v) % self.p } else { v }));
        out
    }

    pub fn rho_matrix(&self, lambda: &PosetMap, k: i8) -> ModMatrix {
        let cols: Vec<Vec<u32>> = (0..2 * self.dim()).map(|j| self.rho_d(lambda, k, &self.basis(Ring::D, j))).collect();
        ModMatrix::from_columns(self.p, &cols)
    }

    /// Matrix of `Ψ_θ(a) = θ a θ⁻¹` on D.
    pub fn inner_matrix(&self, theta: &[u32]) -> Option<ModMatrix> {
        let inv = self.d_inverse(theta)?;
        let cols: Vec<Vec<u32>> =
            (0..2 * self.dim()).map(|j| self.d_mul(&self.d_mul(theta, &self.basis(Ring::D, j)), &inv)).collect();
        Some(ModMatrix::from_columns(self.p, &cols))
    }

    /// Unit generators of U(D): diagonal scalings by a generator of 𝔽_p*,
    /// elementary `δ + e_xy` for `x < y`, and `[δ; e_xy]` for every pair.
    pub fn unit_generators(&self) -> Vec<Vec<u32>> {
        let n = self.dim();
        let g = primitive_root(self.p);
        let one = self.unity(Ring::D);
        let mut gens = Vec::new();
        for (k, &(x, y)) in self.pairs.iter().enumerate() {
            let mut v = one.clone();
            if x == y {
                if g == 1 {
                    continue;
                }
                v[k] = g;
            } else {
                v[k] = 1;
            }
            gens.push(v);
        }
        for k in 0..n {
            let mut v = one.clone();
            v[n + k] = 1;
            gens.push(v);
        }
        gens
    }

    /// Every K-linear involution `Ψ_θ ∘ ρ̃_λ ∘ (kδ)~` over all units `θ`, all
    /// poset involutions `λ` and `k = ±1`, deduplicated and sorted.
    pub fn enumerate_involutions_d(&self, limit: u64) -> Result<Vec<ModMatrix>> {
        let lambdas = self.poset.involutions()?;
        let bases: Vec<ModMatrix> = lambdas.iter().flat_map(|l| [1i8, -1].map(|k| self.rho_matrix(l, k))).collect();
        let mut seen = HashSet::new();
        for theta in self.enumerate_units(Ring::D, limit)? {
            let psi = self.inner_matrix(&theta).expect("enumerated unit");
            for b in &bases {
                let m = psi.mul(b);
                if m.mul(&m).is_identity() {
                    seen.insert(m);
                }
            }
        }
        let mut out: Vec<ModMatrix> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    /// Elements of D commuting with every basis element, by exhaustion.
    pub fn center_bruteforce(&self, limit: u64) -> Result<Vec<Vec<u32>>> {
        let basis: Vec<Vec<u32>> = (0..2 * self.dim()).map(|j| self.basis(Ring::D, j)).collect();
        Ok(self
            .enumerate(Ring::D, false, limit)?
            .filter(|a| basis.iter().all(|b| self.d_mul(a, b) == self.d_mul(b, a)))
            .collect())
    }

    /// Units `θ` of D with `(ρ̃_λ ∘ (kδ)~)(θ) = −θ`, by exhaustion.
    pub fn negated_units(&self, lambda: &PosetMap, k: i8, limit: u64) -> Result<Vec<Vec<u32>>> {
        let p = self.p;
        Ok(self
            .enumerate_units(Ring::D, limit)?
            .filter(|t| {
                let r = self.rho_d(lambda, k, t);
                r.iter().zip(t).all(|(a, b)| (a + b) % p == 0)
            })
            .collect())
    }

    /// The eigenvalue of an involution matrix on `[0; δ]`, if it is `±1`.
    pub fn sign_of(&self, m: &ModMatrix) -> Option<i8> {
        let n = self.dim();
        let mut v = vec![0; 2 * n];
        for (k, &(x, y)) in self.pairs.iter().enumerate() {
            v[n + k] = (x == y) as u32;
        }
        let img = m.apply(&v);
        if img == v {
            Some(1)
        } else if img.iter().zip(&v).all(|(a, b)| (a + b) % self.p == 0) {
            Some(-1)
        } else {
            None
        }
    }

    pub fn from_delem(&self, a: &DElem) -> Vec<u32> {
        a.to_vec().iter().map(|s| s.residue().expect("prime field") as u32).collect()
    }

    pub fn to_scalars(&self, v: &[u32]) -> Vec<Scalar> {
        let f = Field::Prime(self.p as u64);
        v.iter().map(|&x| f.from_i64(x as i64)).collect()
    }
}

fn primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let p64 = p as u64;
    let mut m = p64 - 1;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            primes.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        primes.push(m);
    }
    (2..p64).find(|&g| primes.iter().all(|&q| pow_mod(g, (p64 - 1) / q, p64) != 1)).expect("prime has a primitive root")
        as u32
}

/// Odometer over coordinate vectors; diagonal FI coordinates start at 1
/// when only units are wanted.
pub struct Odometer {
    p: u32,
    low: Vec<u32>,
    cur: Option<Vec<u32>>,
}

impl Iterator for Odometer {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.cur.clone()?;
        let cur = self.cur.as_mut().expect("present");
        let mut j = 0;
        loop {
            if j == cur.len() {
                self.cur = None;
                break;
            }
            cur[j] += 1;
            if cur[j] < self.p {
                break;
            }
            cur[j] = self.low[j];
            j += 1;
        }
        Some(out)
    }
}

/// Orbits of `items` under `x ↦ P x P⁻¹` for the given conjugators, blocks
/// sorted by their smallest index. Errors if the items are not closed under
/// the action.
pub fn orbit_partition(items: &[ModMatrix], conjugators: &[ModMatrix]) -> Result<Vec<Vec<usize>>> {
    let index: HashMap<&ModMatrix, usize> = items.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parent: Vec<usize> = (0..items.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for c in conjugators {
        let cinv = c.inverse().ok_or_else(|| Error::NotAUnit("conjugator matrix".into()))?;
        for (i, m) in items.iter().enumerate() {
            let img = c.mul(m).mul(&cinv);
            let j = *index
                .get(&img)
                .ok_or_else(|| Error::DomainMismatch("items are not closed under conjugation".into()))?;
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for i in 0..items.len() {
        let r = find(&mut parent, i);
        let s = *slot.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[s].push(i);
    }
    Ok(blocks)
}

/// Position of the block containing `m`, if any.
pub fn block_of(items: &[ModMatrix], blocks: &[Vec<usize>], m: &ModMatrix) -> Option<usize> {
    let i = items.iter().position(|x| x == m)?;
    blocks.iter().position(|b| b.contains(&i))
}
