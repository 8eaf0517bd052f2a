//! Finite posets, their (anti-)automorphisms, and λ-decompositions.
//!
//! Elements are indexed `0..n` in the user-supplied order. Every matrix and
//! incidence function downstream indexes comparable pairs `(x, y)`, `x ≤ y`,
//! in lexicographic order over that element order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Largest poset on which the exhaustive symmetry searches run.
pub const SEARCH_LIMIT: usize = 12;

#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<bool>,
    covers: Vec<(usize, usize)>,
    intervals: Vec<(usize, usize)>,
    interval_index: Vec<Option<usize>>,
}

impl PartialEq for Poset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.leq == other.leq
    }
}

impl Eq for Poset {}

impl Poset {
    /// Builds a poset from labels and (not necessarily reduced) cover pairs.
    pub fn from_covers<S: AsRef<str>>(elements: &[S], covers: &[(S, S)]) -> Result<Poset> {
        let mut index = HashMap::new();
        for (i, l) in elements.iter().enumerate() {
            if index.insert(l.as_ref().to_string(), i).is_some() {
                return Err(Error::DuplicateLabel(l.as_ref().to_string()));
            }
        }
        let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownLabel(s.as_ref().to_string()));
        let pairs = covers.iter().map(|(a, b)| Ok((lookup(a)?, lookup(b)?))).collect::<Result<Vec<_>>>()?;
        let labels = elements.iter().map(|s| s.as_ref().to_string()).collect();
        Poset::from_relation(labels, &pairs)
    }

    /// Builds a poset on `labels` from index pairs `(x, y)` meaning `x ≤ y`.
    pub fn from_relation(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Poset> {
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for x in 0..n {
            leq[x * n + x] = true;
        }
        for &(a, b) in pairs {
            if a == b {
                return Err(Error::CycleDetected(labels[a].clone()));
            }
            leq[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected(labels[i].clone()));
                }
            }
        }
        let mut covers = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x * n + y] && !(0..n).any(|z| z != x && z != y && leq[x * n + z] && leq[z * n + y]) {
                    covers.push((x, y));
                }
            }
        }
        let mut intervals = Vec::new();
        let mut interval_index = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if leq[x * n + y] {
                    interval_index[x * n + y] = Some(intervals.len());
                    intervals.push((x, y));
                }
            }
        }
        Ok(Poset { labels, leq, covers, intervals, interval_index })
    }

    /// Parses the line format: one `a<b` relation per line; a bare label
    /// declares an element. Blank lines and `#` comments are skipped.
    pub fn parse_lines(text: &str) -> Result<Poset> {
        let mut elements: Vec<String> = Vec::new();
        let mut covers = Vec::new();
        let add = |l: &str, elements: &mut Vec<String>| {
            if !elements.iter().any(|e| e == l) {
                elements.push(l.to_string());
            }
        };
        for raw in text.lines() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            match line.split_once('<') {
                Some((a, b)) => {
                    let (a, b) = (a.trim(), b.trim());
                    if a.is_empty() || b.is_empty() {
                        return Err(Error::Parse(format!("bad relation line {raw:?}")));
                    }
                    add(a, &mut elements);
                    add(b, &mut elements);
                    covers.push((a.to_string(), b.to_string()));
                }
                None => add(line, &mut elements),
            }
        }
        Poset::from_covers(&elements, &covers)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels.iter().position(|l| l == label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.leq[x * self.len() + y]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// Hasse diagram edges `(x, y)` with `x ⋖ y`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Comparable pairs in canonical (lexicographic) order.
    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn interval_count(&self) -> usize {
        self.intervals.len()
    }

    #[inline]
    pub fn interval_index(&self, x: usize, y: usize) -> Option<usize> {
        self.interval_index[x * self.len() + y]
    }

    /// Elements `z` with `x ≤ z ≤ y`.
    pub fn interval_elements(&self, x: usize, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&z| self.leq(x, z) && self.leq(z, y))
    }

    pub fn down_size(&self, x: usize) -> usize {
        (0..self.len()).filter(|&y| self.leq(y, x)).count()
    }

    pub fn up_size(&self, x: usize) -> usize {
        (0..self.len()).filter(|&y| self.leq(x, y)).count()
    }

    /// A linear extension: `x < y` implies `x` comes first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down_size(x), x));
        order
    }

    /// Connected-component id per element, numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            comp[s] = next;
            while let Some(x) = stack.pop() {
                for y in 0..n {
                    if comp[y] == usize::MAX && self.comparable(x, y) {
                        comp[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Connectivity of the comparability graph (the empty poset counts as connected).
    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// Elements comparable with every element.
    pub fn all_comparable_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| self.comparable(x, y))).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| (0..self.len()).all(|y| !self.lt(y, x))).collect()
    }

    pub fn automorphisms(&self) -> Result<Vec<PosetMap>> {
        Ok(search_maps(self, self, MapKind::Automorphism, false)?
            .into_iter()
            .map(|images| PosetMap { images, kind: MapKind::Automorphism })
            .collect())
    }

    pub fn anti_automorphisms(&self) -> Result<Vec<PosetMap>> {
        Ok(search_maps(self, self, MapKind::AntiAutomorphism, false)?
            .into_iter()
            .map(|images| PosetMap { images, kind: MapKind::AntiAutomorphism })
            .collect())
    }

    pub fn involutions(&self) -> Result<Vec<PosetMap>> {
        Ok(self.anti_automorphisms()?.into_iter().filter(PosetMap::is_involution).collect())
    }

    /// Reverses the order, keeping labels.
    pub fn dual(&self) -> Poset {
        let pairs: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
        Poset::from_relation(self.labels.clone(), &pairs).expect("dual of a poset is a poset")
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> =
            self.covers.iter().map(|&(a, b)| format!("{}<{}", self.labels[a], self.labels[b])).collect();
        write!(f, "{{{}}} [{}]", self.labels.join(","), covers.join(", "))
    }
}

/// Anti-isomorphisms `X → Y` as image vectors; the first one only when `first_only`.
pub fn anti_isomorphisms(x: &Poset, y: &Poset, first_only: bool) -> Result<Vec<Vec<usize>>> {
    search_maps(x, y, MapKind::AntiAutomorphism, first_only)
}

fn search_maps(src: &Poset, dst: &Poset, kind: MapKind, first_only: bool) -> Result<Vec<Vec<usize>>> {
    let n = src.len();
    if n > SEARCH_LIMIT || dst.len() > SEARCH_LIMIT {
        return Err(Error::SizeLimit(format!("symmetry search supports at most {SEARCH_LIMIT} elements")));
    }
    if n != dst.len() || src.interval_count() != dst.interval_count() {
        return Ok(Vec::new());
    }
    let anti = kind == MapKind::AntiAutomorphism;
    let sig_src: Vec<(usize, usize)> = (0..n).map(|x| (src.down_size(x), src.up_size(x))).collect();
    let sig_dst: Vec<(usize, usize)> = (0..n)
        .map(|y| if anti { (dst.up_size(y), dst.down_size(y)) } else { (dst.down_size(y), dst.up_size(y)) })
        .collect();

    struct Search<'a> {
        src: &'a Poset,
        dst: &'a Poset,
        anti: bool,
        sig_src: Vec<(usize, usize)>,
        sig_dst: Vec<(usize, usize)>,
        images: Vec<usize>,
        used: Vec<bool>,
        out: Vec<Vec<usize>>,
        first_only: bool,
    }

    impl Search<'_> {
        fn rel(&self, a: usize, b: usize) -> bool {
            let (ia, ib) = (self.images[a], self.images[b]);
            if self.anti {
                self.dst.leq(ib, ia)
            } else {
                self.dst.leq(ia, ib)
            }
        }

        fn go(&mut self, x: usize) -> bool {
            let n = self.src.len();
            if x == n {
                self.out.push(self.images.clone());
                return self.first_only;
            }
            for y in 0..n {
                if self.used[y] || self.sig_src[x] != self.sig_dst[y] {
                    continue;
                }
                self.images[x] = y;
                let consistent =
                    (0..x).all(|w| self.src.leq(w, x) == self.rel(w, x) && self.src.leq(x, w) == self.rel(x, w));
                if consistent {
                    self.used[y] = true;
                    let stop = self.go(x + 1);
                    self.used[y] = false;
                    if stop {
                        return true;
                    }
                }
            }
            false
        }
    }

    let mut s = Search {
        src,
        dst,
        anti,
        sig_src,
        sig_dst,
        images: vec![0; n],
        used: vec![false; n],
        out: Vec::new(),
        first_only,
    };
    s.go(0);
    Ok(s.out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapKind {
    Automorphism,
    AntiAutomorphism,
}

/// A bijection of the element set that preserves or reverses the order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PosetMap {
    images: Vec<usize>,
    kind: MapKind,
}

impl PosetMap {
    /// Wraps an image vector after checking it against `poset`.
    pub fn new(poset: &Poset, images: Vec<usize>, kind: MapKind) -> Result<PosetMap> {
        let m = PosetMap { images, kind };
        if !m.is_valid_on(poset) {
            return Err(Error::NotAMorphism(format!(
                "{:?} is not an order-{} bijection",
                m.images,
                if kind == MapKind::Automorphism { "preserving" } else { "reversing" }
            )));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> PosetMap {
        PosetMap { images: (0..n).collect(), kind: MapKind::Automorphism }
    }

    /// Reads `{"x": "y", ...}` over labels; unmapped elements are an error.
    pub fn from_labels(poset: &Poset, map: &BTreeMap<String, String>, kind: MapKind) -> Result<PosetMap> {
        let mut images = vec![usize::MAX; poset.len()];
        for (a, b) in map {
            images[poset.index_of(a)?] = poset.index_of(b)?;
        }
        if let Some(x) = images.iter().position(|&i| i == usize::MAX) {
            return Err(Error::Parse(format!("map leaves {} unassigned", poset.label(x))));
        }
        PosetMap::new(poset, images, kind)
    }

    pub fn to_labels(&self, poset: &Poset) -> BTreeMap<String, String> {
        self.images.iter().enumerate().map(|(x, &y)| (poset.label(x).to_string(), poset.label(y).to_string())).collect()
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn is_anti(&self) -> bool {
        self.kind == MapKind::AntiAutomorphism
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn inverse(&self) -> PosetMap {
        let mut inv = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y] = x;
        }
        PosetMap { images: inv, kind: self.kind }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PosetMap) -> PosetMap {
        let kind = if self.is_anti() != other.is_anti() { MapKind::AntiAutomorphism } else { MapKind::Automorphism };
        PosetMap { images: other.images.iter().map(|&x| self.images[x]).collect(), kind }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// An anti-automorphism of order 2.
    pub fn is_involution(&self) -> bool {
        self.is_anti() && self.images.iter().enumerate().all(|(x, &y)| self.images[y] == x)
    }

    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| self.images[x] == x).collect()
    }

    /// Checks bijectivity and the defining order equivalence on all pairs.
    pub fn is_valid_on(&self, poset: &Poset) -> bool {
        let n = poset.len();
        if self.images.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &y in &self.images {
            if y >= n || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..n).all(|x| {
            (0..n).all(|y| {
                let (a, b) = (self.images[x], self.images[y]);
                poset.leq(x, y) == if self.is_anti() { poset.leq(b, a) } else { poset.leq(a, b) }
            })
        })
    }
}

/// Which part of a λ-decomposition an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Part {
    X1,
    X2,
    X3,
}

/// `(X₁, X₂, X₃)`: X₃ the fixed points of λ, λ(X₁) = X₂, X₁ down-closed, X₂ up-closed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaDecomposition {
    parts: Vec<Part>,
}

impl LambdaDecomposition {
    pub fn part(&self, x: usize) -> Part {
        self.parts[x]
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    fn members(&self, p: Part) -> Vec<usize> {
        (0..self.parts.len()).filter(|&x| self.parts[x] == p).collect()
    }

    pub fn x1(&self) -> Vec<usize> {
        self.members(Part::X1)
    }

    pub fn x2(&self) -> Vec<usize> {
        self.members(Part::X2)
    }

    pub fn x3(&self) -> Vec<usize> {
        self.members(Part::X3)
    }

    /// Checks the three defining conditions against `poset` and `lambda`.
    pub fn is_valid_for(&self, poset: &Poset, lambda: &PosetMap) -> bool {
        let n = poset.len();
        (0..n).all(|x| {
            let fixed = lambda.apply(x) == x;
            let part_ok = match self.parts[x] {
                Part::X3 => fixed,
                Part::X1 => !fixed && self.parts[lambda.apply(x)] == Part::X2,
                Part::X2 => !fixed && self.parts[lambda.apply(x)] == Part::X1,
            };
            let closure_ok = (0..n).all(|y| match self.parts[x] {
                Part::X1 => !poset.leq(y, x) || self.parts[y] == Part::X1,
                Part::X2 => !poset.leq(x, y) || self.parts[y] == Part::X2,
                Part::X3 => true,
            });
            part_ok && closure_ok
        })
    }
}

/// The canonical λ-decomposition: λ-orbits are assigned in order of their
/// smallest element, trying that element in X₁ first, with backtracking.
pub fn lambda_decomposition(poset: &Poset, lambda: &PosetMap) -> Result<LambdaDecomposition> {
    if !lambda.is_involution() || !lambda.is_valid_on(poset) {
        return Err(Error::NotAnInvolution("lambda is not an involution on the poset".into()));
    }
    let n = poset.len();
    let mut parts: Vec<Option<Part>> = (0..n).map(|x| (lambda.apply(x) == x).then_some(Part::X3)).collect();
    let orbits: Vec<(usize, usize)> = (0..n).filter(|&x| lambda.apply(x) > x).map(|x| (x, lambda.apply(x))).collect();

    fn consistent(poset: &Poset, parts: &[Option<Part>]) -> bool {
        let n = poset.len();
        (0..n).all(|x| match parts[x] {
            Some(Part::X1) => (0..n).all(|y| !poset.leq(y, x) || matches!(parts[y], Some(Part::X1) | None)),
            Some(Part::X2) => (0..n).all(|y| !poset.leq(x, y) || matches!(parts[y], Some(Part::X2) | None)),
            _ => true,
        })
    }

    fn assign(poset: &Poset, orbits: &[(usize, usize)], k: usize, parts: &mut Vec<Option<Part>>) -> bool {
        if k == orbits.len() {
            return true;
        }
        let (a, b) = orbits[k];
        for (lo, hi) in [(a, b), (b, a)] {
            parts[lo] = Some(Part::X1);
            parts[hi] = Some(Part::X2);
            if consistent(poset, parts) && assign(poset, orbits, k + 1, parts) {
                return true;
            }
        }
        parts[a] = None;
        parts[b] = None;
        false
    }

    if !assign(poset, &orbits, 0, &mut parts) {
        return Err(Error::NoDecomposition);
    }
    Ok(LambdaDecomposition { parts: parts.into_iter().map(Option::unwrap).collect() })
}

/// Small named posets used throughout tests, docs and the CLI fixtures.
pub mod catalog {
    use super::Poset;

    fn build(elements: &[&str], covers: &[(&str, &str)]) -> Poset {
        Poset::from_covers(elements, covers).expect("catalog poset")
    }

    /// The chain `a < b < c < …` on `n ≤ 26` elements.
    pub fn chain(n: usize) -> Poset {
        let labels: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_relation(labels, &pairs).expect("chain")
    }

    pub fn antichain(n: usize) -> Poset {
        let labels: Vec<String> = (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        Poset::from_relation(labels, &[]).expect("antichain")
    }

    /// `0 < a, b < 1`.
    pub fn diamond() -> Poset {
        build(&["0", "a", "b", "1"], &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    }

    /// `a < b`, `a < c`.
    pub fn v_poset() -> Poset {
        build(&["a", "b", "c"], &[("a", "b"), ("a", "c")])
    }

    /// `b < a`, `c < a`.
    pub fn lambda_poset() -> Poset {
        build(&["a", "b", "c"], &[("b", "a"), ("c", "a")])
    }

    /// The fence `a < c > b < d`: connected, no all-comparable element.
    pub fn fence_x1() -> Poset {
        build(&["a", "b", "c", "d"], &[("a", "c"), ("b", "c"), ("b", "d")])
    }

    /// The crown `a, b < c, d`, whose order complex is a circle.
    pub fn crown_x2() -> Poset {
        build(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    }

    /// Two disjoint chains of lengths `m` and `n`.
    pub fn two_chains(m: usize, n: usize) -> Poset {
        let labels: Vec<String> = (0..m).map(|i| format!("p{i}")).chain((0..n).map(|i| format!("q{i}"))).collect();
        let pairs: Vec<(usize, usize)> = (1..m).map(|i| (i - 1, i)).chain((1..n).map(|i| (m + i - 1, m + i))).collect();
        Poset::from_relation(labels, &pairs).expect("two chains")
    }
}
