//! Exact field arithmetic over the rationals and prime fields, with square
//! classes `K* / (K*)^2`.
//!
//! Scalars are tagged values; mixing scalars from different fields in one
//! operation is a programming error and panics. Containers higher up
//! (incidence functions, idealization elements) check their contexts and
//! report [`Error::ContextMismatch`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Largest numerator/denominator magnitude accepted by [`square_class`] over ℚ.
pub const FACTORIZATION_BOUND: u64 = 1_000_000_000_000;

/// Prime moduli are kept below 2^32 so products fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// The ground field K.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        if p > MAX_PRIME {
            return Err(Error::SizeLimit(format!("modulus {p} exceeds {MAX_PRIME}")));
        }
        Ok(Field::Prime(p))
    }

    /// Characteristic of the field (0 for ℚ).
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_char2(&self) -> bool {
        self.characteristic() == 2
    }

    /// Number of elements, `None` for ℚ.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p),
        }
    }

    /// `|S_K|`: 1 for 𝔽₂, 2 for odd 𝔽_p, `None` (countably infinite) for ℚ.
    pub fn square_class_count(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(2) => Some(1),
            Field::Prime(_) => Some(2),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            Field::Rationals => Scalar::Q(Box::new(BigRational::from_integer(BigInt::from(n)))),
            Field::Prime(p) => {
                let p = *p as i64;
                Scalar::F { v: n.rem_euclid(p) as u64, p: p as u64 }
            }
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den).inv().ok_or(Error::ZeroArgument)?;
        Ok(&self.from_i64(num) * &d)
    }

    /// Parses `a/b` or an integer (ℚ), or an integer reduced mod p (𝔽_p).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => {
                (a.trim().parse::<BigInt>().map_err(|_| bad())?, b.trim().parse::<BigInt>().map_err(|_| bad())?)
            }
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        match self {
            Field::Rationals => {
                if den.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Q(Box::new(BigRational::new(num, den))))
            }
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let reduce = |n: &BigInt| n.mod_floor(&pb).to_u64().unwrap();
                let n = Scalar::F { v: reduce(&num), p: *p };
                let d = Scalar::F { v: reduce(&den), p: *p };
                let dinv = d.inv().ok_or_else(bad)?;
                Ok(&n * &dinv)
            }
        }
    }

    /// All field elements in residue order; `None` for ℚ.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some((0..*p).map(|v| Scalar::F { v, p: *p }).collect()),
        }
    }

    /// The smallest non-square residue of an odd prime field.
    pub fn nonresidue(&self) -> Option<Scalar> {
        match self {
            Field::Prime(p) if *p > 2 => (2..*p).map(|v| Scalar::F { v, p: *p }).find(|s| !is_square_residue(s)),
            _ => None,
        }
    }

    /// A generator of the cyclic group 𝔽_p^*; `None` for ℚ.
    pub fn multiplicative_generator(&self) -> Option<Scalar> {
        let Field::Prime(p) = *self else { return None };
        if p == 2 {
            return Some(self.one());
        }
        let n = p - 1;
        let mut factors = Vec::new();
        let mut m = n;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                factors.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..p).map(|g| Scalar::F { v: g, p }).find(|g| factors.iter().all(|q| !g.pow(n / q).is_one()))
    }

    /// A uniformly random element (ℚ: small numerators and denominators).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        match self {
            Field::Rationals => {
                let n = rng.gen_range(-6i64..=6);
                let d = rng.gen_range(1i64..=4);
                self.from_ratio(n, d).unwrap()
            }
            Field::Prime(p) => Scalar::F { v: rng.gen_range(0..*p), p: *p },
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        loop {
            let s = self.random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|r| r.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("bad field spec {s:?}, expected Q or F<p>")))?;
        Field::prime(p)
    }
}

/// An exact field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Box<BigRational>),
    F { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rationals,
            Scalar::F { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::F { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::F { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(r) => Scalar::Q(Box::new(r.recip())),
            Scalar::F { v, p } => Scalar::F { v: pow_mod(*v, p - 2, *p), p: *p },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Residue value for prime-field scalars.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::F { v, .. } => Some(*v),
            Scalar::Q(_) => None,
        }
    }

    /// Square root in K if one exists. Over 𝔽_p the smaller residue is returned.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Q(r) => {
                if r.is_negative() {
                    return None;
                }
                let n = r.numer().sqrt();
                let d = r.denom().sqrt();
                (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| Scalar::Q(Box::new(BigRational::new(n, d))))
            }
            Scalar::F { v, p } => {
                // exhaustive scan, fine for desk-scale moduli
                (0..*p).find(|r| (r * r) % p == *v).map(|r| Scalar::F { v: r, p: *p })
            }
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn is_square_residue(s: &Scalar) -> bool {
    match s {
        Scalar::F { v, p } => *p == 2 || *v == 0 || pow_mod(*v, (p - 1) / 2, *p) == 1,
        Scalar::Q(_) => unreachable!(),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::F { v, .. } => write!(f, "{v}"),
        }
    }
}

fn field_mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() + b.as_ref())),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F { v: (a + b) % p, p: *p },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() - b.as_ref())),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F { v: (a + p - b) % p, p: *p },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(Box::new(a.as_ref() * b.as_ref())),
            (Scalar::F { v: a, p }, Scalar::F { v: b, p: q }) if p == q => Scalar::F { v: a * b % p, p: *p },
            _ => field_mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(Box::new(-a.as_ref())),
            Scalar::F { v, p } => Scalar::F { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// An element of the square-class group `S_K = K*/(K*)^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SquareClass {
    /// Prime field: square or non-square.
    Residue { nonsquare: bool, p: u64 },
    /// ℚ: the signed squarefree integer representing the class.
    Rational(BigInt),
}

impl SquareClass {
    pub fn identity(field: Field) -> SquareClass {
        match field {
            Field::Rationals => SquareClass::Rational(BigInt::one()),
            Field::Prime(p) => SquareClass::Residue { nonsquare: false, p },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            SquareClass::Residue { nonsquare, .. } => !nonsquare,
            SquareClass::Rational(n) => n.is_one(),
        }
    }

    /// Group product; every class is its own inverse, so this also divides.
    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        match (self, other) {
            (SquareClass::Residue { nonsquare: a, p }, SquareClass::Residue { nonsquare: b, p: q }) if p == q => {
                SquareClass::Residue { nonsquare: a ^ b, p: *p }
            }
            (SquareClass::Rational(a), SquareClass::Rational(b)) => {
                let g = a.gcd(b);
                let sign = if a.is_negative() ^ b.is_negative() { -1 } else { 1 };
                SquareClass::Rational(BigInt::from(sign) * (a.abs() / &g) * (b.abs() / &g))
            }
            _ => panic!("square classes from different fields"),
        }
    }

    /// A scalar whose class is `self`.
    pub fn representative(&self) -> Scalar {
        match self {
            SquareClass::Residue { nonsquare: false, p } => Field::Prime(*p).one(),
            SquareClass::Residue { nonsquare: true, p } => {
                Field::Prime(*p).nonresidue().expect("odd prime has a non-residue")
            }
            SquareClass::Rational(n) => Scalar::Q(Box::new(BigRational::from_integer(n.clone()))),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Residue { nonsquare: false, .. } => write!(f, "square"),
            SquareClass::Residue { nonsquare: true, .. } => write!(f, "nonsquare"),
            SquareClass::Rational(n) => write!(f, "{n}"),
        }
    }
}

fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    let mag = n.abs();
    let small =
        mag.to_u64().filter(|m| *m <= FACTORIZATION_BOUND).ok_or_else(|| Error::FactorizationBound(mag.to_string()))?;
    let mut m = small;
    let mut out = 1u64;
    let mut d = 2u64;
    while d * d <= m {
        let mut e = 0;
        while m % d == 0 {
            m /= d;
            e += 1;
        }
        if e % 2 == 1 {
            out *= d;
        }
        d += 1;
    }
    out *= m;
    Ok(BigInt::from(out))
}

/// The canonical image π(k) of a nonzero scalar in `S_K`.
pub fn square_class(k: &Scalar) -> Result<SquareClass> {
    if k.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match k {
        Scalar::F { p, .. } => Ok(SquareClass::Residue { nonsquare: !is_square_residue(k), p: *p }),
        Scalar::Q(r) => {
            // n/d and n*d share a class; coprime squarefree parts multiply to a squarefree integer
            let n = squarefree_part(r.numer())?;
            let d = squarefree_part(r.denom())?;
            let sign = if r.is_negative() { -1 } else { 1 };
            Ok(SquareClass::Rational(BigInt::from(sign) * n * d))
        }
    }
}

/// True iff some `g ∈ S_K` satisfies `g·χ₁(x) = χ₂(x)` for every x.
pub fn class_eq_up_to_shift(chi1: &[SquareClass], chi2: &[SquareClass]) -> Result<bool> {
    if chi1.len() != chi2.len() {
        return Err(Error::DomainMismatch(format!("class maps on {} and {} points", chi1.len(), chi2.len())));
    }
    let mut ratios = chi1.iter().zip(chi2).map(|(a, b)| a.mul(b));
    Ok(match ratios.next() {
        None => true,
        Some(first) => ratios.all(|r| r == first),
    })
}

/// Shifts a class tuple so its first entry is the identity class.
pub fn normalize_classes(chi: &[SquareClass]) -> Vec<SquareClass> {
    match chi.first() {
        None => Vec::new(),
        Some(first) => chi.iter().map(|c| c.mul(first)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
        assert_eq!("F5".parse::<Field>().unwrap(), Field::Prime(5));
        assert!("F6".parse::<Field>().is_err());
        assert!("G5".parse::<Field>().is_err());
        assert_eq!(f(2).square_class_count(), Some(1));
        assert_eq!(f(7).square_class_count(), Some(2));
        assert_eq!(Field::Rationals.square_class_count(), None);
        assert!(f(2).is_char2());
    }

    #[test]
    fn scalar_parsing_is_canonical() {
        let q = Field::Rationals;
        assert_eq!(q.parse_scalar("6/-4").unwrap(), q.from_ratio(-3, 2).unwrap());
        assert_eq!(q.parse_scalar("-3/2").unwrap().to_string(), "-3/2");
        let f5 = f(5);
        assert_eq!(f5.parse_scalar("-1").unwrap(), f5.from_i64(4));
        assert_eq!(f5.parse_scalar("1/2").unwrap(), f5.from_i64(3));
        assert!(f5.parse_scalar("1/5").is_err());
        assert!(q.parse_scalar("x").is_err());
    }

    #[test]
    fn square_class_examples() {
        let f5 = f(5);
        assert!(square_class(&f5.from_i64(4)).unwrap().is_identity());
        // squares mod 5 are {1, 4}
        let sq: Vec<u64> = (1..5).map(|r| r * r % 5).collect();
        assert!(!sq.contains(&2));
        assert!(!square_class(&f5.from_i64(2)).unwrap().is_identity());
        let q = Field::Rationals;
        assert_eq!(square_class(&q.from_i64(8)).unwrap(), SquareClass::Rational(BigInt::from(2)));
        assert_eq!(square_class(&q.from_ratio(-3, 12).unwrap()).unwrap(), SquareClass::Rational(BigInt::from(-1)));
        assert_eq!(square_class(&f5.zero()), Err(Error::ZeroArgument));
    }

    #[test]
    fn factorization_bound_is_enforced() {
        let q = Field::Rationals;
        let big = q.parse_scalar("10000000000000001").unwrap();
        assert!(matches!(square_class(&big), Err(Error::FactorizationBound(_))));
    }

    #[test]
    fn sqrt_examples() {
        let q = Field::Rationals;
        assert_eq!(q.from_ratio(9, 4).unwrap().sqrt(), Some(q.from_ratio(3, 2).unwrap()));
        assert_eq!(q.from_i64(2).sqrt(), None);
        assert_eq!(q.from_i64(-4).sqrt(), None);
        assert_eq!(f(5).from_i64(4).sqrt(), Some(f(5).from_i64(2)));
        // squares mod 7 are {1, 2, 4}
        assert_eq!(f(7).from_i64(3).sqrt(), None);
        assert_eq!(f(7).from_i64(2).sqrt(), Some(f(7).from_i64(3)));
    }

    #[test]
    fn shift_equality_examples() {
        let f5 = f(5);
        let id = SquareClass::identity(f5);
        let ns = square_class(&f5.from_i64(2)).unwrap();
        assert!(class_eq_up_to_shift(&[id.clone(), id.clone()], &[ns.clone(), ns.clone()]).unwrap());
        assert!(!class_eq_up_to_shift(&[id.clone(), id.clone()], &[id.clone(), ns.clone()]).unwrap());
        let q = |n: i64| SquareClass::Rational(BigInt::from(n));
        assert!(class_eq_up_to_shift(&[q(2), q(3)], &[q(10), q(15)]).unwrap());
        assert!(!class_eq_up_to_shift(&[q(2), q(3)], &[q(10), q(3)]).unwrap());
        assert!(matches!(class_eq_up_to_shift(&[id.clone()], &[]), Err(Error::DomainMismatch(_))));
        assert_eq!(normalize_classes(&[ns.clone(), id.clone()]), vec![id.clone(), ns]);
    }

    #[test]
    fn generators_and_nonresidues() {
        assert_eq!(f(7).multiplicative_generator(), Some(f(7).from_i64(3)));
        assert_eq!(f(5).nonresidue(), Some(f(5).from_i64(2)));
        assert_eq!(f(2).nonresidue(), None);
        let rep = square_class(&f(11).from_i64(2)).unwrap().representative();
        assert_eq!(square_class(&rep).unwrap(), square_class(&f(11).from_i64(2)).unwrap());
    }

    #[test]
    fn field_axioms_randomized() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for field in [Field::Rationals, f(5), f(13)] {
            for _ in 0..200 {
                let a = field.random(&mut rng);
                let b = field.random(&mut rng);
                let c = field.random(&mut rng);
                assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                assert_eq!(&(&a - &b) + &b, a);
                if let Some(ai) = a.inv() {
                    assert!((&a * &ai).is_one());
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn nonzero_rational() -> impl Strategy<Value = Scalar> {
            (-400i64..400, 1i64..60)
                .prop_filter("nonzero", |(n, _)| *n != 0)
                .prop_map(|(n, d)| Field::Rationals.from_ratio(n, d).unwrap())
        }

        proptest! {
            #[test]
            fn class_is_multiplicative_q(a in nonzero_rational(), b in nonzero_rational()) {
                let lhs = square_class(&(&a * &b)).unwrap();
                let rhs = square_class(&a).unwrap().mul(&square_class(&b).unwrap());
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn class_ignores_squares_q(a in nonzero_rational(), m in nonzero_rational()) {
                let scaled = &a * &(&m * &m);
                prop_assert_eq!(square_class(&scaled).unwrap(), square_class(&a).unwrap());
            }

            #[test]
            fn sqrt_iff_identity_class_fp(p in prop::sample::select(vec![3u64, 5, 7, 11, 13, 101]), v in 1u64..1000) {
                let k = Field::Prime(p).from_i64(v as i64);
                prop_assume!(!k.is_zero());
                let root = k.sqrt();
                prop_assert_eq!(root.is_some(), square_class(&k).unwrap().is_identity());
                if let Some(r) = root {
                    prop_assert_eq!(&r * &r, k);
                    prop_assert!(r.residue().unwrap() <= p / 2);
                }
            }

            #[test]
            fn sqrt_iff_identity_class_q(a in nonzero_rational()) {
                let root = a.sqrt();
                prop_assert_eq!(root.is_some(), square_class(&a).unwrap().is_identity());
                let sq = &a * &a;
                prop_assert!(sq.sqrt().is_some());
            }

            #[test]
            fn class_is_multiplicative_fp(p in prop::sample::select(vec![3u64, 5, 7, 31]), a in 1u64..500, b in 1u64..500) {
                let field = Field::Prime(p);
                let (a, b) = (field.from_i64(a as i64), field.from_i64(b as i64));
                prop_assume!(!a.is_zero() && !b.is_zero());
                prop_assert_eq!(
                    square_class(&(&a * &b)).unwrap(),
                    square_class(&a).unwrap().mul(&square_class(&b).unwrap())
                );
            }
        }
    }
}
