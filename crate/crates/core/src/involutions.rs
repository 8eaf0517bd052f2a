//! Involutions on D(X, K): the factored form `Ψ_θ ∘ ρ̃_λ ∘ (kδ)~`, its
//! invariants, constructive equivalence witnesses, and the classification.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::derivations::{additive_is_inner, der_equals_ider, split_raw_derivation};
use crate::error::{Error, Result};
use crate::fia::{IncFn, IncidenceAlgebra};
use crate::idealization::{inner_auto_d, DElem, DMorphism};
use crate::morphisms::{decompose, mult_subset_inn, multiplicative_is_inner, relabel};
use crate::poset::{lambda_decomposition, LambdaDecomposition, Part, PosetMap};
use crate::scalar::{normalize_classes, square_class, Field, Scalar, SquareClass};

/// Human-readable name of basis vector `j` of D.
pub fn basis_label(alg: &IncidenceAlgebra, j: usize) -> String {
    let n = alg.dim();
    let p = alg.poset();
    let (x, y) = p.intervals()[j % n];
    if j < n {
        format!("[e({},{}); 0]", p.label(x), p.label(y))
    } else {
        format!("[0; e({},{})]", p.label(x), p.label(y))
    }
}

/// `[α̂ f; α̂ i]` for a poset (anti-)automorphism `α`.
pub fn relabel_d(a: &DElem, map: &PosetMap) -> DElem {
    DElem::new(relabel(a.f(), map), relabel(a.i(), map)).expect("same algebra")
}

fn sign_scalar(field: Field, k: i8) -> Scalar {
    if k > 0 {
        field.one()
    } else {
        -field.one()
    }
}

fn check_field_and_poset(alg: &IncidenceAlgebra) -> Result<()> {
    if alg.field().is_char2() {
        return Err(Error::Char2Unsupported);
    }
    if !alg.poset().is_connected() {
        return Err(Error::NotConnected);
    }
    Ok(())
}

/// Fails with `HypothesisFailed` unless Mult ⊆ Inn and Der = IDer both hold.
pub fn check_hypotheses(alg: &IncidenceAlgebra) -> Result<()> {
    check_field_and_poset(alg)?;
    let mut failed = Vec::new();
    if !mult_subset_inn(alg.poset(), alg.field()) {
        failed.push("Mult ⊆ Inn");
    }
    if !der_equals_ider(alg.poset(), alg.field()) {
        failed.push("Der = IDer");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisFailed(failed.join(", ")))
    }
}

/// `Φ = Ψ_θ ∘ ρ̃_λ ∘ (kδ)~`, validated to square to the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionSpec {
    theta: DElem,
    theta_inv: DElem,
    lambda: PosetMap,
    k: i8,
}

impl InvolutionSpec {
    pub fn build(theta: DElem, lambda: PosetMap, k: &Scalar) -> Result<InvolutionSpec> {
        let alg = Arc::clone(theta.algebra());
        check_field_and_poset(&alg)?;
        let theta_inv = theta.inverse()?;
        if !lambda.is_involution() || !lambda.is_valid_on(alg.poset()) {
            return Err(Error::NotAnInvolution("lambda is not an involution on the poset".into()));
        }
        let one = alg.field().one();
        let sign = if *k == one {
            1
        } else if *k == -&one {
            -1
        } else {
            return Err(Error::BadSign);
        };
        let spec = InvolutionSpec { theta, theta_inv, lambda, k: sign };
        if let Some(j) = spec.matrix().first_non_involutive() {
            return Err(Error::NotInvolutive(basis_label(&alg, j)));
        }
        Ok(spec)
    }

    /// [`InvolutionSpec::build`] with the sign given as `±1`.
    pub fn with_sign(theta: DElem, lambda: PosetMap, k: i8) -> Result<InvolutionSpec> {
        let field = theta.field();
        let k = match k {
            1 | -1 => sign_scalar(field, k),
            _ => return Err(Error::BadSign),
        };
        InvolutionSpec::build(theta, lambda, &k)
    }

    pub fn algebra(&self) -> &Arc<IncidenceAlgebra> {
        self.theta.algebra()
    }

    pub fn theta(&self) -> &DElem {
        &self.theta
    }

    pub fn lambda(&self) -> &PosetMap {
        &self.lambda
    }

    pub fn k(&self) -> i8 {
        self.k
    }

    pub fn k_scalar(&self) -> Scalar {
        sign_scalar(self.algebra().field(), self.k)
    }

    /// The sign `s(Φ)`.
    pub fn sign(&self) -> i8 {
        self.k
    }

    /// The involution `λ_Φ` induced on X.
    pub fn induced(&self) -> &PosetMap {
        &self.lambda
    }

    pub fn decomposition(&self) -> LambdaDecomposition {
        lambda_decomposition(self.algebra().poset(), &self.lambda).expect("validated involution")
    }

    /// `Φ₀ = ρ̃_λ ∘ (kδ)~ : [f; i] ↦ [ρ_λ f; k ρ_λ i]`.
    pub fn base_apply(&self, a: &DElem) -> DElem {
        let f = relabel(a.f(), &self.lambda);
        let i = relabel(a.i(), &self.lambda);
        let i = if self.k < 0 { -i } else { i };
        DElem::new(f, i).expect("same algebra")
    }

    pub fn apply(&self, a: &DElem) -> DElem {
        &(&self.theta * &self.base_apply(a)) * &self.theta_inv
    }

    pub fn matrix(&self) -> DMorphism {
        DMorphism::from_fn(self.algebra(), true, |a| self.apply(a))
    }
}

impl fmt::Display for InvolutionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.algebra().poset();
        let lam: Vec<String> =
            (0..p.len()).map(|x| format!("{}->{}", p.label(x), p.label(self.lambda.apply(x)))).collect();
        write!(f, "Ψ_{} ∘ ρ̃[{}] ∘ ({}δ)~", self.theta, lam.join(","), self.k)
    }
}

/// Recovers the factored form of a raw involution of D given as a block matrix.
pub fn recognize(raw: &DMorphism) -> Result<InvolutionSpec> {
    let alg = Arc::clone(raw.algebra());
    if !raw.upper_right_is_zero() {
        return Err(Error::UpperRightNonzero);
    }
    if let Some(j) = raw.first_non_involutive() {
        return Err(Error::NotAnInvolution(format!("Φ² moves {}", basis_label(&alg, j))));
    }
    let as_anti = DMorphism::from_matrix(&alg, raw.matrix().clone(), true)?;
    if !as_anti.is_ring_morphism() {
        return Err(Error::NotAnInvolution("map is not a unital ring anti-homomorphism".into()));
    }
    check_hypotheses(&alg)?;

    let phi11 = decompose(&alg, &raw.block(0, 0), true)
        .map_err(|e| Error::NotAnInvolution(format!("upper-left block: {e}")))?;
    let lambda = phi11.map().clone();
    let eta = multiplicative_is_inner(phi11.sigma())?.ok_or_else(|| Error::HypothesisFailed("Mult ⊆ Inn".into()))?;
    let h = phi11.u() * &alg.diagonal(&eta);
    let big_h = DElem::ring(h.clone());

    // R = Ψ_H⁻¹ ∘ Φ ∘ ρ̃_λ has block form [[id, 0], [D_j, kδ·]].
    let rho = InvolutionSpec { theta: DElem::one(&alg), theta_inv: DElem::one(&alg), lambda: lambda.clone(), k: 1 };
    let hinv = big_h.inverse()?;
    let r = DMorphism::from_fn(&alg, false, |a| {
        let b = as_anti.apply(&rho.base_apply(a));
        &(&hinv * &b) * &big_h
    });
    let g = r.apply(&DElem::new(alg.zero(), alg.delta())?);
    let k = g.i().diag(0).clone();
    if !g.f().is_zero() || *g.i() != alg.scalar(&k) {
        return Err(Error::NotAnInvolution("bimodule block is not a scalar".into()));
    }
    let d = split_raw_derivation(&alg, &r.block(1, 0))?;
    let f0 = additive_is_inner(d.tau())?.ok_or_else(|| Error::HypothesisFailed("Der = IDer".into()))?;
    let j = d.i() + &f0;
    let theta = DElem::new(h.clone(), -&(&h * &j))?;
    let spec = InvolutionSpec::build(theta, lambda, &k)?;
    if spec.matrix().matrix() != raw.matrix() {
        return Err(Error::NotAnInvolution("recomposition differs from input".into()));
    }
    Ok(spec)
}

/// `u_ε`: `ε(x)` on X₃, `1` elsewhere on the diagonal, `0` off it.
pub fn u_eps(alg: &Arc<IncidenceAlgebra>, dec: &LambdaDecomposition, eps: &[Scalar]) -> Result<IncFn> {
    let x3 = dec.x3();
    if eps.len() != x3.len() {
        return Err(Error::DomainMismatch(format!("epsilon has {} values for {} fixed points", eps.len(), x3.len())));
    }
    let mut diag = vec![alg.field().one(); alg.poset().len()];
    for (&x, e) in x3.iter().zip(eps) {
        if e.is_zero() {
            return Err(Error::ZeroEpsilon(alg.poset().label(x).to_string()));
        }
        diag[x] = e.clone();
    }
    Ok(alg.diagonal(&diag))
}

/// `w`: `+1` on the X₁ diagonal, `−1` on the X₂ diagonal.
pub fn w_lambda(alg: &Arc<IncidenceAlgebra>, dec: &LambdaDecomposition) -> Result<IncFn> {
    if !dec.x3().is_empty() {
        return Err(Error::FixedPointsPresent);
    }
    let one = alg.field().one();
    let diag: Vec<Scalar> = dec.parts().iter().map(|p| if *p == Part::X2 { -&one } else { one.clone() }).collect();
    Ok(alg.diagonal(&diag))
}

/// `ρ̃_ε ∘ (kδ)~`, with `ε` listed over X₃ in increasing order.
pub fn rho_eps(alg: &Arc<IncidenceAlgebra>, lambda: &PosetMap, eps: &[Scalar], k: i8) -> Result<InvolutionSpec> {
    let dec = lambda_decomposition(alg.poset(), lambda)?;
    let u = u_eps(alg, &dec, eps)?;
    InvolutionSpec::with_sign(DElem::ring(u), lambda.clone(), k)
}

/// `σ̃_λ ∘ (kδ)~`, defined when λ has no fixed points.
pub fn sigma_lambda(alg: &Arc<IncidenceAlgebra>, lambda: &PosetMap, k: i8) -> Result<InvolutionSpec> {
    let dec = lambda_decomposition(alg.poset(), lambda)?;
    let w = w_lambda(alg, &dec)?;
    InvolutionSpec::with_sign(DElem::ring(w), lambda.clone(), k)
}

/// Finds `γ` with `θ = γ · base(γ)` for a base of the form `ρ̃_ε ∘ (kδ)~` or
/// `σ̃_λ ∘ (kδ)~`.
pub fn symmetric_decompose(theta: &DElem, base: &InvolutionSpec) -> Result<DElem> {
    let alg = Arc::clone(base.algebra());
    if !IncidenceAlgebra::same(&alg, theta.algebra()) {
        return Err(Error::ContextMismatch);
    }
    check_field_and_poset(&alg)?;
    let dec = base.decomposition();
    let p = alg.poset();
    let field = alg.field();
    let bt = base.theta();
    let sigma_like = !dec.x2().is_empty() && bt.f().diag(dec.x2()[0]) == &-&field.one();
    let base_ok = bt.i().is_zero()
        && bt.f().is_diagonal()
        && (0..p.len()).all(|x| match dec.part(x) {
            Part::X1 => bt.f().diag(x).is_one(),
            Part::X2 => {
                if sigma_like {
                    bt.f().diag(x) == &-&field.one()
                } else {
                    bt.f().diag(x).is_one()
                }
            }
            Part::X3 => !sigma_like,
        });
    if !base_ok {
        return Err(Error::DomainMismatch("base is not ρ̃_ε ∘ (kδ)~ or σ̃_λ ∘ (kδ)~".into()));
    }
    if !theta.is_unit() || base.apply(theta) != *theta {
        return Err(Error::NotSymmetric);
    }
    let (f, i) = (theta.f(), theta.i());
    let mut roots = vec![None; p.len()];
    let mut bad = Vec::new();
    for x in dec.x3() {
        match f.diag(x).sqrt() {
            Some(r) => roots[x] = Some(r),
            None => bad.push(p.label(x).to_string()),
        }
    }
    if !bad.is_empty() {
        return Err(Error::NotASquare(bad));
    }
    let half = field.from_i64(2).inv().expect("odd characteristic");
    let two = field.from_i64(2);
    let v = alg.from_fn(|x, y| match (dec.part(x), dec.part(y)) {
        (Part::X1, Part::X1) => {
            if x == y {
                field.one()
            } else {
                field.zero()
            }
        }
        (Part::X2, Part::X2) | (Part::X3, Part::X2) => f.get(x, y),
        (Part::X1, Part::X2) => &f.get(x, y) * &half,
        (Part::X3, Part::X3) => roots[x].clone().expect("square root"),
        _ => field.zero(),
    });
    let j = alg.from_fn(|x, y| match (dec.part(x), dec.part(y)) {
        (Part::X2, Part::X2) | (Part::X3, Part::X2) => i.get(x, y),
        (Part::X1, Part::X2) => &i.get(x, y) * &half,
        (Part::X3, Part::X3) => {
            let r = roots[x].as_ref().expect("square root");
            &i.get(x, x) * &(&two * r).inv().expect("nonzero root")
        }
        _ => field.zero(),
    });
    let gamma = DElem::new(v, j)?;
    if &gamma * &base.apply(&gamma) != *theta {
        return Err(Error::SplitFailed("θ ≠ γ·base(γ) for the tabulated γ".into()));
    }
    Ok(gamma)
}

/// `(k₀, k₁)` with `Φ₀(θ) = c_{k₀,k₁} θ`.
pub fn central_ratio(spec: &InvolutionSpec) -> Result<(Scalar, Scalar)> {
    let alg = spec.algebra();
    let c = &spec.base_apply(spec.theta()) * &spec.theta_inv;
    let (k0, k1) = (c.f().diag(0).clone(), c.i().diag(0).clone());
    if c != DElem::central(alg, &k0, &k1) {
        return Err(Error::NotCentral);
    }
    Ok((k0, k1))
}

/// Which normal form an involution reduces to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NormalKind {
    /// `ρ̃_ε ∘ (kδ)~`, `ε` over X₃ (empty when X₃ = ∅).
    Rho(Vec<Scalar>),
    /// `σ̃_λ ∘ (kδ)~`, only when X₃ = ∅.
    Sigma,
}

/// `W ∘ Φ = N ∘ W` with `W = Ψ_conjugator` and `N` the normal form.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub normal: InvolutionSpec,
    pub kind: NormalKind,
    pub conjugator: DElem,
}

/// Reduces `Φ` to `ρ̃_ε ∘ (kδ)~` or `σ̃_λ ∘ (kδ)~` by an inner automorphism.
pub fn reduce(spec: &InvolutionSpec) -> Result<Reduction> {
    let alg = Arc::clone(spec.algebra());
    let field = alg.field();
    let one = field.one();
    let (k0, k1) = central_ratio(spec)?;
    let mut theta = spec.theta().clone();
    if spec.k < 0 {
        let half = field.from_i64(2).inv().expect("odd characteristic");
        theta = &DElem::central(&alg, &k0, &(&k1 * &half)) * &theta;
    } else if !k1.is_zero() {
        return Err(Error::NotAnInvolution("Φ₀(θ) = c_{k₀,k₁}θ with k₁ ≠ 0 and sign +1".into()));
    }
    let dec = spec.decomposition();
    let x3 = dec.x3();
    let plus = k0 == one;
    let (kind, normal, theta_rel) = if !x3.is_empty() {
        if !plus {
            return Err(Error::NotAnInvolution("Φ₀(θ) = −θ is impossible with fixed points".into()));
        }
        let eps: Vec<Scalar> = x3.iter().map(|&x| theta.f().diag(x).clone()).collect();
        let normal = rho_eps(&alg, &spec.lambda, &eps, spec.k)?;
        let rel = &theta * &normal.theta_inv;
        (NormalKind::Rho(eps), normal, rel)
    } else if plus {
        let normal = rho_eps(&alg, &spec.lambda, &[], spec.k)?;
        (NormalKind::Rho(Vec::new()), normal, theta)
    } else {
        let normal = sigma_lambda(&alg, &spec.lambda, spec.k)?;
        let rel = &theta * normal.theta();
        (NormalKind::Sigma, normal, rel)
    };
    let gamma = symmetric_decompose(&theta_rel, &normal)?;
    Ok(Reduction { normal, kind, conjugator: gamma.inverse()? })
}

/// Whether `Ψ_a ∘ Φ₁ = Φ₂ ∘ Ψ_a`, checked on matrices.
pub fn intertwines(a: &DMorphism, phi1: &InvolutionSpec, phi2: &InvolutionSpec) -> bool {
    a.compose(&phi1.matrix()).matrix() == phi2.matrix().compose(a).matrix()
}

/// Type tag used when X₃ = ∅.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TypeTag {
    Rho,
    Sigma,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeTag::Rho => "rho",
            TypeTag::Sigma => "sigma",
        })
    }
}

/// The classifying data of an involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClassInvariant {
    pub lambda: PosetMap,
    /// Lexicographically least `αλα⁻¹` over `α ∈ Aut(X)`.
    pub lambda_class: Vec<usize>,
    pub sign: i8,
    /// `χ_ε` over X₃, shifted so the first entry is the identity class.
    pub chi: Vec<SquareClass>,
    /// Set exactly when X₃ = ∅.
    pub type_tag: Option<TypeTag>,
}

fn lambda_class(alg: &IncidenceAlgebra, lambda: &PosetMap) -> Result<Vec<usize>> {
    let auts = alg.poset().automorphisms()?;
    Ok(auts
        .iter()
        .map(|a| a.compose(lambda).compose(&a.inverse()).images().to_vec())
        .min()
        .unwrap_or_else(|| lambda.images().to_vec()))
}

fn chi_of(eps: &[Scalar]) -> Result<Vec<SquareClass>> {
    let raw: Vec<SquareClass> = eps.iter().map(square_class).collect::<Result<_>>()?;
    Ok(normalize_classes(&raw))
}

/// The inner-equivalence invariant of `Φ`.
pub fn invariant(spec: &InvolutionSpec) -> Result<ClassInvariant> {
    let red = reduce(spec)?;
    let (chi, type_tag) = match &red.kind {
        NormalKind::Rho(eps) if eps.is_empty() => (Vec::new(), Some(TypeTag::Rho)),
        NormalKind::Rho(eps) => (chi_of(eps)?, None),
        NormalKind::Sigma => (Vec::new(), Some(TypeTag::Sigma)),
    };
    Ok(ClassInvariant {
        lambda: spec.lambda.clone(),
        lambda_class: lambda_class(spec.algebra(), &spec.lambda)?,
        sign: spec.k,
        chi,
        type_tag,
    })
}

/// Automorphisms of X commuting with λ.
pub fn centralizer(alg: &IncidenceAlgebra, lambda: &PosetMap) -> Result<Vec<PosetMap>> {
    Ok(alg.poset().automorphisms()?.into_iter().filter(|a| a.compose(lambda) == lambda.compose(a)).collect())
}

/// `χ ∘ α` restricted to X₃, for α commuting with λ.
fn act_on_chi(x3: &[usize], chi: &[SquareClass], alpha: &PosetMap) -> Vec<SquareClass> {
    x3.iter()
        .map(|&x| {
            let ax = alpha.apply(x);
            let pos = x3.iter().position(|&y| y == ax).expect("α preserves X₃");
            chi[pos].clone()
        })
        .collect()
}

/// The general-equivalence form of an invariant: λ replaced by its class
/// representative and χ minimized over the centralizer of that representative.
pub fn general_invariant(alg: &Arc<IncidenceAlgebra>, inv: &ClassInvariant) -> Result<ClassInvariant> {
    let p = alg.poset();
    let auts = p.automorphisms()?;
    let rep = PosetMap::new(p, inv.lambda_class.clone(), inv.lambda.kind())?;
    let alpha = auts
        .iter()
        .find(|a| a.compose(&inv.lambda).compose(&a.inverse()) == rep)
        .expect("class representative is a conjugate");
    // α moves X₃(λ) onto X₃(rep); transport χ along it.
    let x3 = lambda_decomposition(p, &inv.lambda)?.x3();
    let x3_rep = lambda_decomposition(p, &rep)?.x3();
    let moved: Vec<SquareClass> = x3_rep
        .iter()
        .map(|&y| {
            let x = alpha.inverse().apply(y);
            inv.chi[x3.iter().position(|&z| z == x).expect("fixed point")].clone()
        })
        .collect();
    let chi = centralizer(alg, &rep)?
        .iter()
        .map(|a| normalize_classes(&act_on_chi(&x3_rep, &moved, a)))
        .min()
        .unwrap_or_default();
    Ok(ClassInvariant {
        lambda: rep,
        lambda_class: inv.lambda_class.clone(),
        sign: inv.sign,
        chi,
        type_tag: inv.type_tag,
    })
}

/// What separates two inequivalent involutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distinguisher {
    Sign,
    Lambda,
    Chi,
}

impl Distinguisher {
    pub fn as_str(&self) -> &'static str {
        match self {
            Distinguisher::Sign => "sign",
            Distinguisher::Lambda => "lambda",
            Distinguisher::Chi => "chi",
        }
    }
}

/// A certificate `ψ ∘ Φ₁ = Φ₂ ∘ ψ` with `ψ = α̃⁻¹ ∘ Ψ_θ`.
#[derive(Clone, Debug)]
pub struct Witness {
    /// `None` for an inner witness.
    pub alpha: Option<PosetMap>,
    pub theta: DElem,
    pub morphism: DMorphism,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub equivalent: bool,
    pub witness: Option<Witness>,
    pub distinguisher: Option<Distinguisher>,
}

impl Verdict {
    fn no(d: Distinguisher) -> Verdict {
        Verdict { equivalent: false, witness: None, distinguisher: Some(d) }
    }
}

/// `Ψ_V` carrying `ρ̃_{ε₁} ∘ (kδ)~` to `ρ̃_{ε₂} ∘ (kδ)~`, if the classes agree up to shift.
fn shift_conjugator(
    alg: &Arc<IncidenceAlgebra>,
    dec: &LambdaDecomposition,
    eps1: &[Scalar],
    eps2: &[Scalar],
) -> Option<DElem> {
    let field = alg.field();
    let x3 = dec.x3();
    let c = if x3.is_empty() { field.one() } else { &eps1[0] * &eps2[0].inv()? };
    let mut d = vec![field.one(); alg.poset().len()];
    for x in dec.x1() {
        d[x] = c.clone();
    }
    for (pos, &x) in x3.iter().enumerate() {
        let q = &(&c * &eps2[pos]) * &eps1[pos].inv()?;
        d[x] = q.sqrt()?;
    }
    Some(DElem::ring(alg.diagonal(&d)))
}

/// Decides inner equivalence and returns a verified witness or the differing invariant.
pub fn equivalent_inner(phi1: &InvolutionSpec, phi2: &InvolutionSpec) -> Result<Verdict> {
    let alg = Arc::clone(phi1.algebra());
    if !IncidenceAlgebra::same(&alg, phi2.algebra()) {
        return Err(Error::ContextMismatch);
    }
    check_hypotheses(&alg)?;
    if phi1.lambda != phi2.lambda {
        return Ok(Verdict::no(Distinguisher::Lambda));
    }
    if phi1.k != phi2.k {
        return Ok(Verdict::no(Distinguisher::Sign));
    }
    let (r1, r2) = (reduce(phi1)?, reduce(phi2)?);
    let dec = phi1.decomposition();
    let v = match (&r1.kind, &r2.kind) {
        (NormalKind::Rho(e1), NormalKind::Rho(e2)) => match shift_conjugator(&alg, &dec, e1, e2) {
            Some(v) => v,
            None => return Ok(Verdict::no(Distinguisher::Chi)),
        },
        (NormalKind::Sigma, NormalKind::Sigma) => DElem::one(&alg),
        _ => return Ok(Verdict::no(Distinguisher::Chi)),
    };
    let theta = &(&r2.conjugator.inverse()? * &v) * &r1.conjugator;
    let morphism = inner_auto_d(&theta)?;
    if !intertwines(&morphism, phi1, phi2) {
        return Err(Error::NotAnInvolution("assembled witness fails verification".into()));
    }
    Ok(Verdict { equivalent: true, witness: Some(Witness { alpha: None, theta, morphism }), distinguisher: None })
}

/// `α̃ ∘ Φ ∘ α̃⁻¹` in factored form.
pub fn conjugate_by_automorphism(spec: &InvolutionSpec, alpha: &PosetMap) -> Result<InvolutionSpec> {
    if alpha.is_anti() || !alpha.is_valid_on(spec.algebra().poset()) {
        return Err(Error::NotAMorphism("expected a poset automorphism".into()));
    }
    let lambda = alpha.compose(&spec.lambda).compose(&alpha.inverse());
    InvolutionSpec::with_sign(relabel_d(&spec.theta, alpha), lambda, spec.k)
}

/// Matrix of `α̃ = diag(α̂, α̂)`.
pub fn alpha_tilde(alg: &Arc<IncidenceAlgebra>, alpha: &PosetMap) -> DMorphism {
    DMorphism::from_fn(alg, false, |a| relabel_d(a, alpha))
}

/// Decides equivalence under all automorphisms of D.
pub fn equivalent(phi1: &InvolutionSpec, phi2: &InvolutionSpec) -> Result<Verdict> {
    let alg = Arc::clone(phi1.algebra());
    if !IncidenceAlgebra::same(&alg, phi2.algebra()) {
        return Err(Error::ContextMismatch);
    }
    check_hypotheses(&alg)?;
    if phi1.k != phi2.k {
        return Ok(Verdict::no(Distinguisher::Sign));
    }
    let mut matched = false;
    for alpha in alg.poset().automorphisms()? {
        if alpha.compose(&phi2.lambda).compose(&alpha.inverse()) != phi1.lambda {
            continue;
        }
        matched = true;
        let moved = conjugate_by_automorphism(phi2, &alpha)?;
        let v = equivalent_inner(phi1, &moved)?;
        if let Some(w) = v.witness {
            let morphism = alpha_tilde(&alg, &alpha.inverse()).compose(&w.morphism);
            if morphism.compose(&phi1.matrix()).matrix() != phi2.matrix().compose(&morphism).matrix() {
                return Err(Error::NotAnInvolution("assembled witness fails verification".into()));
            }
            return Ok(Verdict {
                equivalent: true,
                witness: Some(Witness { alpha: Some(alpha), theta: w.theta, morphism }),
                distinguisher: None,
            });
        }
    }
    Ok(Verdict::no(if matched { Distinguisher::Chi } else { Distinguisher::Lambda }))
}

/// Number of classes, or a description of an infinite family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassCount {
    Finite(u64),
    Infinite(String),
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub lambda: PosetMap,
    pub x3: Vec<usize>,
    pub representatives: Vec<InvolutionSpec>,
    pub invariants: Vec<ClassInvariant>,
    pub count: ClassCount,
}

impl Classification {
    pub fn finite_count(&self) -> Result<u64> {
        match self.count {
            ClassCount::Finite(n) => Ok(n),
            ClassCount::Infinite(_) => Err(Error::InfiniteClassCount),
        }
    }
}

/// Inner-equivalence classes of involutions on D inducing `lambda`.
pub fn classify(alg: &Arc<IncidenceAlgebra>, lambda: &PosetMap) -> Result<Classification> {
    check_hypotheses(alg)?;
    let dec = lambda_decomposition(alg.poset(), lambda)?;
    let x3 = dec.x3();
    let field = alg.field();
    let mut reps = Vec::new();
    let count = if x3.is_empty() {
        for k in [1, -1] {
            reps.push(rho_eps(alg, lambda, &[], k)?);
        }
        for k in [1, -1] {
            reps.push(sigma_lambda(alg, lambda, k)?);
        }
        ClassCount::Finite(4)
    } else if x3.len() == 1 {
        for k in [1, -1] {
            reps.push(rho_eps(alg, lambda, &[field.one()], k)?);
        }
        ClassCount::Finite(2)
    } else {
        match field.square_class_count() {
            None => {
                for k in [1, -1] {
                    reps.push(rho_eps(alg, lambda, &vec![field.one(); x3.len()], k)?);
                }
                ClassCount::Infinite(format!(
                    "(k, χ) with k = ±1 and χ: X₃ → signed squarefree integers, χ({}) = 1",
                    alg.poset().label(x3[0])
                ))
            }
            Some(s) => {
                let classes = [field.one(), field.nonresidue().expect("odd prime")];
                let free = x3.len() - 1;
                for k in [1, -1] {
                    for code in 0..(1usize << free) {
                        let mut eps = vec![field.one()];
                        eps.extend((0..free).map(|b| classes[(code >> (free - 1 - b)) & 1].clone()));
                        reps.push(rho_eps(alg, lambda, &eps, k)?);
                    }
                }
                ClassCount::Finite(2 * s.pow(free as u32))
            }
        }
    };
    let invariants = reps.iter().map(invariant).collect::<Result<Vec<_>>>()?;
    Ok(Classification { lambda: lambda.clone(), x3, representatives: reps, invariants, count })
}

/// Classes under all automorphisms of D among involutions inducing a conjugate of `lambda`.
pub fn classify_general(alg: &Arc<IncidenceAlgebra>, lambda: &PosetMap) -> Result<Classification> {
    let inner = classify(alg, lambda)?;
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    let mut reps = Vec::new();
    let mut invariants = Vec::new();
    for (spec, inv) in inner.representatives.iter().zip(&inner.invariants) {
        let g = general_invariant(alg, inv)?;
        let key = format!("{:?}|{}|{:?}|{:?}", g.lambda_class, g.sign, g.chi, g.type_tag);
        if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(key) {
            e.insert(reps.len());
            reps.push(spec.clone());
            invariants.push(inv.clone());
        }
    }
    let count = match inner.count {
        ClassCount::Finite(_) => ClassCount::Finite(reps.len() as u64),
        ClassCount::Infinite(s) => ClassCount::Infinite(format!("{s}, modulo the centralizer of λ in Aut(X)")),
    };
    Ok(Classification { lambda: inner.lambda, x3: inner.x3, representatives: reps, invariants, count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idealization::{lift, lift_scalar};
    use crate::morphisms::FiaMorphism;
    use crate::poset::catalog::*;
    use crate::poset::{MapKind, Poset};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(p: Poset, q: u64) -> Arc<IncidenceAlgebra> {
        IncidenceAlgebra::new(p, Field::prime(q).unwrap())
    }

    fn reversal(p: &Poset) -> PosetMap {
        let n = p.len();
        PosetMap::new(p, (0..n).rev().collect(), MapKind::AntiAutomorphism).unwrap()
    }

    /// 0 ↔ 1 on the diamond, a and b fixed.
    fn diamond_flip(p: &Poset) -> PosetMap {
        PosetMap::new(p, vec![3, 1, 2, 0], MapKind::AntiAutomorphism).unwrap()
    }

    fn s(a: &IncidenceAlgebra, v: i64) -> Scalar {
        a.field().from_i64(v)
    }

    #[test]
    fn build_examples() {
        let a = alg(chain(2), 5);
        let lam = reversal(a.poset());
        let rho = InvolutionSpec::with_sign(DElem::one(&a), lam.clone(), 1).unwrap();
        let direct = lift(&FiaMorphism::induced(&a, lam.clone()).unwrap());
        assert_eq!(rho.matrix().matrix(), direct.matrix());

        let w = a.diagonal(&[s(&a, 1), s(&a, -1)]);
        let sigma = InvolutionSpec::with_sign(DElem::ring(w.clone()), lam.clone(), 1).unwrap();
        assert!(sigma.matrix().squares_to_identity());
        assert_eq!(sigma_lambda(&a, &lam, 1).unwrap().theta().f(), &w);

        let t = DElem::ring(&a.delta() + &a.e(0, 1).unwrap());
        let psi_t = inner_auto_d(&t).unwrap();
        let psi_rt = inner_auto_d(&rho.apply(&t)).unwrap();
        assert_eq!(InvolutionSpec::with_sign(t, lam, 1).is_ok(), psi_t == psi_rt);
    }

    #[test]
    fn build_rejections() {
        let a = alg(chain(2), 5);
        let lam = reversal(a.poset());
        assert_eq!(InvolutionSpec::with_sign(DElem::one(&a), lam.clone(), 2), Err(Error::BadSign));
        assert_eq!(InvolutionSpec::build(DElem::one(&a), lam.clone(), &s(&a, 2)), Err(Error::BadSign));
        let t = DElem::ring(a.diagonal(&[s(&a, 1), s(&a, 2)]));
        assert!(matches!(InvolutionSpec::with_sign(t, lam.clone(), 1), Err(Error::NotInvolutive(_))));
        let f2 = IncidenceAlgebra::new(chain(2), Field::prime(2).unwrap());
        assert_eq!(InvolutionSpec::with_sign(DElem::one(&f2), lam.clone(), 1), Err(Error::Char2Unsupported));
        let two = alg(antichain(2), 3);
        let swap = PosetMap::new(two.poset(), vec![1, 0], MapKind::AntiAutomorphism).unwrap();
        assert_eq!(InvolutionSpec::with_sign(DElem::one(&two), swap, 1), Err(Error::NotConnected));
        let id = PosetMap::identity(2);
        assert!(matches!(InvolutionSpec::with_sign(DElem::one(&a), id, 1), Err(Error::NotAnInvolution(_))));
    }

    #[test]
    fn sign_and_induced() {
        let a = alg(chain(3), 5);
        let lam = reversal(a.poset());
        for k in [1, -1] {
            let spec = rho_eps(&a, &lam, &[s(&a, 1)], k).unwrap();
            assert_eq!(spec.sign(), k);
            assert_eq!(spec.induced(), &lam);
            let direct = lift(&FiaMorphism::induced(&a, lam.clone()).unwrap())
                .compose(&lift_scalar(&a, &sign_scalar(a.field(), k)).unwrap());
            assert_eq!(spec.matrix().matrix(), direct.matrix());
        }
    }

    #[test]
    fn rho_eps_and_sigma_examples() {
        let a = alg(chain(2), 3);
        let lam = reversal(a.poset());
        assert_eq!(rho_eps(&a, &lam, &[], 1).unwrap().theta(), &DElem::one(&a));
        let sig = sigma_lambda(&a, &lam, 1).unwrap();
        let omega = sig.theta().clone();
        assert_eq!(sig.apply(&omega), -&omega);
        assert_eq!(&omega * &omega, DElem::one(&a));

        let d = alg(diamond(), 3);
        let flip = diamond_flip(d.poset());
        let r = rho_eps(&d, &flip, &[s(&d, 1), s(&d, 1)], 1).unwrap();
        assert_eq!(r.matrix(), lift(&FiaMorphism::induced(&d, flip.clone()).unwrap()));
        assert_eq!(sigma_lambda(&d, &flip, 1), Err(Error::FixedPointsPresent));
        assert!(matches!(rho_eps(&d, &flip, &[s(&d, 0), s(&d, 1)], 1), Err(Error::ZeroEpsilon(l)) if l == "a"));
        // ρ̃_ε(θ_ε) = θ_ε
        let r = rho_eps(&d, &flip, &[s(&d, 2), s(&d, 1)], -1).unwrap();
        assert_eq!(r.apply(r.theta()), *r.theta());
    }

    #[test]
    fn symmetric_decompose_examples() {
        let d = alg(diamond(), 5);
        let flip = diamond_flip(d.poset());
        let base = rho_eps(&d, &flip, &[s(&d, 1), s(&d, 1)], 1).unwrap();
        let g = symmetric_decompose(&DElem::one(&d), &base).unwrap();
        assert_eq!(&g * &base.apply(&g), DElem::one(&d));

        let f = d.diagonal(&[s(&d, 3), s(&d, 4), s(&d, 1), s(&d, 3)]);
        let theta = DElem::ring(f);
        assert_eq!(base.apply(&theta), theta);
        let g = symmetric_decompose(&theta, &base).unwrap();
        assert_eq!(&g * &base.apply(&g), theta);

        let bad = DElem::ring(d.diagonal(&[s(&d, 1), s(&d, 2), s(&d, 1), s(&d, 1)]));
        assert_eq!(symmetric_decompose(&bad, &base), Err(Error::NotASquare(vec!["a".into()])));

        let asym = DElem::ring(&d.delta() + &d.e(0, 1).unwrap());
        assert_eq!(symmetric_decompose(&asym, &base), Err(Error::NotSymmetric));
    }

    /// Random `θ` with `base(θ) = θ`: `γ·base(γ)` for random γ, rescaled on X₃.
    fn random_symmetric(base: &InvolutionSpec, rng: &mut ChaCha8Rng) -> DElem {
        let g = DElem::random_unit(base.algebra(), rng);
        &g * &base.apply(&g)
    }

    #[test]
    fn symmetric_decompose_sigma_base() {
        let a = alg(chain(4), 7);
        let lam = reversal(a.poset());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for k in [1, -1] {
            let base = sigma_lambda(&a, &lam, k).unwrap();
            for _ in 0..20 {
                let t = random_symmetric(&base, &mut rng);
                let g = symmetric_decompose(&t, &base).unwrap();
                assert_eq!(&g * &base.apply(&g), t);
            }
        }
    }

    #[test]
    fn recognize_examples() {
        let a = alg(chain(2), 3);
        let lam = reversal(a.poset());
        let rho = rho_eps(&a, &lam, &[], 1).unwrap();
        let r = recognize(&rho.matrix()).unwrap();
        assert!(r.theta().is_central());
        assert_eq!((r.k(), r.lambda()), (1, &lam));

        // Ψ_[δ;e_ab] ∘ ρ̃_λ ∘ (−δ)~ squares to Ψ_[δ;2e_ab], so it is rejected.
        let t = DElem::new(a.delta(), a.e(0, 1).unwrap()).unwrap();
        let raw = InvolutionSpec { theta_inv: t.inverse().unwrap(), theta: t.clone(), lambda: lam.clone(), k: -1 };
        assert!(matches!(recognize(&raw.matrix()), Err(Error::NotAnInvolution(_))));
        assert!(matches!(InvolutionSpec::with_sign(t, lam.clone(), -1), Err(Error::NotInvolutive(_))));

        let t = DElem::new(a.delta(), a.e(0, 0).unwrap()).unwrap();
        let phi = InvolutionSpec::with_sign(t, lam.clone(), -1).unwrap();
        let r = recognize(&phi.matrix()).unwrap();
        assert_eq!((r.k(), r.lambda()), (-1, &lam));
        assert_eq!(r.matrix(), phi.matrix());

        let mut m = rho.matrix().matrix().clone();
        m.set(0, a.dim(), a.field().one());
        let bad = DMorphism::from_matrix(&a, m, true).unwrap();
        assert_eq!(recognize(&bad), Err(Error::UpperRightNonzero));

        let ident = DMorphism::identity(&a);
        assert!(matches!(recognize(&ident), Err(Error::NotAnInvolution(_))));
    }

    #[test]
    fn recognize_needs_hypotheses() {
        let a = alg(crown_x2(), 5);
        let lam = a.poset().involutions().unwrap().remove(0);
        let spec = InvolutionSpec::with_sign(DElem::one(&a), lam, 1).unwrap();
        assert!(matches!(recognize(&spec.matrix()), Err(Error::HypothesisFailed(m)) if m.contains("Mult")));
    }

    #[test]
    fn central_action() {
        let d = alg(diamond(), 5);
        let flip = diamond_flip(d.poset());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [1, -1] {
            let spec = rho_eps(&d, &flip, &[s(&d, 2), s(&d, 1)], k).unwrap();
            for _ in 0..10 {
                let (k1, k2) = (d.field().random(&mut rng), d.field().random(&mut rng));
                let c = DElem::central(&d, &k1, &k2);
                let expect = DElem::central(&d, &k1, &(&k2 * &sign_scalar(d.field(), k)));
                assert_eq!(spec.apply(&c), expect);
            }
        }
    }

    #[test]
    fn equivalent_inner_examples() {
        let c3 = alg(chain(3), 5);
        let lam = reversal(c3.poset());
        let v = equivalent_inner(
            &rho_eps(&c3, &lam, &[s(&c3, 1)], 1).unwrap(),
            &rho_eps(&c3, &lam, &[s(&c3, 1)], -1).unwrap(),
        )
        .unwrap();
        assert_eq!((v.equivalent, v.distinguisher), (false, Some(Distinguisher::Sign)));

        let d = alg(diamond(), 3);
        let flip = diamond_flip(d.poset());
        let e1 = [s(&d, 1), s(&d, 2)];
        let e2 = [s(&d, 2), s(&d, 4)];
        let p1 = rho_eps(&d, &flip, &e1, 1).unwrap();
        let p2 = rho_eps(&d, &flip, &e2, 1).unwrap();
        let v = equivalent_inner(&p1, &p2).unwrap();
        assert!(v.equivalent);
        assert!(intertwines(&v.witness.unwrap().morphism, &p1, &p2));
        let p3 = rho_eps(&d, &flip, &[s(&d, 1), s(&d, 1)], 1).unwrap();
        let v = equivalent_inner(&p1, &p3).unwrap();
        assert_eq!((v.equivalent, v.distinguisher), (false, Some(Distinguisher::Chi)));

        let c2 = alg(chain(2), 3);
        let sw = reversal(c2.poset());
        let v = equivalent_inner(&rho_eps(&c2, &sw, &[], 1).unwrap(), &sigma_lambda(&c2, &sw, 1).unwrap()).unwrap();
        assert_eq!((v.equivalent, v.distinguisher), (false, Some(Distinguisher::Chi)));
    }

    #[test]
    fn equivalent_general_examples() {
        let d = alg(diamond(), 3);
        let flip = diamond_flip(d.poset());
        let p1 = rho_eps(&d, &flip, &[s(&d, 1), s(&d, 2)], 1).unwrap();
        let p2 = rho_eps(&d, &flip, &[s(&d, 2), s(&d, 1)], 1).unwrap();
        let v = equivalent(&p1, &p2).unwrap();
        assert!(v.equivalent);
        let w = v.witness.unwrap();
        assert_eq!(w.morphism.compose(&p1.matrix()).matrix(), p2.matrix().compose(&w.morphism).matrix());

        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alpha in d.poset().automorphisms().unwrap() {
            let t = random_symmetric(&p1, &mut rng);
            let phi = InvolutionSpec::with_sign(&t * p1.theta(), flip.clone(), 1).unwrap();
            let moved = conjugate_by_automorphism(&phi, &alpha).unwrap();
            let at = alpha_tilde(&d, &alpha);
            assert_eq!(moved.matrix().matrix(), at.compose(&phi.matrix()).compose(&at.inverse().unwrap()).matrix());
            assert!(equivalent(&phi, &moved).unwrap().equivalent);
        }

        let c2 = alg(chain(2), 3);
        let sw = reversal(c2.poset());
        let v = equivalent(&rho_eps(&c2, &sw, &[], 1).unwrap(), &sigma_lambda(&c2, &sw, -1).unwrap()).unwrap();
        assert_eq!(v.distinguisher, Some(Distinguisher::Sign));
        let v = equivalent(&rho_eps(&c2, &sw, &[], 1).unwrap(), &sigma_lambda(&c2, &sw, 1).unwrap()).unwrap();
        assert!(!v.equivalent);
    }

    #[test]
    fn classify_examples() {
        let c2 = alg(chain(2), 3);
        let cl = classify(&c2, &reversal(c2.poset())).unwrap();
        assert_eq!(cl.count, ClassCount::Finite(4));
        let tags: Vec<_> = cl.invariants.iter().map(|i| (i.sign, i.type_tag)).collect();
        assert_eq!(
            tags,
            vec![
                (1, Some(TypeTag::Rho)),
                (-1, Some(TypeTag::Rho)),
                (1, Some(TypeTag::Sigma)),
                (-1, Some(TypeTag::Sigma))
            ]
        );
        for q in [3, 5] {
            let c3 = alg(chain(3), q);
            assert_eq!(classify(&c3, &reversal(c3.poset())).unwrap().count, ClassCount::Finite(2));
            let d = alg(diamond(), q);
            let cl = classify(&d, &diamond_flip(d.poset())).unwrap();
            assert_eq!(cl.count, ClassCount::Finite(4));
            assert_eq!(cl.representatives.len(), 4);
            for (i, a) in cl.representatives.iter().enumerate() {
                for b in &cl.representatives[i + 1..] {
                    assert!(!equivalent_inner(a, b).unwrap().equivalent);
                }
            }
            // (1, n) and (n, 1) already agree up to shift.
            assert_eq!(classify_general(&d, &diamond_flip(d.poset())).unwrap().count, ClassCount::Finite(4));
        }
        let q = IncidenceAlgebra::new(diamond(), Field::Rationals);
        let cl = classify(&q, &diamond_flip(q.poset())).unwrap();
        assert!(matches!(cl.count, ClassCount::Infinite(_)));
        assert_eq!(cl.finite_count(), Err(Error::InfiniteClassCount));
        let c3q = IncidenceAlgebra::new(chain(3), Field::Rationals);
        assert_eq!(classify(&c3q, &reversal(c3q.poset())).unwrap().count, ClassCount::Finite(2));
    }

    #[test]
    fn classify_rejects_failed_hypotheses() {
        let a = alg(crown_x2(), 5);
        let lam = a.poset().involutions().unwrap().remove(0);
        assert!(matches!(classify(&a, &lam), Err(Error::HypothesisFailed(_))));
    }

    #[test]
    fn no_negated_symmetric_units_with_fixed_points() {
        let a = alg(chain(3), 3);
        let lam = reversal(a.poset());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in [1, -1] {
            let base = rho_eps(&a, &lam, &[s(&a, 1)], k).unwrap();
            for _ in 0..200 {
                let t = DElem::random_unit(&a, &mut rng);
                assert_ne!(base.base_apply(&t), -&t);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reduction_is_verified(seed in any::<u64>(), k in prop::sample::select(vec![1i8, -1])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = alg(diamond(), 5);
            let flip = diamond_flip(d.poset());
            let base = rho_eps(&d, &flip, &[s(&d, 1), s(&d, 1)], k).unwrap();
            // Every involution inducing λ with sign k is Ψ_θ ∘ base with θ·base(θ)⁻¹ central.
            let g = DElem::random_unit(&d, &mut rng);
            let phi = InvolutionSpec::with_sign(&g * &base.apply(&g), flip.clone(), k).unwrap();
            let red = reduce(&phi).unwrap();
            let w = inner_auto_d(&red.conjugator).unwrap();
            prop_assert!(intertwines(&w, &phi, &red.normal));
        }

        #[test]
        fn invariant_ignores_central_rescaling(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = alg(chain(2), 5);
            let lam = reversal(a.poset());
            let base = sigma_lambda(&a, &lam, -1).unwrap();
            let g = DElem::random_unit(&a, &mut rng);
            let theta = &(&g * &base.apply(&g)) * base.theta();
            let phi = InvolutionSpec::with_sign(theta.clone(), lam.clone(), -1).unwrap();
            let k1 = a.field().random_nonzero(&mut rng);
            let k2 = a.field().random(&mut rng);
            let scaled = InvolutionSpec::with_sign(&DElem::central(&a, &k1, &k2) * &theta, lam, -1).unwrap();
            prop_assert_eq!(phi.matrix(), scaled.matrix());
            prop_assert_eq!(invariant(&phi).unwrap(), invariant(&scaled).unwrap());
        }

        #[test]
        fn constructed_specs_square_to_identity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = alg(diamond(), 7);
            let flip = diamond_flip(d.poset());
            let eps = [d.field().random_nonzero(&mut rng), d.field().random_nonzero(&mut rng)];
            let base = rho_eps(&d, &flip, &eps, 1).unwrap();
            let g = DElem::random_unit(&d, &mut rng);
            let spec = InvolutionSpec::with_sign(&(&g * &base.apply(&g)) * base.theta(), flip, 1).unwrap();
            prop_assert!(spec.matrix().squares_to_identity());
            prop_assert!(spec.matrix().is_ring_morphism());
        }
    }
}
