//! JSON interchange for posets, algebra elements, involutions and verdicts.
//!
//! Scalars are strings (`"3"`, `"-1/2"`); pairs are keyed `"x,y"` by label.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fia::{IncFn, IncidenceAlgebra};
use crate::idealization::{DElem, DMorphism};
use crate::involutions::{alpha_tilde, ClassCount, ClassInvariant, Classification, InvolutionSpec, Verdict, Witness};
use crate::linalg::Matrix;
use crate::morphisms::FiaMorphism;
use crate::poset::{MapKind, Poset, PosetMap};

pub type LabelMap = BTreeMap<String, String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> PosetJson {
        PosetJson {
            elements: p.labels().to_vec(),
            covers: p.covers().iter().map(|&(a, b)| (p.label(a).to_string(), p.label(b).to_string())).collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset> {
        Poset::from_covers(&self.elements, &self.covers)
    }
}

fn parse_err(e: serde_json::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Reads a poset from JSON or, failing a leading `{`, the `a<b` line format.
pub fn parse_poset(text: &str) -> Result<Poset> {
    if text.trim_start().starts_with('{') {
        serde_json::from_str::<PosetJson>(text).map_err(parse_err)?.to_poset()
    } else {
        Poset::parse_lines(text)
    }
}

fn pair_key(p: &Poset, x: usize, y: usize) -> String {
    format!("{},{}", p.label(x), p.label(y))
}

fn parse_pair(p: &Poset, key: &str) -> Result<(usize, usize)> {
    let (a, b) = key.split_once(',').ok_or_else(|| Error::Parse(format!("bad pair key {key:?}")))?;
    Ok((p.index_of(a.trim())?, p.index_of(b.trim())?))
}

fn entries_to_map(f: &IncFn) -> LabelMap {
    let p = f.poset();
    p.intervals()
        .iter()
        .enumerate()
        .filter(|(k, _)| !f.at(*k).is_zero())
        .map(|(k, &(x, y))| (pair_key(p, x, y), f.at(k).to_string()))
        .collect()
}

fn entries_from_map(alg: &Arc<IncidenceAlgebra>, m: &LabelMap) -> Result<IncFn> {
    let mut f = alg.zero();
    for (key, v) in m {
        let (x, y) = parse_pair(alg.poset(), key)?;
        f.set(x, y, alg.field().parse_scalar(v)?)?;
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncFnJson {
    pub entries: LabelMap,
}

impl IncFnJson {
    pub fn from_incfn(f: &IncFn) -> IncFnJson {
        IncFnJson { entries: entries_to_map(f) }
    }

    pub fn to_incfn(&self, alg: &Arc<IncidenceAlgebra>) -> Result<IncFn> {
        entries_from_map(alg, &self.entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DElemJson {
    pub f: IncFnJson,
    pub i: IncFnJson,
}

impl DElemJson {
    pub fn from_delem(a: &DElem) -> DElemJson {
        DElemJson { f: IncFnJson::from_incfn(a.f()), i: IncFnJson::from_incfn(a.i()) }
    }

    pub fn to_delem(&self, alg: &Arc<IncidenceAlgebra>) -> Result<DElem> {
        DElem::new(self.f.to_incfn(alg)?, self.i.to_incfn(alg)?)
    }
}

pub fn map_from_json(p: &Poset, m: &LabelMap, kind: MapKind) -> Result<PosetMap> {
    PosetMap::from_labels(p, m, kind)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiaMorphismJson {
    pub u: IncFnJson,
    pub sigma: LabelMap,
    pub map: LabelMap,
    pub anti: bool,
}

impl FiaMorphismJson {
    pub fn from_morphism(m: &FiaMorphism) -> FiaMorphismJson {
        let p = m.algebra().poset();
        FiaMorphismJson {
            u: IncFnJson::from_incfn(m.u()),
            sigma: entries_to_map(m.sigma()),
            map: m.map().to_labels(p),
            anti: m.is_anti(),
        }
    }

    pub fn to_morphism(&self, alg: &Arc<IncidenceAlgebra>) -> Result<FiaMorphism> {
        let kind = if self.anti { MapKind::AntiAutomorphism } else { MapKind::Automorphism };
        let map = map_from_json(alg.poset(), &self.map, kind)?;
        FiaMorphism::new(self.u.to_incfn(alg)?, entries_from_map(alg, &self.sigma)?, map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecJson {
    pub theta: DElemJson,
    pub lambda: LabelMap,
    pub k: i64,
}

impl SpecJson {
    pub fn from_spec(s: &InvolutionSpec) -> SpecJson {
        SpecJson {
            theta: DElemJson::from_delem(s.theta()),
            lambda: s.lambda().to_labels(s.algebra().poset()),
            k: s.k() as i64,
        }
    }

    pub fn to_spec(&self, alg: &Arc<IncidenceAlgebra>) -> Result<InvolutionSpec> {
        if self.k != 1 && self.k != -1 {
            return Err(Error::BadSign);
        }
        let lambda = map_from_json(alg.poset(), &self.lambda, MapKind::AntiAutomorphism)?;
        InvolutionSpec::build(self.theta.to_delem(alg)?, lambda, &alg.field().from_i64(self.k))
    }
}

pub fn parse_spec(alg: &Arc<IncidenceAlgebra>, text: &str) -> Result<InvolutionSpec> {
    serde_json::from_str::<SpecJson>(text).map_err(parse_err)?.to_spec(alg)
}

/// `[[A, B], [C, D]]`, each block a list of rows.
pub type Blocks = Vec<Vec<Vec<Vec<String>>>>;

fn matrix_to_blocks(m: &Matrix) -> Blocks {
    let n = m.rows() / 2;
    (0..2)
        .map(|br| {
            (0..2)
                .map(|bc| (0..n).map(|r| (0..n).map(|c| m.get(br * n + r, bc * n + c).to_string()).collect()).collect())
                .collect()
        })
        .collect()
}

fn blocks_to_matrix(alg: &Arc<IncidenceAlgebra>, b: &Blocks) -> Result<Matrix> {
    let n = alg.dim();
    let bad = || Error::Parse(format!("blocks must be 2x2 of {n}x{n}"));
    if b.len() != 2 || b.iter().any(|r| r.len() != 2) {
        return Err(bad());
    }
    let field = alg.field();
    let mut m = Matrix::zeros(field, 2 * n, 2 * n);
    for (br, row) in b.iter().enumerate() {
        for (bc, block) in row.iter().enumerate() {
            if block.len() != n || block.iter().any(|r| r.len() != n) {
                return Err(bad());
            }
            for (r, cells) in block.iter().enumerate() {
                for (c, v) in cells.iter().enumerate() {
                    m.set(br * n + r, bc * n + c, field.parse_scalar(v)?);
                }
            }
        }
    }
    Ok(m)
}

/// A morphism of D in block form, with the factored data it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<LabelMap>,
    pub theta: DElemJson,
    pub blocks: Blocks,
}

impl WitnessJson {
    pub fn from_witness(w: &Witness) -> WitnessJson {
        let p = w.theta.algebra().poset();
        WitnessJson {
            alpha: w.alpha.as_ref().map(|a| a.to_labels(p)),
            theta: DElemJson::from_delem(&w.theta),
            blocks: matrix_to_blocks(w.morphism.matrix()),
        }
    }

    /// Rebuilds the witness and checks that the blocks match `α̃⁻¹ ∘ Ψ_θ`.
    pub fn to_witness(&self, alg: &Arc<IncidenceAlgebra>) -> Result<Witness> {
        let theta = self.theta.to_delem(alg)?;
        let alpha = match &self.alpha {
            Some(m) => Some(map_from_json(alg.poset(), m, MapKind::Automorphism)?),
            None => None,
        };
        let morphism = DMorphism::from_matrix(alg, blocks_to_matrix(alg, &self.blocks)?, false)?;
        let mut expected = crate::idealization::inner_auto_d(&theta)?;
        if let Some(a) = &alpha {
            expected = alpha_tilde(alg, &a.inverse()).compose(&expected);
        }
        if expected.matrix() != morphism.matrix() {
            return Err(Error::Parse("witness blocks disagree with alpha and theta".into()));
        }
        Ok(Witness { alpha, theta, morphism })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub equivalent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distinguisher: Option<String>,
}

impl VerdictJson {
    pub fn from_verdict(v: &Verdict) -> VerdictJson {
        VerdictJson {
            equivalent: v.equivalent,
            witness: v.witness.as_ref().map(WitnessJson::from_witness),
            distinguisher: v.distinguisher.map(|d| d.as_str().to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantJson {
    pub sign: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r#type: Option<String>,
    pub chi: Vec<String>,
}

impl InvariantJson {
    pub fn from_invariant(inv: &ClassInvariant) -> InvariantJson {
        InvariantJson {
            sign: inv.sign as i64,
            r#type: inv.type_tag.map(|t| t.to_string()),
            chi: inv.chi.iter().map(|c| c.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CountJson {
    Finite(u64),
    Infinite(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub lambda: LabelMap,
    pub x3: Vec<String>,
    pub count: CountJson,
    pub representatives: Vec<SpecJson>,
    pub invariants: Vec<InvariantJson>,
}

impl ClassificationJson {
    pub fn from_classification(c: &Classification, p: &Poset) -> ClassificationJson {
        ClassificationJson {
            lambda: c.lambda.to_labels(p),
            x3: c.x3.iter().map(|&x| p.label(x).to_string()).collect(),
            count: match &c.count {
                ClassCount::Finite(n) => CountJson::Finite(*n),
                ClassCount::Infinite(s) => CountJson::Infinite(s.clone()),
            },
            representatives: c.representatives.iter().map(SpecJson::from_spec).collect(),
            invariants: c.invariants.iter().map(InvariantJson::from_invariant).collect(),
        }
    }
}
