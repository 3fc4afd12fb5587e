//! JSON problem descriptions. The spec is deserialized as-is; each piece is
//! built on demand so that `verify` can report every failure separately.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{Generator, GradedAlgebra, GradedElement};
use crate::bundle::{RnBundle, SymElement};
use crate::derivation::Derivation;
use crate::derived::hamiltonian_pair;
use crate::error::{Error, Result};
use crate::expr::{parse_element, parse_field, parse_form};
use crate::lie::{brst_differential, LieAction, LieAlgebra};
use crate::lift::{AlphaAssignment, LiftContext, SigmaLadder};
use crate::model::{CdgaModel, ModelId};
use crate::scalar::{parse_scalar, Scalar};

pub const DEFAULT_CAP: u32 = 2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub model: ModelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_algebra: Option<LieSpec>,
    /// One vector-field expression per basis element; absent means the trivial action.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundle: Option<BundleSpec>,
    /// Moment forms `α_a`, one per basis element.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sigma: Vec<SigmaEntry>,
    /// A BRST cochain; `d(...)` inside it is the BRST differential.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brst: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brst_other: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub elements: BTreeMap<String, ElementSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Builtin(ModelId),
    Custom(CustomModel),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomModel {
    #[serde(default)]
    pub name: Option<String>,
    pub generators: Vec<GeneratorSpec>,
    #[serde(default)]
    pub coordinates: Vec<String>,
    /// Images of generators and coordinates under `d`; missing symbols map to 0.
    #[serde(default)]
    pub differential: BTreeMap<String, String>,
    #[serde(default)]
    pub fields: Vec<FieldSpec>,
    pub top_degree: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub name: String,
    /// Images of generators under `ι_X`; missing generators map to 0.
    #[serde(default)]
    pub contraction: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LiePreset {
    Su2,
    Abelian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieSpec {
    #[serde(default)]
    pub preset: Option<LiePreset>,
    #[serde(default)]
    pub dim: Option<usize>,
    /// Basis labels; defaults to `1..=dim`.
    #[serde(default)]
    pub names: Option<Vec<String>>,
    /// Sparse `f^a_{bc}`.
    #[serde(default)]
    pub structure: Vec<StructureEntry>,
    #[serde(default = "yes")]
    pub antisymmetrize: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub f: Number,
}

/// A rational given as a JSON integer or a string like `"-3/2"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Text(String),
}

impl Number {
    fn value(&self) -> Result<Scalar> {
        match self {
            Number::Int(i) => Ok(Scalar::from_integer((*i).into())),
            Number::Text(s) => parse_scalar(s).ok_or_else(|| Error::Input(format!("`{s}` is not a rational number"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BundleSpec {
    pub n: u32,
    #[serde(rename = "H", alias = "h", default = "zero_text")]
    pub h: String,
}

fn zero_text() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaEntry {
    /// Lie algebra labels `a₁ … a_j`; sets `σ_j(a₁ ∧ … ∧ a_j)`.
    pub args: Vec<String>,
    pub value: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Lie,
    Contraction,
    Form,
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementSpec {
    pub kind: ElementKind,
    #[serde(default)]
    pub field: Option<String>,
    #[serde(default)]
    pub form: Option<String>,
    /// Sym degree of a pure form element.
    #[serde(default)]
    pub degree: Option<i32>,
}

/// Tags a parse error with the JSON location of the offending expression.
fn located<T>(path: &str, src: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { pos, msg } => Error::Parse { pos, msg: format!("{path} `{src}`: {msg}") },
        Error::UnknownSymbol(s) => Error::Parse { pos: src.find(s.as_str()).unwrap_or(0), msg: format!("{path} `{src}`: unknown symbol `{s}`") },
        Error::Degree(m) => Error::Degree(format!("{path}: {m}")),
        other => other,
    })
}

/// A loaded problem.
#[derive(Clone, Debug)]
pub struct Problem {
    spec: ProblemSpec,
}

impl Problem {
    pub fn new(spec: ProblemSpec) -> Self {
        Problem { spec }
    }

    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map(Problem::new).map_err(|e| Error::Input(format!("invalid problem JSON: {e}")))
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    /// The command-line cap wins over the spec's.
    pub fn cap(&self, over: Option<u32>) -> u32 {
        over.or(self.spec.caps).unwrap_or(DEFAULT_CAP)
    }

    pub fn model(&self) -> Result<CdgaModel> {
        match &self.spec.model {
            ModelSpec::Builtin(id) => CdgaModel::builtin(id),
            ModelSpec::Custom(c) => custom_model(c),
        }
    }

    pub fn has_lie_algebra(&self) -> bool {
        self.spec.lie_algebra.is_some()
    }

    pub fn lie_algebra(&self) -> Result<LieAlgebra> {
        let spec = self.spec.lie_algebra.as_ref().ok_or_else(|| Error::Input("the problem has no lie_algebra".into()))?;
        let names = match (&spec.names, spec.dim) {
            (Some(ns), Some(d)) if ns.len() != d => return Err(Error::Input(format!("lie_algebra.names has {} entries but dim is {d}", ns.len()))),
            (Some(ns), _) => Some(ns.clone()),
            (None, Some(d)) => Some((1..=d).map(|i| i.to_string()).collect()),
            (None, None) => None,
        };
        match spec.preset {
            Some(LiePreset::Su2) => {
                let g = LieAlgebra::su2();
                if names.as_ref().is_some_and(|ns| ns.len() != 3) || !spec.structure.is_empty() {
                    return Err(Error::Input("the su2 preset takes no structure and has dimension 3".into()));
                }
                Ok(g)
            }
            Some(LiePreset::Abelian) => {
                let names = names.ok_or_else(|| Error::Input("the abelian preset needs dim or names".into()))?;
                if !spec.structure.is_empty() {
                    return Err(Error::Input("the abelian preset takes no structure".into()));
                }
                LieAlgebra::from_entries(names, &[], false)
            }
            None => {
                let names = names.ok_or_else(|| Error::Input("lie_algebra needs a preset, dim or names".into()))?;
                let index =
                    |s: &str| names.iter().position(|n| n == s).ok_or_else(|| Error::Input(format!("lie_algebra.structure: unknown basis label `{s}`")));
                let entries = spec.structure.iter().map(|e| Ok((index(&e.a)?, index(&e.b)?, index(&e.c)?, e.f.value()?))).collect::<Result<Vec<_>>>()?;
                LieAlgebra::from_entries(names, &entries, spec.antisymmetrize)
            }
        }
    }

    pub fn action(&self, g: &LieAlgebra, model: &CdgaModel) -> Result<LieAction> {
        let Some(exprs) = &self.spec.action else {
            return Ok(LieAction::trivial(g, model));
        };
        if exprs.len() != g.dim() {
            return Err(Error::Input(format!("action lists {} fields for a {}-dimensional Lie algebra", exprs.len(), g.dim())));
        }
        let fields = exprs.iter().enumerate().map(|(a, s)| located(&format!("action[{a}]"), s, parse_field(s, model))).collect::<Result<Vec<_>>>()?;
        LieAction::new(g, model, fields)
    }

    pub fn has_bundle(&self) -> bool {
        self.spec.bundle.is_some()
    }

    pub fn bundle(&self, model: &CdgaModel) -> Result<RnBundle> {
        let b = self.spec.bundle.as_ref().ok_or_else(|| Error::Input("the problem has no bundle".into()))?;
        let h = located("bundle.H", &b.h, parse_form(&b.h, model))?;
        located("bundle.H", &b.h, RnBundle::new(model, b.n, h))
    }

    /// The spec's moment forms, or zero moment data when absent.
    pub fn alpha(&self, ctx: LiftContext<'_>) -> Result<AlphaAssignment> {
        let Some(srcs) = &self.spec.alpha else {
            return Ok(AlphaAssignment::zero(ctx));
        };
        if srcs.len() != ctx.g.dim() {
            return Err(Error::Input(format!("alpha lists {} forms for a {}-dimensional Lie algebra", srcs.len(), ctx.g.dim())));
        }
        let model = ctx.bundle.model();
        let forms = srcs.iter().enumerate().map(|(a, s)| located(&format!("alpha[{a}]"), s, parse_form(s, model))).collect::<Result<Vec<_>>>()?;
        located("alpha", "", AlphaAssignment::new(ctx, forms))
    }

    pub fn has_sigma(&self) -> bool {
        !self.spec.sigma.is_empty()
    }

    pub fn sigma(&self, ctx: LiftContext<'_>) -> Result<SigmaLadder> {
        let mut l = SigmaLadder::zero(ctx.bundle.n());
        for (i, e) in self.spec.sigma.iter().enumerate() {
            let idx = e
                .args
                .iter()
                .map(|s| ctx.g.index(s).ok_or_else(|| Error::Input(format!("sigma[{i}]: unknown basis label `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            let v = located(&format!("sigma[{i}].value"), &e.value, parse_form(&e.value, ctx.bundle.model()))?;
            l.set(&idx, v)?;
        }
        Ok(l)
    }

    /// `brst` (or `brst_other`) parsed in the BRST algebra. Without `brst`, the
    /// first cochain defaults to `W = H + α_aΩᵃ`.
    pub fn brst_element(&self, ctx: LiftContext<'_>, other: bool) -> Result<GradedElement> {
        let (key, src) = if other { ("brst_other", &self.spec.brst_other) } else { ("brst", &self.spec.brst) };
        let cx = brst_differential(ctx.g, ctx.act, ctx.bundle.model())?;
        match src {
            Some(s) => located(key, s, parse_element(s, cx.algebra(), Some(&cx.diff))),
            None if !other => {
                let alg = cx.algebra();
                let alpha = self.alpha(ctx)?;
                let mut w = ctx.bundle.h().embed(alg)?;
                for (a, al) in alpha.alphas().iter().enumerate() {
                    w = &w + &(&al.embed(alg)? * &GradedElement::generator(alg, &ctx.g.omega_name(a))?);
                }
                Ok(w)
            }
            None => Err(Error::Input("the problem has no brst_other".into())),
        }
    }

    pub fn element_names(&self) -> impl Iterator<Item = &str> {
        self.spec.elements.keys().map(|s| s.as_str())
    }

    pub fn element_spec(&self, name: &str) -> Result<&ElementSpec> {
        self.spec.elements.get(name).ok_or_else(|| Error::Input(format!("no element named `{name}`")))
    }

    /// The moment form of a hamiltonian element.
    pub fn hamiltonian_form(&self, p: &RnBundle, name: &str) -> Result<GradedElement> {
        let e = self.element_spec(name)?;
        if e.kind != ElementKind::Hamiltonian {
            return Err(Error::Input(format!("element `{name}` is not hamiltonian")));
        }
        let src = e.form.as_deref().ok_or_else(|| Error::Input(format!("elements.{name} needs a form")))?;
        located(&format!("elements.{name}.form"), src, parse_form(src, p.model()))
    }

    pub fn element(&self, p: &RnBundle, name: &str) -> Result<SymElement> {
        let e = self.element_spec(name)?;
        let model = p.model();
        let path = format!("elements.{name}");
        let form = |zero_ok: bool| -> Result<GradedElement> {
            match e.form.as_deref() {
                Some(s) => located(&format!("{path}.form"), s, parse_form(s, model)),
                None if zero_ok => Ok(GradedElement::zero(model.algebra())),
                None => Err(Error::Input(format!("{path} needs a form"))),
            }
        };
        let field = || -> Result<_> {
            let s = e.field.as_deref().ok_or_else(|| Error::Input(format!("{path} needs a field")))?;
            located(&format!("{path}.field"), s, parse_field(s, model))
        };
        let built = match e.kind {
            ElementKind::Lie => p.lie(field()?, form(true)?),
            ElementKind::Contraction => {
                let x = match e.field.as_deref() {
                    Some(_) => field()?,
                    None => crate::model::VectorField::zero(model),
                };
                p.contraction(x, form(true)?)
            }
            ElementKind::Form => {
                let q = e.degree.ok_or_else(|| Error::Input(format!("{path} needs a degree")))?;
                p.form(q, form(false)?)
            }
            ElementKind::Hamiltonian => hamiltonian_pair(p, &form(false)?),
        };
        located(&path, "", built)
    }
}

fn custom_model(c: &CustomModel) -> Result<CdgaModel> {
    let gens = c.generators.iter().map(|g| Generator::new(g.name.clone(), g.degree)).collect();
    let alg = GradedAlgebra::new(gens, c.coordinates.clone(), None)?;
    let parse = |path: String, src: &str| located(&path, src, parse_element(src, &alg, None));
    let mut images = Vec::new();
    for (sym, src) in &c.differential {
        if alg.generator_index(sym).is_none() && alg.coord_index(sym).is_none() {
            return Err(Error::Input(format!("model.differential: unknown symbol `{sym}`")));
        }
        images.push((sym.as_str(), parse(format!("model.differential.{sym}"), src)?));
    }
    let d = located("model.differential", "", Derivation::from_images(&alg, 1, &images))?;
    let mut names = Vec::new();
    let mut contractions = Vec::new();
    for f in &c.fields {
        let mut imgs = Vec::new();
        for (sym, src) in &f.contraction {
            if alg.generator_index(sym).is_none() {
                return Err(Error::Input(format!("model.fields.{}: `{sym}` is not a generator", f.name)));
            }
            imgs.push((sym.as_str(), parse(format!("model.fields.{}.contraction.{sym}", f.name), src)?));
        }
        contractions.push(located(&format!("model.fields.{}", f.name), "", Derivation::from_images(&alg, -1, &imgs))?);
        names.push(f.name.clone());
    }
    CdgaModel::new(c.name.clone().unwrap_or_else(|| "custom".into()), alg, d, names, contractions, c.top_degree)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROTATION: &str = r#"{
        "model": {"builtin": "affine", "m": 2},
        "lie_algebra": {"dim": 1},
        "action": ["x*Dy - y*Dx"],
        "bundle": {"n": 1, "H": "dx dy"},
        "alpha": ["-(x^2 + y^2)/2"],
        "elements": {"hx": {"kind": "hamiltonian", "form": "x"}}
    }"#;

    #[test]
    fn loads_rotation() {
        let p = Problem::from_json(ROTATION).unwrap();
        let m = p.model().unwrap();
        let g = p.lie_algebra().unwrap();
        let act = p.action(&g, &m).unwrap();
        let b = p.bundle(&m).unwrap();
        let ctx = LiftContext { g: &g, act: &act, bundle: &b };
        assert_eq!(p.alpha(ctx).unwrap().alphas()[0].to_string(), "-1/2*x^2 - 1/2*y^2");
        let w = p.brst_element(ctx, false).unwrap();
        let w = w.to_string();
        assert!(w.contains("dx*dy") && w.contains("Omega1"), "{w}");
        assert!(matches!(p.element(&b, "hx").unwrap(), SymElement::Contraction { .. }));
        assert_eq!(p.cap(None), DEFAULT_CAP);
        assert_eq!(p.cap(Some(5)), 5);
    }

    #[test]
    fn custom_model_and_locations() {
        let src = r#"{
            "model": {"generators": [{"name": "a", "degree": 1}, {"name": "b", "degree": 2}],
                      "differential": {"a": "b"},
                      "fields": [{"name": "Da", "contraction": {"a": "1"}}],
                      "top_degree": 2},
            "bundle": {"n": 1, "H": "b + a b"}
        }"#;
        let p = Problem::from_json(src).unwrap();
        let m = p.model().unwrap();
        assert_eq!(m.vector_field_dim(), Some(1));
        let e = p.bundle(&m).unwrap_err();
        assert!(matches!(e, Error::Degree(ref s) if s.starts_with("bundle.H")), "{e}");

        let bad = ROTATION.replace("dx dy", "dx dq");
        let p = Problem::from_json(&bad).unwrap();
        let e = p.bundle(&p.model().unwrap()).unwrap_err();
        assert!(matches!(e, Error::Parse { pos: 3, .. }), "{e}");
    }

    #[test]
    fn broken_jacobi_is_a_check_failure() {
        let src = r#"{
            "model": {"builtin": "point"},
            "lie_algebra": {"names": ["e", "f", "h"], "structure": [
                {"a": "h", "b": "e", "c": "f", "f": 1},
                {"a": "e", "b": "h", "c": "e", "f": 2},
                {"a": "f", "b": "h", "c": "f", "f": "-3"}]}
        }"#;
        let e = Problem::from_json(src).unwrap().lie_algebra().unwrap_err();
        assert!(e.is_check_failure(), "{e}");
        assert!(Problem::from_json(r#"{"model": {"builtin": "cube"}}"#).is_err());
    }
}
