//! Finite CDGA models of Ω•M with a basis of vector fields.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Generator, GradedAlgebra, GradedElement};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::poly::{join_signed, CoeffPoly};
use crate::scalar::{format_scalar, Scalar};

/// Identifier of a builtin model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "builtin", rename_all = "snake_case")]
pub enum ModelId {
    Point,
    Affine {
        m: usize,
        #[serde(default)]
        cap: Option<u32>,
    },
    Torus {
        k: usize,
    },
    SphereEven {
        n: u32,
    },
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelId::Point => write!(f, "point"),
            ModelId::Affine { m, cap: None } => write!(f, "affine({m})"),
            ModelId::Affine { m, cap: Some(c) } => write!(f, "affine({m}, cap {c})"),
            ModelId::Torus { k } => write!(f, "torus({k})"),
            ModelId::SphereEven { n } => write!(f, "sphere_even({n})"),
        }
    }
}

/// A `CoeffPoly`-linear combination of the basis fields of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorField {
    comps: Vec<CoeffPoly>,
}

impl VectorField {
    pub fn zero(model: &CdgaModel) -> Self {
        VectorField { comps: vec![CoeffPoly::zero(model.alg.nvars()); model.fields.len()] }
    }

    pub fn basis(model: &CdgaModel, j: usize) -> Self {
        let mut v = Self::zero(model);
        v.comps[j] = CoeffPoly::one(model.alg.nvars());
        v
    }

    pub fn from_components(model: &CdgaModel, comps: Vec<CoeffPoly>) -> Result<Self> {
        if comps.len() != model.fields.len() {
            return Err(Error::Shape(format!("expected {} components, got {}", model.fields.len(), comps.len())));
        }
        Ok(VectorField { comps })
    }

    pub fn components(&self) -> &[CoeffPoly] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField { comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: &Scalar) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul_poly(&self, p: &CoeffPoly) -> VectorField {
        VectorField { comps: self.comps.iter().map(|a| a.mul(p)).collect() }
    }
}

/// A finitely presented model of the de Rham complex.
#[derive(Clone, Debug)]
pub struct CdgaModel {
    name: String,
    alg: Algebra,
    d: Derivation,
    fields: Vec<String>,
    contractions: Vec<Derivation>,
    duals: Vec<Option<usize>>,
    top_degree: i32,
    field_dim: Option<usize>,
}

fn names(prefix: &str, m: usize) -> Vec<String> {
    const SHORT: [&str; 3] = ["x", "y", "z"];
    if m <= SHORT.len() {
        SHORT[..m].iter().map(|s| format!("{prefix}{s}")).collect()
    } else {
        (1..=m).map(|i| format!("{prefix}x{i}")).collect()
    }
}

impl CdgaModel {
    /// Validates and assembles a model: `d² = 0`, each contraction has degree −1
    /// and squares to zero.
    pub fn new(name: impl Into<String>, alg: Algebra, d: Derivation, fields: Vec<String>, contractions: Vec<Derivation>, top_degree: i32) -> Result<Self> {
        if fields.len() != contractions.len() {
            return Err(Error::Shape("one contraction per vector field is required".into()));
        }
        if d.degree() != 1 || !GradedAlgebra::same(d.algebra(), &alg) {
            return Err(Error::InvalidParams("the differential must be a degree 1 derivation of the model algebra".into()));
        }
        d.ensure_homological()?;
        for (f, c) in fields.iter().zip(&contractions) {
            if c.degree() != -1 || !GradedAlgebra::same(c.algebra(), &alg) {
                return Err(Error::InvalidParams(format!("contraction with `{f}` must have degree -1")));
            }
            if let Some((g, v)) = c.square_on_generators().into_iter().find(|(_, v)| !v.is_zero()) {
                return Err(Error::InvalidParams(format!("ι_{f} ∘ ι_{f} is nonzero on {g}: {v}")));
            }
            if alg.coord_index(f).is_some() || alg.generator_index(f).is_some() {
                return Err(Error::DuplicateSymbol(f.clone()));
            }
        }
        // a generator g_j with ι_{X_i} g_j = δ_ij lets us read off vector fields from contractions
        let duals = (0..fields.len())
            .map(|j| {
                (0..alg.ngens()).find(|&g| {
                    contractions.iter().enumerate().all(|(i, c)| {
                        let v = c.on_generator(g).as_scalar();
                        v == Some(if i == j { Scalar::one() } else { Scalar::zero() })
                    })
                })
            })
            .collect();
        // without coordinates every field is a constant combination of the basis
        let field_dim = (alg.nvars() == 0).then_some(fields.len());
        Ok(CdgaModel { name: name.into(), alg, d, fields, contractions, duals, top_degree, field_dim })
    }

    pub fn builtin(id: &ModelId) -> Result<Self> {
        match *id {
            ModelId::Point => Self::point(),
            ModelId::Affine { m, cap } => Self::affine(m, cap),
            ModelId::Torus { k } => Self::torus(k),
            ModelId::SphereEven { n } => Self::sphere_even(n),
        }
    }

    pub fn point() -> Result<Self> {
        let alg = GradedAlgebra::new(vec![], vec![], None)?;
        let d = Derivation::zero(&alg, 1);
        Self::new("point", alg, d, vec![], vec![], 0)
    }

    /// ℝᵐ with polynomial coefficients. Coordinates are `x, y, z` for `m ≤ 3`,
    /// otherwise `x1..xm`; generators and fields prefix them with `d` and `D`.
    pub fn affine(m: usize, cap: Option<u32>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParams("affine(m) needs m ≥ 1".into()));
        }
        let coords = names("", m);
        let gens: Vec<Generator> = names("d", m).into_iter().map(|n| Generator::new(n, 1)).collect();
        let fields = names("D", m);
        let alg = GradedAlgebra::new(gens, coords, cap)?;
        let d = Derivation::new(&alg, 1, vec![GradedElement::zero(&alg); m], (0..m).map(|i| GradedElement::generator_at(&alg, i)).collect())?;
        let contractions = (0..m)
            .map(|j| {
                let imgs = (0..m).map(|i| if i == j { GradedElement::one(&alg) } else { GradedElement::zero(&alg) }).collect();
                Derivation::new(&alg, -1, imgs, vec![GradedElement::zero(&alg); m])
            })
            .collect::<Result<_>>()?;
        Self::new(format!("{}", ModelId::Affine { m, cap }), alg, d, fields, contractions, m as i32)
    }

    /// Minimal model of the k-torus: odd generators with zero differential and
    /// invariant fields dual to them.
    pub fn torus(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("torus(k) needs k ≥ 1".into()));
        }
        let gens = (1..=k).map(|i| Generator::new(format!("th{i}"), 1)).collect();
        let alg = GradedAlgebra::new(gens, vec![], None)?;
        let d = Derivation::zero(&alg, 1);
        let contractions = (0..k)
            .map(|j| {
                let imgs = (0..k).map(|i| if i == j { GradedElement::one(&alg) } else { GradedElement::zero(&alg) }).collect();
                Derivation::new(&alg, -1, imgs, vec![])
            })
            .collect::<Result<_>>()?;
        let fields = (1..=k).map(|i| format!("e{i}")).collect();
        Self::new(format!("torus({k})"), alg, d, fields, contractions, k as i32)
    }

    /// Model `x` (degree n), `y` (degree 2n−1), `dy = x²` of the even sphere.
    pub fn sphere_even(n: u32) -> Result<Self> {
        if n == 0 || n % 2 == 1 {
            return Err(Error::InvalidParams(format!("sphere_even(n) needs even n ≥ 2, got {n}")));
        }
        let n = n as i32;
        let alg = GradedAlgebra::new(vec![Generator::new("x", n), Generator::new("y", 2 * n - 1)], vec![], None)?;
        let x = GradedElement::generator_at(&alg, 0);
        let d = Derivation::new(&alg, 1, vec![GradedElement::zero(&alg), &x * &x], vec![])?;
        Self::new(format!("sphere_even({n})"), alg, d, vec![], vec![], n)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn d(&self) -> &Derivation {
        &self.d
    }

    pub fn field_names(&self) -> &[String] {
        &self.fields
    }

    pub fn top_degree(&self) -> i32 {
        self.top_degree
    }

    pub fn coeff_cap(&self) -> Option<u32> {
        self.alg.coeff_cap()
    }

    /// Dimension of the model's space of vector fields when it is finite
    /// (invariant fields on tori, none on point and spheres).
    pub fn vector_field_dim(&self) -> Option<usize> {
        self.field_dim
    }

    pub fn field_index(&self, name: &str) -> Option<usize> {
        self.fields.iter().position(|f| f == name)
    }

    pub fn basis_field(&self, name: &str) -> Result<VectorField> {
        let j = self.field_index(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(VectorField::basis(self, j))
    }

    pub fn contraction(&self, x: &VectorField) -> Derivation {
        let mut out = Derivation::zero(&self.alg, -1);
        for (c, i) in x.comps.iter().zip(&self.contractions) {
            if !c.is_zero() {
                let f = GradedElement::from_poly(&self.alg, c.clone());
                out = &out + &i.left_mul(&f).expect("same algebra");
            }
        }
        out
    }

    /// `L_X = [d, ι_X]`.
    pub fn lie_derivative(&self, x: &VectorField) -> Derivation {
        self.d.commutator(&self.contraction(x)).expect("same algebra")
    }

    /// Reads a vector field off a degree −1 derivation, failing unless the
    /// derivation is exactly a contraction.
    pub fn field_from_contraction(&self, c: &Derivation) -> Result<VectorField> {
        if c.degree() != -1 && !c.is_zero() {
            return Err(Error::NotVectorField(format!("degree {} derivation", c.degree())));
        }
        let mut comps = Vec::with_capacity(self.fields.len());
        for (j, dual) in self.duals.iter().enumerate() {
            let g = dual.ok_or_else(|| Error::NotVectorField(format!("no generator dual to `{}`", self.fields[j])))?;
            let p = c.on_generator(g).as_poly().ok_or_else(|| Error::NotVectorField(c.to_string()))?;
            comps.push(p);
        }
        let z = VectorField { comps };
        if &self.contraction(&z) != c {
            return Err(Error::NotVectorField(format!("{c} is not in the span of the basis contractions")));
        }
        Ok(z)
    }

    /// Reads `X` off `L_X` using `L_X x_j = X^j` where the dual generator of
    /// field `j` is `d x_j`. Fails on models where that reading is unavailable
    /// (e.g. on tori every invariant `L_X` vanishes).
    pub fn field_from_lie_derivative(&self, l: &Derivation) -> Result<VectorField> {
        let mut comps = Vec::with_capacity(self.fields.len());
        for (j, dual) in self.duals.iter().enumerate() {
            let g = dual.ok_or_else(|| Error::Decode(format!("no generator dual to `{}`", self.fields[j])))?;
            let coord = (0..self.alg.nvars()).find(|&c| self.d.on_coord(c) == &GradedElement::generator_at(&self.alg, g));
            let c = coord.ok_or_else(|| Error::Decode(format!("`{}` is not the differential of a coordinate", self.alg.generators()[g].name)))?;
            let p = l.on_coord(c).as_poly().ok_or_else(|| Error::Decode(l.to_string()))?;
            comps.push(p);
        }
        let x = VectorField { comps };
        if &self.lie_derivative(&x) != l {
            return Err(Error::Decode(format!("{l} is not a Lie derivative")));
        }
        Ok(x)
    }

    /// Vector fields `x^e D_j` with coefficient degree ≤ `cap`.
    pub fn vector_field_basis(&self, cap: u32) -> Vec<VectorField> {
        let mut out = Vec::new();
        for j in 0..self.fields.len() {
            for e in crate::algebra::coeff_monomials(self.alg.nvars(), cap) {
                let mut v = VectorField::zero(self);
                v.comps[j] = CoeffPoly::monomial(e, Scalar::one());
                out.push(v);
            }
        }
        out
    }

    /// Forms of degree `k` with coefficient degree ≤ `cap`, as elements.
    pub fn form_basis(&self, k: i32, cap: u32) -> Result<Vec<GradedElement>> {
        Ok(crate::algebra::basis_in_degree(&self.alg, k, cap)?.iter().map(|b| b.to_element(&self.alg)).collect())
    }

    /// The field `Z` with `ι_Z = [L_X, ι_Y]`.
    pub fn vf_bracket(&self, x: &VectorField, y: &VectorField) -> Result<VectorField> {
        let c = self.lie_derivative(x).commutator(&self.contraction(y))?;
        self.field_from_contraction(&c)
    }

    pub fn field_string(&self, x: &VectorField) -> String {
        let mut parts = Vec::new();
        for (c, name) in x.comps.iter().zip(&self.fields) {
            if c.is_zero() {
                continue;
            }
            if c.len() == 1 {
                let (e, coef) = c.terms().next().unwrap();
                let negative = coef < &Scalar::zero();
                let abs = if negative { -coef.clone() } else { coef.clone() };
                let mono = crate::poly::monomial_string(e, self.alg.coords());
                let mut f = Vec::new();
                if !abs.is_one() {
                    f.push(format_scalar(&abs));
                }
                if !mono.is_empty() {
                    f.push(mono);
                }
                f.push(name.clone());
                parts.push((negative, f.join("*")));
            } else {
                parts.push((false, format!("({})*{}", c.display_with(self.alg.coords()), name)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            join_signed(parts)
        }
    }

    pub fn element(&self, name: &str) -> Result<GradedElement> {
        GradedElement::symbol(&self.alg, name)
    }
}
