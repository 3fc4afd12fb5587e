//! Lie algebras, infinitesimal actions and the equivariant complexes built
//! from them: Chevalley–Eilenberg, Weil, BRST and Cartan.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Generator, GradedAlgebra, GradedElement};
use crate::cohomology::GradedComplex;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::model::{CdgaModel, VectorField};
use crate::scalar::{q, q_frac, Scalar};

/// Structure constants `f^a_{bc}` with `[b, c] = f^a_{bc} a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra {
    names: Vec<String>,
    f: Vec<Vec<Vec<Scalar>>>,
}

impl LieAlgebra {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn new(names: Vec<String>, f: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let n = names.len();
        if f.len() != n || f.iter().any(|m| m.len() != n || m.iter().any(|r| r.len() != n)) {
            return Err(Error::Shape(format!("structure constants must be {n}×{n}×{n}")));
        }
        let g = LieAlgebra { names, f };
        g.validate()?;
        Ok(g)
    }

    /// From sparse `(a, b, c, f^a_{bc})` entries. With `antisymmetrize`, each
    /// entry also sets `f^a_{cb} = −value`.
    pub fn from_entries(names: Vec<String>, entries: &[(usize, usize, usize, Scalar)], antisymmetrize: bool) -> Result<Self> {
        let n = names.len();
        let mut f = vec![vec![vec![Scalar::zero(); n]; n]; n];
        for (a, b, c, v) in entries {
            if *a >= n || *b >= n || *c >= n {
                return Err(Error::Shape(format!("index ({a},{b},{c}) out of range for dimension {n}")));
            }
            f[*a][*b][*c] = v.clone();
            if antisymmetrize {
                f[*a][*c][*b] = -v.clone();
            }
        }
        Self::new(names, f)
    }

    pub fn abelian(k: usize) -> Self {
        let names = (1..=k).map(|i| i.to_string()).collect();
        LieAlgebra { names, f: vec![vec![vec![Scalar::zero(); k]; k]; k] }
    }

    /// `f^a_{bc} = ε_{abc}`.
    pub fn su2() -> Self {
        let mut entries = Vec::new();
        for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            entries.push((a, b, c, q(1)));
        }
        Self::from_entries(vec!["1".into(), "2".into(), "3".into()], &entries, true).expect("su(2) is a Lie algebra")
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.f[a][b][c] != -self.f[a][c][b].clone() {
                        return Err(Error::NotAntisymmetric(self.names[a].clone(), self.names[b].clone(), self.names[c].clone()));
                    }
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = Scalar::zero();
                        for e in 0..n {
                            s += &self.f[e][b][c] * &self.f[a][e][d];
                            s += &self.f[e][c][d] * &self.f[a][e][b];
                            s += &self.f[e][d][b] * &self.f[a][e][c];
                        }
                        if !s.is_zero() {
                            let nm = |i: usize| self.names[i].clone();
                            return Err(Error::Jacobi(nm(a), nm(b), nm(c), nm(d)));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `f^a_{bc}`.
    pub fn f(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.f[a][b][c]
    }

    pub fn is_abelian(&self) -> bool {
        self.f.iter().flatten().flatten().all(|v| v.is_zero())
    }

    pub fn theta_name(&self, a: usize) -> String {
        format!("theta{}", self.names[a])
    }

    pub fn omega_name(&self, a: usize) -> String {
        format!("Omega{}", self.names[a])
    }

    fn thetas(&self) -> Vec<Generator> {
        (0..self.dim()).map(|a| Generator::new(self.theta_name(a), 1)).collect()
    }

    fn omegas(&self) -> Vec<Generator> {
        (0..self.dim()).map(|a| Generator::new(self.omega_name(a), 2)).collect()
    }
}

/// An infinitesimal action `a ↦ X_a` by vector fields of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAction {
    fields: Vec<VectorField>,
}

impl LieAction {
    /// Checks that `[X_a, X_b] = f^c_{ab} X_c`.
    pub fn new(g: &LieAlgebra, model: &CdgaModel, fields: Vec<VectorField>) -> Result<Self> {
        if fields.len() != g.dim() {
            return Err(Error::Shape(format!("{} vector fields for a Lie algebra of dimension {}", fields.len(), g.dim())));
        }
        for a in 0..g.dim() {
            for b in 0..g.dim() {
                let lhs = model.vf_bracket(&fields[a], &fields[b])?;
                let mut rhs = VectorField::zero(model);
                for (c, x) in fields.iter().enumerate() {
                    rhs = rhs.add(&x.scale(g.f(c, a, b)));
                }
                let res = lhs.sub(&rhs);
                if !res.is_zero() {
                    return Err(Error::NotHomomorphism(g.names[a].clone(), g.names[b].clone(), model.field_string(&res)));
                }
            }
        }
        Ok(LieAction { fields })
    }

    pub fn trivial(g: &LieAlgebra, model: &CdgaModel) -> Self {
        LieAction { fields: vec![VectorField::zero(model); g.dim()] }
    }

    pub fn fields(&self) -> &[VectorField] {
        &self.fields
    }

    pub fn field(&self, a: usize) -> &VectorField {
        &self.fields[a]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    Ce,
    Weil,
    Brst,
    Cartan,
}

/// A graded algebra together with its equivariant differential.
#[derive(Clone, Debug)]
pub struct EquivariantComplex {
    pub kind: ComplexKind,
    pub diff: Derivation,
}

impl EquivariantComplex {
    pub fn algebra(&self) -> &Algebra {
        self.diff.algebra()
    }

    pub fn graded(&self, coeff_cap: u32) -> Result<GradedComplex> {
        GradedComplex::new(self.diff.clone(), coeff_cap)
    }
}

pub fn ce_algebra(g: &LieAlgebra, model: &CdgaModel) -> Result<Algebra> {
    model.algebra().extended(g.thetas(), vec![])
}

pub fn weil_algebra(g: &LieAlgebra) -> Result<Algebra> {
    let mut gens = g.thetas();
    gens.extend(g.omegas());
    GradedAlgebra::new(gens, vec![], None)
}

pub fn brst_algebra(g: &LieAlgebra, model: &CdgaModel) -> Result<Algebra> {
    let mut gens = g.thetas();
    gens.extend(g.omegas());
    model.algebra().extended(gens, vec![])
}

pub fn cartan_algebra(g: &LieAlgebra, model: &CdgaModel) -> Result<Algebra> {
    model.algebra().extended(g.omegas(), vec![])
}

fn gen(alg: &Algebra, name: &str) -> GradedElement {
    GradedElement::generator(alg, name).expect("generator declared by construction")
}

/// `−½ f^a_{bc} θᵇθᶜ`.
fn ce_theta_image(g: &LieAlgebra, alg: &Algebra, a: usize) -> GradedElement {
    let mut out = GradedElement::zero(alg);
    for b in 0..g.dim() {
        for c in 0..g.dim() {
            let f = g.f(a, b, c);
            if !f.is_zero() {
                let t = &gen(alg, &g.theta_name(b)) * &gen(alg, &g.theta_name(c));
                out = &out + &t.scale(&(f * q_frac(-1, 2)));
            }
        }
    }
    out
}

/// `f^a_{bc} Ωᵇθᶜ`.
fn weil_omega_image(g: &LieAlgebra, alg: &Algebra, a: usize) -> GradedElement {
    let mut out = GradedElement::zero(alg);
    for b in 0..g.dim() {
        for c in 0..g.dim() {
            let f = g.f(a, b, c);
            if !f.is_zero() {
                let t = &gen(alg, &g.omega_name(b)) * &gen(alg, &g.theta_name(c));
                out = &out + &t.scale(f);
            }
        }
    }
    out
}

/// `Σ_a e_a · D_a` for per-basis derivations lifted to `alg`.
fn weighted_sum(alg: &Algebra, weights: impl Fn(usize) -> GradedElement, ds: &[Derivation], degree: i32) -> Result<Derivation> {
    let mut out = Derivation::zero(alg, degree);
    for (a, d) in ds.iter().enumerate() {
        let lifted = d.extend_to(alg)?;
        out = out.checked_add(&lifted.left_mul(&weights(a))?)?;
    }
    Ok(out)
}

fn lie_derivatives(model: &CdgaModel, act: &LieAction) -> Vec<Derivation> {
    act.fields.iter().map(|x| model.lie_derivative(x)).collect()
}

fn contractions(model: &CdgaModel, act: &LieAction) -> Vec<Derivation> {
    act.fields.iter().map(|x| model.contraction(x)).collect()
}

/// `θᵃ L_{X_a}` on the given algebra.
pub fn theta_lie(g: &LieAlgebra, model: &CdgaModel, act: &LieAction, alg: &Algebra) -> Result<Derivation> {
    weighted_sum(alg, |a| gen(alg, &g.theta_name(a)), &lie_derivatives(model, act), 1)
}

/// `Ωᵃ ι_{X_a}` on the given algebra.
pub fn omega_contraction(g: &LieAlgebra, model: &CdgaModel, act: &LieAction, alg: &Algebra) -> Result<Derivation> {
    weighted_sum(alg, |a| gen(alg, &g.omega_name(a)), &contractions(model, act), 1)
}

/// `δθᵃ = −½f^a_{bc}θᵇθᶜ` and `δω = θᵃL_{X_a}ω + dω`.
pub fn ce_differential(g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<EquivariantComplex> {
    let alg = ce_algebra(g, model)?;
    let mut delta1 = Derivation::zero(&alg, 1);
    for a in 0..g.dim() {
        delta1 = delta1.with_image(&g.theta_name(a), ce_theta_image(g, &alg, a))?;
    }
    let diff = delta1.checked_add(&theta_lie(g, model, act, &alg)?)?.checked_add(&model.d().extend_to(&alg)?)?;
    Ok(EquivariantComplex { kind: ComplexKind::Ce, diff })
}

fn weil_on(g: &LieAlgebra, alg: &Algebra, omega_sign: &Scalar) -> Result<Derivation> {
    let mut w = Derivation::zero(alg, 1);
    for a in 0..g.dim() {
        let om = gen(alg, &g.omega_name(a)).scale(omega_sign);
        w = w.with_image(&g.theta_name(a), &om + &ce_theta_image(g, alg, a))?;
        w = w.with_image(&g.omega_name(a), weil_omega_image(g, alg, a))?;
    }
    Ok(w)
}

/// `δθᵃ = Ωᵃ − ½f^a_{bc}θᵇθᶜ`, `δΩᵃ = f^a_{bc}Ωᵇθᶜ`.
pub fn weil_differential(g: &LieAlgebra) -> Result<EquivariantComplex> {
    let alg = weil_algebra(g)?;
    Ok(EquivariantComplex { kind: ComplexKind::Weil, diff: weil_on(g, &alg, &Scalar::one())? })
}

/// Sign of `Ωᵃ` in `δθᵃ` inside the BRST complex. With `θᵃL_{X_a}` and
/// `Ωᵃι_{X_a}` both entering with `+`, the `ΩᵃL_{X_a}` terms of `δ²` cancel
/// only when the curvature enters `δθᵃ` with a minus sign.
pub const BRST_CURVATURE_SIGN: i64 = -1;

/// `δ = δ₁ + θᵃL_{X_a} + Ωᵃι_{X_a} + d` on `Λ𝔤*⊗S𝔤*⊗Ω•M`.
pub fn brst_differential(g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<EquivariantComplex> {
    let alg = brst_algebra(g, model)?;
    let diff = weil_on(g, &alg, &q(BRST_CURVATURE_SIGN))?
        .checked_add(&theta_lie(g, model, act, &alg)?)?
        .checked_add(&omega_contraction(g, model, act, &alg)?)?
        .checked_add(&model.d().extend_to(&alg)?)?;
    Ok(EquivariantComplex { kind: ComplexKind::Brst, diff })
}

/// `d_C = d + Ωᵃι_{X_a}` on `Ω•M⊗S𝔤*`.
pub fn cartan_differential(g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<EquivariantComplex> {
    let alg = cartan_algebra(g, model)?;
    let diff = model.d().extend_to(&alg)?.checked_add(&omega_contraction(g, model, act, &alg)?)?;
    Ok(EquivariantComplex { kind: ComplexKind::Cartan, diff })
}

/// `L̃_b`: `L_{X_b}` on forms and `Ωᵃ ↦ −f^a_{bc}Ωᶜ` on curvature generators.
pub fn extended_lie_derivative(g: &LieAlgebra, act: &LieAction, model: &CdgaModel, alg: &Algebra, b: usize) -> Result<Derivation> {
    let mut l = model.lie_derivative(act.field(b)).extend_to(alg)?;
    for a in 0..g.dim() {
        let mut img = GradedElement::zero(alg);
        for c in 0..g.dim() {
            let f = g.f(a, b, c);
            if !f.is_zero() {
                img = &img - &gen(alg, &g.omega_name(c)).scale(f);
            }
        }
        if alg.generator_index(&g.omega_name(a)).is_some() {
            l = l.with_image(&g.omega_name(a), img)?;
        }
    }
    Ok(l)
}

/// `L̃_{X_b}(e)` for every basis element `b`; the element is invariant iff all vanish.
pub fn invariance_check(e: &GradedElement, g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<Vec<GradedElement>> {
    (0..g.dim()).map(|b| Ok(extended_lie_derivative(g, act, model, e.algebra(), b)?.apply(e))).collect()
}

/// The infinitesimal pieces of the van Est type map, as derivations of the BRST algebra.
#[derive(Clone, Debug)]
pub struct VanEstComponents {
    /// `θᵃ ↦ −½fθθ`, `Ωᵃ ↦ fΩθ`, `ω ↦ θᵃL_{X_a}ω`.
    pub r_dbar: Derivation,
    /// `θᵃ ↦ ±Ωᵃ` (sign [`BRST_CURVATURE_SIGN`]).
    pub r_iota_bar: Derivation,
    /// `d` on forms.
    pub r_d: Derivation,
    /// `Ωᵃι_{X_a}` on forms.
    pub r_iota: Derivation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VanEstReport {
    pub theta_ok: bool,
    pub omega_ok: bool,
    pub forms_ok: bool,
    /// The four families sum to the BRST differential on every generator.
    pub matches: bool,
    pub residuals: Vec<(String, String)>,
}

/// Builds each identity family from its own generator table.
pub fn van_est_components(g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<VanEstComponents> {
    let alg = brst_algebra(g, model)?;
    let mut r_dbar = Derivation::zero(&alg, 1);
    let mut r_iota_bar = Derivation::zero(&alg, 1);
    for a in 0..g.dim() {
        r_dbar = r_dbar.with_image(&g.theta_name(a), ce_theta_image(g, &alg, a))?;
        r_dbar = r_dbar.with_image(&g.omega_name(a), weil_omega_image(g, &alg, a))?;
        r_iota_bar = r_iota_bar.with_image(&g.theta_name(a), gen(&alg, &g.omega_name(a)).scale(&q(BRST_CURVATURE_SIGN)))?;
    }
    let lies = lie_derivatives(model, act);
    let ctrs = contractions(model, act);
    let mut r_d = Derivation::zero(&alg, 1);
    let mut r_iota = Derivation::zero(&alg, 1);
    let model_alg = model.algebra();
    let symbols = model_alg.generators().iter().map(|g| g.name.clone()).chain(model_alg.coords().iter().cloned());
    for name in symbols {
        let w = GradedElement::symbol(model_alg, &name)?;
        let mut via_lie = GradedElement::zero(&alg);
        let mut via_iota = GradedElement::zero(&alg);
        for a in 0..g.dim() {
            via_lie = &via_lie + &(&gen(&alg, &g.theta_name(a)) * &lies[a].apply(&w).embed(&alg)?);
            via_iota = &via_iota + &(&gen(&alg, &g.omega_name(a)) * &ctrs[a].apply(&w).embed(&alg)?);
        }
        r_dbar = r_dbar.with_image(&name, via_lie)?;
        r_iota = r_iota.with_image(&name, via_iota)?;
        r_d = r_d.with_image(&name, model.d().apply(&w).embed(&alg)?)?;
    }
    Ok(VanEstComponents { r_dbar, r_iota_bar, r_d, r_iota })
}

/// Compares `δ₁θᵃ = (R(d̄)+R(ῑ))θᵃ`, `δ₁Ωᵃ = R(d̄)Ωᵃ` and
/// `δ₂ω = (R(d̄)+R(d)+R(ι))ω` against [`brst_differential`].
pub fn van_est_image_identities(g: &LieAlgebra, act: &LieAction, model: &CdgaModel) -> Result<VanEstReport> {
    let comps = van_est_components(g, act, model)?;
    let brst = brst_differential(g, act, model)?.diff;
    let alg = brst.algebra().clone();
    let total = comps.r_dbar.checked_add(&comps.r_iota_bar)?.checked_add(&comps.r_d)?.checked_add(&comps.r_iota)?;
    let mut residuals = Vec::new();
    let (mut theta_ok, mut omega_ok, mut forms_ok) = (true, true, true);
    let symbols = alg.generators().iter().map(|g| g.name.clone()).chain(alg.coords().iter().cloned());
    for name in symbols {
        let diff = total.image_of(&name)? - brst.image_of(&name)?;
        if !diff.is_zero() {
            if name.starts_with("theta") && g.index(&name["theta".len()..]).is_some() {
                theta_ok = false;
            } else if name.starts_with("Omega") && g.index(&name["Omega".len()..]).is_some() {
                omega_ok = false;
            } else {
                forms_ok = false;
            }
            residuals.push((name, diff.to_string()));
        }
    }
    Ok(VanEstReport { theta_ok, omega_ok, forms_ok, matches: residuals.is_empty(), residuals })
}
