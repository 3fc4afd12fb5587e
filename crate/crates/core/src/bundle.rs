//! ℝ[n]-bundles `P = T[1]M ⊕ ℝ[n]` with `Q = d + H∂t` and the dgla `sym*(P,Q)`.

use std::fmt;

use num_traits::One;

use crate::algebra::{Algebra, Generator, GradedElement};
use crate::cohomology::GradedComplex;
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::model::{CdgaModel, VectorField};
use crate::scalar::{minus_one_pow, Scalar};

/// Name of the fiber generator.
pub const FIBER: &str = "t";

#[derive(Clone, Debug)]
pub struct RnBundle {
    model: CdgaModel,
    n: u32,
    h: GradedElement,
    alg: Algebra,
    dt: Derivation,
    q: Derivation,
}

/// A typed element of `sym^q(P,Q)`, with forms over the base model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SymElement {
    /// `L_X + B∂t`, degree 0.
    Lie { x: VectorField, b: GradedElement },
    /// `ι_X + α∂t`, degree −1.
    Contraction { x: VectorField, alpha: GradedElement },
    /// `η∂t`, degree `q ≤ −2`.
    Form { degree: i32, eta: GradedElement },
}

impl SymElement {
    pub fn degree(&self) -> i32 {
        match self {
            SymElement::Lie { .. } => 0,
            SymElement::Contraction { .. } => -1,
            SymElement::Form { degree, .. } => *degree,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SymElement::Lie { x, b } => x.is_zero() && b.is_zero(),
            SymElement::Contraction { x, alpha } => x.is_zero() && alpha.is_zero(),
            SymElement::Form { eta, .. } => eta.is_zero(),
        }
    }

    /// The form attached to `∂t`.
    pub fn form_part(&self) -> &GradedElement {
        match self {
            SymElement::Lie { b, .. } => b,
            SymElement::Contraction { alpha, .. } => alpha,
            SymElement::Form { eta, .. } => eta,
        }
    }

    pub fn field(&self) -> Option<&VectorField> {
        match self {
            SymElement::Lie { x, .. } | SymElement::Contraction { x, .. } => Some(x),
            SymElement::Form { .. } => None,
        }
    }

    fn zip(
        &self,
        other: &SymElement,
        fx: impl Fn(&VectorField, &VectorField) -> VectorField,
        fe: impl Fn(&GradedElement, &GradedElement) -> GradedElement,
    ) -> Result<SymElement> {
        match (self, other) {
            (SymElement::Lie { x, b }, SymElement::Lie { x: y, b: c }) => Ok(SymElement::Lie { x: fx(x, y), b: fe(b, c) }),
            (SymElement::Contraction { x, alpha }, SymElement::Contraction { x: y, alpha: beta }) => {
                Ok(SymElement::Contraction { x: fx(x, y), alpha: fe(alpha, beta) })
            }
            (SymElement::Form { degree, eta }, SymElement::Form { degree: d2, eta: mu }) if degree == d2 => {
                Ok(SymElement::Form { degree: *degree, eta: fe(eta, mu) })
            }
            _ => Err(Error::Degree(format!("cannot add sym elements of degree {} and {}", self.degree(), other.degree()))),
        }
    }

    pub fn add(&self, other: &SymElement) -> Result<SymElement> {
        self.zip(other, |a, b| a.add(b), |a, b| a + b)
    }

    pub fn sub(&self, other: &SymElement) -> Result<SymElement> {
        self.zip(other, |a, b| a.sub(b), |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> SymElement {
        match self {
            SymElement::Lie { x, b } => SymElement::Lie { x: x.scale(c), b: b.scale(c) },
            SymElement::Contraction { x, alpha } => SymElement::Contraction { x: x.scale(c), alpha: alpha.scale(c) },
            SymElement::Form { degree, eta } => SymElement::Form { degree: *degree, eta: eta.scale(c) },
        }
    }
}

/// Description of `sym^q(P,Q)` together with a basis over a finite (or capped) model.
#[derive(Clone, Debug)]
pub struct SymSpace {
    pub degree: i32,
    pub description: String,
    pub basis: Vec<SymElement>,
}

impl RnBundle {
    /// `Q = d + H∂t`; fails unless `H` has degree `n+1` and `dH = 0`.
    pub fn new(model: &CdgaModel, n: u32, h: GradedElement) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("the fiber degree n must be at least 1".into()));
        }
        let h = h.embed(model.algebra())?;
        if !h.is_zero() && !h.is_homogeneous_of(n as i32 + 1) {
            return Err(Error::Degree(format!("H must be an {}-form, got {h}", n + 1)));
        }
        let dh = model.d().apply(&h);
        if !dh.is_zero() {
            return Err(Error::NotClosed(dh.to_string()));
        }
        let alg = model.algebra().extended(vec![], vec![Generator::new(FIBER, n as i32)])?;
        let dt = Derivation::from_images(&alg, -(n as i32), &[(FIBER, GradedElement::one(&alg))])?;
        let mut q = model.d().extend_to(&alg)?;
        if !h.is_zero() {
            q = q.checked_add(&dt.left_mul(&h.embed(&alg)?)?)?;
        }
        debug_assert!(q.is_homological().unwrap_or(false));
        Ok(RnBundle { model: model.clone(), n, h, alg, dt, q })
    }

    pub fn model(&self) -> &CdgaModel {
        &self.model
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn h(&self) -> &GradedElement {
        &self.h
    }

    /// Functions on `P`, `Ω•M ⊗ S[t]`.
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn q(&self) -> &Derivation {
        &self.q
    }

    pub fn dt(&self) -> &Derivation {
        &self.dt
    }

    /// The same bundle with `H = 0`.
    pub fn flat(&self) -> RnBundle {
        RnBundle::new(&self.model, self.n, GradedElement::zero(self.model.algebra())).expect("flat bundle is valid")
    }

    /// `Q ↦ d + (H + dB)∂t`.
    pub fn gauge(&self, b: &GradedElement) -> Result<RnBundle> {
        let b = b.embed(self.model.algebra())?;
        if !b.is_zero() && !b.is_homogeneous_of(self.n as i32) {
            return Err(Error::Degree(format!("a gauge parameter is an {}-form, got {b}", self.n)));
        }
        RnBundle::new(&self.model, self.n, &self.h + &self.model.d().apply(&b))
    }

    /// Gauge equivalence: `H − H'` exact in the base de Rham complex, decided
    /// with coefficient cap `cap`.
    pub fn are_equivalent(&self, other: &RnBundle, cap: u32) -> Result<bool> {
        if self.n != other.n {
            return Ok(false);
        }
        let diff = &self.h - &other.h.embed(self.model.algebra())?;
        Ok(GradedComplex::new(self.model.d().clone(), cap)?.is_exact(&diff)?.is_some())
    }

    fn form_degree(&self, q: i32) -> i32 {
        self.n as i32 + q
    }

    fn check_form(&self, e: &GradedElement, degree: i32, what: &str) -> Result<GradedElement> {
        let e = e.embed(self.model.algebra())?;
        if !e.is_zero() && !e.is_homogeneous_of(degree) {
            return Err(Error::Degree(format!("{what} must be a {degree}-form, got {e}")));
        }
        Ok(e)
    }

    /// `L_X H − dB`.
    pub fn symmetry_defect(&self, x: &VectorField, b: &GradedElement) -> GradedElement {
        &self.model.lie_derivative(x).apply(&self.h) - &self.model.d().apply(b)
    }

    /// `L_X + B∂t`, requiring `L_X H − dB = 0`.
    pub fn lie(&self, x: VectorField, b: GradedElement) -> Result<SymElement> {
        let b = self.check_form(&b, self.n as i32, "B")?;
        let defect = self.symmetry_defect(&x, &b);
        if !defect.is_zero() {
            return Err(Error::NotSymmetric(defect.to_string()));
        }
        Ok(SymElement::Lie { x, b })
    }

    /// `ι_X + α∂t`.
    pub fn contraction(&self, x: VectorField, alpha: GradedElement) -> Result<SymElement> {
        let alpha = self.check_form(&alpha, self.n as i32 - 1, "α")?;
        Ok(SymElement::Contraction { x, alpha })
    }

    /// `η∂t` in degree `q ≤ −2`.
    pub fn form(&self, q: i32, eta: GradedElement) -> Result<SymElement> {
        if q > -2 {
            return Err(Error::Degree(format!("pure form elements live in degree ≤ -2, got {q}")));
        }
        let eta = self.check_form(&eta, self.form_degree(q), "η")?;
        Ok(SymElement::Form { degree: q, eta })
    }

    pub fn zero_element(&self, q: i32) -> Result<SymElement> {
        let z = GradedElement::zero(self.model.algebra());
        match q {
            0 => Ok(SymElement::Lie { x: VectorField::zero(&self.model), b: z }),
            -1 => Ok(SymElement::Contraction { x: VectorField::zero(&self.model), alpha: z }),
            q if q < -1 => Ok(SymElement::Form { degree: q, eta: z }),
            _ => Err(Error::Degree(format!("sym^{q} is zero for q > 0"))),
        }
    }

    pub(crate) fn element_of_degree(&self, q: i32, x: VectorField, form: GradedElement) -> SymElement {
        match q {
            0 => SymElement::Lie { x, b: form },
            -1 => SymElement::Contraction { x, alpha: form },
            _ => SymElement::Form { degree: q, eta: form },
        }
    }

    pub(crate) fn check_element(&self, e: &SymElement) -> Result<()> {
        match e {
            SymElement::Lie { x, b } => {
                self.lie(x.clone(), b.clone())?;
            }
            SymElement::Contraction { alpha, .. } => {
                self.check_form(alpha, self.n as i32 - 1, "α")?;
            }
            SymElement::Form { degree, eta } => {
                self.form(*degree, eta.clone())?;
            }
        }
        Ok(())
    }

    /// `[Q, ·]` by the closed-form table.
    pub fn sym_d(&self, e: &SymElement) -> Result<SymElement> {
        self.check_element(e)?;
        let m = &self.model;
        Ok(match e {
            SymElement::Lie { .. } => SymElement::Lie { x: VectorField::zero(m), b: GradedElement::zero(m.algebra()) },
            SymElement::Contraction { x, alpha } => {
                let b = &m.d().apply(alpha) + &m.contraction(x).apply(&self.h);
                SymElement::Lie { x: x.clone(), b }
            }
            SymElement::Form { degree, eta } => {
                let d_eta = m.d().apply(eta);
                self.element_of_degree(degree + 1, VectorField::zero(m), d_eta)
            }
        })
    }

    /// The graded bracket of `sym*(P,Q)` by the closed-form table.
    pub fn sym_bracket(&self, a: &SymElement, b: &SymElement) -> Result<SymElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let m = &self.model;
        let zero_x = || VectorField::zero(m);
        let q = a.degree() + b.degree();
        use SymElement::*;
        Ok(match (a, b) {
            (Lie { x, b: bb }, Lie { x: y, b: c }) => {
                let form = &m.lie_derivative(x).apply(c) - &m.lie_derivative(y).apply(bb);
                Lie { x: m.vf_bracket(x, y)?, b: form }
            }
            (Lie { x, b: bb }, Contraction { x: y, alpha: beta }) => {
                let form = &m.lie_derivative(x).apply(beta) - &m.contraction(y).apply(bb);
                Contraction { x: m.vf_bracket(x, y)?, alpha: form }
            }
            (Lie { x, .. }, Form { eta, .. }) => self.element_of_degree(q, zero_x(), m.lie_derivative(x).apply(eta)),
            (Contraction { x, alpha }, Contraction { x: y, alpha: beta }) => {
                let form = &m.contraction(x).apply(beta) + &m.contraction(y).apply(alpha);
                self.element_of_degree(q, zero_x(), form)
            }
            (Contraction { x, .. }, Form { eta, .. }) => self.element_of_degree(q, zero_x(), m.contraction(x).apply(eta)),
            (Form { .. }, Form { .. }) => self.element_of_degree(q, zero_x(), GradedElement::zero(m.algebra())),
            // graded antisymmetry: [a, b] = −(−1)^{|a||b|}[b, a]
            _ => self.sym_bracket(b, a)?.scale(&-minus_one_pow(a.degree() as i64 * b.degree() as i64)),
        })
    }

    /// `F`: identity in degrees ≤ −1, `L_X + B∂t ↦ L_X + (B − ι_XH)∂t`.
    /// The result lives in the flat bundle.
    pub fn map_f(&self, e: &SymElement) -> Result<SymElement> {
        self.check_element(e)?;
        Ok(match e {
            SymElement::Lie { x, b } => SymElement::Lie { x: x.clone(), b: b - &self.model.contraction(x).apply(&self.h) },
            other => other.clone(),
        })
    }

    /// Inverse of [`RnBundle::map_f`]: from the flat bundle back to this one.
    pub fn map_f_inverse(&self, e: &SymElement) -> Result<SymElement> {
        let out = match e {
            SymElement::Lie { x, b } => SymElement::Lie { x: x.clone(), b: b + &self.model.contraction(x).apply(&self.h) },
            other => other.clone(),
        };
        self.check_element(&out)?;
        Ok(out)
    }

    /// `[,]_H` on degree-0 elements of the flat bundle: the flat bracket plus `(dι_Yι_XH)∂t`.
    pub fn bracket_h(&self, a: &SymElement, b: &SymElement) -> Result<SymElement> {
        let (SymElement::Lie { x, .. }, SymElement::Lie { x: y, .. }) = (a, b) else {
            return Err(Error::Degree("the twisted bracket is defined on degree 0".into()));
        };
        let flat = self.flat().sym_bracket(a, b)?;
        let defect = self.bracket_defect(x, y);
        let SymElement::Lie { x: z, b: c } = flat else { unreachable!("degree 0 bracket") };
        Ok(SymElement::Lie { x: z, b: &c + &defect })
    }

    /// `dι_Yι_XH`.
    pub fn bracket_defect(&self, x: &VectorField, y: &VectorField) -> GradedElement {
        let m = &self.model;
        m.d().apply(&m.contraction(y).apply(&m.contraction(x).apply(&self.h)))
    }

    /// The derivation of `C(P)` an element stands for.
    pub fn encode(&self, e: &SymElement) -> Result<Derivation> {
        let m = &self.model;
        let form = e.form_part().embed(&self.alg)?;
        let fiber = if form.is_zero() { Derivation::zero(&self.alg, e.degree()) } else { self.dt.left_mul(&form)? };
        let base = match e {
            SymElement::Lie { x, .. } => m.lie_derivative(x).extend_to(&self.alg)?,
            SymElement::Contraction { x, .. } => m.contraction(x).extend_to(&self.alg)?,
            SymElement::Form { degree, .. } => Derivation::zero(&self.alg, *degree),
        };
        let mut out = base.checked_add(&fiber)?;
        if out.is_zero() {
            out = Derivation::zero(&self.alg, e.degree());
        }
        Ok(out)
    }

    fn restrict_to_base(&self, d: &Derivation) -> Result<Derivation> {
        let malg = self.model.algebra();
        let on_gens = malg.generators().iter().map(|g| d.image_of(&g.name)?.project_to(malg)).collect::<Result<Vec<_>>>()?;
        let on_coords = malg.coords().iter().map(|c| d.image_of(c)?.project_to(malg)).collect::<Result<Vec<_>>>()?;
        Derivation::new(malg, d.degree(), on_gens, on_coords)
    }

    /// Reads a typed element of degree `q` back from a derivation of `C(P)`;
    /// fails unless the derivation is exactly of that shape.
    pub fn decode(&self, d: &Derivation, q: i32) -> Result<SymElement> {
        if !d.is_zero() && d.degree() != q {
            return Err(Error::Decode(format!("expected degree {q}, got {}", d.degree())));
        }
        let form = d.image_of(FIBER)?.project_to(self.model.algebra())?;
        let e = match q {
            0 => {
                let base = self.restrict_to_base(&Derivation::new(&self.alg, 0, gens_of(d, &self.alg), coords_of(d, &self.alg))?)?;
                let x = if base.is_zero() { VectorField::zero(&self.model) } else { self.model.field_from_lie_derivative(&base)? };
                SymElement::Lie { x, b: form }
            }
            -1 => {
                let base = self.restrict_to_base(&Derivation::new(&self.alg, -1, gens_of(d, &self.alg), coords_of(d, &self.alg))?)?;
                SymElement::Contraction { x: self.model.field_from_contraction(&base)?, alpha: form }
            }
            q if q < -1 => SymElement::Form { degree: q, eta: form },
            _ => return Err(Error::Decode(format!("sym^{q} is zero"))),
        };
        if &self.encode(&e)? != d {
            return Err(Error::Decode(format!("{d} is not of the form expected in degree {q}")));
        }
        Ok(e)
    }

    /// Description and basis of `sym^q(P,Q)` with coefficient cap `cap`.
    pub fn sym_space(&self, q: i32, cap: u32) -> Result<SymSpace> {
        let m = &self.model;
        let n = self.n as i32;
        if q > 0 {
            return Ok(SymSpace { degree: q, description: "0".into(), basis: vec![] });
        }
        let forms = |k: i32| -> Result<Vec<GradedElement>> {
            if k < 0 {
                Ok(vec![])
            } else {
                m.form_basis(k, cap)
            }
        };
        let zero_form = GradedElement::zero(m.algebra());
        match q {
            0 => {
                let (xs, bs) = (m.vector_field_basis(cap), forms(n)?);
                let kernel = self.symmetry_kernel(&xs, &bs)?;
                Ok(SymSpace { degree: 0, description: "{L_X + B∂t | L_X H - dB = 0}".into(), basis: kernel })
            }
            -1 => {
                let mut basis: Vec<SymElement> =
                    m.vector_field_basis(cap).into_iter().map(|x| SymElement::Contraction { x, alpha: zero_form.clone() }).collect();
                basis.extend(forms(n - 1)?.into_iter().map(|a| SymElement::Contraction { x: VectorField::zero(m), alpha: a }));
                Ok(SymSpace { degree: -1, description: format!("X(M) ⊕ Ω^{}(M)", n - 1), basis })
            }
            _ => {
                let basis = forms(n + q)?.into_iter().map(|eta| SymElement::Form { degree: q, eta }).collect();
                Ok(SymSpace { degree: q, description: format!("Ω^{}(M)", n + q), basis })
            }
        }
    }

    /// Kernel of `(X, B) ↦ L_X H − dB` over the given finite bases.
    pub fn symmetry_kernel(&self, xs: &[VectorField], bs: &[GradedElement]) -> Result<Vec<SymElement>> {
        let m = &self.model;
        let images: Vec<GradedElement> =
            xs.iter().map(|x| self.symmetry_defect(x, &GradedElement::zero(m.algebra()))).chain(bs.iter().map(|b| -m.d().apply(b))).collect();
        let target = crate::algebra::basis_in_degree(m.algebra(), self.n as i32 + 1, max_coeff_degree(&images))?;
        let columns = images
            .iter()
            .map(|img| GradedComplex::coordinates_in(img, &target).ok_or_else(|| Error::Shape("image outside target basis".into())))
            .collect::<Result<Vec<_>>>()?;
        let phi = crate::linalg::Matrix::from_columns(target.len(), &columns);
        let kernel = if columns.is_empty() { vec![] } else { phi.kernel() };
        Ok(kernel
            .into_iter()
            .map(|v| {
                let mut x = VectorField::zero(m);
                let mut b = GradedElement::zero(m.algebra());
                for (i, c) in v.iter().enumerate() {
                    if i < xs.len() {
                        x = x.add(&xs[i].scale(c));
                    } else {
                        b = &b + &bs[i - xs.len()].scale(c);
                    }
                }
                SymElement::Lie { x, b }
            })
            .collect())
    }

    pub fn element_string(&self, e: &SymElement) -> String {
        let m = &self.model;
        let wrap = |f: &GradedElement| {
            let s = f.to_string();
            if s.contains(" + ") || s.contains(" - ") {
                format!("({s})")
            } else {
                s
            }
        };
        let fiber = |f: &GradedElement| if f.is_zero() { None } else { Some(format!("{}*dt", wrap(f))) };
        let mut parts = Vec::new();
        match e {
            SymElement::Lie { x, b } => {
                if !x.is_zero() {
                    parts.push(format!("L[{}]", m.field_string(x)));
                }
                parts.extend(fiber(b));
            }
            SymElement::Contraction { x, alpha } => {
                if !x.is_zero() {
                    parts.push(format!("i[{}]", m.field_string(x)));
                }
                parts.extend(fiber(alpha));
            }
            SymElement::Form { eta, .. } => parts.extend(fiber(eta)),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn gens_of(d: &Derivation, alg: &Algebra) -> Vec<GradedElement> {
    (0..alg.ngens()).map(|i| d.on_generator(i).clone()).collect()
}

fn coords_of(d: &Derivation, alg: &Algebra) -> Vec<GradedElement> {
    (0..alg.nvars()).map(|i| d.on_coord(i).clone()).collect()
}

fn max_coeff_degree(es: &[GradedElement]) -> u32 {
    es.iter().filter_map(|e| e.max_coeff_degree()).max().unwrap_or(0)
}

impl fmt::Display for SymElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymElement::Lie { b, .. } => write!(f, "L_X + ({b})dt"),
            SymElement::Contraction { alpha, .. } => write!(f, "i_X + ({alpha})dt"),
            SymElement::Form { eta, degree } => write!(f, "({eta})dt [degree {degree}]"),
        }
    }
}

/// `1` in the base algebra, handy for building `∂t`-multiples.
pub fn unit_form(model: &CdgaModel) -> GradedElement {
    GradedElement::scalar(model.algebra(), Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::CoeffPoly;

    fn el(m: &CdgaModel, s: &str) -> GradedElement {
        m.element(s).unwrap()
    }

    fn plane() -> (CdgaModel, RnBundle) {
        let m = CdgaModel::affine(2, None).unwrap();
        let h = &el(&m, "dx") * &el(&m, "dy");
        let p = RnBundle::new(&m, 1, h).unwrap();
        (m, p)
    }

    #[test]
    fn bundle_validation() {
        let (_, p) = plane();
        assert!(p.q().is_homological().unwrap());
        let t = CdgaModel::torus(3).unwrap();
        let h = &(&el(&t, "th1") * &el(&t, "th2")) * &el(&t, "th3");
        assert!(RnBundle::new(&t, 2, h).is_ok());
        let a3 = CdgaModel::affine(3, None).unwrap();
        let h = &(&el(&a3, "x") * &el(&a3, "dy")) * &el(&a3, "dz");
        match RnBundle::new(&a3, 1, h) {
            Err(Error::NotClosed(w)) => assert_eq!(w, "dx*dy*dz"),
            other => panic!("{other:?}"),
        }
        let m = CdgaModel::affine(2, None).unwrap();
        assert!(matches!(RnBundle::new(&m, 1, &el(&m, "x") * &el(&m, "dy")), Err(Error::Degree(_))));
    }

    #[test]
    fn gauge_examples() {
        let (m, p) = plane();
        let b = -(&el(&m, "x") * &el(&m, "dy"));
        assert!(p.gauge(&b).unwrap().h().is_zero());
        assert!(p.are_equivalent(&p.gauge(&b).unwrap(), 2).unwrap());
        let t = CdgaModel::torus(2).unwrap();
        let flat = RnBundle::new(&t, 1, GradedElement::zero(t.algebra())).unwrap();
        assert!(flat.gauge(&el(&t, "th1")).unwrap().h().is_zero());
    }

    #[test]
    fn sym_d_table_examples() {
        let (m, p) = plane();
        let dx = m.basis_field("Dx").unwrap();
        let e = p.contraction(dx.clone(), GradedElement::zero(m.algebra())).unwrap();
        assert_eq!(p.sym_d(&e).unwrap(), SymElement::Lie { x: dx, b: el(&m, "dy") });
        let m2 = CdgaModel::affine(2, None).unwrap();
        let p2 = RnBundle::new(&m2, 2, GradedElement::zero(m2.algebra())).unwrap();
        let eta = p2.form(-2, el(&m2, "x")).unwrap();
        let d_eta = p2.sym_d(&eta).unwrap();
        assert_eq!(d_eta.form_part(), &el(&m2, "dx"));
        assert_eq!(d_eta.degree(), -1);
    }

    #[test]
    fn rotation_under_f() {
        let (m, p) = plane();
        let x = CoeffPoly::var(2, 0);
        let y = CoeffPoly::var(2, 1);
        let rot = m.basis_field("Dy").unwrap().mul_poly(&x).sub(&m.basis_field("Dx").unwrap().mul_poly(&y));
        let e = p.lie(rot.clone(), GradedElement::zero(m.algebra())).unwrap();
        let f = p.map_f(&e).unwrap();
        let expect = &(&el(&m, "x") * &el(&m, "dx")) + &(&el(&m, "y") * &el(&m, "dy"));
        assert_eq!(f, SymElement::Lie { x: rot, b: expect });
        assert_eq!(p.map_f_inverse(&f).unwrap(), e);
    }

    #[test]
    fn encode_decode_roundtrip_on_plane() {
        let (m, p) = plane();
        let xf = m.basis_field("Dx").unwrap().mul_poly(&CoeffPoly::var(2, 1));
        let e = p.contraction(xf, el(&m, "x")).unwrap();
        assert_eq!(p.decode(&p.encode(&e).unwrap(), -1).unwrap(), e);
        // L_{∂x}(dx dy) = 0, so ∂x is a symmetry
        let l = p.lie(m.basis_field("Dx").unwrap(), GradedElement::zero(m.algebra())).unwrap();
        assert_eq!(p.decode(&p.encode(&l).unwrap(), 0).unwrap(), l);
    }

    #[test]
    fn symmetry_constraint_is_enforced() {
        let (m, p) = plane();
        let xf = m.basis_field("Dx").unwrap().mul_poly(&CoeffPoly::var(2, 0));
        assert!(matches!(p.lie(xf, GradedElement::zero(m.algebra())), Err(Error::NotSymmetric(_))));
    }

    fn raw_bracket(p: &RnBundle, a: &SymElement, b: &SymElement) -> SymElement {
        let raw = p.encode(a).unwrap().commutator(&p.encode(b).unwrap()).unwrap();
        p.decode(&raw, a.degree() + b.degree()).unwrap()
    }

    #[test]
    fn tables_agree_with_raw_commutators() {
        let (m, p) = plane();
        let (x, y) = (CoeffPoly::var(2, 0), CoeffPoly::var(2, 1));
        let dx = m.basis_field("Dx").unwrap();
        let dy = m.basis_field("Dy").unwrap();
        let rot = dy.mul_poly(&x).sub(&dx.mul_poly(&y));
        let zero = GradedElement::zero(m.algebra());
        let lies = [
            p.lie(rot.clone(), zero.clone()).unwrap(),
            p.lie(dx.clone(), &(el(&m, "y") * el(&m, "dx")) + &(el(&m, "x") * el(&m, "dy"))).unwrap(),
            p.lie(VectorField::zero(&m), el(&m, "dx")).unwrap(),
        ];
        let contrs = [p.contraction(dx.mul_poly(&y), el(&m, "x")).unwrap(), p.contraction(rot.clone(), el(&m, "y")).unwrap()];
        let all: Vec<SymElement> = lies.iter().chain(&contrs).cloned().collect();
        for a in &all {
            for b in &all {
                assert_eq!(p.sym_bracket(a, b).unwrap(), raw_bracket(&p, a, b), "{a} / {b}");
            }
            let raw_d = p.q().commutator(&p.encode(a).unwrap()).unwrap();
            if a.degree() == 0 {
                assert!(raw_d.is_zero() && p.sym_d(a).unwrap().is_zero());
            } else {
                assert_eq!(p.sym_d(a).unwrap(), p.decode(&raw_d, a.degree() + 1).unwrap());
            }
        }
        // degree ≤ −2 with n = 2 over affine(3)
        let a3 = CdgaModel::affine(3, None).unwrap();
        let h = &(&el(&a3, "dx") * &el(&a3, "dy")) * &el(&a3, "dz");
        let p3 = RnBundle::new(&a3, 2, h).unwrap();
        let c = p3.contraction(a3.basis_field("Dz").unwrap(), el(&a3, "x") * el(&a3, "dy")).unwrap();
        let eta = p3.form(-2, el(&a3, "y")).unwrap();
        for (a, b) in [(&c, &eta), (&eta, &c), (&c, &c), (&eta, &eta)] {
            assert_eq!(p3.sym_bracket(a, b).unwrap(), raw_bracket(&p3, a, b));
        }
        let raw_d = p3.q().commutator(&p3.encode(&eta).unwrap()).unwrap();
        assert_eq!(p3.sym_d(&eta).unwrap(), p3.decode(&raw_d, -1).unwrap());
    }

    #[test]
    fn twisted_bracket_defect() {
        let a3 = CdgaModel::affine(3, None).unwrap();
        let h = &(&el(&a3, "dx") * &el(&a3, "dy")) * &el(&a3, "dz");
        let p = RnBundle::new(&a3, 2, h).unwrap();
        let x = a3.basis_field("Dx").unwrap();
        let y = a3.basis_field("Dy").unwrap().mul_poly(&CoeffPoly::var(3, 0));
        assert_eq!(p.bracket_defect(&x, &y), &el(&a3, "dx") * &el(&a3, "dz"));
    }

    #[test]
    fn sym_space_counts() {
        let t = CdgaModel::torus(2).unwrap();
        let p = RnBundle::new(&t, 2, GradedElement::zero(t.algebra())).unwrap();
        assert_eq!(p.sym_space(-2, 0).unwrap().basis.len(), 1);
        assert_eq!(p.sym_space(-1, 0).unwrap().basis.len(), 4);
        assert!(p.sym_space(1, 0).unwrap().basis.is_empty());
    }
}
