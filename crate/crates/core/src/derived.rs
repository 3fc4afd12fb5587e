//! The derived algebra `D sym*(P,Q) = sym^{<0}[1]`, hamiltonian symmetries and
//! the n-plectic solver.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{GradedElement, Monomial};
use crate::bundle::{RnBundle, SymElement};
use crate::error::{Error, Result};
use crate::model::VectorField;
use crate::poly::{CoeffPoly, RatFunc};
use crate::scalar::minus_one_pow;

/// Which row to use for `⌊η∂t, ι_X + α∂t⌋` in the hamiltonian table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum HamConvention {
    /// `(−1)^{n−|η|}(ι_X dη)∂t`.
    #[default]
    Standard,
    /// The row set to zero, as in Baez–Hoffnung–Rogers.
    Bhr,
}

/// `‖a‖ = |a| + 1`.
pub fn derived_degree(e: &SymElement) -> i32 {
    e.degree() + 1
}

fn ensure_derived(e: &SymElement) -> Result<()> {
    if e.degree() >= 0 {
        return Err(Error::Degree(format!("derived elements have sym degree < 0, got {}", e.degree())));
    }
    Ok(())
}

/// `⌊a, b⌋ = [[Q,a],b]` by its closed form.
pub fn derived_bracket(p: &RnBundle, a: &SymElement, b: &SymElement) -> Result<SymElement> {
    ensure_derived(a)?;
    ensure_derived(b)?;
    p.check_element(a)?;
    p.check_element(b)?;
    let m = p.model();
    let h = p.h();
    let q = a.degree() + b.degree() + 1;
    let zero_x = || VectorField::zero(m);
    use SymElement::*;
    Ok(match (a, b) {
        (Contraction { x, alpha }, Contraction { x: y, alpha: beta }) => {
            let iy = m.contraction(y);
            let form = &(&m.lie_derivative(x).apply(beta) - &iy.apply(&m.d().apply(alpha))) - &iy.apply(&m.contraction(x).apply(h));
            Contraction { x: m.vf_bracket(x, y)?, alpha: form }
        }
        (Contraction { x, .. }, Form { eta, .. }) => p.element_of_degree(q, zero_x(), m.lie_derivative(x).apply(eta)),
        (Form { degree, eta }, Contraction { x: y, .. }) => {
            let form = m.contraction(y).apply(&m.d().apply(eta)).scale(&minus_one_pow(-*degree as i64));
            p.element_of_degree(q, zero_x(), form)
        }
        _ => p.element_of_degree(q, zero_x(), GradedElement::zero(m.algebra())),
    })
}

/// `[[Q,a],b]` computed on the raw derivations of `C(P)` and decoded back.
pub fn derived_bracket_literal(p: &RnBundle, a: &SymElement, b: &SymElement) -> Result<SymElement> {
    higher_derived_bracket(p, &[a.clone(), b.clone()])
}

/// `[...[[Q,a₁],a₂]...,a_k]` on raw derivations.
pub fn higher_derived_bracket(p: &RnBundle, args: &[SymElement]) -> Result<SymElement> {
    if args.len() < 2 {
        return Err(Error::InvalidParams("a derived bracket needs at least two arguments".into()));
    }
    let mut acc = p.q().clone();
    for a in args {
        ensure_derived(a)?;
        acc = acc.commutator(&p.encode(a)?)?;
    }
    let q = 1 + args.iter().map(|a| a.degree()).sum::<i32>();
    p.decode(&acc, q)
}

/// `δ = [Q,·]`, with `None` standing for zero in degree 1.
fn delta(p: &RnBundle, e: &Option<SymElement>) -> Result<Option<SymElement>> {
    match e {
        Some(e) if e.degree() < 0 => Ok(Some(p.sym_d(e)?)),
        _ => Ok(None),
    }
}

/// The derived bracket on all of `sym*`, closed form where both entries are
/// negative and `[[Q,a],b]` through the sym tables otherwise.
fn bracket_any(p: &RnBundle, a: &Option<SymElement>, b: &Option<SymElement>) -> Result<Option<SymElement>> {
    let (Some(a), Some(b)) = (a, b) else { return Ok(None) };
    if a.degree() < 0 && b.degree() < 0 {
        return Ok(Some(derived_bracket(p, a, b)?));
    }
    match delta(p, &Some(a.clone()))? {
        Some(qa) => Ok(Some(p.sym_bracket(&qa, b)?)),
        None => Ok(None),
    }
}

fn combine(terms: Vec<(i64, Option<SymElement>)>) -> Result<Option<SymElement>> {
    let mut acc: Option<SymElement> = None;
    for (s, t) in terms {
        let Some(t) = t else { continue };
        let t = t.scale(&minus_one_pow(if s < 0 { 1 } else { 0 }));
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t)?,
        });
    }
    Ok(acc.filter(|e| !e.is_zero()))
}

#[derive(Clone, Debug)]
pub struct LeibnizReport {
    /// `δ⌊a,b⌋ − ⌊δa,b⌋ − (−1)^{‖a‖}⌊a,δb⌋`, `None` when zero.
    pub differential_residual: Option<SymElement>,
    /// `⌊a,⌊b,c⌋⌋ − (−1)^{‖a‖}⌊⌊a,b⌋,c⌋ − (−1)^{‖a‖‖b‖}⌊b,⌊a,c⌋⌋`, `None` when zero.
    /// The `(−1)^{‖a‖}` comes from `[[Q,a],[Q,b]] = (−1)^{‖a‖}[Q,⌊a,b⌋]`; it only
    /// matters when `a` is a form of odd derived degree.
    pub leibniz_residual: Option<SymElement>,
}

impl LeibnizReport {
    pub fn holds(&self) -> bool {
        self.differential_residual.is_none() && self.leibniz_residual.is_none()
    }
}

/// Checks both dg-Leibniz identities on a triple of derived elements.
pub fn leibniz_verify(p: &RnBundle, a: &SymElement, b: &SymElement, c: &SymElement) -> Result<LeibnizReport> {
    for e in [a, b, c] {
        ensure_derived(e)?;
    }
    let (sa, sb, sc) = (Some(a.clone()), Some(b.clone()), Some(c.clone()));
    let da = derived_degree(a) as i64;
    let db = derived_degree(b) as i64;
    let sign = |k: i64| if k.rem_euclid(2) == 0 { 1 } else { -1 };

    let ab = bracket_any(p, &sa, &sb)?;
    let differential_residual =
        combine(vec![(1, delta(p, &ab)?), (-1, bracket_any(p, &delta(p, &sa)?, &sb)?), (-sign(da), bracket_any(p, &sa, &delta(p, &sb)?)?)])?;

    let leibniz_residual = combine(vec![
        (1, bracket_any(p, &sa, &bracket_any(p, &sb, &sc)?)?),
        (-sign(da), bracket_any(p, &ab, &sc)?),
        (-sign(da * db), bracket_any(p, &sb, &bracket_any(p, &sa, &sc)?)?),
    ])?;
    Ok(LeibnizReport { differential_residual, leibniz_residual })
}

/// Membership in `gsym*`: degree 0 needs `L_X H = 0 = B`, degree −1 needs
/// `dα + ι_X H = 0`. The residual is the first failing quantity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsymVerdict {
    pub member: bool,
    pub residual: Option<GradedElement>,
}

pub fn gsym_check(p: &RnBundle, e: &SymElement) -> Result<GsymVerdict> {
    p.check_element(e)?;
    let m = p.model();
    let residual = match e {
        SymElement::Lie { x, b } => {
            let lh = m.lie_derivative(x).apply(p.h());
            if !lh.is_zero() {
                Some(lh)
            } else if !b.is_zero() {
                Some(b.clone())
            } else {
                None
            }
        }
        SymElement::Contraction { x, alpha } => {
            let r = &m.d().apply(alpha) + &m.contraction(x).apply(p.h());
            (!r.is_zero()).then_some(r)
        }
        SymElement::Form { .. } => None,
    };
    Ok(GsymVerdict { member: residual.is_none(), residual })
}

fn ensure_ham(p: &RnBundle, e: &SymElement) -> Result<()> {
    ensure_derived(e)?;
    let v = gsym_check(p, e)?;
    match v.residual {
        None => Ok(()),
        Some(r) => Err(Error::NotHamiltonian(format!("dα + ι_X H = {r}"))),
    }
}

/// The bracket of `Ham*(H)`.
pub fn ham_bracket(p: &RnBundle, a: &SymElement, b: &SymElement, conv: HamConvention) -> Result<SymElement> {
    ensure_ham(p, a)?;
    ensure_ham(p, b)?;
    let m = p.model();
    let q = a.degree() + b.degree() + 1;
    let out = match (a, b) {
        (SymElement::Contraction { x, .. }, SymElement::Contraction { x: y, alpha: beta }) => {
            SymElement::Contraction { x: m.vf_bracket(x, y)?, alpha: m.lie_derivative(x).apply(beta) }
        }
        (SymElement::Form { .. }, SymElement::Contraction { .. }) if conv == HamConvention::Bhr => {
            p.element_of_degree(q, VectorField::zero(m), GradedElement::zero(m.algebra()))
        }
        _ => derived_bracket(p, a, b)?,
    };
    debug_assert!(out.degree() != -1 || gsym_check(p, &out).map(|v| v.member).unwrap_or(false));
    Ok(out)
}

/// Result of the nondegeneracy test.
#[derive(Clone, Debug)]
pub struct NplecticReport {
    pub nplectic: bool,
    /// A nonzero `v` with `ι_v H = 0`, denominators cleared.
    pub witness: Option<VectorField>,
}

/// The matrix of `v ↦ ι_v H` over the basis fields: rows indexed by form monomials.
fn contraction_matrix(p: &RnBundle) -> (Vec<Monomial>, Vec<Vec<CoeffPoly>>) {
    let m = p.model();
    let nf = m.field_names().len();
    let images: Vec<GradedElement> = (0..nf).map(|j| m.contraction(&VectorField::basis(m, j)).apply(p.h())).collect();
    let rows: BTreeSet<Monomial> = images.iter().flat_map(|e| e.terms().map(|(k, _)| k.clone())).collect();
    let rows: Vec<Monomial> = rows.into_iter().collect();
    let matrix = rows.iter().map(|r| images.iter().map(|e| e.coefficient(r)).collect()).collect();
    (rows, matrix)
}

/// Gauss-Jordan elimination over the fraction field of the coefficient ring.
struct RatSystem {
    rows: Vec<Vec<RatFunc>>,
    pivots: Vec<usize>,
}

impl RatSystem {
    fn reduce(mut rows: Vec<Vec<RatFunc>>, cols: usize) -> Self {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(piv) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
            rows.swap(r, piv);
            let inv = rows[r][c].clone();
            for v in rows[r].iter_mut() {
                *v = v.div(&inv);
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    let pivot_row = rows[r].clone();
                    for (v, pv) in rows[i].iter_mut().zip(&pivot_row) {
                        *v = v.sub(&f.mul(pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        RatSystem { rows, pivots }
    }
}

pub fn nplectic_check(p: &RnBundle) -> NplecticReport {
    let m = p.model();
    let nvars = m.algebra().nvars();
    let (_, matrix) = contraction_matrix(p);
    let nf = m.field_names().len();
    let rows = matrix.into_iter().map(|r| r.into_iter().map(RatFunc::from_poly).collect()).collect();
    let sys = RatSystem::reduce(rows, nf);
    let Some(free) = (0..nf).find(|c| !sys.pivots.contains(c)) else {
        return NplecticReport { nplectic: true, witness: None };
    };
    let mut v: Vec<RatFunc> = vec![RatFunc::from_poly(CoeffPoly::zero(nvars)); nf];
    v[free] = RatFunc::from_poly(CoeffPoly::one(nvars));
    for (i, &c) in sys.pivots.iter().enumerate() {
        v[c] = sys.rows[i][free].neg();
    }
    let common = v.iter().fold(CoeffPoly::one(nvars), |acc, r| if r.den.as_constant().is_some() { acc } else { acc.mul(&r.den) });
    let comps = v.iter().map(|r| r.mul(&RatFunc::from_poly(common.clone())).as_poly().expect("denominators cleared")).collect();
    let witness = VectorField::from_components(m, comps).expect("component count");
    debug_assert!(m.contraction(&witness).apply(p.h()).is_zero());
    NplecticReport { nplectic: false, witness: Some(witness) }
}

/// The unique `X_α` with `dα + ι_{X_α} H = 0`.
pub fn hamiltonian_vector_field(p: &RnBundle, alpha: &GradedElement) -> Result<VectorField> {
    let m = p.model();
    let report = nplectic_check(p);
    if let Some(w) = report.witness {
        return Err(Error::NotNPlectic(m.field_string(&w)));
    }
    let alpha = alpha.embed(m.algebra())?;
    let n = p.n() as i32;
    if !alpha.is_zero() && !alpha.is_homogeneous_of(n - 1) {
        return Err(Error::Degree(format!("a hamiltonian form has degree {}, got {alpha}", n - 1)));
    }
    let rhs = -m.d().apply(&alpha);
    let (mut rows, matrix) = contraction_matrix(p);
    // monomials of dα outside the image rows make the system inconsistent
    let mut matrix = matrix;
    let nf = m.field_names().len();
    for (mono, _) in rhs.terms() {
        if !rows.contains(mono) {
            rows.push(mono.clone());
            matrix.push(vec![CoeffPoly::zero(m.algebra().nvars()); nf]);
        }
    }
    let aug: Vec<Vec<RatFunc>> =
        rows.iter().zip(matrix).map(|(r, row)| row.into_iter().chain([rhs.coefficient(r)]).map(RatFunc::from_poly).collect()).collect();
    let sys = RatSystem::reduce(aug, nf + 1);
    let inconsistent = || Error::NotHamiltonian(format!("no vector field solves d({alpha}) + ι_X H = 0"));
    if sys.pivots.contains(&nf) {
        return Err(inconsistent());
    }
    let mut comps = vec![CoeffPoly::zero(m.algebra().nvars()); nf];
    for (i, &c) in sys.pivots.iter().enumerate() {
        comps[c] = sys.rows[i][nf].as_poly().ok_or_else(|| Error::NotHamiltonian(format!("X_α has non-polynomial component {}", sys.rows[i][nf])))?;
    }
    let x = VectorField::from_components(m, comps)?;
    let residual = &m.d().apply(&alpha) + &m.contraction(&x).apply(p.h());
    if !residual.is_zero() {
        return Err(Error::NotHamiltonian(format!("residual {residual}")));
    }
    Ok(x)
}

/// `(ι_{X_α} + α∂t)`, the hamiltonian pair of `α`.
pub fn hamiltonian_pair(p: &RnBundle, alpha: &GradedElement) -> Result<SymElement> {
    let x = hamiltonian_vector_field(p, alpha)?;
    p.contraction(x, alpha.clone())
}

/// `⌈α₁,…,α_k⌉ = (−1)^{⌊k/2⌋} ι_{X_{α₁}} ⋯ ι_{X_{α_k}} H`, the innermost
/// contraction being by `X_{α_k}`.
pub fn rogers_bracket(p: &RnBundle, alphas: &[GradedElement]) -> Result<GradedElement> {
    let m = p.model();
    let mut acc = p.h().clone();
    for a in alphas.iter().rev() {
        acc = m.contraction(&hamiltonian_vector_field(p, a)?).apply(&acc);
    }
    Ok(acc.scale(&minus_one_pow(alphas.len() as i64 / 2)))
}

/// `{f, g}` read off the hamiltonian bracket of the pairs of `f` and `g`.
pub fn poisson_from_ham(p: &RnBundle, f: &GradedElement, g: &GradedElement) -> Result<GradedElement> {
    let a = hamiltonian_pair(p, f)?;
    let b = hamiltonian_pair(p, g)?;
    Ok(ham_bracket(p, &a, &b, HamConvention::Standard)?.form_part().clone())
}
