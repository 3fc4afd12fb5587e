//! Certificates for lifting an infinitesimal action to the bundle: strict and
//! Leibniz moment data, the Cartan-model picture, the σ-ladder and BRST cocycles.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::GradedElement;
use crate::bundle::RnBundle;
use crate::error::{Error, Result};
use crate::lie::{brst_differential, cartan_differential, ce_differential, invariance_check, LieAction, LieAlgebra};
use crate::scalar::{minus_one_pow, q_frac, Scalar};

/// Moment data `a ↦ α_a`, one `(n−1)`-form per basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaAssignment {
    alphas: Vec<GradedElement>,
}

/// A lift problem: Lie algebra, action on the base and the bundle.
#[derive(Clone, Copy, Debug)]
pub struct LiftContext<'a> {
    pub g: &'a LieAlgebra,
    pub act: &'a LieAction,
    pub bundle: &'a RnBundle,
}

impl AlphaAssignment {
    pub fn new(ctx: LiftContext<'_>, alphas: Vec<GradedElement>) -> Result<Self> {
        if alphas.len() != ctx.g.dim() {
            return Err(Error::Shape(format!("{} moment forms for a Lie algebra of dimension {}", alphas.len(), ctx.g.dim())));
        }
        let m = ctx.bundle.model();
        let deg = ctx.bundle.n() as i32 - 1;
        let alphas = alphas
            .into_iter()
            .map(|a| {
                let a = a.embed(m.algebra())?;
                if !a.is_zero() && !a.is_homogeneous_of(deg) {
                    return Err(Error::Degree(format!("moment forms have degree {deg}, got {a}")));
                }
                Ok(a)
            })
            .collect::<Result<_>>()?;
        Ok(AlphaAssignment { alphas })
    }

    pub fn zero(ctx: LiftContext<'_>) -> Self {
        AlphaAssignment { alphas: vec![GradedElement::zero(ctx.bundle.model().algebra()); ctx.g.dim()] }
    }

    pub fn alphas(&self) -> &[GradedElement] {
        &self.alphas
    }

    /// `α_{[a,b]} = f^c_{ab} α_c`.
    fn alpha_of_bracket(&self, g: &LieAlgebra, a: usize, b: usize) -> GradedElement {
        let mut out = GradedElement::zero(self.alphas[0].algebra());
        for (c, al) in self.alphas.iter().enumerate() {
            let f = g.f(c, a, b);
            if !f.is_zero() {
                out = &out + &al.scale(f);
            }
        }
        out
    }

    /// `c_{a,b} = ι_{X_a}α_b + ι_{X_b}α_a`.
    pub fn c(&self, ctx: LiftContext<'_>, a: usize, b: usize) -> GradedElement {
        let m = ctx.bundle.model();
        &m.contraction(ctx.act.field(a)).apply(&self.alphas[b]) + &m.contraction(ctx.act.field(b)).apply(&self.alphas[a])
    }
}

/// Per-equation residuals, keyed by the basis labels involved. Only nonzero
/// residuals are listed.
#[derive(Clone, Debug, Default, Serialize)]
pub struct LiftResiduals {
    /// `ι_{X_a}α_b + ι_{X_b}α_a` (strict only).
    pub pairing: Vec<(String, String, String)>,
    /// `dα_a + ι_{X_a}H`.
    pub moment: Vec<(String, String)>,
    /// `L_{X_a}α_b − α_{[a,b]}`.
    pub equivariance: Vec<(String, String, String)>,
}

impl LiftResiduals {
    fn is_empty(&self) -> bool {
        self.pairing.is_empty() && self.moment.is_empty() && self.equivariance.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictReport {
    pub strict: bool,
    pub residuals: LiftResiduals,
}

fn moment_and_equivariance(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> LiftResiduals {
    let (g, m, h) = (ctx.g, ctx.bundle.model(), ctx.bundle.h());
    let names = g.names();
    let mut r = LiftResiduals::default();
    for a in 0..g.dim() {
        let mom = &m.d().apply(&alpha.alphas[a]) + &m.contraction(ctx.act.field(a)).apply(h);
        if !mom.is_zero() {
            r.moment.push((names[a].clone(), mom.to_string()));
        }
        for b in 0..g.dim() {
            let eq = &m.lie_derivative(ctx.act.field(a)).apply(&alpha.alphas[b]) - &alpha.alpha_of_bracket(g, a, b);
            if !eq.is_zero() {
                r.equivariance.push((names[a].clone(), names[b].clone(), eq.to_string()));
            }
        }
    }
    r
}

/// The three equation families of a strict map `(𝔤[1]→𝔤) → gsym*(P,Q)`.
pub fn check_strict(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> StrictReport {
    let mut residuals = moment_and_equivariance(ctx, alpha);
    let names = ctx.g.names();
    for a in 0..ctx.g.dim() {
        for b in a..ctx.g.dim() {
            let c = alpha.c(ctx, a, b);
            if !c.is_zero() {
                residuals.pairing.push((names[a].clone(), names[b].clone(), c.to_string()));
            }
        }
    }
    StrictReport { strict: residuals.is_empty(), residuals }
}

#[derive(Clone, Debug, Serialize)]
pub struct LeibnizMapReport {
    pub leibniz: bool,
    /// `c_{a,b}` when every entry is constant.
    pub constants: Option<Vec<Vec<String>>>,
    /// The first non-constant `c_{a,b}`.
    pub nonconstant: Option<(String, String, String)>,
    pub residuals: LiftResiduals,
}

/// Closed with scalar coefficients.
pub fn is_constant_form(ctx: LiftContext<'_>, c: &GradedElement) -> bool {
    ctx.bundle.model().d().apply(c).is_zero() && c.terms().all(|(_, p)| p.as_constant().is_some())
}

/// A Leibniz map `𝔤 → Ham*(H)`: moment and equivariance equations with
/// constant `c_{a,b}`.
pub fn check_leibniz(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> LeibnizMapReport {
    let residuals = moment_and_equivariance(ctx, alpha);
    let names = ctx.g.names();
    let mut nonconstant = None;
    let mut table = Vec::new();
    for a in 0..ctx.g.dim() {
        let mut row = Vec::new();
        for b in 0..ctx.g.dim() {
            let c = alpha.c(ctx, a, b);
            if nonconstant.is_none() && !is_constant_form(ctx, &c) {
                nonconstant = Some((names[a].clone(), names[b].clone(), c.to_string()));
            }
            row.push(c.to_string());
        }
        table.push(row);
    }
    let leibniz = residuals.is_empty() && nonconstant.is_none();
    LeibnizMapReport { leibniz, constants: nonconstant.is_none().then_some(table), nonconstant, residuals }
}

#[derive(Clone, Debug)]
pub struct CartanReport {
    /// `W = H + α_aΩᵃ` in `Ω•M ⊗ S𝔤*`.
    pub w: GradedElement,
    /// `L̃_b W` for each basis element.
    pub invariance: Vec<GradedElement>,
    pub d_cartan: GradedElement,
    /// `½ c_{a,b} ΩᵃΩᵇ`.
    pub half_c_omega: GradedElement,
    pub c_constant: bool,
    /// Invariant and equivariantly closed.
    pub strict: bool,
    /// Invariant with `d_C W = ½ c_{a,b}ΩᵃΩᵇ`, `c` constant.
    pub leibniz: bool,
}

impl CartanReport {
    pub fn invariant(&self) -> bool {
        self.invariance.iter().all(|e| e.is_zero())
    }
}

pub fn cartan_equivalence(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> Result<CartanReport> {
    let (g, model) = (ctx.g, ctx.bundle.model());
    let cartan = cartan_differential(g, ctx.act, model)?;
    let alg = cartan.algebra().clone();
    let omega = |a: usize| GradedElement::generator(&alg, &g.omega_name(a)).expect("Cartan generator");
    let mut w = ctx.bundle.h().embed(&alg)?;
    for (a, al) in alpha.alphas.iter().enumerate() {
        w = &w + &(&al.embed(&alg)? * &omega(a));
    }
    let invariance = invariance_check(&w, g, ctx.act, model)?;
    let d_cartan = cartan.diff.apply(&w);
    let mut half_c_omega = GradedElement::zero(&alg);
    let mut c_constant = true;
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            let c = alpha.c(ctx, a, b);
            c_constant &= is_constant_form(ctx, &c);
            half_c_omega = &half_c_omega + &(&c.embed(&alg)? * &(&omega(a) * &omega(b))).scale(&q_frac(1, 2));
        }
    }
    let invariant = invariance.iter().all(|e| e.is_zero());
    let strict = invariant && d_cartan.is_zero();
    let leibniz = invariant && c_constant && d_cartan == half_c_omega;
    Ok(CartanReport { w, invariance, d_cartan, half_c_omega, c_constant, strict, leibniz })
}

/// `σ_j : Λʲ𝔤 → Ω^{n+1−j}M` for `1 ≤ j ≤ n+1`, stored on increasing index tuples.
#[derive(Clone, Debug, Default)]
pub struct SigmaLadder {
    rungs: Vec<BTreeMap<Vec<usize>, GradedElement>>,
}

/// Sorts `idx` and returns the permutation sign, or `None` on a repeat.
fn sort_with_sign(idx: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut v = idx.to_vec();
    let mut odd = false;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                odd = !odd;
            }
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((v, odd))
}

impl SigmaLadder {
    /// An all-zero ladder for a bundle of fiber degree `n`.
    pub fn zero(n: u32) -> Self {
        SigmaLadder { rungs: vec![BTreeMap::new(); n as usize + 1] }
    }

    /// Sets `σ_j(a₁ ∧ … ∧ a_j)`; the value is stored on the sorted tuple.
    pub fn set(&mut self, indices: &[usize], value: GradedElement) -> Result<()> {
        let j = indices.len();
        if j == 0 || j > self.rungs.len() {
            return Err(Error::Shape(format!("σ_{j} is outside the ladder 1..={}", self.rungs.len())));
        }
        let (sorted, odd) = sort_with_sign(indices).ok_or_else(|| Error::Shape("repeated index in an alternating argument".into()))?;
        let value = if odd { -value } else { value };
        self.rungs[j - 1].insert(sorted, value);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rungs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rungs.is_empty()
    }

    /// `σ_j` on an arbitrary tuple, by antisymmetry.
    fn eval(&self, j: usize, indices: &[usize], zero: &GradedElement) -> GradedElement {
        let Some((sorted, odd)) = sort_with_sign(indices) else { return zero.clone() };
        let v = self.rungs[j - 1].get(&sorted).cloned().unwrap_or_else(|| zero.clone());
        if odd {
            -v
        } else {
            v
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LadderReport {
    pub holds: bool,
    /// `(j, arguments, residual)` for each failing rung equation.
    pub residuals: Vec<(usize, Vec<String>, String)>,
}

fn increasing_tuples(dim: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, dim: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..dim {
            cur.push(i);
            go(i + 1, dim, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, dim, k, &mut Vec::new(), &mut out);
    out
}

/// `(δσ_j)(a₀..a_j)` with `σ_0 = H`.
fn ce_of_rung(ctx: LiftContext<'_>, ladder: &SigmaLadder, j: usize, args: &[usize]) -> GradedElement {
    let (g, m, h) = (ctx.g, ctx.bundle.model(), ctx.bundle.h());
    let zero = GradedElement::zero(m.algebra());
    let sigma = |idx: &[usize]| if j == 0 { h.clone() } else { ladder.eval(j, idx, &zero) };
    let mut out = zero.clone();
    for i in 0..args.len() {
        let rest: Vec<usize> = args.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, &a)| a).collect();
        let term = m.lie_derivative(ctx.act.field(args[i])).apply(&sigma(&rest));
        out = &out + &term.scale(&minus_one_pow(i as i64));
    }
    for i in 0..args.len() {
        for k in i + 1..args.len() {
            let rest: Vec<usize> = args.iter().enumerate().filter(|&(l, _)| l != i && l != k).map(|(_, &a)| a).collect();
            for c in 0..g.dim() {
                let f = g.f(c, args[i], args[k]);
                if f.is_zero() {
                    continue;
                }
                let mut idx = vec![c];
                idx.extend(&rest);
                out = &out + &sigma(&idx).scale(&(f * minus_one_pow((i + k) as i64)));
            }
        }
    }
    out
}

/// `L_{X_a}H = dσ₁(a)`, `δσ_j = (−1)ʲ dσ_{j+1}` for `1 ≤ j ≤ n`, and `δσ_{n+1} = 0`.
pub fn check_sigma_ladder(ctx: LiftContext<'_>, ladder: &SigmaLadder) -> Result<LadderReport> {
    let n = ctx.bundle.n() as usize;
    if ladder.len() != n + 1 {
        return Err(Error::Shape(format!("a ladder for n = {n} has {} rungs, got {}", n + 1, ladder.len())));
    }
    let m = ctx.bundle.model();
    let zero = GradedElement::zero(m.algebra());
    for (j, rung) in ladder.rungs.iter().enumerate() {
        let deg = (n - j) as i32;
        if let Some((k, v)) = rung.iter().find(|(k, v)| k.iter().any(|&a| a >= ctx.g.dim()) || (!v.is_zero() && !v.is_homogeneous_of(deg))) {
            return Err(Error::Shape(format!("σ_{} at {k:?} must be a {deg}-form, got {v}", j + 1)));
        }
    }
    let names = ctx.g.names();
    let mut residuals = Vec::new();
    for j in 0..=n + 1 {
        for args in increasing_tuples(ctx.g.dim(), j + 1) {
            let lhs = ce_of_rung(ctx, ladder, j, &args);
            let rhs = if j <= n { m.d().apply(&ladder.eval(j + 1, &args, &zero)).scale(&minus_one_pow(j as i64)) } else { zero.clone() };
            let r = &lhs - &rhs;
            if !r.is_zero() {
                residuals.push((j, args.iter().map(|&a| names[a].clone()).collect(), r.to_string()));
            }
        }
    }
    Ok(LadderReport { holds: residuals.is_empty(), residuals })
}

/// The ladder induced by moment data: `σ₁(a) = −dα_a`, which is `ι_{X_a}H`
/// when the moment equations hold, and `σ_{≥2} = 0`.
pub fn ladder_from_alpha(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> SigmaLadder {
    let mut l = SigmaLadder::zero(ctx.bundle.n());
    let d = ctx.bundle.model().d();
    for (a, al) in alpha.alphas.iter().enumerate() {
        l.set(&[a], -d.apply(al)).expect("index in range");
    }
    l
}

#[derive(Clone, Debug)]
pub struct BrstLiftReport {
    pub closed: bool,
    /// `δ_BRST W`.
    pub residual: GradedElement,
    /// The component of `W` free of `θ` and `Ω` equals `H`.
    pub form_part_is_h: bool,
    /// `W` with every `Ωᵃ` set to zero, in the CE algebra.
    pub ce_shadow: GradedElement,
    pub ce_shadow_closed: bool,
}

impl BrstLiftReport {
    pub fn is_lift(&self) -> bool {
        self.closed && self.form_part_is_h
    }
}

/// Embeds `W` (given over any algebra whose symbols are BRST symbols) into the BRST algebra.
pub fn check_brst_lift(ctx: LiftContext<'_>, w: &GradedElement) -> Result<BrstLiftReport> {
    let (g, model) = (ctx.g, ctx.bundle.model());
    let brst = brst_differential(g, ctx.act, model)?;
    let alg = brst.algebra().clone();
    let w = w.embed(&alg)?;
    let deg = ctx.bundle.n() as i32 + 1;
    if !w.is_zero() && !w.is_homogeneous_of(deg) {
        return Err(Error::Degree(format!("a lift has total degree {deg}, got {w}")));
    }
    let residual = brst.diff.apply(&w);
    let thetas: Vec<String> = (0..g.dim()).map(|a| g.theta_name(a)).collect();
    let omegas: Vec<String> = (0..g.dim()).map(|a| g.omega_name(a)).collect();
    let all: Vec<&str> = thetas.iter().chain(&omegas).map(|s| s.as_str()).collect();
    let form_part = w.kill_generators(&all);
    let form_part_is_h = form_part == ctx.bundle.h().embed(&alg)?;
    let ce = ce_differential(g, ctx.act, model)?;
    let omega_refs: Vec<&str> = omegas.iter().map(|s| s.as_str()).collect();
    let ce_shadow = w.kill_generators(&omega_refs).project_to(ce.algebra())?;
    let ce_shadow_closed = ce.diff.apply(&ce_shadow).is_zero();
    Ok(BrstLiftReport { closed: residual.is_zero(), residual, form_part_is_h, ce_shadow, ce_shadow_closed })
}

/// Two BRST-closed lifts are equivalent iff their difference is `δ_BRST`-exact
/// in total degree `n+1`, decided with coefficient cap `cap`.
pub fn equivalence_of_lifts(ctx: LiftContext<'_>, w1: &GradedElement, w2: &GradedElement, cap: u32) -> Result<bool> {
    for w in [w1, w2] {
        let r = check_brst_lift(ctx, w)?;
        if !r.closed {
            return Err(Error::NotClosedElement(r.residual.to_string()));
        }
    }
    let brst = brst_differential(ctx.g, ctx.act, ctx.bundle.model())?;
    let alg = brst.algebra().clone();
    let diff = &w1.embed(&alg)? - &w2.embed(&alg)?;
    Ok(brst.graded(cap)?.is_exact(&diff)?.is_some())
}

/// `½` as a scalar, for callers assembling Cartan elements by hand.
pub fn half() -> Scalar {
    q_frac(1, 2)
}
