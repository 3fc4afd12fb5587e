//! Free graded-commutative algebras over ℚ[coordinates] and their elements.
//!
//! An element is a finite sum `Σ p_m · m` where `m` is a monomial in the graded
//! generators, written in declaration order, and `p_m` is a polynomial in the
//! degree-0 coordinates. Odd generators square to zero; the Koszul sign of
//! every reordering is absorbed into the coefficient.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{join_signed, monomial_string, CoeffPoly, Exponents};
use crate::scalar::{format_scalar, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: i32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: i32) -> Self {
        Generator { name: name.into(), degree }
    }

    pub fn is_odd(&self) -> bool {
        self.degree.rem_euclid(2) == 1
    }
}

/// The ambient algebra: generators in canonical (declaration) order, the
/// coordinate symbols of the coefficient ring, and an optional cap on the total
/// coordinate degree of stored coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAlgebra {
    generators: Vec<Generator>,
    coords: Vec<String>,
    coeff_cap: Option<u32>,
}

pub type Algebra = Arc<GradedAlgebra>;

impl GradedAlgebra {
    pub fn new(generators: Vec<Generator>, coords: Vec<String>, coeff_cap: Option<u32>) -> Result<Algebra> {
        let mut seen = BTreeSet::new();
        for name in generators.iter().map(|g| &g.name).chain(coords.iter()) {
            if name.is_empty() || name == "d" {
                return Err(Error::InvalidParams(format!("reserved or empty symbol name `{name}`")));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        Ok(Arc::new(GradedAlgebra { generators, coords, coeff_cap }))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn coeff_cap(&self) -> Option<u32> {
        self.coeff_cap
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn coord_index(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    /// A larger algebra with `before` prepended and `after` appended to the generator list.
    pub fn extended(&self, before: Vec<Generator>, after: Vec<Generator>) -> Result<Algebra> {
        let mut gens = before;
        gens.extend(self.generators.iter().cloned());
        gens.extend(after);
        GradedAlgebra::new(gens, self.coords.clone(), self.coeff_cap)
    }

    pub fn with_cap(&self, cap: Option<u32>) -> Algebra {
        Arc::new(GradedAlgebra { coeff_cap: cap, ..self.clone() })
    }

    pub fn same(a: &Algebra, b: &Algebra) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }

    fn check_same(a: &Algebra, b: &Algebra) -> Result<()> {
        if Self::same(a, b) {
            Ok(())
        } else {
            let names: Vec<_> = b.generators.iter().map(|g| g.name.clone()).collect();
            Err(Error::ForeignGenerator(format!("operand lives over generators {names:?}")))
        }
    }

    fn monomial_degree(&self, m: &Monomial) -> i32 {
        m.0.iter().zip(&self.generators).map(|(&e, g)| e as i32 * g.degree).sum()
    }
}

/// Exponent vector over the generators of an algebra, canonical order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Generator indices with multiplicity, in canonical order.
    pub fn factors(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                out.push(i);
            }
        }
        out
    }
}

/// Product of two normal-form monomials: `None` if an odd generator repeats,
/// otherwise the merged monomial and whether the Koszul sign is negative.
fn multiply_monomials(alg: &GradedAlgebra, a: &Monomial, b: &Monomial) -> Option<(Monomial, bool)> {
    let n = alg.generators.len();
    let mut odd_after = 0u32; // odd factors of `a` strictly to the right of index j
    let mut parity = 0u32;
    for j in (0..n).rev() {
        let odd = alg.generators[j].is_odd();
        if odd {
            if a.0[j] > 0 && b.0[j] > 0 {
                return None;
            }
            parity += b.0[j] * odd_after;
            odd_after += a.0[j];
        }
    }
    let merged = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
    Some((Monomial(merged), parity % 2 == 1))
}

#[derive(Clone, Debug)]
pub struct GradedElement {
    alg: Algebra,
    terms: BTreeMap<Monomial, CoeffPoly>,
    truncated: bool,
}

impl PartialEq for GradedElement {
    fn eq(&self, other: &Self) -> bool {
        GradedAlgebra::same(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for GradedElement {}

impl GradedElement {
    pub fn zero(alg: &Algebra) -> Self {
        GradedElement { alg: alg.clone(), terms: BTreeMap::new(), truncated: false }
    }

    pub fn scalar(alg: &Algebra, c: Scalar) -> Self {
        Self::from_poly(alg, CoeffPoly::constant(alg.nvars(), c))
    }

    pub fn one(alg: &Algebra) -> Self {
        Self::scalar(alg, Scalar::one())
    }

    pub fn from_poly(alg: &Algebra, p: CoeffPoly) -> Self {
        Self::term(alg, Monomial::unit(alg.ngens()), p)
    }

    pub fn term(alg: &Algebra, m: Monomial, p: CoeffPoly) -> Self {
        let mut e = Self::zero(alg);
        e.add_term(m, p);
        e.apply_cap();
        e
    }

    pub fn generator(alg: &Algebra, name: &str) -> Result<Self> {
        let i = alg.generator_index(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Self::generator_at(alg, i))
    }

    pub fn generator_at(alg: &Algebra, i: usize) -> Self {
        let mut m = Monomial::unit(alg.ngens());
        m.0[i] = 1;
        Self::term(alg, m, CoeffPoly::one(alg.nvars()))
    }

    pub fn coord(alg: &Algebra, name: &str) -> Result<Self> {
        let i = alg.coord_index(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Self::from_poly(alg, CoeffPoly::var(alg.nvars(), i)))
    }

    /// Generator or coordinate, whichever the name refers to.
    pub fn symbol(alg: &Algebra, name: &str) -> Result<Self> {
        Self::generator(alg, name).or_else(|_| Self::coord(alg, name))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CoeffPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Set when some product exceeded the coefficient cap and terms were dropped.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn with_truncated(mut self, t: bool) -> Self {
        self.truncated |= t;
        self
    }

    fn add_term(&mut self, m: Monomial, p: CoeffPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(p);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&p);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn apply_cap(&mut self) {
        if let Some(cap) = self.alg.coeff_cap {
            let mut dropped = false;
            for p in self.terms.values_mut() {
                dropped |= p.truncate(cap);
            }
            self.terms.retain(|_, p| !p.is_zero());
            self.truncated |= dropped;
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> CoeffPoly {
        self.terms.get(m).cloned().unwrap_or_else(|| CoeffPoly::zero(self.alg.nvars()))
    }

    /// Degree when the element is nonzero and homogeneous.
    pub fn degree(&self) -> Option<i32> {
        let mut degs = self.terms.keys().map(|m| self.alg.monomial_degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, k: i32) -> bool {
        self.terms.keys().all(|m| self.alg.monomial_degree(m) == k)
    }

    pub fn homogeneous_part(&self, k: i32) -> GradedElement {
        let mut out = GradedElement::zero(&self.alg);
        for (m, p) in &self.terms {
            if self.alg.monomial_degree(m) == k {
                out.terms.insert(m.clone(), p.clone());
            }
        }
        out.truncated = self.truncated;
        out
    }

    /// `Some(p)` when the element has no generator factors.
    pub fn as_poly(&self) -> Option<CoeffPoly> {
        match self.terms.len() {
            0 => Some(CoeffPoly::zero(self.alg.nvars())),
            1 => {
                let (m, p) = self.terms.iter().next().unwrap();
                m.is_unit().then(|| p.clone())
            }
            _ => None,
        }
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    pub fn checked_add(&self, other: &GradedElement) -> Result<GradedElement> {
        GradedAlgebra::check_same(&self.alg, &other.alg)?;
        let mut out = self.clone();
        for (m, p) in &other.terms {
            out.add_term(m.clone(), p.clone());
        }
        out.truncated |= other.truncated;
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> GradedElement {
        let mut out = GradedElement::zero(&self.alg);
        if !c.is_zero() {
            for (m, p) in &self.terms {
                out.terms.insert(m.clone(), p.scale(c));
            }
        }
        out.truncated = self.truncated;
        out
    }

    pub fn mul_poly(&self, q: &CoeffPoly) -> GradedElement {
        let mut out = GradedElement::zero(&self.alg);
        for (m, p) in &self.terms {
            out.add_term(m.clone(), p.mul(q));
        }
        out.truncated = self.truncated;
        out.apply_cap();
        out
    }

    /// Graded-commutative product, Koszul signs included.
    pub fn checked_mul(&self, other: &GradedElement) -> Result<GradedElement> {
        GradedAlgebra::check_same(&self.alg, &other.alg)?;
        let mut out = GradedElement::zero(&self.alg);
        for (ma, pa) in &self.terms {
            for (mb, pb) in &other.terms {
                if let Some((m, negative)) = multiply_monomials(&self.alg, ma, mb) {
                    let mut p = pa.mul(pb);
                    if negative {
                        p = p.neg();
                    }
                    out.add_term(m, p);
                }
            }
        }
        out.truncated = self.truncated || other.truncated;
        out.apply_cap();
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> GradedElement {
        let mut acc = GradedElement::one(&self.alg);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Sets every listed generator to zero (e.g. the forgetful map `Ωᵃ ↦ 0`).
    pub fn kill_generators(&self, names: &[&str]) -> GradedElement {
        let idx: Vec<usize> = names.iter().filter_map(|n| self.alg.generator_index(n)).collect();
        let mut out = GradedElement::zero(&self.alg);
        for (m, p) in &self.terms {
            if idx.iter().all(|&i| m.0[i] == 0) {
                out.terms.insert(m.clone(), p.clone());
            }
        }
        out.truncated = self.truncated;
        out
    }

    /// Transports the element into `target`, matching generators and coordinates by name.
    pub fn embed(&self, target: &Algebra) -> Result<GradedElement> {
        if GradedAlgebra::same(&self.alg, target) {
            return Ok(self.clone());
        }
        let gmap: Vec<usize> = self
            .alg
            .generators
            .iter()
            .map(|g| {
                let j = target.generator_index(&g.name).ok_or_else(|| Error::ForeignGenerator(g.name.clone()))?;
                if target.generators[j].degree != g.degree {
                    return Err(Error::Degree(format!("generator `{}` changes degree under embedding", g.name)));
                }
                Ok(j)
            })
            .collect::<Result<_>>()?;
        let cmap: Vec<usize> =
            self.alg.coords.iter().map(|c| target.coord_index(c).ok_or_else(|| Error::ForeignGenerator(c.clone()))).collect::<Result<_>>()?;
        let mut out = GradedElement::zero(target);
        for (m, p) in &self.terms {
            let mut tm = Monomial::unit(target.ngens());
            for (i, &e) in m.0.iter().enumerate() {
                tm.0[gmap[i]] = e;
            }
            let mut tp = CoeffPoly::zero(target.nvars());
            for (e, c) in p.terms() {
                let mut te = vec![0; target.nvars()];
                for (i, &k) in e.iter().enumerate() {
                    te[cmap[i]] = k;
                }
                tp = tp.add(&CoeffPoly::monomial(te, c.clone()));
            }
            out.add_term(tm, tp);
        }
        out.truncated = self.truncated;
        out.apply_cap();
        Ok(out)
    }

    /// Moves the element into `target`, dropping every term that involves a
    /// generator `target` does not have.
    pub fn project_to(&self, target: &Algebra) -> Result<GradedElement> {
        let keep: Vec<usize> = (0..self.alg.ngens()).filter(|&i| target.generator_index(&self.alg.generators[i].name).is_some()).collect();
        let mut kept = GradedElement::zero(&self.alg);
        for (m, p) in &self.terms {
            if m.0.iter().enumerate().all(|(i, &e)| e == 0 || keep.contains(&i)) {
                kept.terms.insert(m.clone(), p.clone());
            }
        }
        let sub = GradedAlgebra::new(keep.iter().map(|&i| self.alg.generators[i].clone()).collect(), self.alg.coords.clone(), self.alg.coeff_cap)?;
        let mut moved = GradedElement::zero(&sub);
        for (m, p) in kept.terms {
            moved.terms.insert(Monomial(keep.iter().map(|&i| m.0[i]).collect()), p);
        }
        moved.truncated = self.truncated;
        moved.embed(target)
    }

    /// Flattened coordinates `(generator monomial, coordinate exponents) ↦ scalar`.
    pub fn coordinates(&self) -> BTreeMap<(Monomial, Exponents), Scalar> {
        let mut out = BTreeMap::new();
        for (m, p) in &self.terms {
            for (e, c) in p.terms() {
                out.insert((m.clone(), e.clone()), c.clone());
            }
        }
        out
    }

    /// Sum over all generator monomials of the maximal coordinate degree.
    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.terms.values().filter_map(|p| p.total_degree()).max()
    }

    pub(crate) fn monomial_string(&self, m: &Monomial) -> String {
        let names: Vec<String> = self.alg.generators.iter().map(|g| g.name.clone()).collect();
        monomial_string(&m.0, &names)
    }
}

impl fmt::Display for GradedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (m, p) in &self.terms {
            let mono = self.monomial_string(m);
            if p.len() == 1 {
                let (e, coef) = p.terms().next().unwrap();
                let negative = coef < &Scalar::zero();
                let abs = if negative { -coef.clone() } else { coef.clone() };
                let cm = monomial_string(e, self.alg.coords());
                let mut factors = Vec::new();
                if !abs.is_one() || (cm.is_empty() && mono.is_empty()) {
                    factors.push(format_scalar(&abs));
                }
                if !cm.is_empty() {
                    factors.push(cm);
                }
                if !mono.is_empty() {
                    factors.push(mono);
                }
                parts.push((negative, factors.join("*")));
            } else {
                let poly = p.display_with(self.alg.coords());
                if mono.is_empty() {
                    parts.push((false, poly));
                } else {
                    parts.push((false, format!("({poly})*{mono}")));
                }
            }
        }
        f.write_str(&join_signed(parts))
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl std::ops::$tr<&GradedElement> for &GradedElement {
            type Output = GradedElement;
            /// Panics when the operands live in different algebras; use the
            /// `checked_*` variants at API boundaries.
            fn $method(self, rhs: &GradedElement) -> GradedElement {
                let f: fn(&GradedElement, &GradedElement) -> Result<GradedElement> = $body;
                f(self, rhs).expect("operands over different algebras")
            }
        }
        impl std::ops::$tr<GradedElement> for GradedElement {
            type Output = GradedElement;
            fn $method(self, rhs: GradedElement) -> GradedElement {
                std::ops::$tr::$method(&self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.checked_add(b));
binop!(Sub, sub, |a, b| a.checked_add(&b.scale(&-Scalar::one())));
binop!(Mul, mul, |a, b| a.checked_mul(b));

impl std::ops::Neg for &GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        self.scale(&-Scalar::one())
    }
}

impl std::ops::Neg for GradedElement {
    type Output = GradedElement;
    fn neg(self) -> GradedElement {
        -&self
    }
}

/// Graded-commutative product, failing on mismatched algebras.
pub fn multiply(a: &GradedElement, b: &GradedElement) -> Result<GradedElement> {
    a.checked_mul(b)
}

/// A factor of a raw, not yet normalized product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawFactor {
    Gen(usize),
    Coord(usize),
}

/// Normal form of a raw sum of scaled products, e.g. `θ²θ¹ + θ¹θ²`.
pub fn normal_form(alg: &Algebra, raw: &[(Scalar, Vec<RawFactor>)]) -> Result<GradedElement> {
    let mut out = GradedElement::zero(alg);
    for (c, factors) in raw {
        let mut prod = GradedElement::scalar(alg, c.clone());
        for f in factors {
            let e = match *f {
                RawFactor::Gen(i) if i < alg.ngens() => GradedElement::generator_at(alg, i),
                RawFactor::Coord(i) if i < alg.nvars() => GradedElement::from_poly(alg, CoeffPoly::var(alg.nvars(), i)),
                _ => return Err(Error::ForeignGenerator(format!("{f:?}"))),
            };
            prod = &prod * &e;
        }
        out = &out + &prod;
    }
    Ok(out)
}

/// One element of a degree slice: a generator monomial times a coordinate monomial.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisMonomial {
    pub gens: Monomial,
    pub coeff: Exponents,
}

impl BasisMonomial {
    pub fn to_element(&self, alg: &Algebra) -> GradedElement {
        GradedElement::term(alg, self.gens.clone(), CoeffPoly::monomial(self.coeff.clone(), Scalar::one()))
    }
}

/// All coordinate exponent vectors in `nvars` variables of total degree ≤ `cap`.
pub fn coeff_monomials(nvars: usize, cap: u32) -> Vec<Exponents> {
    fn rec(i: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    rec(0, cap, &mut vec![0; nvars], &mut out);
    out.sort_by(|a, b| a.iter().sum::<u32>().cmp(&b.iter().sum::<u32>()).then_with(|| b.cmp(a)));
    out
}

/// Generator monomials of total degree exactly `k`.
pub fn generator_monomials(alg: &GradedAlgebra, k: i32) -> Result<Vec<Monomial>> {
    if let Some(g) = alg.generators.iter().find(|g| g.degree <= 0) {
        return Err(Error::InfiniteBasis(g.name.clone()));
    }
    fn rec(alg: &GradedAlgebra, i: usize, left: i32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == alg.generators.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let g = &alg.generators[i];
        let max = if g.is_odd() { 1 } else { (left / g.degree) as u32 };
        for e in 0..=max {
            let used = e as i32 * g.degree;
            if used > left {
                break;
            }
            cur[i] = e;
            rec(alg, i + 1, left - used, cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    if k >= 0 {
        rec(alg, 0, k, &mut vec![0; alg.generators.len()], &mut out);
    }
    out.sort_by(|a, b| b.cmp(a));
    Ok(out)
}

/// Complete, duplicate-free basis of the degree-`k` slice with coefficients of degree ≤ `coeff_cap`.
pub fn basis_in_degree(alg: &Algebra, k: i32, coeff_cap: u32) -> Result<Vec<BasisMonomial>> {
    let gens = generator_monomials(alg, k)?;
    let coeffs = coeff_monomials(alg.nvars(), coeff_cap);
    let mut out = Vec::with_capacity(gens.len() * coeffs.len());
    for g in &gens {
        for c in &coeffs {
            out.push(BasisMonomial { gens: g.clone(), coeff: c.clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn exterior(names: &[&str]) -> Algebra {
        GradedAlgebra::new(names.iter().map(|n| Generator::new(*n, 1)).collect(), vec![], None).unwrap()
    }

    #[test]
    fn koszul_sign_on_swap() {
        let alg = exterior(&["a", "b"]);
        let a = GradedElement::generator(&alg, "a").unwrap();
        let b = GradedElement::generator(&alg, "b").unwrap();
        assert_eq!(&b * &a, -(&a * &b));
        assert!((&a * &a).is_zero());
    }

    #[test]
    fn even_generators_commute() {
        let alg = GradedAlgebra::new(vec![Generator::new("Wa", 2), Generator::new("Wb", 2)], vec![], None).unwrap();
        let a = GradedElement::generator(&alg, "Wa").unwrap();
        let b = GradedElement::generator(&alg, "Wb").unwrap();
        assert_eq!(&a * &b, &b * &a);
        assert!(!(&a * &a).is_zero());
    }

    #[test]
    fn normal_form_examples() {
        let alg = exterior(&["t1", "t2"]);
        let raw = vec![(q(1), vec![RawFactor::Gen(0), RawFactor::Gen(1)]), (q(1), vec![RawFactor::Gen(1), RawFactor::Gen(0)])];
        assert!(normal_form(&alg, &raw).unwrap().is_zero());

        let t1 = GradedElement::generator(&alg, "t1").unwrap();
        let t2 = GradedElement::generator(&alg, "t2").unwrap();
        let s = &t1 + &t2;
        // (θ¹+θ²)² = θ¹θ² + θ²θ¹ = 0 for odd generators
        assert!((&s * &s).is_zero());

        let chart = GradedAlgebra::new(vec![Generator::new("dx", 1)], vec!["x".into()], None).unwrap();
        let raw = vec![
            (q(2), vec![RawFactor::Coord(0), RawFactor::Gen(0)]),
            (q(-1), vec![RawFactor::Gen(0), RawFactor::Coord(0)]),
            (q(-1), vec![RawFactor::Coord(0), RawFactor::Gen(0)]),
        ];
        assert!(normal_form(&chart, &raw).unwrap().is_zero());
    }

    #[test]
    fn square_of_even_sum() {
        // for even generators (a+b)² = a² + 2ab + b²
        let alg = GradedAlgebra::new(vec![Generator::new("u", 2), Generator::new("v", 2)], vec![], None).unwrap();
        let u = GradedElement::generator(&alg, "u").unwrap();
        let v = GradedElement::generator(&alg, "v").unwrap();
        let s = &u + &v;
        let expect = &(&(&u * &u) + &(&u * &v).scale(&q(2))) + &(&v * &v);
        assert_eq!(&s * &s, expect);
    }

    #[test]
    fn basis_examples() {
        let alg = exterior(&["t1", "t2"]);
        let b = basis_in_degree(&alg, 2, 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_element(&alg).to_string(), "t1*t2");

        let mixed = GradedAlgebra::new(vec![Generator::new("th", 1), Generator::new("W", 2)], vec![], None).unwrap();
        let b = basis_in_degree(&mixed, 3, 0).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_element(&mixed).to_string(), "th*W");

        let three = exterior(&["t1", "t2", "t3"]);
        assert_eq!(basis_in_degree(&three, 1, 0).unwrap().len(), 3);
        assert!(basis_in_degree(&three, -1, 0).unwrap().is_empty());
        assert!(basis_in_degree(&three, 7, 0).unwrap().is_empty());
    }

    #[test]
    fn foreign_generator_is_an_error() {
        let a = exterior(&["a"]);
        let b = exterior(&["b"]);
        let x = GradedElement::generator(&a, "a").unwrap();
        let y = GradedElement::generator(&b, "b").unwrap();
        assert!(matches!(multiply(&x, &y), Err(Error::ForeignGenerator(_))));
    }

    #[test]
    fn cap_truncates_and_flags() {
        let alg = GradedAlgebra::new(vec![], vec!["x".into()], Some(2)).unwrap();
        let x = GradedElement::coord(&alg, "x").unwrap();
        let x2 = &x * &x;
        assert!(!x2.is_truncated());
        let x3 = &x2 * &x;
        assert!(x3.is_zero());
        assert!(x3.is_truncated());
    }
}
