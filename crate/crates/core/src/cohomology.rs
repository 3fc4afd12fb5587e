//! Degree-wise cohomology of finite slices of a differential graded algebra.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::{basis_in_degree, Algebra, BasisMonomial, GradedAlgebra, GradedElement, Monomial};
use crate::bundle::{RnBundle, SymElement};
use crate::derivation::Derivation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{CoeffPoly, Exponents};
use crate::scalar::Scalar;

/// A differential on a free graded algebra, cut to coefficient degree ≤ `coeff_cap`.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    diff: Derivation,
    coeff_cap: u32,
}

/// The matrix of the differential from degree `k` to `k + 1`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub source: Vec<BasisMonomial>,
    pub target: Vec<BasisMonomial>,
    pub matrix: Matrix,
    /// Some image left the capped target basis; ranks are only valid below the cap.
    pub contaminated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiReport {
    pub degree: i32,
    pub rank: usize,
    /// Set when the rank is only valid below the coefficient cap.
    pub truncated: bool,
}

impl GradedComplex {
    pub fn new(diff: Derivation, coeff_cap: u32) -> Result<Self> {
        if diff.degree() != 1 {
            return Err(Error::Degree(format!("a differential has degree 1, got {}", diff.degree())));
        }
        Ok(GradedComplex { diff, coeff_cap })
    }

    pub fn algebra(&self) -> &Algebra {
        self.diff.algebra()
    }

    pub fn differential(&self) -> &Derivation {
        &self.diff
    }

    pub fn basis(&self, k: i32) -> Result<Vec<BasisMonomial>> {
        basis_in_degree(self.algebra(), k, self.coeff_cap)
    }

    /// Coordinates of `e` in the given basis, `None` if it leaves the basis span.
    pub fn coordinates_in(e: &GradedElement, basis: &[BasisMonomial]) -> Option<Vec<Scalar>> {
        let index: BTreeMap<_, _> = basis.iter().enumerate().map(|(i, b)| ((&b.gens, &b.coeff), i)).collect();
        let mut v = vec![Scalar::zero(); basis.len()];
        for (m, p) in e.terms() {
            for (exps, c) in p.terms() {
                let i = *index.get(&(m, exps))?;
                v[i] = c.clone();
            }
        }
        Some(v)
    }

    pub fn element_from(alg: &Algebra, basis: &[BasisMonomial], v: &[Scalar]) -> GradedElement {
        let mut out = GradedElement::zero(alg);
        for (b, c) in basis.iter().zip(v) {
            if !c.is_zero() {
                out = &out + &GradedElement::term(alg, b.gens.clone(), CoeffPoly::monomial(b.coeff.clone(), c.clone()));
            }
        }
        out
    }

    pub fn slice(&self, k: i32) -> Result<Slice> {
        let source = self.basis(k)?;
        let target = self.basis(k + 1)?;
        let alg = self.algebra().clone();
        let mut contaminated = false;
        let mut columns = Vec::with_capacity(source.len());
        let index: BTreeMap<_, _> = target.iter().enumerate().map(|(i, t)| ((&t.gens, &t.coeff), i)).collect();
        for b in &source {
            let img = self.diff.apply(&b.to_element(&alg));
            contaminated |= img.is_truncated();
            let mut col = vec![Scalar::zero(); target.len()];
            for (m, p) in img.terms() {
                for (exps, c) in p.terms() {
                    match index.get(&(m, exps)) {
                        Some(&i) => col[i] = c.clone(),
                        None => contaminated = true,
                    }
                }
            }
            columns.push(col);
        }
        let matrix = Matrix::from_columns(target.len(), &columns);
        Ok(Slice { source, target, matrix, contaminated })
    }

    /// `dim ker d_k − dim im d_{k−1}`.
    pub fn betti(&self, k: i32) -> Result<BettiReport> {
        let out = self.slice(k)?;
        let inc = self.slice(k - 1)?;
        let rank = out.source.len() - out.matrix.rank() - inc.matrix.rank();
        // with coordinates present the cut at coeff_cap is a subcomplex whose
        // top-degree classes need not survive, so the rank is a lower-cap statement
        let capped = self.algebra().nvars() > 0;
        Ok(BettiReport { degree: k, rank, truncated: capped || out.contaminated || inc.contaminated })
    }

    pub fn betti_range(&self, lo: i32, hi: i32) -> Result<Vec<BettiReport>> {
        (lo..=hi).map(|k| self.betti(k)).collect()
    }

    /// Decides whether a closed element is exact; returns a primitive when it is.
    pub fn is_exact(&self, e: &GradedElement) -> Result<Option<GradedElement>> {
        if !GradedAlgebra::same(e.algebra(), self.algebra()) {
            return Err(Error::ForeignGenerator("element of another algebra".into()));
        }
        let de = self.diff.apply(e);
        if !de.is_zero() {
            return Err(Error::NotClosedElement(de.to_string()));
        }
        if e.is_zero() {
            return Ok(Some(GradedElement::zero(self.algebra())));
        }
        let k = e.degree().ok_or_else(|| Error::Degree(format!("{e} is not homogeneous")))?;
        let s = self.slice(k - 1)?;
        let rhs = Self::coordinates_in(e, &s.target).ok_or_else(|| Error::InvalidParams(format!("{e} exceeds the coefficient cap {}", self.coeff_cap)))?;
        Ok(s.matrix.solve(&rhs).map(|x| Self::element_from(self.algebra(), &s.source, &x)))
    }
}

/// Ranks of `H^q(sym*(P,Q))` for `−n ≤ q ≤ 0`, by two routes.
#[derive(Clone, Debug, Serialize)]
pub struct SymCohomology {
    pub n: u32,
    /// Ranks of the assembled complex: `Ω^{n+q}` for `q ≤ −2`, `𝔛 ⊕ Ω^{n−1}`,
    /// then the degree-0 symmetries, with the tabulated `[Q,·]`.
    pub direct: Vec<BettiReport>,
    /// `H^{n+q}(M)` for `q < 0` and `dim 𝔛 + Hⁿ(M)` for `q = 0`; absent when
    /// the model's vector-field space is infinite.
    pub formula: Option<Vec<BettiReport>>,
}

impl SymCohomology {
    pub fn agree(&self) -> bool {
        self.formula.as_ref().is_some_and(|f| f.iter().zip(&self.direct).all(|(a, b)| a.rank == b.rank))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum FlatKey {
    Field(usize, Exponents),
    Form(Monomial, Exponents),
}

fn flatten(e: &SymElement) -> BTreeMap<FlatKey, Scalar> {
    let mut out = BTreeMap::new();
    if let Some(x) = e.field() {
        for (j, c) in x.components().iter().enumerate() {
            for (exps, v) in c.terms() {
                out.insert(FlatKey::Field(j, exps.clone()), v.clone());
            }
        }
    }
    for (m, p) in e.form_part().terms() {
        for (exps, v) in p.terms() {
            out.insert(FlatKey::Form(m.clone(), exps.clone()), v.clone());
        }
    }
    out
}

/// Rank of a family of sym elements, by coordinates in a common flattening.
fn sym_rank(es: &[SymElement]) -> usize {
    let flat: Vec<_> = es.iter().map(flatten).collect();
    let keys: BTreeSet<&FlatKey> = flat.iter().flat_map(|f| f.keys()).collect();
    let index: BTreeMap<&FlatKey, usize> = keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect();
    let columns: Vec<Vec<Scalar>> = flat
        .iter()
        .map(|f| {
            let mut col = vec![Scalar::zero(); index.len()];
            for (k, v) in f {
                col[index[k]] = v.clone();
            }
            col
        })
        .collect();
    Matrix::from_columns(index.len(), &columns).rank()
}

/// Cohomology of `sym*(P,Q)` in degrees `−n..=0` with coefficient cap `cap`.
pub fn sym_cohomology(p: &RnBundle, cap: u32) -> Result<SymCohomology> {
    let n = p.n() as i32;
    let model = p.model();
    let truncated = model.algebra().nvars() > 0;
    let mut dims = Vec::new();
    let mut ranks = Vec::new();
    for q in -n..=0 {
        let space = p.sym_space(q, cap)?;
        let images = if q == 0 { vec![] } else { space.basis.iter().map(|b| p.sym_d(b)).collect::<Result<Vec<_>>>()? };
        dims.push(space.basis.len());
        ranks.push(sym_rank(&images));
    }
    let direct = (0..dims.len())
        .map(|i| {
            let incoming = if i == 0 { 0 } else { ranks[i - 1] };
            BettiReport { degree: i as i32 - n, rank: dims[i] - ranks[i] - incoming, truncated }
        })
        .collect();
    let formula = match model.vector_field_dim() {
        Some(fields) => {
            let base = GradedComplex::new(model.d().clone(), cap)?;
            let mut out = Vec::new();
            for q in -n..=0 {
                let b = base.betti(n + q)?;
                let rank = if q == 0 { fields + b.rank } else { b.rank };
                out.push(BettiReport { degree: q, rank, truncated: b.truncated });
            }
            Some(out)
        }
        None => None,
    };
    Ok(SymCohomology { n: p.n(), direct, formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CdgaModel;

    fn ranks(c: &GradedComplex, lo: i32, hi: i32) -> Vec<usize> {
        c.betti_range(lo, hi).unwrap().into_iter().map(|b| b.rank).collect()
    }

    #[test]
    fn torus_and_sphere_betti() {
        let t = CdgaModel::torus(2).unwrap();
        assert_eq!(ranks(&GradedComplex::new(t.d().clone(), 0).unwrap(), 0, 3), vec![1, 2, 1, 0]);
        let s = CdgaModel::sphere_even(2).unwrap();
        assert_eq!(ranks(&GradedComplex::new(s.d().clone(), 0).unwrap(), 0, 5), vec![1, 0, 1, 0, 0, 0]);
    }

    #[test]
    fn exactness_on_plane() {
        let m = CdgaModel::affine(2, None).unwrap();
        let c = GradedComplex::new(m.d().clone(), 2).unwrap();
        let area = &m.element("dx").unwrap() * &m.element("dy").unwrap();
        let prim = c.is_exact(&area).unwrap().unwrap();
        assert_eq!(m.d().apply(&prim), area);
        let t = CdgaModel::torus(2).unwrap();
        let tc = GradedComplex::new(t.d().clone(), 0).unwrap();
        let top = &t.element("th1").unwrap() * &t.element("th2").unwrap();
        assert!(tc.is_exact(&top).unwrap().is_none());
        assert!(tc.is_exact(&GradedElement::zero(t.algebra())).unwrap().unwrap().is_zero());
        let dx = m.element("x").unwrap();
        assert!(matches!(c.is_exact(&dx), Err(Error::NotClosedElement(_))));
    }

    #[test]
    fn affine_ranks_carry_the_cap_caveat() {
        let m = CdgaModel::affine(2, None).unwrap();
        let c = GradedComplex::new(m.d().clone(), 3).unwrap();
        let b0 = c.betti(0).unwrap();
        assert_eq!(b0.rank, 1);
        assert!(b0.truncated);
        let t = CdgaModel::torus(2).unwrap();
        assert!(!GradedComplex::new(t.d().clone(), 0).unwrap().betti(1).unwrap().truncated);
    }

    #[test]
    fn sym_cohomology_routes() {
        let t = CdgaModel::torus(3).unwrap();
        let h = &(&t.element("th1").unwrap() * &t.element("th2").unwrap()) * &t.element("th3").unwrap();
        let p = RnBundle::new(&t, 2, h).unwrap();
        let c = sym_cohomology(&p, 0).unwrap();
        let direct: Vec<usize> = c.direct.iter().map(|b| b.rank).collect();
        let formula: Vec<usize> = c.formula.as_ref().unwrap().iter().map(|b| b.rank).collect();
        assert_eq!(direct, vec![1, 3, 3]);
        assert_eq!(formula, vec![1, 3, 6]);
        assert!(!c.agree());

        let pt = CdgaModel::point().unwrap();
        let c = sym_cohomology(&RnBundle::new(&pt, 2, GradedElement::zero(pt.algebra())).unwrap(), 0).unwrap();
        assert!(c.agree());
        assert_eq!(c.direct.iter().map(|b| b.rank).collect::<Vec<_>>(), vec![1, 0, 0]);

        let s = CdgaModel::sphere_even(2).unwrap();
        let x = s.element("x").unwrap();
        let c = sym_cohomology(&RnBundle::new(&s, 3, &x * &x).unwrap(), 0).unwrap();
        assert!(c.agree());
    }
}
