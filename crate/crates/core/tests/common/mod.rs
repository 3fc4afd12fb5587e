#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rnsym::algebra::{basis_in_degree, coeff_monomials};
use rnsym::bundle::{RnBundle, SymElement};
use rnsym::{Algebra, CdgaModel, CoeffPoly, Derivation, GradedElement, Scalar, VectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn int(v: i64) -> Scalar {
    Scalar::from_integer(v.into())
}

/// A nonzero small integer.
pub fn coeff(r: &mut impl Rng) -> Scalar {
    let v = r.gen_range(1..=3) * if r.gen_bool(0.5) { 1 } else { -1 };
    int(v)
}

/// A random sparse combination of degree-`k` basis monomials with coefficients of degree ≤ `cap`.
pub fn element(r: &mut impl Rng, alg: &Algebra, k: i32, cap: u32) -> GradedElement {
    let basis = basis_in_degree(alg, k, cap).unwrap_or_default();
    let mut out = GradedElement::zero(alg);
    for b in basis {
        if r.gen_bool(0.4) {
            out = &out + &b.to_element(alg).scale(&coeff(r));
        }
    }
    out
}

pub fn poly(r: &mut impl Rng, nvars: usize, cap: u32) -> CoeffPoly {
    let mut p = CoeffPoly::zero(nvars);
    for e in coeff_monomials(nvars, cap) {
        if r.gen_bool(0.4) {
            p = p.add(&CoeffPoly::monomial(e, coeff(r)));
        }
    }
    p
}

pub fn derivation(r: &mut impl Rng, alg: &Algebra, k: i32, cap: u32) -> Derivation {
    let on_gens = alg.generators().iter().map(|g| element(r, alg, g.degree + k, cap)).collect();
    let on_coords = (0..alg.nvars()).map(|_| element(r, alg, k, cap)).collect();
    Derivation::new(alg, k, on_gens, on_coords).expect("images have the right degrees")
}

pub fn field(r: &mut impl Rng, m: &CdgaModel, cap: u32) -> VectorField {
    let nvars = m.algebra().nvars();
    let comps = (0..m.field_names().len()).map(|_| poly(r, nvars, cap)).collect();
    VectorField::from_components(m, comps).unwrap()
}

/// `Σ c_i e_i` over a random subset of `basis`, all of sym degree `q`.
pub fn sym_combination(r: &mut impl Rng, p: &RnBundle, q: i32, basis: &[SymElement]) -> SymElement {
    let mut out = p.zero_element(q).unwrap();
    for e in basis {
        if r.gen_bool(0.5) {
            out = out.add(&e.scale(&coeff(r))).unwrap();
        }
    }
    out
}

/// Graded Jacobi residual `[a,[b,c]] − [[a,b],c] − (−1)^{|a||b|}[b,[a,c]]`.
pub fn derivation_jacobi(a: &Derivation, b: &Derivation, c: &Derivation) -> Derivation {
    let lhs = a.commutator(&b.commutator(c).unwrap()).unwrap();
    let t1 = a.commutator(b).unwrap().commutator(c).unwrap();
    let t2 = b.commutator(&a.commutator(c).unwrap()).unwrap();
    let sign = if (a.degree() * b.degree()).rem_euclid(2) == 1 { int(-1) } else { int(1) };
    lhs.checked_sub(&t1).unwrap().checked_sub(&t2.scale(&sign)).unwrap()
}

pub fn sym_jacobi(p: &RnBundle, a: &SymElement, b: &SymElement, c: &SymElement) -> SymElement {
    let br = |x: &SymElement, y: &SymElement| p.sym_bracket(x, y).unwrap();
    let sign = if (a.degree() * b.degree()).rem_euclid(2) == 1 { int(-1) } else { int(1) };
    br(a, &br(b, c)).sub(&br(&br(a, b), c)).unwrap().sub(&br(b, &br(a, c)).scale(&sign)).unwrap()
}
