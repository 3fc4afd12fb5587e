//! Graded derivations stored by their images on generators and coordinates.

use std::fmt;

use num_traits::One;

use crate::algebra::{Algebra, GradedAlgebra, GradedElement, Monomial};
use crate::error::{Error, Result};
use crate::poly::CoeffPoly;
use crate::scalar::{minus_one_pow, Scalar};

#[derive(Clone, Debug)]
pub struct Derivation {
    alg: Algebra,
    degree: i32,
    on_gens: Vec<GradedElement>,
    on_coords: Vec<GradedElement>,
}

impl PartialEq for Derivation {
    /// Equality on generators and coordinates, which generate the algebra.
    fn eq(&self, other: &Self) -> bool {
        GradedAlgebra::same(&self.alg, &other.alg)
            && self.on_gens == other.on_gens
            && self.on_coords == other.on_coords
            && (self.degree == other.degree || self.is_zero())
    }
}

fn check_image(alg: &Algebra, what: &str, base: i32, degree: i32, img: &GradedElement) -> Result<()> {
    if !GradedAlgebra::same(img.algebra(), alg) {
        return Err(Error::ForeignGenerator(format!("image of `{what}`")));
    }
    if !img.is_homogeneous_of(base + degree) {
        return Err(Error::Degree(format!("image of `{what}` must have degree {}, got {img}", base + degree)));
    }
    Ok(())
}

impl Derivation {
    pub fn zero(alg: &Algebra, degree: i32) -> Self {
        Derivation { alg: alg.clone(), degree, on_gens: vec![GradedElement::zero(alg); alg.ngens()], on_coords: vec![GradedElement::zero(alg); alg.nvars()] }
    }

    /// Builds a derivation from full image lists, checking degrees.
    pub fn new(alg: &Algebra, degree: i32, on_gens: Vec<GradedElement>, on_coords: Vec<GradedElement>) -> Result<Self> {
        if on_gens.len() != alg.ngens() || on_coords.len() != alg.nvars() {
            return Err(Error::Shape("derivation needs one image per generator and coordinate".into()));
        }
        for (g, img) in alg.generators().iter().zip(&on_gens) {
            check_image(alg, &g.name, g.degree, degree, img)?;
        }
        for (c, img) in alg.coords().iter().zip(&on_coords) {
            check_image(alg, c, 0, degree, img)?;
        }
        Ok(Derivation { alg: alg.clone(), degree, on_gens, on_coords })
    }

    /// Builds a derivation from `(symbol, image)` pairs; unlisted symbols map to zero.
    pub fn from_images(alg: &Algebra, degree: i32, images: &[(&str, GradedElement)]) -> Result<Self> {
        let mut d = Derivation::zero(alg, degree);
        for (name, img) in images {
            if let Some(i) = alg.generator_index(name) {
                d.on_gens[i] = img.clone();
            } else if let Some(i) = alg.coord_index(name) {
                d.on_coords[i] = img.clone();
            } else {
                return Err(Error::UnknownSymbol(name.to_string()));
            }
        }
        Derivation::new(alg, degree, d.on_gens, d.on_coords)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn on_generator(&self, i: usize) -> &GradedElement {
        &self.on_gens[i]
    }

    pub fn on_coord(&self, i: usize) -> &GradedElement {
        &self.on_coords[i]
    }

    pub fn image_of(&self, name: &str) -> Result<&GradedElement> {
        if let Some(i) = self.alg.generator_index(name) {
            Ok(&self.on_gens[i])
        } else if let Some(i) = self.alg.coord_index(name) {
            Ok(&self.on_coords[i])
        } else {
            Err(Error::UnknownSymbol(name.into()))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.on_gens.iter().chain(&self.on_coords).all(|e| e.is_zero())
    }

    pub fn is_truncated(&self) -> bool {
        self.on_gens.iter().chain(&self.on_coords).any(|e| e.is_truncated())
    }

    /// `D(p)` for a coefficient polynomial, via `Σ_k ∂_k p · D(x_k)`.
    pub fn apply_poly(&self, p: &CoeffPoly) -> GradedElement {
        let mut out = GradedElement::zero(&self.alg);
        for (k, img) in self.on_coords.iter().enumerate() {
            if img.is_zero() {
                continue;
            }
            let dp = p.partial(k);
            if !dp.is_zero() {
                out = &out + &img.mul_poly(&dp);
            }
        }
        out
    }

    fn apply_monomial(&self, m: &Monomial) -> GradedElement {
        let factors = m.factors();
        let gens = self.alg.generators();
        let mut out = GradedElement::zero(&self.alg);
        let mut prefix = GradedElement::one(&self.alg);
        let mut prefix_deg = 0i64;
        for (j, &g) in factors.iter().enumerate() {
            let img = &self.on_gens[g];
            if !img.is_zero() {
                let mut suffix = GradedElement::one(&self.alg);
                for &h in &factors[j + 1..] {
                    suffix = &suffix * &GradedElement::generator_at(&self.alg, h);
                }
                let s = minus_one_pow(self.degree as i64 * prefix_deg);
                let term = &(&prefix * img) * &suffix;
                out = &out + &term.scale(&s);
            }
            prefix = &prefix * &GradedElement::generator_at(&self.alg, g);
            prefix_deg += gens[g].degree as i64;
        }
        out
    }

    /// Leibniz extension: `D(p·m) = D(p)·m + p·D(m)`.
    pub fn checked_apply(&self, e: &GradedElement) -> Result<GradedElement> {
        if !GradedAlgebra::same(e.algebra(), &self.alg) {
            return Err(Error::ForeignGenerator("derivation applied to an element of another algebra".into()));
        }
        let mut out = GradedElement::zero(&self.alg);
        for (m, p) in e.terms() {
            let mono = GradedElement::term(&self.alg, m.clone(), CoeffPoly::one(self.alg.nvars()));
            let dp = self.apply_poly(p);
            if !dp.is_zero() {
                out = &out + &(&dp * &mono);
            }
            let dm = self.apply_monomial(m);
            if !dm.is_zero() {
                out = &out + &dm.mul_poly(p);
            }
        }
        Ok(out.with_truncated(e.is_truncated()))
    }

    /// Panics on a foreign element; see [`Derivation::checked_apply`].
    pub fn apply(&self, e: &GradedElement) -> GradedElement {
        self.checked_apply(e).expect("derivation applied to a foreign element")
    }

    fn map_images(&self, degree: i32, f: impl Fn(&GradedElement) -> GradedElement) -> Derivation {
        Derivation { alg: self.alg.clone(), degree, on_gens: self.on_gens.iter().map(&f).collect(), on_coords: self.on_coords.iter().map(&f).collect() }
    }

    fn zip_images(&self, other: &Derivation, f: impl Fn(&GradedElement, &GradedElement) -> GradedElement) -> Result<Derivation> {
        if !GradedAlgebra::same(&self.alg, &other.alg) {
            return Err(Error::ForeignGenerator("derivations over different algebras".into()));
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        if !self.is_zero() && !other.is_zero() && self.degree != other.degree {
            return Err(Error::Degree(format!("cannot add derivations of degree {} and {}", self.degree, other.degree)));
        }
        Ok(Derivation {
            alg: self.alg.clone(),
            degree,
            on_gens: self.on_gens.iter().zip(&other.on_gens).map(|(a, b)| f(a, b)).collect(),
            on_coords: self.on_coords.iter().zip(&other.on_coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn checked_add(&self, other: &Derivation) -> Result<Derivation> {
        self.zip_images(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &Derivation) -> Result<Derivation> {
        self.zip_images(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> Derivation {
        self.map_images(self.degree, |e| e.scale(c))
    }

    /// Left multiplication `e·D`, a derivation of degree `|e| + |D|`.
    pub fn left_mul(&self, e: &GradedElement) -> Result<Derivation> {
        if !GradedAlgebra::same(e.algebra(), &self.alg) {
            return Err(Error::ForeignGenerator("multiplier lives in another algebra".into()));
        }
        let deg = match e.degree() {
            Some(k) => k,
            None if e.is_zero() => 0,
            None => return Err(Error::Degree(format!("multiplier {e} is not homogeneous"))),
        };
        Ok(self.map_images(self.degree + deg, |img| e * img))
    }

    /// Graded commutator `D1∘D2 − (−1)^{|D1||D2|} D2∘D1`, materialized on generators.
    pub fn commutator(&self, other: &Derivation) -> Result<Derivation> {
        if !GradedAlgebra::same(&self.alg, &other.alg) {
            return Err(Error::ForeignGenerator("derivations over different algebras".into()));
        }
        let s = minus_one_pow(self.degree as i64 * other.degree as i64);
        let f = |x: &GradedElement, y: &GradedElement| &self.apply(y) - &other.apply(x).scale(&s);
        Ok(Derivation {
            alg: self.alg.clone(),
            degree: self.degree + other.degree,
            on_gens: self.on_gens.iter().zip(&other.on_gens).map(|(a, b)| f(a, b)).collect(),
            on_coords: self.on_coords.iter().zip(&other.on_coords).map(|(a, b)| f(a, b)).collect(),
        })
    }

    /// `D∘D` evaluated on generators; for odd `D` this is `½[D,D]`.
    pub fn square_on_generators(&self) -> Vec<(String, GradedElement)> {
        let names = self.alg.generators().iter().map(|g| g.name.clone()).chain(self.alg.coords().iter().cloned());
        names.zip(self.on_gens.iter().chain(&self.on_coords)).map(|(n, img)| (n, self.apply(img))).collect()
    }

    /// Checks `D² = 0` on every generator and coordinate.
    ///
    /// `Ok(None)` means homological, `Ok(Some((generator, value)))` is a witness.
    pub fn homological_witness(&self) -> Result<Option<(String, GradedElement)>> {
        if self.degree != 1 {
            return Err(Error::Degree(format!("homological check needs degree 1, got {}", self.degree)));
        }
        Ok(self.square_on_generators().into_iter().find(|(_, v)| !v.is_zero()))
    }

    pub fn is_homological(&self) -> Result<bool> {
        Ok(self.homological_witness()?.is_none())
    }

    /// Like [`Derivation::homological_witness`] but reporting failure as an error.
    pub fn ensure_homological(&self) -> Result<()> {
        match self.homological_witness()? {
            None => Ok(()),
            Some((generator, value)) => Err(Error::NotHomological { generator, value: value.to_string() }),
        }
    }

    /// Transports to a larger algebra; generators absent from `self` map to zero.
    pub fn extend_to(&self, target: &Algebra) -> Result<Derivation> {
        let mut out = Derivation::zero(target, self.degree);
        for (g, img) in self.alg.generators().iter().zip(&self.on_gens) {
            let i = target.generator_index(&g.name).ok_or_else(|| Error::ForeignGenerator(g.name.clone()))?;
            out.on_gens[i] = img.embed(target)?;
        }
        for (c, img) in self.alg.coords().iter().zip(&self.on_coords) {
            let i = target.coord_index(c).ok_or_else(|| Error::ForeignGenerator(c.clone()))?;
            out.on_coords[i] = img.embed(target)?;
        }
        Ok(out)
    }

    /// Replaces the image of one symbol.
    pub fn with_image(mut self, name: &str, img: GradedElement) -> Result<Derivation> {
        if let Some(i) = self.alg.generator_index(name) {
            check_image(&self.alg, name, self.alg.generators()[i].degree, self.degree, &img)?;
            self.on_gens[i] = img;
        } else if let Some(i) = self.alg.coord_index(name) {
            check_image(&self.alg, name, 0, self.degree, &img)?;
            self.on_coords[i] = img;
        } else {
            return Err(Error::UnknownSymbol(name.into()));
        }
        Ok(self)
    }
}

macro_rules! derivation_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Derivation> for &Derivation {
            type Output = Derivation;
            fn $method(self, rhs: &Derivation) -> Derivation {
                self.$checked(rhs).expect("incompatible derivations")
            }
        }
    };
}

derivation_op!(Add, add, checked_add);
derivation_op!(Sub, sub, checked_sub);

impl std::ops::Neg for &Derivation {
    type Output = Derivation;
    fn neg(self) -> Derivation {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = self.alg.generators().iter().map(|g| g.name.as_str()).chain(self.alg.coords().iter().map(|c| c.as_str()));
        let parts: Vec<String> =
            names.zip(self.on_gens.iter().chain(&self.on_coords)).filter(|(_, img)| !img.is_zero()).map(|(n, img)| format!("{n} -> {img}")).collect();
        if parts.is_empty() {
            write!(f, "0 (degree {})", self.degree)
        } else {
            write!(f, "{{{}}} (degree {})", parts.join(", "), self.degree)
        }
    }
}
