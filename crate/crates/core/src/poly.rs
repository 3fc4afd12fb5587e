//! Multivariate polynomials over ℚ in the degree-0 coordinates of a chart.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::scalar::{format_scalar, Scalar};

/// Exponent vector of a coordinate monomial.
pub type Exponents = Vec<u32>;

/// A polynomial in `nvars` commuting degree-0 coordinates.
///
/// Terms are kept in a `BTreeMap` keyed by exponent vectors; zero coefficients
/// are never stored, so the zero polynomial is the empty map.
#[derive(Clone, Debug)]
pub struct CoeffPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl PartialEq for CoeffPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for CoeffPoly {}

fn total(e: &[u32]) -> u32 {
    e.iter().sum()
}

/// Graded lexicographic comparison, used to pick leading terms for division.
fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    total(a).cmp(&total(b)).then_with(|| a.cmp(b))
}

impl CoeffPoly {
    pub fn zero(nvars: usize) -> Self {
        CoeffPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Scalar::one())
    }

    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let mut p = Self::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                (total(e) == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Highest total degree of a stored term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| total(e)).max()
    }

    fn add_term(&mut self, e: Exponents, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_scaled(&mut self, other: &CoeffPoly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (e, v) in &other.terms {
            self.add_term(e.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> CoeffPoly {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        CoeffPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = Self::zero(self.nvars.max(other.nvars));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> CoeffPoly {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to coordinate `i`.
    pub fn partial(&self, i: usize) -> CoeffPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Scalar::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Drops every term of total degree above `cap`; returns whether anything was dropped.
    pub fn truncate(&mut self, cap: u32) -> bool {
        let before = self.terms.len();
        self.terms.retain(|e, _| total(e) <= cap);
        before != self.terms.len()
    }

    fn leading(&self) -> Option<(&Exponents, &Scalar)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &CoeffPoly) -> Option<CoeffPoly> {
        let (lg, lc) = divisor.leading()?;
        let (lg, lc) = (lg.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((lr, cr)) = rem.leading() {
            if lr.iter().zip(&lg).any(|(r, g)| r < g) {
                return None;
            }
            let e: Exponents = lr.iter().zip(&lg).map(|(r, g)| r - g).collect();
            let c = cr / &lc;
            let step = CoeffPoly::monomial(e, c);
            rem = rem.sub(&step.mul(divisor));
            quot = quot.add(&step);
        }
        Some(quot)
    }

    pub fn add(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.nvars = out.nvars.max(other.nvars);
        out.add_assign_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &CoeffPoly) -> CoeffPoly {
        let mut out = self.clone();
        out.nvars = out.nvars.max(other.nvars);
        out.add_assign_scaled(other, &-Scalar::one());
        out
    }

    pub fn neg(&self) -> CoeffPoly {
        self.scale(&-Scalar::one())
    }

    /// Human-readable form using the supplied coordinate names.
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts: Vec<(bool, String)> = Vec::new();
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by(|a, b| grlex(b.0, a.0));
        for (e, c) in keys {
            let mono = monomial_string(e, names);
            let negative = c < &Scalar::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            let body = match (mono.is_empty(), abs.is_one()) {
                (true, _) => format_scalar(&abs),
                (false, true) => mono,
                (false, false) => format!("{}*{}", format_scalar(&abs), mono),
            };
            parts.push((negative, body));
        }
        join_signed(parts)
    }
}

pub(crate) fn monomial_string(e: &[u32], names: &[String]) -> String {
    let mut factors = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        match k {
            0 => {}
            1 => factors.push(names[i].clone()),
            _ => factors.push(format!("{}^{}", names[i], k)),
        }
    }
    factors.join("*")
}

pub(crate) fn join_signed(parts: Vec<(bool, String)>) -> String {
    let mut out = String::new();
    for (i, (neg, body)) in parts.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for CoeffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display_with(&names))
    }
}

/// Element of the fraction field of `CoeffPoly`, without gcd normalization.
///
/// Only used for the small linear systems of the n-plectic solver, where the
/// denominators stay tiny; exact division is attempted after every operation.
#[derive(Clone, Debug)]
pub struct RatFunc {
    pub num: CoeffPoly,
    pub den: CoeffPoly,
}

impl RatFunc {
    pub fn from_poly(p: CoeffPoly) -> Self {
        let n = p.nvars();
        RatFunc { num: p, den: CoeffPoly::one(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalized(mut self) -> Self {
        let n = self.num.nvars().max(self.den.nvars());
        if self.num.is_zero() {
            self.den = CoeffPoly::one(n);
            return self;
        }
        if let Some(c) = self.den.as_constant() {
            if !c.is_one() {
                self.num = self.num.scale(&(Scalar::one() / c));
                self.den = CoeffPoly::one(n);
            }
            return self;
        }
        if let Some(qt) = self.num.exact_div(&self.den) {
            return RatFunc { num: qt, den: CoeffPoly::one(n) };
        }
        // fix the sign/scale of the denominator's leading coefficient
        let lc = self.den.leading().map(|(_, c)| c.clone()).unwrap();
        if !lc.is_one() {
            let inv = Scalar::one() / lc;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc { num: self.num.add(&o.num), den: self.den.clone() }.normalized();
        }
        RatFunc { num: self.num.mul(&o.den).add(&o.num.mul(&self.den)), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc { num: self.num.mul(&o.num), den: self.den.mul(&o.den) }.normalized()
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "division by zero rational function");
        RatFunc { num: self.num.mul(&o.den), den: self.den.mul(&o.num) }.normalized()
    }

    /// The polynomial this function equals, when the denominator divides exactly.
    pub fn as_poly(&self) -> Option<CoeffPoly> {
        self.num.exact_div(&self.den)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
