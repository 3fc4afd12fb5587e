//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
//! Oracles here are computed independently of the closed-form tables where possible.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rnsym::bundle::{RnBundle, SymElement, FIBER};
use rnsym::cohomology::sym_cohomology;
use rnsym::derived::{derived_bracket, derived_bracket_literal, leibniz_verify, poisson_from_ham};
use rnsym::expr::{parse_field, parse_form};
use rnsym::lie::{brst_differential, cartan_differential, ce_differential, van_est_image_identities, weil_differential, LieAction, LieAlgebra};
use rnsym::lift::{cartan_equivalence, check_leibniz, check_strict, AlphaAssignment, LiftContext};
use rnsym::{CdgaModel, CoeffPoly, Derivation, Error, Generator, GradedElement};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn affine(m: usize) -> CdgaModel {
    CdgaModel::affine(m, None).unwrap()
}

fn bundle(m: &CdgaModel, n: u32, h: &str) -> RnBundle {
    RnBundle::new(m, n, parse_form(h, m).unwrap()).unwrap()
}

fn builtins() -> Vec<CdgaModel> {
    vec![CdgaModel::point().unwrap(), affine(2), CdgaModel::torus(3).unwrap(), CdgaModel::sphere_even(2).unwrap()]
}

fn is_zero_derivation(d: &Derivation) -> bool {
    d.is_zero()
}

/// `Q = d + H∂t` assembled by hand on the model algebra with `t` appended.
fn raw_q(m: &CdgaModel, n: u32, h: &GradedElement) -> Derivation {
    let alg = m.algebra().extended(vec![], vec![Generator::new(FIBER, n as i32)]).unwrap();
    let dt = Derivation::from_images(&alg, -(n as i32), &[(FIBER, GradedElement::one(&alg))]).unwrap();
    let d = m.d().extend_to(&alg).unwrap();
    if h.is_zero() {
        return d;
    }
    d.checked_add(&dt.left_mul(&h.embed(&alg).unwrap()).unwrap()).unwrap()
}

fn c1_structural() -> Outcome {
    for m in builtins() {
        ensure(m.d().is_homological().unwrap(), || format!("d² ≠ 0 on {}", m.name()))?;
    }
    let closed = [
        (affine(2), 1, "dx dy"),
        (CdgaModel::torus(3).unwrap(), 2, "th1 th2 th3"),
        (CdgaModel::sphere_even(2).unwrap(), 1, "x"),
        (affine(3), 2, "(x^2 + y z) dx dy dz"),
    ];
    for (m, n, h) in &closed {
        let p = bundle(m, *n, h);
        ensure(p.q().is_homological().unwrap(), || format!("Q² ≠ 0 for H = {h} on {}", m.name()))?;
        let q = raw_q(m, *n, p.h());
        ensure(q.is_homological().unwrap(), || format!("hand-built Q² ≠ 0 for H = {h}"))?;
    }
    let m = affine(3);
    let h = parse_form("x dy dz", &m).unwrap();
    let expected = (&parse_form("dx", &m).unwrap() * &parse_form("dy", &m).unwrap()) * parse_form("dz", &m).unwrap();
    let witness = raw_q(&m, 1, &h).homological_witness().unwrap();
    // the witness lives in the algebra with t adjoined, so compare renderings
    let got = witness.as_ref().map(|(g, v)| (g.clone(), v.to_string()));
    ensure(got == Some((FIBER.to_string(), expected.to_string())), || format!("hand-built witness {got:?}"))?;
    match RnBundle::new(&m, 1, h) {
        Err(Error::NotClosed(w)) if w == expected.to_string() => {}
        other => return Err(format!("non-closed H accepted or wrong witness: {other:?}")),
    }
    Ok(format!("d on 4 builtins, Q on {} closed H, witness dH = {expected}", closed.len()))
}

fn c2_cartan_calculus() -> Outcome {
    let mut models = builtins();
    models.push(affine(3));
    let mut checked = 0;
    for m in &models {
        let mut fields: Vec<_> = m.field_names().iter().map(|f| m.basis_field(f).unwrap()).collect();
        // a few polynomial fields on affine models
        if m.algebra().nvars() >= 2 {
            for s in ["x*Dy - y*Dx", "x^2*Dx + y*Dy"] {
                fields.push(parse_field(s, m).unwrap());
            }
        }
        let d = m.d();
        for x in &fields {
            let (ix, lx) = (m.contraction(x), m.lie_derivative(x));
            // L_X on generators from the definition, independently of the commutator code
            for (i, g) in m.algebra().generators().iter().enumerate() {
                let w = GradedElement::generator_at(m.algebra(), i);
                let expect = &ix.apply(&d.apply(&w)) + &d.apply(&ix.apply(&w));
                ensure(lx.apply(&w) == expect, || format!("L_X on {g:?} in {}", m.name()))?;
            }
            ensure(is_zero_derivation(&d.commutator(&ix).unwrap().checked_sub(&lx).unwrap()), || format!("[d,ι_X] ≠ L_X on {}", m.name()))?;
            for y in &fields {
                let (iy, ly) = (m.contraction(y), m.lie_derivative(y));
                let xy = m.vf_bracket(x, y).unwrap();
                // [X,Y]^j = X(Y^j) − Y(X^j) on coordinates
                for (j, yj) in y.components().iter().enumerate() {
                    let mut expect = CoeffPoly::zero(m.algebra().nvars());
                    for (i, xi) in x.components().iter().enumerate() {
                        if i < m.algebra().nvars() {
                            expect = expect.add(&xi.mul(&yj.partial(i))).sub(&y.components()[i].mul(&x.components()[j].partial(i)));
                        }
                    }
                    if m.algebra().nvars() == m.field_names().len() {
                        ensure(xy.components()[j] == expect, || format!("[X,Y] component {j} on {}", m.name()))?;
                    }
                }
                ensure(is_zero_derivation(&lx.commutator(&iy).unwrap().checked_sub(&m.contraction(&xy)).unwrap()), || format!("[L_X,ι_Y] on {}", m.name()))?;
                ensure(is_zero_derivation(&lx.commutator(&ly).unwrap().checked_sub(&m.lie_derivative(&xy)).unwrap()), || format!("[L_X,L_Y] on {}", m.name()))?;
                ensure(is_zero_derivation(&ix.commutator(&iy).unwrap()), || format!("[ι_X,ι_Y] on {}", m.name()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} field pairs over {} models, zero residual", models.len()))
}

fn c3_jacobi_fuzz() -> Outcome {
    let mut r = rng(3);
    let instances = [
        (CdgaModel::point().unwrap(), 2, "0"),
        (affine(2), 1, "dx dy"),
        (CdgaModel::torus(3).unwrap(), 2, "th1 th2 th3"),
        (CdgaModel::sphere_even(2).unwrap(), 1, "x"),
    ];
    let mut counts = (0, 0);
    for (m, n, h) in &instances {
        let alg = m.algebra();
        for _ in 0..100 {
            let ds: Vec<Derivation> = (0..3)
                .map(|_| {
                    let k = r.gen_range(-1..=1);
                    derivation(&mut r, alg, k, 1)
                })
                .collect();
            let res = derivation_jacobi(&ds[0], &ds[1], &ds[2]);
            ensure(res.is_zero(), || format!("derivation Jacobi residual on {}", m.name()))?;
            counts.0 += 1;
        }
        let p = bundle(m, *n, h);
        let spaces: BTreeMap<i32, Vec<SymElement>> = (-(*n as i32)..=0).map(|q| (q, p.sym_space(q, 1).unwrap().basis)).collect();
        for _ in 0..100 {
            let es: Vec<SymElement> = (0..3)
                .map(|_| {
                    let q = r.gen_range(-(*n as i32)..=0);
                    sym_combination(&mut r, &p, q, &spaces[&q])
                })
                .collect();
            let res = sym_jacobi(&p, &es[0], &es[1], &es[2]);
            ensure(res.is_zero(), || format!("sym Jacobi residual {} on {}", p.element_string(&res), m.name()))?;
            counts.1 += 1;
        }
    }
    Ok(format!("{} derivation triples, {} sym triples over {} models", counts.0, counts.1, instances.len()))
}

use rand::Rng;

fn c4_chain_map() -> Outcome {
    let t3 = CdgaModel::torus(3).unwrap();
    let p = bundle(&t3, 2, "th1 th2 th3");
    let flat = p.flat();
    let mut n = 0;
    for q in -2..=0 {
        for e in p.sym_space(q, 1).unwrap().basis {
            let fe = p.map_f(&e).unwrap();
            // raw commutators with Q and with d. On the torus L_X is the zero
            // operator, so compare operators rather than decoded elements.
            let lhs_raw = p.q().commutator(&p.encode(&e).unwrap()).unwrap();
            let rhs_raw = flat.q().commutator(&flat.encode(&fe).unwrap()).unwrap();
            if q == 0 {
                ensure(lhs_raw.is_zero() && rhs_raw.is_zero(), || "degree 0 symmetry not closed".into())?;
            } else {
                let de = p.sym_d(&e).unwrap();
                ensure(p.encode(&de).unwrap() == lhs_raw, || format!("[Q,e] ≠ table for e = {}", p.element_string(&e)))?;
                let dfe = flat.sym_d(&fe).unwrap();
                ensure(flat.encode(&dfe).unwrap() == rhs_raw, || format!("[d,Fe] ≠ table for e = {}", p.element_string(&e)))?;
                ensure(p.map_f(&de).unwrap() == dfe, || format!("F(δe) ≠ δ(Fe) for e = {}", p.element_string(&e)))?;
            }
            n += 1;
        }
    }
    // nonzero defect witness on affine(3), H = dx∧dy∧dz, X = ∂x, Y = x∂y
    let m = affine(3);
    let p = bundle(&m, 2, "dx dy dz");
    let flat = p.flat();
    let (x, y) = (parse_field("Dx", &m).unwrap(), parse_field("x*Dy", &m).unwrap());
    let zero = GradedElement::zero(m.algebra());
    let lx = p.lie(x.clone(), zero.clone()).unwrap();
    let ly = p.lie(y.clone(), zero.clone()).unwrap();
    let lxy = p.lie(m.vf_bracket(&x, &y).unwrap(), zero).unwrap();
    let (fx, fy, fxy) = (p.map_f(&lx).unwrap(), p.map_f(&ly).unwrap(), p.map_f(&lxy).unwrap());
    let raw = flat.encode(&fx).unwrap().commutator(&flat.encode(&fy).unwrap()).unwrap();
    let defect = flat.decode(&raw, 0).unwrap().sub(&fxy).unwrap();
    // dι_Yι_XH by hand: ι_{∂x}(dx dy dz) = dy dz, ι_{x∂y}(dy dz) = x dz, d(x dz) = dx dz
    let expect = parse_form("dx dz", &m).unwrap();
    let SymElement::Lie { x: dx, b } = &defect else { return Err("defect has wrong degree".into()) };
    ensure(dx.is_zero() && *b == expect && p.bracket_defect(&x, &y) == expect, || format!("defect {}", p.element_string(&defect)))?;
    Ok(format!("{n} basis elements in degrees 0..-2; defect (dι_Yι_XH)∂t = {expect}"))
}

fn c5_sym_ranks() -> Outcome {
    let ranks = |p: &RnBundle| {
        let s = sym_cohomology(p, 1).unwrap();
        let d: Vec<usize> = s.direct.iter().map(|b| b.rank).collect();
        let f: Option<Vec<usize>> = s.formula.as_ref().map(|f| f.iter().map(|b| b.rank).collect());
        (d, f)
    };
    let mut lines = Vec::new();
    let mut ok = true;
    let t3 = bundle(&CdgaModel::torus(3).unwrap(), 2, "th1 th2 th3");
    let (d, f) = ranks(&t3);
    ok &= f.as_deref() == Some(&[1, 3, 6][..]) && f.as_ref() == Some(&d);
    lines.push(format!("torus(3): direct {d:?}, formula {f:?}, required [1, 3, 6]"));
    let pt = bundle(&CdgaModel::point().unwrap(), 2, "0");
    let (d, f) = ranks(&pt);
    ok &= f.as_ref() == Some(&d) && d == [1, 0, 0];
    lines.push(format!("point: direct {d:?}, formula {f:?}"));
    let s4 = bundle(&CdgaModel::sphere_even(2).unwrap(), 3, "x^2");
    let (d, f) = ranks(&s4);
    ok &= f.as_ref() == Some(&d);
    lines.push(format!("sphere_even(2): direct {d:?}, formula {f:?}"));
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c6_derived_oracle() -> Outcome {
    let t3 = CdgaModel::torus(3).unwrap();
    let p = bundle(&t3, 2, "th1 th2 th3");
    let basis: Vec<SymElement> = [-1, -2].iter().flat_map(|&q| p.sym_space(q, 1).unwrap().basis).collect();
    let mut pairs = 0;
    for a in &basis {
        for b in &basis {
            let lit = derived_bracket_literal(&p, a, b).unwrap();
            let cf = derived_bracket(&p, a, b).unwrap();
            ensure(lit == cf, || format!("⌊{}, {}⌋", p.element_string(a), p.element_string(b)))?;
            pairs += 1;
        }
    }
    let mut triples = 0;
    for a in &basis {
        for b in &basis {
            for c in &basis {
                let rep = leibniz_verify(&p, a, b, c).unwrap();
                ensure(rep.holds(), || format!("Leibniz on torus basis: {rep:?}"))?;
                triples += 1;
            }
        }
    }
    let m = affine(3);
    let mut r = rng(6);
    let nv = m.algebra().nvars();
    let random_derived = |r: &mut rand_chacha::ChaCha8Rng, p: &RnBundle| -> SymElement {
        if r.gen_bool(0.6) {
            let alpha = element(r, m.algebra(), 1, 1);
            p.contraction(field(r, &m, 1), alpha).unwrap()
        } else {
            p.form(-2, GradedElement::from_poly(m.algebra(), poly(r, nv, 2))).unwrap()
        }
    };
    let mut fuzz = 0;
    let mut parity_sensitive = 0;
    for i in 0..120 {
        let h = element(&mut r, m.algebra(), 3, 1);
        let p = RnBundle::new(&m, 2, h).unwrap();
        let (a, b) = (random_derived(&mut r, &p), random_derived(&mut r, &p));
        let lit = derived_bracket_literal(&p, &a, &b).unwrap();
        ensure(lit == derived_bracket(&p, &a, &b).unwrap(), || format!("affine instance {i}"))?;
        let c = random_derived(&mut r, &p);
        for (u, v, w) in [(&a, &b, &c), (&c, &a, &b)] {
            let rep = leibniz_verify(&p, u, v, w).unwrap();
            ensure(rep.holds(), || format!("Leibniz on affine instance {i}: {rep:?}"))?;
            // triples where ⌊⌊a,b⌋,c⌋ ≠ 0 with ‖a‖ odd separate the two sign readings
            if u.degree() % 2 == 0 && !derived_bracket(&p, &derived_bracket(&p, u, v).unwrap(), w).unwrap().is_zero() {
                parity_sensitive += 1;
            }
            triples += 1;
        }
        fuzz += 1;
    }
    Ok(format!("{pairs} torus basis pairs, {fuzz} affine instances, {triples} Leibniz triples ({parity_sensitive} need the (−1)^‖a‖ sign)"))
}

/// Polynomials in x, y as exponent maps, differentiated by hand.
type P2 = BTreeMap<(u32, u32), i64>;

fn p2_mul(a: &P2, b: &P2) -> P2 {
    let mut out = P2::new();
    for (&(i, j), &c) in a {
        for (&(k, l), &d) in b {
            *out.entry((i + k, j + l)).or_default() += c * d;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn p2_dx(a: &P2) -> P2 {
    a.iter().filter(|((i, _), _)| *i > 0).map(|(&(i, j), &c)| ((i - 1, j), c * i as i64)).collect()
}

fn p2_dy(a: &P2) -> P2 {
    a.iter().filter(|((_, j), _)| *j > 0).map(|(&(i, j), &c)| ((i, j - 1), c * j as i64)).collect()
}

fn p2_to_poly(a: &P2) -> CoeffPoly {
    a.iter().fold(CoeffPoly::zero(2), |acc, (&(i, j), &c)| acc.add(&CoeffPoly::monomial(vec![i, j], int(c))))
}

fn c7_poisson() -> Outcome {
    let m = affine(2);
    let p = bundle(&m, 1, "dx dy");
    let monos: Vec<(u32, u32)> = (0..=3).flat_map(|d| (0..=d).map(move |i| (i, d - i))).collect();
    let mut n = 0;
    for &f in &monos {
        for &g in &monos {
            let (fp, gp) = (P2::from([(f, 1)]), P2::from([(g, 1)]));
            let mut oracle = p2_mul(&p2_dx(&fp), &p2_dy(&gp));
            for (k, c) in p2_mul(&p2_dy(&fp), &p2_dx(&gp)) {
                *oracle.entry(k).or_default() -= c;
            }
            oracle.retain(|_, c| *c != 0);
            let fe = GradedElement::from_poly(m.algebra(), p2_to_poly(&fp));
            let ge = GradedElement::from_poly(m.algebra(), p2_to_poly(&gp));
            let got = poisson_from_ham(&p, &fe, &ge).unwrap();
            let want = GradedElement::from_poly(m.algebra(), p2_to_poly(&oracle));
            ensure(got == want, || format!("{{x^{}y^{}, x^{}y^{}}}: got {got}, oracle {want}", f.0, f.1, g.0, g.1))?;
            n += 1;
        }
    }
    Ok(format!("{n} monomial pairs of degree ≤ 3 match ∂xf∂yg − ∂yf∂xg"))
}

struct LiftInstance {
    name: &'static str,
    model: CdgaModel,
    g: LieAlgebra,
    fields: Vec<&'static str>,
    n: u32,
    h: &'static str,
    alpha: Vec<&'static str>,
}

fn lift_instances() -> Vec<LiftInstance> {
    let rot = |name, alpha| LiftInstance { name, model: affine(2), g: LieAlgebra::abelian(1), fields: vec!["x*Dy - y*Dx"], n: 1, h: "dx dy", alpha };
    let theta = |name, alpha| LiftInstance { name, model: CdgaModel::torus(2).unwrap(), g: LieAlgebra::abelian(1), fields: vec!["e1"], n: 2, h: "0", alpha };
    vec![
        rot("rotation", vec!["(x^2 + y^2)/2"]),
        rot("rotation, wrong moment", vec!["(x^2 + y^2)/2 + x"]),
        theta("torus θ¹", vec!["th1"]),
        theta("torus zero moment", vec!["0"]),
        LiftInstance { name: "translation, y dx", model: affine(2), g: LieAlgebra::abelian(1), fields: vec!["Dx"], n: 2, h: "0", alpha: vec!["y dx"] },
        LiftInstance { name: "translation, x dx", model: affine(2), g: LieAlgebra::abelian(1), fields: vec!["Dx"], n: 2, h: "0", alpha: vec!["x dx"] },
        LiftInstance {
            name: "so(3) on R³",
            model: affine(3),
            g: LieAlgebra::su2(),
            fields: vec!["z*Dy - y*Dz", "x*Dz - z*Dx", "y*Dx - x*Dy"],
            n: 2,
            h: "dx dy dz",
            alpha: vec!["x (y dy + z dz)", "y (x dx + z dz)", "z (x dx + y dy)"],
        },
    ]
}

fn c8_lift_equivalences() -> Outcome {
    let mut lines = Vec::new();
    for inst in lift_instances() {
        let m = &inst.model;
        let fields = inst.fields.iter().map(|s| parse_field(s, m).unwrap()).collect();
        let act = LieAction::new(&inst.g, m, fields).unwrap();
        let p = bundle(m, inst.n, inst.h);
        let ctx = LiftContext { g: &inst.g, act: &act, bundle: &p };
        let alpha = AlphaAssignment::new(ctx, inst.alpha.iter().map(|s| parse_form(s, m).unwrap()).collect()).unwrap();
        let strict = check_strict(ctx, &alpha).strict;
        let leib = check_leibniz(ctx, &alpha);
        let cr = cartan_equivalence(ctx, &alpha).unwrap();
        ensure(strict == cr.strict, || format!("{}: strict {strict} vs Cartan {}", inst.name, cr.strict))?;
        ensure(leib.leibniz == cr.leibniz, || format!("{}: leibniz {} vs Cartan {}", inst.name, leib.leibniz, cr.leibniz))?;
        lines.push(format!("{} {}/{}", inst.name, strict as u8, leib.leibniz as u8));
        match inst.name {
            "rotation" => ensure(strict && cr.d_cartan.is_zero() && cr.invariant(), || "rotation should be strict".into())?,
            "torus θ¹" => {
                let c = leib.constants.clone().unwrap_or_default();
                ensure(!strict && leib.leibniz && c == vec![vec!["2".to_string()]], || format!("torus θ¹: c = {c:?}"))?;
                let omega = GradedElement::generator(cr.d_cartan.algebra(), &inst.g.omega_name(0)).unwrap();
                ensure(cr.d_cartan == omega.pow(2) && cr.half_c_omega == cr.d_cartan, || format!("d_C W = {}", cr.d_cartan))?;
            }
            _ => {}
        }
    }
    Ok(format!("verdicts agree (strict/leibniz): {}", lines.join(", ")))
}

fn c9_brst_weil() -> Outcome {
    let models = [CdgaModel::point().unwrap(), CdgaModel::torus(2).unwrap(), affine(2)];
    let algebras = [("abelian(2)", LieAlgebra::abelian(2)), ("su(2)", LieAlgebra::su2())];
    let mut count = 0;
    for m in &models {
        for (gname, g) in &algebras {
            let mut actions = vec![LieAction::trivial(g, m)];
            if g.is_abelian() && m.field_names().len() >= 2 {
                let fs: Vec<_> = m.field_names().iter().take(2).map(|f| m.basis_field(f).unwrap()).collect();
                actions.push(LieAction::new(g, m, fs).unwrap());
            }
            for act in &actions {
                let where_ = || format!("{gname} on {}", m.name());
                for (kind, cx) in
                    [("CE", ce_differential(g, act, m).unwrap()), ("Weil", weil_differential(g).unwrap()), ("BRST", brst_differential(g, act, m).unwrap())]
                {
                    ensure(cx.diff.is_homological().unwrap(), || format!("{kind} δ² ≠ 0 for {}", where_()))?;
                    count += 1;
                }
                // d_C² = Ωᵃ L_{X_a}: zero on invariant cochains, and identically zero for trivial actions
                let cart = cartan_differential(g, act, m).unwrap();
                let alg = cart.algebra().clone();
                let sq = cart.diff.commutator(&cart.diff).unwrap().scale(&rnsym::lift::half());
                let mut omega_l = Derivation::zero(&alg, 2);
                for a in 0..g.dim() {
                    let l = m.lie_derivative(act.field(a)).extend_to(&alg).unwrap();
                    omega_l = omega_l.checked_add(&l.left_mul(&GradedElement::generator(&alg, &g.omega_name(a)).unwrap()).unwrap()).unwrap();
                }
                ensure(sq.checked_sub(&omega_l).unwrap().is_zero(), || format!("d_C² ≠ ΩL for {}", where_()))?;
                let trivial = act.fields().iter().all(|x| x.is_zero());
                ensure(!trivial || sq.is_zero(), || format!("Cartan δ² ≠ 0 for trivial {}", where_()))?;
                count += 1;
                let ve = van_est_image_identities(g, act, m).unwrap();
                ensure(ve.matches && ve.theta_ok && ve.omega_ok && ve.forms_ok, || format!("van Est residuals {:?}", ve.residuals))?;
            }
        }
    }
    let w = weil_differential(&LieAlgebra::abelian(1)).unwrap().graded(0).unwrap().betti_range(0, 6).unwrap();
    let ranks: Vec<usize> = w.iter().map(|b| b.rank).collect();
    ensure(ranks == [1, 0, 0, 0, 0, 0, 0] && w.iter().all(|b| !b.truncated), || format!("abelian Weil Betti {ranks:?}"))?;
    Ok(format!("{count} differentials square to zero, Cartan d² = ΩᵃL_a (zero for trivial actions); abelian Weil Betti {ranks:?}; van Est exact"))
}

fn c10_gauge() -> Outcome {
    let cases = [
        (affine(2), 1, "dx dy", "x^2 dy"),
        (affine(3), 2, "dx dy dz", "x y dy dz - z^2 dx dy"),
        (CdgaModel::sphere_even(2).unwrap(), 3, "x^2", "y"),
        (CdgaModel::torus(3).unwrap(), 2, "th1 th2 th3", "th1 th2"),
    ];
    for (m, n, h, b) in &cases {
        let p = bundle(m, *n, h);
        let b = parse_form(b, m).unwrap();
        let q = p.gauge(&b).unwrap();
        // the gauged bundle, rebuilt from H + dB directly
        let direct = RnBundle::new(m, *n, p.h() + &m.d().apply(&b)).unwrap();
        ensure(q.h() == direct.h(), || "gauge map".into())?;
        ensure(p.are_equivalent(&q, 3).unwrap() && q.are_equivalent(&p, 3).unwrap(), || format!("H = {h} not equivalent to its gauge"))?;
    }
    let t2 = CdgaModel::torus(2).unwrap();
    let cls = bundle(&t2, 1, "th1 th2");
    let zero = bundle(&t2, 1, "0");
    ensure(!cls.are_equivalent(&zero, 3).unwrap(), || "θ¹θ² ~ 0 on torus(2)".into())?;
    Ok(format!("{} gauge pairs equivalent; θ¹θ² ≁ 0 on torus(2)", cases.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("structural suite", c1_structural),
        ("Cartan calculus", c2_cartan_calculus),
        ("graded Jacobi fuzz", c3_jacobi_fuzz),
        ("chain map F and bracket defect", c4_chain_map),
        ("sym cohomology ranks, two routes", c5_sym_ranks),
        ("derived bracket oracle and dg-Leibniz", c6_derived_oracle),
        ("Poisson recovery", c7_poisson),
        ("lift equivalences", c8_lift_equivalences),
        ("BRST/Weil suite", c9_brst_weil),
        ("gauge classification", c10_gauge),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(detail) => println!("PASS  {:>2}  {name}: {detail} ({secs:.2}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2}  {name}: {detail} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("{}/10 criteria passed in {:.1}s", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
