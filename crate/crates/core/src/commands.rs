//! The commands behind the `rnsym` binary and the C interface. Each command
//! turns a problem into a [`Report`]; malformed input is an `Err`, failed
//! mathematics is a report with a failing check.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use crate::bundle::SymElement;
use crate::cohomology::{sym_cohomology, BettiReport, GradedComplex};
use crate::derivation::Derivation;
use crate::derived::{derived_bracket, ham_bracket, higher_derived_bracket, nplectic_check, rogers_bracket, HamConvention};
use crate::error::{Error, Result};
use crate::lie::{brst_differential, cartan_differential, ce_differential, weil_differential, LieAction, LieAlgebra};
use crate::lift::{
    cartan_equivalence, check_brst_lift, check_leibniz, check_sigma_ladder, check_strict, equivalence_of_lifts, ladder_from_alpha, AlphaAssignment, LiftContext,
};
use crate::model::CdgaModel;
use crate::problem::Problem;
use crate::report::Report;

macro_rules! choice {
    ($(#[$m:meta])* $name:ident { $($var:ident => $s:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
        pub enum $name { $($var),+ }

        impl $name {
            pub const NAMES: &'static [&'static str] = &[$($s),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$var => $s),+ }
            }
        }

        impl FromStr for $name {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($s => Ok($name::$var),)+
                    _ => Err(Error::Input(format!("unknown {} `{s}`; expected one of {}", stringify!($name), Self::NAMES.join(", ")))),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

choice!(
    /// Which complex `cohomology` computes.
    ComplexChoice { DeRham => "de_rham", Sym => "sym", Weil => "weil", Brst => "brst", Ce => "ce", Cartan => "cartan" }
);

choice!(BracketKind { Sym => "sym", Derived => "derived", Ham => "ham", BracketH => "bracket_h", Rogers => "rogers" });

choice!(LiftMode { Strict => "strict", Leibniz => "leibniz", Cartan => "cartan", Sigma => "sigma", Brst => "brst", Equivalence => "equivalence" });

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    /// `max_degree` defaults to 6 for Weil and to the model's top degree plus 2 otherwise.
    Cohomology {
        which: ComplexChoice,
        max_degree: Option<i32>,
    },
    /// Element names from the problem's `elements` table.
    Bracket {
        kind: BracketKind,
        args: Vec<String>,
        bhr: bool,
    },
    Lift {
        mode: LiftMode,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Cohomology { .. } => "cohomology",
            Command::Bracket { .. } => "bracket",
            Command::Lift { .. } => "lift",
        }
    }
}

/// Runs a command. `cap` overrides the problem's coefficient cap.
pub fn run(problem: &Problem, cmd: &Command, cap: Option<u32>) -> Result<Report> {
    let cap = problem.cap(cap);
    let out = match cmd {
        Command::Verify => verify(problem),
        Command::Cohomology { which, max_degree } => cohomology(problem, *which, *max_degree, cap),
        Command::Bracket { kind, args, bhr } => bracket(problem, *kind, args, *bhr),
        Command::Lift { mode } => lift(problem, *mode, cap),
    };
    match out {
        Err(e) if e.is_check_failure() => {
            let mut r = Report::new(cmd.name());
            r.check(failure_name(&e), false, e.to_string());
            Ok(r)
        }
        other => other.map(|mut r| {
            r.set("cap", cap);
            r
        }),
    }
}

fn failure_name(e: &Error) -> &'static str {
    match e {
        Error::NotHomological { .. } => "model differential squares to zero",
        Error::NotClosed(_) => "Q = d + H∂t is homological",
        Error::NotAntisymmetric(..) | Error::Jacobi(..) => "Lie algebra is valid",
        Error::NotHomomorphism(..) => "action is a homomorphism",
        Error::NotSymmetric(_) => "element is a symmetry",
        Error::NotHamiltonian(_) => "element is hamiltonian",
        Error::NotNPlectic(_) => "H is n-plectic",
        _ => "input is closed",
    }
}

/// Records a build step: verdict errors become failing checks, input errors propagate.
fn step<T>(r: &mut Report, name: &str, res: Result<T>, ok: impl FnOnce(&T) -> String) -> Result<Option<T>> {
    match res {
        Ok(v) => {
            let detail = ok(&v);
            r.check(name, true, detail);
            Ok(Some(v))
        }
        Err(Error::NotClosed(dh)) => {
            r.check(name, false, format!("Q not homological, dH = {dh}"));
            Ok(None)
        }
        Err(e) if e.is_check_failure() => {
            r.check(name, false, e.to_string());
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn verify(p: &Problem) -> Result<Report> {
    let mut r = Report::new("verify");
    let Some(model) = step(&mut r, "model differential squares to zero", p.model(), |m| m.name().to_string())? else {
        return Ok(r);
    };
    r.set("model", model.name());
    if p.has_lie_algebra() {
        let g = step(&mut r, "Lie algebra is antisymmetric and satisfies Jacobi", p.lie_algebra(), |g| format!("dim {}", g.dim()))?;
        if let Some(g) = g {
            step(&mut r, "action is a Lie algebra homomorphism", p.action(&g, &model), |a| {
                a.fields().iter().map(|x| model.field_string(x)).collect::<Vec<_>>().join(", ")
            })?;
        }
    }
    if p.has_bundle() {
        if let Some(b) = step(&mut r, "Q = d + H∂t is homological", p.bundle(&model), |b| format!("n = {}, H = {}", b.n(), b.h()))? {
            let np = nplectic_check(&b);
            r.set("nplectic", np.nplectic);
            r.note(match &np.witness {
                None => "H is n-plectic".to_string(),
                Some(w) => format!("H is not n-plectic: ι_v H = 0 for v = {}", model.field_string(w)),
            });
            let names: Vec<String> = p.element_names().map(String::from).collect();
            for name in names {
                step(&mut r, &format!("element `{name}` is well formed"), p.element(&b, &name), |e| b.element_string(e))?;
            }
        }
    }
    Ok(r)
}

/// Generators on which `D²` is nonzero.
fn square_witness(d: &Derivation) -> Option<String> {
    let bad: Vec<String> = d.square_on_generators().into_iter().filter(|(_, v)| !v.is_zero()).map(|(g, v)| format!("{g} ↦ {v}")).collect();
    (!bad.is_empty()).then(|| bad.join(", "))
}

fn ranks_line(label: &str, rs: &[BettiReport]) -> String {
    let cells: Vec<String> = rs.iter().map(|b| format!("{}{}", b.rank, if b.truncated { "*" } else { "" })).collect();
    let lo = rs.first().map_or(0, |b| b.degree);
    format!("{label} ranks from degree {lo}: ({})", cells.join(", "))
}

fn graded_ranks(r: &mut Report, label: &str, d: Derivation, lo: i32, hi: i32, cap: u32) -> Result<()> {
    let sq = square_witness(&d);
    r.check(format!("{label} differential squares to zero"), sq.is_none(), sq.clone().unwrap_or_default());
    if sq.is_some() {
        r.note("ranks skipped: the differential does not square to zero");
        return Ok(());
    }
    let betti = GradedComplex::new(d, cap)?.betti_range(lo, hi)?;
    r.note(ranks_line(label, &betti));
    if betti.iter().any(|b| b.truncated) {
        r.note("* rank valid below cap");
    }
    r.set("betti", &betti);
    Ok(())
}

fn lie_setup(p: &Problem, model: &CdgaModel) -> Result<(LieAlgebra, LieAction)> {
    let g = p.lie_algebra()?;
    let act = p.action(&g, model)?;
    Ok((g, act))
}

fn cohomology(p: &Problem, which: ComplexChoice, max: Option<i32>, cap: u32) -> Result<Report> {
    let mut r = Report::new("cohomology");
    r.set("complex", which.as_str());
    let model = p.model()?;
    let hi = max.unwrap_or(if which == ComplexChoice::Weil { 6 } else { model.top_degree() + 2 });
    match which {
        ComplexChoice::DeRham => graded_ranks(&mut r, "de Rham", model.d().clone(), 0, max.unwrap_or(model.top_degree()), cap)?,
        ComplexChoice::Weil => graded_ranks(&mut r, "Weil", weil_differential(&p.lie_algebra()?)?.diff, 0, hi, cap)?,
        ComplexChoice::Ce | ComplexChoice::Brst | ComplexChoice::Cartan => {
            let (g, act) = lie_setup(p, &model)?;
            let (label, cx) = match which {
                ComplexChoice::Ce => ("CE", ce_differential(&g, &act, &model)?),
                ComplexChoice::Brst => ("BRST", brst_differential(&g, &act, &model)?),
                _ => ("Cartan", cartan_differential(&g, &act, &model)?),
            };
            graded_ranks(&mut r, label, cx.diff, 0, hi, cap)?;
            if which == ComplexChoice::Cartan && !r.passed() {
                r.note("d_C² = ΩᵃL_a vanishes only on invariant cochains; use a trivial action or check lifts with `lift --mode cartan`");
            }
        }
        ComplexChoice::Sym => {
            let b = p.bundle(&model)?;
            let sc = sym_cohomology(&b, cap)?;
            r.note(ranks_line("direct", &sc.direct));
            match &sc.formula {
                Some(f) => {
                    r.note(ranks_line("formula", f));
                    let show = |v: &[BettiReport]| v.iter().map(|b| b.rank.to_string()).collect::<Vec<_>>().join(", ");
                    r.check("direct ranks agree with the formula", sc.agree(), format!("direct ({}), formula ({})", show(&sc.direct), show(f)));
                }
                None => r.note("formula route skipped: the vector-field space is infinite"),
            }
            if sc.direct.iter().any(|b| b.truncated) {
                r.note("* rank valid below cap");
            }
            r.set("sym", &sc);
        }
    }
    Ok(r)
}

fn bracket(p: &Problem, kind: BracketKind, args: &[String], bhr: bool) -> Result<Report> {
    let mut r = Report::new("bracket");
    r.set("kind", kind.as_str());
    r.set("args", args);
    let model = p.model()?;
    let b = p.bundle(&model)?;
    let want_two = kind != BracketKind::Rogers && !(kind == BracketKind::Derived && args.len() > 2);
    if (want_two && args.len() != 2) || args.is_empty() {
        return Err(Error::Input(format!("the {kind} bracket needs {} element names, got {}", if want_two { "2" } else { "at least 1" }, args.len())));
    }
    let text = if kind == BracketKind::Rogers {
        let forms = args.iter().map(|a| p.hamiltonian_form(&b, a)).collect::<Result<Vec<_>>>()?;
        let v = rogers_bracket(&b, &forms)?;
        r.set("degree", v.degree());
        v.to_string()
    } else {
        let es = args.iter().map(|a| p.element(&b, a)).collect::<Result<Vec<SymElement>>>()?;
        let v = match kind {
            BracketKind::Sym => b.sym_bracket(&es[0], &es[1])?,
            BracketKind::Derived if es.len() > 2 => higher_derived_bracket(&b, &es)?,
            BracketKind::Derived => derived_bracket(&b, &es[0], &es[1])?,
            BracketKind::Ham => ham_bracket(&b, &es[0], &es[1], if bhr { HamConvention::Bhr } else { HamConvention::Standard })?,
            BracketKind::BracketH => b.bracket_h(&es[0], &es[1])?,
            BracketKind::Rogers => unreachable!(),
        };
        r.set("degree", v.degree());
        b.element_string(&v)
    };
    r.check(format!("{kind} bracket evaluates"), true, "");
    r.note(format!("[{}] = {text}", args.join(", ")));
    r.set("result", &text);
    Ok(r)
}

fn c_table(ctx: LiftContext<'_>, alpha: &AlphaAssignment) -> Vec<Vec<String>> {
    (0..ctx.g.dim()).map(|a| (0..ctx.g.dim()).map(|b| alpha.c(ctx, a, b).to_string()).collect()).collect()
}

fn lift(p: &Problem, mode: LiftMode, cap: u32) -> Result<Report> {
    let mut r = Report::new("lift");
    r.set("mode", mode.as_str());
    let model = p.model()?;
    let (g, act) = lie_setup(p, &model)?;
    let b = p.bundle(&model)?;
    let ctx = LiftContext { g: &g, act: &act, bundle: &b };
    match mode {
        LiftMode::Strict | LiftMode::Leibniz | LiftMode::Cartan | LiftMode::Sigma => {
            let alpha = p.alpha(ctx)?;
            let c = c_table(ctx, &alpha);
            let c_zero = c.iter().flatten().all(|s| s == "0");
            match mode {
                LiftMode::Strict => {
                    let s = check_strict(ctx, &alpha);
                    r.check("strict lift", s.strict, residual_text(&s.residuals));
                    r.note(if c_zero { "c ≡ 0".to_string() } else { format!("c = {}", json!(c)) });
                    r.set("residuals", &s.residuals);
                }
                LiftMode::Leibniz => {
                    let l = check_leibniz(ctx, &alpha);
                    let detail = match &l.nonconstant {
                        Some((a, b, v)) => format!("c_({a},{b}) = {v} is not constant"),
                        None => residual_text(&l.residuals),
                    };
                    r.check("Leibniz lift with constant c", l.leibniz, detail);
                    if let Some(cs) = &l.constants {
                        r.note(format!("c = {}", json!(cs)));
                    }
                    r.set("constants", &l.constants);
                    r.set("residuals", &l.residuals);
                }
                LiftMode::Cartan => {
                    let cr = cartan_equivalence(ctx, &alpha)?;
                    let strict = check_strict(ctx, &alpha).strict;
                    let leibniz = check_leibniz(ctx, &alpha).leibniz;
                    r.check("strict ⇔ invariant and d_C W = 0", cr.strict == strict, format!("strict {strict}, Cartan {}", cr.strict));
                    r.check("Leibniz ⇔ invariant and d_C W = ½cΩΩ", cr.leibniz == leibniz, format!("leibniz {leibniz}, Cartan {}", cr.leibniz));
                    r.note(format!("W = {}", cr.w));
                    r.note(format!("d_C W = {}", cr.d_cartan));
                    r.note(format!("½cΩΩ = {}", cr.half_c_omega));
                    r.set(
                        "cartan",
                        json!({
                            "W": cr.w.to_string(),
                            "d_cartan": cr.d_cartan.to_string(),
                            "half_c_omega": cr.half_c_omega.to_string(),
                            "invariant": cr.invariant(),
                            "c_constant": cr.c_constant,
                            "strict": cr.strict,
                            "leibniz": cr.leibniz,
                        }),
                    );
                }
                _ => {
                    let (ladder, source) = if p.has_sigma() { (p.sigma(ctx)?, "given") } else { (ladder_from_alpha(ctx, &alpha), "from alpha") };
                    let lr = check_sigma_ladder(ctx, &ladder)?;
                    let detail = lr.residuals.iter().map(|(j, args, v)| format!("rung {j} at ({}): {v}", args.join(","))).collect::<Vec<_>>().join("; ");
                    r.check(format!("σ-ladder ({source}) holds"), lr.holds, detail);
                    r.set("residuals", &lr.residuals);
                }
            }
        }
        LiftMode::Brst => {
            let w = p.brst_element(ctx, false)?;
            let br = check_brst_lift(ctx, &w)?;
            r.check("δ_BRST W = 0", br.closed, if br.closed { String::new() } else { br.residual.to_string() });
            r.check("θ,Ω-free part of W equals H", br.form_part_is_h, "");
            r.check("CE shadow is closed", br.ce_shadow_closed, "");
            r.note(format!("W = {w}"));
            r.note(format!("CE shadow = {}", br.ce_shadow));
            r.set(
                "brst",
                json!({
                    "W": w.to_string(),
                    "residual": br.residual.to_string(),
                    "ce_shadow": br.ce_shadow.to_string(),
                    "ce_shadow_closed": br.ce_shadow_closed,
                }),
            );
        }
        LiftMode::Equivalence => {
            let w1 = p.brst_element(ctx, false)?;
            let w2 = p.brst_element(ctx, true)?;
            let eq = equivalence_of_lifts(ctx, &w1, &w2, cap)?;
            r.check("W₁ − W₂ is δ_BRST-exact", eq, format!("W₁ = {w1}, W₂ = {w2}"));
            r.set("equivalent", eq);
        }
    }
    Ok(r)
}

fn residual_text(res: &crate::lift::LiftResiduals) -> String {
    let mut parts = Vec::new();
    for (a, b, v) in &res.pairing {
        parts.push(format!("ι_{a}α_{b} + ι_{b}α_{a} = {v}"));
    }
    for (a, v) in &res.moment {
        parts.push(format!("dα_{a} + ι_{a}H = {v}"));
    }
    for (a, b, v) in &res.equivariance {
        parts.push(format!("L_{a}α_{b} − α_[{a},{b}] = {v}"));
    }
    parts.join("; ")
}

/// Runs a command and also returns its process exit code: 0 pass, 1 check
/// failed, 2 input error.
pub fn run_with_code(problem: &Problem, cmd: &Command, cap: Option<u32>) -> (std::result::Result<Report, Error>, i32) {
    match run(problem, cmd, cap) {
        Ok(r) => {
            let code = r.exit_code();
            (Ok(r), code)
        }
        Err(e) => (Err(e), 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(src: &str) -> Problem {
        Problem::from_json(src).unwrap()
    }

    #[test]
    fn derived_bracket_of_contractions() {
        let p = load(
            r#"{"model": {"builtin": "affine", "m": 3}, "bundle": {"n": 2, "H": "dx dy dz"},
                "elements": {"a": {"kind": "contraction", "field": "Dx"}, "b": {"kind": "contraction", "field": "Dy"}}}"#,
        );
        let r = run(&p, &Command::Bracket { kind: BracketKind::Derived, args: vec!["a".into(), "b".into()], bhr: false }, None).unwrap();
        assert_eq!(r.data["result"], "-dz*dt");
    }

    #[test]
    fn ham_bracket_of_coordinates() {
        let p = load(
            r#"{"model": {"builtin": "affine", "m": 2}, "bundle": {"n": 1, "H": "dx dy"},
                "elements": {"x": {"kind": "hamiltonian", "form": "x"}, "y": {"kind": "hamiltonian", "form": "y"}}}"#,
        );
        let r = run(&p, &Command::Bracket { kind: BracketKind::Ham, args: vec!["x".into(), "y".into()], bhr: false }, None).unwrap();
        assert_eq!(r.data["result"], "1*dt");
        let r = run(&p, &Command::Bracket { kind: BracketKind::Rogers, args: vec!["x".into(), "y".into()], bhr: false }, None).unwrap();
        assert_eq!(r.data["result"], "1");
    }

    #[test]
    fn verify_reports_witnesses() {
        let p = load(r#"{"model": {"builtin": "affine", "m": 3}, "bundle": {"n": 1, "H": "x dy dz"}}"#);
        let r = run(&p, &Command::Verify, None).unwrap();
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.checks[1].detail, "Q not homological, dH = dx*dy*dz");

        let p = load(r#"{"model": {"builtin": "affine", "m": 2}, "bundle": {"n": 1, "H": "dx dz"}}"#);
        assert!(matches!(run(&p, &Command::Verify, None), Err(Error::Parse { .. })));
    }

    #[test]
    fn choices_parse() {
        assert_eq!("bracket_h".parse::<BracketKind>().unwrap(), BracketKind::BracketH);
        assert!("deRham".parse::<ComplexChoice>().is_err());
        for s in LiftMode::NAMES {
            assert_eq!(s.parse::<LiftMode>().unwrap().as_str(), *s);
        }
    }
}
