//! Acceptance criteria 1-10. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line, with its timing.
//!
//! Tolerances:
//! - exact criteria: exact equality in the rational-function ring
//! - hopf relation on float radii: |residual| < 1e-12
//! - float/exact agreement: |a - b| <= 1e-9 * max(1, |a|) per entry

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use jacobi_core::classify::{
    admissible_l, hopf_check, isolated_instance, main_theorem_report, standing_assumptions, verdict, verdict_with,
    AdmissibleSet, Classification, Family, ReportConfig, FAMILIES, ISOLATED_NAME,
};
use jacobi_core::curvature::{defect_affine, jacobi_l, CurvatureModel, DefectIndex};
use jacobi_core::derive::{
    hypothesis_lines, l0_point, run_builtin, run_script, without_line, StepStatus, BUILTIN_SCRIPTS,
};
use jacobi_core::exact::{factor_match, parse_expr, q, Assumptions, BigRational, Float, RatFunc, Scalar};
use jacobi_core::frame::{g_inner, FrameOperator, FrameVector, PointData, Shape};
use jacobi_core::sweep::{
    hopf_float_sweep, nonhopf_exclusion, random_nonhopf, random_rational, rng_for, to_float, Strategy,
};
use rand::Rng;

const SEED: u64 = 20_240_917;
const HOPF_RADIUS_TOL: f64 = 1e-12;
const AGREEMENT_TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn e(s: &str) -> RatFunc {
    parse_expr(s).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn idx(i: usize, j: usize, k: usize, m: usize) -> DefectIndex {
    DefectIndex { i, j, k, m }
}

fn hopf_symbolic() -> PointData<RatFunc> {
    PointData::hopf(e("c"), e("alpha"), e("lambda"), e("nu")).unwrap()
}

fn criterion_1() -> Outcome {
    let d = defect_affine(&hopf_symbolic()).unwrap();
    let l = e("L");
    // frame order: 0 = e, 1 = phi e, 2 = xi
    let cases = [
        (
            "(e,phie,phie)_e",
            idx(0, 1, 1, 0),
            "alpha*(c + lambda*nu - L)*(nu - lambda)",
        ),
        (
            "(e,xi,e)_xi",
            idx(0, 2, 0, 2),
            "(c/4 + alpha*lambda)*(L - alpha*lambda - c/4)",
        ),
        (
            "(phie,xi,phie)_xi",
            idx(1, 2, 1, 2),
            "(c/4 + alpha*nu)*(L - alpha*nu - c/4)",
        ),
    ];
    let mut ks = Vec::new();
    for (name, i, template) in cases {
        let comp = d.component(i, &l);
        let k = factor_match(&comp, &e(template))
            .ok_or_else(|| format!("{} = {} does not match {}", name, comp, template))?;
        ensure(k == q(1, 1) || k == q(-1, 1), || {
            format!("{}: k = {} is not +-1", name, k)
        })?;
        ks.push(format!("{} k={}", name, k));
    }
    Ok(ks.join(", "))
}

fn criterion_2() -> Outcome {
    for f in &FAMILIES {
        let p = f.symbolic_point();
        let Shape::Hopf { alpha, lambda, nu } = p.shape() else {
            return Err(format!("{} is not Hopf", f.name));
        };
        let r = hopf_check(alpha, lambda, nu, p.c());
        ensure(r.is_zero(), || format!("{}: hopf_check = {}", f.name, r))?;
    }
    let mut worst = 0.0f64;
    for f in FAMILIES.iter().filter(|f| f.param.is_some()) {
        for i in 0..1000u64 {
            let mut rng = rng_for(SEED, i);
            let r = match f.name {
                "cp2_geodesic_sphere" => rng.gen_range(0.05..1.5),
                "cp2_tube_curve" | "ch2_alpha_zero" => {
                    rng.gen_range(0.05..5.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
                }
                _ => rng.gen_range(0.05..5.0),
            };
            let x = Float::new(f.param_from_radius(r));
            let p = f.point(&x).map_err(|err| format!("{} at r={}: {}", f.name, r, err))?;
            let Shape::Hopf { alpha, lambda, nu } = p.shape() else {
                unreachable!()
            };
            worst = worst.max(hopf_check(alpha, lambda, nu, p.c()).value().abs());
        }
    }
    ensure(worst < HOPF_RADIUS_TOL, || format!("max |hopf_check| = {:e}", worst))?;
    Ok(format!(
        "6 families symbolic, 5x1000 radii max |residual| = {:.1e}",
        worst
    ))
}

fn expected_l(f: &Family) -> RatFunc {
    match f.name {
        "cp2_geodesic_sphere" => e("t^2"),
        "cp2_tube_curve" => e("1"),
        "ch2_horosphere" => e("1"),
        "ch2_geodesic_sphere" => e("u^2"),
        "ch2_tube_hyperplane" => e("t^2"),
        "ch2_alpha_zero" => e("-1"),
        other => panic!("unexpected family {}", other),
    }
}

fn criterion_3() -> Outcome {
    let mut found = Vec::new();
    for f in &FAMILIES {
        let p = f.symbolic_point();
        let want = expected_l(f);
        let v = verdict(&p).map_err(|err| format!("{}: {}", f.name, err))?;
        ensure(
            v.class == Classification::ProperPseudoParallel { l: want.clone() },
            || format!("{}: {:?}", f.name, v.class),
        )?;
        let d = defect_affine(&p).unwrap();
        ensure(d.eval(&want).iter().all(RatFunc::is_zero), || {
            format!("{}: defect nonzero at L", f.name)
        })?;
        ensure(!want.is_zero(), || format!("{}: L = 0", f.name))?;
        found.push(format!("{} L={}", f.name, want));
    }
    Ok(found.join(", "))
}

fn has_requirement(set: &AdmissibleSet<RatFunc>, reduced: &str) -> bool {
    let want = e(reduced);
    set.requirements()
        .iter()
        .chain(match set {
            AdmissibleSet::Empty { witness, .. } => Some(witness),
            _ => None,
        })
        .any(|o| o.reduced.as_ref().is_some_and(|r| factor_match(r, &want).is_some()))
}

fn decisive_c(set: &AdmissibleSet<RatFunc>) -> bool {
    match set {
        AdmissibleSet::Empty { witness, .. } => witness.decisive && factor_match(&witness.expr, &e("c")).is_some(),
        _ => false,
    }
}

fn solve(p: &PointData<RatFunc>, extra: &[&str]) -> AdmissibleSet<RatFunc> {
    let mut asm = standing_assumptions(p);
    asm.extend(&Assumptions::parse(extra).unwrap());
    admissible_l(&defect_affine(p).unwrap(), &asm)
}

fn nonhopf(alpha: &str, gamma: &str, delta: &str, mu: &str) -> PointData<RatFunc> {
    PointData::nonhopf(e("c"), e(alpha), e("beta"), e(gamma), e(delta), e(mu)).unwrap()
}

fn criterion_4() -> Outcome {
    let empty = nonhopf_exclusion(SEED, 100, Strategy::Parallel);
    ensure(empty == 100, || {
        format!("{}/100 random points have an empty set", empty)
    })?;

    // alpha = 0: delta = 0 is forced, then mu = 0, then c = 0
    let s = solve(&nonhopf("0", "gamma", "delta", "mu"), &[]);
    ensure(s.is_empty() && has_requirement(&s, "delta"), || {
        "alpha=0: delta not forced".into()
    })?;
    let s = solve(&nonhopf("0", "gamma", "0", "mu"), &[]);
    ensure(has_requirement(&s, "mu"), || "alpha=0, delta=0: mu not forced".into())?;
    ensure(decisive_c(&solve(&nonhopf("0", "gamma", "0", "0"), &[])), || {
        "alpha=0, delta=mu=0: no c=0 contradiction".into()
    })?;

    // alpha != 0, mu != -c/(4 alpha): delta^2 = 0, then mu = 0, then c = 0
    let asm = ["alpha", "alpha*mu + c/4"];
    let s = solve(&nonhopf("alpha", "gamma", "delta", "mu"), &asm);
    ensure(has_requirement(&s, "delta^2"), || "generic mu: delta not forced".into())?;
    let s = solve(&nonhopf("alpha", "gamma", "0", "mu"), &asm);
    ensure(has_requirement(&s, "mu"), || {
        "generic mu, delta=0: mu not forced".into()
    })?;
    ensure(
        decisive_c(&solve(&nonhopf("alpha", "gamma", "0", "0"), &["alpha"])),
        || "generic mu, delta=mu=0: no c=0 contradiction".into(),
    )?;

    // mu = -c/(4 alpha), gamma = beta^2/alpha - c/(4 alpha): delta = 0, then l = 0
    let gamma = "beta^2/alpha - c/(4*alpha)";
    let mu = "-c/(4*alpha)";
    let s = solve(&nonhopf("alpha", gamma, "delta", mu), &["alpha"]);
    ensure(has_requirement(&s, "delta"), || "mu branch: delta not forced".into())?;
    let p = nonhopf("alpha", gamma, "0", mu);
    ensure(matches!(solve(&p, &["alpha"]), AdmissibleSet::All), || {
        "mu branch, delta=0: not degenerate".into()
    })?;
    ensure(jacobi_l(&p).unwrap().is_zero(), || "mu branch, delta=0: l != 0".into())?;
    Ok("100/100 empty; sub-cases alpha=0, generic mu, mu=-c/4alpha force delta=0 then c=0 / c=0 / l=0".into())
}

fn criterion_5() -> Outcome {
    ensure(jacobi_l(&l0_point()).unwrap().is_zero(), || {
        "l != 0 at the l=0 data".into()
    })?;
    let gamma = "beta^2/alpha - c/(4*alpha)";
    let mu = "-c/(4*alpha)";
    let perturbed = [
        nonhopf("alpha", &format!("{} + s", gamma), "0", mu),
        nonhopf("alpha", gamma, "s", mu),
        nonhopf("alpha", gamma, "0", &format!("{} + s", mu)),
    ];
    for (name, p) in ["gamma", "delta", "mu"].iter().zip(&perturbed) {
        ensure(!jacobi_l(p).unwrap().is_zero(), || {
            format!("perturbing {} keeps l = 0", name)
        })?;
    }
    Ok("l = 0 at the data; each of gamma, delta, mu + s gives l != 0".into())
}

fn contradiction_exprs() -> Result<Vec<RatFunc>, String> {
    let mut out = Vec::new();
    for (name, _) in BUILTIN_SCRIPTS {
        let r = run_builtin(name).map_err(|err| format!("{}: {}", name, err))?;
        for step in r.steps.iter().filter(|s| s.text.starts_with("contradiction")) {
            if let Some(expr) = step.detail.strip_suffix(" = 0 is impossible") {
                out.push(e(expr));
            }
        }
    }
    Ok(out)
}

fn criterion_6() -> Outcome {
    let names = ["prop32", "lemma41", "lemma42", "lemma43", "prop51"];
    for name in names {
        let r = run_builtin(name).map_err(|err| format!("{}: {}", name, err))?;
        ensure(r.passed, || format!("{} fails: {:?}", name, r.failure))?;
        ensure(r.steps.iter().all(|s| s.status != StepStatus::Fail), || {
            format!("{} has a failing step", name)
        })?;
    }
    let found = contradiction_exprs()?;
    for (label, templates) in [
        ("c=0", &["c", "c^2"][..]),
        ("beta=0", &["beta", "beta^3"][..]),
        ("3c beta/4alpha=0", &["c*beta/alpha"][..]),
        ("4alpha^2+beta^2=0", &["4*alpha^2 + beta^2"][..]),
    ] {
        let hit = found
            .iter()
            .any(|x| templates.iter().any(|t| factor_match(x, &e(t)).is_some()));
        ensure(hit, || format!("no script ends in {}", label))?;
    }
    let mut ablations = 0;
    for (name, src) in BUILTIN_SCRIPTS {
        for line in hypothesis_lines(src).map_err(|err| err.to_string())? {
            let r = run_script(name, &without_line(src, line)).map_err(|err| err.to_string())?;
            ensure(!r.passed && r.failure.is_some(), || {
                format!("{} passes without line {}", name, line)
            })?;
            ablations += 1;
        }
    }
    Ok(format!(
        "5 scripts PASS, 4 closing contradictions found, {} ablations all FAIL",
        ablations
    ))
}

fn criterion_7() -> Outcome {
    let a = |s: &str| e(s);
    let cols = [
        [a("alpha"), a("beta"), a("gamma")],
        [a("beta"), a("delta"), a("mu")],
        [a("gamma"), a("mu"), a("lambda")],
    ];
    let model = CurvatureModel::new(e("c"), FrameOperator::symmetric(cols).unwrap()).unwrap();
    let b: Vec<FrameVector<RatFunc>> = (0..3).map(FrameVector::basis).collect();
    let r = |x: usize, y: usize, z: usize| model.riemann(&b[x], &b[y], &b[z]);
    let rw = |x: usize, y: usize, z: usize, w: usize| g_inner(&r(x, y, z), &b[w]);
    for x in 0..3 {
        for y in 0..3 {
            for z in 0..3 {
                let bianchi = r(x, y, z) + r(y, z, x) + r(z, x, y);
                ensure(bianchi.is_zero(), || format!("Bianchi fails at ({},{},{})", x, y, z))?;
                for w in 0..3 {
                    ensure((rw(x, y, z, w) + rw(x, y, w, z)).is_zero(), || {
                        format!("skew-adjointness fails at ({},{},{},{})", x, y, z, w)
                    })?;
                    ensure((rw(x, y, z, w) - rw(z, w, x, y)).is_zero(), || {
                        format!("pair symmetry fails at ({},{},{},{})", x, y, z, w)
                    })?;
                }
            }
        }
    }
    Ok("Bianchi, skew-adjointness, pair symmetry for a 6-symbol symmetric A".into())
}

fn criterion_8() -> Outcome {
    let (lambda, nu, c) = (e("4*alpha/7"), e("-4*alpha"), e("-16*alpha^2/7"));
    let residual = hopf_check(&e("alpha"), &lambda, &nu, &c);
    ensure(residual.is_zero(), || format!("hopf relation residual {}", residual))?;
    let p = PointData::hopf(c.clone(), e("alpha"), lambda.clone(), nu.clone()).unwrap();
    let v = verdict_with(&p, &Assumptions::parse(&["alpha"]).unwrap()).map_err(|err| err.to_string())?;
    let want = c + lambda * nu;
    ensure(want == e("-32*alpha^2/7"), || format!("c + lambda nu = {}", want))?;
    ensure(
        v.class == Classification::ProperPseudoParallel { l: want.clone() },
        || format!("{:?}", v.class),
    )?;

    let inst = isolated_instance(q(7, 1));
    let vq = verdict(&inst).map_err(|err| err.to_string())?;
    ensure(vq.l_value() == Some(&q(-32 * 49, 7)), || {
        format!("alpha=7: {:?}", vq.class)
    })?;
    let report = main_theorem_report(&ReportConfig::default()).map_err(|err| err.to_string())?;
    let row = report
        .rows
        .iter()
        .find(|r| r.family == ISOLATED_NAME)
        .ok_or("report has no isolated row")?;
    ensure(row.note.as_deref().is_some_and(|n| !n.is_empty()), || {
        "isolated row lacks a note".into()
    })?;
    Ok(format!("L = {}; report note: {}", want, row.note.as_deref().unwrap()))
}

fn criterion_9() -> Outcome {
    let zero = RatFunc::int(0);
    for f in &FAMILIES {
        let d = defect_affine(&f.symbolic_point()).unwrap();
        ensure(d.eval(&zero).iter().any(|x| !x.is_zero()), || {
            format!("{}: L = 0 admissible", f.name)
        })?;
    }
    let mut nondegenerate = 0;
    let mut semi = 0;
    for i in 0..1000u64 {
        let p = jacobi_core::sweep::random_hopf_float(&mut rng_for(SEED, i));
        if jacobi_l(&p).unwrap().is_zero() {
            continue;
        }
        nondegenerate += 1;
        let d = defect_affine(&p).unwrap();
        if d.eval(&Float::new(0.0)).iter().all(Scalar::is_zero) {
            semi += 1;
        }
    }
    ensure(semi == 0, || format!("{} float Hopf points admit L = 0", semi))?;
    let sweep = hopf_float_sweep(SEED, 1000, Strategy::Parallel);
    ensure(sweep.semi_parallel == 0, || {
        "sweep reports a semi-parallel point".into()
    })?;
    Ok(format!(
        "6 families symbolic; 0/{} nondegenerate float Hopf points admit L = 0",
        nondegenerate
    ))
}

fn criterion_10() -> Outcome {
    let mut worst = 0.0f64;
    for i in 0..100u64 {
        let mut rng = rng_for(SEED, i);
        let p = random_nonhopf(&mut rng);
        let l: BigRational = random_rational(&mut rng, false);
        let exact = defect_affine(&p).unwrap().eval(&l);
        let float = defect_affine(&to_float(&p))
            .unwrap()
            .eval(&Float::new(l.to_f64().unwrap()));
        for (a, b) in exact.iter().zip(&float) {
            let a = a.to_f64().unwrap();
            let rel = (a - b.value()).abs() / a.abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    ensure(worst <= AGREEMENT_TOL, || {
        format!("max relative disagreement {:e}", worst)
    })?;
    Ok(format!(
        "100 points x 81 entries, max relative disagreement {:.1e}",
        worst
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("factorization of the Hopf defect", criterion_1),
        ("hopf relation on the catalog", criterion_2),
        ("classification of the catalog", criterion_3),
        ("non-Hopf exclusion", criterion_4),
        ("l = 0 characterization", criterion_5),
        ("derivation scripts", criterion_6),
        ("curvature axioms", criterion_7),
        ("isolated Hopf instance", criterion_8),
        ("no semi-parallel points", criterion_9),
        ("float/exact agreement", criterion_10),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS [{:.2}s] {}: {}", n + 1, secs, name, detail),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL [{:.2}s] {}: {}", n + 1, secs, name, why);
            }
        }
    }
    println!(
        "acceptance: {}/{} criteria pass",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
