//! Interpreter for derivation scripts.
//!
//! A script holds a set of established relations (`expr = 0`), a registry
//! of expressions known not to vanish, and optionally a current point.
//! Every derived statement is checked exactly; the first failure stops the
//! run. A script passes when every step checks and the top-level block is
//! closed by a contradiction, a cited result, or an external step.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::calculus::{
    codazzi_residual, commutator_relation, connection_from_spec, curvature_commutation_residual, ConnectionTable,
};
use super::script::{parse_script, Labels, Line, Pivot, PointKind, Stmt};
use crate::classify::hopf_check;
use crate::curvature::CurvatureModel;
use crate::error::Error;
use crate::exact::{
    contains_monomial, factor_match, fmt_rational, parse_expr, solve_for_monomial, substitute_monomial, sym,
    Assumptions, LinearSolution, RatFunc,
};
use crate::frame::{FrameVector, PointData, Shape};
use crate::sweep::{map_with, Strategy};

const MAX_CITE_DEPTH: usize = 4;

/// Scripts shipped with the library, by name.
pub const BUILTIN_SCRIPTS: [(&str, &str); 5] = [
    ("prop32", include_str!("../../scripts/prop32.dsl")),
    ("lemma41", include_str!("../../scripts/lemma41.dsl")),
    ("lemma42", include_str!("../../scripts/lemma42.dsl")),
    ("lemma43", include_str!("../../scripts/lemma43.dsl")),
    ("prop51", include_str!("../../scripts/prop51.dsl")),
];

pub fn builtin_script(name: &str) -> Option<&'static str> {
    BUILTIN_SCRIPTS.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
    /// Closed by an argument outside the frame calculus.
    External,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub line: usize,
    /// Nesting depth inside case branches.
    pub depth: usize,
    pub text: String,
    pub status: StepStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScriptReport {
    pub name: String,
    pub passed: bool,
    pub steps: Vec<StepReport>,
    /// First failing line and its message.
    pub failure: Option<(usize, String)>,
}

impl ScriptReport {
    pub fn externals(&self) -> Vec<&StepReport> {
        self.steps.iter().filter(|s| s.status == StepStatus::External).collect()
    }

    /// Constant factors recorded by `conclude ... from`, keyed by label.
    pub fn factors(&self) -> Vec<(&str, &str)> {
        self.steps
            .iter()
            .filter_map(|s| {
                let k = s.detail.strip_prefix("k = ")?;
                let label = s.text.rsplit_once(" as ")?.1;
                Some((label, k))
            })
            .collect()
    }
}

impl fmt::Display for ScriptReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            let tag = match s.status {
                StepStatus::Pass => "ok",
                StepStatus::Fail => "FAIL",
                StepStatus::External => "ext",
            };
            write!(f, "{:>4}  {:<4} {}{}", s.line, tag, "  ".repeat(s.depth), s.text)?;
            if !s.detail.is_empty() {
                write!(f, "    [{}]", s.detail)?;
            }
            writeln!(f)?;
        }
        match &self.failure {
            None if self.passed => write!(
                f,
                "{}: PASS ({} steps, {} external)",
                self.name,
                self.steps.len(),
                self.externals().len()
            ),
            Some((line, msg)) => write!(f, "{}: FAIL at line {}: {}", self.name, line, msg),
            None => write!(f, "{}: FAIL", self.name),
        }
    }
}

#[derive(Clone)]
struct State {
    relations: BTreeMap<String, RatFunc>,
    asm: Assumptions,
    point: Option<PointData<RatFunc>>,
}

/// A step failure: the message ends the run.
struct Stop(String);

type Step = Result<String, Stop>;

fn stop<T>(msg: impl Into<String>) -> Result<T, Stop> {
    Err(Stop(msg.into()))
}

impl From<Error> for Stop {
    fn from(e: Error) -> Stop {
        Stop(e.to_string())
    }
}

struct Runner {
    steps: Vec<StepReport>,
    cite_depth: usize,
}

enum Outcome {
    Open,
    Closed,
    Failed(usize, String),
}

impl State {
    fn relation(&self, label: &str) -> Result<&RatFunc, Stop> {
        self.relations
            .get(label)
            .ok_or_else(|| Stop(format!("relation '{}' is not established", label)))
    }

    fn establish(&mut self, label: &str, expr: RatFunc) -> Result<(), Stop> {
        if self.relations.contains_key(label) {
            return stop(format!("label '{}' is already in use", label));
        }
        self.relations.insert(label.to_string(), expr);
        Ok(())
    }

    fn establish_components(&mut self, labels: &Labels, v: &FrameVector<RatFunc>) -> Step {
        let mut shown = Vec::new();
        for (label, comp) in labels.iter().zip(v.components()) {
            if let Some(label) = label {
                shown.push(format!("{}: {} = 0", label, comp));
                self.establish(label, comp.clone())?;
            }
        }
        Ok(shown.join("; "))
    }

    fn point(&self) -> Result<&PointData<RatFunc>, Stop> {
        self.point.as_ref().ok_or_else(|| Stop("no point declared".into()))
    }

    fn table(&self) -> Result<ConnectionTable, Stop> {
        Ok(connection_from_spec(self.point()?)?)
    }

    /// Solves each pivot relation in turn and rewrites `f` with it.
    fn apply_pivots(
        &self,
        using: &[Pivot],
        mut rewrite: impl FnMut(&Pivot, &RatFunc) -> Result<(), Stop>,
    ) -> Result<(), Stop> {
        for p in using {
            let rel = self.relation(&p.label)?;
            let value = match solve_for_monomial(rel, &p.monomial)? {
                LinearSolution::Unconditional(v) => v,
                LinearSolution::Conditional { value, nonzero } => {
                    if !self.asm.provably_nonzero(&nonzero) {
                        return stop(format!(
                            "solving '{}' for {} divides by {}, not known to be nonzero",
                            p.label, p.monomial, nonzero
                        ));
                    }
                    value
                }
            };
            rewrite(p, &value)?;
        }
        Ok(())
    }
}

fn point_from(kind: &PointKind, entries: &[(String, RatFunc)]) -> Result<PointData<RatFunc>, Stop> {
    let names: &[&str] = match kind {
        PointKind::Hopf => &["c", "alpha", "lambda", "nu"],
        PointKind::NonHopf => &["c", "alpha", "beta", "gamma", "delta", "mu"],
    };
    for (k, _) in entries {
        if !names.contains(&k.as_str()) {
            return stop(format!(
                "'{}' is not an entry of this point (expected one of {})",
                k,
                names.join(", ")
            ));
        }
    }
    let get = |name: &str| -> Result<RatFunc, Stop> {
        match entries.iter().rev().find(|(k, _)| k == name) {
            Some((_, v)) => Ok(v.clone()),
            None => Ok(parse_expr(name)?),
        }
    };
    Ok(match kind {
        PointKind::Hopf => PointData::hopf(get("c")?, get("alpha")?, get("lambda")?, get("nu")?)?,
        PointKind::NonHopf => PointData::nonhopf(
            get("c")?,
            get("alpha")?,
            get("beta")?,
            get("gamma")?,
            get("delta")?,
            get("mu")?,
        )?,
    })
}

/// Preconditions a cited script needs to hold at the citing point.
fn cite_hypothesis(name: &str, st: &State) -> Step {
    match name {
        "prop32" => {
            let p = st.point()?;
            if p.is_hopf() {
                return stop("cited result needs a non-Hopf point");
            }
            let l = CurvatureModel::from_point(p)?.jacobi_l();
            if !l.is_zero() {
                return stop("cited result needs l = 0 at the current point");
            }
            Ok("l = 0 at the current non-Hopf point".into())
        }
        _ => Ok(String::new()),
    }
}

impl Runner {
    fn record(&mut self, line: &Line, depth: usize, status: StepStatus, detail: String) {
        self.steps.push(StepReport {
            line: line.line,
            depth,
            text: line.text.clone(),
            status,
            detail,
        });
    }

    fn block(&mut self, lines: &[Line], mut st: State, depth: usize) -> Outcome {
        let mut closed = false;
        for line in lines {
            if closed {
                let msg = "statement after the branch was closed".to_string();
                self.record(line, depth, StepStatus::Fail, msg.clone());
                return Outcome::Failed(line.line, msg);
            }
            if let Stmt::Case {
                label,
                expr,
                then,
                otherwise,
            } = &line.stmt
            {
                self.record(line, depth, StepStatus::Pass, format!("split on {} = 0", expr));
                let mut yes = st.clone();
                if let Err(Stop(msg)) = yes.establish(label, expr.clone()) {
                    self.steps.last_mut().expect("just recorded").status = StepStatus::Fail;
                    return Outcome::Failed(line.line, msg);
                }
                match self.block(then, yes, depth + 1) {
                    Outcome::Closed => {}
                    Outcome::Open => return Outcome::Failed(line.line, format!("case '{}' is left open", label)),
                    failed => return failed,
                }
                let mut no = st.clone();
                no.asm.add(expr);
                match self.block(otherwise, no, depth + 1) {
                    Outcome::Closed => {}
                    Outcome::Open => {
                        return Outcome::Failed(line.line, format!("else branch of '{}' is left open", label))
                    }
                    failed => return failed,
                }
                closed = true;
                continue;
            }
            match self.exec(&line.stmt, &mut st) {
                Ok((detail, closes)) => {
                    let status = if matches!(line.stmt, Stmt::External { .. }) {
                        StepStatus::External
                    } else {
                        StepStatus::Pass
                    };
                    self.record(line, depth, status, detail);
                    closed = closes;
                }
                Err(Stop(msg)) => {
                    self.record(line, depth, StepStatus::Fail, msg.clone());
                    return Outcome::Failed(line.line, msg);
                }
            }
        }
        if closed {
            Outcome::Closed
        } else {
            Outcome::Open
        }
    }

    /// Runs one statement; returns its detail and whether it closes the block.
    fn exec(&mut self, stmt: &Stmt, st: &mut State) -> Result<(String, bool), Stop> {
        let open = |d: String| Ok((d, false));
        match stmt {
            Stmt::Assume { label, expr } => {
                st.establish(label, expr.clone())?;
                open(format!("{} = 0", expr))
            }
            Stmt::AssumeNonzero { expr } => {
                if expr.is_zero() {
                    return stop("cannot assume 0 != 0");
                }
                st.asm.add(expr);
                open(String::new())
            }
            Stmt::Point { kind, entries } => {
                st.point = Some(point_from(kind, entries)?);
                open(String::new())
            }
            Stmt::Jacobi { x, labels } => {
                let l = CurvatureModel::from_point(st.point()?)?.jacobi_l();
                let col = l.column(x.index());
                open(st.establish_components(labels, &col)?)
            }
            Stmt::Codazzi { x, y, labels } => {
                let table = st.table()?;
                let v = codazzi_residual(st.point()?, &table, *x, *y)?;
                open(st.establish_components(labels, &v)?)
            }
            Stmt::CurvComm { x, y, z, labels } => {
                let table = st.table()?;
                let v = curvature_commutation_residual(st.point()?, &table, *x, *y, *z)?;
                open(st.establish_components(labels, &v)?)
            }
            Stmt::Defect { x, y, z, labels } => {
                let d = CurvatureModel::from_point(st.point()?)?.defect_affine();
                let (s, t) = d.vectors(x.index(), y.index(), z.index());
                let l = RatFunc::var(sym::L);
                let v = s.clone() - t.scale(&l);
                open(st.establish_components(labels, &v)?)
            }
            Stmt::Diff { src, dir, label } => {
                let d = st.relation(src)?.derivative(*dir)?;
                let detail = format!("{} = 0", d);
                st.establish(label, d)?;
                open(detail)
            }
            Stmt::Commutator { x, y, f, label } => {
                let rel = commutator_relation(&st.table()?, *x, *y, *f)?;
                let detail = format!("{} = 0", rel.expr);
                st.establish(label, rel.expr)?;
                open(detail)
            }
            Stmt::Subst { src, using, label } => {
                let mut e = st.relation(src)?.clone();
                let snapshot = st.clone();
                snapshot.apply_pivots(using, |p, v| {
                    if !contains_monomial(&e, &p.monomial) {
                        return stop(format!("pivot {} does not occur in '{}'", p.monomial, src));
                    }
                    e = substitute_monomial(&e, &p.monomial, v)?;
                    Ok(())
                })?;
                let detail = format!("{} = 0", e);
                st.establish(label, e)?;
                open(detail)
            }
            Stmt::Restrict { using } => {
                let mut point = st.point()?.clone();
                let snapshot = st.clone();
                snapshot.apply_pivots(using, |p, v| {
                    let entries = point_entries(&point);
                    if !entries.iter().any(|e| contains_monomial(e, &p.monomial)) {
                        return stop(format!("pivot {} does not occur in the point", p.monomial));
                    }
                    point = point.map(|e| substitute_monomial(e, &p.monomial, v))?;
                    Ok(())
                })?;
                let detail = describe_point(&point);
                st.point = Some(point);
                open(detail)
            }
            Stmt::Conclude { expr, from, label } => {
                let detail = match from {
                    None => {
                        if !expr.is_zero() {
                            return stop(format!("{} is not identically zero", expr));
                        }
                        "identity".to_string()
                    }
                    Some(src) => {
                        let f = st.relation(src)?;
                        conclude_from(f, expr, &st.asm)?
                    }
                };
                if let Some(label) = label {
                    st.establish(label, expr.clone())?;
                }
                open(detail)
            }
            Stmt::Contradiction { from } => {
                let found = match from {
                    Some(src) => {
                        let e = st.relation(src)?;
                        st.asm.contradicts(e).then(|| format!("{} = 0 is impossible", e))
                    }
                    None => st
                        .relations
                        .iter()
                        .find(|(_, e)| st.asm.contradicts(e))
                        .map(|(k, e)| format!("{}: {} = 0 is impossible", k, e)),
                };
                match found {
                    Some(d) => Ok((d, true)),
                    None => stop("no established relation contradicts the assumptions"),
                }
            }
            Stmt::Cite { script } => {
                if self.cite_depth >= MAX_CITE_DEPTH {
                    return stop("citations nested too deeply");
                }
                let hyp = cite_hypothesis(script, st)?;
                let src = builtin_script(script).ok_or_else(|| Stop(format!("unknown script '{}'", script)))?;
                let report = run_nested(script, src, self.cite_depth + 1).map_err(Stop::from)?;
                if !report.passed {
                    return stop(format!("cited script '{}' does not pass", script));
                }
                let d = if hyp.is_empty() {
                    format!("by {}", script)
                } else {
                    format!("by {} ({})", script, hyp)
                };
                Ok((d, true))
            }
            Stmt::CheckHopf => {
                let p = st.point()?;
                let Shape::Hopf { alpha, lambda, nu } = p.shape() else {
                    return stop("current point is not Hopf");
                };
                let r = hopf_check(alpha, lambda, nu, p.c());
                if !r.is_zero() {
                    return stop(format!("Hopf relation fails: {} != 0", r));
                }
                open("Hopf relation holds".into())
            }
            Stmt::External { .. } => Ok((String::new(), true)),
            Stmt::Case { .. } => unreachable!("handled in block"),
        }
    }
}

fn point_entries(p: &PointData<RatFunc>) -> Vec<RatFunc> {
    let mut out = vec![p.c().clone()];
    match p.shape() {
        Shape::Hopf { alpha, lambda, nu } => out.extend([alpha, lambda, nu].map(Clone::clone)),
        Shape::NonHopf {
            alpha,
            beta,
            gamma,
            delta,
            mu,
        } => out.extend([alpha, beta, gamma, delta, mu].map(Clone::clone)),
    }
    out
}

fn describe_point(p: &PointData<RatFunc>) -> String {
    let names: &[&str] = if p.is_hopf() {
        &["c", "alpha", "lambda", "nu"]
    } else {
        &["c", "alpha", "beta", "gamma", "delta", "mu"]
    };
    names
        .iter()
        .zip(point_entries(p))
        .map(|(n, e)| format!("{}={}", n, e))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Checks `f = k * e` for a rational `k`, else `num(f) = q * num(e)^j`
/// with `q` provably nonzero.
fn conclude_from(f: &RatFunc, e: &RatFunc, asm: &Assumptions) -> Step {
    if e.is_zero() {
        return Ok("identity".into());
    }
    if f.is_zero() {
        return stop("source relation is identically zero");
    }
    if let Some(k) = factor_match(f, e) {
        return Ok(format!("k = {}", fmt_rational(&k)));
    }
    let mut q = f.numer().div_exact(e.numer()).ok_or_else(|| {
        Stop(format!(
            "{} = 0 does not follow: {} is not a multiple of {}",
            e,
            f.numer(),
            e.numer()
        ))
    })?;
    // u * e^k = 0 with u != 0 still forces e = 0.
    if e.numer().as_constant().is_none() {
        while let Some(r) = q.div_exact(e.numer()) {
            q = r;
        }
    }
    if let Some(k) = q.as_constant() {
        return Ok(format!("k = {}", fmt_rational(&k)));
    }
    let q = RatFunc::from_poly(q);
    if !asm.provably_nonzero(&q) {
        return stop(format!("dividing by {} needs it to be nonzero", q));
    }
    Ok(format!("factor {}", q))
}

fn run_nested(name: &str, src: &str, cite_depth: usize) -> Result<ScriptReport, Error> {
    let lines = parse_script(src)?;
    let mut runner = Runner {
        steps: Vec::new(),
        cite_depth,
    };
    let st = State {
        relations: BTreeMap::new(),
        asm: Assumptions::new(),
        point: None,
    };
    let outcome = runner.block(&lines, st, 0);
    let failure = match outcome {
        Outcome::Closed => None,
        Outcome::Open => Some((
            lines.last().map_or(0, |l| l.line),
            "script ends without closing every branch".to_string(),
        )),
        Outcome::Failed(line, msg) => Some((line, msg)),
    };
    Ok(ScriptReport {
        name: name.to_string(),
        passed: failure.is_none(),
        steps: runner.steps,
        failure,
    })
}

/// Parses and checks a script. Syntax errors are returned as `Err`; every
/// mathematical failure is reported in the `ScriptReport`.
pub fn run_script(name: &str, src: &str) -> Result<ScriptReport, Error> {
    run_nested(name, src, 0)
}

pub fn run_builtin(name: &str) -> Result<ScriptReport, Error> {
    let src = builtin_script(name).ok_or_else(|| Error::UnknownChoice {
        kind: "script",
        given: name.to_string(),
        valid: BUILTIN_SCRIPTS.map(|(n, _)| n).join(", "),
    })?;
    run_script(name, src)
}

/// Runs every shipped script; the scripts are independent.
pub fn run_all_builtin(strategy: Strategy) -> Vec<Result<ScriptReport, Error>> {
    map_with(strategy, &BUILTIN_SCRIPTS, |(name, src)| run_script(name, src))
}

/// The source lines (1-based) holding hypotheses: `assume`,
/// `assume-nonzero` and `jacobi` statements, at any depth.
pub fn hypothesis_lines(src: &str) -> Result<Vec<usize>, Error> {
    fn walk(lines: &[Line], out: &mut Vec<usize>) {
        for l in lines {
            if l.stmt.is_hypothesis() {
                out.push(l.line);
            }
            if let Stmt::Case { then, otherwise, .. } = &l.stmt {
                walk(then, out);
                walk(otherwise, out);
            }
        }
    }
    let mut out = Vec::new();
    walk(&parse_script(src)?, &mut out);
    Ok(out)
}

/// The script with one source line removed.
pub fn without_line(src: &str, line: usize) -> String {
    src.lines()
        .enumerate()
        .filter(|(i, _)| i + 1 != line)
        .map(|(_, l)| l)
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> ScriptReport {
        run_script("t", src).expect("parses")
    }

    #[test]
    fn shipped_scripts_pass() {
        for (name, src) in BUILTIN_SCRIPTS {
            let r = run_script(name, src).unwrap();
            assert!(r.passed, "{}", r);
        }
    }

    #[test]
    fn every_hypothesis_is_needed() {
        for (name, src) in BUILTIN_SCRIPTS {
            let lines = hypothesis_lines(src).unwrap();
            assert!(!lines.is_empty(), "{} declares no hypotheses", name);
            for line in lines {
                let r = run_script(name, &without_line(src, line)).unwrap();
                assert!(!r.passed, "{} still passes without line {}", name, line);
            }
        }
    }

    #[test]
    fn records_rescaling_constants() {
        let r = run_builtin("prop32").unwrap();
        let k: BTreeMap<_, _> = r.factors().into_iter().collect();
        assert_eq!(k["r_main"], "-1");
        assert_eq!(k["r_ua"], "1/4");
        assert_eq!(k["r_k_u"], "1");
        let r = run_builtin("lemma42").unwrap();
        let k: BTreeMap<_, _> = r.factors().into_iter().collect();
        assert_eq!(k["r_kappa"], "-1");
        assert_eq!(k["r_pa"], "1");
    }

    #[test]
    fn hopf_script_has_two_external_steps() {
        let r = run_builtin("prop51").unwrap();
        assert!(r.passed);
        assert_eq!(r.externals().len(), 2);
        assert!(r.to_string().ends_with("PASS (34 steps, 2 external)"));
    }

    #[test]
    fn strategies_agree() {
        let a = run_all_builtin(Strategy::Sequential);
        let b = run_all_builtin(Strategy::Parallel);
        let show =
            |v: &[Result<ScriptReport, Error>]| v.iter().map(|r| r.as_ref().unwrap().to_string()).collect::<Vec<_>>();
        assert_eq!(show(&a), show(&b));
    }

    #[test]
    fn unknown_label_is_a_step_failure() {
        let r = run("assume-nonzero c\ncontradiction from nowhere\n");
        assert!(!r.passed);
        assert_eq!(r.failure, Some((2, "relation 'nowhere' is not established".into())));
    }

    #[test]
    fn wrong_conclusion_fails_at_its_line() {
        let src = "assume a: alpha*beta = 0\nconclude alpha = 0 from a as b\ncontradiction from b\n";
        let r = run(src);
        assert_eq!(r.failure.as_ref().map(|f| f.0), Some(2));
        let ok = run(&format!("assume-nonzero beta\nassume-nonzero alpha\n{}", src));
        assert!(ok.passed, "{}", ok);
    }

    #[test]
    fn open_branch_fails() {
        let r = run("assume-nonzero c\ncase z: beta = 0 {\n  external \"x\"\n} else {\n  assume-nonzero alpha\n}\n");
        assert!(!r.passed);
        assert!(r.failure.unwrap().1.contains("left open"));
    }

    #[test]
    fn statements_after_closing_fail() {
        let r = run("external \"done\"\nassume-nonzero c\n");
        assert_eq!(r.failure.map(|f| f.0), Some(2));
    }

    #[test]
    fn division_by_unknown_sign_is_refused() {
        let r = run("assume a: alpha*mu - 1 = 0\nassume b: mu + beta = 0\nsubst b using a:mu as d\nexternal \"x\"\n");
        assert!(r.failure.unwrap().1.contains("not known to be nonzero"));
    }

    #[test]
    fn cite_checks_its_hypothesis() {
        let r = run("assume-nonzero alpha\npoint nonhopf\ncite prop32\n");
        assert!(r.failure.unwrap().1.contains("l = 0"));
    }

    #[test]
    fn syntax_errors_are_errors() {
        assert!(run_script("t", "conclude = from\n").is_err());
        assert!(run_builtin("prop99").is_err());
    }
}
