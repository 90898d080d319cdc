//! `jacobi-lab`: point checks, admissible-L solving, catalog queries,
//! derivation-script verification and the classification report.
//!
//! Exit codes: 0 every check passed, 1 a mathematical check failed,
//! 2 usage or input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jacobi_core::classify::{
    admissible_l, catalog, main_theorem_report, standing_assumptions, verdict, AdmissibleSet, Mode, Model,
    ReportConfig, Space, Verdict,
};
use jacobi_core::curvature::CurvatureModel;
use jacobi_core::derive::{builtin_script, run_script};
use jacobi_core::exact::{Float, RatFunc, Scalar};
use jacobi_core::frame::PointData;
use jacobi_core::sweep::Strategy;
use serde_json::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Parser, Debug)]
#[command(
    name = "jacobi-lab",
    version,
    about = "Structure Jacobi operator checks for real hypersurfaces in CP2 and CH2"
)]
struct Cli {
    /// Arithmetic: exact rational functions or binary64.
    #[arg(long, value_enum, default_value = "exact", global = true)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value = "table", global = true)]
    format: Format,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the pseudo-parallel condition at a point.
    Check {
        #[arg(long)]
        point: PathBuf,
        /// Test this value of L instead of solving for it.
        #[arg(long = "L", allow_hyphen_values = true)]
        l: Option<String>,
    },
    /// Solve for the admissible values of L at a point.
    SolveL {
        #[arg(long)]
        point: PathBuf,
    },
    /// Print the point data of a model hypersurface.
    Catalog {
        #[arg(long)]
        space: String,
        #[arg(long)]
        model: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Classify every catalog family plus sampled non-Hopf points.
    Report {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of random non-Hopf rows.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        sequential: bool,
    },
    /// Run a derivation script (a path, or the name of a shipped script).
    Verify { script: String },
}

/// Text to print and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

/// A usage or input problem (exit 2).
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> InputError {
        InputError(e.to_string())
    }
}

type CmdResult = Result<Outcome, InputError>;

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {}: {}", path.display(), e)))
}

fn load_point<S: Scalar>(path: &Path) -> Result<PointData<S>, InputError> {
    Ok(PointData::from_json_str(&read(path)?)?)
}

fn check<S: Scalar>(path: &Path, l: Option<&str>, format: Format) -> CmdResult {
    let p: PointData<S> = load_point(path)?;
    let Some(l) = l else {
        let v = verdict(&p)?;
        return Ok(Outcome {
            passed: v.is_pseudo_parallel(),
            text: render_verdict(&v, format),
        });
    };
    let l = S::parse(l)?;
    let d = CurvatureModel::from_point(&p)?.defect_affine();
    let mut nonzero = Vec::new();
    let mut max_abs = 0.0f64;
    for (idx, _, _) in d.iter() {
        let v = d.component(idx, &l);
        if let Some(x) = v.to_f64() {
            max_abs = max_abs.max(x.abs());
        }
        if !v.is_zero() {
            nonzero.push((idx, v));
        }
    }
    let zero = 81 - nonzero.len();
    let passed = nonzero.is_empty();
    let text = match format {
        Format::Json => {
            let entries: Vec<_> = nonzero
                .iter()
                .map(|(i, v)| json!({"entry": i.to_string(), "value": v.to_json()}))
                .collect();
            let mut o = json!({"L": l.to_json(), "zero": zero, "total": 81, "nonzero": entries});
            if !S::EXACT {
                o["max_abs"] = json!(max_abs);
            }
            serde_json::to_string_pretty(&o)?
        }
        Format::Table => {
            let mut s = String::new();
            if passed {
                writeln!(s, "defect = 0 ({}/81)", zero)?;
            } else {
                writeln!(s, "defect != 0 ({}/81 zero, {} nonzero)", zero, nonzero.len())?;
                for (i, v) in &nonzero {
                    writeln!(s, "  {}: {}", i, v)?;
                }
            }
            if !S::EXACT {
                writeln!(s, "max |defect| = {:e}", max_abs)?;
            }
            s
        }
    };
    Ok(Outcome { text, passed })
}

fn set_json<S: Scalar>(a: &AdmissibleSet<S>) -> serde_json::Value {
    let reqs = |r: &[jacobi_core::classify::Obstruction<S>]| -> Vec<serde_json::Value> {
        r.iter()
            .map(|o| json!({"entry": o.index.to_string(), "expr": o.expr.to_json()}))
            .collect()
    };
    match a {
        AdmissibleSet::All => json!({"kind": "all"}),
        AdmissibleSet::Empty { witness, requirements } => json!({
            "kind": "empty",
            "witness": {"entry": witness.index.to_string(), "expr": witness.expr.to_json()},
            "requirements": reqs(requirements),
        }),
        AdmissibleSet::Single {
            value,
            conditions,
            requirements,
            residual,
        } => json!({
            "kind": "single",
            "L": value.to_json(),
            "conditions": conditions.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "requirements": reqs(requirements),
            "residual": residual,
        }),
    }
}

fn render_set<S: Scalar>(a: &AdmissibleSet<S>) -> String {
    let mut s = format!("{}\n", a.summary());
    match a {
        AdmissibleSet::All => {}
        AdmissibleSet::Empty { witness, .. } => {
            s += &format!("  witness {}: {} = 0 is impossible\n", witness.index, witness.expr);
        }
        AdmissibleSet::Single {
            conditions, residual, ..
        } => {
            for c in conditions {
                s += &format!("  provided {} != 0\n", c);
            }
            if let Some(r) = residual {
                s += &format!("  residual {:e}\n", r);
            }
        }
    }
    for o in a.requirements() {
        s += &format!("  requires {}: {} = 0\n", o.index, o.expr);
    }
    s
}

fn render_verdict<S: Scalar>(v: &Verdict<S>, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(&json!({
            "class": v.class.name(),
            "L": v.l_value().map(|l| l.to_json()),
            "hopf": v.hopf,
            "jacobi_zero": v.jacobi_zero,
            "commutes": v.commutes,
            "admissible": set_json(&v.admissible),
        }))
        .expect("json value serializes"),
        Format::Table => {
            let mut s = format!("class: {}\n", v.class);
            if let Some(l) = v.l_value() {
                s += &format!("L = {}\n", l);
            }
            s += &format!(
                "hopf: {}\njacobi_zero: {}\ncommutes: {}\n",
                v.hopf, v.jacobi_zero, v.commutes
            );
            s += &format!("admissible: {}", render_set(&v.admissible));
            s
        }
    }
}

fn solve_l<S: Scalar>(path: &Path, format: Format) -> CmdResult {
    let p: PointData<S> = load_point(path)?;
    let d = CurvatureModel::from_point(&p)?.defect_affine();
    let a = admissible_l(&d, &standing_assumptions(&p));
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&set_json(&a))?,
        Format::Table => render_set(&a),
    };
    Ok(Outcome { text, passed: true })
}

fn catalog_cmd<S: Scalar>(space: &str, model: &str, param: Option<&str>) -> CmdResult {
    let space: Space = space.parse()?;
    let model: Model = model.parse()?;
    let param = param.map(S::parse).transpose()?;
    let p = catalog(space, model, param.as_ref())?;
    Ok(Outcome {
        text: p.to_json_string(),
        passed: true,
    })
}

fn run(cli: &Cli) -> CmdResult {
    let exact = cli.mode == ModeArg::Exact;
    match &cli.cmd {
        Cmd::Check { point, l } => {
            if exact {
                check::<RatFunc>(point, l.as_deref(), cli.format)
            } else {
                check::<Float>(point, l.as_deref(), cli.format)
            }
        }
        Cmd::SolveL { point } => {
            if exact {
                solve_l::<RatFunc>(point, cli.format)
            } else {
                solve_l::<Float>(point, cli.format)
            }
        }
        Cmd::Catalog { space, model, param } => {
            if exact {
                catalog_cmd::<RatFunc>(space, model, param.as_deref())
            } else {
                catalog_cmd::<Float>(space, model, param.as_deref())
            }
        }
        Cmd::Report {
            seed,
            samples,
            sequential,
        } => {
            let cfg = ReportConfig {
                mode: if exact { Mode::Exact } else { Mode::Float },
                seed: *seed,
                samples: *samples,
                strategy: if *sequential {
                    Strategy::Sequential
                } else {
                    Strategy::Parallel
                },
            };
            let r = main_theorem_report(&cfg)?;
            let text = match cli.format {
                Format::Json => r.to_json(),
                Format::Table => r.to_table(),
            };
            Ok(Outcome {
                text,
                passed: r.passed(),
            })
        }
        Cmd::Verify { script } => {
            let path = Path::new(script);
            let src = if path.exists() {
                read(path)?
            } else if let Some(src) = builtin_script(script) {
                src.to_string()
            } else {
                return Err(InputError(format!("no such script file or shipped script: {}", script)));
            };
            let r = run_script(script, &src)?;
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&r)?,
                Format::Table => r.to_string(),
            };
            Ok(Outcome { text, passed: r.passed })
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), InputError> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| InputError(format!("cannot write {}: {}", path.display(), e)))
        }
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|o| emit(&cli, &o.text).map(|_| o.passed));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(InputError(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(2)
        }
    }
}
