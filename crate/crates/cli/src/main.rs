use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use ecqe::cad::{gsps, nu_oracle, qe, CadError, Config, Report};
use ecqe::formula::{parse, parse_qf, ParseMode, PrenexFormula};
use ecqe::poly::{PolyError, DEFAULT_DEGREE_CAP};
use ecqe::projection::{plan, Policy, ProjectionError};
use num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Qe,
    Gsps,
    ProjectOnly,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Proj {
    Auto,
    Semireduced,
    Theorem5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// Quantifier elimination and generic solution systems for existential
/// formulas with equational constraints.
#[derive(Debug, Parser)]
#[command(name = "ecqe", version)]
struct Args {
    /// Formula file.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "gsps")]
    mode: Mode,
    #[arg(long, value_enum, default_value = "auto")]
    proj: Proj,
    /// Assumption on the parameters, as a matrix, e.g. "a (c + 1) /= 0".
    #[arg(long)]
    assume: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: u32,
    /// Lifting threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Also lift cells excluded by the assumption.
    #[arg(long)]
    exhaustive: bool,
    /// Parameter values for --mode oracle, comma separated rationals.
    #[arg(long)]
    point: Option<String>,
}

enum Failure {
    Parse(String),
    NotWellOriented(String),
    Cap(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Parse(_) => 1,
            Failure::NotWellOriented(_) => 2,
            Failure::Cap(_) => 3,
            Failure::Internal(_) => 4,
        }
    }
}

impl From<ProjectionError> for Failure {
    fn from(e: ProjectionError) -> Self {
        match e {
            ProjectionError::NotWellOriented { ref text, .. } => Failure::NotWellOriented(format!(
                "{e}\nwitness: {text}\nhint: state an assumption on the parameters with --assume or an `assume [...]` line"
            )),
            ProjectionError::Poly(p) => p.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::DegreeCapExceeded { .. } => Failure::Cap(e.to_string()),
            other => Failure::Internal(other.to_string()),
        }
    }
}

impl From<CadError> for Failure {
    fn from(e: CadError) -> Self {
        match e {
            CadError::Projection(p) => p.into(),
            CadError::Poly(p) => p.into(),
            other => Failure::Internal(other.to_string()),
        }
    }
}

fn load(args: &Args) -> Result<PrenexFormula, Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Parse(format!("{}: {e}", args.input.display())))?;
    let mut f = parse(&text, ParseMode::Gsps).map_err(|e| Failure::Parse(e.to_string()))?;
    if let Some(a) = &args.assume {
        let q = parse_qf(a, &f.vars).map_err(|e| Failure::Parse(format!("--assume: {e}")))?;
        if q.level() > f.s() {
            return Err(Failure::Parse("--assume involves a quantified variable".into()));
        }
        f.assumption = Some(match f.assumption.take() {
            Some(old) => ecqe::formula::Qf::and(vec![old, q]),
            None => q,
        });
    }
    Ok(f)
}

fn config(args: &Args, f: &PrenexFormula) -> Config {
    let mut cfg = Config::for_formula(f);
    cfg.plan.policy = match args.proj {
        Proj::Auto => Policy::Auto,
        Proj::Semireduced => Policy::SemiReduced,
        Proj::Theorem5 => Policy::Theorem5,
    };
    cfg.plan.degree_cap = args.degree_cap;
    cfg.jobs = args.jobs;
    cfg.exhaustive = args.exhaustive;
    cfg
}

fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes") + "\n",
        Format::Text => report.to_text(),
    }
}

fn run(args: &Args) -> Result<String, Failure> {
    let f = load(args)?;
    let cfg = config(args, &f);
    match args.mode {
        Mode::ProjectOnly => {
            let p = plan(&f, &cfg.plan)?;
            Ok(emit(&Report::project_only(&f, &p), args.format))
        }
        Mode::Gsps => {
            let (p, sys) = gsps(&f, &cfg)?;
            Ok(emit(&Report::gsps(&f, &p, &sys), args.format))
        }
        Mode::Qe => {
            let r = qe(&f, &cfg)?;
            Ok(emit(&Report::qe(&f, &r), args.format))
        }
        Mode::Oracle => {
            let text = args
                .point
                .as_deref()
                .ok_or_else(|| Failure::Parse("--mode oracle needs --point".into()))?;
            let alpha = text
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<BigRational>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Parse(format!("--point: {e}")))?;
            if alpha.len() != f.s() {
                return Err(Failure::Parse(format!("--point needs {} values", f.s())));
            }
            let nu = nu_oracle(&f, &alpha)?;
            Ok(match args.format {
                Format::Json => {
                    let v = serde_json::json!({
                        "mode": "oracle",
                        "point": alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "nu": nu,
                    });
                    serde_json::to_string_pretty(&v).expect("serializes") + "\n"
                }
                Format::Text => format!("nu={nu}\n"),
            })
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (Failure::Parse(m) | Failure::NotWellOriented(m) | Failure::Cap(m) | Failure::Internal(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}
