//! Serializable form of plans, solution systems and QE results.

use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formula::{parse_poly, PrenexFormula};
use crate::projection::{Operator, Placement, ProjectionPlan};

use super::{CadError, Cardinality, CellResult, GenericSolutionSystem, ParamCell, QeResult, RootExpression, RootTerm};

impl Serialize for Cardinality {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinality::Finite(n) => s.serialize_u64(*n),
            Cardinality::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Cardinality {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Cardinality::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Cardinality::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad cardinality {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootTermReport {
    pub level: usize,
    pub poly: String,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellReport {
    pub index: Vec<usize>,
    pub sample: Vec<String>,
    pub excluded: bool,
    pub nu: Option<Cardinality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truth: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<String>,
    #[serde(default)]
    pub solutions: Vec<Vec<RootTermReport>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EligibilityReport {
    pub well_placed: Placement,
    pub ldcf_coprime: bool,
    pub well_positioned: Vec<(String, Placement)>,
    pub full_reduction: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanReport {
    pub level: usize,
    pub operator: Option<Operator>,
    pub pivot: Option<String>,
    pub candidates: Vec<String>,
    pub basis: Vec<String>,
    pub projection: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eligibility: Option<EligibilityReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub mode: String,
    pub vars: Vec<String>,
    pub parameters: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub boundaries: Vec<String>,
    pub cells: Vec<CellReport>,
    pub plans: Vec<PlanReport>,
}

fn plan_reports(plan: &ProjectionPlan) -> Vec<PlanReport> {
    let t = |p: &crate::poly::Poly| p.to_text(&plan.vars);
    plan.levels
        .iter()
        .rev()
        .map(|lp| PlanReport {
            level: lp.level,
            operator: lp.operator,
            pivot: lp.pivot.as_ref().map(t),
            candidates: lp.candidates.iter().map(|c| t(&c.poly)).collect(),
            basis: lp.basis.iter().map(t).collect(),
            projection: lp.projection.iter().map(t).collect(),
            eligibility: lp.eligibility.as_ref().map(|e| EligibilityReport {
                well_placed: e.well_placed,
                ldcf_coprime: e.ldcf_coprime,
                well_positioned: e.well_positioned.iter().map(|(g, p)| (t(g), *p)).collect(),
                full_reduction: e.full_reduction,
            }),
        })
        .collect()
}

fn base(mode: &str, formula: &PrenexFormula, plan: &ProjectionPlan) -> Report {
    Report {
        mode: mode.to_string(),
        vars: formula.vars.clone(),
        parameters: formula.vars[..formula.s()].to_vec(),
        verdict: None,
        boundaries: plan.boundaries.iter().map(|b| b.to_text(&plan.vars)).collect(),
        cells: Vec::new(),
        plans: plan_reports(plan),
    }
}

fn cell_report(vars: &[String], c: &CellResult) -> CellReport {
    CellReport {
        index: c.cell.index.clone(),
        sample: c.cell.sample.iter().map(|r| r.to_string()).collect(),
        excluded: c.cell.excluded_by_assumption,
        nu: c.nu,
        truth: None,
        condition: None,
        solutions: c
            .solutions
            .iter()
            .map(|e| {
                e.0.iter()
                    .map(|t| RootTermReport {
                        level: t.level,
                        poly: t.poly.to_text(vars),
                        k: t.k,
                    })
                    .collect()
            })
            .collect(),
    }
}

impl Report {
    pub fn project_only(formula: &PrenexFormula, plan: &ProjectionPlan) -> Report {
        base("project-only", formula, plan)
    }

    pub fn gsps(formula: &PrenexFormula, plan: &ProjectionPlan, sys: &GenericSolutionSystem) -> Report {
        let mut r = base("gsps", formula, plan);
        r.cells = sys.cells.iter().map(|c| cell_report(&sys.vars, c)).collect();
        r
    }

    pub fn qe(formula: &PrenexFormula, res: &QeResult) -> Report {
        let mut r = base("qe", formula, &res.plan);
        r.verdict = Some(res.verdict.to_string());
        r.cells = res
            .cells
            .iter()
            .map(|c| CellReport {
                index: c.cell.index.clone(),
                sample: c.cell.sample.iter().map(|x| x.to_string()).collect(),
                excluded: c.cell.excluded_by_assumption,
                nu: None,
                truth: c.truth,
                condition: Some(c.condition.to_text(&formula.vars)),
                solutions: Vec::new(),
            })
            .collect();
        r
    }

    /// Plain-text rendering, one block per cell.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self.verdict.as_deref() {
            Some("TRUE") => out.push_str("TRUE (all open cells)\n"),
            Some("FALSE") => out.push_str("FALSE (all open cells)\n"),
            Some(v) => out.push_str(&format!("{v}\n")),
            None => {}
        }
        for p in &self.plans {
            let op = match p.operator {
                Some(Operator::P) => "P",
                Some(Operator::PE) => "P_E",
                Some(Operator::PEStar) => "P_E*",
                None => "-",
            };
            out.push_str(&format!("level {}: operator {op}", p.level));
            if let Some(pv) = &p.pivot {
                out.push_str(&format!(", pivot {pv}"));
            }
            out.push_str(&format!(", basis [{}]\n", p.basis.join(", ")));
        }
        if !self.boundaries.is_empty() {
            out.push_str(&format!("boundaries: [{}]\n", self.boundaries.join(", ")));
        }
        for c in &self.cells {
            out.push_str(&format!(
                "cell {:?} sample ({}){}",
                c.index,
                c.sample.join(", "),
                if c.excluded { " excluded" } else { "" }
            ));
            if let Some(nu) = c.nu {
                out.push_str(&format!(" nu={nu}"));
            }
            if let Some(t) = c.truth {
                out.push_str(&format!(" truth={t}"));
            }
            out.push('\n');
            if let Some(cond) = &c.condition {
                out.push_str(&format!("  where {cond}\n"));
            }
            for sol in &c.solutions {
                let terms: Vec<String> = sol
                    .iter()
                    .map(|t| format!("{} = root({}, {})", self.vars[t.level - 1], t.k, t.poly))
                    .collect();
                out.push_str(&format!("  {}\n", terms.join("; ")));
            }
        }
        out
    }
}

impl GenericSolutionSystem {
    /// Rebuilds a solution system from a `gsps` report.
    pub fn from_report(r: &Report) -> Result<GenericSolutionSystem, CadError> {
        let bad = |m: String| CadError::Report(m);
        let cells = r
            .cells
            .iter()
            .map(|c| {
                let sample = c
                    .sample
                    .iter()
                    .map(|x| x.parse::<BigRational>().map_err(|e| bad(format!("{x}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()?;
                let solutions = c
                    .solutions
                    .iter()
                    .map(|sol| {
                        sol.iter()
                            .map(|t| {
                                Ok(RootTerm {
                                    level: t.level,
                                    poly: parse_poly(&t.poly, &r.vars).map_err(|e| bad(e.to_string()))?,
                                    k: t.k,
                                })
                            })
                            .collect::<Result<Vec<_>, CadError>>()
                            .map(RootExpression)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(CellResult {
                    cell: ParamCell {
                        index: c.index.clone(),
                        sample,
                        excluded_by_assumption: c.excluded,
                    },
                    nu: c.nu,
                    solutions,
                })
            })
            .collect::<Result<Vec<_>, CadError>>()?;
        Ok(GenericSolutionSystem {
            vars: r.vars.clone(),
            s: r.parameters.len(),
            cells,
        })
    }
}
