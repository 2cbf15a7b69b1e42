//! Lifting: the open CAD of parameter space, cell trees over each open
//! cell, solution counts and root expressions for the unknowns.

mod oracle;
mod report;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algnum::{compare, isolate_over_point, sign_at, AlgError, Coord, SamplePoint};
use crate::formula::{evaluate_qf, PrenexFormula, Qf, Relation};
use crate::poly::{Poly, PolyError};
use crate::projection::{plan, PlanConfig, ProjectionError, ProjectionPlan};
use crate::realroot::{self, Bound, IsolatingInterval};

pub use oracle::nu_oracle;
pub use report::{CellReport, EligibilityReport, PlanReport, Report, RootTermReport};

#[derive(Debug, Error)]
pub enum CadError {
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0} vanishes identically over a sample point")]
    IdenticallyZeroUnhandled(String),
    #[error("cardinality is not finite and positive")]
    NotFinite,
    #[error("root {k} of {poly} does not exist over the given point")]
    RootMissing { poly: String, k: usize },
    #[error("oracle inconclusive")]
    OracleInconclusive,
    #[error("malformed report: {0}")]
    Report(String),
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    Finite(u64),
    Infinite,
}

impl Cardinality {
    pub fn is_zero(self) -> bool {
        self == Cardinality::Finite(0)
    }
}

impl std::fmt::Display for Cardinality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Config {
    pub plan: PlanConfig,
    /// Worker threads for lifting; 0 lets the pool decide.
    pub jobs: usize,
    /// Lift cells excluded by the assumption too.
    pub exhaustive: bool,
}

impl Config {
    /// Settings for a formula: nullification over a parameter hypersurface
    /// is accepted once the user states an assumption.
    pub fn for_formula(formula: &PrenexFormula) -> Config {
        let mut cfg = Config::default();
        cfg.plan.generic_nullification = formula.assumption.is_some();
        cfg
    }
}

/// An open cell of the parameter-space CAD.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamCell {
    /// All entries odd: every coordinate lies in a sector.
    pub index: Vec<usize>,
    pub sample: Vec<BigRational>,
    pub excluded_by_assumption: bool,
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub index: Vec<usize>,
    pub sample: SamplePoint,
    pub section: bool,
    /// For a section: a basis factor vanishing there and the root's index
    /// (from 1) among that factor's real roots over the parent sample.
    pub defining: Option<(Poly, usize)>,
    /// A sector over a pivot level, known to contain no solution.
    pub pruned: bool,
    /// Truth of the matrix at a level-`n` sample.
    pub truth: Option<bool>,
    pub children: Vec<TreeNode>,
}

#[derive(Debug, Clone)]
pub struct CellTree {
    pub root: TreeNode,
    pub n: usize,
}

/// One term of a root expression: the `k`-th real root in `x_level` of
/// `poly` over the preceding coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTerm {
    pub level: usize,
    pub poly: Poly,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootExpression(pub Vec<RootTerm>);

impl RootExpression {
    /// The solution vector over a parameter point, as exact coordinates of
    /// the unknowns.
    pub fn evaluate(&self, params: &[BigRational]) -> Result<Vec<Coord>, CadError> {
        let mut point = SamplePoint::rational(params);
        let mut out = Vec::new();
        for t in &self.0 {
            let roots = isolate_over_point(&t.poly, &point).map_err(|_| {
                CadError::IdenticallyZeroUnhandled(format!("{:?}", t.poly))
            })?;
            let c = roots.get(t.k - 1).cloned().ok_or_else(|| CadError::RootMissing {
                poly: format!("{:?}", t.poly),
                k: t.k,
            })?;
            point = point.push(c.clone());
            out.push(c);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub cell: ParamCell,
    /// `None` for cells excluded by the assumption and not lifted.
    pub nu: Option<Cardinality>,
    pub solutions: Vec<RootExpression>,
}

/// Open parameter cells with their solution counts and, where the count is
/// finite and positive, one root expression per solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenericSolutionSystem {
    pub vars: Vec<String>,
    pub s: usize,
    pub cells: Vec<CellResult>,
}

fn rational_univariate(p: &Poly, prefix: &[BigRational], var: usize) -> Vec<BigInt> {
    let mut q = p.clone();
    for (i, r) in prefix.iter().enumerate() {
        if q.involves(i + 1) {
            q = q.substitute_rational(i + 1, r);
        }
    }
    q.to_univariate(var).expect("only the level variable remains")
}

/// Squarefree product of the factors specialized at a rational prefix.
fn level_product(factors: &[Poly], prefix: &[BigRational], var: usize) -> Result<Vec<BigInt>, CadError> {
    let mut acc = vec![BigInt::one()];
    for f in factors {
        let u = rational_univariate(f, prefix, var);
        if u.iter().all(Zero::is_zero) {
            return Err(CadError::IdenticallyZeroUnhandled(format!("{f:?}")));
        }
        let mut prod = vec![BigInt::zero(); acc.len() + u.len() - 1];
        for (i, a) in acc.iter().enumerate() {
            for (j, b) in u.iter().enumerate() {
                prod[i + j] += a * b;
            }
        }
        acc = realroot::squarefree(&prod);
    }
    Ok(acc)
}

fn level_roots(factors: &[Poly], prefix: &[BigRational], var: usize) -> Result<(Vec<BigInt>, Vec<IsolatingInterval>), CadError> {
    let p = level_product(factors, prefix, var)?;
    let roots = realroot::isolate(&p).expect("nonzero product");
    Ok((p, roots))
}

/// Open cells of a CAD of parameter space invariant for the parameter-level
/// projection factors, with simplest dyadic samples.
pub fn open_cad(plan: &ProjectionPlan) -> Result<Vec<ParamCell>, CadError> {
    let mut cells = vec![(Vec::new(), Vec::new())];
    for i in 1..=plan.s {
        let mut next = Vec::new();
        for (index, sample) in cells {
            let (p, roots) = level_roots(plan.basis(i), &sample, i)?;
            for (m, x) in realroot::sample_between(&p, &roots).into_iter().enumerate() {
                let mut idx: Vec<usize> = index.clone();
                idx.push(2 * m + 1);
                let mut smp: Vec<BigRational> = sample.clone();
                smp.push(x);
                next.push((idx, smp));
            }
        }
        cells = next;
    }
    Ok(cells
        .into_iter()
        .map(|(index, sample)| ParamCell {
            index,
            sample,
            excluded_by_assumption: false,
        })
        .collect())
}

/// A rational point of the open cell with index `index`; `t[i]` in `(0, 1)`
/// selects the position within the `i`-th coordinate's interval.
pub fn point_in_cell(plan: &ProjectionPlan, index: &[usize], t: &[f64]) -> Result<Vec<BigRational>, CadError> {
    let eps = BigRational::new(BigInt::one(), BigInt::one() << 32);
    let mut point: Vec<BigRational> = Vec::new();
    for (i, &idx) in index.iter().enumerate() {
        let (p, mut roots) = level_roots(plan.basis(i + 1), &point, i + 1)?;
        let m = (idx - 1) / 2;
        for r in roots.iter_mut().skip(m.saturating_sub(1)).take(if m == 0 { 1 } else { 2 }) {
            *r = realroot::refine(&p, r, &eps);
        }
        let lo = (m > 0).then(|| roots[m - 1].hi.clone());
        let hi = roots.get(m).map(|r| r.lo.clone());
        let span = BigRational::from_integer(8.into());
        let (lo, hi) = match (lo, hi) {
            (Some(l), Some(h)) => (l, h),
            (Some(l), None) => (l.clone(), l + span),
            (None, Some(h)) => (&h - &span, h),
            (None, None) => (-span.clone(), span),
        };
        let f = t[i].clamp(0.001, 0.999);
        let frac = BigRational::new(((f * 1e6).round() as i64).into(), 1_000_000.into());
        point.push(&lo + (&hi - &lo) * frac);
    }
    Ok(point)
}

struct Section {
    coord: Coord,
    factor: usize,
    k: usize,
}

/// Sorted, coalesced real roots of `factors` over `sample`.
fn stack_sections(factors: &[Poly], sample: &SamplePoint) -> Result<Vec<Section>, CadError> {
    let mut all = Vec::new();
    for (fi, f) in factors.iter().enumerate() {
        let roots = isolate_over_point(f, sample).map_err(|e| match e {
            AlgError::IdenticallyZero => CadError::IdenticallyZeroUnhandled(format!("{f:?}")),
        })?;
        for (k, coord) in roots.into_iter().enumerate() {
            all.push(Section {
                coord,
                factor: fi,
                k: k + 1,
            });
        }
    }
    all.sort_by(|a, b| compare(&a.coord, &b.coord));
    all.dedup_by(|later, earlier| compare(&later.coord, &earlier.coord) == Ordering::Equal);
    Ok(all)
}

fn bound_hint(c: &Coord, upper: bool) -> BigRational {
    match c {
        Coord::Rational(r) => r.clone(),
        Coord::Algebraic(a) => {
            let (lo, hi) = a.interval();
            if upper {
                hi
            } else {
                lo
            }
        }
    }
}

/// Simplest dyadic rational strictly between two (optional) coordinates.
fn sector_sample(lo: Option<&Coord>, hi: Option<&Coord>) -> BigRational {
    let mut cmp_lo = |x: &BigRational| compare(lo.unwrap(), &Coord::Rational(x.clone()));
    let mut cmp_hi = |x: &BigRational| compare(hi.unwrap(), &Coord::Rational(x.clone()));
    let lb = lo.map(|c| bound_hint(c, false)).map(|hint| Bound {
        hint,
        cmp: &mut cmp_lo,
    });
    let hb = hi.map(|c| bound_hint(c, true)).map(|hint| Bound {
        hint,
        cmp: &mut cmp_hi,
    });
    realroot::simplest_between(lb, hb)
}

struct Lifter<'a> {
    plan: &'a ProjectionPlan,
    formula: &'a PrenexFormula,
}

impl Lifter<'_> {
    fn leaf_truth(&self, sample: &SamplePoint) -> bool {
        self.formula.ecs.iter().all(|f| sign_at(f, sample) == 0) && evaluate_qf(&self.formula.psi, sample)
    }

    fn node(
        &self,
        index: Vec<usize>,
        sample: SamplePoint,
        section: bool,
        defining: Option<(Poly, usize)>,
    ) -> Result<TreeNode, CadError> {
        let n = self.plan.n();
        let mut node = TreeNode {
            index,
            sample,
            section,
            defining,
            pruned: false,
            truth: None,
            children: Vec::new(),
        };
        if node.sample.len() == n {
            node.truth = Some(self.leaf_truth(&node.sample));
            return Ok(node);
        }
        let j = node.sample.len() + 1;
        let lp = self.plan.level(j);
        let pivot_mode = !lp.pivot_factors.is_empty();
        let factors = if pivot_mode { &lp.pivot_factors } else { &lp.basis };
        let sections = stack_sections(factors, &node.sample)?;
        for i in 0..=sections.len() {
            let lo = (i > 0).then(|| &sections[i - 1].coord);
            let hi = sections.get(i).map(|s| &s.coord);
            let mut idx = node.index.clone();
            idx.push(2 * i + 1);
            let x = sector_sample(lo, hi);
            if pivot_mode {
                node.children.push(TreeNode {
                    index: idx,
                    sample: node.sample.push(Coord::Rational(x)),
                    section: false,
                    defining: None,
                    pruned: true,
                    truth: None,
                    children: Vec::new(),
                });
            } else {
                let child = self.node(idx, node.sample.push(Coord::Rational(x)), false, None)?;
                node.children.push(child);
            }
            if let Some(s) = sections.get(i) {
                let mut idx = node.index.clone();
                idx.push(2 * i + 2);
                let def = Some((factors[s.factor].clone(), s.k));
                let child = self.node(idx, node.sample.push(s.coord.clone()), true, def)?;
                node.children.push(child);
            }
        }
        Ok(node)
    }
}

/// Builds the full tree of stacks over an open parameter cell, marking
/// each level-`n` leaf with the truth of the matrix.
pub fn lift_tree(cell: &ParamCell, plan: &ProjectionPlan, formula: &PrenexFormula) -> Result<CellTree, CadError> {
    let lifter = Lifter { plan, formula };
    let root = lifter.node(cell.index.clone(), SamplePoint::rational(&cell.sample), false, None)?;
    Ok(CellTree { root, n: plan.n() })
}

fn node_cardinality(node: &TreeNode) -> Cardinality {
    let mut total = 0u64;
    for c in &node.children {
        let cc = if c.pruned {
            Cardinality::Finite(0)
        } else if let Some(t) = c.truth {
            Cardinality::Finite(t as u64)
        } else {
            node_cardinality(c)
        };
        match cc {
            Cardinality::Infinite => return Cardinality::Infinite,
            Cardinality::Finite(0) => {}
            Cardinality::Finite(_) if !c.section => return Cardinality::Infinite,
            Cardinality::Finite(v) => total += v,
        }
    }
    Cardinality::Finite(total)
}

/// Number of solution vectors over the tree's root cell.
pub fn cardinality(tree: &CellTree) -> Cardinality {
    node_cardinality(&tree.root)
}

fn collect_paths(node: &TreeNode, path: &mut Vec<RootTerm>, out: &mut Vec<RootExpression>) {
    if let Some(t) = node.truth {
        if t {
            out.push(RootExpression(path.clone()));
        }
        return;
    }
    for c in &node.children {
        if c.pruned {
            continue;
        }
        match &c.defining {
            Some((poly, k)) => {
                path.push(RootTerm {
                    level: c.sample.len(),
                    poly: poly.clone(),
                    k: *k,
                });
                collect_paths(c, path, out);
                path.pop();
            }
            None => {
                // Sectors hold no solutions when the count is finite.
                debug_assert!(node_cardinality(c).is_zero() || c.truth == Some(false));
            }
        }
    }
}

/// One root expression per solution over a cell with finite positive count.
pub fn cfel(tree: &CellTree) -> Result<Vec<RootExpression>, CadError> {
    match cardinality(tree) {
        Cardinality::Finite(v) if v > 0 => {
            let mut out = Vec::new();
            collect_paths(&tree.root, &mut Vec::new(), &mut out);
            debug_assert_eq!(out.len() as u64, v);
            Ok(out)
        }
        _ => Err(CadError::NotFinite),
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CadError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CadError::ThreadPool(e.to_string()))?;
    Ok(pool.install(f))
}

fn mark_excluded(cells: &mut [ParamCell], formula: &PrenexFormula) {
    if let Some(a) = &formula.assumption {
        for c in cells.iter_mut() {
            c.excluded_by_assumption = !evaluate_qf(a, &SamplePoint::rational(&c.sample));
        }
    }
}

/// Generic solution system of a formula: plan, open CAD, lifting, counts
/// and root expressions.
pub fn gsps(formula: &PrenexFormula, cfg: &Config) -> Result<(ProjectionPlan, GenericSolutionSystem), CadError> {
    let plan = plan(formula, &cfg.plan)?;
    let mut cells = open_cad(&plan)?;
    mark_excluded(&mut cells, formula);
    let results: Vec<Result<CellResult, CadError>> = with_pool(cfg.jobs, || {
        cells
            .par_iter()
            .map(|cell| {
                if cell.excluded_by_assumption && !cfg.exhaustive {
                    return Ok(CellResult {
                        cell: cell.clone(),
                        nu: None,
                        solutions: Vec::new(),
                    });
                }
                let tree = lift_tree(cell, &plan, formula)?;
                let nu = cardinality(&tree);
                let solutions = match nu {
                    Cardinality::Finite(v) if v > 0 => cfel(&tree)?,
                    _ => Vec::new(),
                };
                Ok(CellResult {
                    cell: cell.clone(),
                    nu: Some(nu),
                    solutions,
                })
            })
            .collect()
    })?;
    let cells = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok((
        plan,
        GenericSolutionSystem {
            vars: formula.vars.clone(),
            s: formula.s(),
            cells,
        },
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Mixed,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
            Verdict::Mixed => "MIXED",
        })
    }
}

#[derive(Debug, Clone)]
pub struct QeCell {
    pub cell: ParamCell,
    pub truth: Option<bool>,
    /// Signs of the parameter projection factors throughout the cell.
    pub condition: Qf,
}

#[derive(Debug, Clone)]
pub struct QeResult {
    pub plan: ProjectionPlan,
    pub cells: Vec<QeCell>,
    pub verdict: Verdict,
}

fn sign_condition(plan: &ProjectionPlan, sample: &[BigRational]) -> Qf {
    let point = SamplePoint::rational(sample);
    let mut atoms = Vec::new();
    for j in 1..=plan.s {
        for f in plan.basis(j) {
            let rel = if sign_at(f, &point) > 0 {
                Relation::Gt
            } else {
                Relation::Lt
            };
            atoms.push(Qf::atom(f.clone(), rel));
        }
    }
    Qf::and(atoms)
}

/// Truth of the formula on every open parameter cell and the generic
/// verdict over the cells not excluded by the assumption.
pub fn qe(formula: &PrenexFormula, cfg: &Config) -> Result<QeResult, CadError> {
    let (plan, sys) = gsps(formula, cfg)?;
    let cells: Vec<QeCell> = sys
        .cells
        .into_iter()
        .map(|c| QeCell {
            condition: sign_condition(&plan, &c.cell.sample),
            truth: c.nu.map(|nu| !nu.is_zero()),
            cell: c.cell,
        })
        .collect();
    let considered: Vec<bool> = cells
        .iter()
        .filter(|c| !c.cell.excluded_by_assumption)
        .filter_map(|c| c.truth)
        .collect();
    let verdict = if considered.iter().all(|&t| t) {
        Verdict::True
    } else if considered.iter().all(|&t| !t) {
        Verdict::False
    } else {
        Verdict::Mixed
    };
    Ok(QeResult { plan, cells, verdict })
}

/// Floating-point value of a rational, for reporting.
pub fn approx(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(if r.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}
