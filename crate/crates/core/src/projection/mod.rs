//! Projection planning: the Brown–McCallum operator, the equational
//! operators built on it, pivot selection and propagation of implicit
//! constraints, and analysis of coefficient systems.

mod eligibility;
mod orientation;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::PrenexFormula;
use crate::poly::{
    discriminant, finest_squarefree_basis, is_coprime, radical, resultant, NormalizedFactor,
    Poly, PolyError, DEFAULT_DEGREE_CAP,
};

pub use eligibility::{check_second_step_full_reduction, Eligibility, Placement};
pub use orientation::{analyze_coefficient_systems, analyze_factor, AddedPoint, Nullification, Orientation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error("pivot set is empty")]
    EmptyPivot,
    #[error("not well-oriented: the coefficients of {text} vanish together on a set of positive dimension")]
    NotWellOriented { witness: Poly, text: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Operator {
    #[serde(rename = "P")]
    P,
    #[serde(rename = "P_E")]
    PE,
    #[serde(rename = "P_E*")]
    PEStar,
}

/// Which equational operator to use where a pivot exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Policy {
    /// Fully reduced at the first step and at the bivariate step, semi-reduced
    /// elsewhere.
    #[default]
    Auto,
    SemiReduced,
    /// As `Auto`, plus the fully reduced operator at the second step when the
    /// well-placed and well-positioned checks pass.
    Theorem5,
}

#[derive(Debug, Clone)]
pub struct PlanConfig {
    pub policy: Policy,
    pub degree_cap: u32,
    /// Accept nullification sets lying over a proper hypersurface of
    /// parameter space, adding that hypersurface to the parameter projection.
    pub generic_nullification: bool,
}

impl Default for PlanConfig {
    fn default() -> Self {
        PlanConfig {
            policy: Policy::Auto,
            degree_cap: DEFAULT_DEGREE_CAP,
            generic_nullification: false,
        }
    }
}

/// An equational-constraint candidate; `declared` marks ECs of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub poly: Poly,
    pub declared: bool,
}

#[derive(Debug, Clone)]
pub struct LevelPlan {
    pub level: usize,
    pub candidates: Vec<Candidate>,
    pub pivot: Option<Poly>,
    /// Basis elements dividing the pivot.
    pub pivot_factors: Vec<Poly>,
    /// `None` at level 1.
    pub operator: Option<Operator>,
    /// Finest squarefree basis of the level's polynomials.
    pub basis: Vec<Poly>,
    /// What projecting this level contributed below it.
    pub projection: Vec<Poly>,
    pub eligibility: Option<Eligibility>,
}

#[derive(Debug, Clone)]
pub struct ProjectionPlan {
    pub vars: Vec<String>,
    pub s: usize,
    /// Entry `j - 1` is the plan of level `j`.
    pub levels: Vec<LevelPlan>,
    pub added: Vec<AddedPoint>,
    /// Parameter polynomials added because some factor nullifies over them.
    pub boundaries: Vec<Poly>,
}

impl ProjectionPlan {
    pub fn n(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, j: usize) -> &LevelPlan {
        &self.levels[j - 1]
    }

    pub fn basis(&self, j: usize) -> &[Poly] {
        &self.levels[j - 1].basis
    }
}

fn generic_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Splits a set into the normalized contents (factors free of `v`) and the
/// finest squarefree basis of the primitive parts of positive degree in `v`.
fn split_basis(a: &[Poly], v: usize) -> (Vec<Poly>, Vec<Poly>) {
    finest_squarefree_basis(a)
        .into_iter()
        .map(|f| f.poly)
        .partition(|p| !p.involves(v))
}

fn normalize(polys: &[Poly]) -> Vec<NormalizedFactor> {
    finest_squarefree_basis(polys)
}

fn ldcf_discr(f: &Poly, v: usize, out: &mut Vec<Poly>) -> Result<(), PolyError> {
    out.push(f.leading_coeff_in(v));
    if f.degree(v) >= 2 {
        out.push(discriminant(f, v)?);
    }
    Ok(())
}

fn pairwise_resultants(fs: &[Poly], v: usize, out: &mut Vec<Poly>) -> Result<(), PolyError> {
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            out.push(resultant(&fs[i], &fs[j], v)?);
        }
    }
    Ok(())
}

/// `P` on a basis already split from its contents.
fn project_full(b: &[Poly], v: usize) -> Result<Vec<Poly>, PolyError> {
    let mut out = Vec::new();
    for f in b {
        ldcf_discr(f, v, &mut out)?;
    }
    pairwise_resultants(b, v, &mut out)?;
    Ok(out)
}

/// `P_E` (or `P_E*` when `star`) on a basis `b` with pivot factors `f`.
fn project_reduced(b: &[Poly], f: &[Poly], v: usize, star: bool) -> Result<Vec<Poly>, PolyError> {
    let mut out = project_full(f, v)?;
    for g in b.iter().filter(|g| !f.contains(g)) {
        for e in f {
            out.push(resultant(e, g, v)?);
        }
        if star {
            ldcf_discr(g, v, &mut out)?;
        }
    }
    Ok(out)
}

/// Brown–McCallum projection of `a` with respect to `x_v`.
pub fn brown_mccallum_p(a: &[Poly], v: usize) -> Result<Vec<NormalizedFactor>, PolyError> {
    let (mut out, b) = split_basis(a, v);
    out.extend(project_full(&b, v)?);
    Ok(normalize(&out))
}

fn pivot_split(a: &[Poly], e: &[Poly], v: usize) -> Result<(Vec<Poly>, Vec<Poly>, Vec<Poly>), ProjectionError> {
    let (cont, b) = split_basis(a, v);
    let (_, fe) = split_basis(e, v);
    if fe.is_empty() {
        return Err(ProjectionError::EmptyPivot);
    }
    let f: Vec<Poly> = b
        .iter()
        .filter(|g| fe.iter().any(|h| !is_coprime(g, h)))
        .cloned()
        .collect();
    Ok((cont, b, f))
}

/// Fully reduced equational projection `cont(A) ∪ P_F(B)`.
pub fn reduced_p_e(a: &[Poly], e: &[Poly], v: usize) -> Result<Vec<NormalizedFactor>, ProjectionError> {
    let (mut out, b, f) = pivot_split(a, e, v)?;
    out.extend(project_reduced(&b, &f, v, false)?);
    Ok(normalize(&out))
}

/// Semi-reduced equational projection: `P_E` plus leading coefficients and
/// discriminants of the non-pivot basis elements.
pub fn semireduced_p_e_star(a: &[Poly], e: &[Poly], v: usize) -> Result<Vec<NormalizedFactor>, ProjectionError> {
    let (mut out, b, f) = pivot_split(a, e, v)?;
    out.extend(project_reduced(&b, &f, v, true)?);
    Ok(normalize(&out))
}

/// Deterministic pivot: declared ECs first, then least total degree, fewest
/// terms, smallest canonical text.
pub fn select_pivot(c: &[Candidate]) -> Option<&Candidate> {
    let names = c.first().map(|x| generic_names(x.poly.nvars())).unwrap_or_default();
    c.iter().min_by(|x, y| {
        (!x.declared, x.poly.total_degree(), x.poly.nterms())
            .cmp(&(!y.declared, y.poly.total_degree(), y.poly.nterms()))
            .then_with(|| x.poly.to_text(&names).cmp(&y.poly.to_text(&names)))
    })
}

/// Resultants of the pivot with the other candidates of its level, reduced
/// to their radicals. Zero and constant resultants carry no constraint and
/// are dropped.
pub fn propagate_candidates(pivot: &Poly, others: &[Poly], v: usize, cap: u32) -> Result<Vec<Poly>, PolyError> {
    let mut out: Vec<Poly> = Vec::new();
    for g in others {
        if g == pivot {
            continue;
        }
        let r = resultant(pivot, g, v)?;
        if r.is_constant() {
            continue;
        }
        let r = radical(&r);
        r.check_cap(cap)?;
        if !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Candidate sets and pivots for the unknown levels `n` down to `s + 1`.
/// Propagated resultants are filed at their actual level.
pub fn pivot_chain(ecs: &[Poly], s: usize, cap: u32) -> Result<Vec<(usize, Vec<Candidate>, Option<Poly>)>, PolyError> {
    let n = ecs.first().map_or(0, Poly::nvars);
    let mut filed: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
    for f in ecs.iter().filter(|f| !f.is_constant()) {
        let poly = radical(f);
        let entry = filed.entry(poly.level()).or_default();
        if !entry.iter().any(|c| c.poly == poly) {
            entry.push(Candidate { poly, declared: true });
        }
    }
    let mut chain = Vec::new();
    for j in (s + 1..=n).rev() {
        let cands = filed.remove(&j).unwrap_or_default();
        let pivot = select_pivot(&cands).map(|c| c.poly.clone());
        if let Some(e) = &pivot {
            let others: Vec<Poly> = cands.iter().map(|c| c.poly.clone()).collect();
            for r in propagate_candidates(e, &others, j, cap)? {
                let lvl = r.level();
                if lvl <= s {
                    continue;
                }
                let entry = filed.entry(lvl).or_default();
                if !entry.iter().any(|c| c.poly == r) {
                    entry.push(Candidate {
                        poly: r,
                        declared: false,
                    });
                }
            }
        }
        chain.push((j, cands, pivot));
    }
    Ok(chain)
}

fn choose_operator(policy: Policy, j: usize, n: usize, s: usize, eligible: bool) -> Operator {
    match policy {
        Policy::SemiReduced => Operator::PEStar,
        _ if j == n || (j == 2 && s == 1) => Operator::PE,
        Policy::Theorem5 if j + 1 == n && eligible => Operator::PE,
        _ => Operator::PEStar,
    }
}

/// Projection phase: pivots, projection sets for every level, and the
/// coefficient-system analysis of factors of level 3 and above.
pub fn plan(formula: &PrenexFormula, cfg: &PlanConfig) -> Result<ProjectionPlan, ProjectionError> {
    let n = formula.n();
    let s = formula.s();
    let cap = cfg.degree_cap;
    let mut pending: Vec<Vec<Poly>> = vec![Vec::new(); n + 1];
    let file = |pending: &mut Vec<Vec<Poly>>, p: Poly| -> Result<(), PolyError> {
        if !p.is_constant() {
            p.check_cap(cap)?;
            let l = p.level();
            if !pending[l].contains(&p) {
                pending[l].push(p);
            }
        }
        Ok(())
    };
    for p in formula.polynomials() {
        file(&mut pending, p)?;
    }
    if let Some(a) = &formula.assumption {
        for atom in a.atoms() {
            file(&mut pending, atom.poly.clone())?;
        }
    }
    let chain = pivot_chain(&formula.ecs, s, cap)?;
    let mut pivots: BTreeMap<usize, (Vec<Candidate>, Option<Poly>)> = BTreeMap::new();
    for (j, cands, pivot) in chain {
        for c in &cands {
            file(&mut pending, c.poly.clone())?;
        }
        pivots.insert(j, (cands, pivot));
    }

    let mut levels = Vec::with_capacity(n);
    let mut added = Vec::new();
    let mut boundaries: Vec<Poly> = Vec::new();
    let mut above: Option<(Poly, Vec<Poly>)> = None;
    for j in (1..=n).rev() {
        let (contents, basis) = split_basis(&pending[j], j);
        for c in contents {
            file(&mut pending, c)?;
        }
        if j >= 3 {
            match analyze_coefficient_systems(&basis, s, cfg.generic_nullification)? {
                Orientation::WellOriented {
                    added: pts,
                    boundaries: bs,
                } => {
                    added.extend(pts);
                    for b in bs {
                        if !boundaries.contains(&b) {
                            boundaries.push(b.clone());
                        }
                        file(&mut pending, b)?;
                    }
                }
                Orientation::NotWellOriented { witness } => {
                    let text = witness.to_text(&formula.vars);
                    return Err(ProjectionError::NotWellOriented { witness, text });
                }
            }
        }
        let (candidates, pivot) = pivots.remove(&j).unwrap_or_default();
        let pivot_factors: Vec<Poly> = match &pivot {
            Some(e) => basis.iter().filter(|g| !is_coprime(g, e)).cloned().collect(),
            None => Vec::new(),
        };
        let eligibility = match (&above, &pivot) {
            (Some((f, b_above)), Some(e)) if j + 1 == n => {
                Some(check_second_step_full_reduction(f, e, b_above)?)
            }
            _ => None,
        };
        let operator = (j > 1).then(|| match &pivot {
            None => Operator::P,
            Some(_) => choose_operator(
                cfg.policy,
                j,
                n,
                s,
                eligibility.as_ref().is_some_and(|e| e.full_reduction),
            ),
        });
        let raw = match operator {
            None => Vec::new(),
            Some(Operator::P) => project_full(&basis, j)?,
            Some(Operator::PE) => project_reduced(&basis, &pivot_factors, j, false)?,
            Some(Operator::PEStar) => project_reduced(&basis, &pivot_factors, j, true)?,
        };
        let projection: Vec<Poly> = normalize(&raw).into_iter().map(|f| f.poly).collect();
        for p in &projection {
            file(&mut pending, p.clone())?;
        }
        above = pivot.clone().map(|e| (e, basis.clone()));
        levels.push(LevelPlan {
            level: j,
            candidates,
            pivot,
            pivot_factors,
            operator,
            basis,
            projection,
            eligibility,
        });
    }
    levels.reverse();
    Ok(ProjectionPlan {
        vars: formula.vars.clone(),
        s,
        levels,
        added,
        boundaries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, ParseMode};
    use crate::poly::testutil::p;

    fn polys(v: Vec<NormalizedFactor>) -> Vec<Poly> {
        v.into_iter().map(|f| f.poly).collect()
    }

    #[test]
    fn brown_mccallum_examples() {
        assert_eq!(polys(brown_mccallum_p(&[p("x,y", "y^2 - x")], 2).unwrap()), vec![p("x,y", "x")]);
        assert_eq!(
            polys(brown_mccallum_p(&[p("x,y", "2y^2 + x^2 - 1")], 2).unwrap()),
            vec![p("x,y", "x^2 - 1")]
        );
        assert!(brown_mccallum_p(&[p("x,y", "7")], 2).unwrap().is_empty());
    }

    #[test]
    fn reduced_operator_on_sphere_and_plane() {
        let a = [p("x,y,z", "z^2 + y^2 + x^2 - 1"), p("x,y,z", "z - y")];
        let e = [p("x,y,z", "z - y")];
        assert_eq!(polys(reduced_p_e(&a, &e, 3).unwrap()), vec![p("x,y,z", "2y^2 + x^2 - 1")]);
        let full = polys(brown_mccallum_p(&e, 3).unwrap());
        assert_eq!(polys(reduced_p_e(&e, &e, 3).unwrap()), full);
        assert_eq!(reduced_p_e(&a, &[], 3).unwrap_err(), ProjectionError::EmptyPivot);
    }

    #[test]
    fn semireduced_adds_only_ldcf_of_linear() {
        let f = p("x,y", "y^2 - x");
        let g = p("x,y", "(x + 2) y - 1");
        let pe = polys(reduced_p_e(&[f.clone(), g.clone()], &[f.clone()], 2).unwrap());
        let star = polys(semireduced_p_e_star(&[f.clone(), g.clone()], &[f.clone()], 2).unwrap());
        let extra: Vec<&Poly> = star.iter().filter(|q| !pe.contains(q)).collect();
        assert_eq!(extra, vec![&p("x,y", "x + 2")]);
    }

    #[test]
    fn pivot_tie_breaks() {
        let c = |t: &str| Candidate {
            poly: p("a,b,x,z,y", t),
            declared: true,
        };
        let set = [c("a x^2 + x + y"), c("b x + z")];
        assert_eq!(select_pivot(&set).unwrap().poly, p("a,b,x,z,y", "b x + z"));
        let tied = [c("y + 2"), c("y + 1")];
        assert_eq!(select_pivot(&tied).unwrap().poly, p("a,b,x,z,y", "y + 1"));
        let mut implicit = c("y");
        implicit.declared = false;
        assert_eq!(select_pivot(&[implicit, c("y^2 + a")]).unwrap().poly, p("a,b,x,z,y", "y^2 + a"));
    }

    #[test]
    fn constant_resultant_is_dropped() {
        let f = p("x,y", "y - 1");
        let g = p("x,y", "y - 2");
        assert!(propagate_candidates(&f, &[g], 2, 64).unwrap().is_empty());
    }

    #[test]
    fn plan_for_sphere_and_plane() {
        let f = parse("vars: x, y, z;\n(E y)(E z)[z^2 + y^2 + x^2 - 1 = 0 /\\ z - y = 0]", ParseMode::Gsps).unwrap();
        let plan = plan(&f, &PlanConfig::default()).unwrap();
        assert_eq!(plan.level(3).operator, Some(Operator::PE));
        assert_eq!(plan.level(3).pivot, Some(p("x,y,z", "z - y")));
        assert_eq!(plan.level(2).pivot, Some(p("x,y,z", "2y^2 + x^2 - 1")));
        assert_eq!(plan.basis(1), &[p("x,y,z", "x^2 - 1")]);
        for l in &plan.levels {
            assert!(l.projection.iter().all(|q| q.level() < l.level));
        }
    }
}
