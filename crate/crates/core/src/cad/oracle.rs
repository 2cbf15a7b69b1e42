//! Solution counts at a single parameter point, computed without the cell
//! decomposition: elimination and enumeration when the system is finite,
//! an implicit-function certificate when it is not.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algnum::{sign_at, Coord, SamplePoint};
use crate::formula::{evaluate_qf, PrenexFormula};
use crate::poly::{exact_divide, univariate_eliminant, Poly};
use crate::realroot;

use super::{CadError, Cardinality};

const CANDIDATE_LIMIT: usize = 20_000;

fn grid() -> Vec<BigRational> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    vec![
        r(0, 1),
        r(1, 1),
        r(-1, 1),
        r(2, 1),
        r(-2, 1),
        r(1, 2),
        r(-1, 2),
        r(3, 1),
        r(-3, 1),
        r(1, 3),
        r(5, 7),
        r(-7, 5),
    ]
}

fn substitute_all(p: &Poly, fixed: &[(usize, BigRational)]) -> Poly {
    let mut q = p.clone();
    for (v, x) in fixed {
        if q.involves(*v) {
            q = q.substitute_rational(*v, x);
        }
    }
    q
}

/// Drops zero polynomials and scalar multiples of earlier ones.
fn distinct(ps: Vec<Poly>) -> Vec<Poly> {
    let mut out: Vec<Poly> = Vec::new();
    for p in ps.into_iter().filter(|p| !p.is_zero()) {
        let dup = out.iter().any(|q| {
            exact_divide(&p, q).is_some_and(|c| c.is_constant()) && q.nterms() == p.nterms()
        });
        if !dup {
            out.push(p);
        }
    }
    out
}

fn real_roots(e: &Poly, v: usize) -> Vec<Coord> {
    let u = e.to_univariate(v).expect("univariate eliminant");
    let sf = realroot::squarefree(&u);
    realroot::isolate(&sf)
        .expect("nonzero eliminant")
        .iter()
        .map(|iv| Coord::from_isolated(&sf, iv))
        .collect()
}

/// Real common zeros of `sys` in the variables `free`, with the other
/// coordinates of `base` fixed. `None` if the system is not shown finite or
/// there are too many candidates.
fn finite_zeros(sys: &[Poly], base: &[Option<Coord>], free: &[usize]) -> Option<Vec<SamplePoint>> {
    let mut cands = Vec::new();
    for &v in free {
        let e = univariate_eliminant(sys, v)?;
        if e.is_constant() {
            return Some(Vec::new());
        }
        cands.push(real_roots(&e, v));
    }
    let total = cands.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()))?;
    if total > CANDIDATE_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    if total == 0 {
        return Some(out);
    }
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut coords = base.to_vec();
        for (k, &v) in free.iter().enumerate() {
            coords[v - 1] = Some(cands[k][idx[k]].clone());
        }
        let pt = SamplePoint::new(coords.into_iter().map(|c| c.expect("all coordinates set")).collect());
        if sys.iter().all(|f| sign_at(f, &pt) == 0) {
            out.push(pt);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Some(out);
            }
            idx[k] += 1;
            if idx[k] < cands[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    match m.len() {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(nvars);
            for col in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != col).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = &m[0][col] * &determinant(&minor, nvars);
                acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

/// Number of points satisfying the matrix of `formula` with the parameters
/// set to `alpha`.
///
/// Finite counts are exact. An infinite count is reported only when some
/// solution has the unknowns split into `k - m` fixed ones and `m` ones
/// solved from the `m` distinct equations with nonzero Jacobian, and every
/// other atom strictly signed there. Anything else is inconclusive.
pub fn nu_oracle(formula: &PrenexFormula, alpha: &[BigRational]) -> Result<Cardinality, CadError> {
    let n = formula.n();
    let s = formula.s();
    assert_eq!(alpha.len(), s, "one value per parameter");
    let params: Vec<(usize, BigRational)> = alpha.iter().cloned().enumerate().map(|(i, x)| (i + 1, x)).collect();
    let ecs = distinct(formula.ecs.iter().map(|f| substitute_all(f, &params)).collect());
    if ecs.iter().any(Poly::is_constant) {
        return Ok(Cardinality::Finite(0));
    }
    let unknowns: Vec<usize> = (s + 1..=n).collect();
    let mut base: Vec<Option<Coord>> = vec![None; n];
    for (v, x) in &params {
        base[v - 1] = Some(Coord::Rational(x.clone()));
    }

    if !ecs.is_empty() {
        if let Some(points) = finite_zeros(&ecs, &base, &unknowns) {
            let count = points.iter().filter(|pt| evaluate_qf(&formula.psi, pt)).count();
            return Ok(Cardinality::Finite(count as u64));
        }
    }

    let m = ecs.len();
    let k = unknowns.len();
    if m >= k {
        return Err(CadError::OracleInconclusive);
    }
    let atoms: Vec<Poly> = formula.psi.atoms().into_iter().map(|a| a.poly.clone()).collect();
    for fixed_vars in subsets(&unknowns, k - m) {
        let free: Vec<usize> = unknowns.iter().copied().filter(|v| !fixed_vars.contains(v)).collect();
        let jac: Vec<Vec<Poly>> = ecs.iter().map(|f| free.iter().map(|&v| f.derivative(v)).collect()).collect();
        let det = determinant(&jac, n);
        if det.is_zero() {
            continue;
        }
        for values in tuples(&grid(), fixed_vars.len()) {
            let fixed: Vec<(usize, BigRational)> = fixed_vars.iter().copied().zip(values).collect();
            let sys: Vec<Poly> = ecs.iter().map(|f| substitute_all(f, &fixed)).collect();
            if sys.iter().any(|f| f.is_zero() || f.is_constant()) {
                continue;
            }
            let mut b = base.clone();
            for (v, x) in &fixed {
                b[v - 1] = Some(Coord::Rational(x.clone()));
            }
            let points = if free.is_empty() {
                vec![SamplePoint::new(b.into_iter().map(|c| c.expect("all set")).collect())]
            } else {
                match finite_zeros(&sys, &b, &free) {
                    Some(p) => p,
                    None => continue,
                }
            };
            for pt in points {
                if sign_at(&det, &pt) != 0
                    && atoms.iter().all(|a| sign_at(a, &pt) != 0)
                    && evaluate_qf(&formula.psi, &pt)
                {
                    return Ok(Cardinality::Infinite);
                }
            }
        }
    }
    Err(CadError::OracleInconclusive)
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    if items.len() < size {
        return Vec::new();
    }
    let mut out = subsets(&items[1..], size - 1)
        .into_iter()
        .map(|mut r| {
            r.insert(0, items[0]);
            r
        })
        .collect::<Vec<_>>();
    out.extend(subsets(&items[1..], size));
    out
}

fn tuples(values: &[BigRational], len: usize) -> Vec<Vec<BigRational>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                values.iter().map(move |x| {
                    let mut t = t.clone();
                    t.push(x.clone());
                    t
                })
            })
            .collect();
    }
    out
}
