use crate::algnum::{sign_at, Coord, SamplePoint};
use crate::poly::{eliminate, radical, univariate_eliminant, Poly, PolyError};
use crate::realroot;

/// A point at which a projection factor vanishes identically.
#[derive(Debug, Clone)]
pub struct AddedPoint {
    pub factor: Poly,
    pub coords: Vec<Coord>,
}

/// Common zeros of the coefficients of one factor with respect to its main
/// variable.
#[derive(Debug, Clone)]
pub enum Nullification {
    Never,
    /// Finitely many complex zeros. `points` lists the real ones (`None`
    /// when too many candidates to enumerate); `eliminant` is a nonzero
    /// polynomial in `x_1` vanishing at all of them.
    Finite {
        points: Option<Vec<Vec<Coord>>>,
        eliminant: Poly,
    },
    /// Not shown finite, but lying over the zeros of these parameter
    /// polynomials.
    OverParameters(Vec<Poly>),
    /// Not shown finite and not confined to a parameter hypersurface.
    Undecided,
}

#[derive(Debug, Clone)]
pub enum Orientation {
    WellOriented {
        added: Vec<AddedPoint>,
        boundaries: Vec<Poly>,
    },
    NotWellOriented {
        witness: Poly,
    },
}

const POINT_ENUMERATION_LIMIT: usize = 4096;

fn real_roots(e: &Poly, v: usize) -> Vec<Coord> {
    let u = e.to_univariate(v).expect("univariate eliminant");
    let sf = realroot::squarefree(&u);
    realroot::isolate(&sf)
        .expect("nonzero eliminant")
        .iter()
        .map(|iv| Coord::from_isolated(&sf, iv))
        .collect()
}

/// Real common zeros of a zero-dimensional system, from candidate
/// coordinates given by the univariate eliminants.
fn enumerate_points(sys: &[Poly], eliminants: &[Poly]) -> Option<Vec<Vec<Coord>>> {
    let cands: Vec<Vec<Coord>> = eliminants
        .iter()
        .enumerate()
        .map(|(i, e)| real_roots(e, i + 1))
        .collect();
    let total = cands
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len().max(1)))?;
    if total > POINT_ENUMERATION_LIMIT {
        return None;
    }
    if cands.iter().any(Vec::is_empty) {
        return Some(Vec::new());
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; cands.len()];
    loop {
        let coords: Vec<Coord> = idx.iter().zip(&cands).map(|(&i, c)| c[i].clone()).collect();
        let pt = SamplePoint::new(coords.clone());
        if sys.iter().all(|c| sign_at(c, &pt) == 0) {
            out.push(coords);
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

/// Classifies the nullification set of `f` in the space of its lower
/// variables. Variables above `s` are unknowns and are eliminated when the
/// set is not shown to be finite.
pub fn analyze_factor(f: &Poly, s: usize) -> Result<Nullification, PolyError> {
    let j = f.level();
    let coeffs: Vec<Poly> = f.coefficients(j).into_iter().filter(|c| !c.is_zero()).collect();
    if coeffs.iter().any(Poly::is_constant) {
        return Ok(Nullification::Never);
    }
    let mut sys: Vec<Poly> = coeffs.iter().map(radical).collect();
    sys.sort_by(Poly::canonical_cmp);
    sys.dedup();

    let mut eliminants = Vec::new();
    for v in 1..j {
        match univariate_eliminant(&sys, v) {
            Some(e) if e.is_constant() => return Ok(Nullification::Never),
            Some(e) => eliminants.push(e),
            None => break,
        }
    }
    if eliminants.len() + 1 == j {
        let eliminant = eliminants[0].clone();
        let points = enumerate_points(&sys, &eliminants);
        return Ok(Nullification::Finite { points, eliminant });
    }

    let unknowns: Vec<usize> = (s + 1..j).collect();
    let over = eliminate(&sys, &unknowns);
    if over.iter().any(Poly::is_constant) {
        return Ok(Nullification::Never);
    }
    if over.is_empty() {
        return Ok(Nullification::Undecided);
    }
    Ok(Nullification::OverParameters(over))
}

/// Step-4 analysis over a set of projection factors. Nullification over a
/// parameter hypersurface is accepted only when `generic` is set.
pub fn analyze_coefficient_systems(factors: &[Poly], s: usize, generic: bool) -> Result<Orientation, PolyError> {
    let mut added = Vec::new();
    let mut boundaries: Vec<Poly> = Vec::new();
    let push = |b: Poly, boundaries: &mut Vec<Poly>| {
        if !boundaries.contains(&b) {
            boundaries.push(b);
        }
    };
    for f in factors.iter().filter(|f| f.level() >= 3) {
        match analyze_factor(f, s)? {
            Nullification::Never => {}
            Nullification::Finite { points, eliminant } => {
                for coords in points.unwrap_or_default() {
                    added.push(AddedPoint {
                        factor: f.clone(),
                        coords,
                    });
                }
                push(eliminant, &mut boundaries);
            }
            Nullification::OverParameters(hs) if generic => {
                for h in hs {
                    push(h, &mut boundaries);
                }
            }
            Nullification::OverParameters(_) | Nullification::Undecided => {
                return Ok(Orientation::NotWellOriented { witness: f.clone() });
            }
        }
    }
    Ok(Orientation::WellOriented { added, boundaries })
}
