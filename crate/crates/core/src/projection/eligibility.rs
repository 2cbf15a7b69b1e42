use serde::{Deserialize, Serialize};

use crate::poly::{discriminant, exact_divide, finest_squarefree_basis, is_coprime, resultant, Poly, PolyError};

/// How a polynomial relates to the factor set `E` of the lower pivot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Placement {
    /// A constant times a product of elements of `E`.
    ByDivisibility,
    /// Coprime with `e`.
    ByCoprimality,
    No,
}

impl Placement {
    pub fn holds(self) -> bool {
        self != Placement::No
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eligibility {
    /// Placement of `discr(f)`.
    pub well_placed: Placement,
    /// `e` and `ldcf(f)` coprime.
    pub ldcf_coprime: bool,
    /// Placement of `res(f, g)` for each basis element `g` not dividing `f`.
    pub well_positioned: Vec<(Poly, Placement)>,
    pub full_reduction: bool,
}

/// True when `d` is a nonzero constant times a product of irreducible
/// factors of the squarefree `e`: every element of a squarefree basis of
/// `d` divides `e`.
fn is_product_of(d: &Poly, e: &Poly) -> bool {
    if d.is_zero() {
        return false;
    }
    finest_squarefree_basis([d])
        .into_iter()
        .all(|b| exact_divide(e, &b.poly).is_some())
}

fn placement(d: &Poly, e: &Poly) -> Placement {
    if is_product_of(d, e) {
        Placement::ByDivisibility
    } else if is_coprime(e, d) {
        Placement::ByCoprimality
    } else {
        Placement::No
    }
}

/// Checks whether the fully reduced operator may be used at the second
/// projection step, for the upper pivot `f`, the lower pivot `e` and the
/// basis `basis` of the upper level.
pub fn check_second_step_full_reduction(f: &Poly, e: &Poly, basis: &[Poly]) -> Result<Eligibility, PolyError> {
    let v = f.level();
    let d = if f.degree(v) >= 2 {
        discriminant(f, v)?
    } else {
        Poly::one(f.nvars())
    };
    let e = &finest_squarefree_basis([e]).into_iter().fold(Poly::one(e.nvars()), |acc, x| &acc * &x.poly);
    let well_placed = placement(&d, e);
    let ldcf_coprime = is_coprime(e, &f.leading_coeff_in(v));
    let mut well_positioned = Vec::new();
    for g in basis.iter().filter(|g| g.involves(v) && is_coprime(g, f)) {
        let r = resultant(f, g, v)?;
        well_positioned.push((g.clone(), placement(&r, e)));
    }
    let full_reduction =
        well_placed.holds() && ldcf_coprime && well_positioned.iter().all(|(_, p)| p.holds());
    Ok(Eligibility {
        well_placed,
        ldcf_coprime,
        well_positioned,
        full_reduction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testutil::p;

    #[test]
    fn coprime_discriminant_is_well_placed() {
        // discr_y(y^2 - x - 1) = 4(x + 1), coprime with e = x.
        let f = p("x,y", "y^2 - x - 1");
        let e = p("x,y", "x");
        let r = check_second_step_full_reduction(&f, &e, &[f.clone()]).unwrap();
        assert_eq!(r.well_placed, Placement::ByCoprimality);
        assert!(r.full_reduction);
    }

    #[test]
    fn divisibility_and_failure() {
        let f = p("x,y", "y^2 - x");
        let e = p("x,y", "x");
        let g = p("x,y", "y - x - 1");
        let r = check_second_step_full_reduction(&f, &e, &[f.clone(), g.clone()]).unwrap();
        assert_eq!(r.well_placed, Placement::ByDivisibility);
        // res(f, g) = (x + 1)^2 - x, coprime with x.
        assert_eq!(r.well_positioned, vec![(g, Placement::ByCoprimality)]);

        let e2 = p("x,y", "x (x - 1)");
        let f2 = p("x,y", "y^2 - x^2 + x + x^3");
        let r2 = check_second_step_full_reduction(&f2, &e2, &[f2.clone()]).unwrap();
        // discr = 4x(x^2 - x + 1): shares x with e but has another factor.
        assert_eq!(r2.well_placed, Placement::No);
        assert!(!r2.full_reduction);
    }

    #[test]
    fn repeated_factors_divide() {
        let e = p("x,y", "x (x - 1)");
        assert!(is_product_of(&p("x,y", "3 x^2 (x - 1)"), &e));
        assert!(!is_product_of(&p("x,y", "x (x + 1)"), &e));
    }
}
