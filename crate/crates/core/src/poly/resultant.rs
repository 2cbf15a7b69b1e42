//! Resultants and discriminants through subresultant remainder sequences.
//!
//! The sign convention is that of the Sylvester determinant with the rows of
//! `f` on top, so `res(f, g) = (-1)^(deg f * deg g) res(g, f)`.

use super::division::{deg, divide_dense_exact, prem, trim, Dense};
use super::{exact_divide, Poly, PolyError};

fn dense(p: &Poly, var: usize) -> Dense {
    let mut d = p.coefficients(var);
    trim(&mut d);
    d
}

/// `res_var(f, g)` as the Sylvester determinant.
pub fn resultant(f: &Poly, g: &Poly, var: usize) -> Result<Poly, PolyError> {
    let n = f.nvars();
    let df = f.degree(var);
    let dg = g.degree(var);
    if df == 0 && dg == 0 {
        return Err(PolyError::BothConstantInVar(var));
    }
    if f.is_zero() || g.is_zero() {
        return Ok(Poly::zero(n));
    }
    Ok(resultant_dense(dense(f, var), dense(g, var), n))
}

pub(crate) fn resultant_dense(a: Dense, b: Dense, nvars: usize) -> Poly {
    let (Some(da), Some(db)) = (deg(&a), deg(&b)) else {
        return Poly::zero(nvars);
    };
    let (mut a, mut b, mut sign) = if da < db {
        let s = if da % 2 == 1 && db % 2 == 1 { -1 } else { 1 };
        (b, a, s)
    } else {
        (a, b, 1)
    };
    let db = deg(&b).unwrap();
    if db == 0 {
        let r = b[0].pow(deg(&a).unwrap() as u32);
        return if sign < 0 { -r } else { r };
    }
    let mut g = Poly::one(nvars);
    let mut h = Poly::one(nvars);
    loop {
        let da = deg(&a).unwrap();
        let db = deg(&b).unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = prem(&a, &b);
        a = b;
        let divisor = &g * &h.pow(delta);
        b = divide_dense_exact(&r, &divisor);
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            let num = g.pow(delta);
            exact_divide(&num, &h.pow(delta - 1)).expect("subresultant h update is exact")
        };
        match deg(&b) {
            None => return Poly::zero(nvars),
            Some(0) => break,
            Some(_) => continue,
        }
    }
    let da = deg(&a).unwrap() as u32;
    let lb = b[0].clone();
    let num = lb.pow(da);
    let r = exact_divide(&num, &h.pow(da - 1)).expect("final subresultant step is exact");
    if sign < 0 {
        -r
    } else {
        r
    }
}

/// Discriminant `(-1)^(d(d-1)/2) res(f, f') / lc(f)`.
pub fn discriminant(f: &Poly, var: usize) -> Result<Poly, PolyError> {
    let d = f.degree(var);
    if d < 2 {
        return Err(PolyError::DegreeTooLow { var, degree: d });
    }
    let r = resultant(f, &f.derivative(var), var)?;
    let lc = f.leading_coeff_in(var);
    let q = exact_divide(&r, &lc).expect("leading coefficient divides res(f, f')");
    let flip = (d as u64 * (d as u64 - 1) / 2) % 2 == 1;
    Ok(if flip { -q } else { q })
}

/// Last nonzero element of the subresultant remainder sequence of two dense
/// polynomials whose coefficients are already primitive. Used by gcd.
pub(crate) fn subresultant_last(mut a: Dense, mut b: Dense, nvars: usize) -> Dense {
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    if b.is_empty() {
        return a;
    }
    let mut g = Poly::one(nvars);
    let mut h = Poly::one(nvars);
    loop {
        let da = deg(&a).unwrap();
        let db = deg(&b).unwrap();
        let delta = (da - db) as u32;
        let r = prem(&a, &b);
        match deg(&r) {
            None => return b,
            Some(0) => return r,
            Some(_) => {}
        }
        a = b;
        b = divide_dense_exact(&r, &(&g * &h.pow(delta)));
        g = a.last().unwrap().clone();
        h = if delta == 0 {
            h
        } else {
            exact_divide(&g.pow(delta), &h.pow(delta - 1)).expect("subresultant h update is exact")
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::testutil::p;

    /// Sylvester matrix determinant by cofactor expansion, independent of
    /// the remainder-sequence route.
    pub(crate) fn sylvester_oracle(f: &Poly, g: &Poly, var: usize) -> Poly {
        let n = f.nvars();
        let fc = f.coefficients(var);
        let gc = g.coefficients(var);
        let m = fc.len() - 1;
        let k = gc.len() - 1;
        let size = m + k;
        let mut mat = vec![vec![Poly::zero(n); size]; size];
        for row in 0..k {
            for (i, c) in fc.iter().rev().enumerate() {
                mat[row][row + i] = c.clone();
            }
        }
        for row in 0..m {
            for (i, c) in gc.iter().rev().enumerate() {
                mat[k + row][row + i] = c.clone();
            }
        }
        det(&mat, n)
    }

    fn det(mat: &[Vec<Poly>], n: usize) -> Poly {
        let size = mat.len();
        if size == 0 {
            return Poly::one(n);
        }
        if size == 1 {
            return mat[0][0].clone();
        }
        let mut acc = Poly::zero(n);
        for col in 0..size {
            if mat[0][col].is_zero() {
                continue;
            }
            let minor: Vec<Vec<Poly>> = mat[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(j, _)| *j != col)
                        .map(|(_, c)| c.clone())
                        .collect()
                })
                .collect();
            let term = &mat[0][col] * &det(&minor, n);
            acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn cubic_and_derivative() {
        let f = p("p,q,x", "x^3 + p x + q");
        let g = p("p,q,x", "3x^2 + p");
        let r = resultant(&f, &g, 3).unwrap();
        assert_eq!(r, p("p,q,x", "27q^2 + 4p^3"));
        assert_eq!(r, sylvester_oracle(&f, &g, 3));
    }

    #[test]
    fn elimination_of_p_is_linear() {
        let f = p("p,q,x", "x^3 + p x + q");
        let g = p("p,q,x", "3x^2 + p");
        let r = resultant(&f, &g, 1).unwrap();
        assert_eq!(r, p("p,q,x", "2x^3 - q"));
    }

    #[test]
    fn constant_second_operand() {
        let f = p("x", "x^3 - 2x + 5");
        let c = Poly::constant(1, 7);
        assert_eq!(resultant(&f, &c, 1).unwrap(), Poly::constant(1, 343));
    }

    #[test]
    fn fgt_resultant_matches_oracle() {
        let names = "a,b,y,z,x";
        let f = p(names, "a x^2 + x + y");
        let g = p(names, "b x + z");
        let expected = sylvester_oracle(&f, &g, 5);
        assert_eq!(expected, p(names, "a z^2 - b z + b^2 y"));
        assert_eq!(resultant(&f, &g, 5).unwrap(), expected);
    }

    #[test]
    fn both_constant_is_an_error() {
        let f = p("x,y", "x + 1");
        let g = p("x,y", "x - 1");
        assert_eq!(
            resultant(&f, &g, 2).unwrap_err(),
            PolyError::BothConstantInVar(2)
        );
    }

    #[test]
    fn quadratic_discriminant() {
        let f = p("b,c,x", "x^2 + b x + c");
        assert_eq!(discriminant(&f, 3).unwrap(), p("b,c,x", "b^2 - 4c"));
        let sq = p("x", "(x - 1)^2");
        assert!(discriminant(&sq, 1).unwrap().is_zero());
        assert!(matches!(
            discriminant(&p("x", "x + 1"), 1),
            Err(PolyError::DegreeTooLow { .. })
        ));
    }

    #[test]
    fn discriminant_of_cubic() {
        let f = p("p,q,x", "x^3 + p x + q");
        assert_eq!(discriminant(&f, 3).unwrap(), p("p,q,x", "-4p^3 - 27q^2"));
    }

    #[test]
    fn ellipse_discriminant() {
        let f = p("x,y", "2y^2 + x^2 - 1");
        assert_eq!(discriminant(&f, 2).unwrap(), p("x,y", "-8x^2 + 8"));
    }
}
