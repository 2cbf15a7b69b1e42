use num_integer::Integer;

use super::division::{trim, Dense};
use super::resultant::subresultant_last;
use super::{exact_divide, Poly, PolyError};

/// Greatest common divisor, primitive with positive leading coefficient.
///
/// `gcd(0, 0)` is zero.
pub fn gcd(f: &Poly, g: &Poly) -> Poly {
    let n = f.nvars();
    if f.is_zero() {
        return normalize_sign(g.clone());
    }
    if g.is_zero() {
        return normalize_sign(f.clone());
    }
    let v = f.level().max(g.level());
    if v == 0 {
        let c = f.constant_value().gcd(&g.constant_value());
        return Poly::constant(n, c);
    }
    if f.degree(v) == 0 {
        return gcd(f, &content_in(g, v));
    }
    if g.degree(v) == 0 {
        return gcd(&content_in(f, v), g);
    }
    let cf = content_in(f, v);
    let cg = content_in(g, v);
    let c = gcd(&cf, &cg);
    let pf = divide_coeffs(f, &cf, v);
    let pg = divide_coeffs(g, &cg, v);
    let last = subresultant_last(pf, pg, n);
    if last.len() <= 1 {
        return c;
    }
    let last_poly = Poly::from_coefficients(n, v, &last);
    let pl = content_in(&last_poly, v);
    let prim = exact_divide(&last_poly, &pl).expect("content divides");
    normalize_sign(&c * &prim)
}

fn normalize_sign(p: Poly) -> Poly {
    if p.leading_sign() < 0 {
        -p
    } else {
        p
    }
}

/// Nonnegative-leading gcd of the coefficients of `p` with respect to `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let coeffs = p.coefficients(var);
    let mut acc = Poly::zero(p.nvars());
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, c);
        if acc.is_one() {
            break;
        }
    }
    acc
}

fn divide_coeffs(p: &Poly, c: &Poly, var: usize) -> Dense {
    let mut d: Dense = p
        .coefficients(var)
        .iter()
        .map(|x| exact_divide(x, c).expect("content divides every coefficient"))
        .collect();
    trim(&mut d);
    d
}

/// Splits `p` into a content free of `var` and a primitive part whose
/// leading coefficient is positive.
pub fn content_primitive(p: &Poly, var: usize) -> Result<(Poly, Poly), PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let n = p.nvars();
    if p.degree(var) == 0 {
        return Ok((p.clone(), Poly::one(n)));
    }
    let mut c = content_in(p, var);
    let mut prim = exact_divide(p, &c).expect("content divides");
    if prim.leading_sign() < 0 {
        c = -c;
        prim = -prim;
    }
    Ok((c, prim))
}

/// Product of the distinct factors of the primitive part of `p` with
/// respect to `var`, normalized.
pub fn squarefree_part(p: &Poly, var: usize) -> Result<Poly, PolyError> {
    let (_, prim) = content_primitive(p, var)?;
    if prim.degree(var) == 0 {
        return Ok(prim);
    }
    let g = gcd(&prim, &prim.derivative(var));
    let q = exact_divide(&prim, &g).expect("gcd divides");
    Ok(q.normalize_integer())
}

/// Yun's decomposition of the primitive part of `p` with respect to `var`:
/// `prim(p) = prod a_i^i` with the `a_i` squarefree and pairwise coprime.
/// Entry `i - 1` holds `a_i`; constant layers are kept so indices stay aligned.
pub fn yun_layers(p: &Poly, var: usize) -> Result<Vec<Poly>, PolyError> {
    let (_, prim) = content_primitive(p, var)?;
    if prim.degree(var) == 0 {
        return Ok(vec![]);
    }
    let d = prim.derivative(var);
    let a0 = gcd(&prim, &d);
    let mut b = exact_divide(&prim, &a0).expect("gcd divides");
    let mut c = exact_divide(&d, &a0).expect("gcd divides");
    let mut dd = &c - &b.derivative(var);
    let mut out = Vec::new();
    loop {
        let a = gcd(&b, &dd);
        out.push(a.normalize_integer());
        b = exact_divide(&b, &a).expect("gcd divides");
        if b.degree(var) == 0 {
            break;
        }
        c = exact_divide(&dd, &a).expect("gcd divides");
        dd = &c - &b.derivative(var);
    }
    Ok(out)
}

/// True when the gcd of `f` and `g` is a constant.
pub fn is_coprime(f: &Poly, g: &Poly) -> bool {
    gcd(f, g).is_constant()
}
