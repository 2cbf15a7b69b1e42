use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::{Monomial, Poly};

pub(crate) fn exact_divide(a: &Poly, b: &Poly) -> Option<Poly> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    let n = a.nvars();
    if a.is_zero() {
        return Some(Poly::zero(n));
    }
    if b.is_constant() {
        let c = b.constant_value();
        return a
            .terms()
            .all(|(_, x)| x.is_multiple_of(&c))
            .then(|| a.div_integer(&c));
    }
    // Degree bound of the quotient in each variable.
    let bound: Vec<i64> = (1..=n)
        .map(|v| a.degree(v) as i64 - b.degree(v) as i64)
        .collect();
    if bound.iter().any(|&d| d < 0) {
        return None;
    }
    let (lm_b, lc_b) = {
        let (m, c) = b.leading_term().unwrap();
        (m.clone(), c.clone())
    };
    let mut r = a.clone();
    let mut q_terms: Vec<(Monomial, BigInt)> = Vec::new();
    while let Some((lm_r, lc_r)) = r.leading_term() {
        if !lm_b.divides(lm_r) {
            return None;
        }
        let (qc, rem) = lc_r.div_rem(&lc_b);
        if !rem.is_zero() {
            return None;
        }
        let qm = Monomial(lm_r.0.iter().zip(&lm_b.0).map(|(x, y)| x - y).collect());
        if qm.0.iter().zip(&bound).any(|(&e, &d)| e as i64 > d) {
            return None;
        }
        r = &r - &b.mul_term(&qm, &qc);
        q_terms.push((qm, qc));
    }
    Some(Poly::from_terms(n, q_terms))
}

/// Dense univariate view: `coeffs[i]` multiplies `var^i`. Trailing zeros are
/// trimmed so the last entry is the leading coefficient.
pub(crate) type Dense = Vec<Poly>;

pub(crate) fn trim(p: &mut Dense) {
    while p.last().is_some_and(Poly::is_zero) {
        p.pop();
    }
}

pub(crate) fn deg(p: &Dense) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
pub(crate) fn prem(a: &Dense, b: &Dense) -> Dense {
    let db = deg(b).expect("pseudo-division by zero");
    let mut r = a.clone();
    trim(&mut r);
    let Some(da) = deg(&r) else {
        return r;
    };
    if da < db {
        return r;
    }
    let lb = b[db].clone();
    let mut e = (da - db + 1) as u32;
    while let Some(dr) = deg(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &(&lr * bc);
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let f = lb.pow(e);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

pub(crate) fn divide_dense_exact(p: &Dense, d: &Poly) -> Dense {
    p.iter()
        .map(|c| exact_divide(c, d).expect("subresultant division is exact"))
        .collect()
}
