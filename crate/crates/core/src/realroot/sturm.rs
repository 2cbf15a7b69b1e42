//! Sturm sequences, kept as an independent cross-check for root counts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{derivative, degree, trim};

fn rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db && !r.is_empty() {
        let lead = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] -= &lead * c;
        }
        r.pop();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
    }
    r
}

/// Sturm chain `p, p', -rem(p, p'), ...` over the rationals.
pub fn sturm_chain(p: &[BigInt]) -> Vec<Vec<BigRational>> {
    let to_q = |v: &[BigInt]| -> Vec<BigRational> {
        v.iter().map(|c| BigRational::from_integer(c.clone())).collect()
    };
    let mut p = p.to_vec();
    trim(&mut p);
    let mut d = derivative(&p);
    trim(&mut d);
    let mut chain = vec![to_q(&p), to_q(&d)];
    while chain.last().is_some_and(|v| v.len() > 1) {
        let n = chain.len();
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut v = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn sign_q(c: &BigRational) -> i32 {
    if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    }
}

/// Number of distinct real roots of `p`.
pub fn count_real_roots(p: &[BigInt]) -> usize {
    if degree(p).is_none_or(|d| d == 0) {
        return 0;
    }
    let chain = sturm_chain(p);
    let at_pos = variations(chain.iter().map(|q| sign_q(q.last().unwrap())));
    let at_neg = variations(chain.iter().map(|q| {
        let s = sign_q(q.last().unwrap());
        if (q.len() - 1) % 2 == 1 {
            -s
        } else {
            s
        }
    }));
    at_neg - at_pos
}

/// Number of distinct real roots in the half-open interval `(a, b]`.
pub fn count_roots_between(p: &[BigInt], a: &BigRational, b: &BigRational) -> usize {
    let chain = sturm_chain(p);
    let eval = |q: &[BigRational], x: &BigRational| -> i32 {
        let mut acc = BigRational::zero();
        for c in q.iter().rev() {
            acc = acc * x + c;
        }
        sign_q(&acc)
    };
    let va = variations(chain.iter().map(|q| eval(q, a)));
    let vb = variations(chain.iter().map(|q| eval(q, b)));
    va - vb
}
