//! Real root isolation for univariate integer polynomials by Descartes'
//! rule of signs with bisection.
//!
//! Polynomials are dense coefficient vectors, lowest degree first.

pub mod sturm;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{squarefree_part, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

/// An interval `(lo, hi)` isolating one real root, or the point `lo = hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsolatingInterval {
    pub lo: BigRational,
    pub hi: BigRational,
    /// 1-based index among the real roots in increasing order.
    pub root_index: usize,
}

impl IsolatingInterval {
    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

pub fn trim(p: &mut Vec<BigInt>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Sign of `p(x)` at a rational point.
pub fn sign_at_rational(p: &[BigInt], x: &BigRational) -> i32 {
    // Homogenized Horner: sum a_i n^i d^(deg - i), same sign as p(n/d).
    let Some(d) = degree(p) else {
        return 0;
    };
    let n = x.numer();
    let den = x.denom();
    let mut acc = BigInt::zero();
    let mut dpow = BigInt::one();
    for i in (0..=d).rev() {
        acc = acc * n + &p[i] * &dpow;
        dpow *= den;
    }
    sign(&acc)
}

fn sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Exact value of `p` at a rational point.
pub fn eval_rational(p: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

pub fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect()
}

/// Squarefree part of a univariate integer polynomial, primitive with
/// positive leading coefficient.
pub fn squarefree(p: &[BigInt]) -> Vec<BigInt> {
    let q = Poly::from_univariate(1, 1, p);
    if q.is_constant() {
        let mut v = vec![BigInt::one()];
        if q.is_zero() {
            v = vec![];
        }
        return v;
    }
    let s = squarefree_part(&q, 1).expect("nonzero");
    s.to_univariate(1).expect("univariate")
}

/// `2^k`, the smallest power of two strictly exceeding the Cauchy bound
/// `1 + max |a_i / a_d|`.
fn root_bound_exponent(p: &[BigInt]) -> u64 {
    let d = degree(p).expect("nonzero");
    let lc = p[d].abs();
    let mut max = BigRational::zero();
    for c in &p[..d] {
        let r = BigRational::new(c.abs(), lc.clone());
        if r > max {
            max = r;
        }
    }
    let bound = max + BigRational::one();
    let mut k = 0u64;
    let mut pow = BigRational::one();
    while pow <= bound {
        pow *= BigRational::from_integer(2.into());
        k += 1;
    }
    k
}

/// `p(x + 1)`.
fn taylor_shift_one(p: &[BigInt]) -> Vec<BigInt> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = a[j + 1].clone();
            a[j] += t;
        }
    }
    a
}

/// Sign variations of the coefficients of `(x + 1)^d p(1 / (x + 1))`, an
/// upper bound for the number of roots in `(0, 1)` with equal parity.
fn variations_unit(p: &[BigInt]) -> usize {
    let mut r: Vec<BigInt> = p.to_vec();
    r.reverse();
    let s = taylor_shift_one(&r);
    count_variations(&s)
}

fn count_variations(p: &[BigInt]) -> usize {
    let mut last = 0;
    let mut v = 0;
    for c in p {
        let s = sign(c);
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

/// `2^d p(x / 2)` for degree `d`.
fn halve(p: &[BigInt]) -> Vec<BigInt> {
    let d = p.len() - 1;
    p.iter()
        .enumerate()
        .map(|(i, c)| c << (d - i))
        .collect()
}

/// `p(2^k x)`.
fn scale_pow2(p: &[BigInt], k: u64) -> Vec<BigInt> {
    p.iter()
        .enumerate()
        .map(|(i, c)| c << (k as usize * i))
        .collect()
}

fn dyadic(num: BigInt, exp: u64) -> BigRational {
    BigRational::new(num, BigInt::one() << exp as usize)
}

/// Positive roots of squarefree `p` with `p(0) != 0`, as dyadic intervals.
fn isolate_positive(p: &[BigInt], out: &mut Vec<(BigRational, BigRational)>) {
    if degree(p).is_none_or(|d| d == 0) {
        return;
    }
    let k = root_bound_exponent(p);
    // Roots of q on (0, 1) correspond to roots of p on (0, 2^k).
    let q = scale_pow2(p, k);
    // Work items: (polynomial on (0,1), numerator c, depth j) meaning the
    // interval (c / 2^j, (c + 1) / 2^j) of the unit interval.
    let mut stack = vec![(q, BigInt::zero(), 0u64)];
    let mut found = Vec::new();
    while let Some((q, c, j)) = stack.pop() {
        let v = variations_unit(&q);
        if v == 0 {
            continue;
        }
        let lo = dyadic(c.clone(), j);
        let hi = dyadic(&c + 1, j);
        if v == 1 {
            found.push((lo, hi));
            continue;
        }
        let left = halve(&q);
        let mut right = taylor_shift_one(&left);
        if right[0].is_zero() {
            let mid = dyadic(&c * 2 + 1, j + 1);
            found.push((mid.clone(), mid));
            right.remove(0);
        }
        stack.push((left, &c * 2, j + 1));
        stack.push((right, &c * 2 + 1, j + 1));
    }
    let scale = BigRational::from_integer(BigInt::one() << k as usize);
    for (lo, hi) in found {
        out.push((lo * &scale, hi * &scale));
    }
}

/// Isolates the distinct real roots of `p`.
pub fn isolate(p: &[BigInt]) -> Result<Vec<IsolatingInterval>, RootError> {
    let mut p = p.to_vec();
    trim(&mut p);
    if p.is_empty() {
        return Err(RootError::ZeroPolynomial);
    }
    let mut sf = squarefree(&p);
    let mut raw: Vec<(BigRational, BigRational)> = Vec::new();
    if sf[0].is_zero() {
        raw.push((BigRational::zero(), BigRational::zero()));
        sf.remove(0);
    }
    isolate_positive(&sf, &mut raw);
    let neg: Vec<BigInt> = sf
        .iter()
        .enumerate()
        .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
        .collect();
    let mut negs = Vec::new();
    isolate_positive(&neg, &mut negs);
    raw.extend(negs.into_iter().map(|(lo, hi)| (-hi, -lo)));
    raw.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
    let full = squarefree(&p);
    let mut out = Vec::with_capacity(raw.len());
    for (i, (lo, hi)) in raw.into_iter().enumerate() {
        let iv = IsolatingInterval {
            lo,
            hi,
            root_index: i + 1,
        };
        let iv = clean_endpoints(&full, iv);
        out.push(detect_rational_root(&full, iv));
    }
    Ok(out)
}

/// Above this leading-coefficient size rational roots are not searched for.
const RATIONAL_ROOT_BITS: u64 = 48;

/// Collapses the interval to a point when the root is rational. A rational
/// root `p/q` of an integer polynomial has `q | lc`, and two such rationals
/// are at least `1/lc^2` apart, so after narrowing below that width the
/// simplest rational of the interval is the only candidate.
fn detect_rational_root(p: &[BigInt], mut iv: IsolatingInterval) -> IsolatingInterval {
    if iv.is_point() {
        return iv;
    }
    let lc = p.last().expect("nonzero").abs();
    if lc.bits() > RATIONAL_ROOT_BITS {
        return iv;
    }
    let width = BigRational::new(BigInt::one(), &lc * &lc * 2);
    while !iv.is_point() && iv.width() > width {
        bisect(p, &mut iv);
    }
    if iv.is_point() {
        return iv;
    }
    let r = simplest_rational(&iv.lo, &iv.hi);
    if lc.is_multiple_of(r.denom()) && sign_at_rational(p, &r) == 0 {
        iv.lo = r.clone();
        iv.hi = r;
    }
    iv
}

/// Rational with the smallest denominator in the closed interval `[a, b]`.
pub fn simplest_rational(a: &BigRational, b: &BigRational) -> BigRational {
    debug_assert!(a <= b);
    if a.is_positive() {
        simplest_positive(a, b)
    } else if b.is_negative() {
        -simplest_positive(&-b, &-a)
    } else {
        BigRational::zero()
    }
}

fn simplest_positive(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_integer() {
        return a.clone();
    }
    let c = a.ceil();
    if &c <= b {
        return c;
    }
    let fl = a.floor();
    let inner = simplest_positive(
        &(BigRational::one() / (b - &fl)),
        &(BigRational::one() / (a - &fl)),
    );
    fl + BigRational::one() / inner
}

/// Sign of `p` just inside the interval at its lower (`upper = false`) or
/// upper end, valid for squarefree `p`.
fn inner_sign(p: &[BigInt], at: &BigRational, upper: bool) -> i32 {
    let s = sign_at_rational(p, at);
    if s != 0 {
        return s;
    }
    let ds = sign_at_rational(&derivative(p), at);
    if upper {
        -ds
    } else {
        ds
    }
}

/// One bisection step on an open isolating interval.
fn bisect(p: &[BigInt], iv: &mut IsolatingInterval) {
    if iv.is_point() {
        return;
    }
    let mid = (&iv.lo + &iv.hi) / BigRational::from_integer(2.into());
    let sm = sign_at_rational(p, &mid);
    if sm == 0 {
        iv.lo = mid.clone();
        iv.hi = mid;
        return;
    }
    let slo = inner_sign(p, &iv.lo, false);
    if sm == slo {
        iv.lo = mid;
    } else {
        iv.hi = mid;
    }
}

/// Moves endpoints off roots of `p` so that later sign tests are clean.
fn clean_endpoints(p: &[BigInt], mut iv: IsolatingInterval) -> IsolatingInterval {
    while !iv.is_point()
        && (sign_at_rational(p, &iv.lo) == 0 || sign_at_rational(p, &iv.hi) == 0)
    {
        bisect(p, &mut iv);
    }
    iv
}

/// Narrows `iv` (a root of `p`) to width at most `width`.
pub fn refine(p: &[BigInt], iv: &IsolatingInterval, width: &BigRational) -> IsolatingInterval {
    let sf = squarefree(p);
    let mut out = iv.clone();
    while !out.is_point() && &out.width() > width {
        bisect(&sf, &mut out);
    }
    out
}

/// One bisection of an interval whose endpoints are not roots of the
/// squarefree polynomial `p`.
pub fn refine_step(p: &[BigInt], iv: &mut IsolatingInterval) {
    bisect(p, iv);
    if !iv.is_point() {
        *iv = clean_endpoints(p, iv.clone());
    }
}

/// Exact order of the root isolated by `iv` against the rational `x`,
/// narrowing `iv` as needed.
pub fn cmp_root_rational(p: &[BigInt], iv: &mut IsolatingInterval, x: &BigRational) -> Ordering {
    loop {
        if iv.is_point() {
            return iv.lo.cmp(x);
        }
        if x <= &iv.lo {
            return Ordering::Greater;
        }
        if x >= &iv.hi {
            return Ordering::Less;
        }
        if sign_at_rational(p, x) == 0 {
            return Ordering::Equal;
        }
        bisect(p, iv);
    }
}

/// A real number known through a lower (or upper) rational hint and an
/// exact comparison with rationals (`number.cmp(x)`).
pub struct Bound<'a> {
    pub hint: BigRational,
    pub cmp: &'a mut dyn FnMut(&BigRational) -> Ordering,
}

/// Simplest dyadic rational strictly between two real numbers (either side
/// may be absent). `lo.hint` must not exceed the lower number and `hi.hint`
/// must not be below the upper one. Smallest denominator first, then
/// smallest magnitude, nonnegative preferred.
pub fn simplest_between(mut lo: Option<Bound<'_>>, mut hi: Option<Bound<'_>>) -> BigRational {
    let mut k = 0usize;
    loop {
        let den = BigInt::one() << k;
        let scale = BigRational::from_integer(den.clone());
        let at = |m: &BigInt| BigRational::new(m.clone(), den.clone());
        let la = lo.as_ref().map(|b| (&b.hint * &scale).floor().to_integer());
        let ub = hi.as_ref().map(|b| (&b.hint * &scale).ceil().to_integer());
        let mut c = BigInt::zero();
        if let Some(l) = &la {
            if &c < l {
                c = l.clone();
            }
        }
        if let Some(u) = &ub {
            if &c > u {
                c = u.clone();
            }
        }
        let above_lo = |c: &BigInt, lo: &mut Option<Bound<'_>>| {
            lo.as_mut().is_none_or(|b| (b.cmp)(&at(c)) == Ordering::Less)
        };
        let below_hi = |c: &BigInt, hi: &mut Option<Bound<'_>>| {
            hi.as_mut().is_none_or(|b| (b.cmp)(&at(c)) == Ordering::Greater)
        };
        let mut found = None;
        if !above_lo(&c, &mut lo) {
            loop {
                c += 1;
                if ub.as_ref().is_some_and(|u| &c > u) {
                    break;
                }
                if above_lo(&c, &mut lo) {
                    if below_hi(&c, &mut hi) {
                        found = Some(c.clone());
                    }
                    break;
                }
            }
        } else if !below_hi(&c, &mut hi) {
            loop {
                c -= 1;
                if la.as_ref().is_some_and(|l| &c < l) {
                    break;
                }
                if below_hi(&c, &mut hi) {
                    if above_lo(&c, &mut lo) {
                        found = Some(c.clone());
                    }
                    break;
                }
            }
        } else {
            found = Some(c);
        }
        if let Some(m) = found {
            return at(&m);
        }
        k += 1;
    }
}

/// One sample in each sector determined by the sorted roots of `p`: below
/// all roots, between consecutive roots, above all roots. Each sample is the
/// simplest dyadic rational of its sector.
pub fn sample_between(p: &[BigInt], roots: &[IsolatingInterval]) -> Vec<BigRational> {
    let sf = squarefree(p);
    let mut ivs: Vec<IsolatingInterval> = roots.to_vec();
    let mut out = Vec::with_capacity(ivs.len() + 1);
    for i in 0..=ivs.len() {
        let (left, right) = ivs.split_at_mut(i);
        let mut lo_iv = left.last_mut();
        let mut hi_iv = right.first_mut();
        let mut cmp_lo = |x: &BigRational| cmp_root_rational(&sf, lo_iv.as_mut().unwrap(), x);
        let mut cmp_hi = |x: &BigRational| cmp_root_rational(&sf, hi_iv.as_mut().unwrap(), x);
        let lo_b = (i > 0).then(|| Bound {
            hint: roots[i - 1].lo.clone(),
            cmp: &mut cmp_lo,
        });
        let hi_b = (i < roots.len()).then(|| Bound {
            hint: roots[i].hi.clone(),
            cmp: &mut cmp_hi,
        });
        out.push(simplest_between(lo_b, hi_b));
    }
    out
}

/// Content-free, positive-leading version of `p`.
pub fn primitive(p: &[BigInt]) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for c in p {
        g = g.gcd(c);
    }
    let mut out: Vec<BigInt> = p.to_vec();
    trim(&mut out);
    if g.is_zero() {
        return out;
    }
    if out.last().is_some_and(Signed::is_negative) {
        g = -g;
    }
    out.iter().map(|c| c / &g).collect()
}
