//! Real algebraic numbers and exact sign evaluation at sample points whose
//! coordinates are rationals or real algebraic numbers.

mod interval;

use std::cmp::Ordering;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::{gcd, resultant, Poly};
use crate::realroot::{self, IsolatingInterval};

pub use interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("polynomial vanishes identically over the sample point")]
    IdenticallyZero,
}

/// A real root of a squarefree integer polynomial, located by an open
/// isolating interval whose endpoints are not roots.
///
/// Clones share the interval, so refinement done through one clone benefits
/// all of them.
#[derive(Clone)]
pub struct RealAlgebraic {
    poly: Arc<Vec<BigInt>>,
    iv: Arc<Mutex<(BigRational, BigRational)>>,
}

impl RealAlgebraic {
    /// `poly` must be squarefree and `(lo, hi)` must contain exactly one of
    /// its roots, with `poly(lo) != 0` and `poly(hi) != 0`.
    pub fn new(poly: Vec<BigInt>, lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo < hi);
        RealAlgebraic {
            poly: Arc::new(poly),
            iv: Arc::new(Mutex::new((lo, hi))),
        }
    }

    pub fn poly(&self) -> &[BigInt] {
        &self.poly
    }

    pub fn interval(&self) -> (BigRational, BigRational) {
        self.iv.lock().unwrap().clone()
    }

    /// Halves the isolating interval. Returns the exact value if the
    /// midpoint turns out to be the root.
    pub fn bisect(&self) -> Option<BigRational> {
        let mut guard = self.iv.lock().unwrap();
        let (lo, hi) = guard.clone();
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        let sm = realroot::sign_at_rational(&self.poly, &mid);
        if sm == 0 {
            // Keep the interval open: step a quarter inwards on both sides
            // until the endpoints are non-roots; the root stays the midpoint.
            let mut w = (&hi - &lo) / BigRational::from_integer(4.into());
            loop {
                let a = &mid - &w;
                let b = &mid + &w;
                if realroot::sign_at_rational(&self.poly, &a) != 0
                    && realroot::sign_at_rational(&self.poly, &b) != 0
                {
                    *guard = (a, b);
                    break;
                }
                w /= BigRational::from_integer(2.into());
            }
            return Some(mid);
        }
        let slo = realroot::sign_at_rational(&self.poly, &lo);
        if sm == slo {
            guard.0 = mid;
        } else {
            guard.1 = mid;
        }
        None
    }

    /// Refines until the interval width is at most `width`.
    pub fn refine_to(&self, width: &BigRational) {
        loop {
            let (lo, hi) = self.interval();
            if &(&hi - &lo) <= width {
                return;
            }
            self.bisect();
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.refine_to(&BigRational::new(BigInt::one(), BigInt::one() << 60));
        let (lo, hi) = self.interval();
        ((lo + hi) / BigRational::from_integer(2.into()))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    /// Root index of this number among the real roots of its polynomial.
    pub fn root_index(&self) -> usize {
        let (lo, _) = self.interval();
        let below = realroot::isolate(&self.poly)
            .expect("nonzero")
            .into_iter()
            .filter(|iv| iv.hi <= lo)
            .count();
        below + 1
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.interval();
        write!(f, "root of {:?} in ({lo}, {hi})", self.poly)
    }
}

/// One coordinate of a sample point.
#[derive(Debug, Clone)]
pub enum Coord {
    Rational(BigRational),
    Algebraic(RealAlgebraic),
}

impl Coord {
    pub fn from_int(x: i64) -> Coord {
        Coord::Rational(BigRational::from_integer(x.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coord::Rational(r) => Some(r),
            Coord::Algebraic(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coord::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Coord::Algebraic(a) => a.to_f64(),
        }
    }

    /// Squarefree integer polynomial having this coordinate as a root.
    pub fn annihilator(&self) -> Vec<BigInt> {
        match self {
            Coord::Rational(r) => vec![-r.numer().clone(), r.denom().clone()],
            Coord::Algebraic(a) => a.poly().to_vec(),
        }
    }

    fn bounds(&self) -> Interval {
        match self {
            Coord::Rational(r) => Interval::point(r.clone()),
            Coord::Algebraic(a) => {
                let (lo, hi) = a.interval();
                Interval::new(lo, hi)
            }
        }
    }

    fn refine_to(&self, width: &BigRational) -> Option<BigRational> {
        match self {
            Coord::Rational(_) => None,
            Coord::Algebraic(a) => loop {
                let (lo, hi) = a.interval();
                if &(&hi - &lo) <= width {
                    return None;
                }
                if let Some(r) = a.bisect() {
                    return Some(r);
                }
            },
        }
    }

    /// Builds a coordinate from a root interval of a squarefree polynomial.
    pub fn from_isolated(poly: &[BigInt], iv: &IsolatingInterval) -> Coord {
        if iv.is_point() {
            Coord::Rational(iv.lo.clone())
        } else {
            Coord::Algebraic(RealAlgebraic::new(poly.to_vec(), iv.lo.clone(), iv.hi.clone()))
        }
    }
}

/// Exact order of two real coordinates.
pub fn compare(a: &Coord, b: &Coord) -> Ordering {
    match (a, b) {
        (Coord::Rational(x), Coord::Rational(y)) => x.cmp(y),
        (Coord::Rational(x), Coord::Algebraic(y)) => compare_rat_alg(x, y),
        (Coord::Algebraic(x), Coord::Rational(y)) => compare_rat_alg(y, x).reverse(),
        (Coord::Algebraic(x), Coord::Algebraic(y)) => compare_alg(x, y),
    }
}

fn compare_rat_alg(r: &BigRational, a: &RealAlgebraic) -> Ordering {
    loop {
        let (lo, hi) = a.interval();
        if r <= &lo {
            return Ordering::Less;
        }
        if r >= &hi {
            return Ordering::Greater;
        }
        if realroot::sign_at_rational(a.poly(), r) == 0 {
            // r is the unique root inside the interval.
            return Ordering::Equal;
        }
        if let Some(v) = a.bisect() {
            return r.cmp(&v);
        }
    }
}

fn compare_alg(a: &RealAlgebraic, b: &RealAlgebraic) -> Ordering {
    if Arc::ptr_eq(&a.iv, &b.iv) {
        return Ordering::Equal;
    }
    let g = {
        let pa = Poly::from_univariate(1, 1, a.poly());
        let pb = Poly::from_univariate(1, 1, b.poly());
        gcd(&pa, &pb).to_univariate(1).unwrap_or_default()
    };
    let g_nontrivial = realroot::degree(&g).is_some_and(|d| d > 0);
    loop {
        let (alo, ahi) = a.interval();
        let (blo, bhi) = b.interval();
        if ahi <= blo {
            return Ordering::Less;
        }
        if bhi <= alo {
            return Ordering::Greater;
        }
        if g_nontrivial {
            let lo = if alo > blo { alo } else { blo };
            let hi = if ahi < bhi { ahi } else { bhi };
            // Endpoints are non-roots of both polynomials, hence of g.
            let slo = realroot::sign_at_rational(&g, &lo);
            let shi = realroot::sign_at_rational(&g, &hi);
            if slo * shi < 0 {
                return Ordering::Equal;
            }
        }
        let ra = a.bisect();
        let rb = b.bisect();
        match (ra, rb) {
            (Some(x), Some(y)) => return x.cmp(&y),
            (Some(x), None) => return compare_rat_alg(&x, b),
            (None, Some(y)) => return compare_rat_alg(&y, a).reverse(),
            (None, None) => {}
        }
    }
}

/// A point of `R^m` given coordinate by coordinate.
#[derive(Debug, Clone, Default)]
pub struct SamplePoint {
    pub coords: Vec<Coord>,
}

impl SamplePoint {
    pub fn new(coords: Vec<Coord>) -> Self {
        SamplePoint { coords }
    }

    pub fn rational(values: &[BigRational]) -> Self {
        SamplePoint {
            coords: values.iter().cloned().map(Coord::Rational).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn prefix(&self, m: usize) -> SamplePoint {
        SamplePoint {
            coords: self.coords[..m].to_vec(),
        }
    }

    pub fn push(&self, c: Coord) -> SamplePoint {
        let mut coords = self.coords.clone();
        coords.push(c);
        SamplePoint { coords }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Coord::to_f64).collect()
    }
}

/// A polynomial with the rational coordinates of a point substituted
/// (scaled by a positive constant) and the algebraic ones still symbolic.
#[derive(Debug, Clone)]
pub struct Specialized {
    pub poly: Poly,
    /// Variables bound to algebraic coordinates that still occur.
    pub algebraic_vars: Vec<usize>,
}

/// Substitutes the rational coordinates of `point` into `p`.
pub fn specialize(p: &Poly, point: &SamplePoint) -> Specialized {
    let mut q = p.clone();
    for (i, c) in point.coords.iter().enumerate() {
        if let Coord::Rational(r) = c {
            if q.involves(i + 1) {
                q = q.substitute_rational(i + 1, r);
            }
        }
    }
    let algebraic_vars = (1..=point.len())
        .filter(|&v| q.involves(v))
        .collect();
    Specialized {
        poly: q,
        algebraic_vars,
    }
}

fn int_sign(x: &BigInt) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Interval enclosure of `q` over the current coordinate boxes, rounded
/// outward to `prec` fractional bits.
fn enclose(q: &Poly, point: &SamplePoint, prec: u32) -> Interval {
    let boxes: Vec<Interval> = point.coords.iter().map(Coord::bounds).collect();
    let mut acc = Interval::point(BigRational::zero());
    for (m, c) in q.terms() {
        let mut t = Interval::point(BigRational::from_integer(c.clone()));
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                t = t.mul(&boxes[i].pow(e)).round_out(prec);
            }
        }
        acc = acc.add(&t).round_out(prec);
    }
    acc
}

fn refine_all(point: &SamplePoint, vars: &[usize], prec: u32) {
    let w = BigRational::new(BigInt::one(), BigInt::one() << prec as usize);
    for &v in vars {
        point.coords[v - 1].refine_to(&w);
    }
}

/// Exact sign of `p` at `point`.
pub fn sign_at(p: &Poly, point: &SamplePoint) -> i32 {
    assert!(
        p.level() <= point.len(),
        "polynomial of level {} at a point of dimension {}",
        p.level(),
        point.len()
    );
    let spec = specialize(p, point);
    let q = spec.poly;
    if q.is_constant() {
        return int_sign(&q.constant_value());
    }
    let vars = spec.algebraic_vars;
    if vars.len() == 1 {
        return sign_single(&q, vars[0], point);
    }
    for prec in [32u32, 64] {
        refine_all(point, &vars, prec);
        let iv = enclose(&q, point, prec + 8);
        if let Some(s) = iv.strict_sign() {
            return s;
        }
    }
    sign_exact(&q, &vars, point)
}

fn coord_alg(point: &SamplePoint, v: usize) -> &RealAlgebraic {
    match &point.coords[v - 1] {
        Coord::Algebraic(a) => a,
        Coord::Rational(_) => unreachable!("rational coordinates are substituted"),
    }
}

/// Sign of a polynomial in one algebraic coordinate.
fn sign_single(q: &Poly, v: usize, point: &SamplePoint) -> i32 {
    let a = coord_alg(point, v);
    let uq = q.to_univariate(v).expect("single variable");
    let g = {
        let pa = Poly::from_univariate(1, 1, a.poly());
        let pq = Poly::from_univariate(1, 1, &uq);
        gcd(&pa, &pq).to_univariate(1).unwrap_or_default()
    };
    if realroot::degree(&g).is_some_and(|d| d > 0) {
        let (lo, hi) = a.interval();
        let s = realroot::sign_at_rational(&g, &lo) * realroot::sign_at_rational(&g, &hi);
        if s < 0 {
            return 0;
        }
    }
    // Nonzero: refine until the enclosure excludes zero.
    let mut prec = 32u32;
    loop {
        if let Some(r) = point.coords[v - 1].refine_to(&BigRational::new(
            BigInt::one(),
            BigInt::one() << prec as usize,
        )) {
            return realroot::sign_at_rational(&uq, &r);
        }
        let iv = enclose(q, point, prec + 8);
        if let Some(s) = iv.strict_sign() {
            return s;
        }
        prec *= 2;
    }
}

/// Univariate polynomial (in a fresh variable `w`) vanishing at the value of
/// `q` at the point: iterated resultants of `w - q` with the annihilators of
/// the algebraic coordinates.
fn value_annihilator(q: &Poly, vars: &[usize], point: &SamplePoint) -> Vec<BigInt> {
    let n = q.nvars();
    let w = n + 1;
    let mut r = &Poly::var(n + 1, w) - &q.with_nvars(n + 1);
    for &v in vars.iter().rev() {
        let a = Poly::from_univariate(n + 1, v, coord_alg(point, v).poly());
        if r.involves(v) {
            r = resultant(&r, &a, v).expect("annihilator has positive degree");
        }
    }
    r.to_univariate(w).expect("only w remains")
}

fn sign_exact(q: &Poly, vars: &[usize], point: &SamplePoint) -> i32 {
    let ann = value_annihilator(q, vars, point);
    let lowest = ann.iter().position(|c| !c.is_zero()).expect("nonzero annihilator");
    let rest = &ann[lowest..];
    // Nonzero roots of the annihilator have modulus at least m.
    let b0 = rest[0].abs();
    let maxb = rest[1..].iter().map(|c| c.abs()).max().unwrap_or_default();
    let m = BigRational::new(b0.clone(), &b0 + &maxb);
    let may_vanish = lowest > 0;
    let mut prec = 64u32;
    loop {
        refine_all(point, vars, prec);
        let iv = enclose(q, point, prec + 8);
        if let Some(s) = iv.strict_sign() {
            return s;
        }
        if may_vanish && iv.lo > -m.clone() && iv.hi < m {
            return 0;
        }
        prec *= 2;
    }
}

/// Real roots in `x_{m+1}` of `p` over a point of dimension `m`, sorted.
pub fn isolate_over_point(p: &Poly, point: &SamplePoint) -> Result<Vec<Coord>, AlgError> {
    let m = point.len();
    let y = m + 1;
    assert!(p.level() <= y);
    let spec = specialize(p, point);
    let q = spec.poly;
    if spec.algebraic_vars.is_empty() {
        if q.is_zero() {
            return Err(AlgError::IdenticallyZero);
        }
        if !q.involves(y) {
            return Ok(vec![]);
        }
        let u = q.to_univariate(y).expect("univariate after substitution");
        let sf = realroot::squarefree(&u);
        let roots = realroot::isolate(&sf).expect("nonzero");
        return Ok(roots.iter().map(|iv| Coord::from_isolated(&sf, iv)).collect());
    }
    // Drop leading coefficients that vanish at the point.
    let mut coeffs = q.coefficients(y);
    while let Some(c) = coeffs.last() {
        if sign_at(c, point) == 0 {
            coeffs.pop();
        } else {
            break;
        }
    }
    if coeffs.is_empty() {
        return Err(AlgError::IdenticallyZero);
    }
    if coeffs.len() == 1 {
        return Ok(vec![]);
    }
    let q = Poly::from_coefficients(q.nvars(), y, &coeffs);
    let vars: Vec<usize> = (1..=m).filter(|&v| q.involves(v)).collect();
    let norm = norm_over(&q, &vars, point, y);
    let sf = realroot::squarefree(&norm);
    let candidates = realroot::isolate(&sf).expect("nonzero norm");
    let mut out = Vec::new();
    for iv in &candidates {
        let c = Coord::from_isolated(&sf, iv);
        let full = point.push(c.clone());
        if sign_at(&q, &full) == 0 {
            out.push(c);
        }
    }
    Ok(out)
}

/// Nonzero univariate polynomial in `y` vanishing at every root of `q` over
/// the point, by iterated resultants with the coordinate annihilators. When
/// a conjugate of the point nullifies `q`, the resultant is computed for
/// `q + w` and the lowest nonzero coefficient in `w` is taken.
fn norm_over(q: &Poly, vars: &[usize], point: &SamplePoint, y: usize) -> Vec<BigInt> {
    let n = q.nvars();
    let mut r = q.clone();
    let mut ok = true;
    for &v in vars.iter().rev() {
        let a = Poly::from_univariate(n, v, coord_alg(point, v).poly());
        if r.involves(v) {
            r = resultant(&r, &a, v).expect("annihilator has positive degree");
            if r.is_zero() {
                ok = false;
                break;
            }
        }
    }
    if ok {
        return r.to_univariate(y).expect("only y remains");
    }
    let w = n + 1;
    let mut r = &q.with_nvars(n + 1) + &Poly::var(n + 1, w);
    for &v in vars.iter().rev() {
        let a = Poly::from_univariate(n + 1, v, coord_alg(point, v).poly());
        if r.involves(v) {
            r = resultant(&r, &a, v).expect("annihilator has positive degree");
        }
    }
    let lowest = r
        .coefficients(w)
        .into_iter()
        .find(|c| !c.is_zero())
        .expect("nonzero in w");
    lowest.with_nvars(n).to_univariate(y).expect("only y remains")
}
