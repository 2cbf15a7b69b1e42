//! Sparse multivariate polynomials with exact integer coefficients.
//!
//! Variables are indexed `1..=nvars` following the global ordering
//! `x_1 < x_2 < ... < x_n`; `x_n` is the first variable eliminated by
//! projection. Terms are kept in a map ordered lexicographically with the
//! highest variable most significant, so the last entry of the map is the
//! leading term.

mod basis;
mod division;
mod elim;
mod gcd;
mod resultant;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use basis::{finest_squarefree_basis, split_monomial_factors, NormalizedFactor};
pub(crate) use basis::radical;
pub use elim::{eliminate, univariate_eliminant};
pub use gcd::{content_primitive, gcd, is_coprime, squarefree_part, yun_layers};
pub use resultant::{discriminant, resultant};

/// Default per-variable degree cap.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("degree {degree} in x{var} exceeds the configured cap {cap}")]
    DegreeCapExceeded { var: usize, degree: u32, cap: u32 },
    #[error("zero polynomial where a nonzero one is required")]
    ZeroPolynomial,
    #[error("neither operand involves x{0}")]
    BothConstantInVar(usize),
    #[error("degree in x{var} is {degree}, at least 2 is required")]
    DegreeTooLow { var: usize, degree: u32 },
}

/// A variable of the global ordering, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub usize);

impl Var {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Exponent vector `[e_1, ..., e_n]`.
///
/// Ordered lexicographically from the highest variable downwards.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn exp(&self, var: usize) -> u32 {
        self.0[var - 1]
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn level(&self) -> usize {
        self.0.iter().rposition(|&e| e > 0).map_or(0, |i| i + 1)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().rev().zip(other.0.iter().rev()) {
            match a.cmp(b) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

/// Sparse multivariate polynomial over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
    level: usize,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
            level: 0,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(nvars), c);
        }
        Poly {
            nvars,
            terms,
            level: 0,
        }
    }

    /// The polynomial `x_var`.
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(var >= 1 && var <= nvars, "variable x{var} out of range");
        let mut m = Monomial::one(nvars);
        m.0[var - 1] = 1;
        Self::from_terms(nvars, [(m, BigInt::one())])
    }

    pub fn monomial(nvars: usize, exps: Vec<u32>, c: impl Into<BigInt>) -> Self {
        assert_eq!(exps.len(), nvars);
        Self::from_terms(nvars, [(Monomial(exps), c.into())])
    }

    /// Builds a polynomial from terms, combining duplicates and dropping zeros.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            debug_assert_eq!(m.0.len(), nvars);
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Self::from_map(nvars, map)
    }

    fn from_map(nvars: usize, terms: BTreeMap<Monomial, BigInt>) -> Self {
        let level = terms.keys().map(Monomial::level).max().unwrap_or(0);
        Poly {
            nvars,
            terms,
            level,
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.level == 0
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_value().is_one()
    }

    /// Value of a constant polynomial (zero for the zero polynomial).
    pub fn constant_value(&self) -> BigInt {
        debug_assert!(self.is_constant());
        self.terms.values().next().cloned().unwrap_or_default()
    }

    /// Highest variable index with positive degree, 0 for constants.
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn degree(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.exp(var)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exp(var) > 0)
    }

    /// Variables that occur with positive degree.
    pub fn variables(&self) -> Vec<usize> {
        (1..=self.nvars).filter(|&v| self.involves(v)).collect()
    }

    /// Leading term under the lexicographic order with `x_n` most significant.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> BigInt {
        self.leading_term().map(|(_, c)| c.clone()).unwrap_or_default()
    }

    /// Sign of the leading integer coefficient (0 for the zero polynomial).
    pub fn leading_sign(&self) -> i32 {
        match self.leading_term() {
            None => 0,
            Some((_, c)) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }

    /// Coefficients with respect to `var`; entry `i` multiplies `var^i`.
    pub fn coefficients(&self, var: usize) -> Vec<Poly> {
        let d = self.degree(var) as usize;
        let mut buckets: Vec<BTreeMap<Monomial, BigInt>> = vec![BTreeMap::new(); d + 1];
        for (m, c) in &self.terms {
            let e = m.exp(var) as usize;
            let mut m2 = m.clone();
            m2.0[var - 1] = 0;
            buckets[e].insert(m2, c.clone());
        }
        buckets
            .into_iter()
            .map(|t| Self::from_map(self.nvars, t))
            .collect()
    }

    /// Inverse of [`Poly::coefficients`].
    pub fn from_coefficients(nvars: usize, var: usize, coeffs: &[Poly]) -> Self {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                debug_assert_eq!(m2.0[var - 1], 0);
                m2.0[var - 1] = i as u32;
                map.insert(m2, a.clone());
            }
        }
        Self::from_map(nvars, map)
    }

    /// Leading coefficient with respect to `var` (a polynomial free of `var`).
    pub fn leading_coeff_in(&self, var: usize) -> Poly {
        self.coefficients(var).pop().unwrap_or_else(|| Poly::zero(self.nvars))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (m.clone(), a * c))
            .collect();
        Self::from_map(self.nvars, terms)
    }

    /// Multiplies by the monomial `c * x^m`.
    pub fn mul_term(&self, m: &Monomial, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        let terms = self.terms.iter().map(|(k, a)| (k * m, a * c)).collect();
        Self::from_map(self.nvars, terms)
    }

    /// Exact division of every coefficient by an integer. Panics if inexact.
    pub fn div_integer(&self, c: &BigInt) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| {
                let (q, r) = a.div_rem(c);
                assert!(r.is_zero(), "inexact integer division");
                (m.clone(), q)
            })
            .collect();
        Self::from_map(self.nvars, terms)
    }

    /// Nonnegative gcd of the integer coefficients.
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divides out the integer content and makes the leading coefficient positive.
    pub fn normalize_integer(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.integer_content();
        if self.leading_sign() < 0 {
            g = -g;
        }
        self.div_integer(&g)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Multiplication refusing results whose degree in some variable exceeds `cap`.
    pub fn checked_mul(&self, other: &Poly, cap: u32) -> Result<Poly, PolyError> {
        for v in 1..=self.nvars {
            let d = self.degree(v) + other.degree(v);
            if d > cap {
                return Err(PolyError::DegreeCapExceeded {
                    var: v,
                    degree: d,
                    cap,
                });
            }
        }
        Ok(self * other)
    }

    pub fn checked_pow(&self, e: u32, cap: u32) -> Result<Poly, PolyError> {
        self.check_cap(cap)?;
        for v in 1..=self.nvars {
            let d = self.degree(v).saturating_mul(e);
            if d > cap {
                return Err(PolyError::DegreeCapExceeded {
                    var: v,
                    degree: d,
                    cap,
                });
            }
        }
        Ok(self.pow(e))
    }

    pub fn check_cap(&self, cap: u32) -> Result<(), PolyError> {
        for v in 1..=self.nvars {
            let d = self.degree(v);
            if d > cap {
                return Err(PolyError::DegreeCapExceeded {
                    var: v,
                    degree: d,
                    cap,
                });
            }
        }
        Ok(())
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: usize) -> Poly {
        let terms = self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(var);
            if e == 0 {
                return None;
            }
            let mut m2 = m.clone();
            m2.0[var - 1] = e - 1;
            Some((m2, c * BigInt::from(e)))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Substitutes an integer for `var`.
    pub fn substitute_int(&self, var: usize, value: &BigInt) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(var);
            let mut m2 = m.clone();
            m2.0[var - 1] = 0;
            (m2, c * num_traits::pow(value.clone(), e as usize))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Substitutes `var = p/q` and clears the denominator by multiplying by
    /// `q^deg_var`. The result differs from the true specialization by a
    /// positive factor, so signs and zero sets are preserved.
    pub fn substitute_rational(&self, var: usize, value: &BigRational) -> Poly {
        if value.denom().is_one() {
            return self.substitute_int(var, value.numer());
        }
        let d = self.degree(var) as usize;
        let p = value.numer();
        let q = value.denom();
        let ppow: Vec<BigInt> = powers(p, d);
        let qpow: Vec<BigInt> = powers(q, d);
        let terms = self.terms.iter().map(|(m, c)| {
            let e = m.exp(var) as usize;
            let mut m2 = m.clone();
            m2.0[var - 1] = 0;
            (m2, c * &ppow[e] * &qpow[d - e])
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact rational value of the polynomial at a full rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = BigRational::from_integer(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Floating point value, for diagnostics and tolerance tests only.
    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        use num_traits::ToPrimitive;
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = c.to_f64().unwrap_or(f64::NAN);
                for (i, &e) in m.0.iter().enumerate() {
                    if e > 0 {
                        t *= point[i].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Re-embeds the polynomial into a ring with `nvars` variables. Dropped
    /// variables must not occur.
    pub fn with_nvars(&self, nvars: usize) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            if nvars < e.len() {
                debug_assert!(e[nvars..].iter().all(|&x| x == 0));
            }
            e.resize(nvars, 0);
            (Monomial(e), c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Dense integer coefficients if the polynomial involves at most `var`.
    pub fn to_univariate(&self, var: usize) -> Option<Vec<BigInt>> {
        if self.variables().iter().any(|&v| v != var) {
            return None;
        }
        let d = self.degree(var) as usize;
        let mut out = vec![BigInt::zero(); d + 1];
        for (m, c) in &self.terms {
            out[m.exp(var) as usize] = c.clone();
        }
        Some(out)
    }

    pub fn from_univariate(nvars: usize, var: usize, coeffs: &[BigInt]) -> Poly {
        let terms = coeffs.iter().enumerate().map(|(i, c)| {
            let mut m = Monomial::one(nvars);
            m.0[var - 1] = i as u32;
            (m, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    /// Canonical sparse text using the given variable names: terms in
    /// decreasing order, explicit coefficients, `*` between factors.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&c.abs().to_string());
            for (vi, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                out.push('*');
                match names.get(vi) {
                    Some(name) => out.push_str(name),
                    None => out.push_str(&format!("x{}", vi + 1)),
                }
                if e > 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
        out
    }

    /// Deterministic ordering used for canonical sets: level, total degree,
    /// number of terms, then the term sequence itself.
    pub fn canonical_cmp(&self, other: &Poly) -> Ordering {
        self.level
            .cmp(&other.level)
            .then(self.total_degree().cmp(&other.total_degree()))
            .then(self.nterms().cmp(&other.nterms()))
            .then_with(|| {
                let a = self.terms.iter().rev();
                let b = other.terms.iter().rev();
                for ((ma, ca), (mb, cb)) in a.zip(b) {
                    let o = ma.cmp(mb).then(ca.cmp(cb));
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            })
    }
}

fn powers(base: &BigInt, d: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(d + 1);
    let mut acc = BigInt::one();
    for _ in 0..=d {
        out.push(acc.clone());
        acc *= base;
    }
    out
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&[]))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text(&[]))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Poly::from_map(self.nvars, terms)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.entry(m.clone()) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(-c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() -= c;
                    if e.get().is_zero() {
                        e.remove();
                    }
                }
            }
        }
        Poly::from_map(self.nvars, terms)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "variable count mismatch");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.nvars);
        }
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma * mb;
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Poly::from_map(self.nvars, acc)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        Poly::from_map(self.nvars, terms)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &Poly) -> Poly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Arithmetic dispatcher mirroring the kernel's operation table.
pub enum ArithOp<'a> {
    Add(&'a Poly),
    Sub(&'a Poly),
    Mul(&'a Poly),
    Pow(u32),
}

/// Applies an arithmetic operation under a degree cap.
pub fn arith(a: &Poly, op: ArithOp<'_>, cap: u32) -> Result<Poly, PolyError> {
    let out = match op {
        ArithOp::Add(b) => a + b,
        ArithOp::Sub(b) => a - b,
        ArithOp::Mul(b) => a.checked_mul(b, cap)?,
        ArithOp::Pow(e) => a.checked_pow(e, cap)?,
    };
    out.check_cap(cap)?;
    Ok(out)
}

/// Quotient of an exact division, or `None` when `b` does not divide `a`.
pub fn exact_divide(a: &Poly, b: &Poly) -> Option<Poly> {
    division::exact_divide(a, b)
}
