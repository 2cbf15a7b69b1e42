use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Closed interval with rational endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    pub fn pow(&self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(BigRational::one());
        }
        let a = num_traits::pow(self.lo.clone(), e as usize);
        let b = num_traits::pow(self.hi.clone(), e as usize);
        if e % 2 == 1 {
            return Interval { lo: a, hi: b };
        }
        if self.lo.is_negative() && self.hi.is_positive() {
            let hi = if a > b { a } else { b };
            return Interval {
                lo: BigRational::zero(),
                hi,
            };
        }
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Rounds outward to multiples of `2^-bits`.
    pub fn round_out(self, bits: u32) -> Interval {
        let scale = BigInt::one() << bits as usize;
        let q = BigRational::from_integer(scale.clone());
        let round = |x: &BigRational, up: bool| -> BigRational {
            if x.denom() <= &scale {
                return x.clone();
            }
            let y = x * &q;
            let n = if up { y.ceil() } else { y.floor() };
            n / &q
        };
        Interval {
            lo: round(&self.lo, false),
            hi: round(&self.hi, true),
        }
    }

    /// Sign shared by every point of the interval, if any is nonzero.
    pub fn strict_sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(0)
        } else {
            None
        }
    }
}
