//! Closed intervals with exact rational endpoints.

use std::fmt;

use num_traits::Signed;

use super::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(v: Q) -> Self {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn width(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Q) -> bool {
        self.lo <= *v && *v <= self.hi
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        Interval { lo, hi }
    }

    /// Largest absolute value in the interval.
    pub fn abs_hi(&self) -> Q {
        self.lo.abs().max(self.hi.abs())
    }

    /// Largest distance from `v` to a point of the interval.
    pub fn dist_hi(&self, v: &Q) -> Q {
        (v - &self.lo).abs().max((v - &self.hi).abs())
    }

    /// Smallest distance from `v` to a point of the interval.
    pub fn dist_lo(&self, v: &Q) -> Q {
        if self.contains(v) {
            Q::from_integer(0.into())
        } else {
            (v - &self.lo).abs().min((v - &self.hi).abs())
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
