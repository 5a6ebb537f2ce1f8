use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A bidegree `(h, v)`: horizontal and vertical components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Bidegree {
    pub h: i32,
    pub v: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { h: 0, v: 0 };

    pub const fn new(h: i32, v: i32) -> Self {
        Bidegree { h, v }
    }

    pub fn hbit(self) -> u8 {
        self.h.rem_euclid(2) as u8
    }

    pub fn vbit(self) -> u8 {
        self.v.rem_euclid(2) as u8
    }

    /// Total parity `(h + v) mod 2`.
    pub fn parity(self) -> u8 {
        (self.h + self.v).rem_euclid(2) as u8
    }

    /// Componentwise dot product `h h' + v v'`.
    pub fn dot(self, other: Bidegree) -> i32 {
        self.h * other.h + self.v * other.v
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.h + o.h, self.v + o.v)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.h - o.h, self.v - o.v)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.h, -self.v)
    }
}

impl Mul<i32> for Bidegree {
    type Output = Bidegree;
    fn mul(self, k: i32) -> Bidegree {
        Bidegree::new(self.h * k, self.v * k)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.h, self.v)
    }
}

/// Which sign rule governs commutation of bigraded elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Convention {
    /// `ab = (-1)^{hh' + vv'} ba`.
    #[default]
    First,
    /// `ab = (-1)^{(h+v)(h'+v')} ba`.
    Second,
}

impl Convention {
    /// True when swapping elements of degrees `a` and `b` costs a sign.
    pub fn odd(self, a: Bidegree, b: Bidegree) -> bool {
        self.odd_bits((a.hbit(), a.vbit()), (b.hbit(), b.vbit()))
    }

    #[inline]
    pub(crate) fn odd_bits(self, a: (u8, u8), b: (u8, u8)) -> bool {
        match self {
            Convention::First => ((a.0 & b.0) ^ (a.1 & b.1)) == 1,
            Convention::Second => ((a.0 ^ a.1) & (b.0 ^ b.1)) == 1,
        }
    }

    pub fn other(self) -> Convention {
        match self {
            Convention::First => Convention::Second,
            Convention::Second => Convention::First,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::First => "first",
            Convention::Second => "second",
        }
    }
}
