use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact Gaussian rational `re + im i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    pub re: BigRational,
    pub im: BigRational,
}

impl Coeff {
    pub fn zero() -> Self {
        Coeff {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Coeff::int(1)
    }

    pub fn int(n: i64) -> Self {
        Coeff {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// `p/q`; panics when `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        Coeff {
            re: BigRational::new(BigInt::from(p), BigInt::from(q)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        Coeff {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn real(re: BigRational) -> Self {
        Coeff {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as an `i64` if it is a real integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        (self.is_real() && self.re.is_integer()).then(|| self.re.to_integer().to_i64()).flatten()
    }

    pub fn conj(&self) -> Self {
        Coeff {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Coeff {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        })
    }

    pub fn factorial(n: usize) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= BigInt::from(k);
        }
        Coeff::real(BigRational::from_integer(acc))
    }

    /// Renders with the sign split off: `(negative, magnitude)`.
    /// Complex values with both parts nonzero keep their sign inside parentheses.
    pub(crate) fn split_sign(&self) -> (bool, String) {
        if self.im.is_zero() {
            (self.re.is_negative(), fmt_rat(&self.re.abs()))
        } else if self.re.is_zero() {
            let mag = self.im.abs();
            let s = if mag.is_one() { "i".to_string() } else { format!("{}*i", fmt_rat(&mag)) };
            (self.im.is_negative(), s)
        } else {
            let sign = if self.im.is_negative() { "-" } else { "+" };
            let mag = self.im.abs();
            let im = if mag.is_one() { "i".to_string() } else { format!("{}*i", fmt_rat(&mag)) };
            (false, format!("({}{}{})", fmt_rat(&self.re), sign, im))
        }
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (neg, mag) = self.split_sign();
        if neg {
            write!(f, "-{mag}")
        } else {
            write!(f, "{mag}")
        }
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Self {
        Coeff::int(n)
    }
}

impl From<BigRational> for Coeff {
    fn from(r: BigRational) -> Self {
        Coeff::real(r)
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        &self + &o
    }
}

impl AddAssign<&Coeff> for Coeff {
    fn add_assign(&mut self, o: &Coeff) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        &self - &o
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        if self.im.is_zero() && o.im.is_zero() {
            return Coeff::real(&self.re * &o.re);
        }
        Coeff {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        &self * &o
    }
}

impl Div for &Coeff {
    type Output = Coeff;
    fn div(self, o: &Coeff) -> Coeff {
        self * &o.recip().expect("division by zero coefficient")
    }
}

impl Div for Coeff {
    type Output = Coeff;
    fn div(self, o: Coeff) -> Coeff {
        &self / &o
    }
}

macro_rules! mixed_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<&Coeff> for Coeff {
            type Output = Coeff;
            fn $f(self, o: &Coeff) -> Coeff {
                (&self).$f(o)
            }
        }
        impl $tr<Coeff> for &Coeff {
            type Output = Coeff;
            fn $f(self, o: Coeff) -> Coeff {
                self.$f(&o)
            }
        }
    )*};
}

mixed_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -self.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_arithmetic() {
        let z = Coeff::int(1) + Coeff::i();
        let w = &z * &z.conj();
        assert_eq!(w, Coeff::int(2));
        assert_eq!(&z * &z.recip().unwrap(), Coeff::one());
        assert_eq!(Coeff::i() * Coeff::i(), Coeff::int(-1));
    }

    #[test]
    fn display() {
        assert_eq!(Coeff::ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(Coeff::i().to_string(), "i");
        assert_eq!((Coeff::int(1) - Coeff::int(2) * Coeff::i()).to_string(), "(1-2*i)");
        assert_eq!(Coeff::factorial(5), Coeff::int(120));
    }
}
