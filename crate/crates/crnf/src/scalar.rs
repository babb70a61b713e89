//! Exact complex scalars over the rationals.
//!
//! [`ExactScalar`] is the coefficient field for everything in this crate:
//! a complex number whose real and imaginary parts are arbitrary-precision
//! rationals. Invariants:
//!
//! - arithmetic is exact; no operation ever rounds
//! - parts are stored reduced with positive denominator (the representation
//!   is canonical, so `==` is semantic equality)

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    /// Builds a scalar from rational parts.
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    /// Additive identity.
    pub fn zero() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    /// Multiplicative identity.
    pub fn one() -> Self {
        ExactScalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    /// Real integer scalar.
    pub fn from_int(v: i64) -> Self {
        ExactScalar {
            re: BigRational::from_integer(BigInt::from(v)),
            im: BigRational::zero(),
        }
    }

    /// Real rational scalar `num/den`. Panics if `den` is zero.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ExactScalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    /// Gaussian rational from four integers: `nre/dre + (nim/dim) i`.
    pub fn from_parts(nre: i64, dre: i64, nim: i64, dim: i64) -> Self {
        ExactScalar {
            re: BigRational::new(BigInt::from(nre), BigInt::from(dre)),
            im: BigRational::new(BigInt::from(nim), BigInt::from(dim)),
        }
    }

    /// Real scalar from a rational.
    pub fn from_rational(re: BigRational) -> Self {
        ExactScalar {
            re,
            im: BigRational::zero(),
        }
    }

    /// Real part.
    pub fn re(&self) -> &BigRational {
        &self.re
    }

    /// Imaginary part.
    pub fn im(&self) -> &BigRational {
        &self.im
    }

    /// True iff both parts vanish.
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// True iff the imaginary part vanishes.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// Squared modulus, an exact nonnegative rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero scalar");
        ExactScalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = ExactScalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales by an exact rational.
    pub fn scale_rat(&self, r: &BigRational) -> Self {
        ExactScalar {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for &ExactScalar {
    type Output = ExactScalar;
    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self * &rhs.recip()
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let write_im = |f: &mut fmt::Formatter<'_>, im: &BigRational| -> fmt::Result {
            if im == &BigRational::one() {
                write!(f, "i")
            } else if -im == BigRational::one() {
                write!(f, "-i")
            } else {
                write!(f, "{}*i", im)
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write_im(f, &self.im)
        } else if self.im.is_negative() {
            write!(f, "{} - ", self.re)?;
            write_im(f, &-&self.im)
        } else {
            write!(f, "{} + ", self.re)?;
            write_im(f, &self.im)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn field_ops_are_exact() {
        let a = ExactScalar::from_parts(1, 3, 1, 2);
        let b = ExactScalar::from_parts(-2, 5, 3, 7);
        let sum = &a + &b;
        assert_eq!(sum.re(), &q(-1, 15));
        assert_eq!(sum.im(), &q(13, 14));
        let prod = &a * &b;
        // (1/3 + i/2)(-2/5 + 3i/7) = (1/3)(-2/5) - (1/2)(3/7) + i[(1/3)(3/7) + (1/2)(-2/5)]
        assert_eq!(prod.re(), &(q(-2, 15) - q(3, 14)));
        assert_eq!(prod.im(), &(q(1, 7) - q(1, 5)));
    }

    #[test]
    fn division_round_trips() {
        let a = ExactScalar::from_parts(3, 4, -5, 6);
        let b = ExactScalar::from_parts(1, 2, 7, 3);
        assert_eq!(&(&a / &b) * &b, a);
    }

    #[test]
    fn conjugation_and_norm() {
        let a = ExactScalar::from_parts(2, 1, -3, 1);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(&a * &a.conj(), ExactScalar::from_rational(a.norm_sqr()));
        assert_eq!(a.norm_sqr(), q(13, 1));
    }

    #[test]
    fn powers_of_i_cycle() {
        let i = ExactScalar::i();
        assert_eq!(i.pow(2), ExactScalar::from_int(-1));
        assert_eq!(i.pow(3), -ExactScalar::i());
        assert_eq!(i.pow(4), ExactScalar::one());
        assert_eq!(i.pow(0), ExactScalar::one());
    }

    #[test]
    fn display_is_compact() {
        assert_eq!(ExactScalar::zero().to_string(), "0");
        assert_eq!(ExactScalar::from_ratio(3, 2).to_string(), "3/2");
        assert_eq!(ExactScalar::i().to_string(), "i");
        assert_eq!((-ExactScalar::i()).to_string(), "-i");
        assert_eq!(ExactScalar::from_parts(1, 2, -3, 4).to_string(), "1/2 - 3/4*i");
    }
}
