//! Exact Gaussian-rational scalars: complex numbers with arbitrary-precision
//! rational real and imaginary parts. These are the coefficients of every
//! graded expression; no floating point appears anywhere in the engine.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;

/// Exact complex rational `re + im*i`; ordered lexicographically by
/// (re, im) so it can key deterministic containers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn zero() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        GaussRat {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussRat {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// Exact rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        GaussRat {
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

    /// True when the value is real (no imaginary part).
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re - &other.re,
            im: &self.im - &other.im,
        }
    }

    pub fn neg(&self) -> Self {
        GaussRat {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        GaussRat {
            re: &self.re * &other.re - &self.im * &other.im,
            im: &self.re * &other.im + &self.im * &other.re,
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        GaussRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let norm = &self.re * &self.re + &self.im * &self.im;
        GaussRat {
            re: &self.re / &norm,
            im: -(&self.im / &norm),
        }
    }

    /// Integer power (negative allowed, via `inv`).
    pub fn pow(&self, n: i64) -> Self {
        if n == 0 {
            return GaussRat::one();
        }
        let base = if n < 0 { self.inv() } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl GaussRat {
    /// Renders the scalar; `1`, `-1`, `i`, `-i`, `3/2`, `2*i`, `(1+2*i)`.
    pub fn display(&self) -> String {
        if self.im.is_zero() {
            return fmt_rat(&self.re);
        }
        if self.re.is_zero() {
            if self.im.is_one() {
                return "i".to_string();
            }
            if (-self.im.clone()).is_one() {
                return "-i".to_string();
            }
            return format!("{}*i", fmt_rat(&self.im));
        }
        let im_part = if self.im.is_one() {
            "+i".to_string()
        } else if (-self.im.clone()).is_one() {
            "-i".to_string()
        } else if self.im.is_positive() {
            format!("+{}*i", fmt_rat(&self.im))
        } else {
            format!("{}*i", fmt_rat(&self.im))
        };
        format!("({}{})", fmt_rat(&self.re), im_part)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRat::i();
        assert_eq!(i.mul(&i), GaussRat::from_int(-1));
    }

    #[test]
    fn inverse_is_exact() {
        let z = GaussRat {
            re: BigRational::new(BigInt::from(3), BigInt::from(2)),
            im: BigRational::new(BigInt::from(-1), BigInt::from(5)),
        };
        assert!(z.mul(&z.inv()).is_one());
    }

    #[test]
    fn integer_powers() {
        let z = GaussRat::i();
        assert_eq!(z.pow(4), GaussRat::one());
        assert_eq!(z.pow(-1), GaussRat::i().neg());
        assert_eq!(GaussRat::from_int(2).pow(-2), GaussRat::from_ratio(1, 4));
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::from_int(1).display(), "1");
        assert_eq!(GaussRat::i().display(), "i");
        assert_eq!(GaussRat::i().neg().display(), "-i");
        assert_eq!(GaussRat::from_ratio(3, 2).display(), "3/2");
        let z = GaussRat::from_int(1).add(&GaussRat::i().mul(&GaussRat::from_int(2)));
        assert_eq!(z.display(), "(1+2*i)");
    }
}
