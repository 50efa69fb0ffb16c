//! Exact arithmetic in `Q(w)` for `w` a primitive cube root of unity,
//! i.e. pairs `a + c*w` of rationals with `w^2 = -1 - w`.
//!
//! This is all the character theory of `G_n` needs: linear characters take
//! values in `{1, w, w^2}` and everything else is rational.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Cyclotomic {
    a: BigRational,
    c: BigRational,
}

impl Cyclotomic {
    pub fn new(a: BigRational, c: BigRational) -> Self {
        Cyclotomic { a, c }
    }

    pub fn zero() -> Self {
        Cyclotomic { a: BigRational::zero(), c: BigRational::zero() }
    }

    pub fn one() -> Self {
        Cyclotomic { a: BigRational::one(), c: BigRational::zero() }
    }

    pub fn omega() -> Self {
        Cyclotomic { a: BigRational::zero(), c: BigRational::one() }
    }

    /// `w^k` for any integer `k`; `w^2` is stored as `-1 - w`.
    pub fn omega_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::omega(),
            _ => Cyclotomic {
                a: -BigRational::one(),
                c: -BigRational::one(),
            },
        }
    }

    pub fn from_integer(v: i64) -> Self {
        Cyclotomic { a: BigRational::from_integer(BigInt::from(v)), c: BigRational::zero() }
    }

    pub fn from_rational(a: BigRational) -> Self {
        Cyclotomic { a, c: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.c.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.c.is_zero()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.c.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn omega_part(&self) -> &BigRational {
        &self.c
    }

    /// Complex conjugation, i.e. the Galois twist `w -> w^2`.
    pub fn conj(&self) -> Self {
        Cyclotomic { a: &self.a - &self.c, c: -self.c.clone() }
    }

    /// Trace to `Q`: `x + conj(x) = 2a - c`.
    pub fn trace(&self) -> BigRational {
        &self.a + &self.a - &self.c
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        Cyclotomic { a: self.a + rhs.a, c: self.c + rhs.c }
    }
}

impl AddAssign for Cyclotomic {
    fn add_assign(&mut self, rhs: Cyclotomic) {
        self.a += rhs.a;
        self.c += rhs.c;
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        Cyclotomic { a: self.a - rhs.a, c: self.c - rhs.c }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { a: -self.a, c: -self.c }
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    /// `(a1 + c1 w)(a2 + c2 w) = (a1 a2 - c1 c2) + (a1 c2 + a2 c1 - c1 c2) w`.
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        let cc = &self.c * &rhs.c;
        Cyclotomic {
            a: &self.a * &rhs.a - &cc,
            c: &self.a * &rhs.c + &self.c * &rhs.a - &cc,
        }
    }
}

impl Mul<&BigRational> for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &BigRational) -> Cyclotomic {
        Cyclotomic { a: self.a * rhs, c: self.c * rhs }
    }
}

impl fmt::Display for Cyclotomic {
    /// `a`, `c*w` or `a+c*w` (with a proper minus sign), e.g. `-1-w`, `3`, `w`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn coeff_w(c: &BigRational) -> String {
            if c.abs().is_one() {
                "w".to_string()
            } else {
                format!("{}*w", c.abs())
            }
        }
        if self.c.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            let sign = if self.c.is_negative() { "-" } else { "" };
            return write!(f, "{}{}", sign, coeff_w(&self.c));
        }
        let sign = if self.c.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}", self.a, sign, coeff_w(&self.c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_a_cube_root() {
        let w = Cyclotomic::omega();
        assert_eq!(w.clone() * w.clone() * w.clone(), Cyclotomic::one());
        assert_eq!(w.clone() * w.clone(), Cyclotomic::omega_pow(2));
        // 1 + w + w^2 = 0
        let sum = Cyclotomic::one() + w.clone() + Cyclotomic::omega_pow(2);
        assert!(sum.is_zero());
    }

    #[test]
    fn conjugation_and_trace() {
        let w = Cyclotomic::omega();
        assert_eq!(w.conj(), Cyclotomic::omega_pow(2));
        // |w|^2 = w * conj(w) = 1
        assert_eq!(w.clone() * w.conj(), Cyclotomic::one());
        assert_eq!(w.trace(), BigRational::from_integer((-1).into()));
        assert_eq!(Cyclotomic::from_integer(3).trace(), BigRational::from_integer(6.into()));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Cyclotomic::from_integer(3).to_string(), "3");
        assert_eq!(Cyclotomic::omega().to_string(), "w");
        assert_eq!(Cyclotomic::omega_pow(2).to_string(), "-1-w");
        assert_eq!((Cyclotomic::omega() + Cyclotomic::omega()).to_string(), "2*w");
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(Cyclotomic::new(half.clone(), half).to_string(), "1/2+1/2*w");
    }
}
