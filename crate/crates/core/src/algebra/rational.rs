use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{Polynomial, Q};
use super::space::{same_space, VariableSpace};
use crate::error::{Error, Result};

/// Reduced quotient of polynomials. The denominator is monic and coprime
/// to the numerator; zero is `0/1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if !same_space(num.space(), den.space()) {
            return Err(Error::SpaceMismatch);
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    /// For a numerator and denominator known to share no factor: skips the
    /// gcd and only normalizes the denominator's leading coefficient.
    pub fn from_coprime(num: Polynomial, den: Polynomial) -> Result<Self> {
        if !same_space(num.space(), den.space()) {
            return Err(Error::SpaceMismatch);
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() || den.is_constant() {
            return Ok(Self::reduce(num, den));
        }
        let inv = den.leading_coefficient().recip();
        Ok(Self {
            num: num.scale(&inv),
            den: den.scale(&inv),
        })
    }

    fn reduce(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            let one = Polynomial::one(num.space());
            return Self { num, den: one };
        }
        if let Some(c) = den.constant_value() {
            let num = num.scale(&c.recip());
            let den = Polynomial::one(num.space());
            return Self { num, den };
        }
        if let Some(q) = num.div_exact(&den) {
            let one = Polynomial::one(num.space());
            return Self { num: q, den: one };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.space());
        Self { num: p, den: one }
    }

    pub fn zero(space: &Arc<VariableSpace>) -> Self {
        Self::from_poly(Polynomial::zero(space))
    }

    pub fn one(space: &Arc<VariableSpace>) -> Self {
        Self::from_poly(Polynomial::one(space))
    }

    pub fn constant(space: &Arc<VariableSpace>, c: Q) -> Self {
        Self::from_poly(Polynomial::constant(space, c))
    }

    pub fn space(&self) -> &Arc<VariableSpace> {
        self.num.space()
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn into_parts(self) -> (Polynomial, Polynomial) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_polynomial() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        Ok(self * other)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let inv = other.inv()?;
        Ok(self * &inv)
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if same_space(self.space(), other.space()) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let lc = self.num.leading_coefficient().recip();
        Ok(Self {
            num: self.den.scale(&lc),
            den: self.num.scale(&lc),
        })
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero(self.space());
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(&self.num * p);
        }
        self * &Self::from_poly(p.clone())
    }

    pub fn div_poly(&self, p: &Polynomial) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.clone(), &self.den * p)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        if e >= 0 {
            Ok(Self {
                num: self.num.pow(e as u32),
                den: self.den.pow(e as u32),
            }
            .renormalize_sign())
        } else {
            self.inv()?.pow(-e)
        }
    }

    fn renormalize_sign(self) -> Self {
        if self.num.is_zero() {
            return Self::zero(self.space());
        }
        self
    }

    pub fn derivative(&self, v: usize) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(self.num.derivative(v));
        }
        let n = &(&self.num.derivative(v) * &self.den) - &(&self.num * &self.den.derivative(v));
        Self::reduce(n, &self.den * &self.den)
    }

    pub fn reembed(&self, target: &Arc<VariableSpace>) -> Result<Self> {
        Ok(Self {
            num: self.num.reembed(target)?,
            den: self.den.reembed(target)?,
        })
    }

    /// Squarefree part of the denominator, used to name a pole.
    pub fn pole_locus(&self) -> Polynomial {
        squarefree(&self.den)
    }
}

pub fn squarefree(p: &Polynomial) -> Polynomial {
    if p.is_constant() {
        return Polynomial::one(p.space());
    }
    let used = p.vars_used();
    let mut g = p.clone();
    for (v, u) in used.iter().enumerate() {
        if *u {
            g = gcd(&g, &p.derivative(v));
        }
    }
    p.div_exact(&g).expect("gcd divides").monic()
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RationalFunction::reduce(&self.num + &rhs.num, self.den.clone());
        }
        if self.is_polynomial() {
            let num = &(&self.num * &rhs.den) + &rhs.num;
            return RationalFunction::reduce_coprime(num, rhs.den.clone());
        }
        if rhs.is_polynomial() {
            let num = &self.num + &(&rhs.num * &self.den);
            return RationalFunction::reduce_coprime(num, self.den.clone());
        }
        let g = gcd(&self.den, &rhs.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = rhs.den.div_exact(&g).expect("gcd divides");
        let num = &(&self.num * &d1) + &(&rhs.num * &b1);
        let den = &b1 * &rhs.den;
        if g.is_one() {
            return RationalFunction::reduce_coprime(num, den);
        }
        // b1 and d1 are coprime and each is coprime to its numerator, so
        // only factors of g can cancel.
        let c = gcd(&num, &g);
        if c.is_one() {
            RationalFunction::reduce_coprime(num, den)
        } else {
            RationalFunction::reduce_coprime(
                num.div_exact(&c).expect("gcd divides"),
                den.div_exact(&c).expect("gcd divides"),
            )
        }
    }
}

impl RationalFunction {
    /// Already coprime; only fix up zero and the monic normalization.
    fn reduce_coprime(num: Polynomial, den: Polynomial) -> Self {
        if num.is_zero() {
            return Self::zero(num.space());
        }
        let lc = den.leading_coefficient();
        if lc.is_one() {
            Self { num, den }
        } else {
            let inv = lc.recip();
            Self {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.is_zero() || rhs.is_zero() {
            return RationalFunction::zero(self.space());
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RationalFunction::from_poly(&self.num * &rhs.num);
        }
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let a = self.num.div_exact(&g1).expect("gcd divides");
        let d = rhs.den.div_exact(&g1).expect("gcd divides");
        let c = rhs.num.div_exact(&g2).expect("gcd divides");
        let b = self.den.div_exact(&g2).expect("gcd divides");
        RationalFunction::reduce_coprime(&a * &c, &b * &d)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a RationalFunction> for RationalFunction {
            type Output = RationalFunction;
            fn $f(self, rhs: &'a RationalFunction) -> RationalFunction {
                (&self).$f(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Polynomial> for RationalFunction {
    fn from(p: Polynomial) -> Self {
        Self::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_common_factor() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let a = Polynomial::var(&s, 0);
        let h = Polynomial::var(&s, 1);
        let r = RationalFunction::new(&(&a * &a) - &(&h * &h), &a + &h).unwrap();
        assert!(r.is_polynomial());
        assert_eq!(r.to_string(), "a1 - h");
    }

    #[test]
    fn zero_denominator_rejected() {
        let s = VariableSpace::standard(1, 0, &[]).unwrap();
        let err = RationalFunction::new(Polynomial::one(&s), Polynomial::zero(&s));
        assert_eq!(err, Err(Error::ZeroDenominator));
        assert_eq!(err.unwrap_err().to_string(), "zero denominator");
    }

    #[test]
    fn monic_denominator() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let a1 = Polynomial::var(&s, 0);
        let a2 = Polynomial::var(&s, 1);
        let r = RationalFunction::new(Polynomial::one(&s), &a2.scale(&crate::algebra::q_int(2)) - &a1.scale(&crate::algebra::q_int(2))).unwrap();
        assert_eq!(r.to_string(), "(-1/2)/(a1 - a2)");
    }

    #[test]
    fn squarefree_pole() {
        let s = VariableSpace::standard(2, 0, &[]).unwrap();
        let d = &Polynomial::var(&s, 0) - &Polynomial::var(&s, 1);
        let r = RationalFunction::new(Polynomial::var(&s, 2), &d * &d).unwrap();
        assert_eq!(r.pole_locus().to_string(), "a1 - a2");
    }
}
