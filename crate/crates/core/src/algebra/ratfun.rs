use std::fmt;

use super::coeff::{CoeffRing, Fp};
use super::gcd::{exact_quotient, gcd};
use super::poly::FpPoly;
use crate::error::{Error, Result};

/// A reduced fraction of two polynomials over F_p. The gcd of numerator and
/// denominator is 1 and the denominator's leading coefficient (graded-lex) is
/// 1, so structural equality is equality of rational functions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: FpPoly,
    den: FpPoly,
}

impl RatFun {
    pub fn new(num: FpPoly, den: FpPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.ring() != den.ring() {
            return Err(Error::DomainMismatch(num.ring().describe(), den.ring().describe()));
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: FpPoly, den: FpPoly) -> Self {
        let ring = *num.ring();
        if num.is_zero() {
            return RatFun { num, den: FpPoly::one(ring) };
        }
        let (num, den) = if den.as_constant().is_some() {
            (num, den)
        } else {
            let g = gcd(&num, &den);
            if g.is_one() {
                (num, den)
            } else {
                (
                    exact_quotient(&num, &g).expect("gcd divides numerator"),
                    exact_quotient(&den, &g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = *den.leading().expect("nonzero denominator").1;
        if lc == 1 {
            return RatFun { num, den };
        }
        let s = ring.inv(lc);
        RatFun { num: num.scale(&s), den: den.scale(&s) }
    }

    pub fn from_poly(f: FpPoly) -> Self {
        let one = FpPoly::one(*f.ring());
        RatFun { num: f, den: one }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_poly(FpPoly::zero(Fp::new(p)))
    }

    pub fn one(p: u32) -> Self {
        Self::from_poly(FpPoly::one(Fp::new(p)))
    }

    pub fn num(&self) -> &FpPoly {
        &self.num
    }

    pub fn den(&self) -> &FpPoly {
        &self.den
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &RatFun) -> RatFun {
        if self.den == other.den {
            return Self::normalized(&self.num + &other.num, self.den.clone());
        }
        Self::normalized(&(&self.num * &other.den) + &(&other.num * &self.den), &self.den * &other.den)
    }

    pub fn sub(&self, other: &RatFun) -> RatFun {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &RatFun) -> RatFun {
        Self::normalized(&self.num * &other.num, &self.den * &other.den)
    }

    pub fn inv(&self) -> Result<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFun) -> Result<RatFun> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, k: u32) -> RatFun {
        // powers of coprime polynomials stay coprime
        let mut out = RatFun { num: self.num.pow(k), den: self.den.pow(k) };
        let lc = *out.den.leading().expect("nonzero").1;
        if lc != 1 {
            let s = Fp::new(self.p()).inv(lc);
            out = RatFun { num: out.num.scale(&s), den: out.den.scale(&s) };
        }
        out
    }

    /// `self^q` for `q` a power of p, computed on exponents.
    pub fn frobenius_power(&self, q: u32) -> RatFun {
        RatFun { num: self.num.frobenius_power(q), den: self.den.frobenius_power(q) }
    }

    pub fn scale(&self, c: u32) -> RatFun {
        Self::normalized(self.num.scale(&c), self.den.clone())
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::monomial::Block;
    use super::*;

    fn x(p: u32, i: usize) -> FpPoly {
        FpPoly::fp_var(p, Block::X, i)
    }

    #[test]
    fn normalization_examples() {
        let r = RatFun::new(x(2, 1).pow(2), x(2, 1)).unwrap();
        assert_eq!(r, RatFun::from_poly(x(2, 1)));
        assert!(r.is_polynomial());

        let s = x(2, 1) + x(2, 2);
        assert_eq!(RatFun::new(s.clone(), FpPoly::fp_constant(2, 1)).unwrap().num(), &s);

        let r = RatFun::new(x(3, 1).scale(&2), FpPoly::fp_constant(3, 2)).unwrap();
        assert_eq!(r, RatFun::from_poly(x(3, 1)));

        assert_eq!(RatFun::new(x(3, 1), FpPoly::fp_constant(3, 0)), Err(Error::ZeroDenominator));
    }

    #[test]
    fn field_operations() {
        let p = 5;
        let a = RatFun::new(x(p, 1) + FpPoly::fp_constant(p, 1), x(p, 2)).unwrap();
        let b = RatFun::new(x(p, 2), x(p, 1) + FpPoly::fp_constant(p, 1)).unwrap();
        assert_eq!(a.mul(&b), RatFun::one(p));
        assert!(a.sub(&a).is_zero());
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(a.pow(5), a.frobenius_power(5));
        assert!(RatFun::zero(p).inv().is_err());
    }
}
