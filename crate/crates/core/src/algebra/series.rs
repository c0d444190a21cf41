use std::fmt;

use super::coeff::Fp;
use super::monomial::Block;
use super::params::MultiIndex;
use super::poly::{FpPoly, Truncation};
use super::ratfun::RatFun;
use crate::error::{Error, Result};

/// Truncated power series in one designated block, with coefficients in
/// `F_p(other blocks)`. Stored as `num / den` where `den` is free of the
/// series block and `num` keeps only monomials of series-degree `≤ bound`.
#[derive(Debug, Clone)]
pub struct TruncSeries {
    num: FpPoly,
    den: FpPoly,
    block: Block,
    bound: u32,
}

impl TruncSeries {
    pub fn from_poly(f: FpPoly, block: Block, bound: u32) -> Self {
        let den = FpPoly::one(*f.ring());
        let num = f.truncate(&Truncation::Degree { block, max: bound });
        TruncSeries { num, den, block, bound }
    }

    pub fn from_ratfun(r: &RatFun, block: Block, bound: u32) -> Result<Self> {
        if r.den().uses_block(block) {
            return Err(Error::Invariant(format!("denominator {} involves the series block", r.den())));
        }
        let num = r.num().truncate(&Truncation::Degree { block, max: bound });
        Ok(TruncSeries { num, den: r.den().clone(), block, bound })
    }

    pub fn block(&self) -> Block {
        self.block
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn p(&self) -> u32 {
        self.num.p()
    }

    fn trunc(&self, bound: u32) -> Truncation {
        Truncation::Degree { block: self.block, max: bound }
    }

    fn tidy(num: FpPoly, den: FpPoly, block: Block, bound: u32) -> Self {
        if let Some(c) = den.as_constant() {
            let s = Fp::new(num.p()).inv(c);
            return TruncSeries { num: num.scale(&s), den: FpPoly::one(*den.ring()), block, bound };
        }
        TruncSeries { num, den, block, bound }
    }

    pub fn add(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.block, other.block, "series blocks differ");
        let bound = self.bound.min(other.bound);
        let t = self.trunc(bound);
        if self.den == other.den {
            return Self::tidy((&self.num + &other.num).truncate(&t), self.den.clone(), self.block, bound);
        }
        let num = &self.num.mul_truncated(&other.den, &t) + &other.num.mul_truncated(&self.den, &t);
        Self::tidy(num, &self.den * &other.den, self.block, bound)
    }

    pub fn neg(&self) -> TruncSeries {
        TruncSeries { num: -&self.num, ..self.clone() }
    }

    pub fn sub(&self, other: &TruncSeries) -> TruncSeries {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &TruncSeries) -> TruncSeries {
        assert_eq!(self.block, other.block, "series blocks differ");
        let bound = self.bound.min(other.bound);
        let num = self.num.mul_truncated(&other.num, &self.trunc(bound));
        Self::tidy(num, &self.den * &other.den, self.block, bound)
    }

    /// The series-block-free part (value at series block = 0).
    pub fn constant_term(&self) -> RatFun {
        let e = crate::algebra::MAX_E;
        self.coefficient(&MultiIndex::zero(e))
    }

    /// Multiplicative inverse modulo series-degree `> d` (and the own bound).
    pub fn inverse(&self, d: u32) -> Result<TruncSeries> {
        let bound = self.bound.min(d);
        let e = crate::algebra::MAX_E;
        let c0 = self.num.coefficient_of(self.block, &MultiIndex::zero(e));
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let t = self.trunc(bound);
        // N = c0 + E;  1/N = Σ_{k≤b} (−E)^k c0^{b−k} / c0^{b+1}
        let minus_e = -&(&self.num - &c0);
        let mut acc = FpPoly::zero(*c0.ring());
        let mut e_pow = FpPoly::one(*c0.ring());
        for k in 0..=bound {
            if e_pow.is_zero() {
                break;
            }
            acc = &acc + &e_pow.mul_truncated(&c0.pow(bound - k), &t);
            e_pow = e_pow.mul_truncated(&minus_e, &t);
        }
        let num = self.den.mul_truncated(&acc, &t);
        Ok(Self::tidy(num, c0.pow(bound + 1), self.block, bound))
    }

    /// Coefficient of `block^j`, a normalized rational function.
    pub fn coefficient(&self, j: &MultiIndex) -> RatFun {
        let c = self.num.coefficient_of(self.block, j);
        RatFun::new(c, self.den.clone()).expect("nonzero denominator")
    }

    /// Equality of the represented series up to the smaller bound.
    pub fn equals(&self, other: &TruncSeries) -> bool {
        if self.block != other.block {
            return false;
        }
        let t = self.trunc(self.bound.min(other.bound));
        self.num.mul_truncated(&other.den, &t) == other.num.mul_truncated(&self.den, &t)
    }

    /// Every nonzero coefficient, keyed by the series-block exponent.
    pub fn coefficients(&self, e: usize) -> Vec<(MultiIndex, RatFun)> {
        self.num
            .split_by_block(self.block, e)
            .into_iter()
            .map(|(j, c)| (j, RatFun::new(c, self.den.clone()).expect("nonzero denominator")))
            .collect()
    }
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = crate::algebra::MAX_E;
        let mut first = true;
        for (j, c) in self.coefficients(e).into_iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let m = crate::algebra::Monomial::from_block(self.block, &j);
            if m.is_one() {
                write!(f, "{c}")?;
            } else if c.is_polynomial() && c.num().is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "({c})*{m}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.block.name(), self.bound + 1)
    }
}
