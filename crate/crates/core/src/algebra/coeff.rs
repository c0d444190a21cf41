use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// A coefficient domain: the ring context travels with every polynomial so
/// that residues mod different primes can never be mixed silently.
pub trait CoeffRing: Clone + PartialEq + Eq + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn describe(&self) -> String;
    fn render(&self, a: &Self::Elem) -> String;
    fn to_json(&self, a: &Self::Elem) -> serde_json::Value;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The prime field F_p with residues stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Self {
        Fp { p }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn reduce_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn reduce_big(&self, n: &BigInt) -> u32 {
        let m = BigInt::from(self.p);
        let r = ((n % &m) + &m) % &m;
        u32::try_from(r).expect("residue fits u32")
    }

    pub fn inv(&self, a: u32) -> u32 {
        inv_mod(a, self.p)
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut acc = 1u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            k >>= 1;
        }
        acc as u32
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(!a.is_multiple_of(p), "inverse of zero mod {p}");
    // extended Euclid on i64
    let (mut r0, mut r1) = (p as i64, (a % p) as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i64) as u32
}

impl CoeffRing for Fp {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1 % self.p
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u32) -> bool {
        *a == 1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (s % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.p as u64) as u32
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.reduce_i64(n)
    }
    fn describe(&self) -> String {
        format!("F_{}", self.p)
    }
    fn render(&self, a: &u32) -> String {
        a.to_string()
    }
    fn to_json(&self, a: &u32) -> serde_json::Value {
        serde_json::Value::from(*a)
    }
}

/// The integers, arbitrary precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Integers;

impl CoeffRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigInt) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn describe(&self) -> String {
        "Z".to_string()
    }
    fn render(&self, a: &BigInt) -> String {
        a.to_string()
    }
    fn to_json(&self, a: &BigInt) -> serde_json::Value {
        match i64::try_from(a) {
            Ok(v) => serde_json::Value::from(v),
            Err(_) => serde_json::Value::from(a.to_string()),
        }
    }
}

impl Integers {
    pub fn is_negative(a: &BigInt) -> bool {
        a.is_negative()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_small_primes() {
        for p in [2u32, 3, 5, 7, 11, 13, 17] {
            let f = Fp::new(p);
            for a in 1..p {
                assert_eq!(f.mul(&a, &f.inv(a)), 1);
            }
        }
    }

    #[test]
    fn big_reduction_is_nonnegative() {
        let f = Fp::new(3);
        assert_eq!(f.reduce_big(&BigInt::from(-1)), 2);
        assert_eq!(f.reduce_big(&BigInt::from(-9)), 0);
        assert_eq!(f.reduce_i64(-4), 2);
    }
}
