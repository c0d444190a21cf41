use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use super::coeff::{CoeffRing, Fp, Integers};
use super::monomial::{Block, Monomial, SLOTS};
use super::params::MultiIndex;
use crate::error::{Error, Result};

/// Sparse polynomial in the blocked variables `X̄, Ȳ, Z̄` over a coefficient
/// ring. No zero coefficient is ever stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly<R: CoeffRing> {
    ring: R,
    terms: BTreeMap<Monomial, R::Elem>,
}

pub type FpPoly = Poly<Fp>;
pub type ZPoly = Poly<Integers>;

/// Which monomials survive a truncated computation. Each variant describes
/// the complement of a monomial ideal, so truncating after every product is
/// the same as truncating once at the end.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Truncation {
    #[default]
    None,
    /// Keep monomials whose total degree in `block` is at most `max`.
    Degree { block: Block, max: u32 },
    /// Keep monomials whose exponents in `block` are componentwise `≤ max`.
    Box { block: Block, max: MultiIndex },
    /// Keep monomials of total degree (all blocks) at most `max`.
    Total { max: u32 },
    /// Both blocks boxed (used for two-sided coefficient extraction).
    Box2 { first: (Block, MultiIndex), second: (Block, MultiIndex) },
}

impl Truncation {
    pub fn keeps(&self, m: &Monomial) -> bool {
        match self {
            Truncation::None => true,
            Truncation::Degree { block, max } => m.block_degree(*block) <= *max,
            Truncation::Total { max } => m.degree() <= *max,
            Truncation::Box { block, max } => box_keeps(m, *block, max),
            Truncation::Box2 { first, second } => {
                box_keeps(m, first.0, &first.1) && box_keeps(m, second.0, &second.1)
            }
        }
    }
}

fn box_keeps(m: &Monomial, block: Block, max: &MultiIndex) -> bool {
    let s = m.block_slice(block);
    let bounds = max.entries();
    s.iter().enumerate().all(|(k, &a)| a <= bounds.get(k).copied().unwrap_or(0))
}

impl<R: CoeffRing> Poly<R> {
    pub fn zero(ring: R) -> Self {
        Poly { ring, terms: BTreeMap::new() }
    }

    pub fn one(ring: R) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::ONE, c)
    }

    pub fn constant(ring: R, c: R::Elem) -> Self {
        Self::monomial(ring, Monomial::ONE, c)
    }

    pub fn var(ring: R, block: Block, index: usize) -> Self {
        let c = ring.one();
        Self::monomial(ring, Monomial::var(block, index), c)
    }

    pub fn monomial(ring: R, m: Monomial, c: R::Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !ring.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { ring, terms }
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms(ring: R, terms: impl IntoIterator<Item = (Monomial, R::Elem)>) -> Self {
        let mut acc: BTreeMap<Monomial, R::Elem> = BTreeMap::new();
        for (m, c) in terms {
            accumulate(&ring, &mut acc, m, c);
        }
        acc.retain(|_, c| !ring.is_zero(c));
        Poly { ring, terms: acc }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::ONE).is_some_and(|c| self.ring.is_one(c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &R::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> R::Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn leading(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().next_back()
    }

    /// The constant term, or `None` when the polynomial has positive degree.
    pub fn as_constant(&self) -> Option<R::Elem> {
        match self.terms.len() {
            0 => Some(self.ring.zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn block_degree(&self, block: Block) -> u32 {
        self.terms.keys().map(|m| m.block_degree(block)).max().unwrap_or(0)
    }

    pub fn uses_block(&self, block: Block) -> bool {
        self.terms.keys().any(|m| m.uses_block(block))
    }

    /// True when every variable that occurs lies in one of `blocks`.
    pub fn only_blocks(&self, blocks: &[Block]) -> bool {
        Block::ALL.iter().filter(|b| !blocks.contains(b)).all(|&b| !self.uses_block(b))
    }

    /// Highest 1-based variable index present in any block.
    pub fn max_var_index(&self) -> usize {
        self.terms.keys().map(|m| m.max_var_index()).max().unwrap_or(0)
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::DomainMismatch(self.ring.describe(), other.ring.describe()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            accumulate(&self.ring, &mut terms, *m, c.clone());
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        Ok(Poly { ring: self.ring.clone(), terms })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_ring(other)?;
        Ok(self.mul_truncated(other, &Truncation::None))
    }

    /// `self^k` for a signed exponent; negative exponents are rejected.
    pub fn checked_pow(&self, k: i64) -> Result<Self> {
        if k < 0 {
            return Err(Error::NegativeExponent(k));
        }
        Ok(self.pow(k as u32))
    }

    fn neg_ref(&self) -> Self {
        let ring = self.ring.clone();
        let terms = self.terms.iter().map(|(m, c)| (*m, ring.neg(c))).collect();
        Poly { ring, terms }
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let ring = self.ring.clone();
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, ring.mul(a, c)))
            .filter(|(_, a)| !ring.is_zero(a))
            .collect();
        Poly { ring, terms }
    }

    /// Product keeping only monomials accepted by `trunc`.
    pub fn mul_truncated(&self, other: &Self, trunc: &Truncation) -> Self {
        assert_eq!(self.ring, other.ring, "coefficient domain mismatch");
        let ring = &self.ring;
        let mut acc: HashMap<Monomial, R::Elem> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                if !trunc.keeps(&m) {
                    continue;
                }
                let c = ring.mul(ca, cb);
                match acc.get_mut(&m) {
                    Some(slot) => *slot = ring.add(slot, &c),
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Poly { ring: ring.clone(), terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        self.pow_truncated(k, &Truncation::None)
    }

    pub fn pow_truncated(&self, mut k: u32, trunc: &Truncation) -> Self {
        let mut acc = Poly::one(self.ring.clone()).truncate(trunc);
        let mut base = self.truncate(trunc);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul_truncated(&base, trunc);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_truncated(&base, trunc);
            }
        }
        acc
    }

    pub fn truncate(&self, trunc: &Truncation) -> Self {
        if matches!(trunc, Truncation::None) {
            return self.clone();
        }
        let terms = self.terms.iter().filter(|(m, _)| trunc.keeps(m)).map(|(m, c)| (*m, c.clone())).collect();
        Poly { ring: self.ring.clone(), terms }
    }

    pub fn map_coeffs<S: CoeffRing>(&self, ring: S, f: impl Fn(&R::Elem) -> S::Elem) -> Poly<S> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, f(c)))
            .filter(|(_, c)| !ring.is_zero(c))
            .collect();
        Poly { ring, terms }
    }

    pub fn map_monomials(&self, f: impl Fn(&Monomial) -> Monomial) -> Self {
        Poly::from_terms(self.ring.clone(), self.terms.iter().map(|(m, c)| (f(m), c.clone())))
    }

    /// Renames the variables of block `from` to block `to`. The target block
    /// must be unused.
    pub fn rename_block(&self, from: Block, to: Block) -> Self {
        if from == to {
            return self.clone();
        }
        assert!(!self.uses_block(to), "rename target block {:?} already in use", to);
        self.map_monomials(|m| {
            let mut out = m.without_block(from);
            let src = m.block_slice(from);
            for (k, &a) in src.iter().enumerate() {
                out.0[to.offset() + k] = a;
            }
            out
        })
    }

    /// Coefficient of `block^j`, as a polynomial in the remaining blocks.
    /// Absent monomials give zero.
    pub fn coefficient_of(&self, block: Block, j: &MultiIndex) -> Self {
        let target = Monomial::from_block(block, j);
        let target = target.block_slice(block).to_vec();
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.block_slice(block) == target.as_slice())
            .map(|(m, c)| (m.without_block(block), c.clone()))
            .collect();
        Poly { ring: self.ring.clone(), terms }
    }

    /// Splits the polynomial by exponent in `block`:
    /// `self = Σ_j coefficient_of(block, j)·block^j`.
    pub fn split_by_block(&self, block: Block, e: usize) -> BTreeMap<MultiIndex, Self> {
        let mut out: BTreeMap<MultiIndex, BTreeMap<Monomial, R::Elem>> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.block_index(block, e)).or_default().insert(m.without_block(block), c.clone());
        }
        out.into_iter().map(|(k, terms)| (k, Poly { ring: self.ring.clone(), terms })).collect()
    }

    /// Simultaneous substitution of variables by polynomials.
    pub fn substitute(&self, subst: &Substitution<R>) -> Result<Self> {
        self.substitute_truncated(subst, &Truncation::None)
    }

    /// Substitution with every intermediate product truncated by `trunc`.
    pub fn substitute_truncated(&self, subst: &Substitution<R>, trunc: &Truncation) -> Result<Self> {
        let ring = &self.ring;
        for m in self.terms.keys() {
            for slot in 0..SLOTS {
                if m.0[slot] > 0 && subst.images[slot].is_none() && subst.strict {
                    let (b, i) = Block::of_slot(slot);
                    return Err(Error::MissingImage(format!("{}{}", b.name(), i)));
                }
            }
        }
        for img in subst.images.iter().flatten() {
            self.check_same_ring(img)?;
        }
        let mut cache: HashMap<(usize, u32), Poly<R>> = HashMap::new();
        let mut result: HashMap<Monomial, R::Elem> = HashMap::new();
        for (m, c) in &self.terms {
            // variables without an image are carried along as a monomial factor
            let mut kept = Monomial::ONE;
            let mut factors: Vec<(usize, u32)> = Vec::new();
            for slot in 0..SLOTS {
                let a = m.0[slot];
                if a == 0 {
                    continue;
                }
                if subst.images[slot].is_some() {
                    factors.push((slot, a));
                } else {
                    kept.0[slot] = a;
                }
            }
            let mut prod = Poly::monomial(ring.clone(), kept, c.clone()).truncate(trunc);
            for (slot, a) in factors {
                if prod.is_zero() {
                    break;
                }
                let power = cached_power(&mut cache, subst, slot, a, trunc);
                prod = prod.mul_truncated(power, trunc);
            }
            for (mm, cc) in prod.terms {
                match result.get_mut(&mm) {
                    Some(slot) => *slot = ring.add(slot, &cc),
                    None => {
                        result.insert(mm, cc);
                    }
                }
            }
        }
        let terms = result.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Ok(Poly { ring: ring.clone(), terms })
    }
}

fn cached_power<'a, R: CoeffRing>(
    cache: &'a mut HashMap<(usize, u32), Poly<R>>,
    subst: &Substitution<R>,
    slot: usize,
    a: u32,
    trunc: &Truncation,
) -> &'a Poly<R> {
    if !cache.contains_key(&(slot, a)) {
        let base = subst.images[slot].as_ref().expect("image present");
        // build from the largest cached lower power
        let lower = (1..a).rev().find(|k| cache.contains_key(&(slot, *k)));
        let value = match lower {
            Some(k) => {
                let rest = base.pow_truncated(a - k, trunc);
                cache[&(slot, k)].mul_truncated(&rest, trunc)
            }
            None => base.pow_truncated(a, trunc),
        };
        cache.insert((slot, a), value);
    }
    &cache[&(slot, a)]
}

fn accumulate<R: CoeffRing>(ring: &R, terms: &mut BTreeMap<Monomial, R::Elem>, m: Monomial, c: R::Elem) {
    match terms.get_mut(&m) {
        Some(slot) => *slot = ring.add(slot, &c),
        None => {
            terms.insert(m, c);
        }
    }
}

/// Images for a simultaneous substitution, keyed by variable. Variables
/// without an image are left in place unless `strict` is set.
#[derive(Debug, Clone)]
pub struct Substitution<R: CoeffRing> {
    images: Vec<Option<Poly<R>>>,
    strict: bool,
}

impl<R: CoeffRing> Default for Substitution<R> {
    fn default() -> Self {
        Substitution { images: vec![None; SLOTS], strict: false }
    }
}

impl<R: CoeffRing> Substitution<R> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub fn set(mut self, block: Block, index: usize, image: Poly<R>) -> Self {
        self.images[block.slot(index)] = Some(image);
        self
    }

    pub fn insert(&mut self, block: Block, index: usize, image: Poly<R>) {
        self.images[block.slot(index)] = Some(image);
    }

    /// Maps `block_k ↦ images[k-1]` for `k = 1..=images.len()`.
    pub fn block(block: Block, images: &[Poly<R>]) -> Self {
        let mut s = Self::default();
        for (k, img) in images.iter().enumerate() {
            s.insert(block, k + 1, img.clone());
        }
        s
    }
}

impl FpPoly {
    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn fp_var(p: u32, block: Block, index: usize) -> Self {
        Poly::var(Fp::new(p), block, index)
    }

    pub fn fp_constant(p: u32, c: i64) -> Self {
        let ring = Fp::new(p);
        let c = ring.reduce_i64(c);
        Poly::constant(ring, c)
    }

    /// `X̄^i` in the given block.
    pub fn block_monomial(p: u32, block: Block, i: &MultiIndex) -> Self {
        Poly::monomial(Fp::new(p), Monomial::from_block(block, i), 1)
    }

    /// Exponentwise division by `p` (the inverse of the Frobenius on
    /// exponents). Coefficients are unchanged.
    pub fn frobenius_root(&self) -> Result<Self> {
        let p = self.p();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m.0.iter().any(|&a| a % p != 0) {
                return Err(Error::NotPthPower(m.to_string()));
            }
            let mut r = *m;
            for a in r.0.iter_mut() {
                *a /= p;
            }
            terms.insert(r, *c);
        }
        Ok(Poly { ring: self.ring, terms })
    }

    /// Exponentwise multiplication by `q`; equals `self^q` whenever `q` is a
    /// power of `p`, since coefficients lie in the prime field.
    pub fn frobenius_power(&self, q: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut r = *m;
                for a in r.0.iter_mut() {
                    *a *= q;
                }
                (r, *c)
            })
            .collect();
        Poly { ring: self.ring, terms }
    }

    /// Evaluation of the `X̄` block at a point of `F_p^e` (other blocks must be absent).
    pub fn eval_x(&self, point: &[u32]) -> u32 {
        let ring = self.ring;
        let mut acc = 0;
        for (m, c) in &self.terms {
            let mut t = *c;
            for (k, &a) in m.block_slice(Block::X).iter().enumerate() {
                if a > 0 {
                    t = ring.mul(&t, &ring.pow(point[k], a as u64));
                }
            }
            acc = ring.add(&acc, &t);
        }
        acc
    }
}

impl ZPoly {
    pub fn z_var(block: Block, index: usize) -> Self {
        Poly::var(Integers, block, index)
    }

    /// Reduction of the coefficients mod `p`.
    pub fn reduce_mod(&self, p: u32) -> FpPoly {
        let ring = Fp::new(p);
        self.map_coeffs(ring, |c| ring.reduce_big(c))
    }
}

impl<'a, R: CoeffRing> Add<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: &'a Poly<R>) -> Poly<R> {
        self.checked_add(rhs).expect("coefficient domain mismatch")
    }
}

impl<R: CoeffRing> Add for Poly<R> {
    type Output = Poly<R>;
    fn add(self, rhs: Poly<R>) -> Poly<R> {
        &self + &rhs
    }
}

impl<'a, R: CoeffRing> Sub<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: &'a Poly<R>) -> Poly<R> {
        self.checked_sub(rhs).expect("coefficient domain mismatch")
    }
}

impl<R: CoeffRing> Sub for Poly<R> {
    type Output = Poly<R>;
    fn sub(self, rhs: Poly<R>) -> Poly<R> {
        &self - &rhs
    }
}

impl<'a, R: CoeffRing> Mul<&'a Poly<R>> for &'a Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: &'a Poly<R>) -> Poly<R> {
        self.checked_mul(rhs).expect("coefficient domain mismatch")
    }
}

impl<R: CoeffRing> Mul for Poly<R> {
    type Output = Poly<R>;
    fn mul(self, rhs: Poly<R>) -> Poly<R> {
        &self * &rhs
    }
}

impl<R: CoeffRing> Neg for &Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.neg_ref()
    }
}

impl<R: CoeffRing> Neg for Poly<R> {
    type Output = Poly<R>;
    fn neg(self) -> Poly<R> {
        self.neg_ref()
    }
}
