use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported dimension. Index sets `[pⁿ]ᵉ` grow as `p^{ne}`.
pub const MAX_E: usize = 4;
pub const DEFAULT_MAX_PRIME: u32 = 17;

/// The characteristic `p` and the dimension (degree of imperfection) `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    p: u32,
    e: usize,
}

impl Params {
    pub fn new(p: u32, e: usize) -> Result<Self> {
        Self::with_max_prime(p, e, DEFAULT_MAX_PRIME)
    }

    pub fn with_max_prime(p: u32, e: usize, max_prime: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > max_prime {
            return Err(Error::PrimeTooLarge { p, max: max_prime });
        }
        if e == 0 || e > MAX_E {
            return Err(Error::BadDimension { e, max: MAX_E });
        }
        Ok(Params { p, e })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    /// `p^k` as a u32; panics on overflow, which the parameter caps rule out
    /// for every exponent used in practice.
    pub fn p_pow(&self, k: u32) -> u32 {
        self.p.checked_pow(k).expect("p^k overflows u32")
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Exponent vector in `Nᵉ`, indexing operators `D_i` and monomials `X̄^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zero(e: usize) -> Self {
        MultiIndex(vec![0; e])
    }

    /// The vector with `n` in 1-based position `k` and zeros elsewhere.
    pub fn unit(e: usize, k: usize, n: u32) -> Self {
        assert!(k >= 1 && k <= e, "position {k} outside 1..={e}");
        let mut v = vec![0; e];
        v[k - 1] = n;
        MultiIndex(v)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn max_entry(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All indices of length `e` with total degree at most `d`, ordered by
    /// total degree and then lexicographically.
    pub fn all_up_to_total(e: usize, d: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for t in 0..=d {
            let mut cur = vec![0u32; e];
            compositions(e, t, 0, &mut cur, &mut out);
        }
        out
    }

    /// All indices with `0 ≤ i_k < bound` for every coordinate (the set `[bound]ᵉ`).
    pub fn all_below(e: usize, bound: u32) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(e))];
        for _ in 0..e {
            let mut next = Vec::with_capacity(out.len() * bound as usize);
            for m in &out {
                for v in 0..bound {
                    let mut w = m.0.clone();
                    w.push(v);
                    next.push(MultiIndex(w));
                }
            }
            out = next;
        }
        out
    }

    /// All indices componentwise `≤ max`.
    pub fn all_le(max: &MultiIndex) -> Vec<MultiIndex> {
        let mut out = vec![MultiIndex(Vec::with_capacity(max.len()))];
        for &b in &max.0 {
            let mut next = Vec::new();
            for m in &out {
                for v in 0..=b {
                    let mut w = m.0.clone();
                    w.push(v);
                    next.push(MultiIndex(w));
                }
            }
            out = next;
        }
        out
    }
}

fn compositions(e: usize, remaining: u32, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos == e - 1 {
        cur[pos] = remaining;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for v in (0..=remaining).rev() {
        cur[pos] = v;
        compositions(e, remaining - v, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Accepts `(1,0)`, `1,0` or `1 0`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: std::result::Result<Vec<u32>, _> = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>())
            .collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok(MultiIndex(v)),
            _ => Err(Error::Parse(format!("bad multi-index {s:?}"))),
        }
    }
}
