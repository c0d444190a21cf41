use std::fmt;

use serde::{Deserialize, Serialize};

use super::coeff::CoeffRing;
use super::monomial::{Block, Monomial};
use super::poly::Poly;

/// Terms are printed in descending graded-lex order, joined by `" + "`; a
/// unit coefficient is omitted.
impl<R: CoeffRing> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ring = self.ring();
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", ring.render(c))?;
            } else if ring.is_one(c) {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", ring.render(c))?;
            }
        }
        Ok(())
    }
}

/// JSON form of one term.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: serde_json::Value,
    pub exponents: ExponentsJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct ExponentsJson {
    pub x: Vec<u32>,
    pub y: Vec<u32>,
    pub z: Vec<u32>,
}

pub type PolyJson = Vec<TermJson>;

impl<R: CoeffRing> Poly<R> {
    /// JSON term list with exponent vectors of width `e`, in the same order
    /// as the textual form.
    pub fn to_json(&self, e: usize) -> PolyJson {
        let ring = self.ring();
        self.terms()
            .rev()
            .map(|(m, c)| TermJson {
                coeff: ring.to_json(c),
                exponents: ExponentsJson {
                    x: m.block_slice(Block::X)[..e].to_vec(),
                    y: m.block_slice(Block::Y)[..e].to_vec(),
                    z: m.block_slice(Block::Z)[..e].to_vec(),
                },
            })
            .collect()
    }

    pub fn from_json(ring: R, terms: &[TermJson]) -> Option<Self> {
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let c = t.coeff.as_i64()?;
            let mut m = Monomial::ONE;
            for (block, v) in [(Block::X, &t.exponents.x), (Block::Y, &t.exponents.y), (Block::Z, &t.exponents.z)] {
                for (k, &a) in v.iter().enumerate() {
                    m.0[block.slot(k + 1)] = a;
                }
            }
            out.push((m, ring.from_i64(c)));
        }
        Some(Poly::from_terms(ring, out))
    }
}
