use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::params::{MultiIndex, MAX_E};

/// Number of exponent slots: three blocks of `MAX_E` variables each.
pub const SLOTS: usize = 3 * MAX_E;

/// One of the three variable blocks `X̄`, `Ȳ`, `Z̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Block {
    X,
    Y,
    Z,
}

impl Block {
    pub const ALL: [Block; 3] = [Block::X, Block::Y, Block::Z];

    pub fn offset(self) -> usize {
        match self {
            Block::X => 0,
            Block::Y => MAX_E,
            Block::Z => 2 * MAX_E,
        }
    }

    pub fn name(self) -> char {
        match self {
            Block::X => 'X',
            Block::Y => 'Y',
            Block::Z => 'Z',
        }
    }

    /// Slot of the 1-based variable `index` of this block.
    pub fn slot(self, index: usize) -> usize {
        assert!((1..=MAX_E).contains(&index), "variable index {index} outside 1..={MAX_E}");
        self.offset() + index - 1
    }

    pub fn of_slot(slot: usize) -> (Block, usize) {
        (Block::ALL[slot / MAX_E], slot % MAX_E + 1)
    }
}

/// Exponents of a full monomial across all blocks. Ordered graded-lex:
/// total degree first, then lexicographically with `X1` most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u32; SLOTS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; SLOTS]);

    pub fn var(block: Block, index: usize) -> Self {
        let mut m = Monomial::ONE;
        m.0[block.slot(index)] = 1;
        m
    }

    pub fn from_block(block: Block, idx: &MultiIndex) -> Self {
        let mut m = Monomial::ONE;
        for (k, &v) in idx.entries().iter().enumerate() {
            m.0[block.offset() + k] = v;
        }
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn block_degree(&self, block: Block) -> u32 {
        self.block_slice(block).iter().sum()
    }

    pub fn block_slice(&self, block: Block) -> &[u32] {
        &self.0[block.offset()..block.offset() + MAX_E]
    }

    pub fn block_index(&self, block: Block, e: usize) -> MultiIndex {
        MultiIndex::new(self.block_slice(block)[..e].to_vec())
    }

    /// The monomial with the given block's exponents set to zero.
    pub fn without_block(&self, block: Block) -> Monomial {
        let mut m = *self;
        for k in 0..MAX_E {
            m.0[block.offset() + k] = 0;
        }
        m
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for k in 0..SLOTS {
            m.0[k] += other.0[k];
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn uses_block(&self, block: Block) -> bool {
        self.block_slice(block).iter().any(|&x| x > 0)
    }

    /// Highest 1-based variable index used in any block.
    pub fn max_var_index(&self) -> usize {
        (0..SLOTS).filter(|&s| self.0[s] > 0).map(|s| s % MAX_E + 1).max().unwrap_or(0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for slot in 0..SLOTS {
            let a = self.0[slot];
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            let (block, index) = Block::of_slot(slot);
            write!(f, "{}{}", block.name(), index)?;
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_order() {
        let x1 = Monomial::var(Block::X, 1);
        let x2 = Monomial::var(Block::X, 2);
        let y1 = Monomial::var(Block::Y, 1);
        assert!(x1 > x2);
        assert!(x2 > y1);
        assert!(x2.mul(&x2) > x1);
        assert!(Monomial::ONE < y1);
        assert_eq!(x1.mul(&y1).mul(&x1).to_string(), "X1^2*Y1");
    }

    #[test]
    fn slots_round_trip() {
        for b in Block::ALL {
            for i in 1..=MAX_E {
                assert_eq!(Block::of_slot(b.slot(i)), (b, i));
            }
        }
    }
}
