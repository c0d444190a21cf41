//! Exact arithmetic substrate shared by every other module.

mod coeff;
mod format;
pub mod gcd;
pub mod linalg;
mod monomial;
mod params;
pub mod parse;
mod poly;
mod ratfun;
mod series;

pub use coeff::{CoeffRing, Fp, Integers};
pub use format::{PolyJson, TermJson};
pub use monomial::{Block, Monomial, SLOTS};
pub use params::{MultiIndex, Params, DEFAULT_MAX_PRIME, MAX_E};
pub use poly::{FpPoly, Poly, Substitution, Truncation, ZPoly};
pub use ratfun::RatFun;
pub use series::TruncSeries;

/// Binomial coefficient reduced mod `p`, via Lucas' theorem.
pub fn binomial_mod(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p64 = p as u64;
    let (mut n, mut k) = (n, k);
    let mut acc: u64 = 1;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        // small binomial by multiplicative formula with inverses mod p
        let mut num = 1u64;
        let mut den = 1u64;
        for t in 0..kd {
            num = num * ((nd - t) % p64) % p64;
            den = den * ((t + 1) % p64) % p64;
        }
        acc = acc * num % p64 * coeff::inv_mod(den as u32, p) as u64 % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}
