//! The Witt group law over `F_p`: generated over `Z` from ghost components and
//! reduced mod p, plus the Frobenius, Verschiebung and restriction maps.
//!
//! Coordinates are 1-based: `X₁, …, X_e`. The m-th ghost component is
//! `W_m = Σ_{i=0..m} pⁱ·X_{i+1}^{p^{m−i}}` for `m = 0, …, e−1`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{Block, FpPoly, Integers, Params, Poly, Substitution, ZPoly};
use crate::error::{Error, Result};

/// The Witt addition law `S₁, …, S_e` over `Z` and its reduction `H` mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittLawSet {
    params: Params,
    integral: Vec<ZPoly>,
    reduced: Vec<FpPoly>,
}

impl WittLawSet {
    pub fn params(&self) -> Params {
        self.params
    }

    /// `S₁, …, S_e` over Z in the variables `X̄, Ȳ`.
    pub fn integral(&self) -> &[ZPoly] {
        &self.integral
    }

    /// `H₁, …, H_e` over F_p.
    pub fn reduced(&self) -> &[FpPoly] {
        &self.reduced
    }
}

/// Ghost polynomial `W_m` in the given block of variables.
pub fn witt_polynomial(p: u32, m: usize, block: Block) -> ZPoly {
    let coords: Vec<ZPoly> = (1..=m + 1).map(|k| ZPoly::z_var(block, k)).collect();
    ghost_component(p, m, &coords)
}

/// `W_m` evaluated on arbitrary integral entries `(a₁, …, a_{m+1})`.
pub fn ghost_component(p: u32, m: usize, coords: &[ZPoly]) -> ZPoly {
    let mut acc = Poly::zero(Integers);
    for i in 0..=m {
        let weight = BigInt::from(p).pow(i as u32);
        let exp = p.pow((m - i) as u32);
        acc = &acc + &coords[i].pow(exp).scale(&weight);
    }
    acc
}

/// Generates the addition law by the recursion
/// `S_{m+1} = (W_m(X̄) + W_m(Ȳ) − Σ_{k<m} p^k·S_{k+1}^{p^{m−k}}) / p^m`,
/// then re-verifies every ghost identity before returning.
pub fn witt_addition_law(params: Params) -> Result<WittLawSet> {
    let p = params.p();
    let e = params.e();
    let mut s: Vec<ZPoly> = Vec::with_capacity(e);
    for m in 0..e {
        let mut rhs = &witt_polynomial(p, m, Block::X) + &witt_polynomial(p, m, Block::Y);
        for k in 0..m {
            let weight = BigInt::from(p).pow(k as u32);
            rhs = &rhs - &s[k].pow(p.pow((m - k) as u32)).scale(&weight);
        }
        let divisor = BigInt::from(p).pow(m as u32);
        s.push(exact_scalar_division(&rhs, &divisor)?);
    }
    for m in 0..e {
        let lhs = ghost_component(p, m, &s[..=m]);
        let rhs = &witt_polynomial(p, m, Block::X) + &witt_polynomial(p, m, Block::Y);
        if lhs != rhs {
            return Err(Error::Invariant(format!("ghost identity fails for m = {m}")));
        }
    }
    let reduced: Vec<FpPoly> = s.iter().map(|f| f.reduce_mod(p)).collect();
    for (k, h) in reduced.iter().enumerate() {
        let rest = h - &(&FpPoly::fp_var(p, Block::X, k + 1) + &FpPoly::fp_var(p, Block::Y, k + 1));
        if rest.max_var_index() > k {
            return Err(Error::Invariant(format!("H{} involves a variable of index ≥ {}", k + 1, k + 1)));
        }
    }
    Ok(WittLawSet { params, integral: s, reduced })
}

fn exact_scalar_division(f: &ZPoly, d: &BigInt) -> Result<ZPoly> {
    if d.is_one() {
        return Ok(f.clone());
    }
    let mut terms = Vec::with_capacity(f.len());
    for (m, c) in f.terms() {
        let (q, r) = c.div_rem(d);
        if !r.is_zero() {
            return Err(Error::InexactDivision(format!("coefficient {c} of {m} by {d}")));
        }
        terms.push((*m, q));
    }
    Ok(Poly::from_terms(Integers, terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WittEndomorphismKind {
    Frobenius,
    Verschiebung,
    Restriction,
}

impl WittEndomorphismKind {
    /// Length of the image of a length-`n` vector.
    pub fn target_len(self, n: usize) -> usize {
        match self {
            WittEndomorphismKind::Frobenius => n,
            WittEndomorphismKind::Verschiebung => n + 1,
            WittEndomorphismKind::Restriction => n.saturating_sub(1),
        }
    }
}

/// `fr: W_n → W_n`, `ve: W_n → W_{n+1}`, `re: W_n → W_{n−1}` on symbolic
/// entries over F_p. `source_len` is `n`.
pub fn witt_endomorphism(kind: WittEndomorphismKind, v: &[FpPoly], source_len: usize, p: u32) -> Result<Vec<FpPoly>> {
    if v.len() != source_len {
        return Err(Error::LengthMismatch { expected: source_len, found: v.len() });
    }
    Ok(match kind {
        WittEndomorphismKind::Frobenius => v.iter().map(|x| x.pow(p)).collect(),
        WittEndomorphismKind::Verschiebung => {
            let mut out = vec![FpPoly::fp_constant(p, 0)];
            out.extend(v.iter().cloned());
            out
        }
        WittEndomorphismKind::Restriction => {
            if v.is_empty() {
                return Err(Error::LengthMismatch { expected: 1, found: 0 });
            }
            v[..v.len() - 1].to_vec()
        }
    })
}

/// `fr∘ve∘re` applied to the symbolic point `(X₁, …, X_e)`.
pub fn frobenius_verschiebung_restriction(params: Params) -> Result<Vec<FpPoly>> {
    let p = params.p();
    let e = params.e();
    let x: Vec<FpPoly> = (1..=e).map(|k| FpPoly::fp_var(p, Block::X, k)).collect();
    let r = witt_endomorphism(WittEndomorphismKind::Restriction, &x, e, p)?;
    let v = witt_endomorphism(WittEndomorphismKind::Verschiebung, &r, e - 1, p)?;
    witt_endomorphism(WittEndomorphismKind::Frobenius, &v, e, p)
}

/// Evaluates the law on explicit Witt vectors `a, b` (each of length e).
pub fn witt_sum(law: &WittLawSet, a: &[FpPoly], b: &[FpPoly]) -> Result<Vec<FpPoly>> {
    let e = law.params.e();
    if a.len() != e || b.len() != e {
        return Err(Error::LengthMismatch { expected: e, found: a.len().min(b.len()) });
    }
    let mut s = Substitution::block(Block::X, a);
    for (k, img) in b.iter().enumerate() {
        s.insert(Block::Y, k + 1, img.clone());
    }
    law.reduced.iter().map(|h| h.substitute(&s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    #[test]
    fn ghost_polynomials() {
        assert_eq!(witt_polynomial(2, 0, Block::X).to_string(), "X1");
        assert_eq!(witt_polynomial(2, 1, Block::X).to_string(), "X1^2 + 2*X2");
        assert_eq!(witt_polynomial(3, 2, Block::X).to_string(), "X1^9 + 3*X2^3 + 9*X3");
    }

    #[test]
    fn small_laws() {
        let law = witt_addition_law(Params::new(2, 2).unwrap()).unwrap();
        let want: Vec<FpPoly> = ["X1 + Y1", "X2 + Y2 + X1*Y1"].iter().map(|s| parse_poly(s, 2).unwrap()).collect();
        assert_eq!(law.reduced(), want.as_slice());

        let law = witt_addition_law(Params::new(3, 2).unwrap()).unwrap();
        let want = parse_poly("X2 + Y2 + 2*X1^2*Y1 + 2*X1*Y1^2", 3).unwrap();
        assert_eq!(law.reduced()[1], want);
        // over Z: S2 = X2 + Y2 − X1²Y1 − X1Y1²
        assert_eq!(law.integral()[1].to_string(), "-1*X1^2*Y1 + -1*X1*Y1^2 + X2 + Y2");

        for p in [2, 3, 5, 7] {
            let law = witt_addition_law(Params::new(p, 1).unwrap()).unwrap();
            assert_eq!(law.reduced()[0], parse_poly("X1 + Y1", p).unwrap());
        }
    }

    #[test]
    fn endomorphisms() {
        let p = 2;
        let x1 = FpPoly::fp_var(p, Block::X, 1);
        let x2 = FpPoly::fp_var(p, Block::X, 2);
        let v = vec![x1.clone(), x2.clone()];
        assert_eq!(witt_endomorphism(WittEndomorphismKind::Frobenius, &v, 2, p).unwrap(), vec![x1.pow(2), x2.pow(2)]);
        assert_eq!(
            witt_endomorphism(WittEndomorphismKind::Verschiebung, &v[..1], 1, p).unwrap(),
            vec![FpPoly::fp_constant(p, 0), x1.clone()]
        );
        assert_eq!(witt_endomorphism(WittEndomorphismKind::Restriction, &v, 2, p).unwrap(), vec![x1.clone()]);
        assert_eq!(
            witt_endomorphism(WittEndomorphismKind::Frobenius, &v, 3, p),
            Err(Error::LengthMismatch { expected: 3, found: 2 })
        );
        assert_eq!(WittEndomorphismKind::Verschiebung.target_len(2), 3);
    }

    #[test]
    fn splitting_identity() {
        // (X1,…,Xn,0,…,0) * (0,…,0,X_{n+1},…,X_e) = (X1,…,Xe)
        for (p, e) in [(2, 3), (3, 2), (5, 2)] {
            let params = Params::new(p, e).unwrap();
            let law = witt_addition_law(params).unwrap();
            let x: Vec<FpPoly> = (1..=e).map(|k| FpPoly::fp_var(p, Block::X, k)).collect();
            let zero = FpPoly::fp_constant(p, 0);
            for n in 0..=e {
                let a: Vec<FpPoly> = (0..e).map(|k| if k < n { x[k].clone() } else { zero.clone() }).collect();
                let b: Vec<FpPoly> = (0..e).map(|k| if k >= n { x[k].clone() } else { zero.clone() }).collect();
                assert_eq!(witt_sum(&law, &a, &b).unwrap(), x, "p={p} e={e} n={n}");
            }
        }
    }
}
