//! p-basis computations over `F_p(X̄)` with the coordinate basis `b̄ = X̄`:
//! p^n-th power decompositions, derivations through the decomposition,
//! and p-independence up to a degree bound.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::algebra::gcd;
use crate::algebra::linalg::Matrix;
use crate::algebra::{Block, FpPoly, Monomial, MultiIndex, Params, PolyJson, RatFun, MAX_E};
use crate::error::{Error, Result};
use crate::hsd::{DeltaTable, HSDerivation};

/// The basis `b̄ = X̄` together with the canonical derivation whose
/// components supply `δ_j^i = D_j(b̄^i)`.
#[derive(Debug, Clone)]
pub struct PBasisContext {
    params: Params,
    derivation: HSDerivation,
}

impl PBasisContext {
    pub fn new(params: Params) -> Result<Self> {
        Ok(PBasisContext { params, derivation: HSDerivation::canonical_witt(params)? })
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn derivation(&self) -> &HSDerivation {
        &self.derivation
    }

    pub fn basis(&self) -> Vec<RatFun> {
        (1..=self.params.e()).map(|k| RatFun::from_poly(FpPoly::fp_var(self.params.p(), Block::X, k))).collect()
    }

    /// `δ_j^i(X̄)`.
    pub fn delta(&self, i: &MultiIndex, j: &MultiIndex) -> Result<FpPoly> {
        self.derivation.component(j, &FpPoly::block_monomial(self.params.p(), Block::X, i))
    }

    pub fn delta_table(&self, max_i: &MultiIndex, max_j: &MultiIndex) -> Result<DeltaTable> {
        DeltaTable::build(&self.derivation, max_i, max_j)
    }

    /// The tabled conditions `D_j(b̄^i) = δ_j^i(b̄)`, with the left side read
    /// off the full image `D(b̄^i)` rather than the truncated component.
    pub fn spade_check(&self, max_i: &MultiIndex, max_j: &MultiIndex) -> Result<bool> {
        let table = self.delta_table(max_i, max_j)?;
        let p = self.params.p();
        let mut images: HashMap<MultiIndex, FpPoly> = HashMap::new();
        for ((i, j), delta) in table.entries() {
            if !images.contains_key(i) {
                images.insert(i.clone(), self.derivation.apply(&FpPoly::block_monomial(p, Block::X, i))?);
            }
            if &images[i].coefficient_of(Block::Y, j) != delta {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Splits `h = Σ_i β_i(X̄^{p^n}) X̄^i` with `i ∈ [p^n]^e`; returns the `β_i`.
fn split_exponents(h: &FpPoly, q: u32, e: usize) -> BTreeMap<MultiIndex, FpPoly> {
    let mut parts: BTreeMap<MultiIndex, Vec<(Monomial, u32)>> = BTreeMap::new();
    for (m, c) in h.terms() {
        let mut quot = Monomial::ONE;
        let mut rem = vec![0; e];
        for k in 0..e {
            let a = m.0[Block::X.slot(k + 1)];
            quot.0[Block::X.slot(k + 1)] = a / q;
            rem[k] = a % q;
        }
        parts.entry(MultiIndex::new(rem)).or_default().push((quot, *c));
    }
    parts.into_iter().map(|(i, t)| (i, FpPoly::from_terms(*h.ring(), t))).collect()
}

fn numerator_for(x: &RatFun, q: u32) -> FpPoly {
    x.num() * &x.den().pow(q - 1)
}

fn check_x_only(x: &RatFun, e: usize) -> Result<()> {
    for f in [x.num(), x.den()] {
        if !f.only_blocks(&[Block::X]) || f.max_var_index() > e {
            return Err(Error::DomainMismatch(x.to_string(), format!("F_{}(X1..X{e})", x.p())));
        }
    }
    Ok(())
}

/// `x = Σ_{i∈[p^n]^e} α_i^{p^n} X̄^i`; zero coefficients are omitted.
pub fn p_power_decompose(params: Params, x: &RatFun, n: u32) -> Result<BTreeMap<MultiIndex, RatFun>> {
    let e = params.e();
    check_x_only(x, e)?;
    let q = params.p_pow(n);
    let g = x.den();
    split_exponents(&numerator_for(x, q), q, e)
        .into_iter()
        .map(|(i, beta)| Ok((i, RatFun::new(beta, g.clone())?)))
        .collect()
}

/// `Σ_i α_i^{p^n} X̄^i`, over the common denominator `L^{p^n}` with `L`
/// the lcm of the denominators of the `α_i`.
pub fn reassemble(params: Params, parts: &BTreeMap<MultiIndex, RatFun>, n: u32) -> RatFun {
    let p = params.p();
    let q = params.p_pow(n);
    let one = FpPoly::fp_constant(p, 1);
    let mut lcm = one.clone();
    let mut seen: Vec<&FpPoly> = Vec::new();
    for a in parts.values() {
        if seen.contains(&a.den()) {
            continue;
        }
        seen.push(a.den());
        let g = gcd::gcd(&lcm, a.den());
        lcm = &lcm * &gcd::exact_quotient(a.den(), &g).expect("gcd divides");
    }
    let mut num = FpPoly::zero(*one.ring());
    for (i, a) in parts {
        let cofactor = gcd::exact_quotient(&lcm, a.den()).expect("denominator divides lcm");
        let scaled = (a.num() * &cofactor).frobenius_power(q);
        num = &num + &(&scaled * &FpPoly::block_monomial(p, Block::X, i));
    }
    // cancel whole powers of L before the final normalization
    let mut k = q;
    while k > 1 && !lcm.is_one() {
        match gcd::exact_quotient(&num, &lcm) {
            Some(quot) => {
                num = quot;
                k -= 1;
            }
            None => break,
        }
    }
    RatFun::new(num, lcm.pow(k)).expect("nonzero denominator")
}

/// `D_j(x) = Σ_i α_i^{p^n} δ_j^i(X̄)` for `n ≥ max(j)`.
pub fn derivation_via_pbasis(ctx: &PBasisContext, x: &RatFun, j: &MultiIndex, n: u32) -> Result<RatFun> {
    let params = ctx.params;
    let e = params.e();
    if j.len() != e {
        return Err(Error::LengthMismatch { expected: e, found: j.len() });
    }
    if n < j.max_entry() {
        return Err(Error::DecompositionOrder { n, needed: j.max_entry() });
    }
    check_x_only(x, e)?;
    let q = params.p_pow(n);
    // with g the denominator: x = (Σ β_i(X̄^{p^n}) X̄^i) / g^{p^n}, and D_j
    // kills p^n-th powers for these j, so only the X̄^i factors are derived
    let mut num = FpPoly::zero(*x.num().ring());
    for (i, beta) in split_exponents(&numerator_for(x, q), q, e) {
        let delta = ctx.delta(&i, j)?;
        if delta.is_zero() {
            continue;
        }
        num = &num + &(&beta.frobenius_power(q) * &delta);
    }
    // D_j(f/g) has denominator dividing g^{|j|+1}; cancelling the surplus
    // powers of g first keeps the final gcd small
    let g = x.den();
    let keep = j.total() + 1;
    if q > keep && !g.is_one() {
        if let Some(reduced) = gcd::exact_quotient(&num, &g.pow(q - keep)) {
            return RatFun::new(reduced, g.pow(keep));
        }
    }
    RatFun::new(num, g.frobenius_power(q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelEntry {
    pub i: MultiIndex,
    pub x: PolyJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PIndependence {
    pub independent: bool,
    pub degbound: u32,
    /// A nonzero solution `(x_i)` of `Σ x_i^p b̄^i = 0`, when one exists.
    pub kernel: Option<Vec<KernelEntry>>,
}

impl PIndependence {
    pub fn label(&self) -> String {
        let v = if self.independent { "independent" } else { "dependent" };
        format!("{v} (up to degree {})", self.degbound)
    }
}

/// Decides whether `Σ_{i∈[p]^k} x_i^p b̄^i = 0` has a nonzero solution with
/// every `x_i ∈ F_p[X̄]` of degree `≤ degbound`.
pub fn p_independence_check(params: Params, candidates: &[RatFun], degbound: u32) -> Result<PIndependence> {
    let p = params.p();
    let e = params.e();
    let mut polys = Vec::with_capacity(candidates.len());
    for c in candidates {
        check_x_only(c, e)?;
        if !c.is_polynomial() {
            return Err(Error::NonPolynomialCandidate(c.to_string()));
        }
        polys.push(c.num().clone());
    }
    if polys.is_empty() || polys.len() > MAX_E {
        return Err(Error::LengthMismatch { expected: e, found: polys.len() });
    }
    let exps = MultiIndex::all_below(polys.len(), p);
    let monos = MultiIndex::all_up_to_total(e, degbound);
    let mut columns = Vec::with_capacity(exps.len() * monos.len());
    for i in &exps {
        let bi = i
            .entries()
            .iter()
            .zip(&polys)
            .fold(FpPoly::one(*polys[0].ring()), |acc, (&a, b)| &acc * &b.pow(a));
        for m in &monos {
            let scaled = MultiIndex::new(m.entries().iter().map(|a| a * p).collect());
            columns.push(&FpPoly::block_monomial(p, Block::X, &scaled) * &bi);
        }
    }
    let mut row_of: BTreeMap<Monomial, usize> = BTreeMap::new();
    for col in &columns {
        for (m, _) in col.terms() {
            let next = row_of.len();
            row_of.entry(*m).or_insert(next);
        }
    }
    let mut mat = Matrix::zeros(p, row_of.len(), columns.len());
    for (c, col) in columns.iter().enumerate() {
        for (m, v) in col.terms() {
            mat.set(row_of[m], c, *v);
        }
    }
    let kernel = mat.kernel();
    let witness = kernel.first().map(|v| {
        exps.iter()
            .enumerate()
            .filter_map(|(a, i)| {
                let terms = monos.iter().enumerate().filter_map(|(b, m)| {
                    let c = v[a * monos.len() + b];
                    (c != 0).then(|| (Monomial::from_block(Block::X, m), c))
                });
                let x = FpPoly::from_terms(crate::algebra::Fp::new(p), terms);
                (!x.is_zero()).then(|| KernelEntry { i: i.clone(), x: x.to_json(e) })
            })
            .collect()
    });
    Ok(PIndependence { independent: kernel.is_empty(), degbound, kernel: witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_ratfun;

    fn rf(s: &str, p: u32) -> RatFun {
        parse_ratfun(s, p).unwrap()
    }

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    fn params(p: u32, e: usize) -> Params {
        Params::new(p, e).unwrap()
    }

    #[test]
    fn decompose_examples() {
        let ps = params(2, 2);
        let d = p_power_decompose(ps, &rf("X1^3", 2), 1).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(mi(&[1, 0]), rf("X1", 2))]);
        let d = p_power_decompose(ps, &rf("1/X1", 2), 1).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(mi(&[1, 0]), rf("1/X1", 2))]);
        let d = p_power_decompose(params(3, 2), &rf("2", 3), 2).unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![(mi(&[0, 0]), rf("2", 3))]);
    }

    #[test]
    fn decompose_roundtrip() {
        let ps = params(3, 2);
        for s in ["(X1^4 + X2)/(X1*X2 + 1)", "X1^7*X2^5 + 2", "1/(X1 + X2^2)"] {
            let x = rf(s, 3);
            for n in 0..=2 {
                assert_eq!(reassemble(ps, &p_power_decompose(ps, &x, n).unwrap(), n), x, "{s} n={n}");
            }
        }
    }

    #[test]
    fn derivation_examples() {
        let ctx = PBasisContext::new(params(2, 2)).unwrap();
        assert_eq!(derivation_via_pbasis(&ctx, &rf("X1^3", 2), &mi(&[1, 0]), 1).unwrap(), rf("X1^2", 2));
        let x = rf("(X1 + X2)/(X2^3 + X1)", 2);
        assert_eq!(derivation_via_pbasis(&ctx, &x, &mi(&[0, 0]), 0).unwrap(), x);
        let xi = rf("X1^3*X2^2", 2);
        assert_eq!(
            derivation_via_pbasis(&ctx, &xi, &mi(&[1, 1]), 2).unwrap(),
            RatFun::from_poly(ctx.delta(&mi(&[3, 2]), &mi(&[1, 1])).unwrap())
        );
        assert_eq!(
            derivation_via_pbasis(&ctx, &x, &mi(&[2, 0]), 1),
            Err(Error::DecompositionOrder { n: 1, needed: 2 })
        );
    }

    #[test]
    fn routes_agree_and_are_stable_in_n() {
        let ctx = PBasisContext::new(params(2, 2)).unwrap();
        let x = rf("(X1^2*X2 + X1)/(X2 + 1)", 2);
        let series = ctx.derivation().extend_to_rational(&x, 3).unwrap();
        for j in MultiIndex::all_up_to_total(2, 3) {
            let padded = MultiIndex::new([j.entries(), &[0, 0][..]].concat());
            let n0 = j.max_entry();
            let a = derivation_via_pbasis(&ctx, &x, &j, n0).unwrap();
            assert_eq!(a, series.coefficient(&padded), "j={j}");
            assert_eq!(a, derivation_via_pbasis(&ctx, &x, &j, n0 + 1).unwrap(), "j={j}");
        }
    }

    #[test]
    fn independence_examples() {
        let ps = params(2, 2);
        let r = p_independence_check(ps, &[rf("X1", 2), rf("X2", 2)], 3).unwrap();
        assert!(r.independent);
        assert_eq!(r.label(), "independent (up to degree 3)");
        let r = p_independence_check(ps, &[rf("X1", 2), rf("X1^2", 2)], 2).unwrap();
        assert!(!r.independent);
        assert!(!r.kernel.unwrap().is_empty());
        assert!(p_independence_check(ps, &[rf("X1+X2^2", 2), rf("X2", 2)], 3).unwrap().independent);
        assert!(matches!(
            p_independence_check(ps, &[rf("1/X1", 2), rf("X2", 2)], 2),
            Err(Error::NonPolynomialCandidate(_))
        ));
    }

    #[test]
    fn spade_conditions() {
        let ctx = PBasisContext::new(params(3, 2)).unwrap();
        assert!(ctx.spade_check(&mi(&[3, 3]), &mi(&[2, 2])).unwrap());
    }
}
