//! Formal group laws (additive `𝔾ₐᵉ`, multiplicative `𝔾ₘ`, Witt `Wₑ`),
//! multiplication-by-N maps and iterativity constants.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{Block, Fp, FpPoly, MultiIndex, Params, Poly, Substitution, Truncation};
use crate::error::{Error, Result};
use crate::witt::witt_addition_law;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Additive,
    Multiplicative,
    Witt,
}

impl std::str::FromStr for LawKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ga" | "additive" => Ok(LawKind::Additive),
            "gm" | "multiplicative" => Ok(LawKind::Multiplicative),
            "witt" | "we" => Ok(LawKind::Witt),
            other => Err(Error::Parse(format!("unknown law {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Precision {
    Exact,
    /// Components known modulo total degree `> bound`.
    Truncated(u32),
}

/// An e-dimensional formal group law `F(X̄, Ȳ)` over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalGroupLaw {
    kind: LawKind,
    params: Params,
    components: Vec<FpPoly>,
    precision: Precision,
}

/// Builds one of the built-in laws.
pub fn make_fgl(kind: LawKind, params: Params) -> Result<FormalGroupLaw> {
    let p = params.p();
    let e = params.e();
    let x = |k| FpPoly::fp_var(p, Block::X, k);
    let y = |k| FpPoly::fp_var(p, Block::Y, k);
    let components = match kind {
        LawKind::Additive => (1..=e).map(|k| &x(k) + &y(k)).collect(),
        LawKind::Multiplicative => {
            if e != 1 {
                return Err(Error::MultiplicativeDimension(e));
            }
            vec![&(&x(1) + &y(1)) + &(&x(1) * &y(1))]
        }
        LawKind::Witt => witt_addition_law(params)?.reduced().to_vec(),
    };
    Ok(FormalGroupLaw { kind, params, components, precision: Precision::Exact })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FglAxiomReport {
    pub unit: bool,
    pub associativity: bool,
    pub commutativity: bool,
    pub exact: bool,
}

impl FglAxiomReport {
    pub fn all_pass(&self) -> bool {
        self.unit && self.associativity && self.commutativity
    }
}

impl FormalGroupLaw {
    /// A law from explicit components, for testing the axiom checker.
    pub fn from_components(kind: LawKind, params: Params, components: Vec<FpPoly>, precision: Precision) -> Result<Self> {
        if components.len() != params.e() {
            return Err(Error::LengthMismatch { expected: params.e(), found: components.len() });
        }
        Ok(FormalGroupLaw { kind, params, components, precision })
    }

    /// The same law known only up to total degree `bound`.
    pub fn truncated(&self, bound: u32) -> FormalGroupLaw {
        let t = Truncation::Total { max: bound };
        FormalGroupLaw {
            components: self.components.iter().map(|c| c.truncate(&t)).collect(),
            precision: Precision::Truncated(bound),
            ..self.clone()
        }
    }

    pub fn kind(&self) -> LawKind {
        self.kind
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn components(&self) -> &[FpPoly] {
        &self.components
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_polynomial(&self) -> bool {
        self.precision == Precision::Exact
    }

    fn truncation(&self) -> Truncation {
        match self.precision {
            Precision::Exact => Truncation::None,
            Precision::Truncated(d) => Truncation::Total { max: d },
        }
    }

    /// `F(a, b)` for vectors of polynomials (simultaneous substitution).
    pub fn evaluate(&self, a: &[FpPoly], b: &[FpPoly]) -> Result<Vec<FpPoly>> {
        let e = self.params.e();
        if a.len() != e || b.len() != e {
            return Err(Error::LengthMismatch { expected: e, found: a.len().min(b.len()) });
        }
        let mut s = Substitution::block(Block::X, a);
        for (k, img) in b.iter().enumerate() {
            s.insert(Block::Y, k + 1, img.clone());
        }
        let t = self.truncation();
        self.components.iter().map(|c| c.substitute_truncated(&s, &t)).collect()
    }

    fn block_vars(&self, block: Block) -> Vec<FpPoly> {
        (1..=self.params.e()).map(|k| FpPoly::fp_var(self.params.p(), block, k)).collect()
    }

    /// Unit, associativity and commutativity, exactly for polynomial laws
    /// and up to the bound otherwise.
    pub fn axiom_check(&self) -> Result<FglAxiomReport> {
        let p = self.params.p();
        let e = self.params.e();
        let t = self.truncation();
        let x = self.block_vars(Block::X);
        let y = self.block_vars(Block::Y);
        let z = self.block_vars(Block::Z);
        let zero = vec![FpPoly::fp_constant(p, 0); e];

        let unit = self.evaluate(&x, &zero)? == x && self.evaluate(&zero, &y)?.iter().map(|c| c.truncate(&t)).eq(y.iter().map(|c| c.truncate(&t)));
        let commutativity = self.evaluate(&y, &x)? == self.components.iter().map(|c| c.truncate(&t)).collect::<Vec<_>>();
        let xy = self.evaluate(&x, &y)?;
        let yz = self.evaluate(&y, &z)?;
        let associativity = self.evaluate(&xy, &z)? == self.evaluate(&x, &yz)?;
        Ok(FglAxiomReport { unit, associativity, commutativity, exact: self.is_polynomial() })
    }

    /// `[N]_F`: `[1] = X̄`, `[N+1] = F(X̄, [N]_F)`.
    pub fn mult_by_n(&self, n: u32) -> Result<Vec<FpPoly>> {
        assert!(n >= 1, "[N]_F is defined for N ≥ 1");
        let x = self.block_vars(Block::X);
        let mut acc = x.clone();
        for _ in 1..n {
            acc = self.evaluate(&x, &acc)?;
        }
        Ok(acc)
    }

    /// `α_{i,j}(l)`: the coefficient of `X̄^i Ȳ^j` in `F₁^{l₁}⋯F_e^{l_e}`, for
    /// every `l` with `|l| ≤ |i|+|j|` (zero entries omitted).
    pub fn iterativity_constants(&self, i: &MultiIndex, j: &MultiIndex) -> Result<BTreeMap<MultiIndex, u32>> {
        let order = i.total() + j.total();
        if let Precision::Truncated(bound) = self.precision {
            if bound < order {
                return Err(Error::InsufficientBound { bound, needed: order });
            }
        }
        let e = self.params.e();
        let ring = Fp::new(self.params.p());
        let t = Truncation::Box2 { first: (Block::X, i.clone()), second: (Block::Y, j.clone()) };
        let target = crate::algebra::Monomial::from_block(Block::X, i).mul(&crate::algebra::Monomial::from_block(Block::Y, j));
        let mut powers: HashMap<(usize, u32), FpPoly> = HashMap::new();
        let mut out = BTreeMap::new();
        for l in MultiIndex::all_up_to_total(e, order) {
            let mut prod = Poly::one(ring);
            for (k, &a) in l.entries().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let pw = powers.entry((k, a)).or_insert_with(|| self.components[k].pow_truncated(a, &t));
                prod = prod.mul_truncated(pw, &t);
                if prod.is_zero() {
                    break;
                }
            }
            let c = prod.coeff(&target);
            if c != 0 {
                out.insert(l, c);
            }
        }
        Ok(out)
    }
}

/// Lazily filled, thread-safe table of iterativity constants for one law.
type Alpha = Arc<BTreeMap<MultiIndex, u32>>;

#[derive(Debug)]
pub struct IterativityTable {
    law: FormalGroupLaw,
    cache: RwLock<HashMap<(MultiIndex, MultiIndex), Alpha>>,
}

impl IterativityTable {
    pub fn new(law: FormalGroupLaw) -> Self {
        IterativityTable { law, cache: RwLock::new(HashMap::new()) }
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    pub fn get(&self, i: &MultiIndex, j: &MultiIndex) -> Result<Arc<BTreeMap<MultiIndex, u32>>> {
        let key = (i.clone(), j.clone());
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.law.iterativity_constants(i, j)?);
        // concurrent writers compute identical values, so either insert wins
        self.cache.write().expect("cache lock").entry(key).or_insert_with(|| v.clone());
        Ok(v)
    }

    /// All tables with `|i|+|j| ≤ max_order`, in a deterministic order.
    pub fn entries_up_to(&self, max_order: u32) -> Result<Vec<TableEntry>> {
        let e = self.law.params.e();
        let mut out = Vec::new();
        for i in MultiIndex::all_up_to_total(e, max_order) {
            for j in MultiIndex::all_up_to_total(e, max_order - i.total()) {
                let alpha = self.get(&i, &j)?;
                out.push(TableEntry {
                    i: i.clone(),
                    j,
                    alpha: alpha.iter().map(|(l, a)| AlphaEntry { l: l.clone(), value: *a }).collect(),
                });
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaEntry {
    pub l: MultiIndex,
    pub value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableEntry {
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub alpha: Vec<AlphaEntry>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::binomial_mod;
    use crate::algebra::parse::parse_poly;

    fn params(p: u32, e: usize) -> Params {
        Params::new(p, e).unwrap()
    }

    #[test]
    fn built_in_laws() {
        let ga = make_fgl(LawKind::Additive, params(2, 2)).unwrap();
        assert_eq!(ga.components()[1], parse_poly("X2 + Y2", 2).unwrap());
        let w = make_fgl(LawKind::Witt, params(2, 2)).unwrap();
        assert_eq!(w.components()[1], parse_poly("X2 + Y2 + X1*Y1", 2).unwrap());
        let gm = make_fgl(LawKind::Multiplicative, params(2, 1)).unwrap();
        assert_eq!(gm.components()[0].to_string(), "X1*Y1 + X1 + Y1");
        assert_eq!(make_fgl(LawKind::Multiplicative, params(2, 2)), Err(Error::MultiplicativeDimension(2)));
    }

    #[test]
    fn axioms_hold_for_built_ins() {
        for (kind, p, e) in [(LawKind::Witt, 3, 2), (LawKind::Additive, 2, 3), (LawKind::Multiplicative, 5, 1), (LawKind::Witt, 2, 3)] {
            let r = make_fgl(kind, params(p, e)).unwrap().axiom_check().unwrap();
            assert!(r.all_pass() && r.exact, "{kind:?} p={p} e={e}: {r:?}");
        }
    }

    #[test]
    fn corrupted_law_fails_unit() {
        let ps = params(2, 1);
        let bad = FormalGroupLaw::from_components(
            LawKind::Additive,
            ps,
            vec![parse_poly("X1 + Y1 + 1", 2).unwrap()],
            Precision::Exact,
        )
        .unwrap();
        let r = bad.axiom_check().unwrap();
        assert!(!r.unit);
    }

    #[test]
    fn truncated_law_checks_up_to_bound() {
        let w = make_fgl(LawKind::Witt, params(3, 2)).unwrap().truncated(4);
        let r = w.axiom_check().unwrap();
        assert!(r.all_pass() && !r.exact);
        let i = MultiIndex::new(vec![2, 1]);
        assert_eq!(
            w.iterativity_constants(&i, &i),
            Err(Error::InsufficientBound { bound: 4, needed: 6 })
        );
    }

    #[test]
    fn multiplication_by_n() {
        let w = make_fgl(LawKind::Witt, params(2, 2)).unwrap();
        assert_eq!(w.mult_by_n(1).unwrap(), vec![parse_poly("X1", 2).unwrap(), parse_poly("X2", 2).unwrap()]);
        assert_eq!(w.mult_by_n(2).unwrap(), vec![parse_poly("0", 2).unwrap(), parse_poly("X1^2", 2).unwrap()]);
        for p in [2, 3, 5] {
            let ga = make_fgl(LawKind::Additive, params(p, 3)).unwrap();
            assert!(ga.mult_by_n(p).unwrap().iter().all(|c| c.is_zero()));
        }
    }

    #[test]
    fn additive_constants_are_binomials() {
        let p = 3;
        let ga = make_fgl(LawKind::Additive, params(p, 2)).unwrap();
        for i in MultiIndex::all_up_to_total(2, 4) {
            for j in MultiIndex::all_up_to_total(2, 4) {
                let alpha = ga.iterativity_constants(&i, &j).unwrap();
                let c = i
                    .entries()
                    .iter()
                    .zip(j.entries())
                    .map(|(&a, &b)| binomial_mod((a + b) as u64, a as u64, p))
                    .fold(1u32, |acc, v| acc * v % p);
                let mut want = BTreeMap::new();
                if c != 0 {
                    want.insert(i.add(&j), c);
                }
                assert_eq!(alpha, want, "i={i} j={j}");
            }
        }
    }

    #[test]
    fn witt_constants_example() {
        let w = make_fgl(LawKind::Witt, params(2, 2)).unwrap();
        let i = MultiIndex::new(vec![1, 0]);
        let alpha = w.iterativity_constants(&i, &i).unwrap();
        let mut want = BTreeMap::new();
        want.insert(MultiIndex::new(vec![0, 1]), 1);
        assert_eq!(alpha, want);
        // j = 0 gives the indicator of l = i
        for i in MultiIndex::all_up_to_total(2, 4) {
            let alpha = w.iterativity_constants(&i, &MultiIndex::zero(2)).unwrap();
            assert_eq!(alpha.into_iter().collect::<Vec<_>>(), vec![(i.clone(), 1)]);
        }
    }

    #[test]
    fn table_is_memoized_and_symmetric() {
        let table = IterativityTable::new(make_fgl(LawKind::Witt, params(3, 2)).unwrap());
        for i in MultiIndex::all_up_to_total(2, 3) {
            for j in MultiIndex::all_up_to_total(2, 3) {
                assert_eq!(table.get(&i, &j).unwrap(), table.get(&j, &i).unwrap());
            }
        }
        let a = table.get(&MultiIndex::new(vec![1, 1]), &MultiIndex::new(vec![2, 0])).unwrap();
        let b = table.get(&MultiIndex::new(vec![1, 1]), &MultiIndex::new(vec![2, 0])).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }
}
