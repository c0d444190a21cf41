//! Hasse–Schmidt derivations on `F_p[X̄]` given by generator images,
//! their components `D_j`, formal operator composites and the rational
//! extension.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::algebra::{
    Block, FpPoly, Monomial, MultiIndex, Params, PolyJson, RatFun, Substitution, TruncSeries, Truncation,
};
use crate::error::{Error, Result};
use crate::fgl::{make_fgl, FormalGroupLaw, IterativityTable, LawKind, Precision};

/// Default `Ȳ`-degree bound when extending to fractions.
pub const DEFAULT_YBOUND: u32 = 4;

type ComponentCache = RwLock<HashMap<(MultiIndex, Monomial), FpPoly>>;

/// `D: F_p[X̄] → F_p[X̄][Ȳ]`, determined by `D(X_k) = images[k-1]`.
#[derive(Debug, Clone)]
pub struct HSDerivation {
    params: Params,
    images: Vec<FpPoly>,
    precision: Precision,
    cache: Arc<ComponentCache>,
}

impl PartialEq for HSDerivation {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params && self.images == other.images && self.precision == other.precision
    }
}

impl HSDerivation {
    /// Checks that every image reduces to `X_k` at `Ȳ = 0̄`.
    pub fn from_images(params: Params, images: Vec<FpPoly>) -> Result<Self> {
        Self::with_precision(params, images, Precision::Exact)
    }

    fn with_precision(params: Params, images: Vec<FpPoly>, precision: Precision) -> Result<Self> {
        let e = params.e();
        if images.len() != e {
            return Err(Error::LengthMismatch { expected: e, found: images.len() });
        }
        for (k, g) in images.iter().enumerate() {
            if g.p() != params.p() {
                return Err(Error::DomainMismatch(format!("F_{}", g.p()), format!("F_{}", params.p())));
            }
            let at_zero = g.coefficient_of(Block::Y, &MultiIndex::zero(e));
            if !g.only_blocks(&[Block::X, Block::Y]) || at_zero != FpPoly::fp_var(params.p(), Block::X, k + 1) {
                return Err(Error::NotHasseSchmidt(k + 1));
            }
        }
        Ok(HSDerivation { params, images, precision, cache: Arc::default() })
    }

    /// The canonical `Wₑ`-derivation `f ↦ f(H(X̄,Ȳ))`.
    pub fn canonical_witt(params: Params) -> Result<Self> {
        Self::from_law(&make_fgl(LawKind::Witt, params)?)
    }

    /// `D(X̄) = F(X̄,Ȳ)`; this derivation is F-iterative for every law F.
    pub fn from_law(law: &FormalGroupLaw) -> Result<Self> {
        Self::with_precision(law.params(), law.components().to_vec(), law.precision())
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn images(&self) -> &[FpPoly] {
        &self.images
    }

    pub fn is_polynomial(&self) -> bool {
        self.precision == Precision::Exact
    }

    fn p(&self) -> u32 {
        self.params.p()
    }

    fn e(&self) -> usize {
        self.params.e()
    }

    fn substitution(&self) -> Substitution<crate::algebra::Fp> {
        Substitution::block(Block::X, &self.images)
    }

    fn check_input(&self, f: &FpPoly) -> Result<()> {
        if f.p() != self.p() {
            return Err(Error::DomainMismatch(format!("F_{}", f.p()), format!("F_{}", self.p())));
        }
        if !f.only_blocks(&[Block::X]) || f.max_var_index() > self.e() {
            return Err(Error::DomainMismatch(f.to_string(), format!("F_{}[X1..X{}]", self.p(), self.e())));
        }
        Ok(())
    }

    /// `D(f) = Σ_j D_j(f) Ȳ^j` as a polynomial in `X̄, Ȳ`.
    pub fn apply(&self, f: &FpPoly) -> Result<FpPoly> {
        self.check_input(f)?;
        let t = match self.precision {
            Precision::Exact => Truncation::None,
            Precision::Truncated(d) => Truncation::Degree { block: Block::Y, max: d },
        };
        f.substitute_truncated(&self.substitution(), &t)
    }

    /// `D_j(f)`.
    pub fn component(&self, j: &MultiIndex, f: &FpPoly) -> Result<FpPoly> {
        self.check_input(f)?;
        if j.len() != self.e() {
            return Err(Error::LengthMismatch { expected: self.e(), found: j.len() });
        }
        if let Precision::Truncated(d) = self.precision {
            if j.total() > d {
                return Err(Error::InsufficientBound { bound: d, needed: j.total() });
            }
        }
        if j.is_zero() {
            return Ok(f.clone());
        }
        let mut out = FpPoly::zero(*f.ring());
        for (m, c) in f.terms() {
            let dm = self.monomial_component(j, m)?;
            out = &out + &dm.scale(c);
        }
        Ok(out)
    }

    fn monomial_component(&self, j: &MultiIndex, m: &Monomial) -> Result<FpPoly> {
        let key = (j.clone(), *m);
        if let Some(v) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(v.clone());
        }
        let t = Truncation::Box { block: Block::Y, max: j.clone() };
        let mono = FpPoly::monomial(crate::algebra::Fp::new(self.p()), *m, 1);
        let v = mono.substitute_truncated(&self.substitution(), &t)?.coefficient_of(Block::Y, j);
        self.cache.write().expect("cache lock").insert(key, v.clone());
        Ok(v)
    }

    /// `ev_{[p]_F(X̄^{1/p})}` applied to the expansion of `D(f)`.
    pub fn twisted_series(&self, f: &FpPoly, law: &FormalGroupLaw) -> Result<FpPoly> {
        let p_fold = law.mult_by_n(self.p())?;
        let roots = p_fold
            .iter()
            .map(|c| c.frobenius_root().map(|r| r.rename_block(Block::X, Block::Y)))
            .collect::<Result<Vec<_>>>()?;
        self.apply(f)?.substitute(&Substitution::block(Block::Y, &roots))
    }

    /// `Σ_i D_i^{(p)}(f) Ȳ^i` by direct p-fold composition. Only `i` in the
    /// `Ȳ`-support of `D(f)` can contribute.
    pub fn direct_p_fold_series(&self, f: &FpPoly) -> Result<FpPoly> {
        let p = self.p();
        let mut out = FpPoly::zero(*f.ring());
        for i in self.apply(f)?.split_by_block(Block::Y, self.e()).into_keys() {
            let op = OperatorExpr::single(i.clone(), p);
            let v = op.eval(self, f)?;
            out = &out + &(&v * &FpPoly::block_monomial(p, Block::Y, &i));
        }
        Ok(out)
    }

    /// Both sides of the iterativity diagram for `f`: `D` applied to each
    /// coefficient of `D(f)` (new variables `Z̄`), and `D(f)` evaluated at
    /// `Ȳ ↦ F(Ȳ, Z̄)`.
    pub fn iterativity_sides(&self, f: &FpPoly, law: &FormalGroupLaw) -> Result<(FpPoly, FpPoly)> {
        let p = self.p();
        let df = self.apply(f)?;
        let mut lhs = FpPoly::zero(*f.ring());
        for (i, c) in df.split_by_block(Block::Y, self.e()) {
            let inner = self.apply(&c)?.rename_block(Block::Y, Block::Z);
            lhs = &lhs + &(&inner * &FpPoly::block_monomial(p, Block::Y, &i));
        }
        let shifted: Vec<FpPoly> = law
            .components()
            .iter()
            .map(|c| c.rename_block(Block::Y, Block::Z).rename_block(Block::X, Block::Y))
            .collect();
        let rhs = df.substitute(&Substitution::block(Block::Y, &shifted))?;
        Ok((lhs, rhs))
    }

    /// `D_j(D_i(f)) = Σ_l α_{i,j}(l) D_l(f)`, as a pair of sides.
    pub fn iterativity_instance(
        &self,
        table: &IterativityTable,
        i: &MultiIndex,
        j: &MultiIndex,
        f: &FpPoly,
    ) -> Result<(FpPoly, FpPoly)> {
        let lhs = self.component(j, &self.component(i, f)?)?;
        let mut rhs = FpPoly::zero(*f.ring());
        for (l, a) in table.get(i, j)?.iter() {
            rhs = &rhs + &self.component(l, f)?.scale(a);
        }
        Ok((lhs, rhs))
    }

    /// `D(num) · D(den)^{-1}` modulo `Ȳ`-degree `> ybound`.
    pub fn extend_to_rational(&self, r: &RatFun, ybound: u32) -> Result<TruncSeries> {
        let num = TruncSeries::from_poly(self.apply(r.num())?, Block::Y, ybound);
        let den = TruncSeries::from_poly(self.apply(r.den())?, Block::Y, ybound);
        Ok(num.mul(&den.inverse(ybound)?))
    }
}

/// `D_{j₁}^{(r₁)}∘…∘D_{j_k}^{(r_k)}`, applied right to left. Empty is the
/// identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Composite(pub Vec<(MultiIndex, u32)>);

/// An F_p-linear combination of composites.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct OperatorExpr {
    terms: Vec<(i64, Composite)>,
}

impl OperatorExpr {
    pub fn identity() -> Self {
        OperatorExpr { terms: vec![(1, Composite::default())] }
    }

    pub fn from_composite(c: Composite) -> Self {
        OperatorExpr { terms: vec![(1, c)] }
    }

    /// `D_j^{(repeat)}`.
    pub fn single(j: MultiIndex, repeat: u32) -> Self {
        assert!(repeat >= 1);
        Self::from_composite(Composite(vec![(j, repeat)]))
    }

    /// `∂_{i,n} = D_{(0,…,n,…,0)}` with `n` in slot `i` (1-based).
    pub fn partial(e: usize, i: usize, n: u32) -> Self {
        Self::single(MultiIndex::unit(e, i, n), 1)
    }

    /// `∂_{1,i₁}∘∂_{1,i₂}^{(p)}∘…∘∂_{1,i_e}^{(p^{e-1})}`.
    pub fn defining_composite(i: &MultiIndex, p: u32) -> Self {
        let e = i.len();
        let factors = i
            .entries()
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .map(|(k, &n)| (MultiIndex::unit(e, 1, n), p.pow(k as u32)))
            .collect();
        Self::from_composite(Composite(factors))
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut terms = Vec::new();
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let mut f = c.0.clone();
                f.extend(d.0.iter().cloned());
                terms.push((a * b, Composite(f)));
            }
        }
        OperatorExpr { terms }
    }

    pub fn plus(&self, other: &OperatorExpr) -> OperatorExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        OperatorExpr { terms }
    }

    pub fn scaled(&self, c: i64) -> OperatorExpr {
        OperatorExpr { terms: self.terms.iter().map(|(a, t)| (a * c, t.clone())).collect() }
    }

    pub fn terms(&self) -> &[(i64, Composite)] {
        &self.terms
    }

    pub fn eval(&self, d: &HSDerivation, f: &FpPoly) -> Result<FpPoly> {
        let p = d.p();
        let mut out = FpPoly::zero(*f.ring());
        for (c, comp) in &self.terms {
            let c = c.rem_euclid(p as i64) as u32;
            if c == 0 {
                continue;
            }
            let mut v = f.clone();
            for (j, r) in comp.0.iter().rev() {
                for _ in 0..*r {
                    if v.is_zero() {
                        break;
                    }
                    v = d.component(j, &v)?;
                }
            }
            out = &out + &v.scale(&c);
        }
        Ok(out)
    }

    /// Parses `"D(1,0)^2"`, `"D(1,1) o D(0,1)^3"`, `"2*D(1,0) + id"`.
    /// Composition may be written `∘`, `o`, `.` or `*`.
    pub fn parse(s: &str, e: usize) -> Result<Self> {
        OpParser { chars: s.chars().collect(), pos: 0, e }.expr()
    }
}

impl fmt::Display for Composite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        for (k, (j, r)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " o ")?;
            }
            write!(f, "D{j}")?;
            if *r > 1 {
                write!(f, "^{r}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for OperatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (c, comp)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *c != 1 {
                write!(f, "{c}*")?;
            }
            write!(f, "{comp}")?;
        }
        Ok(())
    }
}

struct OpParser {
    chars: Vec<char>,
    pos: usize,
    e: usize,
}

impl OpParser {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at position {} in operator expression", self.pos))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err("number out of range"))
    }

    fn expr(&mut self) -> Result<OperatorExpr> {
        let mut out = OperatorExpr::default();
        let mut negate = self.eat('-');
        loop {
            let mut t = self.term()?;
            if negate {
                t.terms.iter_mut().for_each(|(c, _)| *c = -*c);
            }
            out = out.plus(&t);
            match self.peek() {
                None => return Ok(out),
                Some('+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some('-') => {
                    self.pos += 1;
                    negate = true;
                }
                Some(_) => return Err(self.err("unexpected character")),
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr> {
        let mut coeff = 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.number()? as i64;
            self.eat('*');
        }
        let mut factors = Vec::new();
        loop {
            if let Some(f) = self.factor()? {
                factors.push(f);
            }
            let save = self.pos;
            match self.peek() {
                Some('∘') | Some('.') | Some('*') => self.pos += 1,
                Some('o') if self.chars.get(self.pos + 1).is_some_and(|c| c.is_whitespace()) => self.pos += 1,
                Some('D') | Some('d') => {}
                _ => {
                    self.pos = save;
                    break;
                }
            }
        }
        Ok(OperatorExpr { terms: vec![(coeff, Composite(factors))] })
    }

    fn factor(&mut self) -> Result<Option<(MultiIndex, u32)>> {
        match self.peek() {
            Some('D') | Some('d') => self.pos += 1,
            Some('i') if self.chars.get(self.pos + 1) == Some(&'d') => {
                self.pos += 2;
                return Ok(None);
            }
            _ => return Err(self.err("expected D(...) or id")),
        }
        self.eat('_');
        if !self.eat('(') {
            return Err(self.err("expected '('"));
        }
        let mut entries = vec![self.number()?];
        while self.eat(',') {
            entries.push(self.number()?);
        }
        if !self.eat(')') {
            return Err(self.err("expected ')'"));
        }
        if entries.len() != self.e {
            return Err(Error::LengthMismatch { expected: self.e, found: entries.len() });
        }
        let mut repeat = 1;
        if self.eat('^') {
            let paren = self.eat('(');
            repeat = self.number()?;
            if paren && !self.eat(')') {
                return Err(self.err("expected ')'"));
            }
            if repeat == 0 {
                return Err(self.err("repeat must be at least 1"));
            }
        }
        Ok(Some((MultiIndex::new(entries), repeat)))
    }
}

/// `δ_j^i = D_j(X̄^i)` for the canonical derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeltaTable {
    params: Params,
    entries: BTreeMap<(MultiIndex, MultiIndex), FpPoly>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaEntryJson {
    pub i: MultiIndex,
    pub j: MultiIndex,
    pub delta: PolyJson,
}

impl DeltaTable {
    /// All `i ≤ max_i`, `j ≤ max_j` componentwise.
    pub fn build(d: &HSDerivation, max_i: &MultiIndex, max_j: &MultiIndex) -> Result<Self> {
        let p = d.p();
        let mut entries = BTreeMap::new();
        for i in MultiIndex::all_le(max_i) {
            let xi = FpPoly::block_monomial(p, Block::X, &i);
            for j in MultiIndex::all_le(max_j) {
                entries.insert((i.clone(), j.clone()), d.component(&j, &xi)?);
            }
        }
        Ok(DeltaTable { params: d.params(), entries })
    }

    pub fn canonical(params: Params, max_i: &MultiIndex, max_j: &MultiIndex) -> Result<Self> {
        Self::build(&HSDerivation::canonical_witt(params)?, max_i, max_j)
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn get(&self, i: &MultiIndex, j: &MultiIndex) -> Option<&FpPoly> {
        self.entries.get(&(i.clone(), j.clone()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &FpPoly)> {
        self.entries.iter()
    }

    pub fn to_json(&self) -> Vec<DeltaEntryJson> {
        self.entries
            .iter()
            .map(|((i, j), v)| DeltaEntryJson { i: i.clone(), j: j.clone(), delta: v.to_json(self.params.e()) })
            .collect()
    }
}
