//! Executable checks of the derivation identities on the canonical model
//! `(F_p[X̄], ev_H)`, producing deterministic reports.

mod identities;
mod mw;
mod schemes;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{Block, Fp, FpPoly, Monomial, MultiIndex, Params, RatFun};
use crate::error::Result;

pub use identities::{
    check_fact_2_25, check_iterativity, check_lemma_we_iter, check_witt_law, pbasis_equivalence_check,
};
pub use mw::{mw_coefficient, mw_counterexample, mw_operator, padic_expansion, MwWitness, PAdicExpansion};
pub use schemes::{check_axiom_scheme, h5_witness, strictness_kernel_check, Scheme};

pub const DEFAULT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    WitnessFound,
}

impl Verdict {
    pub fn is_success(self) -> bool {
        self != Verdict::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportParams {
    pub p: u32,
    pub e: usize,
    pub bounds: BTreeMap<String, u32>,
    pub seed: Option<u64>,
}

/// Outcome of one check. `wall_time` is informational only and is left out
/// of the serialized form so reports stay byte-identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub params: ReportParams,
    pub verdict: Verdict,
    pub witness: Value,
    pub details: Vec<String>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl PartialEq for CheckReport {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
            && self.params == other.params
            && self.verdict == other.verdict
            && self.witness == other.witness
            && self.details == other.details
    }
}

impl CheckReport {
    pub(crate) fn new(id: &str, params: Params) -> Self {
        CheckReport {
            id: id.to_string(),
            params: ReportParams { p: params.p(), e: params.e(), bounds: BTreeMap::new(), seed: None },
            verdict: Verdict::Pass,
            witness: Value::Null,
            details: Vec::new(),
            wall_time: Duration::ZERO,
        }
    }

    pub(crate) fn bound(mut self, name: &str, v: u32) -> Self {
        self.params.bounds.insert(name.to_string(), v);
        self
    }

    pub(crate) fn seed(mut self, seed: u64) -> Self {
        self.params.seed = Some(seed);
        self
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    /// Records the first failing instance; later ones are ignored.
    pub(crate) fn fail(&mut self, witness: Value) {
        if self.verdict != Verdict::Fail {
            self.verdict = Verdict::Fail;
            self.witness = witness;
        }
    }

    pub(crate) fn timed(mut self, start: Instant) -> Self {
        self.wall_time = start.elapsed();
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_success()
    }

    /// One line: `[PASS] id (p=2, e=2): detail; detail`.
    pub fn summary(&self) -> String {
        let tag = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::WitnessFound => "WITNESS",
        };
        let mut s = format!("[{tag}] {} (p={}, e={})", self.id, self.params.p, self.params.e);
        if !self.details.is_empty() {
            s.push_str(": ");
            s.push_str(&self.details.join("; "));
        }
        if self.verdict == Verdict::Fail {
            s.push_str(&format!(" | counter-witness {}", self.witness));
        }
        s
    }
}

/// Bounds and seed shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub params: Params,
    pub deg_bound: u32,
    pub order_bound: u32,
    pub n: u32,
    pub seed: u64,
    pub random_polys: usize,
    pub random_ratfuns: usize,
}

impl VerifyConfig {
    pub fn new(params: Params) -> Self {
        VerifyConfig {
            params,
            deg_bound: 6,
            order_bound: 6,
            n: 3,
            seed: DEFAULT_SEED,
            random_polys: 8,
            random_ratfuns: 100,
        }
    }
}

/// Test inputs: every monomial of degree `≤ deg_bound` in `X̄`, then a
/// seeded sample of sparse polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub monomials: Vec<FpPoly>,
    pub random: Vec<FpPoly>,
}

impl Corpus {
    pub fn new(params: Params, deg_bound: u32, random: usize, seed: u64) -> Self {
        let p = params.p();
        let monomials = MultiIndex::all_up_to_total(params.e(), deg_bound)
            .iter()
            .map(|m| FpPoly::block_monomial(p, Block::X, m))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random = (0..random).map(|_| random_poly(&mut rng, params, deg_bound, 4)).collect();
        Corpus { monomials, random }
    }

    pub fn from_config(cfg: &VerifyConfig) -> Self {
        Self::new(cfg.params, cfg.deg_bound, cfg.random_polys, cfg.seed)
    }

    pub fn all(&self) -> Vec<FpPoly> {
        self.monomials.iter().chain(&self.random).cloned().collect()
    }

    /// Pairs for two-argument identities: random elements against a few
    /// low-degree monomials, plus consecutive random pairs.
    pub fn pairs(&self) -> Vec<(FpPoly, FpPoly)> {
        let small: Vec<&FpPoly> = self.monomials.iter().filter(|m| m.total_degree() <= 2).collect();
        let mut out = Vec::new();
        for a in &self.random {
            for b in &small {
                out.push((a.clone(), (*b).clone()));
            }
        }
        for w in self.random.windows(2) {
            out.push((w[0].clone(), w[1].clone()));
        }
        if self.random.is_empty() {
            for a in &small {
                for b in &small {
                    out.push(((*a).clone(), (*b).clone()));
                }
            }
        }
        out
    }
}

/// A sparse polynomial with up to `max_terms` terms of degree `≤ deg`.
pub fn random_poly(rng: &mut ChaCha8Rng, params: Params, deg: u32, max_terms: usize) -> FpPoly {
    let p = params.p();
    let e = params.e();
    let n_terms = rng.gen_range(1..=max_terms);
    let terms: Vec<(Monomial, u32)> = (0..n_terms)
        .map(|_| {
            let total = rng.gen_range(0..=deg);
            let mut exps = vec![0u32; e];
            for _ in 0..total {
                exps[rng.gen_range(0..e)] += 1;
            }
            (Monomial::from_block(Block::X, &MultiIndex::new(exps)), rng.gen_range(1..p))
        })
        .collect();
    FpPoly::from_terms(Fp::new(p), terms)
}

/// `f/g` with `g` having constant term 1.
pub fn random_ratfun(rng: &mut ChaCha8Rng, params: Params) -> RatFun {
    let p = params.p();
    let num = random_poly(rng, params, 3, 3);
    let tail = random_poly(rng, params, 2, 2);
    let tail = &tail - &FpPoly::fp_constant(p, tail.coeff(&Monomial::ONE) as i64);
    let den = &FpPoly::fp_constant(p, 1) + &tail;
    RatFun::new(num, den).expect("unit constant term")
}

/// Runs `check` on every item in parallel and returns the first (in input
/// order) counter-witness or error.
pub(crate) fn first_failure<T, F>(items: &[T], check: F) -> Result<Option<Value>>
where
    T: Sync,
    F: Fn(&T) -> Result<Option<Value>> + Sync + Send,
{
    let results: Vec<Result<Option<Value>>> = items.par_iter().map(&check).collect();
    for r in results {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// A mismatch payload for two sides of an identity.
pub(crate) fn mismatch(what: String, f: &FpPoly, lhs: &FpPoly, rhs: &FpPoly) -> Value {
    json!({ "identity": what, "f": f.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    WittLaw,
    Iterativity,
    LemmaWeIter,
    Fact225,
    HSchemes,
    H5,
    H6,
    MwCounterexample,
    PBasis,
}

impl Suite {
    pub const NAMES: [&'static str; 10] = [
        "all",
        "witt-law",
        "iterativity",
        "lemma-we-iter",
        "fact-2-25",
        "h-schemes",
        "h5",
        "h6",
        "mw-counterexample",
        "pbasis",
    ];
}

impl std::str::FromStr for Suite {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "witt-law" => Suite::WittLaw,
            "iterativity" => Suite::Iterativity,
            "lemma-we-iter" => Suite::LemmaWeIter,
            "fact-2-25" => Suite::Fact225,
            "h-schemes" => Suite::HSchemes,
            "h5" => Suite::H5,
            "h6" => Suite::H6,
            "mw-counterexample" => Suite::MwCounterexample,
            "pbasis" => Suite::PBasis,
            other => return Err(crate::Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

/// Runs a suite; reports come back in a fixed order.
pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<CheckReport>> {
    let corpus = Corpus::from_config(cfg);
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::WittLaw {
        out.push(check_witt_law(cfg.params)?);
    }
    if all || suite == Suite::Iterativity {
        out.push(check_iterativity(cfg, &corpus)?);
    }
    if all || suite == Suite::LemmaWeIter {
        out.push(check_lemma_we_iter(cfg, &corpus)?);
    }
    if all || suite == Suite::Fact225 {
        out.push(check_fact_2_25(cfg.params, crate::fgl::LawKind::Witt, &corpus)?);
    }
    if all || suite == Suite::HSchemes {
        for s in Scheme::ALL {
            out.push(check_axiom_scheme(s, cfg, &corpus)?);
        }
    }
    if suite == Suite::H5 {
        out.push(h5_witness(cfg.params)?);
    }
    if suite == Suite::H6 {
        out.push(strictness_kernel_check(cfg.params, cfg.deg_bound, &corpus)?);
    }
    if all || suite == Suite::MwCounterexample {
        out.push(mw_counterexample(cfg.deg_bound)?);
    }
    if all || suite == Suite::PBasis {
        out.push(pbasis_equivalence_check(cfg)?);
    }
    Ok(out)
}
