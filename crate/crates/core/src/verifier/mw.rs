//! The operators `D_n` defined from `D_1, D_p, D_{p²}, …` through p-adic
//! digits, and the failure of the Leibniz rule for them.

use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{CheckReport, Verdict};
use crate::algebra::{Block, Fp, FpPoly, MultiIndex, Params};
use crate::error::{Error, Result};
use crate::hsd::{Composite, HSDerivation, OperatorExpr};

/// `n = Σ γ_t p^t` with `0 ≤ γ_t < p`; `digits[t] = γ_t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicExpansion {
    pub n: u64,
    pub p: u32,
    pub digits: Vec<u32>,
}

pub fn padic_expansion(n: u64, p: u32) -> PAdicExpansion {
    let mut digits = Vec::new();
    let mut m = n;
    while m > 0 {
        digits.push((m % p as u64) as u32);
        m /= p as u64;
    }
    if digits.is_empty() {
        digits.push(0);
    }
    PAdicExpansion { n, p, digits }
}

fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(p!)^{γ₁}⋯(p^s!)^{γ_s} / n!` reduced mod p. The rational must be a
/// p-adic unit; anything else is reported as `NonUnit`.
pub fn mw_coefficient(n: u64, p: u32) -> Result<u32> {
    if n == 0 {
        return Ok(1);
    }
    let exp = padic_expansion(n, p);
    let mut num = BigUint::one();
    for (t, &g) in exp.digits.iter().enumerate().skip(1) {
        num *= factorial((p as u64).pow(t as u32)).pow(g);
    }
    let mut den = factorial(n);
    let g = num.gcd(&den);
    num /= &g;
    den /= &g;
    let pb = BigUint::from(p);
    if (&num % &pb).is_zero() || (&den % &pb).is_zero() {
        return Err(Error::NonUnit(format!("{num}/{den} for n={n}, p={p}")));
    }
    let fp = Fp::new(p);
    let a = (&num % &pb).to_u32().expect("residue");
    let b = (&den % &pb).to_u32().expect("residue");
    Ok(a * fp.inv(b) % p)
}

/// `D_n = c · D_1^{(γ₀)}∘D_p^{(γ₁)}∘…` with `D_{p^t} := D_{(p^t,0,…,0)}`.
pub fn mw_operator(n: u64, params: Params) -> Result<OperatorExpr> {
    let p = params.p();
    let c = mw_coefficient(n, p)?;
    let exp = padic_expansion(n, p);
    let factors = exp
        .digits
        .iter()
        .enumerate()
        .filter(|(_, &g)| g > 0)
        .map(|(t, &g)| (MultiIndex::unit(params.e(), 1, p.pow(t as u32)), g))
        .collect();
    Ok(OperatorExpr::from_composite(Composite(factors)).scaled(c as i64))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MwWitness {
    pub x: String,
    pub y: String,
    pub delta: String,
    pub d1_2: String,
    pub d1_3: String,
}

/// In the canonical `W₂` model at `p = 2`, searches monomials of degree
/// `≤ degbound` (graded-lex) for `x` where `D₃ := c·D₁∘D₂` breaks the
/// Leibniz rule on `x·y`, `y = D₁^{(2)}(x)`. The discrepancy identity
/// `Δ = D₁^{(2)}(x)·D₁^{(3)}(x) + D₁(x)·D₁^{(4)}(x)` and `D₁^{(4)}(x) = 0`
/// are checked for every searched `x`.
pub fn mw_counterexample(degbound: u32) -> Result<CheckReport> {
    let start = Instant::now();
    let params = Params::new(2, 2)?;
    let d = HSDerivation::canonical_witt(params)?;
    let mut report = CheckReport::new("mw-counterexample", params).bound("deg", degbound);
    let c = mw_coefficient(3, 2)?;
    report.note(format!("mw_coefficient(3, 2) = {c}"));
    let ops: Vec<OperatorExpr> = (0..=3).map(|k| mw_operator(k, params)).collect::<Result<_>>()?;
    let d1 = |k: u32| OperatorExpr::single(MultiIndex::unit(2, 1, 1), k);
    let mut witness: Option<MwWitness> = None;
    let mut searched = 0;
    for m in MultiIndex::all_up_to_total(2, degbound) {
        searched += 1;
        let x = FpPoly::block_monomial(2, Block::X, &m);
        let y = d1(2).eval(&d, &x)?;
        let lhs = ops[3].eval(&d, &(&x * &y))?;
        let mut leibniz = FpPoly::zero(*x.ring());
        for k in 0..=3 {
            leibniz = &leibniz + &(&ops[k].eval(&d, &x)? * &ops[3 - k].eval(&d, &y)?);
        }
        let delta = &lhs - &leibniz;
        let d1_3 = d1(3).eval(&d, &x)?;
        let d1_4 = d1(4).eval(&d, &x)?;
        let predicted = &(&y * &d1_3) + &(&d1(1).eval(&d, &x)? * &d1_4);
        if !d1_4.is_zero() || delta != predicted {
            report.fail(json!({
                "x": x.to_string(),
                "delta": delta.to_string(),
                "predicted": predicted.to_string(),
                "d1_4": d1_4.to_string(),
            }));
            break;
        }
        if witness.is_none() && !delta.is_zero() {
            witness = Some(MwWitness {
                x: x.to_string(),
                y: y.to_string(),
                delta: delta.to_string(),
                d1_2: y.to_string(),
                d1_3: d1_3.to_string(),
            });
        }
    }
    report.note(format!("{searched} monomials searched"));
    if report.verdict != Verdict::Fail {
        match witness {
            Some(w) => {
                report.note(format!("x = {}, delta = {}", w.x, w.delta));
                report.verdict = Verdict::WitnessFound;
                report.witness = serde_json::to_value(w).expect("serializable");
            }
            None => report.fail(json!({ "no_witness_up_to_degree": degbound })),
        }
    }
    Ok(report.timed(start))
}
