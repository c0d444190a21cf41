//! Witt-law, iterativity, operator-identity and p-basis checks.

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{first_failure, mismatch, random_ratfun, CheckReport, Corpus, VerifyConfig};
use crate::algebra::{binomial_mod, Block, FpPoly, MultiIndex, Params, ZPoly, MAX_E};
use crate::error::Result;
use crate::fgl::{make_fgl, FormalGroupLaw, IterativityTable, LawKind};
use crate::hsd::{HSDerivation, OperatorExpr};
use crate::pbasis::{derivation_via_pbasis, p_power_decompose, reassemble, PBasisContext};
use crate::witt::{frobenius_verschiebung_restriction, ghost_component, witt_addition_law, witt_polynomial};

/// Ghost identity over Z, reduction mod p, triangular shape,
/// `[p]_H = fr∘ve∘re`, and the group-law axioms.
pub fn check_witt_law(params: Params) -> Result<CheckReport> {
    let start = Instant::now();
    let p = params.p();
    let e = params.e();
    let mut report = CheckReport::new("witt-law", params);
    let law = witt_addition_law(params)?;
    for m in 0..e {
        let lhs = ghost_component(p, m, &law.integral()[..=m]);
        let rhs: ZPoly = &witt_polynomial(p, m, Block::X) + &witt_polynomial(p, m, Block::Y);
        if lhs != rhs {
            report.fail(json!({ "ghost": m, "lhs": lhs.to_string(), "rhs": rhs.to_string() }));
        }
    }
    for (k, (s, h)) in law.integral().iter().zip(law.reduced()).enumerate() {
        if &s.reduce_mod(p) != h {
            report.fail(json!({ "reduction": k + 1, "integral": s.to_string(), "reduced": h.to_string() }));
        }
        let rest = &(h - &FpPoly::fp_var(p, Block::X, k + 1)) - &FpPoly::fp_var(p, Block::Y, k + 1);
        if rest.max_var_index() > k {
            report.fail(json!({ "triangularity": k + 1, "tail": rest.to_string() }));
        }
    }
    report.note(format!("ghost identity holds for m < {e}"));
    let fgl = make_fgl(LawKind::Witt, params)?;
    let mult = fgl.mult_by_n(p)?;
    let fvr = frobenius_verschiebung_restriction(params)?;
    if mult != fvr {
        report.fail(json!({
            "mult_by_p": mult.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "fr_ve_re": fvr.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        }));
    }
    report.note("[p] = fr o ve o re");
    let axioms = fgl.axiom_check()?;
    if !axioms.all_pass() {
        report.fail(serde_json::to_value(&axioms).expect("serializable"));
    }
    report.note("unit, associativity, commutativity exact");
    Ok(report.timed(start))
}

fn binomial_table_mismatch(law: &FormalGroupLaw, order: u32) -> Result<Option<serde_json::Value>> {
    let p = law.params().p();
    let e = law.params().e();
    for i in MultiIndex::all_up_to_total(e, order) {
        for j in MultiIndex::all_up_to_total(e, order - i.total()) {
            let got = law.iterativity_constants(&i, &j)?;
            let c = i
                .entries()
                .iter()
                .zip(j.entries())
                .fold(1, |acc, (&a, &b)| acc * binomial_mod((a + b) as u64, a as u64, p) % p);
            let ok = if c == 0 { got.is_empty() } else { got.len() == 1 && got.get(&i.add(&j)) == Some(&c) };
            if !ok {
                return Ok(Some(json!({ "i": i.to_string(), "j": j.to_string(), "alpha": format!("{got:?}"), "binomial": c })));
            }
        }
    }
    Ok(None)
}

/// Additive tables against binomials (`|i|+|j| ≤ 8`), `W₁ = 𝔾ₐ`, symmetry
/// and `α_{i,0̄}`, and the table replayed against composed components and
/// the full iterativity diagram on the corpus.
pub fn check_iterativity(cfg: &VerifyConfig, corpus: &Corpus) -> Result<CheckReport> {
    let start = Instant::now();
    let params = cfg.params;
    let p = params.p();
    let e = params.e();
    let order = cfg.order_bound;
    let mut report = CheckReport::new("iterativity", params).bound("order", order).bound("deg", cfg.deg_bound).seed(cfg.seed);
    let binom_order = order.max(8);
    if let Some(w) = binomial_table_mismatch(&make_fgl(LawKind::Additive, params)?, binom_order)? {
        report.fail(w);
    }
    let w1 = make_fgl(LawKind::Witt, Params::new(p, 1)?)?;
    let ga1 = make_fgl(LawKind::Additive, Params::new(p, 1)?)?;
    for i in 0..=binom_order {
        for j in 0..=binom_order - i {
            let (i, j) = (MultiIndex::new(vec![i]), MultiIndex::new(vec![j]));
            let (a, b) = (w1.iterativity_constants(&i, &j)?, ga1.iterativity_constants(&i, &j)?);
            if a != b {
                report.fail(json!({ "w1_vs_ga": [i.to_string(), j.to_string()], "w1": format!("{a:?}"), "ga": format!("{b:?}") }));
            }
        }
    }
    report.note(format!("additive tables are binomial and W_1 = G_a up to order {binom_order}"));

    let law = make_fgl(LawKind::Witt, params)?;
    let table = IterativityTable::new(law.clone());
    let d = HSDerivation::from_law(&law)?;
    let mut cases = Vec::new();
    for i in MultiIndex::all_up_to_total(e, order) {
        for j in MultiIndex::all_up_to_total(e, order - i.total()) {
            cases.push((i.clone(), j));
        }
    }
    let all = corpus.all();
    if let Some(w) = first_failure(&cases, |(i, j)| {
        let a = table.get(i, j)?;
        if a != table.get(j, i)? {
            return Ok(Some(json!({ "asymmetric": [i.to_string(), j.to_string()] })));
        }
        if j.is_zero() && a.iter().map(|(l, v)| (l.clone(), *v)).ne([(i.clone(), 1)]) {
            return Ok(Some(json!({ "alpha_i_0": i.to_string(), "alpha": format!("{a:?}") })));
        }
        for f in &all {
            let (lhs, rhs) = d.iterativity_instance(&table, i, j, f)?;
            if lhs != rhs {
                return Ok(Some(mismatch(format!("D_{j} D_{i} = sum alpha D_l"), f, &lhs, &rhs)));
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note(format!("{} table entries replayed on {} corpus elements", cases.len(), all.len()));

    if let Some(w) = first_failure(&all, |f| {
        let (lhs, rhs) = d.iterativity_sides(f, &law)?;
        Ok((lhs != rhs).then(|| mismatch("iterativity diagram".into(), f, &lhs, &rhs)))
    })? {
        report.fail(w);
    }
    report.note("iterativity diagram commutes on the corpus");
    Ok(report.timed(start))
}

/// `D_i^{(pᵉ)} = 0` (`0 < |i| ≤ 3`), `∂_{i,n}^{(p)} = ∂_{i+1,n}` and
/// `∂_{e,n}^{(p)} = 0` (`n ≤ 4`), `D_i = ∂_{1,i₁}∘∂_{1,i₂}^{(p)}∘…` and the
/// splitting `D_{(i₁..i_n,0..)}∘D_{(0..,i_{n+1}..)} = D_i` (`|i| ≤ order`).
pub fn check_lemma_we_iter(cfg: &VerifyConfig, corpus: &Corpus) -> Result<CheckReport> {
    let start = Instant::now();
    let params = cfg.params;
    let p = params.p();
    let e = params.e();
    let pe = params.p_pow(e as u32);
    let d = HSDerivation::canonical_witt(params)?;
    let mut report = CheckReport::new("lemma-we-iter", params).bound("order", cfg.order_bound).bound("deg", cfg.deg_bound).seed(cfg.seed);
    let all = corpus.all();
    let zero = FpPoly::fp_constant(p, 0);

    let nilpotent: Vec<MultiIndex> = MultiIndex::all_up_to_total(e, 3).into_iter().filter(|i| !i.is_zero()).collect();
    if let Some(w) = first_failure(&nilpotent, |i| {
        let op = OperatorExpr::single(i.clone(), pe);
        for f in &all {
            let v = op.eval(&d, f)?;
            if !v.is_zero() {
                return Ok(Some(mismatch(format!("D_{i}^({pe}) = 0"), f, &v, &zero)));
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note(format!("(i) D_i^({pe}) = 0 for 0 < |i| <= 3"));

    let shifts: Vec<(usize, u32)> = (1..=e).flat_map(|i| (1..=4).map(move |n| (i, n))).collect();
    if let Some(w) = first_failure(&shifts, |&(i, n)| {
        let lhs_op = OperatorExpr::single(MultiIndex::unit(e, i, n), p);
        for f in &all {
            let lhs = lhs_op.eval(&d, f)?;
            let rhs = if i < e { OperatorExpr::partial(e, i + 1, n).eval(&d, f)? } else { zero.clone() };
            if lhs != rhs {
                return Ok(Some(mismatch(format!("d_{{{i},{n}}}^({p})"), f, &lhs, &rhs)));
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note("(ii) d_{i,n}^(p) = d_{i+1,n}, d_{e,n}^(p) = 0 for n <= 4");

    let indices: Vec<MultiIndex> = MultiIndex::all_up_to_total(e, cfg.order_bound);
    if let Some(w) = first_failure(&indices, |i| {
        let direct = OperatorExpr::single(i.clone(), 1);
        let factored = OperatorExpr::defining_composite(i, p);
        let splits: Vec<OperatorExpr> = (0..=e)
            .map(|n| {
                let head: Vec<u32> = (0..e).map(|k| if k < n { i.entries()[k] } else { 0 }).collect();
                let tail: Vec<u32> = (0..e).map(|k| if k < n { 0 } else { i.entries()[k] }).collect();
                OperatorExpr::single(MultiIndex::new(head), 1).compose(&OperatorExpr::single(MultiIndex::new(tail), 1))
            })
            .collect();
        for f in &all {
            let want = direct.eval(&d, f)?;
            let got = factored.eval(&d, f)?;
            if got != want {
                return Ok(Some(mismatch(format!("(iii) D_{i} = {factored}"), f, &want, &got)));
            }
            for (n, op) in splits.iter().enumerate() {
                let got = op.eval(&d, f)?;
                if got != want {
                    return Ok(Some(mismatch(format!("split at {n}: D_{i} = {op}"), f, &want, &got)));
                }
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note(format!("(iii) factorization and splitting for |i| <= {}", cfg.order_bound));
    Ok(report.timed(start))
}

/// `Σ_i D_i^{(p)}(f) Ȳ^i` computed by p-fold composition against the
/// substitution `Ȳ ↦ [p]_F(Ȳ^{1/p})` in `D(f)`.
pub fn check_fact_2_25(params: Params, kind: LawKind, corpus: &Corpus) -> Result<CheckReport> {
    let start = Instant::now();
    let law = make_fgl(kind, params)?;
    let d = HSDerivation::from_law(&law)?;
    let mut report = CheckReport::new("fact-2-25", params);
    report.note(format!("law {kind:?}"));
    let all = corpus.all();
    if let Some(w) = first_failure(&all, |f| {
        let direct = d.direct_p_fold_series(f)?;
        let twisted = d.twisted_series(f, &law)?;
        Ok((direct != twisted).then(|| mismatch("p-fold series".into(), f, &direct, &twisted)))
    })? {
        report.fail(w);
    }
    report.note(format!("{} corpus elements", all.len()));
    Ok(report.timed(start))
}

/// For seeded random `x = f/g` with `g(0) ≠ 0`, every `|j| ≤ 3` and
/// `max(j) ≤ n ≤ cfg.n`: the p-basis route equals the coefficient of the
/// rational extension of `D`, independently of `n`. Also checks the
/// decomposition reassembles to `x`, and that `D_{j'}` kills the p^n-th
/// powers entering it for `0 < j' ≤ j`.
pub fn pbasis_equivalence_check(cfg: &VerifyConfig) -> Result<CheckReport> {
    let start = Instant::now();
    let params = cfg.params;
    let e = params.e();
    let p = params.p();
    let ctx = PBasisContext::new(params)?;
    let mut report = CheckReport::new("pbasis", params).bound("n", cfg.n).bound("samples", cfg.random_ratfuns as u32).seed(cfg.seed);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let xs: Vec<_> = (0..cfg.random_ratfuns).map(|_| random_ratfun(&mut rng, params)).collect();
    let js: Vec<MultiIndex> = MultiIndex::all_up_to_total(e, 3).into_iter().filter(|j| j.max_entry() <= cfg.n).collect();
    let pad = |j: &MultiIndex| {
        let mut v = j.entries().to_vec();
        v.resize(MAX_E, 0);
        MultiIndex::new(v)
    };
    if let Some(w) = first_failure(&xs, |x| {
        let series = ctx.derivation().extend_to_rational(x, 3)?;
        for n in 0..=cfg.n {
            let parts = p_power_decompose(params, x, n)?;
            if &reassemble(params, &parts, n) != x {
                return Ok(Some(json!({ "x": x.to_string(), "n": n, "reassembly": "failed" })));
            }
        }
        for j in &js {
            let reference = series.coefficient(&pad(j));
            for n in j.max_entry()..=cfg.n {
                let got = derivation_via_pbasis(&ctx, x, j, n)?;
                if got != reference {
                    return Ok(Some(json!({
                        "x": x.to_string(), "j": j.to_string(), "n": n,
                        "pbasis": got.to_string(), "extension": reference.to_string(),
                    })));
                }
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note(format!("{} rational functions, {} indices j, n <= {}", xs.len(), js.len(), cfg.n));

    // the vanishing that makes the route valid, on the pieces of a few samples
    let q_cases: Vec<(usize, u32)> = (0..xs.len().min(10)).flat_map(|k| (1..=cfg.n).map(move |n| (k, n))).collect();
    if let Some(w) = first_failure(&q_cases, |&(k, n)| {
        let x = &xs[k];
        let q = params.p_pow(n);
        let parts = p_power_decompose(params, x, n)?;
        let mut powers: Vec<FpPoly> = parts.values().map(|a| a.num().frobenius_power(q)).collect();
        powers.push(x.den().frobenius_power(q));
        for j in MultiIndex::all_le(&MultiIndex::new(vec![n; e])) {
            if j.is_zero() || j.total() > 3 {
                continue;
            }
            for u in &powers {
                let v = ctx.derivation().component(&j, u)?;
                if !v.is_zero() {
                    return Ok(Some(mismatch(format!("D_{j} of a {q}-th power"), u, &v, &FpPoly::fp_constant(p, 0))));
                }
            }
        }
        Ok(None)
    })? {
        report.fail(w);
    }
    report.note("D_j vanishes on p^n-th powers for 0 < j <= (n,..,n)");
    Ok(report.timed(start))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::Verdict;

    fn cfg(p: u32, e: usize, deg: u32, order: u32) -> VerifyConfig {
        let mut c = VerifyConfig::new(Params::new(p, e).unwrap());
        c.deg_bound = deg;
        c.order_bound = order;
        c.random_polys = 3;
        c.random_ratfuns = 5;
        c
    }

    #[test]
    fn small_suites_pass() {
        let c = cfg(2, 2, 3, 3);
        let corpus = Corpus::from_config(&c);
        for r in [
            check_witt_law(c.params).unwrap(),
            check_iterativity(&c, &corpus).unwrap(),
            check_lemma_we_iter(&c, &corpus).unwrap(),
            check_fact_2_25(c.params, LawKind::Witt, &corpus).unwrap(),
            check_fact_2_25(c.params, LawKind::Additive, &corpus).unwrap(),
            pbasis_equivalence_check(&c).unwrap(),
        ] {
            assert_eq!(r.verdict, Verdict::Pass, "{}", r.summary());
        }
    }

    #[test]
    fn fact_2_25_examples() {
        let ps = Params::new(3, 1).unwrap();
        let corpus = Corpus { monomials: vec![crate::algebra::parse::parse_poly("X1^2", 3).unwrap()], random: vec![] };
        let r = check_fact_2_25(ps, LawKind::Witt, &corpus).unwrap();
        assert!(r.passed());
        let law = make_fgl(LawKind::Witt, ps).unwrap();
        let d = HSDerivation::from_law(&law).unwrap();
        let f = &corpus.monomials[0];
        assert_eq!(&d.twisted_series(f, &law).unwrap(), f);
    }
}
