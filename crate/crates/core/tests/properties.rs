use proptest::prelude::*;

use wittcheck::algebra::{Block, Monomial, Substitution};
use wittcheck::fgl::{make_fgl, LawKind};
use wittcheck::hsd::{HSDerivation, OperatorExpr};
use wittcheck::pbasis::{derivation_via_pbasis, p_power_decompose, reassemble, PBasisContext};
use wittcheck::verifier::{mw_coefficient, padic_expansion};
use wittcheck::{Fp, FpPoly, MultiIndex, Params, RatFun, TruncSeries};

const E: usize = 2;

fn poly_in(p: u32, blocks: &'static [Block], max_exp: u32, max_terms: usize) -> impl Strategy<Value = FpPoly> {
    let term = (prop::collection::vec(0..=max_exp, blocks.len() * E), 1..p);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let terms = terms.into_iter().map(|(exps, c)| {
            let mut m = Monomial::ONE;
            for (b, chunk) in blocks.iter().zip(exps.chunks(E)) {
                m = m.mul(&Monomial::from_block(*b, &MultiIndex::new(chunk.to_vec())));
            }
            (m, c)
        });
        FpPoly::from_terms(Fp::new(p), terms)
    })
}

fn x_poly(p: u32) -> impl Strategy<Value = FpPoly> {
    poly_in(p, &[Block::X], 3, 4)
}

fn unit_ratfun(p: u32) -> impl Strategy<Value = RatFun> {
    (x_poly(p), poly_in(p, &[Block::X], 2, 2), 1..p).prop_map(move |(num, tail, c)| {
        let tail = &tail - &FpPoly::fp_constant(p, tail.coeff(&Monomial::ONE) as i64);
        let den = &FpPoly::fp_constant(p, c as i64) + &tail;
        RatFun::new(num, den).unwrap()
    })
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws((p, f, g, h) in prime().prop_flat_map(|p| (Just(p), x_poly(p), x_poly(p), x_poly(p)))) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert_eq!((&f + &g).pow(p), &f.pow(p) + &g.pow(p));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn substitution_is_a_homomorphism(f in x_poly(3), g in x_poly(3), a in poly_in(3, &[Block::X, Block::Y], 1, 3), b in poly_in(3, &[Block::Y], 2, 2)) {
        let s = Substitution::block(Block::X, &[a, b]);
        let sf = f.substitute(&s).unwrap();
        let sg = g.substitute(&s).unwrap();
        prop_assert_eq!((&f * &g).substitute(&s).unwrap(), &sf * &sg);
        prop_assert_eq!((&f + &g).substitute(&s).unwrap(), &sf + &sg);
    }

    #[test]
    fn coefficient_reassembly(f in poly_in(5, &[Block::X, Block::Y], 3, 6)) {
        let mut back = FpPoly::zero(Fp::new(5));
        for j in MultiIndex::all_le(&MultiIndex::new(vec![3, 3])) {
            back = &back + &(&f.coefficient_of(Block::Y, &j) * &FpPoly::block_monomial(5, Block::Y, &j));
        }
        prop_assert_eq!(back, f);
    }

    #[test]
    fn series_inverse(c0 in poly_in(3, &[Block::X], 2, 3), rest in poly_in(3, &[Block::X, Block::Y], 2, 3), d in 0u32..4) {
        prop_assume!(!c0.is_zero());
        let rest = &rest - &rest.coefficient_of(Block::Y, &MultiIndex::zero(4));
        let f = TruncSeries::from_poly(&c0 + &rest, Block::Y, 6);
        let inv = f.inverse(d).unwrap();
        prop_assert_eq!(inv.bound(), d);
        let one = TruncSeries::from_poly(FpPoly::fp_constant(3, 1), Block::Y, d);
        prop_assert_eq!(f.mul(&inv), one);
    }

    #[test]
    fn frobenius_root_inverts_power(f in poly_in(3, &[Block::X, Block::Y], 3, 5)) {
        prop_assert_eq!(f.frobenius_power(3).frobenius_root().unwrap(), f.clone());
        prop_assert_eq!(f.frobenius_power(3), f.pow(3));
    }

    #[test]
    fn ratfun_normalization(a in x_poly(3), b in x_poly(3), c in x_poly(3)) {
        prop_assume!(!b.is_zero() && !c.is_zero());
        let r = RatFun::new(&a * &c, &b * &c).unwrap();
        prop_assert_eq!(&r, &RatFun::new(a, b).unwrap());
        if let Some((_, lc)) = r.den().leading() {
            prop_assert_eq!(*lc, 1);
        }
    }

    #[test]
    fn derivation_is_hasse_schmidt((p, f, g) in prime().prop_flat_map(|p| (Just(p), poly_in(p, &[Block::X], 2, 4), poly_in(p, &[Block::X], 2, 4)))) {
        let ps = Params::new(p, E).unwrap();
        for kind in [LawKind::Witt, LawKind::Additive] {
            let d = HSDerivation::from_law(&make_fgl(kind, ps).unwrap()).unwrap();
            let (df, dg) = (d.apply(&f).unwrap(), d.apply(&g).unwrap());
            prop_assert_eq!(d.apply(&(&f * &g)).unwrap(), &df * &dg);
            prop_assert_eq!(d.apply(&(&f + &g)).unwrap(), &df + &dg);
            prop_assert_eq!(df.coefficient_of(Block::Y, &MultiIndex::zero(4)), f.clone());
            for j in MultiIndex::all_up_to_total(E, 3) {
                let mut leibniz = FpPoly::zero(Fp::new(p));
                for j1 in MultiIndex::all_le(&j) {
                    let j2 = MultiIndex::new(j.entries().iter().zip(j1.entries()).map(|(a, b)| a - b).collect());
                    leibniz = &leibniz + &(&d.component(&j1, &f).unwrap() * &d.component(&j2, &g).unwrap());
                }
                prop_assert_eq!(d.component(&j, &(&f * &g)).unwrap(), leibniz);
            }
        }
    }

    #[test]
    fn rational_extension_is_multiplicative(r in unit_ratfun(2), s in unit_ratfun(2)) {
        let d = HSDerivation::canonical_witt(Params::new(2, E).unwrap()).unwrap();
        let lhs = d.extend_to_rational(&r.mul(&s), 3).unwrap();
        let rhs = d.extend_to_rational(&r, 3).unwrap().mul(&d.extend_to_rational(&s, 3).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn decomposition_roundtrip(x in unit_ratfun(2), n in 0u32..=3) {
        let ps = Params::new(2, E).unwrap();
        let parts = p_power_decompose(ps, &x, n).unwrap();
        prop_assert!(parts.keys().all(|i| i.max_entry() < ps.p_pow(n)));
        prop_assert_eq!(reassemble(ps, &parts, n), x);
    }

    #[test]
    fn pbasis_route_is_linear_and_stable(x in unit_ratfun(3), y in unit_ratfun(3), a in 1u32..3, j in prop::sample::select(MultiIndex::all_up_to_total(E, 2))) {
        let ctx = PBasisContext::new(Params::new(3, E).unwrap()).unwrap();
        let n = j.max_entry();
        let dx = derivation_via_pbasis(&ctx, &x, &j, n).unwrap();
        let dy = derivation_via_pbasis(&ctx, &y, &j, n).unwrap();
        let combo = x.scale(a).add(&y);
        prop_assert_eq!(derivation_via_pbasis(&ctx, &combo, &j, n).unwrap(), dx.scale(a).add(&dy));
        prop_assert_eq!(derivation_via_pbasis(&ctx, &x, &j, n + 1).unwrap(), dx);
    }

    #[test]
    fn operator_text_roundtrip(factors in prop::collection::vec((0u32..4, 0u32..4, 1u32..4), 0..4), c in 1i64..5) {
        let comp = wittcheck::hsd::Composite(factors.into_iter().map(|(a, b, r)| (MultiIndex::new(vec![a, b]), r)).collect());
        let op = OperatorExpr::from_composite(comp).scaled(c);
        prop_assert_eq!(OperatorExpr::parse(&op.to_string(), E).unwrap(), op);
    }

    #[test]
    fn padic_digits(n in 0u64..100_000, p in prime()) {
        let exp = padic_expansion(n, p);
        prop_assert!(exp.digits.iter().all(|&d| d < p));
        prop_assert!(n == 0 || *exp.digits.last().unwrap() != 0);
        let back = exp.digits.iter().rev().fold(0u64, |acc, &d| acc * p as u64 + d as u64);
        prop_assert_eq!(back, n);
    }

    #[test]
    fn mw_coefficients_are_units(n in 1u64..200, p in prime()) {
        let c = mw_coefficient(n, p).unwrap();
        prop_assert!(c > 0 && c < p);
    }
}

#[test]
fn multiplication_maps_compose() {
    for (kind, p, e) in [(LawKind::Witt, 2, 2), (LawKind::Witt, 3, 2), (LawKind::Additive, 3, 3), (LawKind::Multiplicative, 5, 1)] {
        let law = make_fgl(kind, Params::new(p, e).unwrap()).unwrap();
        let maps: Vec<Vec<FpPoly>> = (1..=6).map(|n| law.mult_by_n(n).unwrap()).collect();
        for n in 1..=5usize {
            for m in 1..=6 - n {
                let combined = law.evaluate(&maps[n - 1], &maps[m - 1]).unwrap();
                assert_eq!(combined, maps[n + m - 1], "{kind:?} p={p} [{n}+{m}]");
            }
        }
    }
}

#[test]
fn iterativity_tables_are_symmetric() {
    for (kind, p, e) in [(LawKind::Witt, 2, 3), (LawKind::Witt, 3, 2), (LawKind::Multiplicative, 3, 1)] {
        let law = make_fgl(kind, Params::new(p, e).unwrap()).unwrap();
        for i in MultiIndex::all_up_to_total(e, 4) {
            for j in MultiIndex::all_up_to_total(e, 4 - i.total()) {
                let a = law.iterativity_constants(&i, &j).unwrap();
                assert_eq!(a, law.iterativity_constants(&j, &i).unwrap());
                assert!(a.keys().all(|l| l.total() <= i.total() + j.total()));
            }
        }
    }
}

#[test]
fn reports_are_reproducible() {
    use wittcheck::verifier::{run_suite, Suite, VerifyConfig};
    let mut cfg = VerifyConfig::new(Params::new(3, 2).unwrap());
    cfg.deg_bound = 3;
    cfg.order_bound = 3;
    cfg.random_ratfuns = 5;
    for suite in [Suite::HSchemes, Suite::PBasis] {
        let a = serde_json::to_string(&run_suite(suite, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(suite, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
