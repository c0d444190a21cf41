//! Multivariate gcd and exact division over F_p.
//!
//! Polynomials are converted to a recursive dense form (univariate in the
//! last active variable with coefficients one level down) and the gcd is
//! computed with the primitive pseudo-remainder sequence, taking contents
//! recursively.

use super::coeff::{inv_mod, Fp};
use super::monomial::{Monomial, SLOTS};
use super::poly::FpPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Dense {
    C(u32),
    P(Vec<Dense>),
}

struct Arith {
    p: u32,
}

impl Arith {
    fn zero(&self, lvl: usize) -> Dense {
        if lvl == 0 {
            Dense::C(0)
        } else {
            Dense::P(Vec::new())
        }
    }

    fn constant(&self, lvl: usize, c: u32) -> Dense {
        if lvl == 0 {
            Dense::C(c % self.p)
        } else if c.is_multiple_of(self.p) {
            Dense::P(Vec::new())
        } else {
            Dense::P(vec![self.constant(lvl - 1, c)])
        }
    }

    fn is_zero(&self, a: &Dense) -> bool {
        match a {
            Dense::C(c) => *c == 0,
            Dense::P(v) => v.is_empty(),
        }
    }

    fn coeffs<'a>(&self, a: &'a Dense) -> &'a [Dense] {
        match a {
            Dense::P(v) => v,
            Dense::C(_) => unreachable!("coefficient list of a level-0 element"),
        }
    }

    fn deg(&self, a: &Dense) -> usize {
        self.coeffs(a).len() - 1
    }

    fn lc<'a>(&self, a: &'a Dense) -> &'a Dense {
        self.coeffs(a).last().expect("nonzero")
    }

    fn trim(&self, mut v: Vec<Dense>) -> Dense {
        while v.last().is_some_and(|c| self.is_zero(c)) {
            v.pop();
        }
        Dense::P(v)
    }

    fn add(&self, a: &Dense, b: &Dense, lvl: usize) -> Dense {
        match (a, b) {
            (Dense::C(x), Dense::C(y)) => Dense::C(((*x as u64 + *y as u64) % self.p as u64) as u32),
            (Dense::P(x), Dense::P(y)) => {
                let n = x.len().max(y.len());
                let z = self.zero(lvl - 1);
                let v = (0..n).map(|k| self.add(x.get(k).unwrap_or(&z), y.get(k).unwrap_or(&z), lvl - 1)).collect();
                self.trim(v)
            }
            _ => unreachable!("level mismatch"),
        }
    }

    fn neg(&self, a: &Dense) -> Dense {
        match a {
            Dense::C(x) => Dense::C((self.p - x) % self.p),
            Dense::P(v) => Dense::P(v.iter().map(|c| self.neg(c)).collect()),
        }
    }

    fn sub(&self, a: &Dense, b: &Dense, lvl: usize) -> Dense {
        self.add(a, &self.neg(b), lvl)
    }

    fn mul(&self, a: &Dense, b: &Dense, lvl: usize) -> Dense {
        match (a, b) {
            (Dense::C(x), Dense::C(y)) => Dense::C((*x as u64 * *y as u64 % self.p as u64) as u32),
            (Dense::P(x), Dense::P(y)) => {
                if x.is_empty() || y.is_empty() {
                    return Dense::P(Vec::new());
                }
                let mut v = vec![self.zero(lvl - 1); x.len() + y.len() - 1];
                for (i, ci) in x.iter().enumerate() {
                    if self.is_zero(ci) {
                        continue;
                    }
                    for (j, cj) in y.iter().enumerate() {
                        if self.is_zero(cj) {
                            continue;
                        }
                        let t = self.mul(ci, cj, lvl - 1);
                        v[i + j] = self.add(&v[i + j], &t, lvl - 1);
                    }
                }
                self.trim(v)
            }
            _ => unreachable!("level mismatch"),
        }
    }

    /// Multiply a level-`lvl` element by a level-`lvl-1` coefficient.
    fn mul_coeff(&self, a: &Dense, c: &Dense, lvl: usize) -> Dense {
        let v = self.coeffs(a).iter().map(|x| self.mul(x, c, lvl - 1)).collect();
        self.trim(v)
    }

    fn shift(&self, a: &Dense, k: usize, lvl: usize) -> Dense {
        if self.is_zero(a) {
            return a.clone();
        }
        let mut v = vec![self.zero(lvl - 1); k];
        v.extend(self.coeffs(a).iter().cloned());
        Dense::P(v)
    }

    fn base_lc(&self, a: &Dense) -> u32 {
        match a {
            Dense::C(c) => *c,
            Dense::P(v) => v.last().map(|c| self.base_lc(c)).unwrap_or(0),
        }
    }

    fn scale(&self, a: &Dense, s: u32) -> Dense {
        match a {
            Dense::C(c) => Dense::C((*c as u64 * s as u64 % self.p as u64) as u32),
            Dense::P(v) => Dense::P(v.iter().map(|c| self.scale(c, s)).collect()),
        }
    }

    fn normalize(&self, a: &Dense) -> Dense {
        let l = self.base_lc(a);
        if l == 0 || l == 1 {
            return a.clone();
        }
        self.scale(a, inv_mod(l, self.p))
    }

    fn exact_div(&self, a: &Dense, b: &Dense, lvl: usize) -> Option<Dense> {
        if self.is_zero(b) {
            return None;
        }
        if lvl == 0 {
            let (Dense::C(x), Dense::C(y)) = (a, b) else { unreachable!() };
            return Some(Dense::C((*x as u64 * inv_mod(*y, self.p) as u64 % self.p as u64) as u32));
        }
        if self.is_zero(a) {
            return Some(self.zero(lvl));
        }
        let db = self.deg(b);
        if self.deg(a) < db {
            return None;
        }
        let mut q = vec![self.zero(lvl - 1); self.deg(a) - db + 1];
        let mut r = a.clone();
        while !self.is_zero(&r) && self.deg(&r) >= db {
            let c = self.exact_div(self.lc(&r), self.lc(b), lvl - 1)?;
            let d = self.deg(&r) - db;
            let t = self.shift(&self.mul_coeff(b, &c, lvl), d, lvl);
            r = self.sub(&r, &t, lvl);
            q[d] = c;
        }
        if self.is_zero(&r) {
            Some(self.trim(q))
        } else {
            None
        }
    }

    fn content(&self, a: &Dense, lvl: usize) -> Dense {
        let mut g = self.zero(lvl - 1);
        for c in self.coeffs(a) {
            if self.is_zero(c) {
                continue;
            }
            g = self.gcd(&g, c, lvl - 1);
            if self.is_unit(&g) {
                break;
            }
        }
        g
    }

    fn is_unit(&self, a: &Dense) -> bool {
        match a {
            Dense::C(c) => *c != 0,
            Dense::P(v) => v.len() == 1 && self.is_unit(&v[0]),
        }
    }

    fn primitive(&self, a: &Dense, lvl: usize) -> Dense {
        if self.is_zero(a) {
            return a.clone();
        }
        let c = self.content(a, lvl);
        let v = self
            .coeffs(a)
            .iter()
            .map(|x| self.exact_div(x, &c, lvl - 1).expect("content divides coefficients"))
            .collect();
        self.trim(v)
    }

    fn prem(&self, a: &Dense, b: &Dense, lvl: usize) -> Dense {
        let db = self.deg(b);
        let lb = self.lc(b).clone();
        let mut r = a.clone();
        while !self.is_zero(&r) && self.deg(&r) >= db {
            let lr = self.lc(&r).clone();
            let d = self.deg(&r) - db;
            let left = self.mul_coeff(&r, &lb, lvl);
            let right = self.shift(&self.mul_coeff(b, &lr, lvl), d, lvl);
            r = self.sub(&left, &right, lvl);
        }
        r
    }

    fn gcd(&self, a: &Dense, b: &Dense, lvl: usize) -> Dense {
        if lvl == 0 {
            return if self.is_zero(a) && self.is_zero(b) { Dense::C(0) } else { Dense::C(1) };
        }
        if self.is_zero(a) {
            return self.normalize(b);
        }
        if self.is_zero(b) {
            return self.normalize(a);
        }
        let ca = self.content(a, lvl);
        let cb = self.content(b, lvl);
        let c = self.gcd(&ca, &cb, lvl - 1);
        let mut f = self.primitive(a, lvl);
        let mut g = self.primitive(b, lvl);
        if self.deg(&f) < self.deg(&g) {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            if self.deg(&g) == 0 {
                g = self.constant(lvl, 1);
                break;
            }
            let r = self.prem(&f, &g, lvl);
            if self.is_zero(&r) {
                break;
            }
            f = g;
            g = self.primitive(&r, lvl);
        }
        let g = self.primitive(&g, lvl);
        self.normalize(&self.mul_coeff(&g, &c, lvl))
    }
}

/// Variables (slots) used by either polynomial.
fn active_slots(polys: &[&FpPoly]) -> Vec<usize> {
    (0..SLOTS).filter(|&s| polys.iter().any(|f| f.terms().any(|(m, _)| m.0[s] > 0))).collect()
}

fn to_dense(ar: &Arith, f: &FpPoly, slots: &[usize]) -> Dense {
    let mut d = ar.zero(slots.len());
    for (m, c) in f.terms() {
        let exps: Vec<u32> = slots.iter().map(|&s| m.0[s]).collect();
        insert(ar, &mut d, &exps, *c, slots.len());
    }
    d
}

fn insert(ar: &Arith, d: &mut Dense, exps: &[u32], c: u32, lvl: usize) {
    match d {
        Dense::C(x) => *x = ((*x as u64 + c as u64) % ar.p as u64) as u32,
        Dense::P(v) => {
            let k = exps[lvl - 1] as usize;
            while v.len() <= k {
                v.push(ar.zero(lvl - 1));
            }
            insert(ar, &mut v[k], &exps[..lvl - 1], c, lvl - 1);
        }
    }
}

fn from_dense(ar: &Arith, d: &Dense, slots: &[usize]) -> FpPoly {
    let mut terms = Vec::new();
    let mut cur = Monomial::ONE;
    collect(d, slots, slots.len(), &mut cur, &mut terms);
    FpPoly::from_terms(Fp::new(ar.p), terms)
}

fn collect(d: &Dense, slots: &[usize], lvl: usize, cur: &mut Monomial, out: &mut Vec<(Monomial, u32)>) {
    match d {
        Dense::C(c) => {
            if *c != 0 {
                out.push((*cur, *c));
            }
        }
        Dense::P(v) => {
            for (k, c) in v.iter().enumerate() {
                cur.0[slots[lvl - 1]] = k as u32;
                collect(c, slots, lvl - 1, cur, out);
            }
            cur.0[slots[lvl - 1]] = 0;
        }
    }
}

/// Greatest common divisor, normalized so that its leading coefficient in
/// the recursive order is 1. `gcd(0, 0) = 0`.
pub fn gcd(a: &FpPoly, b: &FpPoly) -> FpPoly {
    assert_eq!(a.ring(), b.ring(), "coefficient domain mismatch");
    let ar = Arith { p: a.p() };
    let slots = active_slots(&[a, b]);
    let da = to_dense(&ar, a, &slots);
    let db = to_dense(&ar, b, &slots);
    from_dense(&ar, &ar.gcd(&da, &db, slots.len()), &slots)
}

/// `a / b` when `b` divides `a` exactly.
pub fn exact_quotient(a: &FpPoly, b: &FpPoly) -> Option<FpPoly> {
    assert_eq!(a.ring(), b.ring(), "coefficient domain mismatch");
    let ar = Arith { p: a.p() };
    let slots = active_slots(&[a, b]);
    let da = to_dense(&ar, a, &slots);
    let db = to_dense(&ar, b, &slots);
    ar.exact_div(&da, &db, slots.len()).map(|q| from_dense(&ar, &q, &slots))
}
