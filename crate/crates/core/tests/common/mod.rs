//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::collections::BTreeMap;

use a4lift::char2::{Coeff, Gf, Gf2nField, LaurentPolynomial, TruncatedSeries, Variable};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn k8() -> &'static Gf2nField {
    Gf2nField::get(8).unwrap()
}

pub fn k4() -> &'static Gf2nField {
    Gf2nField::get(4).unwrap()
}

pub fn random_element(rng: &mut StdRng, k: &'static Gf2nField) -> Gf {
    k.from_bits(rng.gen_range(0..k.size())).unwrap()
}

pub fn random_nonzero(rng: &mut StdRng, k: &'static Gf2nField) -> Gf {
    k.from_bits(rng.gen_range(1..k.size())).unwrap()
}

/// Breaks that an A4 standard form can have, in `[lo, hi]`.
pub fn a4_breaks(lo: u32, hi: u32) -> Vec<u32> {
    (lo..=hi).filter(|d| d % 2 == 1 && d % 3 != 0).collect()
}

/// A random A4 standard form of break `nu`: odd degrees prime to 3, top
/// coefficient nonzero, lower ones zero about half the time.
pub fn random_a4_form(rng: &mut StdRng, k: &'static Gf2nField, nu: u32) -> LaurentPolynomial<Gf> {
    let mut p = LaurentPolynomial::monomial(Variable::TInv, i64::from(nu), random_nonzero(rng, k));
    for d in 1..i64::from(nu) {
        if d % 2 == 1 && d % 3 != 0 && rng.gen_bool(0.5) {
            p.add_term(d, &random_element(rng, k));
        }
    }
    p
}

/// An arbitrary representative: any pole orders up to `max_pole`, a few
/// integral terms thrown in.
pub fn random_representative(rng: &mut StdRng, k: &'static Gf2nField, max_pole: i64) -> LaurentPolynomial<Gf> {
    let mut p = LaurentPolynomial::zero(Variable::TInv);
    let count = rng.gen_range(0..=6);
    for _ in 0..count {
        let d = rng.gen_range(-3..=max_pole);
        p.add_term(d, &random_nonzero(rng, k));
    }
    p
}

/// Polynomial in `t^-1` with terms as a map `pole order -> coefficient`.
pub fn to_map(p: &LaurentPolynomial<Gf>) -> BTreeMap<i64, Gf> {
    p.terms().map(|(d, c)| (d, *c)).collect()
}

/// Square root in `GF(2^n)` as `x^(2^(n-1))`.
pub fn field_sqrt(x: Gf) -> Gf {
    let mut y = x;
    for _ in 1..x.field().degree() {
        y = y * y;
    }
    y
}

/// Naive reduction: drop integral terms; while some pole order `d` is even,
/// replace the highest such `c t^-d` by `sqrt(c) t^-(d/2)`.
pub fn naive_reduce(mut p: BTreeMap<i64, Gf>) -> BTreeMap<i64, Gf> {
    loop {
        p.retain(|d, c| *d > 0 && !c.is_zero());
        let Some((&d, &c)) = p.iter().rev().find(|(d, _)| **d % 2 == 0) else {
            return p;
        };
        p.remove(&d);
        let entry = p.entry(d / 2).or_insert(c.field().zero());
        *entry += field_sqrt(c);
    }
}

/// `sigma^j(a)`: the coefficient of `t^-i` times `zeta3^(-i j)`.
pub fn naive_conjugate(p: &BTreeMap<i64, Gf>, j: i64) -> BTreeMap<i64, Gf> {
    p.iter()
        .map(|(&d, &c)| {
            let z = c.field().zeta3();
            (d, c * z.pow((-d * j).rem_euclid(3)))
        })
        .collect()
}

fn map_add(a: &BTreeMap<i64, Gf>, b: &BTreeMap<i64, Gf>) -> BTreeMap<i64, Gf> {
    let mut out = a.clone();
    for (&d, &c) in b {
        let e = out.entry(d).or_insert(c.field().zero());
        *e += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Dimension of the span of `a, sigma a, sigma^2 a` modulo Artin-Schreier
/// equivalence, by counting which of the 8 `F_2`-combinations are trivial.
pub fn brute_force_dimension(a: &LaurentPolynomial<Gf>) -> u32 {
    let a = to_map(a);
    let conj: Vec<_> = (0..3).map(|j| naive_conjugate(&a, j)).collect();
    let mut trivial = 0u32;
    for mask in 0..8u32 {
        let mut s = BTreeMap::new();
        for (j, c) in conj.iter().enumerate() {
            if mask >> j & 1 == 1 {
                s = map_add(&s, c);
            }
        }
        if naive_reduce(s).is_empty() {
            trivial += 1;
        }
    }
    // the trivial combinations form a subspace of dimension 3 - d
    3 - trivial.trailing_zeros()
}

/// Agreement of two truncated series below the smaller precision.
pub fn series_agree(x: &TruncatedSeries, y: &TruncatedSeries) -> bool {
    let p = match (x.precision(), y.precision()) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return x == y,
    };
    x.truncate(p).terms().eq(y.truncate(p).terms())
}

/// `w^e` with the given precision.
pub fn varpi_pow(k: &'static Gf2nField, e: i64, prec: i64) -> TruncatedSeries {
    TruncatedSeries::monomial(k.one(), e, Some(prec))
}

/// `x^k` for a truncated series, `k` possibly negative.
pub fn series_pow(x: &TruncatedSeries, k: i64) -> TruncatedSeries {
    let base = if k < 0 { x.inverse().unwrap() } else { x.clone() };
    let mut out = TruncatedSeries::monomial(x.field().one(), 0, None);
    for _ in 0..k.abs() {
        out = out.mul(&base);
    }
    out
}

pub fn lift_const(c: Gf) -> TruncatedSeries {
    TruncatedSeries::monomial(c, 0, None)
}

/// Whether a Laurent polynomial over series has only negligible coefficients
/// at exponents below `bound`.
pub fn negligible_below<C: Coeff>(p: &LaurentPolynomial<C>, bound: i64) -> bool {
    p.terms().all(|(e, c)| e >= bound || c.is_negligible())
}
