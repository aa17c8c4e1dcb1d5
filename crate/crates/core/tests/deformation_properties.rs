mod common;

use a4lift::artin_schreier::{satisfies_a4_degree_criterion, to_standard_form, StandardForm};
use a4lift::char2::{Gf, LaurentPolynomial, Place, TruncatedSeries, Variable};
use a4lift::cli::certificate::DeformationRecord;
use a4lift::deformation::{
    default_mu, different_via_serre, verify_deformation, DeformError, DeformationParams, DeformationResult,
};
use common::*;
use rand::Rng;

fn run(a: &LaurentPolynomial<Gf>, precision: i64) -> DeformationResult {
    let sf = to_standard_form(a).unwrap();
    let params = DeformationParams::new(sf, default_mu(k8(), precision)).unwrap();
    verify_deformation(&params).unwrap()
}

fn exact_varpi(e: i64) -> TruncatedSeries {
    TruncatedSeries::monomial(k8().one(), e, None)
}

/// Principal part of `a~` at `(t)`, from the geometric series
/// `t^6 / (t^6 + mu^6) = sum_k (t^6 / mu^6)^(k+1)`, with `mu = w^2`: the
/// term `c t^-d` contributes `c mu^(-6(k+1)) t^-(d - 6 - 6k)`.
fn oracle_at_t(a: &LaurentPolynomial<Gf>) -> LaurentPolynomial<TruncatedSeries> {
    let mut out = LaurentPolynomial::zero(Variable::TInv);
    for (d, c) in a.terms() {
        let mut k = 0;
        while d - 6 - 6 * k > 0 {
            out.add_term(d - 6 - 6 * k, &exact_varpi(-12 * (k + 1)).scale(*c));
            k += 1;
        }
    }
    out
}

/// With `t0 = zeta3^-alpha mu` and `x = u / mu`, `t^6 + mu^6 = mu^4 u^2 (1 + x^2 + x^4)`
/// and `a t^6 = N0 (1 + x + O(x^2))` where `N0 = sum c_d t0^(6-d)`. Hence the
/// principal part is `N0 mu^-4 u^-2 + N0 mu^-5 u^-1`, the standard form is
/// `(N0 mu^-5 + sqrt(N0) mu^-2) u^-1` and the leading datum is `N0 mu^-3`.
struct LinearOracle {
    n0: TruncatedSeries,
    sqrt_n0: TruncatedSeries,
}

impl LinearOracle {
    fn new(a: &LaurentPolynomial<Gf>, alpha: i64) -> Self {
        let z = k8().zeta3();
        let mut n0 = TruncatedSeries::zero(k8());
        let mut sqrt_n0 = TruncatedSeries::zero(k8());
        for (d, c) in a.terms() {
            let coeff = *c * z.pow(alpha * d);
            n0 = n0.add(&exact_varpi(2 * (6 - d)).scale(coeff));
            sqrt_n0 = sqrt_n0.add(&exact_varpi(6 - d).scale(field_sqrt(coeff)));
        }
        LinearOracle { n0, sqrt_n0 }
    }

    fn standard_coefficient(&self) -> TruncatedSeries {
        self.n0.shift(-10).add(&self.sqrt_n0.shift(-4))
    }

    fn leading_datum(&self) -> TruncatedSeries {
        self.n0.shift(-6)
    }
}

fn check_against_oracles(a: &LaurentPolynomial<Gf>, r: &DeformationResult) {
    let nu = r.nu;
    assert_eq!(r.branch_breaks(), vec![nu - 6, 1, 1, 1], "a = {a}");
    assert_eq!(r.branches.iter().map(|b| b.pole_order).collect::<Vec<_>>(), vec![i64::from(nu) - 6, 2, 2, 2]);
    for b in &r.branches {
        assert_eq!(b.conjugate_breaks, [b.brk; 3], "a = {a}, place {}", b.label());
        assert!(b.all_conjugates_ramify);
    }
    assert_eq!(different_via_serre(&r.branches), 3 * (nu + 1));
    assert_eq!(r.different_generic, 3 * (nu + 1));
    assert_eq!(r.different_special, 3 * (nu + 1));

    // generic representative at (t)
    let want = oracle_at_t(a);
    let got = r.generic_rep_at_t.poly();
    assert_eq!(want.max_exp(), got.max_exp());
    for d in 1..=i64::from(nu) {
        let zero = TruncatedSeries::zero(k8());
        let (w, g) = (want.coeff(d).unwrap_or(&zero), got.coeff(d).unwrap_or(&zero));
        assert!(series_agree(w, g), "a = {a}, t^-{d}: oracle {w}, computed {g}");
    }
    assert!(satisfies_a4_degree_criterion(&r.generic_rep_at_t));

    // the three linear places
    for b in &r.branches[1..] {
        let Place::AtLinear { alpha, .. } = &b.place else {
            panic!("expected a linear place")
        };
        let o = LinearOracle::new(a, i64::from(*alpha));
        let got = b.standard_form.coeff(1).expect("break 1");
        assert!(series_agree(got, &o.standard_coefficient()), "a = {a}, alpha = {alpha}");
        assert!(got.valuation().unwrap() < got.precision().unwrap());
        let c = b.leading_datum.as_ref().unwrap();
        assert!(series_agree(c, &o.leading_datum()), "a = {a}, alpha = {alpha}");
        assert_eq!(c.valuation(), o.leading_datum().valuation());
        assert!(c.exponents_divisible_by(4));
    }

    // reduction mod w is a, exactly
    let num = r.reduction.numerator();
    let den = r.reduction.denominator();
    assert_eq!(den, &LaurentPolynomial::monomial(Variable::T, i64::from(nu), k8().one()));
    let want = LaurentPolynomial::from_terms(Variable::T, a.terms().map(|(d, c)| (i64::from(nu) - d, *c)));
    assert_eq!(num, &want);
}

#[test]
fn random_a4_forms_deform_as_predicted() {
    let mut rng = rng(31);
    let breaks = a4_breaks(7, 41);
    for i in 0..50 {
        let nu = if i < breaks.len() { breaks[i] } else { breaks[rng.gen_range(0..breaks.len())] };
        let a = random_a4_form(&mut rng, k8(), nu);
        let r = run(&a, 40);
        check_against_oracles(&a, &r);
        assert!(DeformationRecord::new(&r).pass);
        assert_eq!(r.next_source.break_(), nu - 6);
    }
}

#[test]
fn verdicts_stable_when_precision_increases() {
    let mut rng = rng(32);
    let breaks = a4_breaks(7, 41);
    for _ in 0..20 {
        let nu = breaks[rng.gen_range(0..breaks.len())];
        let a = random_a4_form(&mut rng, k8(), nu);
        let (lo, hi) = (run(&a, 40), run(&a, 50));
        assert_eq!(lo.branch_breaks(), hi.branch_breaks());
        assert_eq!(lo.different_generic, hi.different_generic);
        assert_eq!(lo.next_source, hi.next_source);
        assert_eq!(lo.leading_data_in_w4(), hi.leading_data_in_w4());
        assert_eq!(DeformationRecord::new(&lo).checks, DeformationRecord::new(&hi).checks);
        for (x, y) in lo.branches.iter().zip(&hi.branches) {
            assert!(series_agree(x.standard_form.coeff(i64::from(x.brk)).unwrap(), y.standard_form.coeff(i64::from(y.brk)).unwrap()));
        }
    }
}

#[test]
fn worked_examples() {
    let k = k8();
    let mono = |d: i64| LaurentPolynomial::monomial(Variable::TInv, d, k.one());
    let r = run(&mono(7), 40);
    assert_eq!(r.a_tilde.to_string(), "1 / (t^7 + (w^12 + O(w^88))*t)");
    assert_eq!(r.different_generic, 24);
    assert_eq!(r.generic_break(), 1);
    let alpha3 = &r.branches[3];
    // u^-2 coefficient mu^-5, leading datum mu^-4
    assert_eq!(alpha3.leading_datum.as_ref().unwrap().valuation(), Some(-8));

    let r = run(&mono(13), 40);
    assert_eq!(r.branch_breaks(), vec![7, 1, 1, 1]);
    assert_eq!(r.different_generic, 42);

    let mut rng = rng(33);
    let a = random_a4_form(&mut rng, k, 31);
    let r = run(&a, 40);
    assert_eq!(r.generic_break(), 25);
    check_against_oracles(&a, &r);
}

#[test]
fn invalid_parameters() {
    let k = k8();
    let sf = |d: i64| -> StandardForm<Gf> { to_standard_form(&LaurentPolynomial::monomial(Variable::TInv, d, k.one())).unwrap() };
    let mu = default_mu(k, 40);
    assert!(matches!(DeformationParams::new(sf(5), mu.clone()), Err(DeformError::BreakTooSmall { nu: 5 })));
    assert!(matches!(DeformationParams::new(sf(9), mu.clone()), Err(DeformError::NotA4(_))));
    assert!(matches!(
        DeformationParams::new(sf(7), TruncatedSeries::big_o(k, 40)),
        Err(DeformError::InvalidMu(_))
    ));
    let odd = TruncatedSeries::new(k, [(2, k.one()), (3, k.one())], Some(40));
    assert!(matches!(DeformationParams::new(sf(7), odd), Err(DeformError::InvalidMu(_))));
    let unit = TruncatedSeries::new(k, [(0, k.one())], Some(40));
    assert!(matches!(DeformationParams::new(sf(7), unit), Err(DeformError::InvalidMu(_))));
    assert_eq!(different_via_serre(&[]), 0);
}

#[test]
fn other_mu_values() {
    let k = k8();
    let g = k.generator();
    let a = LaurentPolynomial::from_terms(Variable::TInv, [(13, g), (5, k.one())]);
    for mu in [
        TruncatedSeries::new(k, [(2, g)], Some(40)),
        TruncatedSeries::new(k, [(4, k.one()), (6, g.pow(7))], Some(40)),
    ] {
        let params = DeformationParams::new(to_standard_form(&a).unwrap(), mu).unwrap();
        let r = verify_deformation(&params).unwrap();
        assert_eq!(r.branch_breaks(), vec![7, 1, 1, 1]);
        assert_eq!(r.different_generic, 42);
        assert!(r.leading_data_in_w4());
    }
}
