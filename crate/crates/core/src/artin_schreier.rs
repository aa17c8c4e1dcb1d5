//! Artin-Schreier classes over `k((t))` (and `k((w))((t))`): standard forms,
//! ramification breaks, and the Galois group of the closure over `k((s))`,
//! `s = t^3`.
//!
//! Representatives are Laurent polynomials in `t^-1`: the stored exponent `d`
//! is the pole order, so `t^-5` is stored at exponent 5.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::char2::{Char2Error, Coeff, Gf, LaurentPolynomial, Variable};

/// An arbitrary representative of a class in `L / (F - 1) L`.
pub type ASRepresentative<C> = LaurentPolynomial<C>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AsError {
    #[error("leading coefficient {coefficient} of t^-{degree} is not a square")]
    NonSquareLeadingCoefficient { degree: i64, coefficient: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("classification mismatch: degree criterion says A4 = {criterion}, rank d = {rank}")]
    InconsistentClassification { criterion: bool, rank: u32 },
    #[error("{0} does not give rise to an A4-extension")]
    NotA4(String),
    #[error(transparent)]
    Char2(#[from] Char2Error),
}

/// The canonical representative: odd pole orders only, no integral part.
#[derive(Clone, PartialEq, Debug)]
pub struct StandardForm<C> {
    poly: LaurentPolynomial<C>,
    brk: u32,
}

impl<C: Coeff> StandardForm<C> {
    pub fn poly(&self) -> &LaurentPolynomial<C> {
        &self.poly
    }

    /// The ramification break; 0 for the split class.
    pub fn break_(&self) -> u32 {
        self.brk
    }

    pub fn is_trivial(&self) -> bool {
        self.brk == 0
    }

    /// Coefficient of `t^-degree`, if present.
    pub fn coeff(&self, degree: i64) -> Option<&C> {
        self.poly.coeff(degree)
    }

    /// Pole orders that occur, highest first.
    pub fn degrees(&self) -> Vec<i64> {
        self.poly.terms().rev().map(|(d, _)| d).collect()
    }
}

impl<C: Coeff> fmt::Display for StandardForm<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// Reduces `a` to standard form.
///
/// Each even pole order `d` with coefficient `c` is replaced, via
/// `a + b^2 - b` with `b = sqrt(c) t^(-d/2)`, by `sqrt(c) t^(-d/2)`; degrees
/// are processed from the top so every pole order strictly decreases.
/// Nonnegative degrees are dropped (they are Artin-Schreier trivial over an
/// algebraically closed residue field). Over series coefficients, terms that
/// are zero to working precision are dropped, and an undetermined term above
/// the resulting break is a precision failure.
pub fn to_standard_form<C: Coeff>(a: &ASRepresentative<C>) -> Result<StandardForm<C>, AsError> {
    let var = match a.var() {
        Variable::UInv => Variable::UInv,
        _ => Variable::TInv,
    };
    let mut p = a.filter(|d| d > 0).relabel(var);
    let Some(top) = p.max_exp() else {
        return Ok(StandardForm { poly: p, brk: 0 });
    };
    for d in (2..=top).rev() {
        if d % 2 != 0 {
            continue;
        }
        let Some(c) = p.remove(d) else { continue };
        if c.is_negligible() {
            p.add_term(d, &c);
            continue;
        }
        let root = c.sqrt().map_err(|e| match e {
            Char2Error::OddExponentPresent { .. } => AsError::NonSquareLeadingCoefficient {
                degree: d,
                coefficient: c.to_string(),
            },
            other => AsError::Char2(other),
        })?;
        p.add_term(d / 2, &root);
    }
    let brk = p
        .terms()
        .rev()
        .find(|(_, c)| c.is_certainly_nonzero())
        .map_or(0, |(d, _)| d);
    if let Some((d, c)) = p.terms().rev().find(|(d, c)| *d > brk && c.is_negligible()) {
        return Err(AsError::PrecisionExhausted(format!(
            "coefficient {c} of pole order {d} is undetermined above break {brk}"
        )));
    }
    let poly = p.without_negligible();
    debug_assert!(poly.terms().all(|(d, _)| d % 2 == 1));
    Ok(StandardForm {
        poly,
        brk: brk as u32,
    })
}

/// `sigma^j(a)` for `sigma: t -> zeta3 t`; the coefficient of `t^-i` picks up
/// `zeta3^(-i j)`.
pub fn conjugate<C: Coeff>(a: &ASRepresentative<C>, j: i64) -> ASRepresentative<C> {
    let Some((_, c)) = a.leading() else {
        return a.clone();
    };
    let zeta = c.field().zeta3();
    a.twist(zeta, -j.rem_euclid(3))
}

/// Flattens a standard form over `GF(2^n)` into a set of `(degree, bit)`
/// coordinates of an `F_2`-vector.
fn bit_support(sf: &StandardForm<Gf>) -> BTreeSet<(i64, u32)> {
    sf.poly()
        .terms()
        .flat_map(|(d, c)| {
            let bits = c.bits();
            (0..32).filter(move |b| bits >> b & 1 == 1).map(move |b| (d, b))
        })
        .collect()
}

/// `F_2`-dimension of the span of the classes of `a`, `sigma(a)`, `sigma^2(a)`.
pub fn class_dimension(a: &ASRepresentative<Gf>) -> Result<u32, AsError> {
    let mut basis: Vec<BTreeSet<(i64, u32)>> = Vec::new();
    for j in 0..3 {
        let mut v = bit_support(&to_standard_form(&conjugate(a, j))?);
        for b in &basis {
            let pivot = b.last().expect("basis vectors are nonzero");
            if v.contains(pivot) {
                v = v.symmetric_difference(b).copied().collect();
            }
        }
        if !v.is_empty() {
            basis.push(v);
            // keep pivots distinct: reduce older vectors by the new pivot
            let n = basis.len();
            let pivot = *basis[n - 1].last().expect("nonzero");
            for i in 0..n - 1 {
                if basis[i].contains(&pivot) {
                    basis[i] = basis[i].symmetric_difference(&basis[n - 1]).copied().collect();
                }
            }
            basis.sort_by_key(|b| *b.last().expect("nonzero"));
        }
    }
    Ok(basis.len() as u32)
}

/// Galois group of the closure `N / K` of the tower `K ⊂ L ⊂ M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum GaloisType {
    /// `d = 0`: `M = L`.
    SplitOverL,
    /// `d = 1`: `Z/2 x Z/3`.
    C6,
    /// `d = 2`.
    A4,
    /// `d = 3`: `(Z/2)^3 ⋊ Z/3`.
    E8byC3,
}

impl GaloisType {
    pub fn from_dimension(d: u32) -> GaloisType {
        match d {
            0 => GaloisType::SplitOverL,
            1 => GaloisType::C6,
            2 => GaloisType::A4,
            3 => GaloisType::E8byC3,
            _ => unreachable!("at most three generators"),
        }
    }

    pub fn dimension(self) -> u32 {
        match self {
            GaloisType::SplitOverL => 0,
            GaloisType::C6 => 1,
            GaloisType::A4 => 2,
            GaloisType::E8byC3 => 3,
        }
    }
}

impl fmt::Display for GaloisType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GaloisType::SplitOverL => "split over L (Z/3)",
            GaloisType::C6 => "C6",
            GaloisType::A4 => "A4",
            GaloisType::E8byC3 => "(Z/2)^3 x| Z/3",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub standard_form: StandardForm<Gf>,
    pub dimension: u32,
    pub galois_type: GaloisType,
}

impl Classification {
    pub fn break_(&self) -> u32 {
        self.standard_form.break_()
    }
}

/// A nonzero standard form gives rise to an `A4`-extension exactly when no
/// occurring degree is divisible by 3.
pub fn satisfies_a4_degree_criterion<C: Coeff>(sf: &StandardForm<C>) -> bool {
    !sf.is_trivial() && sf.poly().terms().all(|(d, _)| d % 3 != 0)
}

pub fn classify(a: &ASRepresentative<Gf>) -> Result<Classification, AsError> {
    let standard_form = to_standard_form(a)?;
    let dimension = class_dimension(a)?;
    let criterion = satisfies_a4_degree_criterion(&standard_form);
    if criterion != (dimension == 2) {
        return Err(AsError::InconsistentClassification {
            criterion,
            rank: dimension,
        });
    }
    Ok(Classification {
        standard_form,
        dimension,
        galois_type: GaloisType::from_dimension(dimension),
    })
}

/// Breaks of `A4`-extensions are `1` or `5` mod 6. Rejects non-`A4` input.
pub fn break_mod6_check(sf: &StandardForm<Gf>) -> Result<bool, AsError> {
    let c = classify(sf.poly())?;
    if c.galois_type != GaloisType::A4 {
        return Err(AsError::NotA4(sf.to_string()));
    }
    Ok(matches!(sf.break_() % 6, 1 | 5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char2::{Gf2nField, TruncatedSeries};

    fn k() -> &'static Gf2nField {
        Gf2nField::get(8).unwrap()
    }

    fn rep(terms: &[(i64, Gf)]) -> ASRepresentative<Gf> {
        LaurentPolynomial::from_terms(Variable::TInv, terms.iter().copied())
    }

    #[test]
    fn t_minus_two_reduces_to_t_minus_one() {
        let sf = to_standard_form(&rep(&[(2, k().one())])).unwrap();
        assert_eq!(sf.poly(), &rep(&[(1, k().one())]));
        assert_eq!(sf.break_(), 1);
    }

    #[test]
    fn standard_input_is_unchanged() {
        let a = rep(&[(7, k().one())]);
        let sf = to_standard_form(&a).unwrap();
        assert_eq!(sf.poly(), &a);
        assert_eq!(sf.break_(), 7);
    }

    #[test]
    fn t_minus_four_plus_t_minus_one_is_split() {
        let sf = to_standard_form(&rep(&[(4, k().one()), (1, k().one())])).unwrap();
        assert!(sf.is_trivial());
        assert_eq!(sf.break_(), 0);
    }

    #[test]
    fn integral_terms_are_dropped() {
        let sf = to_standard_form(&rep(&[(3, k().one()), (0, k().gen_pow(4)), (-2, k().one())]))
            .unwrap();
        assert_eq!(sf.poly(), &rep(&[(3, k().one())]));
    }

    #[test]
    fn conjugation_scales_by_zeta_powers() {
        let z = k().zeta3();
        assert_eq!(conjugate(&rep(&[(1, k().one())]), 1), rep(&[(1, z.square())]));
        assert_eq!(conjugate(&rep(&[(3, k().one())]), 1), rep(&[(3, k().one())]));
    }

    #[test]
    fn dimensions_of_small_monomials() {
        assert_eq!(class_dimension(&rep(&[(1, k().one())])).unwrap(), 2);
        assert_eq!(class_dimension(&rep(&[(3, k().one())])).unwrap(), 1);
        assert_eq!(class_dimension(&rep(&[])).unwrap(), 0);
    }

    #[test]
    fn classify_examples() {
        let c = classify(&rep(&[(5, k().one())])).unwrap();
        assert_eq!(c.galois_type, GaloisType::A4);
        assert_eq!(c.break_(), 5);
        assert_eq!(classify(&rep(&[(3, k().one())])).unwrap().galois_type, GaloisType::C6);
        let c = classify(&rep(&[(9, k().one()), (1, k().one())])).unwrap();
        assert_ne!(c.galois_type, GaloisType::A4);
        assert_eq!(c.galois_type, GaloisType::E8byC3);
    }

    #[test]
    fn mod6_check() {
        let sf = |d| to_standard_form(&rep(&[(d, k().one())])).unwrap();
        assert!(break_mod6_check(&sf(7)).unwrap());
        assert!(break_mod6_check(&sf(1)).unwrap());
        assert!(matches!(break_mod6_check(&sf(3)), Err(AsError::NotA4(_))));
    }

    #[test]
    fn series_coefficients_need_square_leading_terms() {
        let c = TruncatedSeries::new(k(), [(-3, k().one())], Some(40));
        let a = LaurentPolynomial::monomial(Variable::TInv, 2, c);
        assert!(matches!(
            to_standard_form(&a),
            Err(AsError::NonSquareLeadingCoefficient { degree: 2, .. })
        ));
        let c = TruncatedSeries::new(k(), [(-10, k().one())], Some(40));
        let sf = to_standard_form(&LaurentPolynomial::monomial(Variable::TInv, 2, c)).unwrap();
        assert_eq!(sf.break_(), 1);
        assert_eq!(sf.coeff(1).unwrap().valuation(), Some(-5));
    }

    #[test]
    fn undetermined_top_term_is_a_precision_failure() {
        let f = k();
        let lost = TruncatedSeries::big_o(f, 3);
        let a = LaurentPolynomial::from_terms(
            Variable::TInv,
            [(5, lost), (1, TruncatedSeries::monomial(f.one(), 0, Some(40)))],
        );
        assert!(matches!(to_standard_form(&a), Err(AsError::PrecisionExhausted(_))));
    }
}
