//! Laurent series in `w` (standing for the deformation parameter) over a
//! binary field, known modulo `w^P` for an absolute precision `P`.
//!
//! A series with no precision bound is exact (a finite Laurent polynomial).
//! Products and inverses propagate precision through the valuations of the
//! operands, so a series keeps its relative precision under multiplication.

use std::collections::BTreeMap;
use std::fmt;

use super::field::{Gf, Gf2nField};
use super::laurent::Coeff;
use super::Char2Error;

/// Default absolute precision for series built from user input.
pub const DEFAULT_SERIES_PRECISION: i64 = 40;

/// Relative precision used when inverting an exact series that is not a monomial.
const EXACT_INVERSE_RELATIVE_PRECISION: i64 = DEFAULT_SERIES_PRECISION;

#[derive(Clone)]
pub struct TruncatedSeries {
    field: &'static Gf2nField,
    terms: BTreeMap<i64, Gf>,
    /// `None` means exact.
    prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn add_prec(p: Option<i64>, shift: Option<i64>) -> Option<i64> {
    match (p, shift) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

impl TruncatedSeries {
    /// Builds a series, discarding terms at or beyond the precision.
    pub fn new(
        field: &'static Gf2nField,
        terms: impl IntoIterator<Item = (i64, Gf)>,
        prec: Option<i64>,
    ) -> Self {
        let mut map: BTreeMap<i64, Gf> = BTreeMap::new();
        for (e, c) in terms {
            if prec.is_some_and(|p| e >= p) {
                continue;
            }
            let s = map.get(&e).copied().unwrap_or(field.zero()) + c;
            if s.is_zero() {
                map.remove(&e);
            } else {
                map.insert(e, s);
            }
        }
        TruncatedSeries {
            field,
            terms: map,
            prec,
        }
    }

    pub fn zero(field: &'static Gf2nField) -> Self {
        Self::new(field, [], None)
    }

    /// `c * w^exp`, known modulo `w^prec` (exact when `prec` is `None`).
    pub fn monomial(c: Gf, exp: i64, prec: Option<i64>) -> Self {
        Self::new(c.field(), [(exp, c)], prec)
    }

    /// The zero series known only modulo `w^prec`.
    pub fn big_o(field: &'static Gf2nField, prec: i64) -> Self {
        Self::new(field, [], Some(prec))
    }

    pub fn precision(&self) -> Option<i64> {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec.is_none()
    }

    /// Lowest exponent with a known nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// `valuation` when known, the precision bound when negligible, `None` for exact zero.
    fn valuation_lower_bound(&self) -> Option<i64> {
        self.valuation().or(self.prec)
    }

    pub fn leading_coefficient(&self) -> Option<Gf> {
        self.terms.values().next().copied()
    }

    pub fn coeff(&self, exp: i64) -> Gf {
        self.terms.get(&exp).copied().unwrap_or(self.field.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, Gf)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, *c))
    }

    /// Lowers the precision to `min(self.prec, prec)`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::new(self.field, self.terms(), min_prec(self.prec, Some(prec)))
    }

    /// Multiplies by `w^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::new(
            self.field,
            self.terms().map(|(e, c)| (e + k, c)),
            self.prec.map(|p| p + k),
        )
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let prec = min_prec(self.prec, rhs.prec);
        Self::new(self.field, self.terms().chain(rhs.terms()), prec)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        if Coeff::is_zero(self) || Coeff::is_zero(rhs) {
            return Self::zero(self.field);
        }
        let prec = min_prec(
            add_prec(self.prec, rhs.valuation_lower_bound()),
            add_prec(rhs.prec, self.valuation_lower_bound()),
        );
        let mut out = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea + eb;
                if prec.is_some_and(|p| e >= p) {
                    continue;
                }
                let s: Gf = out.get(&e).copied().unwrap_or(self.field.zero()) + *ca * *cb;
                out.insert(e, s);
            }
        }
        Self::new(self.field, out, prec)
    }

    /// Squaring is the Frobenius, so precision doubles.
    pub fn square(&self) -> Self {
        Self::new(
            self.field,
            self.terms().map(|(e, c)| (2 * e, c.square())),
            self.prec.map(|p| 2 * p),
        )
    }

    pub fn scale(&self, c: Gf) -> Self {
        if c.is_zero() {
            return Self::zero(self.field);
        }
        Self::new(self.field, self.terms().map(|(e, x)| (e, x * c)), self.prec)
    }

    pub fn inverse(&self) -> Result<Self, Char2Error> {
        if Coeff::is_zero(self) {
            return Err(Char2Error::DivisionByZero);
        }
        let (v, lead) = match self.terms.iter().next() {
            Some((v, c)) => (*v, *c),
            None => return Err(Char2Error::PrecisionExhausted("inverting a series that is zero to working precision".into())),
        };
        let rel = match self.prec {
            Some(p) => p - v,
            None if self.terms.len() == 1 => {
                return Ok(Self::monomial(lead.inv().expect("nonzero"), -v, None));
            }
            None => EXACT_INVERSE_RELATIVE_PRECISION,
        };
        let lead_inv = lead.inv().expect("nonzero");
        // normalized tail h with f = lead * w^v * (1 + h)
        let h: Vec<Gf> = (0..rel)
            .map(|k| self.coeff(v + k) * lead_inv)
            .collect();
        let mut s = vec![self.field.zero(); rel as usize];
        if rel > 0 {
            s[0] = self.field.one();
        }
        for k in 1..rel as usize {
            let mut acc = self.field.zero();
            for j in 1..=k {
                if !h[j].is_zero() {
                    acc += h[j] * s[k - j];
                }
            }
            s[k] = acc;
        }
        Ok(Self::new(
            self.field,
            s.into_iter()
                .enumerate()
                .map(|(k, c)| (k as i64 - v, c * lead_inv)),
            Some(rel - v),
        ))
    }

    /// Square root in `k((w))`; defined only when every known exponent is even.
    pub fn sqrt(&self) -> Result<Self, Char2Error> {
        if let Some((e, _)) = self.terms.iter().find(|(e, _)| *e % 2 != 0) {
            return Err(Char2Error::OddExponentPresent { exponent: *e });
        }
        Ok(Self::new(
            self.field,
            self.terms().map(|(e, c)| (e / 2, c.sqrt())),
            self.prec.map(|p| (p + 1).div_euclid(2)),
        ))
    }

    /// The image in `k` of a series in `k[[w]]`.
    pub fn reduce_mod_varpi(&self) -> Result<Gf, Char2Error> {
        if let Some(v) = self.valuation() {
            if v < 0 {
                return Err(Char2Error::NotIntegral { valuation: v });
            }
        }
        if self.prec.is_some_and(|p| p <= 0) {
            return Err(Char2Error::PrecisionExhausted(
                "constant term of a series known only to nonpositive precision".into(),
            ));
        }
        Ok(self.coeff(0))
    }

    /// True when every known exponent is a multiple of `d`.
    pub fn exponents_divisible_by(&self, d: i64) -> bool {
        self.terms.keys().all(|e| e % d == 0)
    }

    fn check_same(&self, rhs: &Self) {
        assert!(
            std::ptr::eq(self.field, rhs.field),
            "series over different fields"
        );
    }
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.terms == other.terms && self.prec == other.prec
    }
}

impl Coeff for TruncatedSeries {
    fn field(&self) -> &'static Gf2nField {
        self.field
    }
    fn constant(c: Gf) -> Self {
        Self::monomial(c, 0, None)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn times(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn scale(&self, c: Gf) -> Self {
        TruncatedSeries::scale(self, c)
    }
    fn square(&self) -> Self {
        TruncatedSeries::square(self)
    }
    fn inverse(&self) -> Result<Self, Char2Error> {
        TruncatedSeries::inverse(self)
    }
    fn sqrt(&self) -> Result<Self, Char2Error> {
        TruncatedSeries::sqrt(self)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }
    fn is_negligible(&self) -> bool {
        self.terms.is_empty()
    }
    fn is_one(&self) -> bool {
        self.prec.is_none() && self.terms.len() == 1 && self.coeff(0).is_one()
    }
}

/// Prints `g^3*w^-10 + w^-5 + O(w^36)`; exact series carry no `O` term.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match (*e, c.is_one()) {
                (0, _) => c.to_string(),
                (1, true) => "w".to_string(),
                (1, false) => format!("{c}*w"),
                (e, true) => format!("w^{e}"),
                (e, false) => format!("{c}*w^{e}"),
            })
            .collect();
        if let Some(p) = self.prec {
            parts.push(format!("O(w^{p})"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> &'static Gf2nField {
        Gf2nField::get(8).unwrap()
    }

    #[test]
    fn sqrt_of_monomials() {
        let w4 = TruncatedSeries::monomial(k().one(), 4, Some(40));
        let r = w4.sqrt().unwrap();
        assert_eq!(r.valuation(), Some(2));
        assert_eq!(r.precision(), Some(20));

        let w10 = TruncatedSeries::monomial(k().one(), -10, Some(40));
        let r = w10.sqrt().unwrap();
        assert_eq!(r.valuation(), Some(-5));
        assert_eq!(r.square().truncate(40), w10);
    }

    #[test]
    fn sqrt_rejects_odd_exponents() {
        let s = TruncatedSeries::new(k(), [(2, k().one()), (3, k().one())], Some(40));
        assert_eq!(
            s.sqrt(),
            Err(Char2Error::OddExponentPresent { exponent: 3 })
        );
    }

    #[test]
    fn sqrt_precision_rounds_up() {
        let s = TruncatedSeries::new(k(), [(0, k().one())], Some(41));
        assert_eq!(s.sqrt().unwrap().precision(), Some(21));
        let s = TruncatedSeries::new(k(), [(-4, k().one())], Some(-1));
        assert_eq!(s.sqrt().unwrap().precision(), Some(0));
    }

    #[test]
    fn inverse_keeps_relative_precision() {
        let mu = TruncatedSeries::new(k(), [(2, k().one()), (4, k().gen_pow(7))], Some(40));
        let inv = mu.inverse().unwrap();
        assert_eq!(inv.valuation(), Some(-2));
        assert_eq!(inv.precision(), Some(36));
        let prod = mu.mul(&inv);
        assert_eq!(prod.precision(), Some(38));
        assert_eq!(prod, TruncatedSeries::new(k(), [(0, k().one())], Some(38)));
    }

    #[test]
    fn geometric_inverse_in_characteristic_two() {
        // (1 + w)^-1 = 1 + w + w^2 + ... (signs vanish)
        let f = TruncatedSeries::new(k(), [(0, k().one()), (1, k().one())], Some(10));
        let inv = f.inverse().unwrap();
        for e in 0..10 {
            assert_eq!(inv.coeff(e), k().one());
        }
    }

    #[test]
    fn cancellation_leaves_a_negligible_remainder() {
        let a = TruncatedSeries::monomial(k().gen_pow(5), 3, Some(20));
        let s = a.add(&a);
        assert!(s.is_negligible());
        assert!(!Coeff::is_zero(&s));
        assert_eq!(s.precision(), Some(20));
        assert!(matches!(s.inverse(), Err(Char2Error::PrecisionExhausted(_))));
    }

    #[test]
    fn display_format() {
        let s = TruncatedSeries::new(k(), [(-10, k().one()), (-5, k().gen_pow(3))], Some(36));
        assert_eq!(s.to_string(), "w^-10 + g^3*w^-5 + O(w^36)");
    }
}
